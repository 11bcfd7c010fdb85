"""Dirichlet fundamental domains and the frequency parameter domain.

The Dirichlet domain of a crystal group about a point ``a`` with trivial
stabilizer is the set of points strictly nearer to ``a`` than to any other
orbit point ``g a``.  For the dual group ``Gamma*`` that domain ``R`` and its
point-group images ``L R`` tile a fundamental set for the dual lattice; the
union (with a deterministic choice of boundary points) is the parameter
domain over which the induced representations are indexed.

Boundary rule: a coset ``nu + L*`` that meets the open union ``Pi R`` is
represented by that (unique) point.  A coset that only meets the boundary is
represented by the lexicographically smallest of its points in the closure.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import (
    BISECTOR_TOL,
    BOUNDARY_TOL,
    CUTOFF_MAX_DOUBLINGS,
    LATTICE_TOL,
    default_center,
)
from .crystal import GroupElement
from .errors import (
    DegenerateBisector,
    DimensionMismatch,
    EmptyInterior,
    NontrivialStabilizer,
    NotInOpenCopies,
    ReductionFailed,
    Unbounded,
    UnboundedAfterCutoff,
)
from .affine import apply


@dataclass(frozen=True)
class HalfSpace:
    """``{y : normal . y < offset}`` (open) or ``<=`` (closed); the normal is unit length."""

    normal: np.ndarray
    offset: float
    open: bool = True

    def __post_init__(self):
        n = np.array(self.normal, dtype=float)
        norm = np.linalg.norm(n)
        if norm <= 1e-12:
            raise ValueError("half-space normal is zero")
        n = n / norm
        n.setflags(write=False)
        object.__setattr__(self, "normal", n)
        object.__setattr__(self, "offset", float(self.offset) / norm)

    def margin(self, y):
        """Signed distance to the boundary; positive inside."""
        return self.offset - np.asarray(y, dtype=float) @ self.normal

    def contains(self, y, tol=BOUNDARY_TOL):
        m = self.margin(y)
        return m > tol if self.open else m >= -tol


def bisector_halfspace(a, g):
    """Open half-space of points strictly nearer ``a`` than ``g a``."""
    a = np.asarray(a, dtype=float)
    ga = apply(g, a)
    return _bisector(a, ga)


def _bisector(a, ga):
    d = ga - a
    if np.linalg.norm(d) <= BISECTOR_TOL:
        raise DegenerateBisector("isometry fixes the centre point")
    mid = 0.5 * (a + ga)
    return HalfSpace(d, float(d @ mid), open=True)


class HPolytope:
    """Intersection of half-spaces, stored as ``A y < b`` with unit-norm rows of ``A``."""

    def __init__(self, halfspaces, dim=None, interior_point=None):
        halfspaces = list(halfspaces)
        if dim is None:
            if not halfspaces:
                raise ValueError("dimension required for an empty half-space list")
            dim = halfspaces[0].normal.size
        for h in halfspaces:
            if h.normal.size != dim:
                raise DimensionMismatch("half-space of wrong dimension")
        self.halfspaces = tuple(halfspaces)
        self.dim = dim
        self.A = np.array([h.normal for h in halfspaces], dtype=float).reshape(-1, dim)
        self.b = np.array([h.offset for h in halfspaces], dtype=float)
        self.interior_point = None if interior_point is None else np.asarray(interior_point, dtype=float)

    def __len__(self):
        return len(self.halfspaces)

    def margins(self, y):
        """Per-constraint margins ``b - A y``; ``y`` may carry leading batch axes."""
        y = np.asarray(y, dtype=float)
        return self.b - y @ self.A.T

    def min_margin(self, y):
        m = self.margins(y)
        if m.shape[-1] == 0:
            return np.full(m.shape[:-1], np.inf)
        return m.min(axis=-1)

    def contains_open(self, y, tol=BOUNDARY_TOL):
        return self.min_margin(y) > tol

    def contains_closed(self, y, tol=BOUNDARY_TOL):
        return self.min_margin(y) >= -tol

    def transformed(self, L):
        """Image ``L P`` under an orthogonal matrix."""
        L = np.asarray(L, dtype=float)
        hs = [HalfSpace(L @ h.normal, h.offset, h.open) for h in self.halfspaces]
        ip = None if self.interior_point is None else L @ self.interior_point
        return HPolytope(hs, self.dim, ip)

    def vertices(self):
        return vertices(self)

    def circumradius(self, center=None):
        v = vertices(self)
        c = self.interior_point if center is None else np.asarray(center, dtype=float)
        return float(np.max(np.linalg.norm(v - c, axis=1)))


def _bounded_2d(A):
    """A nonempty 2-D polyhedron ``A y <= b`` is bounded iff its normals leave no angular gap >= pi."""
    if A.shape[0] < 3:
        return False
    ang = np.sort(np.arctan2(A[:, 1], A[:, 0]))
    gaps = np.diff(np.concatenate([ang, [ang[0] + 2 * np.pi]]))
    return bool(np.max(gaps) < np.pi - 1e-12)


def _dedupe(points, tol):
    out = []
    for p in points:
        if not any(np.max(np.abs(p - q)) <= tol for q in out):
            out.append(p)
    return out


def vertices_2d(p, tol=BOUNDARY_TOL):
    """Counter-clockwise vertex cycle of a bounded 2-D polytope."""
    if p.dim != 2:
        raise DimensionMismatch("vertices_2d needs a 2-D polytope")
    A, b = p.A, p.b
    if not _bounded_2d(A):
        raise Unbounded("half-spaces do not bound a region")
    cand = []
    m = A.shape[0]
    for i in range(m):
        for j in range(i + 1, m):
            M = np.array([A[i], A[j]])
            det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
            if abs(det) <= 1e-14:
                continue
            v = np.linalg.solve(M, [b[i], b[j]])
            if np.min(b - A @ v) >= -tol:
                cand.append(v)
    verts = _dedupe(cand, tol)
    if len(verts) < 3:
        raise EmptyInterior("half-spaces have empty interior")
    verts = np.array(verts)
    c = verts.mean(axis=0)
    order = np.argsort(np.arctan2(verts[:, 1] - c[1], verts[:, 0] - c[0]))
    verts = verts[order]
    if _shoelace(verts) <= 1e-14:
        raise EmptyInterior("half-spaces have empty interior")
    # Drop points lying in the middle of an edge.
    keep = []
    k = len(verts)
    for i in range(k):
        prev, cur, nxt = verts[i - 1], verts[i], verts[(i + 1) % k]
        cross = (cur[0] - prev[0]) * (nxt[1] - cur[1]) - (cur[1] - prev[1]) * (nxt[0] - cur[0])
        if abs(cross) > 1e-12:
            keep.append(cur)
    return np.array(keep)


def _vertices_nd(p, tol=BOUNDARY_TOL):
    from scipy.spatial import HalfspaceIntersection

    if p.interior_point is None or not np.all(p.contains_open(p.interior_point, tol=0.0)):
        raise EmptyInterior("an interior point is required for vertex enumeration")
    hs = np.hstack([p.A, -p.b[:, None]])
    try:
        hi = HalfspaceIntersection(hs, p.interior_point)
    except Exception as exc:  # qhull raises its own error type
        raise Unbounded(f"vertex enumeration failed: {exc}") from None
    v = hi.intersections
    if not np.all(np.isfinite(v)) or np.max(np.abs(v)) > 1e8:
        raise Unbounded("half-spaces do not bound a region")
    return np.array(_dedupe(list(v), tol))


def _vertices_1d(p):
    lo, hi = -np.inf, np.inf
    for a, b in zip(p.A[:, 0], p.b):
        if a > 0:
            hi = min(hi, b / a)
        else:
            lo = max(lo, b / a)
    if not (np.isfinite(lo) and np.isfinite(hi)):
        raise Unbounded("interval is unbounded")
    if hi - lo <= 1e-14:
        raise EmptyInterior("interval is empty")
    return np.array([[lo], [hi]])


def vertices(p):
    if p.dim == 1:
        return _vertices_1d(p)
    if p.dim == 2:
        return vertices_2d(p)
    return _vertices_nd(p)


def _shoelace(v):
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def area_2d(p):
    """Area of a bounded 2-D polytope."""
    return abs(_shoelace(vertices_2d(p)))


# -- Dirichlet domains -----------------------------------------------------


def orbit_points(g, a, cutoff):
    """Group elements ``h`` with ``|h a - a| <= cutoff`` together with ``h a``.

    Elements are ``[x_L + y, L]``; ``h a = L(a + x_L + y)`` so for each ``L``
    only lattice vectors near ``L^{-1} a - a - x_L`` can qualify.
    """
    a = np.asarray(a, dtype=float)
    out = []
    for i, L in enumerate(g.pg.elements):
        v = a + g.shifts[i]
        ks = g.lat.points_near(L.T @ a - v, cutoff)
        if len(ks) == 0:
            continue
        pts = (v + ks @ g.lat.basis.T) @ L.T
        for k, p in zip(ks, pts):
            out.append((GroupElement(i, k), p))
    return out


def _prune(halfspaces, verts, dim, tol=1e-7):
    keep = []
    for h in halfspaces:
        on = np.abs(h.margin(verts)) <= tol
        if np.count_nonzero(on) >= dim and not any(
            np.max(np.abs(h.normal - q.normal)) <= 1e-12 and abs(h.offset - q.offset) <= 1e-12 for q in keep
        ):
            keep.append(h)
    return keep


def dirichlet_domain(g, a=None, cutoff=None):
    """Dirichlet domain ``D(a)`` of a crystal group, as a pruned H-polytope.

    Bisectors are collected for all elements moving ``a`` by at most
    ``cutoff``; the cutoff doubles until the domain's circumradius ``r`` about
    ``a`` satisfies ``2 r < cutoff``, at which point no farther orbit point can
    contribute a facet.
    """
    n = g.dim
    a = np.asarray(default_center(n) if a is None else a, dtype=float)
    if a.shape != (n,):
        raise DimensionMismatch("centre has wrong dimension")
    if cutoff is None:
        cutoff = 3.0 * float(np.max(np.linalg.norm(g.lat.basis, axis=0)))
    if cutoff <= 0:
        raise ValueError("cutoff must be positive")
    for e, p in orbit_points(g, a, max(BISECTOR_TOL, 1e-9)):
        if e != g.identity():
            raise NontrivialStabilizer(f"element {e} fixes the centre {a.tolist()}")
    for _ in range(CUTOFF_MAX_DOUBLINGS + 1):
        hs = []
        for e, p in orbit_points(g, a, cutoff):
            if e == g.identity():
                continue
            hs.append(_bisector(a, p))
        poly = HPolytope(hs, n, interior_point=a)
        try:
            verts = vertices(poly)
        except (Unbounded, EmptyInterior):
            cutoff *= 2.0
            continue
        r = float(np.max(np.linalg.norm(verts - a, axis=1)))
        if 2.0 * r < cutoff:
            return HPolytope(_prune(hs, verts, n), n, interior_point=a)
        cutoff *= 2.0
    raise UnboundedAfterCutoff(f"domain not certified complete at cutoff {cutoff}")


# -- parameter domain ------------------------------------------------------


def _lex_key(v):
    return tuple(np.round(np.asarray(v, dtype=float), 9).tolist())


@dataclass
class ParamDomain:
    """Dirichlet domain ``R`` of the dual group and its point-group copies."""

    group: object
    gstar: object
    R: HPolytope
    center: np.ndarray
    pi_copies: list = field(default_factory=list)

    def __post_init__(self):
        self.center = np.asarray(self.center, dtype=float)
        self.radius = self.R.circumradius(self.center)
        self.dual = self.gstar.lat
        # Every point of the closure of Pi R lies within this distance of the origin.
        self.bound = float(np.linalg.norm(self.center) + self.radius)
        half_diag = 0.5 * float(np.sum(np.linalg.norm(self.dual.basis, axis=0)))
        self._offsets = self.dual.points_near(np.zeros(self.dim), self.bound + half_diag + 1e-6)

    @property
    def dim(self):
        return self.group.dim

    @property
    def pg(self):
        return self.group.pg

    # membership ---------------------------------------------------------

    def copy_margins(self, nu):
        """Minimum margin of ``nu`` in each copy ``L R``; shape ``(..., |Pi|)``."""
        return np.stack([c.min_margin(nu) for c in self.pi_copies], axis=-1)

    def in_open_copies(self, nu, tol=BOUNDARY_TOL):
        return np.max(self.copy_margins(nu), axis=-1) > tol

    def in_closure(self, nu, tol=BOUNDARY_TOL):
        return np.max(self.copy_margins(nu), axis=-1) >= -tol

    def closure_candidates(self, nu, tol=BOUNDARY_TOL):
        """All points of ``nu + L*`` inside the closure of ``Pi R``."""
        nu = np.asarray(nu, dtype=float)
        w = self.dual.reduce(nu)
        cands = w + self._offsets @ self.dual.basis.T
        cands = cands[np.linalg.norm(cands, axis=1) <= self.bound + 1e-6]
        if len(cands) == 0:
            return cands
        return cands[self.in_closure(cands, tol)]

    def contains(self, nu):
        """Membership in the parameter domain, boundary rule included."""
        nu = np.asarray(nu, dtype=float)
        rep = reduce_to_param(self, nu)
        return bool(np.max(np.abs(rep - nu)) <= LATTICE_TOL)

    def area(self):
        return len(self.pg) * area_2d(self.R)

    def bounding_box(self):
        if self.dim == 2:
            v = np.vstack([vertices_2d(c) for c in self.pi_copies])
            return v.min(axis=0), v.max(axis=0)
        return -np.full(self.dim, self.bound), np.full(self.dim, self.bound)


def build_param_domain(g, a=None):
    """Parameter domain for the frequencies of ``g``: ``R = D(a)`` for ``Gamma*`` plus ``{L R}``."""
    gstar = g.dual()
    a = np.asarray(default_center(g.dim) if a is None else a, dtype=float)
    R = dirichlet_domain(gstar, a)
    copies = [R.transformed(L) for L in g.pg.elements]
    return ParamDomain(group=g, gstar=gstar, R=R, center=a, pi_copies=copies)


def reduce_to_param(pd, nu, tol=BOUNDARY_TOL):
    """The unique representative of ``nu + L*`` in the parameter domain."""
    nu = np.asarray(nu, dtype=float)
    cands = pd.closure_candidates(nu, tol)
    if len(cands) == 0:
        raise ReductionFailed(f"no translate of {nu.tolist()} meets the closed parameter domain")
    inner = cands[pd.in_open_copies(cands, tol)]
    if len(inner) == 1:
        return inner[0]
    if len(inner) > 1:
        raise ReductionFailed("two translates lie in the open parameter domain; copies overlap")
    return min(cands, key=_lex_key)


def pi_action_param(pd, L, omega):
    """Point-group action on parameters: reduce ``L omega`` back into the domain."""
    omega = np.asarray(omega, dtype=float)
    return reduce_to_param(pd, pd.pg[L] @ omega)


def lambda_split(pd, nu, tol=BOUNDARY_TOL):
    """``(L, r)`` with ``r`` in the open domain ``R`` and ``L r = nu``."""
    nu = np.asarray(nu, dtype=float)
    for i, L in enumerate(pd.pg.elements):
        r = L.T @ nu
        if pd.R.contains_open(r, tol):
            return i, r
    raise NotInOpenCopies(f"{nu.tolist()} is not in any open copy L R")


def stabilizer_pi(pd, omega):
    """Point-group elements fixing the character of ``omega``: ``L omega - omega`` in ``L*``."""
    omega = np.asarray(omega, dtype=float)
    return [i for i, L in enumerate(pd.pg.elements) if pd.dual.coords_of(L @ omega - omega) is not None]


def interior_grid(pd, m, margin=1e-3):
    """``m * m`` (2-D) or ``m**n`` deterministic sample points strictly inside ``R``."""
    want = m ** pd.dim
    if pd.dim == 2:
        v = vertices_2d(pd.R)
        lo, hi = v.min(axis=0), v.max(axis=0)
    else:
        lo, hi = pd.center - pd.radius, pd.center + pd.radius
    res = m
    while True:
        axes = [lo[d] + (hi[d] - lo[d]) * (np.arange(res) + 0.5) / res for d in range(pd.dim)]
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, pd.dim)
        inside = grid[pd.R.contains_open(grid, tol=margin)]
        if len(inside) >= want:
            idx = np.round(np.linspace(0, len(inside) - 1, want)).astype(int)
            return inside[idx]
        res += 1


def sample_interior(pd, count, rng, margin=1e-6):
    """Uniform random points strictly inside ``R`` by rejection sampling."""
    if pd.dim == 2:
        v = vertices_2d(pd.R)
        lo, hi = v.min(axis=0), v.max(axis=0)
    else:
        lo, hi = pd.center - pd.radius, pd.center + pd.radius
    out = []
    while len(out) < count:
        pts = rng.uniform(lo, hi, size=(4 * count, pd.dim))
        out.extend(pts[pd.R.contains_open(pts, tol=margin)])
    return np.array(out[:count])


# -- Monte Carlo checks ----------------------------------------------------


def tiling_check(pd, points, boundary_tol=1e-7):
    """Reduce points into the closed domain via ``Gamma*`` and count representatives.

    Returns a dict with the number of points whose representative in ``R`` is
    unique, the number flagged as within ``boundary_tol`` of a facet, and the
    number with zero or several interior representatives (failures).
    """
    pts = np.asarray(points, dtype=float)
    dual = pd.dual
    R = pd.R
    half_diag = 0.5 * float(np.sum(np.linalg.norm(dual.basis, axis=0)))
    offsets = dual.points_near(np.zeros(pd.dim), pd.radius + half_diag + 1e-6) @ dual.basis.T
    inside = np.zeros(len(pts), dtype=int)
    near = np.zeros(len(pts), dtype=bool)
    for L in pd.pg.elements:
        u = pts - L.T @ pd.center
        base = pts - (u - dual.reduce(u))
        cand = base[:, None, :] + offsets[None, :, :]
        img = cand @ L.T
        m = R.min_margin(img)
        near |= np.any(np.abs(m) <= boundary_tol, axis=1)
        inside += np.count_nonzero(m > boundary_tol, axis=1)
    ok = ~near
    return {
        "total": int(len(pts)),
        "unique": int(np.count_nonzero(ok & (inside == 1))),
        "boundary": int(np.count_nonzero(near)),
        "failures": int(np.count_nonzero(ok & (inside != 1))),
    }


def copies_overlap_count(pd, points, tol=BOUNDARY_TOL):
    """How many sample points lie in two or more open copies ``L R``."""
    m = pd.copy_margins(np.asarray(points, dtype=float))
    return int(np.count_nonzero(np.count_nonzero(m > tol, axis=-1) >= 2))


def boundary_fraction(pd, points, tol=BOUNDARY_TOL):
    """Fraction of points in the closure of ``Pi R`` but not in the open union."""
    pts = np.asarray(points, dtype=float)
    closed = pd.in_closure(pts, tol)
    if len(pts) == 0:
        return 0.0
    return float(np.count_nonzero(closed & ~pd.in_open_copies(pts, 0.0))) / len(pts)


def union_area_mc(pd, count, rng):
    """Monte Carlo area of the union of the copies ``L R`` (2-D)."""
    lo, hi = pd.bounding_box()
    pts = rng.uniform(lo, hi, size=(count, pd.dim))
    frac = np.count_nonzero(pd.in_open_copies(pts, 0.0)) / count
    return float(frac * np.prod(hi - lo))
