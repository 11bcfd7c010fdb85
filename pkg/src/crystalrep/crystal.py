"""Crystallographic groups in coset-normal form.

Every element of a crystal group is written as ``[x_L + y, L]`` with ``L`` in
the point group, ``x_L`` the cross-section shift for ``L`` and ``y`` a lattice
vector.  Elements are stored as ``(L_index, k)`` where ``k`` are the integer
coordinates of ``y``; this makes membership and the quotient map exact.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .affine import AffineIsometry, compose, inverse, is_orthogonal
from .config import GROUP_TOL, LATTICE_TOL, MATRIX_MATCH_TOL, POINT_GROUP_MAX_ORDER
from .errors import (
    BadCrossSection,
    CocycleNotInLattice,
    DimensionMismatch,
    LatticeNotInvariant,
    PointGroupNotClosed,
    UnknownGroupName,
)
from .lattice import Lattice, LatticePoint, dual_lattice


class PointGroup:
    """Finite subgroup of O(n) with precomputed multiplication and inverse tables.

    Element 0 is always the identity.  The order of ``elements`` fixes the
    basis order of every matrix representation built on top of the group.
    """

    def __init__(self, matrices, tol=MATRIX_MATCH_TOL):
        mats = [np.array(m, dtype=float) for m in matrices]
        if not mats:
            raise ValueError("point group needs at least the identity")
        n = mats[0].shape[0]
        for m in mats:
            if m.shape != (n, n):
                raise DimensionMismatch("point-group matrices have inconsistent shapes")
            if not is_orthogonal(m, tol=1e-10):
                raise ValueError(f"point-group matrix {m.tolist()} is not orthogonal")
        if np.max(np.abs(mats[0] - np.eye(n))) > tol:
            raise ValueError("element 0 of a point group must be the identity")
        for m in mats:
            m.setflags(write=False)
        self.elements = tuple(mats)
        self.dim = n
        self._tol = tol
        size = len(mats)
        mult = np.empty((size, size), dtype=int)
        for i, a in enumerate(mats):
            for j, b in enumerate(mats):
                idx = self.index_of(a @ b)
                if idx is None:
                    raise PointGroupNotClosed(f"product of elements {i} and {j} is not in the group")
                mult[i, j] = idx
        inv = np.empty(size, dtype=int)
        for i in range(size):
            hits = np.nonzero(mult[i] == 0)[0]
            if hits.size != 1:
                raise PointGroupNotClosed(f"element {i} has no unique inverse")
            inv[i] = hits[0]
        mult.setflags(write=False)
        inv.setflags(write=False)
        self.mult_table = mult
        self.inv_table = inv

    @classmethod
    def generate(cls, generators, max_order=POINT_GROUP_MAX_ORDER, tol=MATRIX_MATCH_TOL):
        """Close a set of generator matrices under multiplication.

        Elements are listed in breadth-first discovery order starting from the
        identity, right-multiplying by the generators in the given order.
        """
        gens = [np.array(g, dtype=float) for g in generators]
        if not gens:
            raise ValueError("need at least one generator (use the identity for a trivial group)")
        n = gens[0].shape[0]
        for g in gens:
            if not is_orthogonal(g, tol=1e-10):
                raise ValueError(f"generator {g.tolist()} is not orthogonal")
        found = [np.eye(n)]
        frontier = [np.eye(n)]
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    c = a @ g
                    if not any(np.max(np.abs(c - f)) <= tol for f in found):
                        found.append(c)
                        nxt.append(c)
                        if len(found) > max_order:
                            raise PointGroupNotClosed(
                                f"generators produce more than {max_order} elements"
                            )
            frontier = nxt
        # Snap entries that are numerically 0, +-1, +-1/2 to kill drift from repeated products.
        return cls([_snap(m) for m in found], tol=tol)

    def __len__(self):
        return len(self.elements)

    def index_of(self, matrix, tol=None):
        tol = self._tol if tol is None else tol
        m = np.asarray(matrix, dtype=float)
        for i, e in enumerate(self.elements):
            if np.max(np.abs(e - m)) <= tol:
                return i
        return None

    def mul(self, i, j):
        return int(self.mult_table[i, j])

    def inv(self, i):
        return int(self.inv_table[i])

    def __getitem__(self, i):
        return self.elements[i]

    def __repr__(self):
        return f"PointGroup(order={len(self)}, dim={self.dim})"


def _snap(m, tol=1e-12):
    m = np.array(m, dtype=float)
    for v in (0.0, 1.0, -1.0, 0.5, -0.5):
        m[np.abs(m - v) <= tol] = v
    return m


@dataclass(frozen=True)
class GroupElement:
    """The element ``[x_L + B k, L]`` of a crystal group."""

    L_index: int
    k: tuple

    def __post_init__(self):
        object.__setattr__(self, "L_index", int(self.L_index))
        object.__setattr__(self, "k", tuple(int(v) for v in self.k))


class CrystalGroup:
    """Lattice + point group + cross-section, validated on construction.

    ``shifts[i]`` is the vector ``x_L`` with ``gamma(L) = [x_L, L]`` for the
    point-group element ``L = pg[i]``; ``shifts[0]`` must be zero.
    """

    def __init__(self, lat, pg, shifts, name="", validate=True):
        if not isinstance(lat, Lattice):
            lat = Lattice(lat)
        if lat.dim != pg.dim:
            raise DimensionMismatch("lattice and point group dimensions differ")
        shifts = np.array(shifts, dtype=float).reshape(len(pg), lat.dim)
        shifts.setflags(write=False)
        self.lat = lat
        self.pg = pg
        self.shifts = shifts
        self.name = name
        self._gamma = tuple(AffineIsometry(shifts[i], pg[i], check=False) for i in range(len(pg)))
        if validate:
            self.validate()

    @property
    def dim(self):
        return self.lat.dim

    @property
    def order(self):
        return len(self.pg)

    def __repr__(self):
        return f"CrystalGroup({self.name!r}, |Pi|={self.order}, dim={self.dim})"

    def validate(self):
        if np.max(np.abs(self.shifts[0])) > GROUP_TOL:
            raise BadCrossSection("gamma(id) must be [0, id]")
        for i, L in enumerate(self.pg.elements):
            for j, b in enumerate(self.lat.basis.T):
                if self.lat.coords_of(L @ b) is None:
                    raise LatticeNotInvariant(i, j)
        for i in range(self.order):
            for j in range(self.order):
                self.cocycle(i, j)
        return self

    # -- cross-section -------------------------------------------------

    def gamma(self, L):
        return self._gamma[L]

    def embed(self, e):
        """The affine isometry ``[x_L + B k, L]`` denoted by a group element."""
        y = self.lat.vector(e.k)
        return AffineIsometry(self.shifts[e.L_index] + y, self.pg[e.L_index], check=False)

    def cocycle(self, L, M):
        """``alpha(L, M)`` defined by ``gamma(L) gamma(M) = gamma(LM) alpha(L, M)``."""
        LM = self.pg.mul(L, M)
        prod = compose(inverse(self._gamma[LM]), compose(self._gamma[L], self._gamma[M]))
        if not prod.is_translation(tol=LATTICE_TOL):
            raise CocycleNotInLattice(L, M, "orthogonal part is not the identity")
        k = self.lat.coords_of(prod.t)
        if k is None:
            raise CocycleNotInLattice(L, M, f"translation {prod.t.tolist()}")
        return LatticePoint(k, prod.t)

    # -- elements ------------------------------------------------------

    def identity(self):
        return GroupElement(0, (0,) * self.dim)

    def translation(self, k):
        return GroupElement(0, k)

    def gamma_element(self, L):
        return GroupElement(L, (0,) * self.dim)

    def membership(self, a, tol=LATTICE_TOL):
        """Coset form ``(L, k)`` of an affine isometry, or ``None`` when it is not in the group."""
        if a.dim != self.dim:
            raise DimensionMismatch("isometry and group dimensions differ")
        L = self.pg.index_of(a.L, tol=tol)
        if L is None:
            return None
        k = self.lat.coords_of(a.t - self.shifts[L], tol=tol)
        if k is None:
            return None
        return GroupElement(L, k)

    def multiply(self, e1, e2):
        prod = compose(self.embed(e1), self.embed(e2))
        out = self.membership(prod)
        if out is None:
            raise CocycleNotInLattice(e1.L_index, e2.L_index, "product left the group")
        return out

    def invert(self, e):
        out = self.membership(inverse(self.embed(e)))
        if out is None:
            raise CocycleNotInLattice(e.L_index, self.pg.inv(e.L_index), "inverse left the group")
        return out

    def random_element(self, rng, spread=3):
        L = int(rng.integers(self.order))
        k = rng.integers(-spread, spread + 1, size=self.dim)
        return GroupElement(L, k)

    def is_symmorphic(self):
        return is_symmorphic(self)

    def dual(self):
        return dual_crystal_group(self)

    def conjugation_action(self, L, y):
        return conjugation_action(self, L, y)


def build_crystal_group(lat, pg, cs, name=""):
    """Validate and assemble a crystal group.

    ``cs`` is either an ``(|Pi|, n)`` array of shifts or a mapping from
    point-group index to shift (missing entries default to zero).
    """
    if isinstance(cs, dict):
        if not isinstance(lat, Lattice):
            lat = Lattice(lat)
        shifts = np.zeros((len(pg), lat.dim))
        for i, v in cs.items():
            shifts[int(i)] = v
        cs = shifts
    return CrystalGroup(lat, pg, cs, name=name, validate=True)


def quotient_Q(e):
    """Point-group part of an element: ``Q([x, L]) = L``."""
    return e.L_index


def membership(g, a):
    return g.membership(a)


def cocycle(g, L, M):
    return g.cocycle(L, M)


def is_symmorphic(g):
    """True when ``[0, L]`` lies in the group for every point-group element ``L``."""
    return all(g.membership(AffineIsometry.linear(L)) is not None for L in g.pg.elements)


def conjugation_action(g, L, y):
    """Lattice point ``L y``, i.e. the translation part of ``gamma(L) [y, id] gamma(L)^{-1}``."""
    y = y.k if isinstance(y, LatticePoint) else tuple(y)
    x = g.pg[L] @ g.lat.vector(y)
    k = g.lat.coords_of(x)
    if k is None:
        raise LatticeNotInvariant(L, -1)
    return LatticePoint(k, x)


def dual_crystal_group(g):
    """``{[z, L] : z in L*, L in Pi}`` with the all-zero cross-section."""
    lat = dual_lattice(g.lat)
    name = f"{g.name}*" if g.name else "dual"
    return CrystalGroup(lat, g.pg, np.zeros((g.order, g.dim)), name=name, validate=True)


# -- catalog ---------------------------------------------------------------

_SIGMA = np.diag([1.0, -1.0])
_ROT90 = np.array([[0.0, -1.0], [1.0, 0.0]])


def _p1():
    return CrystalGroup(Lattice(np.eye(2)), PointGroup([np.eye(2)]), np.zeros((1, 2)), name="p1")


def _pm():
    pg = PointGroup([np.eye(2), _SIGMA])
    return CrystalGroup(Lattice(np.eye(2)), pg, np.zeros((2, 2)), name="pm")


def _pg():
    pg = PointGroup([np.eye(2), _SIGMA])
    return CrystalGroup(Lattice(np.eye(2)), pg, [[0.0, 0.0], [0.5, 0.0]], name="pg")


def _p4m():
    # Unit square lattice; mirrors along both axes and both diagonals.
    pg = PointGroup.generate([_ROT90, _SIGMA])
    return CrystalGroup(Lattice(np.eye(2)), pg, np.zeros((len(pg), 2)), name="p4m")


_CATALOG = {"p1": _p1, "pm": _pm, "pg": _pg, "p4m": _p4m}
CATALOG_NAMES = tuple(_CATALOG)


def catalog(name):
    """Built-in wallpaper groups: ``p1``, ``pm``, ``pg`` and ``p4m``."""
    try:
        return _CATALOG[name]()
    except KeyError:
        raise UnknownGroupName(f"unknown group {name!r}; choose from {', '.join(CATALOG_NAMES)}") from None
