"""The intertwiner chain from the Fourier-side representation to a direct integral.

The frequency-side representation acts on functions on ``R^n`` by
``(pi_hat[x, L] phi)(omega) = chi_{L^{-1} omega}(x) phi(L^{-1} omega)``.
The chain rho, eps, Theta, Xi, V turns such a function into a field
``c(omega, M, w)`` over ``Omega x Pi x L*`` on which the group acts as
``U^{chi_omega} kron I``.  Everything here works on a finite model: a
point-group-invariant ball ``S`` of dual-lattice points and a finite set of
``omega`` samples.  Fields are arrays of shape ``(n_omega, |Pi|, |S|)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import subspace_angles

from .config import INVARIANCE_TOL, TENSOR_FORM_TOL, UNITARY_TOL
from .errors import DimensionMismatch, NonOrthonormalBasis, TruncationNotInvariant
from .lattice import character_eval
from .rep import InducedRepContext, commutant_dimension, generating_set, induced_rep


# -- test functions on the frequency side ----------------------------------


class FrequencyFunction:
    """A closed-form function of the frequency, vectorized over leading axes."""

    def __init__(self, func, tag=""):
        self.func = func
        self.tag = tag

    def __call__(self, omega):
        return np.asarray(self.func(np.asarray(omega, dtype=float)), dtype=complex)

    def __repr__(self):
        return f"FrequencyFunction({self.tag!r})"

    @classmethod
    def gaussian(cls):
        return cls(lambda w: np.exp(-np.pi * np.sum(w * w, axis=-1)), "gaussian")

    @classmethod
    def bump(cls, radius=1.5, center=None):
        """Smooth bump ``exp(-1/(1 - |w - c|^2/r^2))`` supported in a ball."""

        def f(w):
            c = 0.0 if center is None else np.asarray(center, dtype=float)
            s = np.sum((w - c) ** 2, axis=-1) / radius**2
            out = np.zeros(s.shape)
            inside = s < 1.0
            out[inside] = np.exp(-1.0 / (1.0 - s[inside]))
            return out

        return cls(f, f"bump(r={radius})")


def _element_parts(g, e):
    a = g.embed(e)
    return a.t, a.L


def pi_hat_apply(g, e, phi):
    """``omega -> chi_{L^{-1} omega}(x) phi(L^{-1} omega)`` for ``e = [x, L]``."""
    x, L = _element_parts(g, e)

    def f(w):
        v = w @ L  # row-vector form of L^{-1} w
        return character_eval(v, x) * phi(v)

    return FrequencyFunction(f, f"pi_hat[{e.L_index},{e.k}]({phi.tag})")


def rho_eval(g, phi, omega, z, M):
    """``rho(phi)(omega, [z, M]) = phi(M omega + z)``."""
    omega = np.asarray(omega, dtype=float)
    return phi(omega @ g.pg[M].T + np.asarray(z, dtype=float))


def m1_eval(g, e, psi, omega, z, M):
    """``chi_z(L x) chi_omega(M^{-1} L x) psi(omega, L^{-1} z, L^{-1} M)``.

    ``psi`` is any evaluator ``(omega, z, M_index) -> complex``.
    """
    x, L = _element_parts(g, e)
    Lx = L @ x
    z = np.asarray(z, dtype=float)
    omega = np.asarray(omega, dtype=float)
    Mm = g.pg[M]
    Linv = g.pg.inv(e.L_index)
    phase = character_eval(z, Lx) * character_eval(omega, Mm.T @ Lx)
    return phase * psi(omega, L.T @ z, g.pg.mul(Linv, M))


# -- the finite model ------------------------------------------------------


class Truncation:
    """Dual-lattice ball ``S`` (point-group invariant) and frequency samples."""

    def __init__(self, g, radius, omegas, pd=None, margin=0.0):
        self.group = g
        self.radius = float(radius)
        dual = g.lat.dual()
        self.dual = dual
        self.coords = dual.points_near(np.zeros(g.dim), radius)
        self.points = self.coords @ dual.basis.T
        self.omegas = np.atleast_2d(np.asarray(omegas, dtype=float))
        if self.omegas.shape[1] != g.dim:
            raise DimensionMismatch("frequency samples have wrong dimension")
        if pd is not None and not np.all(pd.R.contains_open(self.omegas, tol=margin)):
            raise ValueError("frequency samples must lie strictly inside R")
        index = {tuple(k): i for i, k in enumerate(self.coords.tolist())}
        perm = np.empty((g.order, len(self.coords)), dtype=int)
        for L, mat in enumerate(g.pg.elements):
            for i, z in enumerate(self.points):
                k = dual.coords_of(mat @ z)
                if k is None or k not in index:
                    raise TruncationNotInvariant(f"point-group element {L} moves {z.tolist()} out of S")
                perm[L, i] = index[k]
        # perm[L, s] is the index of L z_s.
        self.perm = perm

    @property
    def size(self):
        return len(self.points)

    @property
    def shape(self):
        return (len(self.omegas), self.group.order, self.size)


def check_invariant(g, tr):
    if tr.perm.shape[0] != g.order:
        raise TruncationNotInvariant("truncation built for a different group")


@dataclass(frozen=True)
class SampledField:
    """Field values ``c[omega-sample, M, z]`` on a truncation."""

    c: np.ndarray
    tr: Truncation

    def __post_init__(self):
        c = np.array(self.c, dtype=complex)
        if c.shape != self.tr.shape:
            raise DimensionMismatch(f"field of shape {c.shape} for truncation {self.tr.shape}")
        if not np.all(np.isfinite(c)):
            raise ValueError("field entries must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "c", c)

    def norm(self):
        return float(np.linalg.norm(self.c))


def sigma1_apply(g, e, field, omegas):
    """``(omega, M) <- chi_omega(M^{-1} L x) old(omega, L^{-1} M)``; extra trailing axes ride along."""
    x, L = _element_parts(g, e)
    Lx = L @ x
    field = np.asarray(field, dtype=complex)
    omegas = np.atleast_2d(omegas)
    Linv = g.pg.inv(e.L_index)
    out = np.empty_like(field)
    for M, Mm in enumerate(g.pg.elements):
        ph = character_eval(omegas, Mm.T @ Lx)
        ph = ph.reshape(ph.shape + (1,) * (field.ndim - 2))
        out[:, M] = ph * field[:, g.pg.mul(Linv, M)]
    return out


def sigma2_apply(g, e, vec, tr):
    """``z <- chi_{L^{-1} z}(x) old(L^{-1} z)`` along the last axis."""
    check_invariant(g, tr)
    x, L = _element_parts(g, e)
    vec = np.asarray(vec, dtype=complex)
    src = tr.perm[g.pg.inv(e.L_index)]
    ph = character_eval(tr.points @ L, x)  # rows of points @ L are L^{-1} z
    return ph * vec[..., src]


def theta_apply(g, field, omegas, direction="fwd"):
    """Multiply entry ``(omega, M)`` by ``exp(-+2 pi i omega . x_M)``."""
    sign = _sign(direction)
    field = np.asarray(field, dtype=complex)
    omegas = np.atleast_2d(omegas)
    ph = np.exp(-sign * 2j * np.pi * omegas @ g.shifts.T)
    return field * ph.reshape(ph.shape + (1,) * (field.ndim - 2))


def v_apply(g, field, tr, direction="fwd"):
    """Forward: ``new(omega, M, w) = exp(-2 pi i w . x_M) old(omega, M, M w)``."""
    check_invariant(g, tr)
    field = np.asarray(field, dtype=complex)
    out = np.empty_like(field)
    if _sign(direction) > 0:
        for M in range(g.order):
            ph = np.exp(-2j * np.pi * tr.points @ g.shifts[M])
            out[:, M] = ph * field[:, M][..., tr.perm[M]]
    else:
        for M in range(g.order):
            ph = np.exp(2j * np.pi * tr.points @ g.shifts[M])
            inv = np.argsort(tr.perm[M])
            out[:, M] = (ph * field[:, M])[..., inv]
    return out


def _sign(direction):
    if direction in ("fwd", "forward", +1):
        return 1
    if direction in ("inv", "inverse", -1):
        return -1
    raise ValueError(f"direction must be 'fwd' or 'inv', got {direction!r}")


def rho_sample(g, phi, tr):
    """``rho(phi)`` on the model, indexed ``[omega, z, M]``."""
    w = tr.omegas[:, None, None, :]
    z = tr.points[None, :, None, :]
    mats = np.stack(g.pg.elements)  # (|Pi|, n, n)
    Mw = np.einsum("mij,wj->wmi", mats, tr.omegas)[:, None, :, :]
    return phi(Mw + z + 0 * w)


def eps_apply(psi):
    """Reindex ``[omega, z, M]`` to ``[omega, M, z]``."""
    return np.transpose(np.asarray(psi), (0, 2, 1))


def eps_inverse(c):
    return np.transpose(np.asarray(c), (0, 2, 1))


def xi_apply(c):
    """Pure relabeling: on the model the tensor layout is already ``(omega, M, z)``."""
    return np.asarray(c)


def chain_staged(g, phi, tr):
    """``V Xi Theta eps rho`` applied stage by stage."""
    c = eps_apply(rho_sample(g, phi, tr))
    c = theta_apply(g, c, tr.omegas, "fwd")
    c = xi_apply(c)
    return v_apply(g, c, tr, "fwd")


def chain_closed_form(g, phi, tr):
    """``c(omega, M, w) = exp(-2 pi i (omega + w) . x_M) phi(M (omega + w))``."""
    s = tr.omegas[:, None, :] + tr.points[None, :, :]  # (W, S, n)
    mats = np.stack(g.pg.elements)
    arg = np.einsum("mij,wsj->wmsi", mats, s)
    phase = np.exp(-2j * np.pi * np.einsum("wsj,mj->wms", s, g.shifts))
    return phase * phi(arg)


def chain_forward(g, phi, tr, check=True):
    """Closed-form chain output, cross-checked against the staged pipeline."""
    c = chain_closed_form(g, phi, tr)
    if check:
        staged = chain_staged(g, phi, tr)
        err = float(np.max(np.abs(c - staged))) if c.size else 0.0
        if err > 1e-12:
            raise AssertionError(f"closed form and staged chain differ by {err:.3e}")
    return SampledField(c, tr)


def tau_apply(g, e, f):
    """Apply ``U^{chi_omega}[e]`` to the ``M`` index of each ``omega`` slice."""
    out = np.empty_like(f.c)
    for i, w in enumerate(f.tr.omegas):
        U = induced_rep(InducedRepContext(g, w), e)
        out[i] = U @ f.c[i]
    return SampledField(out, f.tr)


def intertwining_residual(g, e, phi, tr):
    """``max |chain(pi_hat[e] phi) - tau[e] chain(phi)|``."""
    lhs = chain_forward(g, pi_hat_apply(g, e, phi), tr).c
    rhs = tau_apply(g, e, chain_forward(g, phi, tr)).c
    return float(np.max(np.abs(lhs - rhs))) if lhs.size else 0.0


# -- range functions -------------------------------------------------------


class RangeFunction:
    """Per-sample orthonormal bases of subspaces of ``C^{Pi x S}``.

    Vector index of ``(M, s)`` is ``M * |S| + s`` so ``U kron I_S`` acts on it.
    """

    def __init__(self, bases, n_pi, n_s, factor=None, tol=UNITARY_TOL):
        self.n_pi = int(n_pi)
        self.n_s = int(n_s)
        d = self.n_pi * self.n_s
        out = []
        for B in bases:
            B = np.asarray(B, dtype=complex).reshape(d, -1)
            if B.shape[1]:
                err = np.max(np.abs(B.conj().T @ B - np.eye(B.shape[1])))
                if err > tol:
                    raise NonOrthonormalBasis(f"basis columns deviate from orthonormal by {err:.3e}")
            out.append(B)
        self.bases = out
        self.factor = factor

    @classmethod
    def from_tensor(cls, factors, n_pi):
        """``J(omega) = l2(Pi) kron F(omega)`` from per-sample bases of ``F``."""
        factors = [np.asarray(F, dtype=complex) for F in factors]
        n_s = factors[0].shape[0]
        bases = [np.kron(np.eye(n_pi), F) for F in factors]
        return cls(bases, n_pi, n_s, factor=factors)

    def __len__(self):
        return len(self.bases)

    def dims(self):
        return [B.shape[1] for B in self.bases]


def orthonormalize(B):
    """Orthonormal basis of the column span (rank decided at 1e-10)."""
    B = np.asarray(B, dtype=complex)
    if B.shape[1] == 0:
        return B
    u, s, _ = np.linalg.svd(B, full_matrices=False)
    return u[:, s > 1e-10]


def range_projection(rf):
    """``P(omega) = B B^*`` for each sample."""
    return [B @ B.conj().T for B in rf.bases]


def invariance_report(rf, g, elements, tr, threshold=INVARIANCE_TOL):
    """Max-abs commutator ``[P(omega), U[e] kron I_S]`` over samples and elements."""
    if len(rf) != len(tr.omegas):
        raise DimensionMismatch("range function and truncation have different sample counts")
    worst = 0.0
    where = None
    eye = np.eye(rf.n_s)
    for i, (P, w) in enumerate(zip(range_projection(rf), tr.omegas)):
        ctx = InducedRepContext(g, w)
        for e in elements:
            A = np.kron(induced_rep(ctx, e), eye)
            r = float(np.max(np.abs(P @ A - A @ P)))
            if r > worst or where is None:
                worst, where = r, (i, e)
    return {
        "residual": worst,
        "threshold": threshold,
        "invariant": worst <= threshold,
        "worst_sample": None if where is None else int(where[0]),
        "worst_element": None if where is None else [where[1].L_index, list(where[1].k)],
    }


def tensor_form_check(rf, i, tol=TENSOR_FORM_TOL):
    """Basis of ``F`` with ``J(omega_i) = l2(Pi) kron F``, or ``None`` if no such ``F`` exists."""
    P = range_projection(rf)[i]
    n_pi, n_s = rf.n_pi, rf.n_s
    Q = np.einsum("iaib->ab", P.reshape(n_pi, n_s, n_pi, n_s)) / n_pi
    if np.max(np.abs(Q @ Q - Q)) > tol or np.max(np.abs(Q - Q.conj().T)) > tol:
        return None
    if np.max(np.abs(P - np.kron(np.eye(n_pi), Q))) > tol:
        return None
    vals, vecs = np.linalg.eigh(Q)
    return vecs[:, vals > 0.5]


def principal_angle(A, B):
    """Largest principal angle between two column spans (0 for two empty spans)."""
    if A.shape[1] != B.shape[1]:
        return float(np.pi / 2)
    if A.shape[1] == 0:
        return 0.0
    return float(np.max(subspace_angles(A, B)))


def commutant_tensor_dimension(ctx, k):
    """Dimension of the commutant of ``{U[e] kron I_k}`` over the generating set."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    eye = np.eye(k)
    mats = [np.kron(induced_rep(ctx, e), eye) for e in generating_set(ctx.group)]
    return commutant_dimension(mats)
