"""Induced representations on ``l2(Pi)``, their intertwiners, and commutants.

For a frequency ``omega`` the character ``chi_omega`` of the translation
subgroup induces a ``|Pi|``-dimensional unitary representation.  Rows and
columns are indexed by point-group elements in the point group's own order.
The element ``[x, L]`` sends the basis vector at ``L^{-1} M`` to the one at
``M`` with the phase ``chi_omega`` of the translation
``gamma(M)^{-1} [x, L] gamma(L^{-1} M)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .affine import compose, inverse
from .config import COMMUTANT_SVD_TOL, LATTICE_TOL, UNITARY_TOL
from .crystal import GroupElement
from .errors import DimensionMismatch, ProductNotInTranslations
from .lattice import character_eval


@dataclass(frozen=True)
class InducedRepContext:
    group: object
    omega: np.ndarray

    def __post_init__(self):
        w = np.array(self.omega, dtype=float)
        if w.shape != (self.group.dim,):
            raise DimensionMismatch("frequency has wrong dimension")
        if not np.all(np.isfinite(w)):
            raise ValueError("frequency must be finite")
        w.setflags(write=False)
        object.__setattr__(self, "omega", w)

    @property
    def degree(self):
        return self.group.order

    def rep(self, e):
        return induced_rep(self, e)

    def psi(self, N):
        return psi_intertwiner(self, N)


def induced_rep(ctx, e):
    """The unitary matrix of ``e`` in the representation induced from ``chi_omega``."""
    g = ctx.group
    pg = g.pg
    a = g.embed(e)
    L = e.L_index
    Linv = pg.inv(L)
    d = g.order
    U = np.zeros((d, d), dtype=complex)
    for M in range(d):
        col = pg.mul(Linv, M)
        prod = compose(inverse(g.gamma(M)), compose(a, g.gamma(col)))
        if not prod.is_translation(tol=LATTICE_TOL) or g.lat.coords_of(prod.t) is None:
            raise ProductNotInTranslations(
                f"gamma({M})^-1 [x,L] gamma({col}) is not a lattice translation"
            )
        U[M, col] = character_eval(ctx.omega, prod.t)
    return U


def regular_rep(pg, L):
    """Left regular representation: permutation with entry ``(M, L^{-1} M) = 1``."""
    d = len(pg)
    P = np.zeros((d, d))
    Linv = pg.inv(L)
    for M in range(d):
        P[M, pg.mul(Linv, M)] = 1.0
    return P


def psi_intertwiner(ctx, N):
    """``Psi_N`` with entry ``(M, MN) = chi_omega(-alpha(M, N))``.

    Conjugating by ``Psi_N`` carries the representation at ``omega`` to the
    one at ``N omega``.
    """
    g = ctx.group
    d = g.order
    P = np.zeros((d, d), dtype=complex)
    for M in range(d):
        alpha = g.cocycle(M, N)
        P[M, g.pg.mul(M, N)] = character_eval(ctx.omega, -alpha.x)
    return P


def unitarity_residual(U):
    U = np.asarray(U)
    return float(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))))


def is_unitary(U, tol=UNITARY_TOL):
    return unitarity_residual(U) <= tol


def generating_set(g):
    """Lattice basis translations followed by every ``gamma(L)``."""
    n = g.dim
    gens = [GroupElement(0, tuple(int(i == j) for j in range(n))) for i in range(n)]
    gens += [g.gamma_element(L) for L in range(g.order)]
    return gens


def commutant_basis(mats, tol=COMMUTANT_SVD_TOL):
    """Orthonormal basis (rows, row-major ``d*d`` vectors) of ``{X : X A = A X}``.

    Uses ``vec(A X - X A) = (A kron I - I kron A^T) vec(X)`` and takes the
    right singular vectors whose singular values fall below ``tol``.
    """
    mats = [np.asarray(m, dtype=complex) for m in mats]
    if not mats:
        raise ValueError("need at least one matrix")
    d = mats[0].shape[0]
    for m in mats:
        if m.shape != (d, d):
            raise DimensionMismatch("matrices must share one square shape")
    eye = np.eye(d)
    system = np.vstack([np.kron(A, eye) - np.kron(eye, A.T) for A in mats])
    _, s, vh = np.linalg.svd(system, full_matrices=False)
    s_full = np.zeros(d * d)
    s_full[: s.size] = s
    return vh[s_full <= tol].conj()


def commutant_dimension(mats, tol=COMMUTANT_SVD_TOL):
    return int(commutant_basis(mats, tol).shape[0])


def rep_generators(ctx):
    return [induced_rep(ctx, e) for e in generating_set(ctx.group)]


def is_irreducible(ctx, tol=COMMUTANT_SVD_TOL):
    """Irreducible iff the commutant of the generator images is the scalars."""
    return commutant_dimension(rep_generators(ctx), tol) == 1
