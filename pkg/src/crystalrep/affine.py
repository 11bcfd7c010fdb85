"""Affine isometries of R^n in the ``[x, L]`` convention.

An isometry ``[x, L]`` acts by ``z -> L(z + x)``: translate first, then apply
the orthogonal part.  With this action the group law reads::

    [x, L][y, M] = [M^{-1} x + y, L M]
    [x, L]^{-1}  = [-L x, L^{-1}]

which is the opposite group of the usual semidirect product
``R^n x| O(n)^op``.  The convention matters everywhere downstream (cocycles,
induced representations), so it is the only one implemented here.
"""
from __future__ import annotations

import numpy as np

from .config import GROUP_TOL, ORTHO_TOL
from .errors import DimensionMismatch


def _frozen(a, dtype=float):
    arr = np.array(a, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


def is_orthogonal(L, tol=ORTHO_TOL):
    L = np.asarray(L, dtype=float)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        return False
    n = L.shape[0]
    if np.max(np.abs(L.T @ L - np.eye(n))) > tol:
        return False
    return abs(abs(np.linalg.det(L)) - 1.0) <= tol


class AffineIsometry:
    """Immutable pair ``(t, L)`` acting as ``z -> L (z + t)``."""

    __slots__ = ("t", "L")

    def __init__(self, t, L, check=True):
        t = _frozen(t)
        L = _frozen(L)
        if t.ndim != 1 or L.shape != (t.size, t.size):
            raise DimensionMismatch(f"translation of length {t.size} with matrix of shape {L.shape}")
        if not np.all(np.isfinite(t)) or not np.all(np.isfinite(L)):
            raise ValueError("non-finite entries in affine isometry")
        if check and not is_orthogonal(L):
            raise ValueError("linear part is not orthogonal within tolerance")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "L", L)

    def __setattr__(self, name, value):
        raise AttributeError("AffineIsometry is immutable")

    @property
    def dim(self):
        return self.t.size

    @classmethod
    def identity(cls, n):
        return cls(np.zeros(n), np.eye(n), check=False)

    @classmethod
    def translation(cls, t):
        t = np.asarray(t, dtype=float)
        return cls(t, np.eye(t.size), check=False)

    @classmethod
    def linear(cls, L):
        L = np.asarray(L, dtype=float)
        return cls(np.zeros(L.shape[0]), L)

    def __mul__(self, other):
        return compose(self, other)

    def __call__(self, z):
        return apply(self, z)

    def inverse(self):
        return inverse(self)

    def is_translation(self, tol=GROUP_TOL):
        return bool(np.max(np.abs(self.L - np.eye(self.dim))) <= tol)

    def allclose(self, other, tol=GROUP_TOL):
        return distance(self, other) <= tol

    def __repr__(self):
        return f"AffineIsometry(t={self.t.tolist()}, L={self.L.tolist()})"


def _check_same_dim(g, h):
    if g.dim != h.dim:
        raise DimensionMismatch(f"dimensions {g.dim} and {h.dim} differ")


def compose(g, h):
    """Product ``g h`` under ``[x,L][y,M] = [M^{-1}x + y, LM]``.

    ``apply(compose(g, h), z) == apply(g, apply(h, z))``.
    """
    _check_same_dim(g, h)
    # h.L is orthogonal, so its inverse is its transpose.
    t = h.L.T @ g.t + h.t
    return AffineIsometry(t, g.L @ h.L, check=False)


def inverse(g):
    return AffineIsometry(-(g.L @ g.t), g.L.T.copy(), check=False)


def apply(g, z):
    """Apply ``g`` to a point, or to a stack of points along the last axis."""
    z = np.asarray(z, dtype=float)
    if z.shape[-1] != g.dim:
        raise DimensionMismatch(f"point of dimension {z.shape[-1]} for isometry of dimension {g.dim}")
    return (z + g.t) @ g.L.T


def distance(g, h):
    """Max-abs distance between two isometries, over translation and matrix entries."""
    _check_same_dim(g, h)
    return float(max(np.max(np.abs(g.t - h.t)), np.max(np.abs(g.L - h.L))))
