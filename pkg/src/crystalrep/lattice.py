"""Full-rank lattices ``B Z^n``, their duals, and frequency characters."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .config import LATTICE_TOL
from .errors import DimensionMismatch


@dataclass(frozen=True)
class LatticePoint:
    k: tuple
    x: np.ndarray

    def __post_init__(self):
        x = np.array(self.x, dtype=float)
        x.setflags(write=False)
        object.__setattr__(self, "k", tuple(int(v) for v in self.k))
        object.__setattr__(self, "x", x)

    def __eq__(self, other):
        return isinstance(other, LatticePoint) and self.k == other.k

    def __hash__(self):
        return hash(self.k)


class Lattice:
    """The lattice generated by the columns of an invertible matrix."""

    def __init__(self, basis):
        B = np.array(basis, dtype=float)
        if B.ndim != 2 or B.shape[0] != B.shape[1]:
            raise DimensionMismatch(f"lattice basis must be square, got shape {B.shape}")
        det = np.linalg.det(B)
        if abs(det) <= 1e-12:
            raise ValueError("lattice basis is singular")
        B.setflags(write=False)
        self.basis = B
        inv = np.linalg.inv(B)
        inv.setflags(write=False)
        self.inv_basis = inv
        self.covolume = float(abs(det))

    @property
    def dim(self):
        return self.basis.shape[0]

    def __repr__(self):
        return f"Lattice({self.basis.tolist()})"

    def point(self, k):
        k = tuple(int(v) for v in k)
        return LatticePoint(k, self.basis @ np.array(k, dtype=float))

    def vector(self, k):
        return self.basis @ np.asarray(k, dtype=float)

    def dual(self):
        return dual_lattice(self)

    def coords_of(self, x, tol=LATTICE_TOL):
        return coords_of(self, x, tol)

    def contains(self, x, tol=LATTICE_TOL):
        return coords_of(self, x, tol) is not None

    def enumerate_points(self, radius):
        return enumerate_points(self, radius)

    def points_near(self, center, radius):
        return points_near(self, center, radius)

    def reduce(self, x):
        """Translate ``x`` by a lattice vector to the nearest-rounded representative."""
        x = np.asarray(x, dtype=float)
        k = np.round(x @ self.inv_basis.T)
        return x - k @ self.basis.T

    def same_lattice(self, other, tol=LATTICE_TOL):
        if self.dim != other.dim:
            return False
        return all(self.contains(b, tol) for b in other.basis.T) and all(
            other.contains(b, tol) for b in self.basis.T
        )


def dual_lattice(lat):
    """Lattice ``{z : x . z in Z for all x in lat}``, with basis ``(B^T)^{-1}``."""
    return Lattice(np.linalg.inv(lat.basis.T))


def coords_of(lat, x, tol=LATTICE_TOL):
    """Integer coordinates of ``x`` in ``lat``, or ``None`` when ``x`` is not a lattice point."""
    x = np.asarray(x, dtype=float)
    if x.shape != (lat.dim,):
        raise DimensionMismatch(f"point of shape {x.shape} for lattice of dimension {lat.dim}")
    c = lat.inv_basis @ x
    k = np.round(c)
    if np.max(np.abs(c - k)) > tol:
        return None
    return tuple(int(v) for v in k)


def _coordinate_box(lat, center, radius):
    c = lat.inv_basis @ np.asarray(center, dtype=float)
    reach = radius * np.linalg.norm(lat.inv_basis, ord=np.inf) * lat.dim
    lo = np.floor(c - reach).astype(int)
    hi = np.ceil(c + reach).astype(int)
    return lo, hi


def points_near(lat, center, radius):
    """Integer coordinates of lattice points within ``radius`` of ``center``.

    Returned as an ``(m, n)`` int array in lexicographic order of ``k``.
    """
    center = np.asarray(center, dtype=float)
    lo, hi = _coordinate_box(lat, center, radius)
    axes = [np.arange(a, b + 1) for a, b in zip(lo, hi)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, lat.dim)
    d = np.linalg.norm(grid @ lat.basis.T - center, axis=1)
    return grid[d <= radius * (1 + 1e-12) + 1e-12]


def enumerate_points(lat, radius):
    """All lattice points with ``|B k| <= radius``, lexicographic in ``k``."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    lo, hi = _coordinate_box(lat, np.zeros(lat.dim), radius)
    out = []
    for k in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        x = lat.basis @ np.array(k, dtype=float)
        if np.linalg.norm(x) <= radius * (1 + 1e-12) + 1e-12:
            out.append(LatticePoint(k, x))
    return out


def character_eval(omega, x):
    """``chi_omega(x) = exp(2 pi i omega . x)``; broadcasts over leading axes."""
    omega = np.asarray(omega, dtype=float)
    x = np.asarray(x, dtype=float)
    if omega.shape[-1] != x.shape[-1]:
        raise DimensionMismatch("frequency and point dimensions differ")
    phase = np.sum(omega * x, axis=-1)
    return np.exp(2j * np.pi * phase)
