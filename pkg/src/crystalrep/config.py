"""Numerical tolerances shared across the package.

All group-law identities involve products of O(1) quantities, so they are
compared with a fixed absolute tolerance rather than a relative one.
"""
import os

GROUP_TOL = 1e-12
ORTHO_TOL = 1e-12
LATTICE_TOL = 1e-9
BOUNDARY_TOL = 1e-9
MATRIX_MATCH_TOL = 1e-9
BISECTOR_TOL = 1e-10
COMMUTANT_SVD_TOL = 1e-8
TENSOR_FORM_TOL = 1e-8
INVARIANCE_TOL = 1e-8
UNITARY_TOL = 1e-10

POINT_GROUP_MAX_ORDER = 96
CUTOFF_MAX_DOUBLINGS = 10

DEFAULT_CENTER = (0.3, 0.2, 0.11)

ENV_TOL = "CRYSTALREP_TOL"


def default_center(n):
    """Low-symmetry default point used as the Dirichlet-domain centre."""
    head = list(DEFAULT_CENTER[:n])
    while len(head) < n:
        head.append(head[-1] * 0.6)
    return tuple(head)


def env_tolerance(default=None):
    """Tolerance override from the ``CRYSTALREP_TOL`` environment variable."""
    raw = os.environ.get(ENV_TOL)
    if raw is None or raw.strip() == "":
        return default
    return float(raw)
