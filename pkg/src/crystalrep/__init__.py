"""Crystallographic groups, their induced representations, and the
direct-integral decomposition of the Fourier-side representation."""
from .affine import AffineIsometry, apply, compose, inverse, is_orthogonal
from .crystal import (
    CATALOG_NAMES,
    CrystalGroup,
    GroupElement,
    PointGroup,
    build_crystal_group,
    catalog,
    dual_crystal_group,
)
from .domain import (
    HalfSpace,
    HPolytope,
    ParamDomain,
    area_2d,
    bisector_halfspace,
    build_param_domain,
    dirichlet_domain,
    lambda_split,
    pi_action_param,
    reduce_to_param,
    stabilizer_pi,
    vertices_2d,
)
from .groupspec import parse_group_spec, serialize
from .lattice import Lattice, LatticePoint, character_eval, dual_lattice
from .rep import (
    InducedRepContext,
    commutant_basis,
    induced_rep,
    is_irreducible,
    psi_intertwiner,
    regular_rep,
)

__version__ = "0.1.0"

__all__ = [
    "AffineIsometry",
    "CATALOG_NAMES",
    "CrystalGroup",
    "GroupElement",
    "HPolytope",
    "HalfSpace",
    "InducedRepContext",
    "Lattice",
    "LatticePoint",
    "ParamDomain",
    "PointGroup",
    "apply",
    "area_2d",
    "bisector_halfspace",
    "build_crystal_group",
    "build_param_domain",
    "catalog",
    "character_eval",
    "commutant_basis",
    "compose",
    "dirichlet_domain",
    "dual_crystal_group",
    "dual_lattice",
    "induced_rep",
    "inverse",
    "is_irreducible",
    "is_orthogonal",
    "lambda_split",
    "parse_group_spec",
    "pi_action_param",
    "psi_intertwiner",
    "reduce_to_param",
    "regular_rep",
    "serialize",
    "stabilizer_pi",
    "vertices_2d",
]
