"""JSON group definitions.

A document is either ``{"builtin": "<name>"}`` or::

    {
      "name": "pg",
      "dimension": 2,
      "lattice": [[1, 0], [0, 1]],          # row-major; columns are basis vectors
      "generators": [[[1, 0], [0, -1]]],    # or "point_group": full ordered list
      "cross_section": [{"matrix": [[1, 0], [0, -1]], "shift": [0.5, 0]}]
    }

Cross-section entries may be given for a subset of the point group (for
example only the generators); the remaining shifts are taken from products
of the listed ones.
"""
from __future__ import annotations

import json

import numpy as np

from .affine import AffineIsometry, compose
from .crystal import CrystalGroup, PointGroup, catalog
from .errors import CrystalRepError, ParseError, PointGroupNotClosed, UnknownGroupName, ValidationError
from .lattice import Lattice


def _matrix(obj, n, what):
    try:
        m = np.array(obj, dtype=float)
    except (TypeError, ValueError):
        raise ParseError(f"{what} is not a numeric matrix") from None
    if m.shape != (n, n):
        raise ParseError(f"{what} must be {n}x{n}, got shape {m.shape}")
    return m


def _vector(obj, n, what):
    try:
        v = np.array(obj, dtype=float)
    except (TypeError, ValueError):
        raise ParseError(f"{what} is not a numeric vector") from None
    if v.shape != (n,):
        raise ParseError(f"{what} must have length {n}")
    return v


def _fill_shifts(pg, known):
    """Extend shifts from listed elements to the whole point group via ``gamma(L) gamma(M)``."""
    shifts = dict(known)
    shifts.setdefault(0, np.zeros(pg.dim))
    changed = True
    while changed and len(shifts) < len(pg):
        changed = False
        for i in list(shifts):
            for j in list(shifts):
                k = pg.mul(i, j)
                if k in shifts:
                    continue
                gi = AffineIsometry(shifts[i], pg[i], check=False)
                gj = AffineIsometry(shifts[j], pg[j], check=False)
                prod = compose(gi, gj)
                shifts[k] = prod.t
                changed = True
    if len(shifts) < len(pg):
        raise ParseError("cross-section does not determine a shift for every point-group element")
    return np.array([shifts[i] for i in range(len(pg))])


def group_from_dict(doc, validate=True):
    if not isinstance(doc, dict):
        raise ParseError("group definition must be a JSON object")
    if "builtin" in doc:
        name = doc["builtin"]
        if not isinstance(name, str):
            raise ParseError("builtin name must be a string")
        return catalog(name)
    for key in ("dimension", "lattice"):
        if key not in doc:
            raise ParseError(f"missing field {key!r}")
    n = doc["dimension"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError("dimension must be a positive integer")
    B = _matrix(doc["lattice"], n, "lattice")
    try:
        lat = Lattice(B)
        if "point_group" in doc:
            pg = PointGroup([_matrix(m, n, "point-group element") for m in doc["point_group"]])
        elif "generators" in doc:
            gens = [_matrix(m, n, "generator") for m in doc["generators"]] or [np.eye(n)]
            pg = PointGroup.generate(gens)
        else:
            pg = PointGroup([np.eye(n)])
    except (ParseError, PointGroupNotClosed):
        raise
    except (CrystalRepError, ValueError) as exc:
        raise ValidationError(exc) from exc
    known = {}
    for entry in doc.get("cross_section", []):
        if not isinstance(entry, dict) or "matrix" not in entry or "shift" not in entry:
            raise ParseError("cross-section entries need 'matrix' and 'shift'")
        i = pg.index_of(_matrix(entry["matrix"], n, "cross-section matrix"))
        if i is None:
            raise ValidationError(ValueError("cross-section matrix is not in the point group"))
        known[i] = _vector(entry["shift"], n, "cross-section shift")
    shifts = _fill_shifts(pg, known)
    name = doc.get("name", "")
    try:
        return CrystalGroup(lat, pg, shifts, name=str(name), validate=validate)
    except CrystalRepError as exc:
        raise ValidationError(exc) from exc


def parse_group_spec(text, validate=True):
    """Parse a JSON group definition into a validated crystal group."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return group_from_dict(doc, validate=validate)


def load_group(arg, validate=True):
    """A catalog name, or a path to a JSON group definition."""
    try:
        return catalog(arg)
    except UnknownGroupName:
        pass
    try:
        with open(arg, encoding="utf-8") as fh:
            text = fh.read()
    except OSError:
        raise UnknownGroupName(f"{arg!r} is neither a built-in group nor a readable file") from None
    return parse_group_spec(text, validate=validate)


def group_to_dict(g):
    """Explicit form listing the full point group, so parsing reproduces the element order."""
    return {
        "name": g.name,
        "dimension": g.dim,
        "lattice": g.lat.basis.tolist(),
        "point_group": [m.tolist() for m in g.pg.elements],
        "cross_section": [
            {"matrix": m.tolist(), "shift": g.shifts[i].tolist()} for i, m in enumerate(g.pg.elements)
        ],
    }


def serialize(g):
    return json.dumps(group_to_dict(g), indent=2)


def groups_equal(g, h, tol=0.0):
    """Element-wise equality of lattice, ordered point group and shifts."""
    if g.dim != h.dim or g.order != h.order:
        return False
    if np.max(np.abs(g.lat.basis - h.lat.basis)) > tol:
        return False
    for a, b in zip(g.pg.elements, h.pg.elements):
        if np.max(np.abs(a - b)) > tol:
            return False
    return bool(np.max(np.abs(g.shifts - h.shifts)) <= tol)
