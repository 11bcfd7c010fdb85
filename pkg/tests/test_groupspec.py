import json

import numpy as np
import pytest

from crystalrep.crystal import CATALOG_NAMES, catalog
from crystalrep.errors import CocycleNotInLattice, ParseError, PointGroupNotClosed, ValidationError
from crystalrep.groupspec import groups_equal, load_group, parse_group_spec, serialize


def test_builtin():
    assert groups_equal(parse_group_spec('{"builtin": "pg"}'), catalog("pg"))


def test_explicit_pg_matches_catalog(data_dir):
    g = parse_group_spec((data_dir / "pg_explicit.json").read_text())
    assert groups_equal(g, catalog("pg"))


def test_corrupted_shift_is_validation_error(data_dir):
    with pytest.raises(ValidationError) as info:
        parse_group_spec((data_dir / "pg_corrupted.json").read_text())
    assert isinstance(info.value.cause, CocycleNotInLattice)


def test_unvalidated_parse_keeps_bad_group(data_dir):
    g = parse_group_spec((data_dir / "pg_corrupted.json").read_text(), validate=False)
    with pytest.raises(CocycleNotInLattice):
        g.validate()


def test_pgg_shifts_derived_from_generators(data_dir):
    g = load_group(str(data_dir / "pgg.json"))
    assert g.order == 4
    assert not g.is_symmorphic()
    i = g.pg.index_of(-np.eye(2))
    # gamma(-I) = gamma(diag(-1,1)) gamma(diag(1,-1)) has zero shift modulo the lattice
    assert g.lat.contains(g.shifts[i])


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_roundtrip(name):
    g = catalog(name)
    h = parse_group_spec(serialize(g))
    assert groups_equal(g, h)
    assert serialize(h) == serialize(g)


def test_roundtrip_pgg(data_dir):
    g = load_group(str(data_dir / "pgg.json"))
    assert groups_equal(parse_group_spec(serialize(g)), g)


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        "[1, 2]",
        '{"dimension": 2}',
        '{"dimension": "two", "lattice": [[1,0],[0,1]]}',
        '{"dimension": 2, "lattice": [[1,0,0],[0,1,0]]}',
        '{"dimension": 2, "lattice": [[1,0],[0,1]], "cross_section": [{"shift": [0,0]}]}',
        '{"builtin": 3}',
    ],
)
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_group_spec(text)


def test_non_orthogonal_generator():
    doc = {"dimension": 2, "lattice": [[1, 0], [0, 1]], "generators": [[[1, 1], [0, 1]]]}
    with pytest.raises(ValidationError):
        parse_group_spec(json.dumps(doc))


def test_infinite_order_generator():
    c, s = np.cos(1.0), np.sin(1.0)
    doc = {"dimension": 2, "lattice": [[1, 0], [0, 1]], "generators": [[[c, -s], [s, c]]]}
    with pytest.raises(PointGroupNotClosed):
        parse_group_spec(json.dumps(doc))


def test_cross_section_matrix_outside_point_group():
    doc = {
        "dimension": 2,
        "lattice": [[1, 0], [0, 1]],
        "generators": [[[1, 0], [0, -1]]],
        "cross_section": [{"matrix": [[0, -1], [1, 0]], "shift": [0, 0]}],
    }
    with pytest.raises(ValidationError):
        parse_group_spec(json.dumps(doc))
