import numpy as np
import pytest

from crystalrep.crystal import CrystalGroup, PointGroup, catalog
from crystalrep.domain import build_param_domain, vertices_2d
from crystalrep.errors import DimensionUnsupported
from crystalrep.lattice import Lattice
from crystalrep.plotting import figure_data, plot


def test_pg_domain_plot(tmp_path, pg):
    out = tmp_path / "pg.svg"
    data = plot(pg, "domain", out)
    svg = out.read_text()
    assert svg.startswith("<?xml") and 'id="domain-R"' in svg and 'id="lattice-points"' in svg
    assert np.allclose(data["polygons"]["domain-R"], vertices_2d(build_param_domain(pg).R))


def test_param_domain_plot_has_copies(tmp_path, p4m):
    out = tmp_path / "p4m.svg"
    plot(p4m, "param-domain", out)
    svg = out.read_text()
    assert all(f'id="copy-{i}"' in svg for i in range(1, 8))


def test_orbit_plot(tmp_path, pg):
    out = tmp_path / "orbit.svg"
    data = plot(pg, "orbit", out, of="group")
    assert 'id="orbit-points"' in out.read_text()
    assert len(data["orbit"]) > 4


def test_p1_plot_is_unit_square(tmp_path):
    data = figure_data(catalog("p1"), "domain")
    v = data["polygons"]["domain-R"]
    assert np.ptp(v[:, 0]) == pytest.approx(1.0) and np.ptp(v[:, 1]) == pytest.approx(1.0)


def test_svg_bytes_reproducible(tmp_path, pg):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    plot(pg, "param-domain", a)
    plot(pg, "param-domain", b)
    assert a.read_bytes() == b.read_bytes()


def test_three_dimensional_rejected(tmp_path):
    g = CrystalGroup(Lattice(np.eye(3)), PointGroup([np.eye(3)]), np.zeros((1, 3)))
    with pytest.raises(DimensionUnsupported):
        plot(g, "domain", tmp_path / "x.svg")


def test_unknown_kind(pg):
    with pytest.raises(ValueError):
        figure_data(pg, "heatmap")
