import numpy as np
import pytest

from crystalrep import domain as dom
from crystalrep.affine import AffineIsometry
from crystalrep.crystal import CrystalGroup, PointGroup, catalog
from crystalrep.domain import (
    HalfSpace,
    HPolytope,
    area_2d,
    bisector_halfspace,
    build_param_domain,
    copies_overlap_count,
    dirichlet_domain,
    interior_grid,
    lambda_split,
    pi_action_param,
    reduce_to_param,
    sample_interior,
    stabilizer_pi,
    tiling_check,
    union_area_mc,
    vertices_2d,
)
from crystalrep.errors import (
    DegenerateBisector,
    EmptyInterior,
    NontrivialStabilizer,
    NotInOpenCopies,
    Unbounded,
    UnboundedAfterCutoff,
)
from crystalrep.lattice import Lattice, character_eval

SIGMA = np.diag([1.0, -1.0])


def translations(n=2):
    return CrystalGroup(Lattice(np.eye(n)), PointGroup([np.eye(n)]), np.zeros((1, n)), name=f"Z{n}")


def box(lo, hi):
    hs = []
    for d in range(len(lo)):
        e = np.eye(len(lo))[d]
        hs += [HalfSpace(e, hi[d]), HalfSpace(-e, -lo[d])]
    return HPolytope(hs, len(lo), interior_point=0.5 * (np.asarray(lo) + np.asarray(hi)))


def same_cycle(a, b, tol=1e-9):
    """Vertex cycles equal up to rotation of the starting vertex."""
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        return False
    return any(np.max(np.abs(np.roll(a, s, axis=0) - b)) <= tol for s in range(len(a)))


def test_bisector_examples():
    h = bisector_halfspace([0.0, 0.0], AffineIsometry.translation([1.0, 0.0]))
    assert np.allclose(h.normal, [1.0, 0.0]) and h.offset == pytest.approx(0.5) and h.open
    h = bisector_halfspace([0.3, 0.2], AffineIsometry.linear(SIGMA))
    assert np.allclose(h.normal, [0.0, -1.0]) and h.offset == pytest.approx(0.0)
    assert h.contains([5.0, 0.1]) and not h.contains([5.0, 0.0]) and not h.contains([0.0, -0.1])


def test_bisector_degenerate():
    with pytest.raises(DegenerateBisector):
        bisector_halfspace([0.3, 0.0], AffineIsometry.linear(SIGMA))


def test_halfspace_open_closed_band():
    h = HalfSpace([1.0, 0.0], 1.0, open=True)
    c = HalfSpace([1.0, 0.0], 1.0, open=False)
    assert not h.contains([1.0 - 5e-10, 0.0])
    assert c.contains([1.0 + 5e-10, 0.0])
    with pytest.raises(ValueError):
        HalfSpace([0.0, 0.0], 1.0)


def test_vertices_square_and_triangle():
    v = vertices_2d(box([-0.5, -0.5], [0.5, 0.5]))
    assert same_cycle(v, [[-0.5, -0.5], [0.5, -0.5], [0.5, 0.5], [-0.5, 0.5]])
    tri = HPolytope([HalfSpace([-1, 0], 0), HalfSpace([0, -1], 0), HalfSpace([1, 1], 1)], 2)
    assert same_cycle(vertices_2d(tri), [[0, 0], [1, 0], [0, 1]])
    assert area_2d(tri) == pytest.approx(0.5)


def test_vertices_counterclockwise():
    v = vertices_2d(box([0, 0], [2, 1]))
    x, y = v[:, 0], v[:, 1]
    assert np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y) > 0


def test_unbounded_and_empty():
    with pytest.raises(Unbounded):
        vertices_2d(HPolytope([HalfSpace([1, 0], 1), HalfSpace([-1, 0], 1)], 2))
    with pytest.raises(EmptyInterior):
        vertices_2d(HPolytope(box([0, 0], [1, 1]).halfspaces + (HalfSpace([1, 0], -1),), 2))


def test_voronoi_square_of_translations():
    a = np.array([0.1, 0.7])
    D = dirichlet_domain(translations(), a)
    want = a + np.array([[-0.5, -0.5], [0.5, -0.5], [0.5, 0.5], [-0.5, 0.5]])
    assert same_cycle(vertices_2d(D), want)
    assert len(D) == 4


def test_pg_dual_rectangle(pg):
    R = dirichlet_domain(pg.dual(), [0.3, 0.2])
    assert same_cycle(vertices_2d(R), [[-0.2, 0.0], [0.8, 0.0], [0.8, 0.5], [-0.2, 0.5]])
    assert area_2d(R) == pytest.approx(0.5, abs=1e-12)


def test_pg_area_identity(pg):
    pd = build_param_domain(pg)
    assert abs(pg.order * area_2d(pd.R) - pd.dual.covolume) <= 1e-9


def test_domain_contains_center_and_is_convex(p4m, rng):
    D = dirichlet_domain(p4m, [0.3, 0.2])
    assert D.contains_open(np.array([0.3, 0.2]))
    pts = sample_interior(build_param_domain(p4m), 200, rng)
    R = build_param_domain(p4m).R
    mids = 0.5 * (pts[:100] + pts[100:])
    assert np.all(R.contains_open(mids, tol=0.0))


def test_pg_spatial_domain_area_is_half(pg):
    # Any fundamental domain of pg has area covol / |Pi|.
    assert area_2d(dirichlet_domain(pg, [0.3, 0.2])) == pytest.approx(0.5, abs=1e-12)


def test_mirror_point_has_stabilizer():
    with pytest.raises(NontrivialStabilizer):
        dirichlet_domain(catalog("pm"), [0.3, 0.0])


def test_cutoff_cap(monkeypatch):
    monkeypatch.setattr(dom, "CUTOFF_MAX_DOUBLINGS", 0)
    with pytest.raises(UnboundedAfterCutoff):
        dirichlet_domain(translations(), [0.1, 0.2], cutoff=0.5)


def test_cutoff_grows_from_small_start():
    D = dirichlet_domain(translations(), [0.1, 0.2], cutoff=0.5)
    assert area_2d(D) == pytest.approx(1.0)


def test_three_dimensional_cube():
    D = dirichlet_domain(translations(3), [0.1, 0.2, 0.3])
    v = D.vertices()
    assert len(v) == 8
    assert np.allclose(np.sort(np.abs(v - [0.1, 0.2, 0.3]).ravel()), 0.5)


def test_one_dimensional_interval():
    g = CrystalGroup(Lattice([[2.0]]), PointGroup([[[1.0]], [[-1.0]]]), [[0.0], [0.0]], name="line")
    pd = build_param_domain(g, [0.1])
    assert np.allclose(np.sort(pd.R.vertices().ravel()), [0.0, 0.25])


def test_p4m_triangle(p4m):
    pd = build_param_domain(p4m)
    assert same_cycle(vertices_2d(pd.R), [[0.0, 0.0], [0.5, 0.0], [0.5, 0.5]])
    assert area_2d(pd.R) == pytest.approx(0.125)
    assert pd.area() == pytest.approx(1.0)


def test_p1_param_domain_is_voronoi_square():
    pd = build_param_domain(catalog("p1"))
    a = np.array([0.3, 0.2])
    assert same_cycle(vertices_2d(pd.R), a + np.array([[-0.5, -0.5], [0.5, -0.5], [0.5, 0.5], [-0.5, 0.5]]))


def test_pg_param_domain_shape(pg, rng):
    pd = build_param_domain(pg)
    pts = rng.uniform(-1.5, 1.5, size=(5000, 2))
    inside = pd.in_open_copies(pts, 0.0)
    want = (pts[:, 0] > -0.2) & (pts[:, 0] < 0.8) & (np.abs(pts[:, 1]) < 0.5) & (np.abs(pts[:, 1]) > 0)
    assert np.array_equal(inside, want)


def test_copies_disjoint(any_group, rng):
    pd = build_param_domain(any_group)
    lo, hi = pd.bounding_box()
    assert copies_overlap_count(pd, rng.uniform(lo, hi, size=(10000, 2))) == 0


def test_union_area_matches(any_group, rng):
    pd = build_param_domain(any_group)
    mc = union_area_mc(pd, 200000, rng)
    assert abs(mc - pd.area()) / pd.area() < 0.01


def test_reduce_examples(pg):
    pd = build_param_domain(pg)
    assert np.allclose(reduce_to_param(pd, [1.3, 0.2]), [0.3, 0.2])
    assert np.allclose(reduce_to_param(pd, [0.3, 0.2]), [0.3, 0.2])
    assert np.allclose(reduce_to_param(pd, [-4.7, 3.6]), [0.3, -0.4])


def test_reduce_idempotent_and_lattice_shift(any_group, rng):
    pd = build_param_domain(any_group)
    for nu in rng.uniform(-3, 3, size=(1000, 2)):
        r = reduce_to_param(pd, nu)
        assert np.max(np.abs(reduce_to_param(pd, r) - r)) <= 1e-12
        assert pd.dual.contains(r - nu)
        assert pd.contains(r)


def test_boundary_tie_break_is_lexicographic(pg):
    pd = build_param_domain(pg)
    # (-0.2, 0.3) and (0.8, 0.3) are the same coset, both on the boundary.
    a = reduce_to_param(pd, [0.8, 0.3])
    b = reduce_to_param(pd, [-0.2, 0.3])
    assert np.allclose(a, [-0.2, 0.3]) and np.allclose(b, [-0.2, 0.3])
    # The seam y = 0.5 meets y = -0.5 modulo the lattice.
    assert np.allclose(reduce_to_param(pd, [0.3, 0.5]), [0.3, -0.5])
    assert np.allclose(reduce_to_param(pd, [0.3, 0.0]), [0.3, 0.0])


def test_transversal(pg, rng):
    pd = build_param_domain(pg)
    for nu in rng.uniform(-3, 3, size=(1000, 2)):
        cands = pd.closure_candidates(nu)
        members = [c for c in cands if pd.contains(c)]
        assert len(members) == 1


def test_pi_action_examples(pg):
    pd = build_param_domain(pg)
    w = np.array([0.3, 0.2])
    assert np.allclose(pi_action_param(pd, 0, w), w)
    assert np.allclose(pi_action_param(pd, 1, w), [0.3, -0.2])


def test_pi_action_law(any_group, rng):
    g = any_group
    pd = build_param_domain(g)
    for w in sample_interior(pd, 10, rng):
        for L in range(g.order):
            lw = pi_action_param(pd, L, w)
            assert np.max(np.abs(lw - g.pg[L] @ w)) <= 1e-12
            for M in range(g.order):
                a = pi_action_param(pd, M, lw)
                b = pi_action_param(pd, g.pg.mul(M, L), w)
                assert np.max(np.abs(a - b)) <= 1e-12


def test_character_action(any_group, rng):
    g = any_group
    pd = build_param_domain(g)
    ys = g.lat.points_near(np.zeros(2), 3.0) @ g.lat.basis.T
    for w in sample_interior(pd, 5, rng):
        for L, Lm in enumerate(g.pg.elements):
            lhs = character_eval(pi_action_param(pd, L, w), ys)
            rhs = character_eval(w, ys @ Lm)
            assert np.max(np.abs(lhs - rhs)) <= 1e-10


def test_lambda_split(pg, rng):
    pd = build_param_domain(pg)
    L, r = lambda_split(pd, [0.3, 0.2])
    assert L == 0 and np.allclose(r, [0.3, 0.2])
    L, r = lambda_split(pd, [0.3, -0.2])
    assert L == 1 and np.allclose(r, [0.3, 0.2])
    with pytest.raises(NotInOpenCopies):
        lambda_split(pd, [0.3, 0.0])
    for nu in rng.uniform([-0.2, -0.5], [0.8, 0.5], size=(1000, 2)):
        L, r = lambda_split(pd, nu)
        assert np.max(np.abs(pg.pg[L] @ r - nu)) <= 1e-12


def test_stabilizers(pg):
    pd = build_param_domain(pg)
    assert stabilizer_pi(pd, [0.3, 0.2]) == [0]
    assert stabilizer_pi(pd, [0.3, 0.0]) == [0, 1]
    assert stabilizer_pi(pd, [0.3, 0.5]) == [0, 1]


def test_tiling_monte_carlo(any_group, rng):
    pd = build_param_domain(any_group)
    t = tiling_check(pd, rng.uniform(-1.5, 1.5, size=(10000, 2)))
    assert t["failures"] == 0
    assert t["boundary"] / t["total"] < 0.01


def test_interior_grid(pg):
    pd = build_param_domain(pg)
    grid = interior_grid(pd, 5)
    assert grid.shape == (25, 2)
    assert np.all(pd.R.contains_open(grid, tol=1e-3))
    assert np.array_equal(grid, interior_grid(pd, 5))
