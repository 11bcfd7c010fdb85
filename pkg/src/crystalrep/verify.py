"""Verification suites behind ``crystalrep verify``.

Each suite returns a list of checks with a residual, the tolerance it is
compared against and a pass/fail/skip status.  Randomness comes from a
seeded PCG64 generator per suite, so reports depend only on the group,
the suite and the seed.
"""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass

import numpy as np

from .affine import AffineIsometry, compose, distance, inverse
from .config import default_center
from .decomp import (
    FrequencyFunction,
    RangeFunction,
    Truncation,
    chain_closed_form,
    chain_staged,
    commutant_tensor_dimension,
    eps_apply,
    intertwining_residual,
    invariance_report,
    m1_eval,
    orthonormalize,
    pi_hat_apply,
    principal_angle,
    rho_eval,
    sigma1_apply,
    sigma2_apply,
    tau_apply,
    SampledField,
    tensor_form_check,
    theta_apply,
    v_apply,
)
from .domain import (
    area_2d,
    build_param_domain,
    copies_overlap_count,
    interior_grid,
    pi_action_param,
    reduce_to_param,
    sample_interior,
    stabilizer_pi,
    tiling_check,
    union_area_mc,
)
from .errors import CrystalRepError
from .lattice import character_eval
from .rep import (
    InducedRepContext,
    generating_set,
    induced_rep,
    is_irreducible,
    psi_intertwiner,
    unitarity_residual,
)

SUITES = ("group-laws", "domain", "rep", "chain", "subspaces")


@dataclass
class Check:
    name: str
    status: str
    residual: float | None
    tolerance: float | None
    detail: str = ""
    wall_time: float | None = None


class _Collector:
    def __init__(self, suite, tol_override, timing):
        self.suite = suite
        self.tol = tol_override
        self.timing = timing
        self.checks = []
        self._t0 = time.perf_counter()

    def _stamp(self):
        if not self.timing:
            return None
        now = time.perf_counter()
        dt, self._t0 = now - self._t0, now
        return round(dt, 6)

    def at_most(self, name, residual, tol, detail="", identity=True):
        """Pass when ``residual <= tol``; identity-type checks honour the tolerance override."""
        if identity and self.tol is not None:
            tol = self.tol
        residual = float(residual)
        ok = bool(np.isfinite(residual) and residual <= tol)
        self.checks.append(Check(name, "pass" if ok else "fail", residual, float(tol), detail, self._stamp()))

    def at_least(self, name, residual, tol, detail=""):
        residual = float(residual)
        ok = bool(residual >= tol)
        self.checks.append(Check(name, "pass" if ok else "fail", residual, float(tol), detail, self._stamp()))

    def flag(self, name, ok, detail=""):
        self.checks.append(Check(name, "pass" if ok else "fail", None, None, detail, self._stamp()))

    def skip(self, name, detail):
        self.checks.append(Check(name, "skip", None, None, detail, self._stamp()))


def _rand_elements(g, rng, count, spread=3):
    return [g.random_element(rng, spread) for _ in range(count)]


# -- suites ----------------------------------------------------------------


def suite_group_laws(g, rng, out):
    elems = _rand_elements(g, rng, 3000)
    trip = [g.embed(e) for e in elems]
    assoc = ident = inv = 0.0
    coset_mismatch = 0
    e_id = AffineIsometry.identity(g.dim)
    for i in range(0, 3000, 3):
        a, b, c = trip[i : i + 3]
        assoc = max(assoc, distance(compose(compose(a, b), c), compose(a, compose(b, c))))
        ident = max(ident, distance(compose(a, e_id), a), distance(compose(e_id, a), a))
        inv = max(inv, distance(compose(a, inverse(a)), e_id), distance(compose(inverse(a), a), e_id))
        x, y, z = elems[i : i + 3]
        if g.multiply(g.multiply(x, y), z) != g.multiply(x, g.multiply(y, z)):
            coset_mismatch += 1
    out.at_most("associativity", assoc, 1e-12, "1000 random triples")
    out.at_most("identity", ident, 1e-12)
    out.at_most("inverse", inv, 1e-12)
    out.at_most("coset-associativity", coset_mismatch, 0, "exact (L, k) arithmetic", identity=False)
    coc = 0.0
    for L in range(g.order):
        for M in range(g.order):
            alpha = g.cocycle(L, M)
            lhs = compose(g.gamma(L), g.gamma(M))
            rhs = compose(g.gamma(g.pg.mul(L, M)), AffineIsometry.translation(alpha.x))
            coc = max(coc, distance(lhs, rhs))
    out.at_most("cocycle-identity", coc, 1e-12, f"all {g.order ** 2} pairs; alpha in lattice")
    lat_res = 0.0
    for L in g.pg.elements:
        c = g.lat.inv_basis @ L @ g.lat.basis
        lat_res = max(lat_res, float(np.max(np.abs(c - np.round(c)))))
    out.at_most("lattice-invariance", lat_res, 1e-9)
    dual = g.lat.dual()
    ks = rng.integers(-20, 21, size=(1000, g.dim))
    js = rng.integers(-20, 21, size=(1000, g.dim))
    pair = np.sum((ks @ g.lat.basis.T) * (js @ dual.basis.T), axis=1)
    out.at_most("dual-pairing", float(np.max(np.abs(pair - np.round(pair)))), 1e-9, "1000 pairs")
    out.flag("symmorphic", True, "yes" if g.is_symmorphic() else "no")


def suite_domain(g, rng, out):
    pd = build_param_domain(g)
    out.flag("param-domain-built", True, f"R has {len(pd.R)} facets")
    if g.dim == 2:
        area = area_2d(pd.R)
        covol = pd.dual.covolume
        out.at_most("area-identity", abs(g.order * area - covol), 1e-9, f"|Pi| area(R) = {g.order * area:.12g}")
        mc = union_area_mc(pd, 200000, rng)
        out.at_most("union-area-mc", abs(mc - g.order * area) / (g.order * area), 0.01, "relative", identity=False)
    else:
        out.skip("area-identity", "areas are computed in 2-D only")
    t = tiling_check(pd, rng.uniform(-1.5, 1.5, size=(10000, g.dim)))
    out.at_most("tiling-failures", t["failures"], 0, f"{t['unique']} unique of {t['total']}", identity=False)
    out.at_most("tiling-boundary-fraction", t["boundary"] / t["total"], 0.01, identity=False)
    lo, hi = pd.bounding_box()
    box = rng.uniform(lo, hi, size=(10000, g.dim))
    out.at_most("copies-disjoint", copies_overlap_count(pd, box), 0, "points in two open copies", identity=False)
    closed = pd.in_closure(box)
    opened = pd.in_open_copies(box, 0.0)
    out.at_most("boundary-negligible", np.count_nonzero(closed & ~opened) / len(box), 1e-4, identity=False)
    nus = rng.uniform(-3, 3, size=(1000, g.dim))
    idem = shift = 0.0
    multi = 0
    for nu in nus:
        r = reduce_to_param(pd, nu)
        idem = max(idem, float(np.max(np.abs(reduce_to_param(pd, r) - r))))
        k = np.linalg.solve(pd.dual.basis, r - nu)
        shift = max(shift, float(np.max(np.abs(k - np.round(k)))))
        cands = pd.closure_candidates(nu)
        if np.count_nonzero(pd.in_open_copies(cands)) > 1:
            multi += 1
    out.at_most("reduce-idempotent", idem, 1e-12)
    out.at_most("reduce-lattice-shift", shift, 1e-9)
    out.at_most("transversal", multi, 0, "cosets meeting two open copies", identity=False)
    omegas = sample_interior(pd, 20, rng)
    law = 0.0
    stab_bad = 0
    for w in omegas:
        for L in range(g.order):
            lw = pi_action_param(pd, L, w)
            law = max(law, float(np.max(np.abs(lw - pd.pg[L] @ w))))
            for M in range(g.order):
                a = pi_action_param(pd, M, lw)
                b = pi_action_param(pd, g.pg.mul(M, L), w)
                law = max(law, float(np.max(np.abs(a - b))))
        if stabilizer_pi(pd, w) != [0]:
            stab_bad += 1
    out.at_most("pi-action-law", law, 1e-12, "20 samples in R, all pairs")
    out.at_most("stabilizer-trivial-on-R", stab_bad, 0, identity=False)
    ys = pd.group.lat.points_near(np.zeros(g.dim), 3.0) @ pd.group.lat.basis.T
    chi = 0.0
    for w in omegas[:5]:
        for L, Lm in enumerate(g.pg.elements):
            lhs = character_eval(pi_action_param(pd, L, w), ys)
            rhs = character_eval(w, ys @ Lm)
            chi = max(chi, float(np.max(np.abs(lhs - rhs))))
    out.at_most("character-action", chi, 1e-10)


def suite_rep(g, rng, out):
    pd = build_param_domain(g)
    unit = hom = 0.0
    for w in rng.uniform(-1, 1, size=(3, g.dim)):
        ctx = InducedRepContext(g, w)
        for _ in range(100):
            e1, e2 = _rand_elements(g, rng, 2)
            A, B, C = induced_rep(ctx, e1), induced_rep(ctx, e2), induced_rep(ctx, g.multiply(e1, e2))
            hom = max(hom, float(np.max(np.abs(A @ B - C))))
            unit = max(unit, unitarity_residual(A), unitarity_residual(B), unitarity_residual(C))
    out.at_most("homomorphism", hom, 1e-10, "100 pairs x 3 frequencies")
    out.at_most("unitarity", unit, 1e-12)
    diag = 0.0
    for w in rng.uniform(-1, 1, size=(3, g.dim)):
        ctx = InducedRepContext(g, w)
        for k in rng.integers(-3, 4, size=(10, g.dim)):
            U = induced_rep(ctx, g.translation(k))
            y = g.lat.vector(k)
            want = np.array([character_eval(w, M.T @ y) for M in g.pg.elements])
            diag = max(diag, float(np.max(np.abs(U - np.diag(want)))))
    out.at_most("translation-restriction", diag, 1e-12)
    psi = psi_unit = 0.0
    for w in sample_interior(pd, 3, rng):
        ctx = InducedRepContext(g, w)
        elems = _rand_elements(g, rng, 50)
        for N in range(g.order):
            P = psi_intertwiner(ctx, N)
            psi_unit = max(psi_unit, unitarity_residual(P))
            ctxN = InducedRepContext(g, pi_action_param(pd, N, w))
            for e in elems:
                r = induced_rep(ctxN, e) - P @ induced_rep(ctx, e) @ P.conj().T
                psi = max(psi, float(np.max(np.abs(r))))
    out.at_most("psi-conjugation", psi, 1e-10, "50 elements, all N, 3 frequencies in R")
    out.at_most("psi-unitary", psi_unit, 1e-12)
    red = sum(not is_irreducible(InducedRepContext(g, w)) for w in sample_interior(pd, 20, rng))
    out.at_most("irreducible-on-R", red, 0, "20 samples in R", identity=False)
    if g.order > 1:
        bad = 0
        fixed_points = [np.zeros(g.dim)]
        for L in g.pg.elements[1:]:
            # Project a random point onto the fixed space of L.
            P = sum(np.linalg.matrix_power(L, j) for j in range(_order(L))) / _order(L)
            fixed_points.append(P @ rng.uniform(-1, 1, size=g.dim))
        for w in fixed_points:
            if is_irreducible(InducedRepContext(g, w)) or stabilizer_pi(pd, w) == [0]:
                bad += 1
        out.at_most("reducible-on-fixed-loci", bad, 0, f"{len(fixed_points)} fixed frequencies", identity=False)
    else:
        out.skip("reducible-on-fixed-loci", "trivial point group")


def _order(L):
    P = np.array(L)
    for j in range(1, 97):
        if np.max(np.abs(P - np.eye(len(P)))) < 1e-9:
            return j
        P = P @ L
    raise ValueError("matrix has no finite order")


def suite_chain(g, rng, out):
    pd = build_param_domain(g)
    tr = Truncation(g, 2.0, interior_grid(pd, 5), pd)
    funcs = [FrequencyFunction.gaussian(), FrequencyFunction.bump()]
    stage = max(float(np.max(np.abs(chain_closed_form(g, f, tr) - chain_staged(g, f, tr)))) for f in funcs)
    out.at_most("closed-form-vs-staged", stage, 1e-12, "gaussian and bump, full grid")
    phi = funcs[0]
    resid = max(intertwining_residual(g, e, phi, tr) for e in _rand_elements(g, rng, 20))
    out.at_most("intertwining", resid, 1e-9, "20 elements, 5x5 grid, dual ball radius 2")
    c = rng.normal(size=tr.shape) + 1j * rng.normal(size=tr.shape)
    n0 = np.linalg.norm(c)
    e = g.random_element(rng)
    norms = [
        np.linalg.norm(theta_apply(g, c, tr.omegas)),
        np.linalg.norm(v_apply(g, c, tr)),
        np.linalg.norm(tau_apply(g, e, SampledField(c, tr)).c),
        np.linalg.norm(sigma1_apply(g, e, c, tr.omegas)),
        np.linalg.norm(sigma2_apply(g, e, c, tr)),
        np.linalg.norm(eps_apply(np.transpose(c, (0, 2, 1)))),
    ]
    out.at_most("stage-unitarity", max(abs(v - n0) for v in norms) / n0, 1e-12, "relative norm change")
    m1 = 0.0
    for _ in range(200):
        e = g.random_element(rng)
        w = tr.omegas[rng.integers(len(tr.omegas))]
        z = tr.points[rng.integers(tr.size)]
        M = int(rng.integers(g.order))
        lhs = m1_eval(g, e, lambda o, zz, MM: rho_eval(g, phi, o, zz, MM), w, z, M)
        rhs = rho_eval(g, pi_hat_apply(g, e, phi), w, z, M)
        m1 = max(m1, abs(lhs - rhs))
    out.at_most("m1-intertwines-rho", m1, 1e-10, "200 random tuples")
    # V conjugates U kron sigma2 into U kron I.
    vres = 0.0
    for e in _rand_elements(g, rng, 5):
        inner = v_apply(g, c, tr, "inv")
        step = theta_apply(g, sigma1_apply(g, e, theta_apply(g, inner, tr.omegas, "inv"), tr.omegas), tr.omegas)
        lhs = v_apply(g, sigma2_apply(g, e, step, tr), tr)
        rhs = tau_apply(g, e, SampledField(c, tr)).c
        vres = max(vres, float(np.max(np.abs(lhs - rhs))))
    out.at_most("v-conjugation", vres, 1e-10, "V (Theta sigma1 Theta^-1 kron sigma2) V^-1 = U kron I")


def suite_subspaces(g, rng, out):
    pd = build_param_domain(g)
    omegas = sample_interior(pd, 3, rng)
    tr = Truncation(g, 1.0, omegas, pd)
    gens = generating_set(g)
    n_s = tr.size
    factors = [orthonormalize(rng.normal(size=(n_s, 2)) + 1j * rng.normal(size=(n_s, 2))) for _ in omegas]
    rf = RangeFunction.from_tensor(factors, g.order)
    rep = invariance_report(rf, g, gens, tr)
    out.at_most("structured-invariant", rep["residual"], 1e-10)
    angle = 0.0
    for i, F in enumerate(factors):
        got = tensor_form_check(rf, i)
        angle = max(angle, np.pi / 2 if got is None else principal_angle(got, F))
    out.at_most("tensor-form-roundtrip", angle, 1e-8, "principal angle")
    if g.order > 1:
        v = np.zeros((g.order * n_s, 1))
        v[int(np.flatnonzero(np.all(tr.coords == 0, axis=1))[0]), 0] = 1.0
        bad = RangeFunction([v] * len(omegas), g.order, n_s)
        rb = invariance_report(bad, g, gens, tr)
        out.at_least("counterexample-detected", rb["residual"], 0.1, "span{delta_id (x) delta_0}")
        detected = all(tensor_form_check(bad, i) is None for i in range(len(omegas)))
        out.flag("counterexample-not-tensor", detected)
    else:
        out.skip("counterexample-detected", "trivial point group: every subspace is a tensor")
    ctx = InducedRepContext(g, omegas[0])
    dims = [commutant_tensor_dimension(ctx, k) for k in (1, 2, 3)]
    out.at_most("commutant-tensor-law", max(abs(d - k * k) for d, k in zip(dims, (1, 2, 3))), 0, f"dims {dims}", identity=False)


_SUITE_FUNCS = {
    "group-laws": suite_group_laws,
    "domain": suite_domain,
    "rep": suite_rep,
    "chain": suite_chain,
    "subspaces": suite_subspaces,
}


def run_verify(g, suite="all", seed=0, tol=None, timing=False):
    """Run one suite or all of them; returns a JSON-ready report."""
    names = SUITES if suite == "all" else (suite,)
    for s in names:
        if s not in _SUITE_FUNCS:
            raise ValueError(f"unknown suite {s!r}; choose from {', '.join(SUITES)} or all")
    checks = []
    out = _Collector("validation", tol, timing)
    try:
        g.validate()
        out.flag("group-validation", True)
        valid = True
    except CrystalRepError as exc:
        out.flag("group-validation", False, f"{type(exc).__name__}: {exc}")
        valid = False
    checks.extend(("validation", c) for c in out.checks)
    for idx, s in enumerate(names):
        out = _Collector(s, tol, timing)
        if not valid:
            out.skip("suite", "group failed validation")
        else:
            rng = np.random.default_rng([seed, SUITES.index(s)])
            try:
                _SUITE_FUNCS[s](g, rng, out)
            except CrystalRepError as exc:
                out.flag("suite-error", False, f"{type(exc).__name__}: {exc}")
        checks.extend((s, c) for c in out.checks)
    rows = [dict(suite=s, **asdict(c)) for s, c in checks]
    if not timing:
        for r in rows:
            r["wall_time"] = None
    passed = all(r["status"] != "fail" for r in rows)
    return {
        "group": g.name,
        "suite": suite,
        "seed": seed,
        "generator": "numpy PCG64",
        "tolerance_override": tol,
        "center": list(default_center(g.dim)),
        "checks": rows,
        "passed": passed,
    }


CSV_FIELDS = ("suite", "name", "status", "residual", "tolerance", "detail", "wall_time")
