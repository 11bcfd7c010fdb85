"""Command-line front end: ``crystalrep <verb> ...``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from .config import default_center, env_tolerance
from .crystal import GroupElement
from .domain import area_2d, build_param_domain, dirichlet_domain, vertices_2d
from .errors import CrystalRepError, DimensionUnsupported, ParseError
from .groupspec import group_to_dict, load_group
from .plotting import PLOT_KINDS, plot
from .rep import InducedRepContext, induced_rep, is_irreducible, unitarity_residual
from .verify import CSV_FIELDS, SUITES, run_verify


def _floats(text, n=None, what="vector"):
    try:
        v = [float(t) for t in text.split(",")]
    except ValueError:
        raise ParseError(f"{what} must be comma-separated numbers, got {text!r}") from None
    if n is not None and len(v) != n:
        raise ParseError(f"{what} needs {n} components, got {len(v)}")
    return np.array(v)


def parse_element(text, g):
    """``"L:k1,k2"`` with ``L`` a point-group index and ``k`` lattice coordinates."""
    try:
        head, tail = text.split(":")
        L = int(head)
        k = [int(t) for t in tail.split(",")] if tail.strip() else []
    except ValueError:
        raise ParseError(f"element must look like 'L:k1,k2', got {text!r}") from None
    if not 0 <= L < g.order:
        raise ParseError(f"point-group index {L} out of range 0..{g.order - 1}")
    if len(k) != g.dim:
        raise ParseError(f"element needs {g.dim} lattice coordinates")
    return GroupElement(L, k)


def _complex_json(M):
    M = np.asarray(M)
    return {"real": np.real(M).tolist(), "imag": np.imag(M).tolist()}


def _poly_json(p):
    out = {
        "halfspaces": [{"normal": h.normal.tolist(), "offset": h.offset, "open": h.open} for h in p.halfspaces]
    }
    if p.dim == 2:
        out["vertices"] = (vertices_2d(p) + 0.0).tolist()
        out["area"] = area_2d(p)
    return out


def _emit(text, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj):
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


# -- verbs -----------------------------------------------------------------


def cmd_info(args, g):
    cocycles = [[list(g.cocycle(L, M).k) for M in range(g.order)] for L in range(g.order)]
    info = group_to_dict(g)
    info.update(
        order=g.order,
        symmorphic=g.is_symmorphic(),
        dual_lattice=g.lat.dual().basis.tolist(),
        covolume=g.lat.covolume,
        cocycle=cocycles,
    )
    _emit(_json(info), args.out)
    return 0


def cmd_dual(args, g):
    _emit(_json(group_to_dict(g.dual())), args.out)
    return 0


def cmd_domain(args, g):
    a = _floats(args.center, g.dim, "centre") if args.center else np.array(default_center(g.dim))
    if args.of == "group":
        body = {"of": "group", "center": a.tolist(), "domain": _poly_json(dirichlet_domain(g, a))}
    else:
        pd = build_param_domain(g, a)
        body = {
            "of": "dual",
            "center": a.tolist(),
            "domain": _poly_json(pd.R),
            "copies": [_poly_json(c) for c in pd.pi_copies],
        }
        if g.dim == 2:
            body["param_area"] = pd.area()
            body["dual_covolume"] = pd.dual.covolume
    _emit(_json(body), args.out)
    return 0


def cmd_rep_matrix(args, g):
    w = _floats(args.omega, g.dim, "omega")
    e = parse_element(args.element, g)
    ctx = InducedRepContext(g, w)
    U = induced_rep(ctx, e)
    body = {
        "group": g.name,
        "omega": w.tolist(),
        "element": {"L": e.L_index, "k": list(e.k)},
        "basis": list(range(g.order)),
        "matrix": _complex_json(np.round(U, 15) + 0.0),
        "unitarity_residual": unitarity_residual(U),
        "irreducible": is_irreducible(ctx),
    }
    _emit(_json(body), args.out)
    return 0


def _report_csv(report):
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for row in report["checks"]:
        w.writerow({k: ("" if row.get(k) is None else row.get(k)) for k in CSV_FIELDS})
    return buf.getvalue()


def cmd_verify(args, g):
    tol = args.tol if args.tol is not None else env_tolerance(None)
    report = run_verify(g, args.suite, seed=args.seed, tol=tol, timing=args.timing)
    if args.figures:
        os.makedirs(args.figures, exist_ok=True)
        figs = []
        if g.dim == 2 and report["checks"][0]["status"] == "pass":
            for what in PLOT_KINDS:
                path = os.path.join(args.figures, f"{g.name or 'group'}-{what}.svg")
                plot(g, what, path)
                figs.append(path)
        report["figures"] = figs
    text = _report_csv(report) if args.format == "csv" else _json(report)
    _emit(text, args.out)
    return 0 if report["passed"] else 1


def _load_vectors(rows, length, what):
    vecs = []
    for r in rows:
        v = np.array([complex(x[0], x[1]) if isinstance(x, list) else complex(x) for x in r])
        if v.shape != (length,):
            raise ParseError(f"{what} vectors must have {length} entries")
        vecs.append(v)
    return np.array(vecs).T.reshape(length, len(vecs))


def load_range_function(doc, g):
    """Build a truncation and range function from a JSON document (see README)."""
    from .decomp import RangeFunction, Truncation, orthonormalize

    try:
        radius = float(doc.get("radius", 1.0))
        omegas = np.array(doc["omegas"], dtype=float)
    except (KeyError, TypeError, ValueError):
        raise ParseError("range file needs 'omegas' (list of frequencies) and optional 'radius'") from None
    tr = Truncation(g, radius, omegas)
    n_s, n_pi = tr.size, g.order
    index = {tuple(k): i for i, k in enumerate(tr.coords.tolist())}
    if "support" in doc:
        cols = []
        for k in doc["support"]:
            if tuple(k) not in index:
                raise ParseError(f"support point {k} is not in the dual ball of radius {radius}")
            v = np.zeros(n_s)
            v[index[tuple(k)]] = 1.0
            cols.append(v)
        F = np.array(cols).T.reshape(n_s, len(cols))
        return tr, RangeFunction.from_tensor([F] * len(omegas), n_pi)
    if "tensor_factor" in doc:
        F = orthonormalize(_load_vectors(doc["tensor_factor"], n_s, "tensor_factor"))
        return tr, RangeFunction.from_tensor([F] * len(omegas), n_pi)
    if "spanning_vectors" in doc:
        B = orthonormalize(_load_vectors(doc["spanning_vectors"], n_pi * n_s, "spanning_vectors"))
        return tr, RangeFunction([B] * len(omegas), n_pi, n_s)
    raise ParseError("range file needs one of 'support', 'tensor_factor' or 'spanning_vectors'")


def cmd_subspace_check(args, g):
    from .decomp import invariance_report, tensor_form_check
    from .rep import generating_set

    try:
        with open(args.range, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read range file: {exc}") from None
    tr, rf = load_range_function(doc, g)
    elems = [parse_element(s, g) for s in doc["elements"]] if "elements" in doc else generating_set(g)
    rep = invariance_report(rf, g, elems, tr)
    tensor = []
    for i in range(len(rf)):
        F = tensor_form_check(rf, i)
        tensor.append(None if F is None else int(F.shape[1]))
    body = {
        "group": g.name,
        "dual_points": tr.coords.tolist(),
        "subspace_dims": rf.dims(),
        "invariance": rep,
        "tensor_factor_dims": tensor,
    }
    _emit(_json(body), args.out)
    return 0 if rep["invariant"] else 1


def cmd_plot(args, g):
    if g.dim != 2:
        raise DimensionUnsupported(f"plots need a 2-D group, got dimension {g.dim}")
    a = _floats(args.center, 2, "centre") if args.center else None
    data = plot(g, args.what, args.out, center=a, of=args.of)
    summary = {name: (v + 0.0).tolist() for name, v in data["polygons"].items()}
    sys.stdout.write(_json({"svg": args.out, "polygons": summary}))
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="crystalrep", description="Crystal groups, induced representations and their decompositions.")
    p.add_argument("--group", default="pg", help="built-in name (p1, pm, pg, p4m) or path to a JSON group file")
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("info", help="group data, cocycle table and symmorphic flag")
    s.add_argument("--out")
    s.set_defaults(func=cmd_info)

    s = sub.add_parser("dual", help="the dual group as a JSON group file")
    s.add_argument("--out")
    s.set_defaults(func=cmd_dual)

    s = sub.add_parser("domain", help="Dirichlet domain (of the dual group by default)")
    s.add_argument("--of", choices=("dual", "group"), default="dual")
    s.add_argument("--center", help="comma-separated centre point")
    s.add_argument("--out")
    s.set_defaults(func=cmd_domain)

    s = sub.add_parser("rep-matrix", help="matrix of one element in the induced representation")
    s.add_argument("--omega", required=True, help="comma-separated frequency")
    s.add_argument("--element", required=True, help="'L:k1,k2' (point-group index and lattice coordinates)")
    s.add_argument("--out")
    s.set_defaults(func=cmd_rep_matrix)

    s = sub.add_parser("verify", help="run verification suites")
    s.add_argument("--suite", choices=SUITES + ("all",), default="all")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--tol", type=float, default=None, help="override identity-check tolerances")
    s.add_argument("--format", choices=("json", "csv"), default="json")
    s.add_argument("--figures", help="directory for SVG figures")
    s.add_argument("--timing", action="store_true", help="record wall time per check")
    s.add_argument("--out")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("subspace-check", help="test a range function for invariance")
    s.add_argument("--range", required=True, help="JSON range-function file")
    s.add_argument("--out")
    s.set_defaults(func=cmd_subspace_check)

    s = sub.add_parser("plot", help="SVG figure of a domain or orbit")
    s.add_argument("--what", choices=PLOT_KINDS, default="domain")
    s.add_argument("--of", choices=("dual", "group"), default="dual")
    s.add_argument("--center", help="comma-separated centre point")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_plot)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    # verify reports validation failures itself; other verbs need a valid group.
    validate = args.verb != "verify"
    try:
        g = load_group(args.group, validate=validate)
        return args.func(args, g)
    except CrystalRepError as exc:
        sys.stderr.write(f"crystalrep: {type(exc).__name__}: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
