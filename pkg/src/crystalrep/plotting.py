"""SVG figures of fundamental domains, their point-group copies and orbits."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.patches import Polygon  # noqa: E402

from .config import default_center  # noqa: E402
from .domain import build_param_domain, dirichlet_domain, orbit_points, vertices_2d  # noqa: E402
from .errors import DimensionUnsupported  # noqa: E402

PLOT_KINDS = ("domain", "orbit", "param-domain")

# Fixed salt and no timestamp keep the SVG bytes reproducible.
_RC = {"svg.hashsalt": "crystalrep", "svg.fonttype": "none"}


def _polygon(ax, verts, gid, face, alpha, label=None):
    patch = Polygon(verts, closed=True, facecolor=face, edgecolor="black", linewidth=0.8, alpha=alpha, label=label)
    patch.set_gid(gid)
    ax.add_patch(patch)


def _lattice_dots(ax, lat, lo, hi):
    center = 0.5 * (lo + hi)
    radius = float(np.linalg.norm(hi - lo))
    pts = lat.points_near(center, radius) @ lat.basis.T
    keep = np.all((pts >= lo) & (pts <= hi), axis=1)
    pts = pts[keep]
    coll = ax.scatter(pts[:, 0], pts[:, 1], s=6, color="0.3", zorder=3)
    coll.set_gid("lattice-points")
    return pts


def figure_data(g, what, center=None, of="dual"):
    """Polygons and point sets for a plot, in data coordinates."""
    if g.dim != 2:
        raise DimensionUnsupported(f"plots need a 2-D group, got dimension {g.dim}")
    if what not in PLOT_KINDS:
        raise ValueError(f"unknown plot {what!r}; choose from {', '.join(PLOT_KINDS)}")
    a = np.asarray(default_center(2) if center is None else center, dtype=float)
    data = {"what": what, "center": a, "polygons": {}, "lattice": None, "orbit": None}
    if what == "param-domain":
        pd = build_param_domain(g, a)
        data["polygons"]["domain-R"] = vertices_2d(pd.R)
        for i, c in enumerate(pd.pi_copies):
            if i:
                data["polygons"][f"copy-{i}"] = vertices_2d(c)
        data["lattice"] = pd.dual
        return data
    if what == "domain" and of == "dual":
        gg = g.dual()
    else:
        gg = g
    D = dirichlet_domain(gg, a)
    data["polygons"]["domain-R"] = vertices_2d(D)
    data["lattice"] = gg.lat
    if what == "orbit":
        radius = 2.5 * float(np.max(np.linalg.norm(gg.lat.basis, axis=0)))
        data["orbit"] = np.array([p for _, p in orbit_points(gg, a, radius)])
    return data


def render_svg(data, out_path, title=None):
    """Write the figure described by ``figure_data`` to an SVG file."""
    polys = data["polygons"]
    allv = np.vstack(list(polys.values()))
    if data["orbit"] is not None:
        allv = np.vstack([allv, data["orbit"]])
    lo, hi = allv.min(axis=0), allv.max(axis=0)
    pad = 0.15 * float(np.max(hi - lo))
    lo, hi = lo - pad, hi + pad
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(5, 5))
        try:
            for i, (gid, v) in enumerate(polys.items()):
                first = gid == "domain-R"
                _polygon(ax, v, gid, "tab:orange" if first else "tab:blue", 0.7 if first else 0.25)
            _lattice_dots(ax, data["lattice"], lo, hi)
            if data["orbit"] is not None:
                o = data["orbit"]
                coll = ax.scatter(o[:, 0], o[:, 1], s=14, marker="x", color="tab:red", zorder=4)
                coll.set_gid("orbit-points")
            c = data["center"]
            ax.plot([c[0]], [c[1]], marker="o", color="black", markersize=3)
            ax.set_xlim(lo[0], hi[0])
            ax.set_ylim(lo[1], hi[1])
            ax.set_aspect("equal")
            ax.grid(True, linewidth=0.3, alpha=0.5)
            if title:
                ax.set_title(title, fontsize=10)
            fig.savefig(out_path, format="svg", metadata={"Date": None})
        finally:
            plt.close(fig)
    return out_path


def plot(g, what, out_path, center=None, of="dual"):
    data = figure_data(g, what, center, of)
    title = f"{g.name or 'group'}: {what}" + (" (dual group)" if what == "domain" and of == "dual" else "")
    render_svg(data, out_path, title)
    return data
