"""SVG pictures of fans and face posets. Never imported by the algebraic core."""

import logging
from typing import Dict, Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import networkx as nx  # noqa: E402

from stagger.errors import PreconditionError  # noqa: E402
from stagger.fan import Fan  # noqa: E402
from stagger.perversity import Perversity  # noqa: E402
from stagger.sstructure import SStructure  # noqa: E402

logger = logging.getLogger(__name__)

RAY_LENGTH = 3.0

colors = {
    'cone': 'lightsteelblue',
    'ray': 'black',
    'sstructure': 'red',
    'perversity': 'darkgreen',
}


def _centre(F: Fan, c: int):
    rays = [F.rays[i] for i in F.cone_rays[c]]
    if not rays:
        return 0.0, 0.0
    x = sum(r[0] / max(abs(r[0]), abs(r[1])) for r in rays) / len(rays)
    y = sum(r[1] / max(abs(r[0]), abs(r[1])) for r in rays) / len(rays)
    return x * RAY_LENGTH * 0.6, y * RAY_LENGTH * 0.6


def render_fan(F: Fan, path: str, A: Optional[SStructure] = None, p: Optional[Perversity] = None):
    """Rays, two-dimensional cones, arrows for A_C and the values of p of a rank-2 fan."""
    if F.n != 2:
        raise PreconditionError("render_fan: fan has rank {}, only rank 2 can be drawn".format(F.n))
    plt.figure(figsize=(6, 6))
    for c, rays in enumerate(F.cone_rays):
        if len(rays) == 2:
            corners = [(0, 0)] + [tuple(RAY_LENGTH * a / max(abs(b) for b in F.rays[i]) for a in F.rays[i])
                                  for i in rays]
            plt.fill([x for x, _ in corners], [y for _, y in corners], color=colors['cone'], alpha=0.5)
    for i, r in enumerate(F.rays):
        scale = RAY_LENGTH / max(abs(a) for a in r)
        plt.plot([0, r[0] * scale], [0, r[1] * scale], color=colors['ray'], lw=2)
        plt.annotate(str(i), (r[0] * scale, r[1] * scale), fontsize=10)
    for c in range(len(F)):
        x, y = _centre(F, c)
        if A is not None and not A.is_zero_at(c):
            a = A[c]
            plt.arrow(x, y, a[0] * 0.4, a[1] * 0.4, color=colors['sstructure'], head_width=0.08,
                      length_includes_head=True)
        if p is not None:
            plt.annotate("p={}".format(p[c]), (x, y - 0.25), color=colors['perversity'], fontsize=9)

    legend_elements = [
        plt.Line2D([0], [0], color=color, lw=2, label=name.capitalize())
        for name, color in colors.items()
    ]
    plt.legend(handles=legend_elements, loc='upper left', fontsize='small')
    plt.axis('equal')
    plt.title("Fan with {} rays and {} cones".format(len(F.rays), len(F)), fontsize=14)
    plt.savefig(path, format="svg")
    plt.close()
    logger.info("wrote fan picture to %s", path)


def _layers(F: Fan) -> Dict[int, tuple]:
    by_dim: Dict[int, list] = {}
    for c in range(len(F)):
        by_dim.setdefault(F.dim(c), []).append(c)
    pos = {}
    for d, cones in by_dim.items():
        for i, c in enumerate(cones):
            pos[c] = (i - (len(cones) - 1) / 2.0, float(d))
    return pos


def render_poset(F: Fan, path: str, p: Optional[Perversity] = None):
    """The face poset, one row per cone dimension, labelled by ray indices."""
    plt.figure(figsize=(8, 6))
    labels = {c: F.label(c) if p is None else "{}\np={}".format(F.label(c), p[c]) for c in range(len(F))}
    hasse = nx.DiGraph((a, b) for a, b in F.face_graph.edges() if F.dim(b) - F.dim(a) == 1)
    hasse.add_nodes_from(range(len(F)))
    nx.draw(hasse, _layers(F), labels=labels, node_size=900, font_size=8, node_color=colors['cone'],
            edge_color=colors['ray'], arrows=False)
    plt.title("Face poset of a rank {} fan".format(F.n), fontsize=14)
    plt.savefig(path, format="svg")
    plt.close()
    logger.info("wrote face poset to %s", path)
