"""Perversities, dual perversities, enumeration and the self-duality search."""

import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, Iterator, List, Optional, Union

import networkx as nx

from stagger.errors import InconsistentWitnessError, MissingAssignmentError, UnboundedComponentError, Violation
from stagger.fan import Fan, orbit_lattice
from stagger.lattice import Vector, content, neg, pairing
from stagger.picard import PLFunction, altitude
from stagger.sstructure import SStructure

logger = logging.getLogger(__name__)

DEFAULT_BOUND = 3


class Perversity:
    """An integer for every cone."""

    def __init__(self, values: Dict[int, int]):
        self.values: Dict[int, int] = {int(c): int(v) for c, v in values.items()}

    def __getitem__(self, c: int) -> int:
        if c not in self.values:
            raise MissingAssignmentError("{}: no perversity value for this cone".format(c))
        return self.values[c]

    def __eq__(self, other):
        return isinstance(other, Perversity) and self.values == other.values

    def __str__(self):
        return "[Perversity {}]".format(", ".join("{}: {}".format(c, v) for c, v in sorted(self.values.items())))

    def shifted(self, m: int) -> "Perversity":
        return Perversity({c: v + m for c, v in self.values.items()})


@dataclass
class PerversityReport:
    all_pairs: List[Violation] = field(default_factory=list)
    codim1: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.all_pairs and not self.codim1

    @property
    def consistent(self) -> bool:
        """The full check and the codimension-one check agree."""
        return bool(self.all_pairs) == bool(self.codim1)

    def __bool__(self):
        return self.ok


def staggered_codimension(F: Fan, A: SStructure, chi: PLFunction, c: int) -> int:
    return -F.cod(c) + altitude(A, chi, c)


def _check_pair(F, A, chi, p, small, big, bound, kind) -> Optional[Violation]:
    step = p[big] - p[small]
    if 0 <= step <= bound:
        return None
    return Violation(kind, big, "p({}) - p({}) = {} not in [0, {}]".format(F.label(big), F.label(small), step, bound))


def validate_perversity(F: Fan, A: SStructure, chi: PLFunction, p: Perversity) -> PerversityReport:
    """Both the condition over all face pairs and its codimension-one reduction."""
    missing = [c for c in range(len(F)) if c not in p.values]
    if missing:
        raise MissingAssignmentError("{}: cones without a perversity value".format(missing))
    alt = {c: altitude(A, chi, c) for c in range(len(F))}
    report = PerversityReport()
    for small, big in sorted(F.face_graph.edges()):
        bound = F.dim(big) + alt[big] - F.dim(small) - alt[small]
        v = _check_pair(F, A, chi, p, small, big, bound, "face-pair")
        if v:
            report.all_pairs.append(v)
    for small, big in F.codim1_pairs:
        v = _check_pair(F, A, chi, p, small, big, 1 + alt[big] - alt[small], "codim-one")
        if v:
            report.codim1.append(v)
    return report


def is_perversity(F: Fan, A: SStructure, chi: PLFunction, p: Perversity) -> bool:
    return validate_perversity(F, A, chi, p).ok


def dual_perversity(F: Fan, A: SStructure, chi: PLFunction, p: Perversity) -> Perversity:
    """p̄(C) = -cod(C) + alt(C) - p(C)."""
    return Perversity({c: staggered_codimension(F, A, chi, c) - p[c] for c in range(len(F))})


def twisted_perversity(F: Fan, A: SStructure, chi: PLFunction, p: Perversity) -> Perversity:
    """p(C) + chi(-A_C): the perversity carried along by a twist with a line bundle."""
    return Perversity({c: p[c] + altitude(A, chi, c) for c in range(len(F))})


# 1. Enumeration

def _constraint_graph(F: Fan) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(range(len(F)))
    graph.add_edges_from(F.codim1_pairs)
    return graph


def enumerate_perversities(F: Fan, A: SStructure, chi: PLFunction, normalize_at: int = 0, value: int = 0,
                           anchors: Optional[Dict[int, int]] = None) -> Iterator[Perversity]:
    """Every perversity with the given anchor values, in a deterministic order.

    Each connected component of the codimension-one graph needs one anchor.
    """
    anchors = dict(anchors or {})
    anchors.setdefault(F.check_id(normalize_at), value)
    graph = _constraint_graph(F)
    order: List[int] = []
    for component in sorted((sorted(c) for c in nx.connected_components(graph)), key=lambda c: c[0]):
        anchored = [c for c in component if c in anchors]
        if not anchored:
            raise UnboundedComponentError("{}: component has no anchor".format([F.label(c) for c in component]))
        root = anchored[0]
        order.extend([root] + [v for _, v in nx.bfs_edges(graph, root, sort_neighbors=sorted)])
    alt = {c: altitude(A, chi, c) for c in range(len(F))}
    gap = {(a, b): 1 + alt[b] - alt[a] for a, b in F.codim1_pairs}
    below = {c: [(a, gap[(a, b)]) for a, b in F.codim1_pairs if b == c] for c in range(len(F))}
    above = {c: [(b, gap[(a, b)]) for a, b in F.codim1_pairs if a == c] for c in range(len(F))}
    values: Dict[int, int] = {}

    def admissible(c: int, v: int) -> bool:
        return all(values[a] <= v <= values[a] + g for a, g in below[c] if a in values) and \
            all(values[b] - g <= v <= values[b] for b, g in above[c] if b in values)

    def search(i: int) -> Iterator[Perversity]:
        if i == len(order):
            yield Perversity(dict(values))
            return
        c = order[i]
        if c in anchors:
            options = [anchors[c]]
        else:
            lo = max([values[a] for a, _ in below[c] if a in values] + [values[b] - g for b, g in above[c]
                                                                          if b in values])
            hi = min([values[a] + g for a, g in below[c] if a in values] + [values[b] for b, _ in above[c]
                                                                             if b in values])
            options = range(lo, hi + 1)
        for v in options:
            if admissible(c, v):
                values[c] = v
                yield from search(i + 1)
                del values[c]

    yield from search(0)


def count_perversities(F: Fan, A: SStructure, chi: PLFunction, normalize_at: int = 0, value: int = 0,
                       anchors: Optional[Dict[int, int]] = None) -> int:
    return sum(1 for _ in enumerate_perversities(F, A, chi, normalize_at, value, anchors))


# 2. Self-duality

@dataclass
class SelfDualitySolution:
    chi: PLFunction
    p: Perversity

    def __bool__(self):
        return True


@dataclass
class InfeasibilityCertificate:
    is_global: bool
    bound: int
    reason: str
    cones: List[int] = field(default_factory=list)

    def __bool__(self):
        return False

    def __str__(self):
        if self.is_global:
            return "globally infeasible: {}".format(self.reason)
        return "infeasible within bound {}: {}".format(self.bound, self.reason)


def parity_obstruction(F: Fan, A: SStructure) -> List[int]:
    """Cones of odd dimension where chi(-A_C) is forced to be even."""
    return [c for c in range(len(F)) if F.dim(c) % 2 == 1 and content(A[c]) % 2 == 0]


def _local_candidates(F: Fan, A: SStructure, d: int, faces: List[int], bound: int) -> List[Vector]:
    """Covectors on the maximal cone d passing parity and the codim-one test inside d."""
    quotient = orbit_lattice(F, d)
    pairs = [(a, b) for a, b in F.codim1_pairs if a in faces and b in faces]
    good = []
    for q in product(range(-bound, bound + 1), repeat=quotient.rank):
        chi_d = quotient.lift(q)
        alt = {c: pairing(chi_d, neg(A[c])) for c in faces}
        if any((F.dim(c) + alt[c]) % 2 for c in faces):
            continue
        if any(alt[b] - alt[a] + 1 < 0 for a, b in pairs):
            continue
        good.append((sum(abs(x) for x in q), -alt[d], q, chi_d))
    good.sort()
    return [entry[3] for entry in good]


def find_selfdual(F: Fan, A: SStructure, bound: int = DEFAULT_BOUND) -> Union[SelfDualitySolution,
                                                                              InfeasibilityCertificate]:
    """Search a line bundle chi making (A, p) self-dual with p(C) = (dim C + chi(-A_C)) / 2."""
    blocked = parity_obstruction(F, A)
    if blocked:
        logger.info("parity obstruction at cones %s", [F.label(c) for c in blocked])
        return InfeasibilityCertificate(True, bound, "parity obstruction", blocked)
    maximal = F.maximal
    faces = {d: F.faces_of(d) for d in maximal}
    candidates = {d: _local_candidates(F, A, d, faces[d], bound) for d in maximal}
    chosen: Dict[int, Vector] = {}
    visited = [0]

    def compatible(d: int, chi_d: Vector) -> bool:
        for e, chi_e in chosen.items():
            for c in set(faces[d]) & set(faces[e]):
                if not orbit_lattice(F, c).same_class(chi_d, chi_e):
                    return False
        return True

    def search(i: int) -> bool:
        if i == len(maximal):
            return True
        d = maximal[i]
        for chi_d in candidates[d]:
            visited[0] += 1
            if compatible(d, chi_d):
                chosen[d] = chi_d
                if search(i + 1):
                    return True
                del chosen[d]
        return False

    found = search(0)
    logger.debug("self-duality search visited %d candidates", visited[0])
    if not found:
        return InfeasibilityCertificate(False, bound, "no compatible line bundle in the box")
    per_cone = {}
    for c in range(len(F)):
        d = next(m for m in maximal if c in faces[m])
        per_cone[c] = orbit_lattice(F, c).canonical(chosen[d])
    chi = PLFunction(F, per_cone)
    p = Perversity({c: (F.dim(c) + altitude(A, chi, c)) // 2 for c in range(len(F))})
    report = validate_perversity(F, A, chi, p)
    if not report.ok:
        raise InconsistentWitnessError("{}: self-dual candidate is not a perversity: {}".format(
            p, "; ".join(str(v) for v in report.all_pairs + report.codim1)))
    return SelfDualitySolution(chi, p)
