"""Equivariant coherent sheaves on an affine chart as monomial modules.

A module is a direct sum of pieces. A piece with generator degrees G and
killed degrees K has weights (G + S) minus (K + S), where S is the chart
semigroup. Every degree is stored as its canonical representative modulo
the units of S.
"""

import logging
from dataclasses import dataclass
from itertools import product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from stagger.errors import PreconditionError, Violation
from stagger.fan import ChartSpec
from stagger.lattice import LatticeQuotient, Vector, add, neg, pairing, sub, vector
from stagger.sstructure import SStructure

logger = logging.getLogger(__name__)

Constraint = Tuple[Vector, int]


@dataclass(frozen=True)
class Piece:
    generators: Tuple[Vector, ...]
    killed: Tuple[Vector, ...] = ()

    def __str__(self):
        return "<{} | {}>".format(list(self.generators), list(self.killed))


class MonomialModule:
    def __init__(self, chart: ChartSpec, pieces: Iterable[Piece]):
        self.chart = chart
        self._units = LatticeQuotient(chart.units, chart.n)
        self.presentation: Tuple[Piece, ...] = tuple(pieces)
        self.pieces: Tuple[Piece, ...] = tuple(self._normalize(p) for p in self.presentation)

    @classmethod
    def free(cls, chart: ChartSpec, degrees: Iterable[Sequence[int]]) -> "MonomialModule":
        return cls(chart, [Piece((vector(d),)) for d in degrees])

    @classmethod
    def zero(cls, chart: ChartSpec) -> "MonomialModule":
        return cls(chart, [])

    @classmethod
    def from_relations(cls, chart: ChartSpec, generators: Sequence[Sequence[int]],
                       relations: Iterable[Tuple[int, Sequence[int]]]) -> "MonomialModule":
        """Quotient of the free module on ``generators`` by e^mu * gen_i for (i, mu) in ``relations``."""
        killed: Dict[int, List[Vector]] = {i: [] for i in range(len(generators))}
        for i, mu in relations:
            if i not in killed:
                raise PreconditionError("{}: relation refers to a missing generator".format(i))
            if not chart.semigroup_contains(mu):
                raise PreconditionError("{}: relation degree not in the chart semigroup".format(tuple(mu)))
            killed[i].append(add(vector(generators[i]), vector(mu)))
        return cls(chart, [Piece((vector(g),), tuple(killed[i])) for i, g in enumerate(generators)])

    # normal form

    def _canonical(self, x: Sequence[int]) -> Vector:
        return self._units.canonical(x)

    def _minimal(self, degrees: Iterable[Vector]) -> List[Vector]:
        degrees = sorted(set(self._canonical(d) for d in degrees))
        return [d for d in degrees if not any(e != d and self.chart.semigroup_contains(sub(d, e)) for e in degrees)]

    def _normalize(self, piece: Piece) -> Piece:
        killed = self._minimal(piece.killed)
        gens = [g for g in self._minimal(piece.generators) if not self.in_ideal(g, killed)]
        return Piece(tuple(gens), tuple(killed))

    def in_ideal(self, x: Sequence[int], degrees: Iterable[Vector]) -> bool:
        """Is x in degrees + S?"""
        return any(self.chart.semigroup_contains(sub(x, d)) for d in degrees)

    # weights

    def piece_contains(self, piece: Piece, x: Sequence[int]) -> bool:
        return self.in_ideal(x, piece.generators) and not self.in_ideal(x, piece.killed)

    def multiplicity(self, x: Sequence[int]) -> int:
        return sum(1 for p in self.pieces if self.piece_contains(p, x))

    def is_zero(self) -> bool:
        return all(not p.generators for p in self.pieces)

    def generators(self) -> List[Vector]:
        return [g for p in self.pieces for g in p.generators]

    def __eq__(self, other):
        return isinstance(other, MonomialModule) and self.chart is other.chart and \
            [p for p in self.pieces if p.generators] == [p for p in other.pieces if p.generators]

    def __str__(self):
        return "[MonomialModule {}]".format(" + ".join(str(p) for p in self.pieces) or "0")


def validate_module(M: MonomialModule) -> List[Violation]:
    """Check the presentation of M piece by piece."""
    violations = []
    chart = M.chart.chart
    for i, (given, piece) in enumerate(zip(M.presentation, M.pieces)):
        gens = [M._canonical(g) for g in given.generators]
        if not gens:
            violations.append(Violation("empty-piece", chart, "piece {} has no generators".format(i)))
            continue
        for j, g in enumerate(gens):
            others = gens[:j] + gens[j + 1:]
            if M.in_ideal(g, others):
                violations.append(Violation("non-minimal-generator", chart,
                                            "piece {}: {} is a multiple of another generator".format(i, g)))
        for k in given.killed:
            if not M.in_ideal(M._canonical(k), gens):
                violations.append(Violation("killed-outside-generators", chart,
                                            "piece {}: {} is not in G + S".format(i, tuple(k))))
        if not piece.generators:
            violations.append(Violation("empty-piece", chart, "piece {}: every generator is killed".format(i)))
    return violations


class WeightRegion:
    """Exact degree support of a module with a box evaluator."""

    def __init__(self, module: MonomialModule):
        self.module = module

    def __contains__(self, x) -> bool:
        return self.module.multiplicity(x) > 0

    def query(self, box) -> List[Tuple[Vector, int]]:
        points = []
        for x in box_points(box, self.module.chart.n):
            m = self.module.multiplicity(x)
            if m:
                points.append((x, m))
        return points


def box_points(box: Union[int, Sequence[Tuple[int, int]]], n: int) -> List[Vector]:
    """Lattice points of [-r, r]^n for an integer box, else of the given ranges."""
    if isinstance(box, int):
        ranges = [(-box, box)] * n
    else:
        ranges = list(box)
    return [tuple(p) for p in product(*(range(lo, hi + 1) for lo, hi in ranges))]


def supp_query(M: MonomialModule, box) -> List[Tuple[Vector, int]]:
    return WeightRegion(M).query(box)


# 1. Supports and levels

def support_faces(M: MonomialModule, piece: Piece, x: Sequence[int]) -> List[int]:
    """Faces of the chart whose orbit sees the weight x of the piece."""
    faces = []
    for c in M.chart.faces:
        dual_c = [r for r in M.chart.face_cone(c).rays]
        if not any(all(pairing(sub(x, k), v) >= 0 for v in dual_c) for k in piece.killed):
            faces.append(c)
    return faces


def module_max_level(M: MonomialModule, A: SStructure, c: int) -> float:
    """Largest <xi, A_C> over the weights of M on the orbit of c, -inf if there are none."""
    M.chart.check_face(c)
    levels = [pairing(g, A[c]) for p in M.pieces for g in p.generators if c in support_faces(M, p, g)]
    return max(levels) if levels else float("-inf")


def in_serre_level(M: MonomialModule, A: SStructure, w: int) -> bool:
    return all(module_max_level(M, A, c) <= w for c in M.chart.faces)


# 2. Truncation engine

def _satisfies(s: Vector, alternative: List[Constraint]) -> bool:
    return all(pairing(s, u) >= b for u, b in alternative)


def _minimal_solutions(chart: ChartSpec, per_face: List[List[List[Constraint]]]) -> List[Vector]:
    """Minimal s in S meeting, on every face, at least one of its alternatives.

    An alternative is a list of constraints <s, u> >= b with u in the chart cone.
    """
    n = chart.n
    hb = chart.generators
    positive = [(u, b) for alternatives in per_face for alternative in alternatives for u, b in alternative if b > 0]
    bounds = []
    for h in hb:
        top = 0
        for u, b in positive:
            val = pairing(h, u)
            if val > 0:
                top = max(top, -(-b // val))
        bounds.append(top)
    found = set()
    for coeffs in product(*(range(t + 1) for t in bounds)):
        s = (0,) * n
        for a, h in zip(coeffs, hb):
            if a:
                s = add(s, tuple(a * x for x in h))
        if all(any(_satisfies(s, alternative) for alternative in alternatives) for alternatives in per_face):
            found.add(s)
    found = sorted(found)
    return [s for s in found if not any(t != s and chart.semigroup_contains(sub(s, t)) for t in found)]


def _killed_alternatives(M: MonomialModule, piece: Piece, c: int) -> List[List[Constraint]]:
    rays = M.chart.face_cone(c).rays
    return [[(v, pairing(k, v)) for v in rays] for k in piece.killed]


def _keep(M: MonomialModule, piece: Piece, per_face: List[List[List[Constraint]]]) -> Piece:
    kept = set()
    for g in piece.generators:
        shifted = [[[(u, b - pairing(g, u)) for u, b in alternative] for alternative in alternatives]
                   for alternatives in per_face]
        for s in _minimal_solutions(M.chart, shifted):
            kept.add(add(g, s))
    return Piece(tuple(kept), piece.killed)


def sigma_prime_le_w(M: MonomialModule, A: SStructure, w: int) -> MonomialModule:
    """Largest submodule whose weights have level at most w on every orbit with A_D != 0."""
    pieces = []
    for piece in M.pieces:
        per_face = []
        for d in M.chart.faces:
            if A.is_zero_at(d):
                continue
            per_face.append([[(neg(A[d]), -w)]] + _killed_alternatives(M, piece, d))
        pieces.append(_keep(M, piece, per_face))
    result = MonomialModule(M.chart, pieces)
    logger.debug("sigma'<=%d: %d -> %d generators", w, len(M.generators()), len(result.generators()))
    return result


def i_Z_hat_shriek(M: MonomialModule, A: SStructure) -> MonomialModule:
    """Largest submodule supported on the orbits with A_C != 0."""
    pieces = []
    for piece in M.pieces:
        per_face = [_killed_alternatives(M, piece, e) for e in M.chart.faces if A.is_zero_at(e)]
        pieces.append(_keep(M, piece, per_face))
    return MonomialModule(M.chart, pieces)


def sigma_le_w(M: MonomialModule, A: SStructure, w: int) -> MonomialModule:
    if w >= 0:
        return sigma_prime_le_w(M, A, w)
    return sigma_prime_le_w(i_Z_hat_shriek(M, A), A, w)


def quotient_module(M: MonomialModule, N: MonomialModule) -> MonomialModule:
    """M / N for a submodule N presented piece by piece with the same killed degrees."""
    if len(M.pieces) != len(N.pieces):
        raise PreconditionError("quotient_module: {} pieces against {}".format(len(M.pieces), len(N.pieces)))
    return MonomialModule(M.chart, [Piece(p.generators, p.killed + q.generators)
                                    for p, q in zip(M.pieces, N.pieces)])


def verify_S4(M: MonomialModule, A: SStructure, w: int) -> bool:
    """sigma<=w M lies in level w and M / sigma<=w M has nothing in level w."""
    sub_module = sigma_le_w(M, A, w)
    quotient = quotient_module(M, sub_module)
    return sigma_le_w(quotient, A, w).is_zero() and in_serre_level(sub_module, A, w)


# 3. Extension of line bundles from an orbit

def extend_line_bundle(chart: ChartSpec, xi: Sequence[int], A: SStructure, w: int,
                       face: Optional[int] = None) -> MonomialModule:
    """Truncate the line bundle of weight xi on the closure of the orbit of ``face``.

    ``face`` defaults to the zero cone, where the module is free.
    """
    d = chart.faces[0] if face is None else chart.check_face(face)
    xi = vector(xi)
    if pairing(xi, A[d]) > w:
        raise PreconditionError("{}: level {} at cone {} exceeds {}".format(xi, pairing(xi, A[d]),
                                                                         chart.fan.label(d), w))
    lattice = chart.orbit_lattices[d]
    killed = [add(xi, h) for h in chart.generators if not lattice.contains(h)]
    module = MonomialModule(chart, [Piece((xi,), tuple(killed))])
    truncated = sigma_prime_le_w(module, A, w)
    if not any(lattice.contains(sub(g, xi)) for g in truncated.generators()):
        raise PreconditionError("{}: the orbit weight does not survive truncation at {}".format(xi, w))
    return truncated
