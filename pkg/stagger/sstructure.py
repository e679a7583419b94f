"""s-structures on fans, orbit steps, Serre levels and the spanning check."""

import logging
from dataclasses import dataclass
from itertools import product
from typing import Dict, Iterable, Iterator, List, Sequence

from stagger.cone import dual_cone, hilbert_basis
from stagger.errors import MissingAssignmentError, Violation
from stagger.fan import ChartSpec, Fan
from stagger.lattice import Vector, neg, pairing, sub, vector, zero

logger = logging.getLogger(__name__)

F1_BOX = 3


class SStructure:
    """The map cone-id -> A_C."""

    def __init__(self, assignments: Dict[int, Sequence[int]]):
        self.assignments: Dict[int, Vector] = {int(c): vector(v) for c, v in assignments.items()}

    @classmethod
    def trivial(cls, F: Fan) -> "SStructure":
        return cls({c: zero(F.n) for c in range(len(F))})

    def __getitem__(self, c: int) -> Vector:
        if c not in self.assignments:
            raise MissingAssignmentError("{}: no A_C assigned to this cone".format(c))
        return self.assignments[c]

    def __eq__(self, other):
        return isinstance(other, SStructure) and self.assignments == other.assignments

    def __str__(self):
        return "[SStructure {}]".format(", ".join("{}: {}".format(c, v) for c, v in sorted(self.assignments.items())))

    def is_zero_at(self, c: int) -> bool:
        return not any(self[c])


def validate_sstructure(F: Fan, A: SStructure) -> List[Violation]:
    missing = [c for c in range(len(F)) if c not in A.assignments]
    if missing:
        raise MissingAssignmentError("{}: cones without an assignment".format(missing))
    violations = []
    for c, cone in enumerate(F.cones):
        if len(A[c]) != F.n:
            violations.append(Violation("wrong-rank", c, "A_C = {} is not of rank {}".format(A[c], F.n)))
            continue
        if not cone.contains(neg(A[c])):
            violations.append(Violation("not-in-minus-cone", c, "A_C = {} is not in -C for C = {}".format(
                A[c], F.label(c))))
        if A.is_zero_at(c):
            for face in F.faces_of(c):
                if not A.is_zero_at(face):
                    violations.append(Violation("zero-heredity", c, "A_C = 0 but its face {} has A = {}".format(
                        F.label(face), A[face])))
    return violations


def restrict_sstructure(A: SStructure, cones: Iterable[int]) -> SStructure:
    """The induced s-structure on a sub-fan given by its cone-ids."""
    return SStructure({c: A[c] for c in cones})


# 1. Orbit steps and Serre levels

def step_weight(A: SStructure, c: int, xi: Sequence[int]) -> int:
    """Step of the line bundle of weight xi on the orbit of c."""
    return pairing(xi, A[c])


def serre_le_w(A: SStructure, c: int, weights: Iterable[Sequence[int]], w: int) -> bool:
    return all(step_weight(A, c, xi) <= w for xi in weights)


def is_pure_weight(A: SStructure, c: int, xi: Sequence[int], w: int) -> bool:
    """Line bundles on an orbit are pure of exactly one step."""
    return step_weight(A, c, xi) == w


# 2. The spanning condition

@dataclass
class F1Certificate:
    ok: bool
    generators: List[Vector]
    checked: int
    failure: str = ""

    def __bool__(self):
        return self.ok


def check_F1(chart: ChartSpec, c: int) -> F1Certificate:
    """The indecomposables of the pointed quotient of c∨ generate it.

    Generation is checked on the lattice points of a box in quotient
    coordinates; indecomposability is checked exactly.
    """
    chart.check_face(c)
    cone = chart.fan.cones[c]
    if cone.dim == 0:
        return F1Certificate(True, [], 0)
    dual = dual_cone(cone)
    basis = hilbert_basis(dual)
    quotient = chart.orbit_lattices[c]
    gens = basis.generators
    for g in gens:
        for h in gens:
            if h != g and dual.contains(sub(g, h)) and not quotient.contains(sub(g, h)):
                return F1Certificate(False, gens, 0, "{} decomposes over {}".format(g, h))
    checked = 0
    for q in product(range(-F1_BOX, F1_BOX + 1), repeat=quotient.rank):
        x = quotient.lift(q)
        if not any(q) or not dual.contains(x):
            continue
        checked += 1
        if basis.decompose(x) is None:
            return F1Certificate(False, gens, checked, "{} is not generated".format(x))
    logger.debug("F1 at cone %s: %d generators, %d points", chart.fan.label(c), len(gens), checked)
    return F1Certificate(True, gens, checked)


# 3. Enumeration

def _candidates(F: Fan, c: int, bound: int) -> List[Vector]:
    cone = F.cones[c]
    if cone.dim == 0:
        return [zero(F.n)]
    points = [p for p in product(range(-bound, bound + 1), repeat=F.n) if cone.contains(neg(p))]
    return sorted(points, key=lambda p: (sum(abs(a) for a in p), p))


def enumerate_sstructures(F: Fan, bound: int) -> Iterator[SStructure]:
    """Every s-structure with coordinates of absolute value at most ``bound``."""
    if bound < 0:
        raise ValueError("enumerate_sstructures: bound must be nonnegative, got {}".format(bound))
    cones = list(range(len(F)))
    candidates = {c: _candidates(F, c, bound) for c in cones}
    faces = {c: [f for f in F.faces_of(c) if f != c] for c in cones}
    assignment: Dict[int, Vector] = {}

    def search(i: int) -> Iterator[SStructure]:
        if i == len(cones):
            yield SStructure(dict(assignment))
            return
        c = cones[i]
        for v in candidates[c]:
            if not any(v) and any(any(assignment[f]) for f in faces[c]):
                continue
            assignment[c] = v
            yield from search(i + 1)
        assignment.pop(c, None)

    yield from search(0)


def count_sstructures(F: Fan, bound: int) -> int:
    return sum(1 for _ in enumerate_sstructures(F, bound))
