"""Rational polyhedral cones in Z^n with exact double description."""

import logging
from functools import lru_cache
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import Matrix, Rational, floor

from stagger.errors import PreconditionError
from stagger.lattice import (LatticeQuotient, Vector, add, neg, pairing, primitive, rank, rref_key,
                             row_times, saturate_span, smith_normal_form, solve_integer, sub, transpose,
                             unimodular_inverse, vector, zero)

logger = logging.getLogger(__name__)


# 1. Double description

def _is_extreme(r: Vector, constraints: List[Vector], full_rank: int) -> bool:
    tight = [g for g in constraints if pairing(g, r) == 0]
    return rank(tight) == full_rank - 1


def double_description(constraints: Iterable[Sequence[int]], n: int) -> Tuple[List[Vector], List[Vector]]:
    """Generators of {x : <g, x> >= 0 for every g} as (lineality, extreme rays)."""
    lineality = [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    rays: List[Vector] = []
    processed: List[Vector] = []
    for g in constraints:
        g = vector(g)
        if not any(g):
            continue
        processed.append(g)
        pivot = next((l for l in lineality if pairing(l, g) != 0), None)
        if pivot is not None:
            if pairing(pivot, g) < 0:
                pivot = neg(pivot)
            a = pairing(pivot, g)
            lineality = [primitive(sub(tuple(a * x for x in l), tuple(pairing(l, g) * x for x in pivot)))
                         for l in lineality if l != pivot and neg(l) != pivot]
            lineality = [l for l in lineality if any(l)]
            lineality = saturate_span(lineality, n) if lineality else []
            rays = [primitive(sub(tuple(a * x for x in r), tuple(pairing(r, g) * x for x in pivot)))
                    for r in rays]
            rays = [r for r in rays if any(r)] + [primitive(pivot)]
        else:
            pos = [r for r in rays if pairing(r, g) > 0]
            nul = [r for r in rays if pairing(r, g) == 0]
            negs = [r for r in rays if pairing(r, g) < 0]
            combined = []
            for p in pos:
                for m in negs:
                    a, b = pairing(p, g), -pairing(m, g)
                    combined.append(primitive(add(tuple(a * x for x in m), tuple(b * x for x in p))))
            rays = pos + nul + [c for c in combined if any(c)]
        full = rank(processed)
        seen = set()
        kept = []
        for r in rays:
            r = primitive(r)
            if r in seen:
                continue
            seen.add(r)
            if _is_extreme(r, processed, full):
                kept.append(r)
        rays = kept
    return lineality, rays


def _project_off(v: Vector, lineality: List[Vector]) -> Vector:
    """Primitive representative of v orthogonal to the lineality span."""
    if not lineality:
        return primitive(v)
    L = Matrix([list(l) for l in lineality])
    w = Matrix([list(v)])
    proj = w - (w * L.T) * (L * L.T).inv() * L
    denom = 1
    for x in proj:
        denom = denom * Rational(x).q // gcd(denom, Rational(x).q)
    return primitive(tuple(int(x * denom) for x in proj))


# 2. Cones

class Cone:
    """A rational polyhedral cone given by generators.

    Keeps both representations: ``rays`` and ``lineality`` on the generator
    side, ``inequalities`` (facet normals) and ``equations`` (a basis of the
    orthogonal lattice) on the constraint side.
    """

    def __init__(self, generators: Iterable[Sequence[int]], n: Optional[int] = None):
        gens = [vector(g) for g in generators]
        if n is None:
            if not gens:
                raise PreconditionError("Cone: ambient rank needed for an empty generator list")
            n = len(gens[0])
        for g in gens:
            if len(g) != n:
                raise PreconditionError("Cone: generator {} not of rank {}".format(g, n))
        self.n = n
        gens = [g for g in gens if any(g)]
        dual_lin, dual_rays = double_description(gens, n)
        self.equations: Tuple[Vector, ...] = tuple(sorted(saturate_span(dual_lin, n))) if dual_lin else ()
        self.inequalities: Tuple[Vector, ...] = tuple(sorted(_project_off(h, list(self.equations))
                                                             for h in dual_rays))
        constraints = list(self.inequalities) + list(self.equations) + [neg(e) for e in self.equations]
        lin, rays = double_description(constraints, n)
        self.lineality: Tuple[Vector, ...] = tuple(rref_key(lin)) if lin else ()
        self.rays: Tuple[Vector, ...] = tuple(sorted(set(_project_off(r, list(self.lineality)) for r in rays)))

    @classmethod
    def from_inequalities(cls, inequalities, equations, n: int) -> "Cone":
        constraints = [vector(h) for h in inequalities] + [vector(e) for e in equations] + \
                      [neg(vector(e)) for e in equations]
        lin, rays = double_description(constraints, n)
        return cls(list(rays) + list(lin) + [neg(l) for l in lin], n)

    # properties

    @property
    def dim(self) -> int:
        return self.n - len(self.equations)

    @property
    def is_pointed(self) -> bool:
        return not self.lineality

    @property
    def is_full_dimensional(self) -> bool:
        return not self.equations

    @property
    def is_simplicial(self) -> bool:
        return self.is_pointed and len(self.rays) == self.dim

    @property
    def is_smooth(self) -> bool:
        if not self.is_simplicial:
            return False
        if not self.rays:
            return True
        return _index(self.rays, self.n) == 1

    def key(self):
        return self.n, self.rays, self.lineality

    def __eq__(self, other):
        return isinstance(other, Cone) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __str__(self):
        if not self.rays and not self.lineality:
            return "cone{0}"
        body = ", ".join(str(r) for r in self.rays)
        if self.lineality:
            body += " + lin" + str(list(self.lineality))
        return "cone({})".format(body)

    __repr__ = __str__

    # membership

    def contains(self, v: Sequence[int]) -> bool:
        return all(pairing(h, v) >= 0 for h in self.inequalities) and \
            all(pairing(e, v) == 0 for e in self.equations)

    def relative_interior_contains(self, v: Sequence[int]) -> bool:
        return all(pairing(h, v) > 0 for h in self.inequalities) and \
            all(pairing(e, v) == 0 for e in self.equations)

    def intersection(self, other: "Cone") -> "Cone":
        return Cone.from_inequalities(self.inequalities + other.inequalities,
                                      self.equations + other.equations, self.n)

    def generators(self) -> List[Vector]:
        return list(self.rays) + list(self.lineality) + [neg(l) for l in self.lineality]

    # faces

    def facet_ray_sets(self) -> List[frozenset]:
        return [frozenset(r for r in self.rays if pairing(h, r) == 0) for h in self.inequalities]

    def face_ray_sets(self) -> List[frozenset]:
        """Every face as the set of extreme rays it contains."""
        top = frozenset(self.rays)
        facets = self.facet_ray_sets()
        found = {top}
        frontier = [top]
        while frontier:
            face = frontier.pop()
            for f in facets:
                smaller = face & f
                if smaller not in found:
                    found.add(smaller)
                    frontier.append(smaller)
        return sorted(found, key=lambda s: (len(s), sorted(s)))

    def face_from_rays(self, rays: Iterable[Vector]) -> "Cone":
        return Cone(list(rays) + list(self.lineality) + [neg(l) for l in self.lineality], self.n)

    def faces(self) -> List["Cone"]:
        cones = [self.face_from_rays(s) for s in self.face_ray_sets()]
        return sorted(set(cones), key=lambda c: (c.dim, c.rays))

    def facets(self) -> List["Cone"]:
        return [f for f in self.faces() if f.dim == self.dim - 1]

    def is_face(self, other: "Cone") -> bool:
        """Is ``other`` a face of this cone?"""
        return other in self.faces()


def dual_cone(C: Cone) -> Cone:
    return Cone(list(C.inequalities) + list(C.equations) + [neg(e) for e in C.equations], C.n)


def _index(vs: Sequence[Vector], n: int) -> int:
    """Index of the lattice spanned by vs inside its saturation."""
    _, D, _ = smith_normal_form([list(v) for v in vs], n)
    idx = 1
    for i in range(min(len(D), len(D[0]) if D else 0)):
        if D[i][i]:
            idx *= D[i][i]
    return idx


# 3. Hilbert bases

class HilbertBasis:
    """Minimal generators of the semigroup C ∩ Z^n.

    ``units`` is a basis of the lineality lattice, ``generators`` lifts the
    Hilbert basis of the pointed quotient.
    """

    def __init__(self, cone: Cone, units: List[Vector], generators: List[Vector]):
        self.cone = cone
        self.units = units
        self.generators = generators
        self._quotient = LatticeQuotient(units, cone.n)
        self._grading = _positive_grading(cone)
        self._memo: Dict[Vector, Optional[Tuple[int, ...]]] = {}

    def __eq__(self, other):
        return isinstance(other, HilbertBasis) and self.cone == other.cone

    def __str__(self):
        return "[HilbertBasis units {} generators {}]".format(self.units, self.generators)

    def decompose(self, x: Sequence[int]) -> Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
        """Coefficients (a, b) with x = sum a_i g_i + sum b_j u_j, a_i >= 0, or None."""
        x = vector(x)
        if not self.cone.contains(x):
            return None
        coeffs = self._decompose_pointed(self._quotient.project(x))
        if coeffs is None:
            return None
        rest = x
        for a, g in zip(coeffs, self.generators):
            rest = sub(rest, tuple(a * c for c in g))
        if self.units:
            b = solve_integer(transpose(self.units), rest, len(self.units))
            if b is None:
                return None
        else:
            b = ()
        return coeffs, tuple(b)

    def _decompose_pointed(self, q: Vector) -> Optional[Tuple[int, ...]]:
        if q in self._memo:
            return self._memo[q]
        result = None
        if not any(q):
            result = (0,) * len(self.generators)
        else:
            for i, g in enumerate(self.generators):
                rest = sub(q, self._quotient.project(g))
                lifted = self._quotient.lift(rest)
                if not self.cone.contains(lifted):
                    continue
                if _grade(self._grading, self._quotient, rest) >= _grade(self._grading, self._quotient, q):
                    continue
                found = self._decompose_pointed(rest)
                if found is not None:
                    result = tuple(c + 1 if j == i else c for j, c in enumerate(found))
                    break
        self._memo[q] = result
        return result


def _positive_grading(cone: Cone) -> Vector:
    total = zero(cone.n)
    for h in cone.inequalities:
        total = add(total, h)
    return total


def _grade(grading: Vector, quotient: LatticeQuotient, q: Vector) -> int:
    return pairing(grading, quotient.lift(q))


def hilbert_basis(C: Cone) -> HilbertBasis:
    """Hilbert basis of C ∩ Z^n, computed in the pointed quotient and lifted."""
    units = saturate_span(C.lineality, C.n) if C.lineality else []
    if not units:
        gens = _pointed_hilbert_basis(C.rays, C.n)
        return HilbertBasis(C, [], list(gens))
    quotient = LatticeQuotient(units, C.n)
    projected = sorted(set(primitive(quotient.project(r)) for r in C.rays))
    projected = [p for p in projected if any(p)]
    gens = _pointed_hilbert_basis(tuple(projected), quotient.rank)
    lifted = sorted(quotient.lift(g) for g in gens)
    return HilbertBasis(C, units, lifted)


@lru_cache(maxsize=256)
def _pointed_hilbert_basis(rays: Tuple[Vector, ...], n: int) -> List[Vector]:
    if not rays:
        return []
    span = saturate_span(rays, n)
    k = len(span)
    span_t = transpose(span)
    coords = [solve_integer(span_t, r, k) for r in rays]
    local = Cone(coords, k)
    candidates = set()
    for simplex in _triangulate(local):
        candidates.update(_parallelepiped_points(simplex, k))
        candidates.update(simplex)
    candidates.discard(zero(k))
    ordered = sorted(candidates)
    minimal = [x for x in ordered
               if not any(g != x and local.contains(sub(x, g)) for g in ordered)]
    logger.debug("hilbert basis: %d candidates, %d minimal", len(ordered), len(minimal))
    return sorted(row_times(x, span) for x in minimal)


def _triangulate(C: Cone) -> List[Tuple[Vector, ...]]:
    """Pulling triangulation of a pointed cone into simplicial cones on its rays."""
    if len(C.rays) == C.dim:
        return [C.rays]
    apex = C.rays[0]
    simplices = []
    for facet in C.facets():
        if apex in facet.rays:
            continue
        for s in _triangulate(facet):
            simplices.append(tuple(sorted(s + (apex,))))
    return simplices


def _parallelepiped_points(simplex: Tuple[Vector, ...], k: int) -> List[Vector]:
    """Lattice points of the half-open parallelepiped spanned by a full simplex."""
    M = [list(v) for v in simplex]
    _, D, V = smith_normal_form(M, k)
    Vinv = unimodular_inverse(V)
    Minv = Matrix(M).inv()
    diag = [D[i][i] for i in range(k)]
    points = []

    def walk(i, coeffs):
        if i == k:
            y = row_times(coeffs, Vinv)
            t = Matrix([list(y)]) * Minv
            frac = [x - floor(x) for x in t]
            p = Matrix([frac]) * Matrix(M)
            points.append(tuple(int(x) for x in p))
            return
        for c in range(diag[i]):
            walk(i + 1, coeffs + (c,))

    walk(0, ())
    return points
