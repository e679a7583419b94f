"""Perfect complexes on an affine chart and staggered aisle membership.

Sign and shift conventions are fixed in CONVENTIONS.md.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from stagger.errors import MissingAssignmentError, PreconditionError, Violation
from stagger.fan import ChartSpec
from stagger.lattice import Vector, add, pairing, rank, solve_integer, sub, vector
from stagger.perversity import Perversity, is_perversity
from stagger.picard import CanonicalData, PLFunction, altitude
from stagger.sstructure import SStructure

logger = logging.getLogger(__name__)

Matrix = List[List[int]]


class PerfectComplex:
    """A bounded complex of sums of R(xi) on a chart.

    ``terms[k]`` lists generator degrees; ``differentials[k]`` maps term k to
    term k+1 with rows indexed by term k+1. Entry (i, j) stands for the
    scalar times e^(xi^k_j - xi^(k+1)_i).
    """

    def __init__(self, chart: ChartSpec, terms: Mapping[int, Sequence[Sequence[int]]],
                 differentials: Optional[Mapping[int, Sequence[Sequence[int]]]] = None):
        self.chart = chart
        self.terms: Dict[int, Tuple[Vector, ...]] = {int(k): tuple(vector(x) for x in v)
                                                     for k, v in terms.items() if len(v)}
        self.differentials: Dict[int, Matrix] = {}
        for k, m in (differentials or {}).items():
            rows = [[int(a) for a in row] for row in m]
            if any(any(row) for row in rows):
                self.differentials[int(k)] = rows

    def term(self, k: int) -> Tuple[Vector, ...]:
        return self.terms.get(k, ())

    def matrix(self, k: int) -> Matrix:
        if k in self.differentials:
            return self.differentials[k]
        return [[0] * len(self.term(k)) for _ in self.term(k + 1)]

    def character(self, k: int, i: int, j: int) -> Vector:
        return sub(self.term(k)[j], self.term(k + 1)[i])

    def degrees(self) -> List[int]:
        return sorted(self.terms)

    def __eq__(self, other):
        return isinstance(other, PerfectComplex) and self.chart is other.chart and \
            self.terms == other.terms and self.differentials == other.differentials

    def __str__(self):
        return "[PerfectComplex {}]".format(", ".join("{}: {}".format(k, list(v)) for k, v in sorted(self.terms.items())))


def validate_complex(F: PerfectComplex) -> List[Violation]:
    violations = []
    for k, m in sorted(F.differentials.items()):
        if len(m) != len(F.term(k + 1)) or any(len(row) != len(F.term(k)) for row in m):
            violations.append(Violation("shape", None, "d^{} is not {}x{}".format(k, len(F.term(k + 1)),
                                                                              len(F.term(k)))))
    if violations:
        return violations
    for k, m in sorted(F.differentials.items()):
        for i, row in enumerate(m):
            for j, a in enumerate(row):
                if a and not F.chart.semigroup_contains(F.character(k, i, j)):
                    violations.append(Violation("inhomogeneous-entry", None, "d^{}[{}][{}] has character {}".format(
                        k, i, j, F.character(k, i, j))))
    for k in sorted(F.differentials):
        if k + 1 not in F.differentials:
            continue
        upper, lower = F.matrix(k + 1), F.matrix(k)
        for i, row in enumerate(upper):
            for j in range(len(F.term(k))):
                if sum(row[m] * lower[m][j] for m in range(len(row))):
                    violations.append(Violation("nonzero-square", None, "d^{} d^{} is nonzero at [{}][{}]".format(
                        k + 1, k, i, j)))
    return violations


# 1. Constructors and operations

def structure_complex(chart: ChartSpec) -> PerfectComplex:
    return PerfectComplex(chart, {0: [(0,) * chart.n]})


def canonical_complex(chart: ChartSpec, K: CanonicalData) -> PerfectComplex:
    """K on the chart: R(kappa) placed in degree -n."""
    return PerfectComplex(chart, {-K.shift: [K.witness(chart.chart)]})


def koszul_complex(chart: ChartSpec, degrees: Optional[Sequence[Sequence[int]]] = None) -> PerfectComplex:
    """Koszul complex of the characters ``degrees`` (the chart generators by default)."""
    us = [vector(u) for u in (degrees if degrees is not None else chart.generators)]
    m = len(us)
    subsets = {j: list(combinations(range(m), j)) for j in range(m + 1)}
    terms = {-j: [_sum_degrees(us, s, chart.n) for s in subsets[j]] for j in range(m + 1)}
    differentials = {}
    for j in range(1, m + 1):
        rows = subsets[j - 1]
        matrix = [[0] * len(subsets[j]) for _ in rows]
        for col, s in enumerate(subsets[j]):
            for t in range(len(s)):
                matrix[rows.index(s[:t] + s[t + 1:])][col] = -1 if t % 2 else 1
        differentials[-j] = matrix
    return PerfectComplex(chart, terms, differentials)


def _sum_degrees(us, subset, n) -> Vector:
    total = (0,) * n
    for i in subset:
        total = add(total, us[i])
    return total


def shift(F: PerfectComplex, m: int) -> PerfectComplex:
    """F[m]: term k of F[m] is term k+m of F."""
    sign = -1 if m % 2 else 1
    return PerfectComplex(F.chart, {k - m: v for k, v in F.terms.items()},
                          {k - m: [[sign * a for a in row] for row in d] for k, d in F.differentials.items()})


def twist(F: PerfectComplex, chi: PLFunction) -> PerfectComplex:
    """Tensor with L(chi)."""
    chi_d = chi[F.chart.chart]
    return PerfectComplex(F.chart, {k: [add(x, chi_d) for x in v] for k, v in F.terms.items()},
                          F.differentials)


def dualize(F: PerfectComplex, chi: PLFunction, K: CanonicalData) -> PerfectComplex:
    """RHom(F, K ⊗ L(chi)) with K = R(kappa)[n]."""
    n = K.shift
    top = add(K.witness(F.chart.chart), chi[F.chart.chart])
    terms = {-k - n: [sub(top, x) for x in v] for k, v in F.terms.items()}
    differentials = {}
    for j, d in F.differentials.items():
        k = -j - n - 1
        sign = -1 if (k + 1) % 2 else 1
        differentials[k] = [[sign * d[i][c] for i in range(len(d))] for c in range(len(d[0]))]
    return PerfectComplex(F.chart, terms, differentials)


def selfdual_dualize(F: PerfectComplex, chi: PLFunction, K: CanonicalData) -> PerfectComplex:
    """The duality that preserves the aisles of a self-dual perversity: dualize then shift by -n."""
    return shift(dualize(F, chi, K), -K.shift)


# 2. Restriction to orbits

@dataclass
class RestrictedComplex:
    face: int
    terms: Dict[int, Tuple[Vector, ...]]
    differentials: Dict[int, Matrix]


def restrict_to_orbit(F: PerfectComplex, c: int) -> RestrictedComplex:
    """Keep the entries whose characters are units on the orbit of c."""
    F.chart.check_face(c)
    kept = {}
    for k, d in F.differentials.items():
        kept[k] = [[a if a and F.chart.in_orthogonal(c, F.character(k, i, j)) else 0 for j, a in enumerate(row)]
                   for i, row in enumerate(d)]
    return RestrictedComplex(c, dict(F.terms), kept)


@dataclass(frozen=True)
class CohomologyEntry:
    k: int
    cls: Vector
    dim: int
    level: Optional[int] = None


@dataclass
class OrbitCohomologyReport:
    cone: int
    entries: List[CohomologyEntry] = field(default_factory=list)

    def classes(self, k: int) -> List[Vector]:
        return [e.cls for e in self.entries if e.k == k]

    def euler(self, cls: Vector) -> int:
        return sum((-1) ** (e.k % 2) * e.dim for e in self.entries if e.cls == cls)


def orbit_cohomology(F: PerfectComplex, c: int, A: Optional[SStructure] = None) -> OrbitCohomologyReport:
    """Cohomology of Li_c^* F, split by weight class modulo L_c."""
    restricted = restrict_to_orbit(F, c)
    lattice = F.chart.orbit_lattices[c]
    by_class: Dict[Vector, Dict[int, List[int]]] = {}
    for k, degrees in F.terms.items():
        for j, x in enumerate(degrees):
            by_class.setdefault(lattice.canonical(x), {}).setdefault(k, []).append(j)
    entries = []
    for cls, slots in by_class.items():
        for k, cols in slots.items():
            out = _block_rank(restricted.differentials.get(k), slots.get(k + 1, []), cols)
            inc = _block_rank(restricted.differentials.get(k - 1), cols, slots.get(k - 1, []))
            dim = len(cols) - out - inc
            if dim:
                level = pairing(cls, A[c]) if A is not None else None
                entries.append(CohomologyEntry(k, cls, dim, level))
    entries.sort(key=lambda e: (e.k, e.cls))
    return OrbitCohomologyReport(c, entries)


def _block_rank(d: Optional[Matrix], rows: List[int], cols: List[int]) -> int:
    if d is None or not rows or not cols:
        return 0
    return rank([[d[i][j] for j in cols] for i in rows])


def euler_by_class(F: PerfectComplex, c: int) -> Dict[Vector, int]:
    """Alternating count of generators per weight class."""
    lattice = F.chart.orbit_lattices[F.chart.check_face(c)]
    totals: Dict[Vector, int] = {}
    for k, degrees in F.terms.items():
        for x in degrees:
            cls = lattice.canonical(x)
            totals[cls] = totals.get(cls, 0) + (-1) ** (k % 2)
    return {cls: v for cls, v in totals.items() if v}


# 3. Aisles

@dataclass(frozen=True)
class MembershipRow:
    cone: int
    k: int
    cls: Vector
    level: int
    bound: int

    @property
    def ok(self) -> bool:
        return self.level <= self.bound


@dataclass
class MembershipResult:
    ok: bool
    violation: Optional[MembershipRow] = None
    rows: List[MembershipRow] = field(default_factory=list)
    warning: bool = False

    def __bool__(self):
        return self.ok


def _perversity_warning(chart: ChartSpec, A: SStructure, p: Perversity, chi: Optional[PLFunction]) -> bool:
    chi = chi if chi is not None else PLFunction.zero(chart.fan)
    try:
        ok = is_perversity(chart.fan, A, chi, p)
    except MissingAssignmentError:
        ok = False
    if not ok:
        logger.warning("membership test with a function that is not a perversity: %s", p)
    return not ok


def in_D_le0(F: PerfectComplex, A: SStructure, p: Perversity, chi: Optional[PLFunction] = None,
             check_perversity: bool = True) -> MembershipResult:
    """<xi, A_C> <= p(C) - k for every weight class xi of h^k(Li_C^* F)."""
    rows = []
    for c in F.chart.faces:
        for e in orbit_cohomology(F, c, A).entries:
            rows.append(MembershipRow(c, e.k, e.cls, e.level, p[c] - e.k))
    first = next((r for r in rows if not r.ok), None)
    warning = _perversity_warning(F.chart, A, p, chi) if check_perversity else False
    return MembershipResult(first is None, first, rows, warning)


def local_dual_perversity(chart: ChartSpec, A: SStructure, chi: PLFunction, p: Perversity) -> Perversity:
    """p̄ on the faces of the chart."""
    fan = chart.fan
    return Perversity({c: -fan.cod(c) + altitude(A, chi, c) - p[c] for c in chart.faces})


def in_D_ge0(F: PerfectComplex, A: SStructure, p: Perversity, chi: PLFunction, K: CanonicalData) -> MembershipResult:
    """F is in D>=0(p) iff its dual is in D<=0(p̄)."""
    result = in_D_le0(dualize(F, chi, K), A, local_dual_perversity(F.chart, A, chi, p), check_perversity=False)
    result.warning = _perversity_warning(F.chart, A, p, chi)
    return result


def in_heart(F: PerfectComplex, A: SStructure, p: Perversity, chi: PLFunction, K: CanonicalData) -> bool:
    return in_D_le0(F, A, p, chi).ok and in_D_ge0(F, A, p, chi, K).ok


# 4. Upper-shriek restrictions

def ri_shriek_supports(F: PerfectComplex, c: int, chi: PLFunction, K: CanonicalData,
                       A: Optional[SStructure] = None) -> OrbitCohomologyReport:
    """Supports of Ri_c^! F read off the dual: h^(-cod c - k) has classes chi_c - xi for xi in h^k(Li_c^* DF)."""
    lattice = F.chart.orbit_lattices[F.chart.check_face(c)]
    cod = F.chart.fan.cod(c)
    entries = []
    for e in orbit_cohomology(dualize(F, chi, K), c).entries:
        theta = lattice.canonical(sub(chi[c], e.cls))
        level = pairing(theta, A[c]) if A is not None else None
        entries.append(CohomologyEntry(-cod - e.k, theta, e.dim, level))
    entries.sort(key=lambda e: (e.k, e.cls))
    return OrbitCohomologyReport(c, entries)


def ri_shriek_direct(F: PerfectComplex, c: int, A: Optional[SStructure] = None) -> OrbitCohomologyReport:
    """Ri_c^! F on a smooth chart: Li_c^* F twisted by the normal determinant, shifted by dim c."""
    if not F.chart.cone.is_smooth:
        raise PreconditionError("{}: chart is not smooth".format(F.chart))
    cone = F.chart.face_cone(c)
    lattice = F.chart.orbit_lattices[c]
    kappa_c = solve_integer([list(r) for r in cone.rays], [1] * len(cone.rays), F.chart.n) if cone.rays \
        else (0,) * F.chart.n
    entries = []
    for e in orbit_cohomology(F, c).entries:
        theta = lattice.canonical(sub(e.cls, kappa_c))
        level = pairing(theta, A[c]) if A is not None else None
        entries.append(CohomologyEntry(e.k + cone.dim, theta, e.dim, level))
    entries.sort(key=lambda e: (e.k, e.cls))
    return OrbitCohomologyReport(c, entries)
