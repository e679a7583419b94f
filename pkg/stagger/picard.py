"""Piecewise-linear functions on fans, altitudes and canonical-bundle data."""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence

from stagger.errors import (MissingAssignmentError, NoIntegralLiftError, NonGorensteinError, NotInConeError,
                            Violation)
from stagger.fan import Fan, orbit_lattice
from stagger.lattice import Vector, add, neg, pairing, solve_integer, sub, vector, zero
from stagger.sstructure import SStructure

logger = logging.getLogger(__name__)


class PLFunction:
    """An equivariant line bundle L(chi), one covector per cone."""

    def __init__(self, fan: Fan, per_cone: Mapping[int, Sequence[int]]):
        self.fan = fan
        self.per_cone: Dict[int, Vector] = {int(c): vector(v) for c, v in per_cone.items()}

    @classmethod
    def zero(cls, fan: Fan) -> "PLFunction":
        return cls(fan, {c: zero(fan.n) for c in range(len(fan))})

    @classmethod
    def linear(cls, fan: Fan, chi: Sequence[int]) -> "PLFunction":
        return cls(fan, {c: vector(chi) for c in range(len(fan))})

    @classmethod
    def from_ray_values(cls, fan: Fan, values: Mapping[int, int]) -> "PLFunction":
        """Lift values on the rays to one covector per cone."""
        per_cone = {}
        for c, rays in enumerate(fan.cone_rays):
            missing = [i for i in rays if i not in values]
            if missing:
                raise MissingAssignmentError("{}: no value for rays {}".format(fan.label(c), missing))
            lift = solve_integer([list(fan.rays[i]) for i in rays], [values[i] for i in rays], fan.n)
            if lift is None:
                raise NoIntegralLiftError("{}: ray values {} have no integral lift".format(
                    fan.label(c), [values[i] for i in rays]))
            per_cone[c] = lift
        return cls(fan, per_cone)

    def __getitem__(self, c: int) -> Vector:
        if c not in self.per_cone:
            raise MissingAssignmentError("{}: no covector for this cone".format(c))
        return self.per_cone[c]

    def __add__(self, other: "PLFunction") -> "PLFunction":
        return PLFunction(self.fan, {c: add(v, other[c]) for c, v in self.per_cone.items()})

    def __sub__(self, other: "PLFunction") -> "PLFunction":
        return PLFunction(self.fan, {c: sub(v, other[c]) for c, v in self.per_cone.items()})

    def __neg__(self) -> "PLFunction":
        return PLFunction(self.fan, {c: neg(v) for c, v in self.per_cone.items()})

    def __eq__(self, other):
        return isinstance(other, PLFunction) and self.per_cone == other.per_cone

    def __str__(self):
        return "[PLFunction {}]".format(", ".join("{}: {}".format(self.fan.label(c), v)
                                                  for c, v in sorted(self.per_cone.items())))

    def same_bundle(self, other: "PLFunction") -> bool:
        """Do both describe the same line bundle (cone-wise equal modulo L_C)?"""
        return all(orbit_lattice(self.fan, c).same_class(v, other[c]) for c, v in self.per_cone.items())


def validate_pl(F: Fan, chi: PLFunction) -> List[Violation]:
    missing = [c for c in range(len(F)) if c not in chi.per_cone]
    if missing:
        raise MissingAssignmentError("{}: cones without a covector".format(missing))
    violations = []
    for small, big in sorted(F.face_graph.edges()):
        if not orbit_lattice(F, small).contains(sub(chi[big], chi[small])):
            violations.append(Violation("incompatible-restriction", big, "chi on {} does not restrict to chi on {}".format(
                F.label(big), F.label(small))))
    return violations


def eval_pl(chi: PLFunction, v: Sequence[int], c: int) -> int:
    if not chi.fan.cones[chi.fan.check_id(c)].contains(v):
        raise NotInConeError("{}: not in cone {}".format(tuple(v), chi.fan.label(c)))
    return pairing(chi[c], v)


def altitude(A: SStructure, chi: PLFunction, c: int) -> int:
    """chi(-A_C), the altitude of the orbit of c for the line bundle L(chi)."""
    return eval_pl(chi, neg(A[c]), c)


# 1. Canonical bundle

@dataclass
class CanonicalData:
    """Gorenstein witnesses kappa_D (None when D is not Gorenstein) and the shift n."""
    per_chart: Dict[int, Optional[Vector]] = field(default_factory=dict)
    shift: int = 0

    def is_gorenstein(self, d: int) -> bool:
        return self.per_chart.get(d) is not None

    def witness(self, d: int) -> Vector:
        if not self.is_gorenstein(d):
            raise NonGorensteinError("{}: chart is not Gorenstein".format(d))
        return self.per_chart[d]


def canonical_data(F: Fan) -> CanonicalData:
    """Solve <kappa, v> = 1 on the rays of every cone."""
    per_chart = {}
    for c, rays in enumerate(F.cone_rays):
        vs = [list(F.rays[i]) for i in rays]
        per_chart[c] = solve_integer(vs, [1] * len(vs), F.n) if vs else zero(F.n)
        if per_chart[c] is None:
            logger.info("cone %s is not Gorenstein", F.label(c))
    return CanonicalData(per_chart, F.n)


def canonical_pl(F: Fan, K: CanonicalData) -> PLFunction:
    """kappa as a PL function; every cone must be Gorenstein."""
    return PLFunction(F, {c: K.witness(c) for c in range(len(F))})
