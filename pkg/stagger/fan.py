"""Fans: cone bookkeeping, validation, standard constructors and affine charts."""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx

from stagger.cone import Cone, HilbertBasis, dual_cone, hilbert_basis
from stagger.errors import InvalidConeError, PreconditionError, UnknownFanError, Violation
from stagger.lattice import LatticeQuotient, Vector, orthogonal_lattice, primitive, unit_vector, vector

logger = logging.getLogger(__name__)


class Fan:
    """A finite collection of cones on a shared list of rays.

    Cones are given as sets of ray indices. Cone-ids index a deterministic
    ordering by (dimension, sorted ray indices), so the zero cone is id 0.
    """

    def __init__(self, rays: Iterable[Sequence[int]], cones: Iterable[Iterable[int]], n: Optional[int] = None):
        rays = [vector(r) for r in rays]
        if n is None:
            if not rays:
                raise PreconditionError("Fan: ambient rank needed when there are no rays")
            n = len(rays[0])
        self.n = n
        for i, r in enumerate(rays):
            if len(r) != n:
                raise PreconditionError("Fan: ray {} has rank {}, expected {}".format(i, len(r), n))
            if not any(r):
                raise PreconditionError("Fan: ray {} is zero".format(i))
        self.rays: Tuple[Vector, ...] = tuple(primitive(r) for r in rays)

        index_sets = set()
        for c in cones:
            c = tuple(sorted(set(int(i) for i in c)))
            for i in c:
                if not 0 <= i < len(self.rays):
                    raise InvalidConeError("Fan: ray index {} out of range".format(i))
            index_sets.add(c)
        built = [(Cone([self.rays[i] for i in c], n), c) for c in index_sets]
        built.sort(key=lambda pair: (pair[0].dim, pair[1]))
        self.cones: List[Cone] = [cone for cone, _ in built]
        self.cone_rays: List[Tuple[int, ...]] = [c for _, c in built]
        self._by_rays: Dict[Tuple[int, ...], int] = {c: i for i, c in enumerate(self.cone_rays)}
        self.face_graph = self._build_face_graph()
        self.codim1_pairs: List[Tuple[int, int]] = sorted(
            (a, b) for a, b in self.face_graph.edges() if self.cones[b].dim - self.cones[a].dim == 1)
        self._charts: Dict[int, "ChartSpec"] = {}
        self._orbit_lattices: Dict[int, LatticeQuotient] = {}

    def _build_face_graph(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(range(len(self.cones)))
        for b, big in enumerate(self.cones):
            face_sets = set(big.face_ray_sets())
            for a, small in enumerate(self.cones):
                if a == b or not set(self.cone_rays[a]) <= set(self.cone_rays[b]):
                    continue
                if small.lineality == big.lineality and frozenset(small.rays) in face_sets:
                    graph.add_edge(a, b)
        return graph

    # lookups

    def __len__(self):
        return len(self.cones)

    def __str__(self):
        return "[Fan rank {} with {} rays and {} cones]".format(self.n, len(self.rays), len(self.cones))

    def check_id(self, c: int) -> int:
        if not isinstance(c, int) or not 0 <= c < len(self.cones):
            raise InvalidConeError("{}: not a cone-id of this fan".format(c))
        return c

    def cone_id(self, ray_indices: Iterable[int]) -> int:
        key = tuple(sorted(set(ray_indices)))
        if key not in self._by_rays:
            raise InvalidConeError("{}: no cone on these rays".format(list(key)))
        return self._by_rays[key]

    def has_cone(self, ray_indices: Iterable[int]) -> bool:
        return tuple(sorted(set(ray_indices))) in self._by_rays

    def dim(self, c: int) -> int:
        return self.cones[self.check_id(c)].dim

    def cod(self, c: int) -> int:
        return self.n - self.dim(c)

    @property
    def maximal(self) -> List[int]:
        return [c for c in range(len(self.cones)) if self.face_graph.out_degree(c) == 0]

    def faces_of(self, c: int) -> List[int]:
        """Cone-ids of the faces of c, c included."""
        self.check_id(c)
        return sorted({c} | nx.ancestors(self.face_graph, c))

    def is_face(self, a: int, b: int) -> bool:
        return a == b or self.face_graph.has_edge(a, b)

    def label(self, c: int) -> str:
        rays = self.cone_rays[self.check_id(c)]
        return "-" if not rays else ",".join(str(i) for i in rays)


# 1. Validation

def validate_fan(F: Fan) -> List[Violation]:
    """Every violation of the fan axioms; an empty list means the fan is valid."""
    violations = []
    if not F.has_cone(()):
        violations.append(Violation("missing-zero-cone", None, "the zero cone is not in the fan"))
    for c, cone in enumerate(F.cones):
        listed = {F.rays[i] for i in F.cone_rays[c]}
        if not cone.is_pointed:
            violations.append(Violation("not-strongly-convex", c, "cone {} contains a line".format(F.label(c))))
            continue
        if set(cone.rays) != listed:
            violations.append(Violation("redundant-ray", c, "cone {} lists rays that are not extreme".format(
                F.label(c))))
        unlisted = sorted({r for face_rays in cone.face_ray_sets() for r in face_rays if r not in F.rays})
        if unlisted:
            violations.append(Violation("unlisted-ray", c, "cone {} has extreme rays {} missing from the ray list"
                                        .format(F.label(c), unlisted)))
        for face_rays in cone.face_ray_sets():
            if any(r not in F.rays for r in face_rays):
                continue
            indices = tuple(sorted(F.rays.index(r) for r in face_rays))
            if not F.has_cone(indices):
                violations.append(Violation("missing-face", c, "face {} of cone {} is not in the fan".format(
                    "-" if not indices else ",".join(map(str, indices)), F.label(c))))
    pointed = [c for c, cone in enumerate(F.cones) if cone.is_pointed]
    for a, b in combinations(pointed, 2):
        meet = F.cones[a].intersection(F.cones[b])
        if meet not in F.cones[a].faces() or meet not in F.cones[b].faces():
            violations.append(Violation("intersection-not-a-face", a, "cones {} and {} meet in {}".format(
                F.label(a), F.label(b), meet)))
    return violations


# 2. Standard fans

def _closed_under_faces(rays: List[Vector], maximal: Iterable[Iterable[int]], n: int) -> Fan:
    cones = set()
    for m in maximal:
        m = tuple(sorted(m))
        for k in range(len(m) + 1):
            cones.update(combinations(m, k))
    return Fan(rays, cones, n)


def builtin_fan(name: str, *params) -> Fan:
    """Standard simplicial fans used by the corpus and the tests."""
    if name == "affine_space":
        (n,) = params
        return _closed_under_faces([unit_vector(n, i) for i in range(n)], [range(n)], n)
    if name == "torus":
        (n,) = params
        return Fan([], [()], n)
    if name == "projective_space":
        (n,) = params
        rays = [unit_vector(n, i) for i in range(n)] + [tuple(-1 for _ in range(n))]
        return _closed_under_faces(rays, combinations(range(n + 1), n), n)
    if name == "p1_x_p1":
        rays = [(1, 0), (0, 1), (-1, 0), (0, -1)]
        return _closed_under_faces(rays, [(0, 1), (1, 2), (2, 3), (3, 0)], 2)
    if name == "hirzebruch":
        (a,) = params
        rays = [(1, 0), (0, 1), (-1, a), (0, -1)]
        return _closed_under_faces(rays, [(0, 1), (1, 2), (2, 3), (3, 0)], 2)
    if name == "quadric_cone":
        return _closed_under_faces([(1, 0), (1, 2)], [(0, 1)], 2)
    if name == "blowup_A2":
        return _closed_under_faces([(1, 0), (1, 1), (0, 1)], [(0, 1), (1, 2)], 2)
    raise UnknownFanError("{}: unknown builtin fan".format(name))


BUILTIN_FANS = ["affine_space", "torus", "projective_space", "p1_x_p1", "hirzebruch", "quadric_cone", "blowup_A2"]


# 3. Stars

def star_cones(F: Fan, c: int) -> Set[int]:
    """Cones having c as a face: the fan of the open chart star(O_c)."""
    F.check_id(c)
    return {c} | nx.descendants(F.face_graph, c)


def quotient_fan(F: Fan, c: int) -> Fan:
    """star(c) projected to N / span(c), with c becoming the zero cone."""
    span = LatticeQuotient(F.cones[F.check_id(c)].rays, F.n)
    rays: List[Vector] = []
    cones = []
    for d in sorted(star_cones(F, c)):
        indices = []
        for i in F.cone_rays[d]:
            image = span.project(F.rays[i])
            if not any(image):
                continue
            image = primitive(image)
            if image not in rays:
                rays.append(image)
            indices.append(rays.index(image))
        cones.append(indices)
    return Fan(rays, cones, span.rank)


# 4. Affine charts

def orbit_lattice(F: Fan, c: int) -> LatticeQuotient:
    """X^*(T) modulo L_c, where L_c is the lattice of characters vanishing on c."""
    F.check_id(c)
    if c not in F._orbit_lattices:
        F._orbit_lattices[c] = LatticeQuotient(orthogonal_lattice(F.cones[c].generators(), F.n), F.n)
    return F._orbit_lattices[c]


@dataclass(eq=False)
class ChartSpec:
    """The affine chart Spec F[D∨] of a cone D with its orbit lattices."""
    fan: Fan
    chart: int
    cone: Cone
    dual: Cone
    semigroup: HilbertBasis
    faces: Tuple[int, ...]
    orbit_lattices: Dict[int, LatticeQuotient] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.fan.n

    @property
    def units(self) -> List[Vector]:
        return self.semigroup.units

    @property
    def generators(self) -> List[Vector]:
        return self.semigroup.generators

    def semigroup_contains(self, chi: Sequence[int]) -> bool:
        return self.dual.contains(chi)

    def check_face(self, c: int) -> int:
        if c not in self.orbit_lattices:
            raise InvalidConeError("{}: not a face of chart cone {}".format(c, self.chart))
        return c

    def orbit_class(self, c: int, chi: Sequence[int]) -> Vector:
        """Canonical representative of chi in X^*(T) / L_c."""
        return self.orbit_lattices[self.check_face(c)].canonical(chi)

    def in_orthogonal(self, c: int, chi: Sequence[int]) -> bool:
        """Is chi in L_c, i.e. a unit on the orbit of c?"""
        return self.orbit_lattices[self.check_face(c)].contains(chi)

    def face_cone(self, c: int) -> Cone:
        return self.fan.cones[self.check_face(c)]

    def __str__(self):
        return "[ChartSpec of cone {} in {}]".format(self.fan.label(self.chart), self.fan)


def chart_spec(F: Fan, d: int) -> ChartSpec:
    F.check_id(d)
    if d in F._charts:
        return F._charts[d]
    cone = F.cones[d]
    dual = dual_cone(cone)
    faces = tuple(F.faces_of(d))
    lattices = {c: orbit_lattice(F, c) for c in faces}
    spec = ChartSpec(F, d, cone, dual, hilbert_basis(dual), faces, lattices)
    logger.debug("chart %s: %d semigroup generators, %d units", F.label(d), len(spec.generators), len(spec.units))
    F._charts[d] = spec
    return spec


def affine_chart(cone_rays: Sequence[Sequence[int]]) -> ChartSpec:
    """Chart of a single cone together with all of its faces."""
    rays = sorted(set(primitive(vector(r)) for r in cone_rays))
    n = len(rays[0])
    F = _closed_under_faces(rays, [range(len(rays))], n) if Cone(rays, n).is_simplicial else \
        Fan(rays, [tuple(sorted(rays.index(r) for r in s)) for s in Cone(rays, n).face_ray_sets()], n)
    return chart_spec(F, F.maximal[0])
