"""The record file format: one ``|``-separated record per line.

See FORMAT.md for the grammar.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from stagger.complexes import PerfectComplex
from stagger.errors import NoIntegralLiftError, MissingAssignmentError, ParseError, StaggerError, \
    UnresolvedReferenceError
from stagger.fan import Fan, builtin_fan, chart_spec
from stagger.lattice import Vector
from stagger.modules import MonomialModule, Piece
from stagger.perversity import Perversity
from stagger.picard import PLFunction
from stagger.sstructure import SStructure

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
HEADER = "stagger"


@dataclass
class Workspace:
    fan: Fan
    sstructures: Dict[str, SStructure] = field(default_factory=dict)
    pls: Dict[str, PLFunction] = field(default_factory=dict)
    perversities: Dict[str, Perversity] = field(default_factory=dict)
    modules: Dict[str, MonomialModule] = field(default_factory=dict)
    complexes: Dict[str, PerfectComplex] = field(default_factory=dict)
    source: Optional[str] = None
    version: int = FORMAT_VERSION

    def lookup(self, kind: str, name: str):
        table = getattr(self, kind)
        if name not in table:
            raise UnresolvedReferenceError("{}: no {} with this name".format(name, kind.rstrip("s")))
        return table[name]


# 1. Parsing

def _ints(text: str, line: int) -> Tuple[int, ...]:
    try:
        return tuple(int(a) for a in text.split())
    except ValueError:
        raise ParseError("{}: not a list of integers".format(text), line)


def _int(text: str, line: int) -> int:
    values = _ints(text, line)
    if len(values) != 1:
        raise ParseError("{}: expected one integer".format(text), line)
    return values[0]


def cone_ref_indices(text: str, line: int) -> Tuple[int, ...]:
    if text == "-":
        return ()
    try:
        return tuple(sorted(int(a) for a in text.split(",")))
    except ValueError:
        raise ParseError("{}: not a cone reference".format(text), line)


def _fields(line: str) -> List[str]:
    return [a.strip() for a in line.split("|")]


def parse_workspace(text: str, source: Optional[str] = None) -> Workspace:
    records = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        records.append((number, _fields(line)))
    if not records or records[0][1][0] != HEADER:
        raise ParseError("missing '{} | {}' header".format(HEADER, FORMAT_VERSION), records[0][0] if records else None)
    number, head = records[0]
    if len(head) != 2 or _int(head[1], number) != FORMAT_VERSION:
        raise ParseError("unsupported format version {}".format(head[1:]), number)

    fan = _parse_fan(records[1:])
    ws = Workspace(fan, source=source)
    n = fan.n

    def vec(text, line):
        v = _ints(text, line)
        if len(v) != n:
            raise ParseError("{}: expected {} coordinates".format(text, n), line)
        return v

    def cone(text, line):
        rays = cone_ref_indices(text, line)
        if not fan.has_cone(rays):
            raise UnresolvedReferenceError("{}: no such cone".format(text), line)
        return fan.cone_id(rays)

    def arity(f, count, line):
        if len(f) != count:
            raise ParseError("{}: expected {} fields".format(f[0], count), line)

    sstructures: Dict[str, Dict[int, Vector]] = {}
    pls: Dict[str, Dict[int, Vector]] = {}
    plrays: Dict[str, Dict[int, int]] = {}
    perversities: Dict[str, Dict[int, int]] = {}
    modules: Dict[str, Tuple[int, Dict[int, List[Vector]], Dict[int, List[Vector]], Dict[int, List[Vector]]]] = {}
    complexes: Dict[str, Tuple[int, Dict[int, List[Vector]], List[Tuple[int, int, int, int, int]]]] = {}

    for line, f in records[1:]:
        kind = f[0]
        if kind in ("lattice", "ray", "cone", "builtin"):
            continue
        if kind == "sstructure":
            arity(f, 4, line)
            sstructures.setdefault(f[1], {})[cone(f[2], line)] = vec(f[3], line)
        elif kind == "pl":
            arity(f, 4, line)
            pls.setdefault(f[1], {})[cone(f[2], line)] = vec(f[3], line)
        elif kind == "plray":
            arity(f, 4, line)
            index = _int(f[2], line)
            if not 0 <= index < len(fan.rays):
                raise UnresolvedReferenceError("{}: no such ray".format(index), line)
            plrays.setdefault(f[1], {})[index] = _int(f[3], line)
        elif kind == "perversity":
            arity(f, 4, line)
            perversities.setdefault(f[1], {})[cone(f[2], line)] = _int(f[3], line)
        elif kind == "module":
            arity(f, 3, line)
            modules[f[1]] = (cone(f[2], line), {}, {}, {})
        elif kind in ("generator", "killed", "relation"):
            arity(f, 4, line)
            if f[1] not in modules:
                raise UnresolvedReferenceError("{}: module not declared".format(f[1]), line)
            slot = {"generator": 1, "killed": 2, "relation": 3}[kind]
            modules[f[1]][slot].setdefault(_int(f[2], line), []).append(vec(f[3], line))
        elif kind == "complex":
            arity(f, 3, line)
            complexes[f[1]] = (cone(f[2], line), {}, [])
        elif kind == "term":
            arity(f, 4, line)
            if f[1] not in complexes:
                raise UnresolvedReferenceError("{}: complex not declared".format(f[1]), line)
            complexes[f[1]][1].setdefault(_int(f[2], line), []).append(vec(f[3], line))
        elif kind == "differential":
            arity(f, 6, line)
            if f[1] not in complexes:
                raise UnresolvedReferenceError("{}: complex not declared".format(f[1]), line)
            complexes[f[1]][2].append((line,) + tuple(_int(a, line) for a in f[2:6]))
        else:
            raise ParseError("{}: unknown record".format(kind), line)

    overlap = set(pls) & set(plrays)
    if overlap:
        raise ParseError("{}: mixes pl and plray records".format(sorted(overlap)))
    ws.sstructures = {name: SStructure(v) for name, v in sstructures.items()}
    ws.pls = {name: PLFunction(fan, v) for name, v in pls.items()}
    for name, values in plrays.items():
        try:
            ws.pls[name] = PLFunction.from_ray_values(fan, values)
        except (NoIntegralLiftError, MissingAssignmentError) as e:
            raise ParseError("{}: {}".format(name, e))
    ws.perversities = {name: Perversity(v) for name, v in perversities.items()}
    for name, (chart_id, gens, killed, relations) in modules.items():
        ws.modules[name] = _build_module(fan, name, chart_id, gens, killed, relations)
    for name, (chart_id, terms, entries) in complexes.items():
        ws.complexes[name] = _build_complex(fan, name, chart_id, terms, entries)
    return ws


def _parse_fan(records) -> Fan:
    n = None
    rays: Dict[int, Vector] = {}
    cones = []
    builtin = None
    for line, f in records:
        if f[0] == "lattice":
            n = _int(f[1], line)
        elif f[0] == "ray":
            if len(f) != 3:
                raise ParseError("ray: expected 3 fields", line)
            rays[_int(f[1], line)] = _ints(f[2], line)
        elif f[0] == "cone":
            if len(f) != 2:
                raise ParseError("cone: expected 2 fields", line)
            cones.append((line, cone_ref_indices(f[1], line)))
        elif f[0] == "builtin":
            try:
                builtin = builtin_fan(f[1], *(int(a) for a in f[2:]))
            except (StaggerError, ValueError, TypeError) as e:
                raise ParseError("builtin: {}".format(e), line)
    if builtin is not None:
        if rays or cones:
            raise ParseError("builtin fans take no ray or cone records")
        return builtin
    if n is None:
        raise ParseError("missing lattice record")
    if sorted(rays) != list(range(len(rays))):
        raise ParseError("rays must be numbered 0..{}".format(len(rays) - 1))
    for line, c in cones:
        for i in c:
            if i not in rays:
                raise UnresolvedReferenceError("{}: no such ray".format(i), line)
    try:
        return Fan([rays[i] for i in range(len(rays))], [c for _, c in cones], n)
    except StaggerError as e:
        raise ParseError(str(e))


def _build_module(fan, name, chart_id, gens, killed, relations) -> MonomialModule:
    chart = chart_spec(fan, chart_id)
    count = max(list(gens) + list(killed) + list(relations) + [-1]) + 1
    pieces = []
    for i in range(count):
        piece_gens = gens.get(i, [])
        piece_killed = list(killed.get(i, []))
        for mu in relations.get(i, []):
            if len(piece_gens) != 1:
                raise ParseError("{}: relations need exactly one generator in piece {}".format(name, i))
            if not chart.semigroup_contains(mu):
                raise ParseError("{}: relation {} is not in the chart semigroup".format(name, mu))
            piece_killed.append(tuple(a + b for a, b in zip(piece_gens[0], mu)))
        pieces.append(Piece(tuple(piece_gens), tuple(piece_killed)))
    return MonomialModule(chart, pieces)


def _build_complex(fan, name, chart_id, terms, entries) -> PerfectComplex:
    matrices: Dict[int, List[List[int]]] = {}
    for line, k, i, j, a in entries:
        rows, cols = len(terms.get(k + 1, [])), len(terms.get(k, []))
        if not (0 <= i < rows and 0 <= j < cols):
            raise UnresolvedReferenceError("{}: entry ({}, {}) outside d^{} of shape {}x{}".format(
                name, i, j, k, rows, cols), line)
        matrix = matrices.setdefault(k, [[0] * cols for _ in range(rows)])
        matrix[i][j] = a
    return PerfectComplex(chart_spec(fan, chart_id), terms, matrices)


def load_workspace(path: str) -> Workspace:
    with open(path, "r") as f:
        return parse_workspace(f.read(), source=path)


# 2. Serialization

def _vec(v) -> str:
    return " ".join(str(a) for a in v)


def cone_ref(fan: Fan, c: int) -> str:
    return fan.label(c)


def serialize_workspace(ws: Workspace) -> str:
    fan = ws.fan
    lines = ["{} | {}".format(HEADER, ws.version), "lattice | {}".format(fan.n)]
    lines += ["ray | {} | {}".format(i, _vec(r)) for i, r in enumerate(fan.rays)]
    lines += ["cone | {}".format(cone_ref(fan, c)) for c in range(len(fan))]
    for name in sorted(ws.sstructures):
        A = ws.sstructures[name]
        lines += ["sstructure | {} | {} | {}".format(name, cone_ref(fan, c), _vec(v))
                  for c, v in sorted(A.assignments.items())]
    for name in sorted(ws.pls):
        lines += serialize_pl(name, ws.pls[name])
    for name in sorted(ws.perversities):
        lines += serialize_perversity(fan, name, ws.perversities[name])
    for name in sorted(ws.modules):
        lines += serialize_module(name, ws.modules[name])
    for name in sorted(ws.complexes):
        lines += serialize_complex(name, ws.complexes[name])
    return "\n".join(lines) + "\n"


def serialize_pl(name: str, chi: PLFunction) -> List[str]:
    return ["pl | {} | {} | {}".format(name, cone_ref(chi.fan, c), _vec(v)) for c, v in sorted(chi.per_cone.items())]


def serialize_perversity(fan: Fan, name: str, p: Perversity) -> List[str]:
    return ["perversity | {} | {} | {}".format(name, cone_ref(fan, c), v) for c, v in sorted(p.values.items())]


def serialize_module(name: str, M: MonomialModule) -> List[str]:
    lines = ["module | {} | {}".format(name, cone_ref(M.chart.fan, M.chart.chart))]
    for i, piece in enumerate(p for p in M.pieces if p.generators):
        lines += ["generator | {} | {} | {}".format(name, i, _vec(g)) for g in piece.generators]
        lines += ["killed | {} | {} | {}".format(name, i, _vec(k)) for k in piece.killed]
    return lines


def serialize_complex(name: str, F: PerfectComplex) -> List[str]:
    lines = ["complex | {} | {}".format(name, cone_ref(F.chart.fan, F.chart.chart))]
    for k in F.degrees():
        lines += ["term | {} | {} | {}".format(name, k, _vec(x)) for x in F.term(k)]
    for k, d in sorted(F.differentials.items()):
        for i, row in enumerate(d):
            lines += ["differential | {} | {} | {} | {} | {}".format(name, k, i, j, a) for j, a in enumerate(row) if a]
    return lines
