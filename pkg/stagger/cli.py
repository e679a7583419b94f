"""Command-line driver: validate, enumerate, selfdual, membership, truncate, render.

Reports go to stdout in ``|``-separated rows, diagnostics to stderr. Exit
codes: 0 success, 1 semantic violation or infeasible, 2 parse or usage error.
"""

import argparse
import logging
import sys
from typing import List, Optional, TextIO

from stagger.complexes import in_D_ge0, in_D_le0, validate_complex
from stagger.errors import MissingAssignmentError, ParseError, StaggerError, UnresolvedReferenceError
from stagger.fan import validate_fan
from stagger.fileformat import Workspace, load_workspace, serialize_module, serialize_perversity, serialize_pl, \
    serialize_workspace, cone_ref_indices
from stagger.modules import sigma_le_w, validate_module, verify_S4
from stagger.perversity import DEFAULT_BOUND, enumerate_perversities, find_selfdual, validate_perversity
from stagger.picard import PLFunction, canonical_data, validate_pl
from stagger.sstructure import SStructure, enumerate_sstructures, validate_sstructure

logger = logging.getLogger(__name__)

LISTING_LIMIT = 10000

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_PARSE = 2


def _vec(v) -> str:
    return " ".join(str(a) for a in v)


def _row(*fields) -> str:
    return " | ".join(str(f) for f in fields)


def _name(ws: Workspace, kind: str, name: Optional[str]) -> Optional[str]:
    """The given name, or the only name of its kind."""
    table = getattr(ws, kind)
    if name is None and len(table) == 1:
        return next(iter(table))
    return name


def _pick(ws: Workspace, kind: str, name: Optional[str], fallback=None):
    """The named object, the only one of its kind, or the fallback."""
    name = _name(ws, kind, name)
    if name is not None:
        return ws.lookup(kind, name)
    table = getattr(ws, kind)
    if not table and fallback is not None:
        return fallback
    raise UnresolvedReferenceError("--{}: name one of {}".format(kind.rstrip("s"), sorted(table) or "nothing"))


def _sstructure(ws: Workspace, name: Optional[str]) -> SStructure:
    return _pick(ws, "sstructures", name, SStructure.trivial(ws.fan))


def _pl(ws: Workspace, name: Optional[str]) -> PLFunction:
    return _pick(ws, "pls", name, PLFunction.zero(ws.fan))


def _cone(ws: Workspace, ref: str) -> int:
    rays = cone_ref_indices(ref, None)
    if not ws.fan.has_cone(rays):
        raise UnresolvedReferenceError("{}: no such cone".format(ref))
    return ws.fan.cone_id(rays)


def _assignment(F, values) -> str:
    return "; ".join("{}: {}".format(F.label(c), _vec(v) if isinstance(v, tuple) else v)
                     for c, v in sorted(values.items()))


# 1. Subcommands

def cmd_validate(ws: Workspace, args, out: TextIO) -> int:
    F = ws.fan
    failures = 0

    def report(kind: str, name: str, violations: List) -> None:
        nonlocal failures
        if not violations:
            print(_row(kind, name, "ok"), file=out)
        for v in violations:
            failures += 1
            print(_row(kind, name, v), file=out)

    report("fan", "-", validate_fan(F))
    if failures:
        return EXIT_VIOLATION
    for name in sorted(ws.sstructures):
        try:
            report("sstructure", name, validate_sstructure(F, ws.sstructures[name]))
        except MissingAssignmentError as e:
            report("sstructure", name, ["missing-assignment: {}".format(e)])
    for name in sorted(ws.pls):
        try:
            report("pl", name, validate_pl(F, ws.pls[name]))
        except MissingAssignmentError as e:
            report("pl", name, ["missing-assignment: {}".format(e)])
    if ws.perversities:
        A, chi = _sstructure(ws, args.sstructure), _pl(ws, args.pl)
        for name in sorted(ws.perversities):
            try:
                result = validate_perversity(F, A, chi, ws.perversities[name])
            except MissingAssignmentError as e:
                report("perversity", name, ["missing-assignment: {}".format(e)])
                continue
            if not result.consistent:
                logger.error("perversity %s: face-pair and codimension-one checks disagree", name)
            report("perversity", name, result.all_pairs + result.codim1)
    for name in sorted(ws.modules):
        report("module", name, validate_module(ws.modules[name]))
    for name in sorted(ws.complexes):
        report("complex", name, validate_complex(ws.complexes[name]))
    return EXIT_VIOLATION if failures else EXIT_OK


def cmd_enumerate(ws: Workspace, args, out: TextIO) -> int:
    F = ws.fan
    if args.what == "sstructures":
        items = (_assignment(F, A.assignments) for A in enumerate_sstructures(F, args.bound))
    else:
        anchors = {}
        for entry in args.anchor or []:
            ref, sep, value = entry.partition("=")
            if not sep:
                raise ParseError("--anchor {}: expected CONE=VALUE".format(entry))
            try:
                anchors[_cone(ws, ref.strip())] = int(value)
            except ValueError:
                raise ParseError("--anchor {}: value is not an integer".format(entry))
        A, chi = _sstructure(ws, args.sstructure), _pl(ws, args.pl)
        items = (_assignment(F, p.values) for p in enumerate_perversities(F, A, chi, anchors=anchors))
    count = 0
    listing = []
    for item in items:
        count += 1
        if args.list and count <= LISTING_LIMIT:
            listing.append(item)
    if args.list:
        if count > LISTING_LIMIT:
            print(_row("listing", "suppressed above {} items".format(LISTING_LIMIT)), file=out)
        else:
            for i, item in enumerate(listing):
                print(_row(i, item), file=out)
    logger.info("enumerated %d %s", count, args.what)
    print(_row(args.what, count), file=out)
    return EXIT_OK


def cmd_selfdual(ws: Workspace, args, out: TextIO) -> int:
    F = ws.fan
    A = _sstructure(ws, args.sstructure)
    result = find_selfdual(F, A, args.bound)
    if not result:
        print(_row("selfdual", result), file=out)
        if result.cones:
            print(_row("cones", " ".join(F.label(c) for c in result.cones)), file=out)
        return EXIT_VIOLATION
    print(_row("selfdual", "feasible"), file=out)
    for line in serialize_pl("chi", result.chi) + serialize_perversity(F, "p", result.p):
        print(line, file=out)
    if args.output:
        ws.pls["selfdual_chi"] = result.chi
        ws.perversities["selfdual_p"] = result.p
        with open(args.output, "w") as f:
            f.write(serialize_workspace(ws))
    return EXIT_OK


def cmd_membership(ws: Workspace, args, out: TextIO) -> int:
    F = ws.fan
    cx = _pick(ws, "complexes", args.complex)
    violations = validate_complex(cx)
    if violations:
        for v in violations:
            print(_row("complex", v), file=out)
        return EXIT_VIOLATION
    A = _sstructure(ws, args.sstructure)
    p = _pick(ws, "perversities", args.perversity)
    chi = _pl(ws, args.pl)
    print(_row("aisle", "cone", "k", "class", "level", "bound", "verdict"), file=out)
    le0 = in_D_le0(cx, A, p, chi)
    for r in le0.rows:
        print(_row("le0", F.label(r.cone), r.k, _vec(r.cls), r.level, r.bound, "pass" if r.ok else "fail"), file=out)
    K = canonical_data(F)
    ge0 = None
    if K.is_gorenstein(cx.chart.chart):
        ge0 = in_D_ge0(cx, A, p, chi, K)
        for r in ge0.rows:
            print(_row("ge0", F.label(r.cone), r.k, _vec(r.cls), r.level, r.bound, "pass" if r.ok else "fail"),
                  file=out)
    if le0.warning:
        print(_row("warning", "p is not a perversity for this s-structure"), file=out)
    print(_row("D<=0", "pass" if le0 else "fail"), file=out)
    if ge0 is None:
        print(_row("D>=0", "unavailable: chart is not Gorenstein"), file=out)
        print(_row("heart", "unavailable"), file=out)
    else:
        print(_row("D>=0", "pass" if ge0 else "fail"), file=out)
        print(_row("heart", "pass" if le0 and ge0 else "fail"), file=out)
    return EXIT_OK if le0 and (ge0 is None or ge0) else EXIT_VIOLATION


def cmd_truncate(ws: Workspace, args, out: TextIO) -> int:
    module = _name(ws, "modules", args.module)
    M = _pick(ws, "modules", module)
    A = _sstructure(ws, args.sstructure)
    truncated = sigma_le_w(M, A, args.w)
    name = "{}_le{}".format(module, args.w)
    for line in serialize_module(name, truncated):
        print(line, file=out)
    holds = verify_S4(M, A, args.w)
    print(_row("S4", "holds" if holds else "fails"), file=out)
    if args.output:
        ws.modules[name] = truncated
        with open(args.output, "w") as f:
            f.write(serialize_workspace(ws))
    return EXIT_OK if holds else EXIT_VIOLATION


def cmd_render(ws: Workspace, args, out: TextIO) -> int:
    from stagger.render import render_fan, render_poset

    p = ws.lookup("perversities", args.perversity) if args.perversity else None
    if args.poset:
        render_poset(ws.fan, args.output, p)
    else:
        A = ws.lookup("sstructures", args.sstructure) if args.sstructure else None
        render_fan(ws.fan, args.output, A, p)
    print(_row("render", args.output), file=out)
    return EXIT_OK


# 2. Argument parsing

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stagger", description="Staggered t-structures on toric varieties.")
    parser.add_argument("--verbose", action="store_true", help="log at DEBUG level on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check every object in a file")
    p.add_argument("path")
    p.add_argument("--sstructure", "--A", dest="sstructure", help="s-structure the perversities are checked against")
    p.add_argument("--pl", "--chi", dest="pl", help="line bundle the perversities are checked against")
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("enumerate", help="count s-structures or perversities")
    p.add_argument("path")
    p.add_argument("--what", choices=["sstructures", "perversities"], required=True)
    p.add_argument("--bound", type=int, default=DEFAULT_BOUND)
    p.add_argument("--anchor", action="append", metavar="CONE=VALUE")
    p.add_argument("--sstructure", "--A", dest="sstructure")
    p.add_argument("--pl", "--chi", dest="pl")
    p.add_argument("--list", action="store_true", help="print the items as well as the count")
    p.set_defaults(handler=cmd_enumerate)

    p = sub.add_parser("selfdual", help="search a self-dual perversity")
    p.add_argument("path")
    p.add_argument("--sstructure", "--A", dest="sstructure")
    p.add_argument("--bound", type=int, default=DEFAULT_BOUND)
    p.add_argument("--output", help="write the file with the witness added")
    p.set_defaults(handler=cmd_selfdual)

    p = sub.add_parser("membership", help="test a complex against the staggered aisles")
    p.add_argument("path")
    p.add_argument("--complex")
    p.add_argument("--sstructure", "--A", dest="sstructure")
    p.add_argument("--perversity", "--p", dest="perversity")
    p.add_argument("--pl", "--chi", dest="pl")
    p.set_defaults(handler=cmd_membership)

    p = sub.add_parser("truncate", help="apply the s-truncation to a chart module")
    p.add_argument("path")
    p.add_argument("--module")
    p.add_argument("--sstructure", "--A", dest="sstructure")
    p.add_argument("--w", type=int, required=True)
    p.add_argument("--output", help="write the file with the truncated module added")
    p.set_defaults(handler=cmd_truncate)

    p = sub.add_parser("render", help="draw a rank-2 fan or a face poset as SVG")
    p.add_argument("path")
    p.add_argument("--sstructure", "--A", dest="sstructure")
    p.add_argument("--perversity", "--p", dest="perversity")
    p.add_argument("--poset", action="store_true")
    p.add_argument("--output", required=True)
    p.set_defaults(handler=cmd_render)
    return parser


def main(argv: Optional[List[str]] = None, out: TextIO = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_PARSE if e.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        ws = load_workspace(args.path)
        return args.handler(ws, args, out)
    except ParseError as e:
        print("error: {}".format(e), file=sys.stderr)
        return EXIT_PARSE
    except OSError as e:
        print("error: {}".format(e), file=sys.stderr)
        return EXIT_PARSE
    except StaggerError as e:
        print("error: {}".format(e), file=sys.stderr)
        return EXIT_VIOLATION
