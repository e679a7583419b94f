import pytest

from conftest import CORPUS
from stagger.errors import ParseError, UnresolvedReferenceError
from stagger.fan import builtin_fan, chart_spec
from stagger.fileformat import Workspace, load_workspace, parse_workspace, serialize_workspace
from stagger.modules import MonomialModule

HEADER = "stagger | 1\n"
P1 = HEADER + "lattice | 1\nray | 0 | 1\nray | 1 | -1\ncone | -\ncone | 0\ncone | 1\n"
QUADRIC = HEADER + "lattice | 2\nray | 0 | 1 0\nray | 1 | 1 2\ncone | -\ncone | 0\ncone | 1\ncone | 0,1\n"


@pytest.mark.parametrize("name", ["p1", "p1_selfdual", "p2_trivial", "bad_sstructure", "a2_koszul", "quadric",
                                  "a2_skyscraper"])
def test_corpus_round_trip(name):
    text = (CORPUS / "{}.fan".format(name)).read_text()
    assert serialize_workspace(parse_workspace(text)) == text


def test_load_workspace():
    ws = load_workspace(str(CORPUS / "p1_selfdual.fan"))
    assert isinstance(ws, Workspace)
    assert ws.source.endswith("p1_selfdual.fan")
    assert ws.fan.n == 1 and len(ws.fan) == 3
    assert ws.sstructures["A"][1] == (-1,)
    assert ws.pls["chi"][2] == (-1,)
    assert ws.perversities["p"][1] == 1
    assert ws.complexes["O"].term(0) == ((0,),)


def test_builtin_shorthand_matches_explicit_fan():
    ws = load_workspace(str(CORPUS / "p2_builtin.fan"))
    explicit = load_workspace(str(CORPUS / "p2_trivial.fan"))
    assert ws.fan.rays == builtin_fan("projective_space", 2).rays
    assert ws.fan.cone_rays == explicit.fan.cone_rays
    explicit.sstructures = {}
    assert serialize_workspace(ws) == serialize_workspace(explicit)


def test_comments_and_blank_lines_are_skipped():
    ws = parse_workspace("# a comment\n\n" + P1 + "\n# trailing\n")
    assert len(ws.fan) == 3


def test_plray_records():
    text = HEADER + "builtin | projective_space | 2\nplray | chi | 0 | 1\nplray | chi | 1 | 1\nplray | chi | 2 | 1\n"
    chi = parse_workspace(text).pls["chi"]
    assert chi[4] == (1, 1)
    assert chi[0] == (0, 0)


def test_plray_without_integral_lift():
    with pytest.raises(ParseError):
        parse_workspace(QUADRIC + "plray | chi | 0 | 0\nplray | chi | 1 | 1\n")


def test_relation_shorthand():
    ws = parse_workspace(QUADRIC + "module | M | 0,1\ngenerator | M | 0 | 0 0\nrelation | M | 0 | 0 1\n")
    chart = chart_spec(ws.fan, 3)
    assert ws.modules["M"] == MonomialModule.from_relations(chart, [(0, 0)], [(0, (0, 1))])
    assert "killed | M | 0 | 0 1" in serialize_workspace(ws)


def test_relation_outside_the_semigroup():
    with pytest.raises(ParseError):
        parse_workspace(QUADRIC + "module | M | 0,1\ngenerator | M | 0 | 0 0\nrelation | M | 0 | 0 -1\n")


def test_dangling_cone_reference():
    with pytest.raises(UnresolvedReferenceError) as info:
        load_workspace(str(CORPUS / "dangling.fan"))
    assert info.value.line_number == 10


@pytest.mark.parametrize("text", [
    "lattice | 1\n",
    "stagger | 2\nlattice | 1\n",
    P1 + "weight | A | - | 0\n",
    P1 + "sstructure | A | - | 0 0\n",
    P1 + "sstructure | A | -\n",
    P1 + "perversity | p | 0 | x\n",
    HEADER + "lattice | 1\nray | 1 | 1\ncone | -\n",
    HEADER + "builtin | grassmannian\n",
    HEADER + "builtin | projective_space | 1\nray | 0 | 1\n",
    "",
])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_workspace(text)


@pytest.mark.parametrize("text", [
    P1 + "cone | 0,3\n",
    P1 + "term | K | 0 | 0\n",
    P1 + "plray | chi | 4 | 1\n",
    P1 + "complex | K | 0\nterm | K | 0 | 0\ndifferential | K | 0 | 0 | 0 | 1\n",
])
def test_unresolved_references(text):
    with pytest.raises(UnresolvedReferenceError):
        parse_workspace(text)


def test_unknown_record_reports_its_line():
    with pytest.raises(ParseError) as info:
        parse_workspace(P1 + "weight | A | - | 0\n")
    assert info.value.line_number == 8
    assert str(info.value).startswith("line 8:")


def test_lookup():
    ws = parse_workspace(P1 + "sstructure | A | - | 0\nsstructure | A | 0 | 0\nsstructure | A | 1 | 0\n")
    assert ws.lookup("sstructures", "A")[2] == (0,)
    with pytest.raises(UnresolvedReferenceError):
        ws.lookup("perversities", "p")
