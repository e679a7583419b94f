"""
Run the command line against golden results; useful for detecting
inadvertent changes in the report formats.
"""
import io
import subprocess
import sys

import pytest

from conftest import CORPUS, GOLDEN, ROOT
from stagger import cli
from stagger.fileformat import load_workspace


def run(*argv):
    output = subprocess.run([sys.executable, str(ROOT / "main.py")] + list(argv), capture_output=True, cwd=ROOT)
    return output.returncode, output.stdout.decode("utf-8"), output.stderr.decode("utf-8")


@pytest.mark.parametrize("golden,code,argv", [
    ("validate_p1_selfdual", 0, ["validate", "corpus/p1_selfdual.fan"]),
    ("validate_p2_trivial", 0, ["validate", "corpus/p2_trivial.fan"]),
    ("validate_a2_koszul", 0, ["validate", "corpus/a2_koszul.fan"]),
    ("validate_bad_sstructure", 1, ["validate", "corpus/bad_sstructure.fan"]),
    ("validate_bad_module", 1, ["validate", "corpus/bad_module.fan"]),
    ("validate_a2_skyscraper", 0, ["validate", "corpus/a2_skyscraper.fan"]),
    ("enumerate_p1_sstructures", 0, ["enumerate", "corpus/p1.fan", "--what", "sstructures", "--bound", "2"]),
    ("enumerate_p2_perversities", 0, ["enumerate", "corpus/p2_trivial.fan", "--what", "perversities"]),
    ("enumerate_p1_listing", 0, ["enumerate", "corpus/p1.fan", "--what", "perversities", "--list"]),
    ("selfdual_p1", 1, ["selfdual", "corpus/p1.fan"]),
    ("selfdual_p2_trivial", 1, ["selfdual", "corpus/p2_trivial.fan"]),
    ("selfdual_p1_witness", 0, ["selfdual", "corpus/p1_selfdual.fan"]),
    ("membership_p1_selfdual", 0, ["membership", "corpus/p1_selfdual.fan"]),
    ("membership_a2_koszul", 0, ["membership", "corpus/a2_koszul.fan"]),
    ("membership_p1_shifted", 1, ["membership", "corpus/p1_shifted.fan"]),
    ("membership_p1_selfdual", 0, ["membership", "corpus/p1_selfdual.fan", "--complex", "O", "--A", "A", "--p", "p",
                                   "--chi", "chi"]),
    ("truncate_quadric_negative", 0, ["truncate", "corpus/quadric.fan", "--w=-1"]),
    ("truncate_quadric_zero", 0, ["truncate", "corpus/quadric.fan", "--w=0"]),
    ("truncate_skyscraper_above", 0, ["truncate", "corpus/a2_skyscraper.fan", "--module", "S", "--A", "A", "--w=-1"]),
    ("truncate_skyscraper_below", 0, ["truncate", "corpus/a2_skyscraper.fan", "--w=-3"]),
])
def test_golden(golden, code, argv):
    returncode, result, _ = run(*argv)
    expected = (GOLDEN / "{}.txt".format(golden)).read_text()
    assert result == expected
    assert returncode == code


def test_output_is_deterministic():
    first = run("enumerate", "corpus/p2_trivial.fan", "--what", "perversities", "--list")
    second = run("enumerate", "corpus/p2_trivial.fan", "--what", "perversities", "--list")
    assert first == second
    assert first[1].splitlines()[-1] == "perversities | 28"


def test_dangling_reference_is_a_parse_error():
    returncode, result, error = run("validate", "corpus/dangling.fan")
    assert returncode == 2
    assert result == ""
    assert "line 10" in error


def main(*argv):
    out = io.StringIO()
    return cli.main(list(argv), out), out.getvalue()


def test_usage_errors():
    assert main()[0] == 2
    assert main("enumerate", str(CORPUS / "p1.fan"))[0] == 2
    assert main("validate", str(CORPUS / "missing.fan"))[0] == 2


def test_anchor():
    code, result = main("enumerate", str(CORPUS / "p1.fan"), "--what", "perversities", "--anchor", "0=1")
    assert code == 0
    assert result == "perversities | 2\n"
    assert main("enumerate", str(CORPUS / "p1.fan"), "--what", "perversities", "--anchor", "0")[0] == 2
    assert main("enumerate", str(CORPUS / "p1.fan"), "--what", "perversities", "--anchor", "0,1=1")[0] == 2


def test_ambiguous_name(tmp_path):
    path = tmp_path / "two.fan"
    text = (CORPUS / "p1_selfdual.fan").read_text()
    path.write_text(text + "perversity | q | - | 0\nperversity | q | 0 | 1\nperversity | q | 1 | 1\n")
    assert main("membership", str(path))[0] == 2
    assert main("membership", str(path), "--perversity", "q")[0] == 0


def test_selfdual_output(tmp_path):
    path = tmp_path / "witness.fan"
    code, _ = main("selfdual", str(CORPUS / "p1_selfdual.fan"), "--output", str(path))
    assert code == 0
    ws = load_workspace(str(path))
    assert ws.perversities["selfdual_p"] == ws.perversities["p"]
    assert ws.pls["selfdual_chi"] == ws.pls["chi"]


def test_truncate_output(tmp_path):
    path = tmp_path / "truncated.fan"
    code, _ = main("truncate", str(CORPUS / "quadric.fan"), "--w", "0", "--output", str(path))
    assert code == 0
    assert load_workspace(str(path)).modules["O_le0"].generators() == [(0, 0)]


def test_render(tmp_path):
    fan = tmp_path / "fan.svg"
    assert main("render", str(CORPUS / "a2_koszul.fan"), "--sstructure", "A", "--perversity", "p",
                "--output", str(fan))[0] == 0
    assert "<svg" in fan.read_text()
    poset = tmp_path / "poset.svg"
    assert main("render", str(CORPUS / "p2_trivial.fan"), "--poset", "--output", str(poset))[0] == 0
    assert "<svg" in poset.read_text()


def test_render_needs_rank_two(tmp_path):
    assert main("render", str(CORPUS / "p1.fan"), "--output", str(tmp_path / "p1.svg"))[0] == 1


def test_truncated_to_zero_still_validates(tmp_path):
    path = tmp_path / "truncated.fan"
    code, _ = main("truncate", str(CORPUS / "a2_skyscraper.fan"), "--w", "-3", "--output", str(path))
    assert code == 0
    assert load_workspace(str(path)).modules["S_le-3"].is_zero()
    code, result = main("validate", str(path))
    assert code == 0
    assert result.splitlines()[-1] == "module | S_le-3 | ok"


def test_failed_membership_exits_with_a_violation():
    code, result = main("membership", str(CORPUS / "p1_shifted.fan"))
    assert code == 1
    assert "D<=0 | fail" in result.splitlines()
    assert main("membership", str(CORPUS / "p1_selfdual.fan"))[0] == 0
