from itertools import product

import pytest

from stagger import perversity
from stagger.errors import InconsistentWitnessError, UnboundedComponentError, Violation
from stagger.fan import Fan
from stagger.perversity import (InfeasibilityCertificate, Perversity, PerversityReport, SelfDualitySolution,
                                count_perversities, dual_perversity, enumerate_perversities, find_selfdual,
                                is_perversity, parity_obstruction, staggered_codimension, twisted_perversity,
                                validate_perversity)
from stagger.picard import PLFunction
from stagger.sstructure import SStructure


@pytest.fixture
def p1_selfdual_data(p1):
    A = SStructure({0: (0,), 1: (-1,), 2: (1,)})
    chi = PLFunction(p1, {0: (0,), 1: (1,), 2: (-1,)})
    return A, chi


def oracle(F, A, chi, top):
    """Brute force over p(0) = 0 and every other value in [0, top]."""
    found = []
    consistent = True
    for values in product(range(0, top + 1), repeat=len(F) - 1):
        p = Perversity(dict(enumerate((0,) + values)))
        report = validate_perversity(F, A, chi, p)
        consistent = consistent and report.consistent
        if not report.all_pairs:
            found.append(p)
    return found, consistent


@pytest.mark.parametrize("fixture,expected", [("p1", 4), ("p2", 28)])
def test_counts_match_brute_force(request, fixture, expected):
    F = request.getfixturevalue(fixture)
    A, chi = SStructure.trivial(F), PLFunction.zero(F)
    enumerated = list(enumerate_perversities(F, A, chi))
    assert len(enumerated) == expected
    found, consistent = oracle(F, A, chi, F.n)
    assert consistent
    assert sorted(sorted(p.values.items()) for p in found) == sorted(sorted(p.values.items()) for p in enumerated)


def test_codimension_one_check_agrees_on_enumeration(p2):
    A, chi = SStructure.trivial(p2), PLFunction.zero(p2)
    for p in enumerate_perversities(p2, A, chi):
        report = validate_perversity(p2, A, chi, p)
        assert report.ok and report.consistent


def test_dual_is_an_involution_preserving_validity(p2):
    A, chi = SStructure.trivial(p2), PLFunction.zero(p2)
    for p in enumerate_perversities(p2, A, chi):
        q = dual_perversity(p2, A, chi, p)
        assert is_perversity(p2, A, chi, q)
        assert dual_perversity(p2, A, chi, q) == p


def test_enumeration_order(p1):
    A, chi = SStructure.trivial(p1), PLFunction.zero(p1)
    listed = [(p[1], p[2]) for p in enumerate_perversities(p1, A, chi)]
    assert listed == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_anchors(p1):
    A, chi = SStructure.trivial(p1), PLFunction.zero(p1)
    assert count_perversities(p1, A, chi, anchors={1: 1}) == 2
    assert count_perversities(p1, A, chi, value=5) == 4
    assert all(p[0] == 5 for p in enumerate_perversities(p1, A, chi, value=5))


def test_altitudes_widen_the_steps(p1, p1_selfdual_data):
    A, chi = p1_selfdual_data
    assert count_perversities(p1, A, chi) == 9
    assert staggered_codimension(p1, A, chi, 0) == -1
    assert staggered_codimension(p1, A, chi, 1) == 1


def test_unanchored_component():
    F = Fan([(1,), (-1,)], [(0,), (1,)])
    A = SStructure({0: (-1,), 1: (1,)})
    with pytest.raises(UnboundedComponentError):
        list(enumerate_perversities(F, A, PLFunction.zero(F)))


def test_violations(p1):
    A, chi = SStructure.trivial(p1), PLFunction.zero(p1)
    report = validate_perversity(p1, A, chi, Perversity({0: 0, 1: 2, 2: 0}))
    assert not report
    assert [v.cone for v in report.all_pairs] == [1]
    assert [v.kind for v in report.codim1] == ["codim-one"]


def test_twisted_perversity(p1, p1_selfdual_data):
    A, chi = p1_selfdual_data
    p = Perversity({0: 0, 1: 0, 2: 0})
    assert twisted_perversity(p1, A, chi, p) == Perversity({0: 0, 1: 1, 2: 1})
    assert p.shifted(2) == Perversity({0: 2, 1: 2, 2: 2})


def test_parity_obstruction(p1, p2, a1):
    assert parity_obstruction(p1, SStructure.trivial(p1)) == [1, 2]
    assert parity_obstruction(p2, SStructure.trivial(p2)) == [1, 2, 3]
    assert parity_obstruction(a1, SStructure({0: (0,), 1: (-2,)})) == [1]
    assert parity_obstruction(a1, SStructure({0: (0,), 1: (-1,)})) == []


@pytest.mark.parametrize("fixture", ["p1", "p2"])
def test_trivial_structure_is_globally_infeasible(request, fixture):
    F = request.getfixturevalue(fixture)
    result = find_selfdual(F, SStructure.trivial(F))
    assert isinstance(result, InfeasibilityCertificate)
    assert not result
    assert result.is_global
    assert str(result) == "globally infeasible: parity obstruction"


def test_selfdual_witness_on_p1(p1, p1_selfdual_data):
    A, _ = p1_selfdual_data
    result = find_selfdual(p1, A)
    assert isinstance(result, SelfDualitySolution)
    assert result.chi.per_cone == {0: (0,), 1: (1,), 2: (-1,)}
    assert result.p == Perversity({0: 0, 1: 1, 2: 1})
    assert is_perversity(p1, A, result.chi, result.p)
    assert dual_perversity(p1, A, result.chi, result.p) == result.p.shifted(-1)


def test_infeasible_within_bound(a1):
    A = SStructure({0: (0,), 1: (-1,)})
    result = find_selfdual(a1, A, bound=0)
    assert not result
    assert not result.is_global
    assert str(result).startswith("infeasible within bound 0")
    assert find_selfdual(a1, A, bound=1)


def test_selfdual_candidate_failing_validation_raises(p1, p1_selfdual_data, monkeypatch):
    A, _ = p1_selfdual_data
    monkeypatch.setattr(perversity, "validate_perversity",
                        lambda *args: PerversityReport(all_pairs=[Violation("step", 1, "forced")]))
    with pytest.raises(InconsistentWitnessError):
        find_selfdual(p1, A)
