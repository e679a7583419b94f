from itertools import product

import pytest

from stagger.errors import MissingAssignmentError
from stagger.fan import chart_spec
from stagger.sstructure import (SStructure, check_F1, count_sstructures, enumerate_sstructures, is_pure_weight,
                                restrict_sstructure, serre_le_w, step_weight, validate_sstructure)


def brute_force_count(F, bound):
    """Every assignment in the box that validates."""
    box = list(product(range(-bound, bound + 1), repeat=F.n))
    count = 0
    for values in product(box, repeat=len(F)):
        if not validate_sstructure(F, SStructure(dict(enumerate(values)))):
            count += 1
    return count


def test_counts(p1, a1, a2):
    assert count_sstructures(p1, 2) == 9
    assert count_sstructures(a1, 3) == 4
    assert count_sstructures(a1, 0) == 1
    assert count_sstructures(a2, 1) == 13


def test_counts_match_brute_force(p1, a2):
    assert count_sstructures(p1, 2) == brute_force_count(p1, 2)
    assert count_sstructures(a2, 1) == brute_force_count(a2, 1)


def test_enumeration_is_deterministic_and_valid(a2):
    first = list(enumerate_sstructures(a2, 1))
    second = list(enumerate_sstructures(a2, 1))
    assert first == second
    assert first[0] == SStructure.trivial(a2)
    assert all(validate_sstructure(a2, A) == [] for A in first)


def test_negative_bound(a1):
    with pytest.raises(ValueError):
        list(enumerate_sstructures(a1, -1))


def test_validate(a2, a2_diagonal):
    assert validate_sstructure(a2, a2_diagonal) == []
    bad = SStructure({0: (0, 0), 1: (1, 0), 2: (0, -1), 3: (-1, -1)})
    violations = validate_sstructure(a2, bad)
    assert [(v.kind, v.cone) for v in violations] == [("not-in-minus-cone", 1)]


def test_zero_heredity(a2):
    A = SStructure({0: (0, 0), 1: (-1, 0), 2: (0, 0), 3: (0, 0)})
    assert [(v.kind, v.cone) for v in validate_sstructure(a2, A)] == [("zero-heredity", 3)]


def test_wrong_rank(a2):
    A = SStructure({0: (0, 0), 1: (-1,), 2: (0, 0), 3: (-1, -1)})
    assert "wrong-rank" in {v.kind for v in validate_sstructure(a2, A)}


def test_missing_assignment(a2):
    with pytest.raises(MissingAssignmentError):
        validate_sstructure(a2, SStructure({0: (0, 0)}))
    with pytest.raises(MissingAssignmentError):
        SStructure({0: (0, 0)})[1]


def test_steps_and_levels(a2_diagonal):
    assert step_weight(a2_diagonal, 3, (2, 3)) == -5
    assert serre_le_w(a2_diagonal, 1, [(1, 0), (0, 4)], 0)
    assert not serre_le_w(a2_diagonal, 1, [(-1, 0)], 0)
    assert is_pure_weight(a2_diagonal, 3, (1, 1), -2)
    assert not is_pure_weight(a2_diagonal, 3, (1, 1), -1)


def test_restrict(a2_diagonal):
    assert restrict_sstructure(a2_diagonal, [0, 1]).assignments == {0: (0, 0), 1: (-1, 0)}


def test_spanning_condition_on_charts(a2, quadric, p2):
    for F in (a2, quadric, p2):
        for d in F.maximal:
            chart = chart_spec(F, d)
            for c in chart.faces:
                assert check_F1(chart, c), (F, c)


def test_spanning_certificate_lists_generators(quadric_chart):
    certificate = check_F1(quadric_chart, 3)
    assert certificate.ok
    assert certificate.generators == [(0, 1), (1, 0), (2, -1)]
    assert certificate.checked > 0
