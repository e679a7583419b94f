from pathlib import Path

import pytest

from stagger.fan import builtin_fan, chart_spec
from stagger.sstructure import SStructure

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"
GOLDEN = Path(__file__).resolve().parent / "golden"


@pytest.fixture
def p1():
    return builtin_fan("projective_space", 1)


@pytest.fixture
def p2():
    return builtin_fan("projective_space", 2)


@pytest.fixture
def a1():
    return builtin_fan("affine_space", 1)


@pytest.fixture
def a2():
    return builtin_fan("affine_space", 2)


@pytest.fixture
def quadric():
    return builtin_fan("quadric_cone")


@pytest.fixture
def a2_chart(a2):
    return chart_spec(a2, 3)


@pytest.fixture
def quadric_chart(quadric):
    return chart_spec(quadric, 3)


@pytest.fixture
def a2_diagonal(a2):
    """A_C = minus the sum of the rays of C."""
    return SStructure({0: (0, 0), 1: (-1, 0), 2: (0, -1), 3: (-1, -1)})


@pytest.fixture
def quadric_structure(quadric):
    return SStructure({0: (0, 0), 1: (-1, 0), 2: (-1, -2), 3: (-2, -2)})
