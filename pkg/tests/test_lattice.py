import pytest
from sympy import Matrix

from stagger.lattice import (LatticeQuotient, content, diagonal, in_lattice, kernel_basis, mat_mul, orthogonal_lattice,
                             pairing, primitive, rank, saturate_span, smith_normal_form, solve_integer)


def test_content_and_primitive():
    assert content((4, -6)) == 2
    assert primitive((4, -6)) == (2, -3)
    assert primitive((0, 0)) == (0, 0)
    assert content((0, 0, 0)) == 0


def test_smith_normal_form_diagonalizes():
    M = [[2, 4], [6, 8]]
    U, D, V = smith_normal_form(M)
    assert mat_mul(mat_mul(U, M), V) == D
    assert diagonal(D) == [2, 4]


def is_unimodular(U):
    return Matrix(U).det() in (1, -1)


def test_smith_normal_form_invariant_factors():
    U, D, V = smith_normal_form([[2, 0], [0, 3]])
    assert D == [[1, 0], [0, 6]]
    assert is_unimodular(U) and is_unimodular(V)


@pytest.mark.parametrize("M", [[[2, 4], [6, 8]], [[2, 0], [0, 3]], [[4, 6, 2], [2, 2, 8]], [[1, 2], [3, 4], [5, 6]],
                               [[6, 4, 0], [0, 9, 3], [2, 0, 5]],
                               [[1, 0, 0, 0], [0, 2, 0, 0], [0, 0, 3, 0], [0, 0, 0, 4]]])
def test_smith_normal_form_contract(M):
    U, D, V = smith_normal_form(M)
    assert mat_mul(mat_mul(U, M), V) == D
    assert is_unimodular(U) and is_unimodular(V)
    assert all(D[i][j] == 0 for i in range(len(D)) for j in range(len(D[0])) if i != j)
    d = diagonal(D)
    assert all(a > 0 for a in d)
    for a, b in zip(d, d[1:]):
        assert b % a == 0


def test_smith_normal_form_of_empty_matrix():
    U, D, V = smith_normal_form([], 3)
    assert U == []
    assert V == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_rank():
    assert rank([[1, 2], [2, 4]]) == 1
    assert rank([[1, 0], [0, 1]]) == 2
    assert rank([]) == 0


def test_solve_integer():
    assert solve_integer([[2, 0], [0, 3]], [4, 9], 2) == (2, 3)
    assert solve_integer([[2]], [3], 1) is None
    x = solve_integer([[1, 1]], [5], 2)
    assert x is not None and sum(x) == 5


def test_kernel_basis_spans_the_kernel():
    basis = kernel_basis([[1, 1, 1]], 3)
    assert len(basis) == 2
    assert all(sum(v) == 0 for v in basis)
    assert in_lattice((1, -1, 0), basis)
    assert in_lattice((2, 3, -5), basis)


def test_orthogonal_lattice():
    basis = orthogonal_lattice([(1, 0)], 2)
    assert len(basis) == 1
    assert pairing(basis[0], (1, 0)) == 0
    assert in_lattice((0, 1), basis)


def test_saturate_span():
    basis = saturate_span([(2, 0)], 2)
    assert len(basis) == 1
    assert in_lattice((1, 0), basis)
    assert not in_lattice((0, 1), basis)


def test_in_lattice():
    assert in_lattice((2, 2), [(1, 1)])
    assert not in_lattice((1, 2), [(1, 1)])
    assert in_lattice((0, 0), [])


def test_lattice_quotient():
    q = LatticeQuotient([(0, 1)], 2)
    assert q.rank == 1
    assert q.contains((0, 5))
    assert not q.contains((1, 0))
    assert q.same_class((1, 2), (1, -7))
    x = (3, 4)
    c = q.canonical(x)
    assert q.same_class(c, x)
    assert q.canonical(c) == c


def test_lattice_quotient_by_everything_and_nothing():
    full = LatticeQuotient([(1, 0), (0, 1)], 2)
    assert full.rank == 0
    assert full.canonical((5, -3)) == (0, 0)
    trivial = LatticeQuotient([], 2)
    assert trivial.rank == 2
    assert trivial.canonical((5, -3)) == (5, -3)


def test_lattice_quotient_saturates():
    q = LatticeQuotient([(2, 0)], 2)
    assert q.contains((1, 0))
    assert q == LatticeQuotient([(1, 0)], 2)
