"""Exact integer lattice algebra.

Vectors are tuples of Python integers; matrices are lists of rows. The
Smith normal form comes from sympy's DomainMatrix machinery over ZZ, every
other routine here is derived from it.
"""

import logging
from math import gcd
from typing import List, Optional, Sequence, Tuple

from sympy import Matrix
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DM
from sympy.polys.matrices.normalforms import smith_normal_decomp

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]
IntMatrix = List[List[int]]


# 1. Vector helpers

def vector(coords) -> Vector:
    return tuple(int(c) for c in coords)


def pairing(chi: Sequence[int], gamma: Sequence[int]) -> int:
    """Natural pairing of a character with a cocharacter."""
    if len(chi) != len(gamma):
        raise ValueError("pairing: rank mismatch {} vs {}".format(len(chi), len(gamma)))
    return sum(a * b for a, b in zip(chi, gamma))


def add(u: Sequence[int], v: Sequence[int]) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence[int], v: Sequence[int]) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def scale(c: int, v: Sequence[int]) -> Vector:
    return tuple(c * a for a in v)


def neg(v: Sequence[int]) -> Vector:
    return tuple(-a for a in v)


def content(v: Sequence[int]) -> int:
    g = 0
    for a in v:
        g = gcd(g, a)
    return g


def primitive(v: Sequence[int]) -> Vector:
    g = content(v)
    if g == 0:
        return tuple(v)
    return tuple(a // g for a in v)


def zero(n: int) -> Vector:
    return (0,) * n


def unit_vector(n: int, i: int) -> Vector:
    return tuple(1 if j == i else 0 for j in range(n))


# 2. Matrix helpers

def transpose(M: Sequence[Sequence[int]], ncols: int = 0) -> IntMatrix:
    if not M:
        return [[] for _ in range(ncols)]
    return [list(col) for col in zip(*M)]


def mat_mul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> IntMatrix:
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def row_times(v: Sequence[int], M: Sequence[Sequence[int]]) -> Vector:
    """Row vector v times matrix M."""
    if not M:
        return ()
    return tuple(sum(v[i] * M[i][j] for i in range(len(M))) for j in range(len(M[0])))


def times_col(M: Sequence[Sequence[int]], v: Sequence[int]) -> Vector:
    return tuple(sum(a * b for a, b in zip(row, v)) for row in M)


def identity(n: int) -> IntMatrix:
    return [list(unit_vector(n, i)) for i in range(n)]


def unimodular_inverse(M: Sequence[Sequence[int]]) -> IntMatrix:
    if not M:
        return []
    inv = Matrix(M).inv()
    return [[int(x) for x in row] for row in inv.tolist()]


def _to_int_rows(dm) -> IntMatrix:
    return [[int(x) for x in row] for row in dm.to_Matrix().tolist()]


# 3. Smith normal form and its consequences

def smith_normal_form(M: Sequence[Sequence[int]], ncols: Optional[int] = None):
    """Return (U, D, V) with U*M*V = D diagonal, U and V unimodular.

    Diagonal entries are nonnegative. An empty matrix needs ``ncols`` to know
    the width of V.
    """
    m = len(M)
    k = len(M[0]) if m else (ncols or 0)
    if m == 0 or k == 0:
        return identity(m), [[0] * k for _ in range(m)], identity(k)
    smf, s, t = smith_normal_decomp(DM([list(map(int, row)) for row in M], ZZ))
    U, D, V = _to_int_rows(s), _to_int_rows(smf), _to_int_rows(t)
    for i in range(min(m, k)):
        if D[i][i] < 0:
            D[i][i] = -D[i][i]
            U[i] = [-a for a in U[i]]
    return U, D, V


def diagonal(D: IntMatrix) -> List[int]:
    if not D:
        return []
    return [D[i][i] for i in range(min(len(D), len(D[0])))]


def rank(M: Sequence[Sequence[int]]) -> int:
    if not M or not M[0]:
        return 0
    return Matrix([list(row) for row in M]).rank()


def saturate_span(vs: Sequence[Sequence[int]], n: Optional[int] = None) -> List[Vector]:
    """Basis of span(vs) intersected with the ambient lattice."""
    vs = [vector(v) for v in vs]
    if n is None:
        n = len(vs[0]) if vs else 0
    if not vs:
        return []
    _, D, V = smith_normal_form(vs, n)
    Vinv = unimodular_inverse(V)
    return [tuple(Vinv[i]) for i, d in enumerate(diagonal(D)) if d != 0]


def kernel_basis(M: Sequence[Sequence[int]], ncols: int) -> List[Vector]:
    """Integer basis of {x : M x = 0}; the basis spans a saturated sublattice."""
    if not M:
        return [unit_vector(ncols, i) for i in range(ncols)]
    _, D, V = smith_normal_form(M, ncols)
    d = diagonal(D)
    basis = []
    for j in range(ncols):
        if j >= len(d) or d[j] == 0:
            basis.append(tuple(V[i][j] for i in range(ncols)))
    return basis


def orthogonal_lattice(vs: Sequence[Sequence[int]], n: int) -> List[Vector]:
    """Basis of the covectors pairing to zero with every vector of vs."""
    return kernel_basis([list(v) for v in vs], n)


def solve_integer(A: Sequence[Sequence[int]], b: Sequence[int], ncols: int) -> Optional[Vector]:
    """One integer solution of A x = b, or None."""
    m = len(A)
    if m == 0:
        return zero(ncols)
    U, D, V = smith_normal_form(A, ncols)
    c = times_col(U, b)
    d = diagonal(D)
    y = [0] * ncols
    for i in range(m):
        di = d[i] if i < len(d) else 0
        if di == 0:
            if c[i] != 0:
                return None
        elif c[i] % di != 0:
            return None
        else:
            y[i] = c[i] // di
    return times_col(V, y)


def in_lattice(v: Sequence[int], basis: Sequence[Sequence[int]]) -> bool:
    """Is v an integer combination of the basis vectors?"""
    if not basis:
        return all(a == 0 for a in v)
    return solve_integer(transpose(basis), v, len(basis)) is not None


def rref_key(vs: Sequence[Sequence[int]]) -> Tuple[Vector, ...]:
    """Canonical description of the rational span of vs."""
    if not vs:
        return ()
    R, pivots = Matrix([list(v) for v in vs]).rref()
    rows = []
    for i in range(len(pivots)):
        row = R.row(i)
        denom = 1
        for x in row:
            denom = denom * x.q // gcd(denom, x.q)
        rows.append(primitive(tuple(int(x * denom) for x in row)))
    return tuple(rows)


# 4. Quotient lattices

class LatticeQuotient:
    """The quotient of Z^n by a saturated sublattice L.

    Coordinates come from one SNF of a basis of L: with U*L*V = [I | 0], the
    coordinates of x are the trailing entries of x*V.
    """

    def __init__(self, sub_basis: Sequence[Sequence[int]], n: int):
        self.n = n
        self.sub_basis = saturate_span(sub_basis, n)
        self.sub_rank = len(self.sub_basis)
        if self.sub_basis:
            _, _, V = smith_normal_form(self.sub_basis, n)
        else:
            V = identity(n)
        self._V = V
        self._Vinv = unimodular_inverse(V) if n else []

    @property
    def rank(self) -> int:
        return self.n - self.sub_rank

    def project(self, x: Sequence[int]) -> Vector:
        return row_times(x, self._V)[self.sub_rank:] if self.n else ()

    def lift(self, q: Sequence[int]) -> Vector:
        if not self.n:
            return ()
        return row_times((0,) * self.sub_rank + tuple(q), self._Vinv)

    def canonical(self, x: Sequence[int]) -> Vector:
        return self.lift(self.project(x))

    def same_class(self, x: Sequence[int], y: Sequence[int]) -> bool:
        return self.project(x) == self.project(y)

    def contains(self, x: Sequence[int]) -> bool:
        return all(a == 0 for a in self.project(x))

    def __eq__(self, other):
        return isinstance(other, LatticeQuotient) and self.n == other.n and \
            rref_key(self.sub_basis) == rref_key(other.sub_basis)

    def __str__(self):
        return "[LatticeQuotient Z^{} / rank {}]".format(self.n, self.sub_rank)
