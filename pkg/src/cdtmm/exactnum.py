"""Exact integer/rational primitives and the Pfaffian."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial as _factorial, lcm
from typing import Iterable, Sequence, Union

Number = Union[int, Fraction]


def factorial(k: int) -> int:
    if k < 0:
        raise ValueError(f"factorial of negative integer {k}")
    return _factorial(k)


@lru_cache(maxsize=None)
def _dfact(k: int) -> int:
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def double_factorial(k: int) -> int:
    """k!! with (-1)!! = 0!! = 1; k < -1 is an error."""
    if k < -1:
        raise ValueError(f"double factorial undefined for {k} < -1")
    return _dfact(k)


def vandermonde(values: Iterable[Number]) -> Number:
    """prod_{i<j} (v_j - v_i) in the given order."""
    v = list(values)
    out: Number = 1
    for i in range(len(v)):
        for j in range(i + 1, len(v)):
            out *= v[j] - v[i]
    return out


class AntisymmetricMatrix:
    """Even-dimensional antisymmetric matrix with exact entries.

    Only the strict upper triangle is stored.
    """

    __slots__ = ("dim", "_upper")

    def __init__(self, dim: int, upper: dict | None = None):
        if dim < 0:
            raise ValueError("dimension must be non-negative")
        self.dim = dim
        self._upper: dict[tuple[int, int], Fraction] = {}
        for (i, j), val in (upper or {}).items():
            self[i, j] = val

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Number]]) -> "AntisymmetricMatrix":
        n = len(rows)
        for i in range(n):
            if len(rows[i]) != n:
                raise ValueError("matrix is not square")
            if rows[i][i] != 0:
                raise ValueError("diagonal must vanish")
            for j in range(i + 1, n):
                if rows[i][j] != -rows[j][i]:
                    raise ValueError(f"entries ({i},{j}) not antisymmetric")
        return cls(n, {(i, j): rows[i][j] for i in range(n) for j in range(i + 1, n)})

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        if i == j:
            return Fraction(0)
        if i < j:
            return self._upper.get((i, j), Fraction(0))
        return -self._upper.get((j, i), Fraction(0))

    def __setitem__(self, ij: tuple[int, int], val: Number) -> None:
        i, j = ij
        if not (0 <= i < self.dim and 0 <= j < self.dim):
            raise IndexError(ij)
        if i == j:
            if val != 0:
                raise ValueError("diagonal must vanish")
            return
        if i > j:
            i, j, val = j, i, -val
        self._upper[(i, j)] = Fraction(val)

    def rows(self) -> list[list[Fraction]]:
        return [[self[i, j] for j in range(self.dim)] for i in range(self.dim)]


def _pf_cofactor(a: list[list[Fraction]], idx: tuple[int, ...]) -> Fraction:
    if not idx:
        return Fraction(1)
    first, rest = idx[0], idx[1:]
    total = Fraction(0)
    for pos, j in enumerate(rest):
        if a[first][j] == 0:
            continue
        sub = rest[:pos] + rest[pos + 1:]
        term = a[first][j] * _pf_cofactor(a, sub)
        total += -term if pos % 2 else term
    return total


def _pf_elimination(a: list[list[Fraction]]) -> Fraction:
    # 2x2-block skew elimination; exact, so no pivot-size concerns
    a = [row[:] for row in a]
    n = len(a)
    pf = Fraction(1)
    for k in range(0, n - 1, 2):
        piv = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k + 1:
            # swap rows/cols k+1 and piv, flips the sign
            a[k + 1], a[piv] = a[piv], a[k + 1]
            for row in a:
                row[k + 1], row[piv] = row[piv], row[k + 1]
            pf = -pf
        p = a[k][k + 1]
        pf *= p
        # update via the explicit Schur complement of the 2x2 pivot block
        rest = range(k + 2, n)
        ak = a[k]
        ak1 = a[k + 1]
        new = {}
        for i in rest:
            for j in rest:
                if j <= i:
                    continue
                # Schur complement D + B^T P^-1 B, P = [[0,p],[-p,0]]
                corr = (ak1[i] * ak[j] - ak[i] * ak1[j]) / p
                new[(i, j)] = a[i][j] + corr
        for (i, j), v in new.items():
            a[i][j] = v
            a[j][i] = -v
    return pf


def pfaffian(m: AntisymmetricMatrix | Sequence[Sequence[Number]]) -> Fraction:
    """Exact Pfaffian; cofactor expansion up to dimension 8, elimination above."""
    if not isinstance(m, AntisymmetricMatrix):
        m = AntisymmetricMatrix.from_rows(m)
    if m.dim % 2:
        raise ValueError(f"Pfaffian needs even dimension, got {m.dim}")
    a = m.rows()
    if m.dim <= 8:
        return _pf_cofactor(a, tuple(range(m.dim)))
    return _pf_elimination(a)


def bareiss_det(rows: Sequence[Sequence[Number]]) -> Fraction:
    """Fraction-free determinant; used to cross-check Pf^2 = det."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    # clear denominators so that the Bareiss divisions stay exact
    den = 1
    for row in rows:
        for x in row:
            den = lcm(den, Fraction(x).denominator)
    a = [[int(Fraction(x) * den) for x in row] for row in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return Fraction(sign * a[n - 1][n - 1], den ** n)

