"""GL(N) representation labels, characters, dimensions and expansion coefficients."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, prod
from typing import Sequence

import numpy as np

from .exactnum import bareiss_det, double_factorial, vandermonde
from .permgroup import CycleType, _check_partition, sn_character, sn_dimension

CONFLUENT_GAP = 1e-8


@dataclass(frozen=True)
class ShiftedWeights:
    """Strictly decreasing h_1 > ... > h_N >= 0."""

    h: tuple[int, ...]

    def __post_init__(self):
        h = tuple(int(x) for x in self.h)
        object.__setattr__(self, "h", h)
        if any(h[i] <= h[i + 1] for i in range(len(h) - 1)) or (h and h[-1] < 0):
            raise ValueError(f"shifted weights must be strictly decreasing and non-negative: {h}")

    @property
    def N(self) -> int:
        return len(self.h)

    @property
    def n(self) -> int:
        return sum(self.h) - self.N * (self.N - 1) // 2

    @property
    def partition(self) -> tuple[int, ...]:
        N = self.N
        return tuple(x for x in (self.h[i] - (N - 1 - i) for i in range(N)) if x)

    @property
    def even(self) -> tuple[int, ...]:
        return tuple(x for x in self.h if x % 2 == 0)

    @property
    def odd(self) -> tuple[int, ...]:
        return tuple(x for x in self.h if x % 2)

    def parity(self) -> "ParityReport":
        e, o = len(self.even), len(self.odd)
        return ParityReport(e, o, e == o or e == o + 1)

    def residues(self, m: int) -> list[tuple[int, ...]]:
        return [tuple(x for x in self.h if x % m == eps) for eps in range(m)]

    def __str__(self) -> str:
        return "h:" + ",".join(map(str, self.h))


@dataclass(frozen=True)
class ParityReport:
    even_count: int
    odd_count: int
    admissible: bool


def from_partition(lam: Sequence[int], N: int) -> ShiftedWeights:
    lam = _check_partition(lam)
    if len(lam) > N:
        raise ValueError(f"partition {lam} has more than N={N} parts")
    lam = lam + (0,) * (N - len(lam))
    return ShiftedWeights(tuple(lam[i] + N - 1 - i for i in range(N)))


def parse_partition(text: str) -> tuple[int, ...]:
    t = text.strip()
    if t in ("", "()", "trivial", "0"):
        return ()
    if t == "defining":
        return (1,)
    if not re.fullmatch(r"\(?\s*\d+(\s*,\s*\d+)*\s*\)?", t):
        raise ValueError(f"malformed partition {text!r}")
    return _check_partition(int(x) for x in re.findall(r"\d+", t))


def parse_rep(text: str, N: int | None = None) -> ShiftedWeights:
    """'3,1,1', 'trivial', 'defining', 'det:q' (needs N) or 'h:7,4,2,0'."""
    t = text.strip()
    if t.startswith("h:"):
        hw = ShiftedWeights(tuple(int(x) for x in t[2:].split(",")))
        if N is not None and hw.N != N:
            raise ValueError(f"{text} has {hw.N} entries but N={N}")
        return hw
    if N is None:
        raise ValueError("N is required for partition syntax")
    if t.startswith("det:"):
        q = int(t[4:])
        return from_partition((q,) * N if q else (), N)
    return from_partition(parse_partition(t), N)


def _dim_denominator(N: int) -> int:
    return prod(factorial(k) for k in range(1, N))


def gl_dimension(h: ShiftedWeights) -> int:
    num = vandermonde(reversed(h.h))
    d, r = divmod(num, _dim_denominator(h.N))
    assert r == 0 and d > 0
    return d


def gl_dimension_poly(lam: Sequence[int]):
    """Content formula prod (N + c)/hook as a sympy polynomial in N."""
    import sympy as sp
    N = sp.Symbol("N")
    lam = _check_partition(lam)
    conj = [sum(1 for x in lam if x > j) for j in range(lam[0])] if lam else []
    out = sp.Integer(1)
    for i, row in enumerate(lam):
        for j in range(row):
            hook = (row - j - 1) + (conj[j] - i - 1) + 1
            out *= (N + j - i) / sp.Integer(hook)
    return sp.expand(out)


# --- characters ---------------------------------------------------------------

def _complete_homogeneous(eigs, kmax: int, zero, one):
    # h_k(x_1..x_m) via h_k(x..x_m) = h_k(x..x_{m-1}) + x_m h_{k-1}(x..x_m)
    hk = [one] + [zero] * kmax
    for x in eigs:
        for k in range(1, kmax + 1):
            hk[k] = hk[k] + x * hk[k - 1]
    return hk


def schur_jacobi_trudi(lam: Sequence[int], eigs):
    lam = _check_partition(lam)
    exact = all(isinstance(x, (int, Fraction)) for x in eigs)
    zero, one = (Fraction(0), Fraction(1)) if exact else (0j, 1 + 0j)
    if not lam:
        return one
    ell = len(lam)
    hk = _complete_homogeneous(list(eigs), lam[0] + ell, zero, one)

    def H(k):
        return hk[k] if k >= 0 else zero

    mat = [[H(lam[i] - i + j) for j in range(ell)] for i in range(ell)]
    if exact:
        return bareiss_det(mat)
    return complex(np.linalg.det(np.array(mat, dtype=complex)))


def _relative_gap(eigs) -> float:
    vals = [complex(x) for x in eigs]
    if len(vals) < 2:
        return float("inf")
    scale = max(1.0, max(abs(v) for v in vals))
    return min(abs(a - b) for i, a in enumerate(vals) for b in vals[i + 1:]) / scale


def weyl_character(h: ShiftedWeights, eigs: Sequence):
    """det(x_k^{h_l}) / Delta(x), with a Jacobi-Trudi fallback at confluence."""
    eigs = list(eigs)
    if len(eigs) != h.N:
        raise ValueError(f"need {h.N} eigenvalues, got {len(eigs)}")
    exact = all(isinstance(x, (int, Fraction)) for x in eigs)
    if _relative_gap(eigs) < CONFLUENT_GAP:
        return schur_jacobi_trudi(h.partition, eigs)
    N = h.N
    if exact:
        xs = [Fraction(x) for x in eigs]
        num = bareiss_det([[x ** hl for hl in h.h] for x in xs])
        den = bareiss_det([[x ** (N - 1 - l) for l in range(N)] for x in xs])
        return num / den
    xs = np.array(eigs, dtype=complex)
    num = np.linalg.det(xs[:, None] ** np.array(h.h)[None, :])
    den = np.linalg.det(xs[:, None] ** np.arange(N - 1, -1, -1)[None, :])
    return complex(num / den)


# --- expansion coefficients and C_m characters ---------------------------------

def _sign(x) -> int:
    return (x > 0) - (x < 0)


def expansion_coefficient(h: ShiftedWeights) -> Fraction:
    """Coefficient c_h of chi_h in exp(Tr M^2), up to an N-dependent constant.

    Vandermondes are taken in increasing order; the sign factor
    sgn prod (h^o_i - h^e_j) makes c_h / c_trivial the exact coefficient.
    """
    if not h.parity().admissible:
        return Fraction(0)
    ev, od = sorted(h.even), sorted(h.odd)
    mag = Fraction(vandermonde(ev) * vandermonde(od), prod(factorial(x // 2) for x in h.h))
    sgn = _sign(prod(o - e for o in od for e in ev))
    return sgn * mag


def expansion_coefficient_exact(lam: Sequence[int]) -> Fraction:
    """Coefficient of s_lam in exp(p_2): chi_lam([2^k]) / k! (zero for odd |lam|)."""
    lam = _check_partition(lam)
    n = sum(lam)
    if n % 2:
        return Fraction(0)
    return Fraction(sn_character(lam, CycleType([2] * (n // 2))), factorial(n // 2))


def chi_C1(h: ShiftedWeights) -> Fraction:
    n = h.n
    return Fraction(h.N ** n * sn_dimension(h.partition), factorial(n))


def chi_C2_over_C1(h: ShiftedWeights) -> Fraction:
    """Double-factorial closed form; equals sum_{gamma in [2^{n/2}]} chi(gamma) / s."""
    if not h.parity().admissible or h.n % 2:
        return Fraction(0)
    N = h.N
    c = (N + 1) // 2
    sign = -1 if (c * (c - 1) // 2) % 2 else 1
    num = prod(double_factorial(e - 1) for e in h.even) * prod(double_factorial(o) for o in h.odd)
    den = prod(o - e for o in h.odd for e in h.even)
    return Fraction(sign * num, den)


def class_sum_ratio(lam: Sequence[int]) -> Fraction:
    """sum over [2^{n/2}] of chi_lam / s_lam, straight from the S_n characters."""
    lam = _check_partition(lam)
    n = sum(lam)
    if n % 2:
        return Fraction(0)
    t = CycleType([2] * (n // 2))
    return Fraction(t.class_size() * sn_character(lam, t), sn_dimension(lam))


def chi_Cm(h: ShiftedWeights, m: int) -> Fraction:
    """chi_R(C_m) from Tr C_m^p = N delta_{p,m}: N^{n/m} chi([m^{n/m}]) / (m^{n/m} (n/m)!)."""
    n = h.n
    if n % m:
        return Fraction(0)
    k = n // m
    return Fraction(h.N ** k * sn_character(h.partition, CycleType([m] * k)), m ** k * factorial(k))


def chi_C2(h: ShiftedWeights) -> Fraction:
    return chi_Cm(h, 2)


def chi_Cm_kazakov(h: ShiftedWeights, m: int) -> float:
    """Residue-class product formula for chi(C_m) without its undetermined constant.

    Only meaningful when the residue classes of h have the sizes they have for
    the trivial representation; it is 0 otherwise.
    """
    res = h.residues(m)
    triv = [sum(1 for x in range(h.N) if x % m == eps) for eps in range(m)]
    if [len(r) for r in res] != triv:
        return 0.0
    val = Fraction(1)
    for eps, part in enumerate(res):
        val *= Fraction(vandermonde(sorted(part)), prod(factorial((x - eps) // m) for x in part))
    sgn = 1
    for e1 in range(m):
        for e2 in range(e1 + 1, m):
            sgn *= _sign(prod(a - b for a in res[e2] for b in res[e1]))
    return float(sgn * val) * (h.N / m) ** (sum(h.h) / m)


# --- Littlewood-Richardson ------------------------------------------------------

def _horizontal_strips(mu: list[int], k: int):
    # nu / mu a horizontal strip of size k: mu_r <= nu_r <= mu_{r-1}
    mu = mu + [0]

    def rec(r, left, acc):
        if r == len(mu):
            if left == 0:
                yield acc
            return
        cap = left if r == 0 else min(left, mu[r - 1] - mu[r])
        for t in range(cap, -1, -1):
            yield from rec(r + 1, left - t, acc + [t])

    yield from rec(0, k, [])


def _lr_tableaux_count(alpha: tuple[int, ...], beta: tuple[int, ...]) -> dict[tuple[int, ...], int]:
    # add beta_1 ones, beta_2 twos, ... as horizontal strips, then require the
    # reverse reading word (rows top to bottom, right to left) to be a lattice word
    results: dict[tuple[int, ...], int] = {}

    def rec(shape: list[int], idx: int, fill: list[list[int]]):
        if idx == len(beta):
            cnt = [0] * (len(beta) + 2)
            for row in fill:
                for x in reversed(row):
                    cnt[x] += 1
                    if x > 1 and cnt[x] > cnt[x - 1]:
                        return
            key = tuple(x for x in shape if x)
            results[key] = results.get(key, 0) + 1
            return
        for adds in _horizontal_strips(shape, beta[idx]):
            new = [a + b for a, b in zip(shape + [0], adds)]
            nf = [r + [idx + 1] * t for r, t in zip(fill + [[]], adds)]
            while new and new[-1] == 0:
                new.pop()
                nf.pop()
            rec(new, idx + 1, nf)

    rec(list(alpha), 0, [[] for _ in alpha])
    return results


def littlewood_richardson(alpha: Sequence[int], beta: Sequence[int]) -> dict[tuple[int, ...], int]:
    a, b = _check_partition(alpha), _check_partition(beta)
    if sum(a) + sum(b) > 16:
        raise ValueError("|alpha| + |beta| exceeds the desk-scale bound 16")
    return dict(sorted(_lr_tableaux_count(a, b).items(), reverse=True))


def invariant_dimension(alpha: Sequence[int], beta: Sequence[int]) -> int:
    return sum(c * c for c in littlewood_richardson(alpha, beta).values())
