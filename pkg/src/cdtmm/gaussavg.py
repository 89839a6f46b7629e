"""Gaussian averages of characters, <chi(A)> and <chi(A^2)>, by several routes.

Measure: exp(-N Tr A^2 / 2), so <A_ij A_kl> = delta_il delta_jk / N.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, prod
from typing import Sequence, Union

import mpmath

from .exactnum import AntisymmetricMatrix, double_factorial, pfaffian, vandermonde
from .glchar import (ShiftedWeights, chi_C2_over_C1, from_partition, gl_dimension)
from .permgroup import (CycleType, Permutation, _check_partition, compose, cycle_count,
                        pairings, partitions, sn_character, sn_dimension)

Value = Union[Fraction, float]


@dataclass(frozen=True)
class AverageResult:
    value: Value
    method: str
    rep: ShiftedWeights
    N: int

    @property
    def n(self) -> int:
        return self.rep.n


# --- <chi(A)> -------------------------------------------------------------------

def oracle_chiA(R: Sequence[int], N: int) -> Fraction:
    """N^{-n/2} (d_R/s_R) sum_{gamma in [2^{n/2}]} chi_R(gamma)."""
    lam = _check_partition(R)
    n = sum(lam)
    if n > 12:
        raise ValueError("oracle_chiA supports |R| <= 12")
    if n % 2:
        return Fraction(0)
    if len(lam) > N:
        return Fraction(0)  # chi_R vanishes identically on N x N matrices
    t = CycleType([2] * (n // 2))
    d = gl_dimension(from_partition(lam, N))
    return Fraction(d * t.class_size() * sn_character(lam, t), sn_dimension(lam)) / Fraction(N) ** (n // 2)


def wick_chiA(R: Sequence[int], N: int) -> Fraction:
    """Unsimplified double sum (1/n!) sum_sigma chi(sigma) N^{-n/2} sum_gamma N^{cy(sigma gamma)}."""
    lam = _check_partition(R)
    n = sum(lam)
    if n % 2:
        return Fraction(0)
    if n == 0:
        return Fraction(1)
    total = Fraction(0)
    gammas = pairings(n)
    for t in partitions(n):
        ct = CycleType(t)
        sigma = _class_rep(t)
        poly = sum(Fraction(N) ** cycle_count(compose(sigma, g)) for g in gammas)
        total += ct.class_size() * sn_character(lam, ct) * poly
    return total / factorial(n) / Fraction(N) ** (n // 2)


def dfi_chiA(h: ShiftedWeights) -> Fraction:
    """N^{-n/2} d_h chi(C2)/chi(C1) with the double-factorial closed form."""
    n = h.n
    if n % 2:
        return Fraction(0)
    return gl_dimension(h) * chi_C2_over_C1(h) / Fraction(h.N) ** (n // 2)


# --- <chi(A^2)> oracle ------------------------------------------------------------

def _class_rep(t: Sequence[int]) -> Permutation:
    cycles, start = [], 1
    for k in t:
        cycles.append(tuple(range(start, start + k)))
        start += k
    return Permutation.from_cycles(cycles, sum(t))


@lru_cache(maxsize=None)
def _a2_class_polys(n: int) -> dict[tuple[int, ...], Counter]:
    # for each cycle type of S_n: sum over gamma in [2^n] of N^{cy((sigma x 1) gamma alpha)}
    alpha = Permutation([x + n for x in range(1, n + 1)] + list(range(1, n + 1)))
    gas = [compose(g, alpha) for g in pairings(2 * n)]
    out = {}
    for t in partitions(n):
        sig = _class_rep(t)
        big = Permutation(list(sig.images) + list(range(n + 1, 2 * n + 1)))
        out[t] = Counter(cycle_count(compose(big, ga)) for ga in gas)
    return out


def oracle_chiA2_poly(R: Sequence[int]) -> dict[int, Fraction]:
    """<chi_R(A^2)> as a Laurent polynomial in N, {exponent: coefficient}."""
    lam = _check_partition(R)
    n = sum(lam)
    if n > 6:
        raise ValueError("oracle_chiA2 supports |R| <= 6")
    if n == 0:
        return {0: Fraction(1)}
    acc: Counter = Counter()
    for t, poly in _a2_class_polys(n).items():
        ct = CycleType(t)
        w = Fraction(ct.class_size() * sn_character(lam, ct), factorial(n))
        for e, c in poly.items():
            acc[e - n] += w * c
    return {e: c for e, c in sorted(acc.items()) if c}


def eval_laurent(poly: dict[int, Fraction], N) -> Fraction:
    return sum((c * Fraction(N) ** e for e, c in poly.items()), Fraction(0))


def laurent_to_sympy(poly: dict[int, Fraction], symbol=None):
    import sympy as sp
    N = symbol if symbol is not None else sp.Symbol("N")
    return sum((sp.Rational(c.numerator, c.denominator) * N ** e for e, c in poly.items()),
               sp.Integer(0))


def oracle_chiA2(R: Sequence[int], N) -> Fraction:
    """Exact Wick value; N an integer, or the string 'symbolic' for a sympy expression."""
    poly = oracle_chiA2_poly(R)
    if isinstance(N, str):
        if N != "symbolic":
            raise ValueError("N must be an integer or 'symbolic'")
        return laurent_to_sympy(poly)
    if len(_check_partition(R)) > N:
        return Fraction(0)
    return eval_laurent(poly, N)


# --- finite-N Pfaffian route --------------------------------------------------------

def pfaffian_entry(hi: int, hj: int) -> int:
    """(2h_i)!(2h_j)! T'_ij as an integer.

    T'_ij = sum_{k+l=2h_i, u+v=2h_j} ((-1)^u - (-1)^k)/2 (k+u)!!(l+v-2)!!/(k!u!l!v!).
    """
    a, b = 2 * hi, 2 * hj
    total = 0
    for k in range(a + 1):
        for u in range(b + 1):
            if (k + u) % 2 == 0:
                continue  # sign prefactor vanishes
            sgn = -1 if u % 2 else 1
            l, v = a - k, b - u
            total += sgn * comb(a, k) * comb(b, u) * double_factorial(k + u) * double_factorial(l + v - 2)
    return total


def pfaffian_matrix(h: ShiftedWeights) -> AntisymmetricMatrix:
    N = h.N
    m = AntisymmetricMatrix(N)
    for i in range(N):
        for j in range(i + 1, N):
            m[i, j] = pfaffian_entry(h.h[i], h.h[j])
    return m


def chiA2_pfaffian_raw(h: ShiftedWeights) -> Fraction:
    """Printed prefactor times Pf(T'); exact up to one N-dependent constant."""
    N = h.N
    if N % 2:
        raise ValueError("the Pfaffian route needs even N")
    pf = pfaffian(pfaffian_matrix(h))
    pre = Fraction(N ** (N * (N - 1) // 2), prod(factorial(k) for k in range(N)) * (2 * N) ** sum(h.h))
    return pre * pf


def pfaffian_calibration(N: int) -> Fraction:
    """Scalar K_N that maps the raw Pfaffian route to the unit-normalised average."""
    return 1 / chiA2_pfaffian_raw(from_partition((), N))


def chiA2_pfaffian(h: ShiftedWeights, calibrated: bool = True) -> Fraction:
    raw = chiA2_pfaffian_raw(h)
    return raw * pfaffian_calibration(h.N) if calibrated else raw


# --- large-N and saddle ---------------------------------------------------------

def chiA2_largeN(R: Sequence[int], N: int) -> Fraction:
    """n! N^{-n} d^2 / s."""
    lam = _check_partition(R)
    n = sum(lam)
    if len(lam) > N:
        return Fraction(0)
    d = gl_dimension(from_partition(lam, N))
    return Fraction(factorial(n) * d * d, sn_dimension(lam)) / Fraction(N) ** n


def _saddle_pfaffian(h: ShiftedWeights, eps) -> Fraction:
    N = h.N
    x = [Fraction(v, N) for v in h.h]
    if len(set(x)) != N:
        raise ValueError("coincident normalised weights make the saddle Pfaffian singular")
    eps = Fraction(eps)
    e2 = eps * eps
    m = AntisymmetricMatrix(N)
    for i in range(N):
        for j in range(i + 1, N):
            d, s = x[i] - x[j], x[i] + x[j]
            m[i, j] = d * (s + e2 / 2) / (d * d + e2 * s + e2 * e2 / 4)
    return pfaffian(m)


def chiA2_saddle(h: ShiftedWeights, eps=0, prefactor: str = "sqrt") -> mpmath.mpf:
    """Saddle-point expression c_N 2^{N/2} prod e^{-h_k} (2h_k/N)^{h_k} Pf[...].

    prefactor='sqrt' uses 2^{N/2}; 'full' uses prod_k 2 = 2^N.
    A zero weight contributes (0)^0 = 1.
    """
    N = h.N
    if N % 2:
        raise ValueError("the saddle route needs even N")
    pf = _saddle_pfaffian(h, eps)
    with mpmath.workdps(40):
        logc = (mpmath.mpf(N) ** 2 / 2) * mpmath.log(N) - (mpmath.mpf(N) / 2) * mpmath.log(2 * mpmath.pi) \
            - sum(mpmath.loggamma(k + 1) for k in range(N))
        two = {"sqrt": mpmath.mpf(N) / 2, "full": mpmath.mpf(N)}[prefactor] * mpmath.log(2)
        logp = sum(-hk + (hk * mpmath.log(mpmath.mpf(2 * hk) / N) if hk else 0) for hk in h.h)
        return mpmath.exp(logc + two + logp) * mpmath.mpf(pf.numerator) / pf.denominator


# --- det powers, conjecture, trace property ------------------------------------------

def det_power_average(N: int, q: int) -> Fraction:
    if N % 2 or N < 2:
        raise ValueError("det_power_average needs even N >= 2")
    if q < 0:
        raise ValueError("q must be non-negative")
    num = prod(double_factorial(2 * q + 2 * k + 1) * double_factorial(2 * q + 2 * k - 1) for k in range(N // 2))
    den = prod(double_factorial(2 * k + 1) * double_factorial(2 * k - 1) for k in range(N // 2))
    return Fraction(num, den) / Fraction(N) ** (N * q)


def chiA2_exact(h: ShiftedWeights) -> Fraction:
    """Best exact value: Wick oracle when small enough, calibrated Pfaffian otherwise."""
    if h.n <= 6:
        return oracle_chiA2(h.partition, h.N)
    return chiA2_pfaffian(h)


def conjecture_kN(h: ShiftedWeights, vandermonde_scale: int = 1, value: Fraction | None = None) -> Fraction:
    """<chi_h(A^2)> / (N^{-n} prod_eps Delta(s h^(eps))^2 prod (2h)!!), classes mod 4.

    vandermonde_scale=1 reproduces the published k_N values; 2 is the literal
    doubled-set reading.
    """
    val = chiA2_exact(h) if value is None else value
    den = Fraction(1, h.N ** h.n)
    for part in h.residues(4):
        den *= vandermonde(sorted(vandermonde_scale * x for x in part)) ** 2
        den *= prod(double_factorial(2 * x) for x in part)
    if den == 0:
        raise ZeroDivisionError("conjecture denominator vanishes")
    return val / den


def traceM_property(p: int, N: int) -> Fraction:
    """Tr(M^p) = N^{1-p/2} (pN/2+1)!! / (p(N/2-1)+1)!!."""
    if p < 2 or p % 2 or N % 2 or N < 2:
        raise ValueError("traceM_property needs even p >= 2 and even N >= 2")
    return Fraction(N) ** (1 - p // 2) * Fraction(double_factorial(p * N // 2 + 1),
                                                  double_factorial(p * (N // 2 - 1) + 1))


def traceM_normalised(p: int, N: int) -> Fraction:
    """Tr(M^p) / (N (p/2)^{p/2}), which tends to 1."""
    q = p // 2
    return traceM_property(p, N) / (N * q ** q)


# --- plethysm route --------------------------------------------------------------------

def plethysm_p2(R: Sequence[int]) -> dict[tuple[int, ...], int]:
    """chi_R(A^2) = sum_nu c_nu chi_nu(A): coefficients of s_R[p_2] (Sym^2 minus Alt^2)."""
    lam = _check_partition(R)
    n = sum(lam)
    out = {}
    for nu in partitions(2 * n):
        c = Fraction(0)
        for mu in partitions(n):
            ct = CycleType(mu)
            z = factorial(n) // ct.class_size()
            c += Fraction(sn_character(lam, ct) * sn_character(nu, CycleType([2 * x for x in mu])), z)
        if c:
            assert c.denominator == 1
            out[nu] = int(c)
    return out


def chiA2_via_plethysm(R: Sequence[int], N: int) -> Fraction:
    return sum((c * oracle_chiA(nu, N) for nu, c in plethysm_p2(R).items()), Fraction(0))


METHODS = ("oracle", "dfi", "pfaffian", "large-n", "saddle")


def average(h: ShiftedWeights, method: str, power: int = 2, eps=0) -> AverageResult:
    if power not in (1, 2):
        raise ValueError("power must be 1 or 2")
    if method == "oracle":
        val = oracle_chiA(h.partition, h.N) if power == 1 else oracle_chiA2(h.partition, h.N)
    elif method == "dfi":
        if power != 1:
            raise ValueError("dfi computes <chi(A)> only (use --power 1)")
        val = dfi_chiA(h)
    elif power == 1:
        raise ValueError(f"method {method} computes <chi(A^2)> only")
    elif method == "pfaffian":
        val = chiA2_pfaffian(h)
    elif method == "large-n":
        val = chiA2_largeN(h.partition, h.N)
    elif method == "saddle":
        val = float(chiA2_saddle(h, eps))
    else:
        raise ValueError(f"unknown method {method!r}")
    return AverageResult(val, method, h, h.N)
