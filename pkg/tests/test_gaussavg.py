from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from cdtmm.gaussavg import (
    average, chiA2_largeN, chiA2_pfaffian, chiA2_pfaffian_raw, chiA2_saddle, chiA2_via_plethysm,
    conjecture_kN, det_power_average, dfi_chiA, laurent_to_sympy, oracle_chiA, oracle_chiA2,
    oracle_chiA2_poly, pfaffian_calibration, pfaffian_entry, plethysm_p2, traceM_normalised,
    traceM_property, wick_chiA,
)
from cdtmm.glchar import from_partition, parse_rep
from cdtmm.permgroup import partitions

import oracles


def small_reps(max_n=6, Ns=(2, 6)):
    return st.integers(*Ns).flatmap(
        lambda N: st.sampled_from([l for n in range(max_n + 1) for l in partitions(n) if len(l) <= N]).map(
            lambda lam: (lam, N)))


# --- <chi(A)> -------------------------------------------------------------------

def test_oracle_chiA_examples():
    assert oracle_chiA((1,), 5) == 0
    assert oracle_chiA((2,), 2) == Fraction(3, 2)
    assert oracle_chiA((), 7) == 1
    assert oracle_chiA((1, 1, 1), 2) == 0


@pytest.mark.parametrize("N", [2, 3])
def test_oracle_chiA_against_entrywise_wick(N):
    # (p1^2 + p2)/2 and (p1^2 - p2)/2 with p_k = Tr A^k
    p11 = oracles.avg_trace_word(N, [1, 1])
    p2 = oracles.avg_trace_word(N, [2])
    assert oracle_chiA((2,), N) == (p11 + p2) / 2
    assert oracle_chiA((1, 1), N) == (p11 - p2) / 2


@settings(deadline=None)
@given(small_reps(max_n=4, Ns=(2, 4)))
def test_wick_route_matches_oracle(case):
    lam, N = case
    assert wick_chiA(lam, N) == oracle_chiA(lam, N)


@settings(deadline=None)
@given(small_reps())
def test_dfi_matches_oracle(case):
    lam, N = case
    h = from_partition(lam, N)
    assert dfi_chiA(h) == oracle_chiA(lam, N)
    if h.n % 2:
        assert dfi_chiA(h) == 0


# --- <chi(A^2)> -----------------------------------------------------------------

def test_oracle_chiA2_examples():
    assert oracle_chiA2((), 3) == 1
    assert oracle_chiA2((1,), 5) == 5
    assert oracle_chiA2((2,), 2) == Fraction(21, 4)
    assert oracle_chiA2((1, 1), 2) == Fraction(3, 4)


@pytest.mark.parametrize("R", [(2,), (1, 1)])
@pytest.mark.parametrize("N", [2, 3])
def test_oracle_chiA2_against_entrywise_wick(R, N):
    assert oracle_chiA2(R, N) == oracles.avg_chi2_small(R, N)


def test_oracle_chiA2_symbolic():
    expr = oracle_chiA2((2,), "symbolic")
    (N,) = expr.free_symbols
    assert sp.simplify(expr - (N ** 2 + 2 + 2 * N + 1 / N) / 2) == 0
    x = sp.Symbol("x")
    assert sp.simplify(laurent_to_sympy(oracle_chiA2_poly((1, 1)), x) - (x ** 2 + 2 - 2 * x - 1 / x) / 2) == 0


@pytest.mark.parametrize("R", [(1,), (2,), (1, 1), (2, 1)])
@pytest.mark.parametrize("N", [2, 3, 4])
def test_plethysm_route(R, N):
    assert chiA2_via_plethysm(R, N) == oracle_chiA2(R, N)


def test_plethysm_p2_example():
    assert plethysm_p2((2,)) == {(4,): 1, (3, 1): -1, (2, 2): 1}
    assert plethysm_p2((1,)) == {(2,): 1, (1, 1): -1}


def test_pfaffian_entries_antisymmetric():
    for a in range(7):
        for b in range(7):
            assert pfaffian_entry(a, b) == -pfaffian_entry(b, a)


@pytest.mark.parametrize("N", [2, 4])
def test_pfaffian_route_matches_oracle(N):
    scale = pfaffian_calibration(N)
    for n in range(5):
        for lam in partitions(n):
            if len(lam) > N:
                continue
            h = from_partition(lam, N)
            assert chiA2_pfaffian_raw(h) * scale == oracle_chiA2(lam, N)
            assert chiA2_pfaffian(h) == oracle_chiA2(lam, N)


def test_pfaffian_route_needs_even_N():
    with pytest.raises(ValueError):
        chiA2_pfaffian(from_partition((), 3))


def test_large_n_examples():
    assert chiA2_largeN((), 5) == 1
    assert chiA2_largeN((1,), 7) == 7
    assert chiA2_largeN((2,), 2) == Fraction(9, 2)


@pytest.mark.parametrize("R", [(2,), (1, 1), (2, 1)])
def test_large_n_relative_correction(R):
    devs = [abs(chiA2_largeN(R, N) / oracle_chiA2(R, N) - 1) for N in (10, 20, 40)]
    assert devs[0] > devs[1] > devs[2] > 0
    assert float(devs[1] / devs[2]) > 3.5


# --- saddle ----------------------------------------------------------------------

def test_saddle_needs_even_N():
    with pytest.raises(ValueError):
        chiA2_saddle(parse_rep("trivial", 3))


def test_saddle_is_finite_and_positive_for_trivial():
    for N in (4, 10, 20):
        v = chiA2_saddle(parse_rep("trivial", N))
        assert np.isfinite(float(v)) and v > 0


def test_saddle_prefactor_variants():
    h = parse_rep("defining", 6)
    ratio = chiA2_saddle(h, prefactor="full") / chiA2_saddle(h, prefactor="sqrt")
    assert abs(float(ratio) - 2 ** 3) < 1e-12


def test_saddle_eps_limit_is_continuous():
    h = parse_rep("trivial", 6)
    base = float(chiA2_saddle(h))
    near = float(chiA2_saddle(h, eps=Fraction(1, 10 ** 6)))
    assert abs(near - base) < 1e-4 * abs(base)


# --- det powers, k_N, trace property ------------------------------------------------

def test_det_power_examples():
    assert det_power_average(2, 0) == 1
    assert det_power_average(2, 1) == Fraction(3, 4)
    assert det_power_average(2, 2) == Fraction(45, 16)
    with pytest.raises(ValueError):
        det_power_average(3, 1)


@pytest.mark.parametrize("q", [1, 2])
def test_det_power_against_oracles(q):
    assert det_power_average(2, q) == oracles.avg_det_power(2, 2 * q)
    assert det_power_average(2, q) == oracle_chiA2((q, q), 2)


def test_det_power_N4_against_pfaffian():
    assert det_power_average(4, 1) == chiA2_pfaffian(parse_rep("det:1", 4))


def test_conjecture_values():
    assert conjecture_kN(parse_rep("trivial", 4)) == Fraction(1, 768)
    assert conjecture_kN(parse_rep("defining", 4)) == Fraction(1, 6144)
    k1 = conjecture_kN(parse_rep("det:1", 4))
    k2 = conjecture_kN(parse_rep("det:2", 4))
    assert k1 != k2


def test_traceM_examples():
    assert traceM_normalised(2, 2) == Fraction(3, 2)
    assert traceM_property(2, 4) == 5
    for p in (2, 4, 6):
        assert abs(float(traceM_normalised(p, 4000)) - 1) < 0.01
    with pytest.raises(ValueError):
        traceM_property(3, 4)


# --- dispatcher -------------------------------------------------------------------

def test_average_dispatch():
    h = parse_rep("2", 2)
    assert average(h, "oracle").value == Fraction(21, 4)
    assert average(h, "pfaffian").value == Fraction(21, 4)
    assert average(h, "large-n").value == Fraction(9, 2)
    assert average(h, "dfi", power=1).value == Fraction(3, 2)
    assert isinstance(average(parse_rep("trivial", 4), "saddle").value, float)
    with pytest.raises(ValueError):
        average(h, "dfi")
    with pytest.raises(ValueError):
        average(h, "pfaffian", power=1)
    with pytest.raises(ValueError):
        average(h, "nonsense")
