from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from cdtmm.glchar import (
    ShiftedWeights, chi_C1, chi_C2_over_C1, chi_Cm, class_sum_ratio, expansion_coefficient,
    expansion_coefficient_exact, from_partition, gl_dimension, gl_dimension_poly,
    invariant_dimension, littlewood_richardson, parse_partition, parse_rep,
    schur_jacobi_trudi, weyl_character,
)
from cdtmm.permgroup import partitions, sn_dimension


def reps(max_n=6, N_range=(2, 6)):
    return st.integers(*N_range).flatmap(
        lambda N: st.integers(0, max_n).flatmap(
            lambda n: st.sampled_from([l for l in partitions(n) if len(l) <= N]).map(
                lambda lam: from_partition(lam, N))))


def test_from_partition_examples():
    assert from_partition((), 4).h == (3, 2, 1, 0)
    assert from_partition((1,), 4).h == (4, 2, 1, 0)
    assert from_partition((5,) * 4, 4).h == (8, 7, 6, 5)
    with pytest.raises(ValueError):
        from_partition((1, 1, 1), 2)


@given(reps())
def test_partition_roundtrip(h):
    assert from_partition(h.partition, h.N) == h
    assert h.n == sum(h.partition)


def test_shifted_weights_validation():
    with pytest.raises(ValueError):
        ShiftedWeights((1, 1))
    with pytest.raises(ValueError):
        ShiftedWeights((0, 1))


def test_parse_rep():
    assert parse_rep("trivial", 3).h == (2, 1, 0)
    assert parse_rep("det:2", 2).h == (3, 2)
    assert parse_rep("h:7,4,2,0").N == 4
    assert parse_partition("3,1,1") == (3, 1, 1)
    with pytest.raises(ValueError):
        parse_partition("1,2")
    with pytest.raises(ValueError):
        parse_partition("a")


def test_weyl_character_examples():
    x, y = Fraction(2), Fraction(5)
    assert weyl_character(from_partition((), 3), [1, 2, 3]) == 1
    assert weyl_character(from_partition((1,), 3), [Fraction(1), Fraction(2), Fraction(7)]) == 10
    assert weyl_character(from_partition((2,), 2), [x, y]) == x * x + x * y + y * y


@given(reps())
def test_weyl_at_identity_is_dimension(h):
    assert weyl_character(h, [1] * h.N) == gl_dimension(h)


@settings(deadline=None)
@given(reps(max_n=5, N_range=(2, 4)), st.lists(st.integers(-6, 6), min_size=4, max_size=4))
def test_weyl_matches_jacobi_trudi(h, vals):
    eigs = [Fraction(v) + Fraction(k, 7) for k, v in enumerate(vals[: h.N])]
    assert weyl_character(h, eigs) == schur_jacobi_trudi(h.partition, eigs)


def test_weyl_near_confluent_complex():
    eigs = np.array([1.0 + 0.5j, 1.0 + 0.5j + 1e-12, -0.3])
    h = from_partition((2, 1), 3)
    exact = schur_jacobi_trudi(h.partition, [complex(e) for e in eigs])
    assert abs(weyl_character(h, eigs) - exact) < 1e-9


def test_dimension_examples():
    assert gl_dimension(from_partition((), 5)) == 1
    assert gl_dimension(from_partition((1,), 5)) == 5
    assert gl_dimension(from_partition((2,), 2)) == 3
    N = sp.Symbol("N")
    assert sp.expand(gl_dimension_poly((1, 1)) - N * (N - 1) / 2) == 0


def test_expansion_coefficient_examples():
    assert expansion_coefficient(ShiftedWeights((1, 0))) == 1
    assert expansion_coefficient(ShiftedWeights((3, 0))) == 1
    # two more even entries than odd
    assert expansion_coefficient(ShiftedWeights((4, 2))) == 0


@given(reps())
def test_expansion_coefficient_nonzero_only_if_admissible(h):
    if not h.parity().admissible:
        assert expansion_coefficient(h) == 0
    else:
        assert expansion_coefficient(h) != 0


@given(reps())
def test_expansion_coefficient_ratio_is_exact(h):
    c0 = expansion_coefficient(from_partition((), h.N))
    assert expansion_coefficient(h) / c0 == expansion_coefficient_exact(h.partition)


def test_chi_C1_examples():
    assert chi_C1(from_partition((), 3)) == 1
    assert chi_C1(from_partition((1,), 3)) == 3
    assert chi_C1(from_partition((2,), 3)) == Fraction(9, 2)


def test_chi_C2_over_C1_examples():
    assert chi_C2_over_C1(ShiftedWeights((1, 0))) == 1
    assert chi_C2_over_C1(ShiftedWeights((3, 0))) == 1
    assert chi_C2_over_C1(ShiftedWeights((2, 0))) == 0


@given(reps())
def test_chi_C2_over_C1_matches_class_sum(h):
    assert chi_C2_over_C1(h) == class_sum_ratio(h.partition)


@given(reps())
def test_odd_size_has_vanishing_C2_ratio(h):
    if h.n % 2:
        assert chi_C2_over_C1(h) == 0


def test_even_size_can_still_vanish():
    # the converse fails: n = 6 with a zero character on [2^3]
    h = from_partition((3, 2, 1), 4)
    assert h.n % 2 == 0 and chi_C2_over_C1(h) == 0


@given(reps())
def test_chi_Cm_m1_is_C1(h):
    assert chi_Cm(h, 1) == chi_C1(h)


def test_lr_examples():
    assert littlewood_richardson((1,), (1,)) == {(2,): 1, (1, 1): 1}
    assert littlewood_richardson((2,), (1,)) == {(3,): 1, (2, 1): 1}
    lr = littlewood_richardson((2, 1), (2, 1))
    assert lr[(3, 2, 1)] == 2
    assert invariant_dimension((1,), (1,)) == 2
    assert invariant_dimension((2,), (1,)) == 2
    assert invariant_dimension((2, 1), (2, 1)) == 10


def test_lr_size_guard():
    with pytest.raises(ValueError):
        littlewood_richardson((9,), (8,))


@pytest.mark.parametrize("N", range(4, 9))
def test_lr_dimension_identity(N):
    small = [l for n in range(0, 4) for l in partitions(n)]
    for lam in small:
        for mu in small:
            if sum(lam) + sum(mu) > 6:
                continue
            lhs = gl_dimension(from_partition(lam, N)) * gl_dimension(from_partition(mu, N))
            rhs = sum(c * gl_dimension(from_partition(r, N))
                      for r, c in littlewood_richardson(lam, mu).items() if len(r) <= N)
            assert lhs == rhs


@pytest.mark.parametrize("n", range(1, 6))
def test_lr_sn_dimension_identity(n):
    # sum_r l_r s_r = binom(|a|+|b|, |a|) s_a s_b
    from math import comb
    for k in range(n + 1):
        for a in partitions(k):
            for b in partitions(n - k):
                total = sum(c * sn_dimension(r) for r, c in littlewood_richardson(a, b).items())
                assert total == comb(n, k) * sn_dimension(a) * sn_dimension(b)
