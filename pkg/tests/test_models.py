import math

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from cdtmm.models import (
    GAMMA, GSYM, NSYM, LoopRule, coupling_transform, action_check, double_expansion_prefactor,
    invert_kinetic, model_spec, parse_rule, parse_word, power_sums, wick_word_average, z_order_g2,
)

import oracles


def same(a, b) -> bool:
    return sp.simplify(a - b) == 0


def test_ising_propagators():
    spec = model_spec("ising")
    diag = spec.pair("M+", "M+")[1]
    off = spec.pair("M+", "M-")[1]
    assert same(diag, 1 / (1 - GAMMA ** -4))
    assert same(off, GAMMA ** -2 / (1 - GAMMA ** -4))
    assert spec.pair("M-", "M-")[0] == "delta"


def test_cdt_ising_propagators():
    spec = model_spec("cdt-ising")
    assert same(spec.pair("A+", "A+")[1], 1 / (1 - GAMMA ** 2))
    assert same(spec.pair("A+", "A-")[1], GAMMA / (1 - GAMMA ** 2))
    assert same(spec.pair("B+", "B-")[1], GAMMA / (1 - GAMMA ** 2))
    assert spec.pair("B+", "B-")[0] == "c2"
    for a in ("A+", "A-"):
        for b in ("B+", "B-"):
            assert spec.pair(a, b) == ("zero", 0)


def test_gamma_zero_decouples():
    spec = model_spec("cdt-ising", gamma=0)
    cdt = model_spec("cdt")
    for s in ("+", "-"):
        assert spec.pair("A" + s, "A" + s) == cdt.pair("A", "A")
        assert spec.pair("B" + s, "B" + s) == cdt.pair("B", "B")
    assert spec.pair("A+", "A-")[0] == "zero"
    assert spec.pair("B+", "B-")[0] == "zero"


@pytest.mark.parametrize("name", ["cdt", "ising", "cdt-ising"])
def test_inverse_roundtrip(name):
    spec = model_spec(name)
    again = invert_kinetic(spec.kinetic_form(), spec.symbols, spec.kinds)
    assert all(same(again.weights[k], spec.weights[k]) for k in spec.weights)
    assert set(again.weights) == set(spec.weights)


def test_invert_kinetic_errors():
    with pytest.raises(ValueError):
        invert_kinetic(sp.Matrix([[1, 1], [1, 1]]), ["X", "Y"], {"X": "delta", "Y": "delta"})
    with pytest.raises(ValueError):
        invert_kinetic(sp.Matrix([[1, sp.Rational(1, 2)], [sp.Rational(1, 2), 1]]), ["X", "Y"],
                       {"X": "delta", "Y": "c2"})
    with pytest.raises(ValueError):
        model_spec("potts")


def test_coupling_transform_values():
    cm = coupling_transform(math.sqrt(3), 0.1)
    assert abs(cm.gamma_p ** -2 - 0.5) < 1e-12
    assert abs(coupling_transform(1e6, 0.1).gamma_p ** -2 - 1) < 1e-10
    with pytest.raises(ValueError):
        coupling_transform(0.5, 0.1)


@settings(max_examples=30, deadline=None)
@given(st.floats(1.05, 20), st.floats(-1, 1), st.integers(0, 1000))
def test_action_check(gamma, g, seed):
    assert action_check(gamma, g, N=3, seed=seed) < 1e-9


def test_printed_coupling_fails_action_check():
    assert action_check(2.0, 0.3, printed=True) > 1e-3


def test_parse_word():
    w = parse_word("Tr(A^2 C A^2 C)")
    assert w.traces == (("A", "A", "C", "A", "A", "C"),)
    assert len(parse_word("Tr(A A) Tr(B)").traces) == 2
    assert parse_word("Tr(A+ A-)").traces == (("A+", "A-"),)
    for bad in ("", "Tr()", "Tr(A) junk", "A A"):
        with pytest.raises(ValueError):
            parse_word(bad)


def test_wick_words_large_n():
    cdt = model_spec("cdt")
    N = NSYM
    assert same(wick_word_average("Tr(A^2)", cdt).value, N)
    assert same(wick_word_average("Tr(A^2 C A^2 C)", cdt).value, N + 1 / N)
    assert same(wick_word_average("Tr(A A A A)", cdt).value, 2 * N + 1 / N)
    assert same(wick_word_average("Tr(A^2) Tr(A^2)", cdt).value, N ** 2 + 2)
    assert wick_word_average("Tr(A B)", cdt).value == 0
    assert wick_word_average("Tr(A A B B)", cdt).value == 0
    assert wick_word_average("Tr(A^3)", cdt).value == 0


@pytest.mark.parametrize("N", [2, 3])
@pytest.mark.parametrize("powers", [[2], [4], [2, 2], [1, 3], [6]])
def test_wick_words_match_entrywise(N, powers):
    # no C insertions: the delta kernel is the plain Gaussian
    word = " ".join(f"Tr(A^{p})" for p in powers)
    got = wick_word_average(word, model_spec("cdt"), LoopRule(None)).value.subs(NSYM, N)
    assert got == sp.Rational(*_nd(oracles.avg_trace_word(N, powers)))


def _nd(f):
    return f.numerator, f.denominator


def test_b_loops_give_constraint_traces():
    cdt = model_spec("cdt")
    # <Tr(B B)>: one pairing, loops Tr(C^1) Tr(C^1) at large N vanish
    assert wick_word_average("Tr(B B)", cdt).value == 0
    r = wick_word_average("Tr(B B)", cdt, LoopRule(4))
    assert r.value == 0 and r.pairings == 1


def test_spectrum_rule():
    cdt = model_spec("cdt")
    assert wick_word_average("Tr(A^2 C A^2 C)", cdt, parse_rule("spectrum:4")).value == sp.Rational(17, 4)
    assert power_sums(4, 4) == [0, 4, 0, 0]
    ps = power_sums(6, 8)
    assert ps[:6] == [0, 6, 0, 0, 0, 0]
    with pytest.raises(ValueError):
        parse_rule("exact")


def test_cdt_ising_at_gamma_zero_matches_cdt():
    a = wick_word_average("Tr(A+^2 C A+^2 C)", model_spec("cdt-ising", gamma=0)).value
    b = wick_word_average("Tr(A^2 C A^2 C)", model_spec("cdt")).value
    assert same(a, b)


def test_z_order_g2():
    res = z_order_g2()
    assert res.agree
    N, g = NSYM, GSYM
    assert same(res.route1, g ** 2 * (N ** 2 + 1) / 2)
    assert not same(res.contributions[(1, 1)], res.route1)
    zero = z_order_g2(g=0)
    assert zero.route1 == 0 and zero.route2 == 0


def test_double_expansion_prefactor():
    pre = double_expansion_prefactor(2, 0, gamma=0)
    assert same(pre, NSYM * GSYM ** 2 / 4)
