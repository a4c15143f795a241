"""Structural invariants on random monomial forms of cyclic quotient surfaces."""
from hypothesis import assume, given, settings, strategies as st

from betasheaf.beta import classify, engine
from betasheaf.closure import Verdict, classify_alpha
from betasheaf.varieties import surface_S

BASES = ["dx^dy", "dx^dz", "dy^dz", "dx", "dy", "dz"]


@st.composite
def monomial_forms(draw):
    k = draw(st.integers(2, 6))
    a, b = draw(st.integers(0, 2)), draw(st.integers(0, 2))
    c = draw(st.integers(0, k + 1))
    basis = draw(st.sampled_from(BASES))
    return k, f"x^{a}*y^{b}*{basis}/z^{c}"


@settings(max_examples=40)
@given(monomial_forms())
def test_ladder_flags_are_nested(case):
    k, text = case
    S = surface_S(k)
    rep = classify(S, S.form(text))
    if rep.in_omega:
        assert rep.alpha.in_alpha
    if rep.alpha.in_alpha:
        assert rep.in_beta
    if rep.in_beta:
        assert rep.in_L
    if rep.alpha_level is not None:
        assert rep.in_beta


@settings(max_examples=40)
@given(monomial_forms(), st.sampled_from(["x", "y", "z"]))
def test_alpha_is_a_module(case, factor):
    k, text = case
    S = surface_S(k)
    u = S.form(text)
    v = classify_alpha(S, u)
    assume(v.tag in (Verdict.IN_OMEGA, Verdict.MONOMIAL))
    w = classify_alpha(S, S.form(f"{factor}*({text})"))
    assert w.in_alpha


@settings(max_examples=40)
@given(monomial_forms())
def test_beta_generators_stay_in_beta_after_multiplication(case):
    k, text = case
    S = surface_S(k)
    eng = engine(S)
    u = S.form(text)
    B, _ = eng.beta(u.degree)
    if B.contains(u):
        assert B.contains(S.form(f"z*({text})"))
