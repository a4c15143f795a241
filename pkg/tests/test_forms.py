from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from betasheaf.forms import CoordinateMismatch, DiffForm, d, pullback_form, wedge
from betasheaf.forms import all_indices
from betasheaf.grammar import FormSyntaxError, format_form, parse_form
from betasheaf.poly import MeroFunction, Polynomial

VARS = ("x", "y", "z")
SRC = ("s", "t")

exps = st.tuples(*(st.integers(0, 2) for _ in VARS))
polys = st.dictionaries(exps, st.integers(-3, 3).map(Fraction), max_size=3).map(lambda t: Polynomial(t, VARS))
meros = st.builds(MeroFunction, polys, st.tuples(st.integers(0, 1), st.just(0), st.integers(0, 2)))


def forms(q, coeff=meros):
    idx = list(all_indices(3, q))
    return st.lists(coeff, min_size=len(idx), max_size=len(idx)).map(
        lambda cs: DiffForm(VARS, q, dict(zip(idx, cs))))


holo = polys.map(lambda p: MeroFunction(p, (0, 0, 0)))
src_polys = st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)),
                            st.integers(-2, 2).map(Fraction), max_size=3).map(lambda t: Polynomial(t, SRC))


@given(st.integers(0, 1).flatmap(forms))
def test_d_squared_vanishes(u):
    assert d(d(u)).is_zero()


@given(forms(1), forms(1))
def test_wedge_of_one_forms_is_antisymmetric(u, v):
    assert wedge(u, v) == -wedge(v, u)
    assert wedge(u, u).is_zero()


@given(forms(1), forms(1), forms(1))
def test_wedge_is_associative(a, b, c):
    assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))


@given(forms(1), forms(1))
def test_leibniz_rule(u, v):
    assert d(wedge(u, v)) == wedge(d(u), v) - wedge(u, d(v))


@given(forms(0), forms(1))
def test_leibniz_rule_with_function(f, v):
    assert d(wedge(f, v)) == wedge(d(f), v) + wedge(f, d(v))


@given(forms(1, holo), st.lists(src_polys, min_size=3, max_size=3))
def test_pullback_commutes_with_d(u, images):
    assert pullback_form(d(u), images, SRC) == d(pullback_form(u, images, SRC))


@given(forms(1, holo), forms(1, holo), st.lists(src_polys, min_size=3, max_size=3))
def test_pullback_commutes_with_wedge(u, v, images):
    lhs = pullback_form(wedge(u, v), images, SRC)
    rhs = wedge(pullback_form(u, images, SRC), pullback_form(v, images, SRC))
    assert lhs == rhs


@given(st.integers(0, 3).flatmap(forms))
def test_printer_parser_round_trip(u):
    assert parse_form(format_form(u), VARS, pole_vars=VARS, degree=u.degree) == u


def test_pullback_along_monomial_map_keeps_poles():
    u = parse_form("x*dy/z^2", VARS, pole_vars=("z",))
    s, t = Polynomial.variables(SRC)
    got = pullback_form(u, [s ** 2, t ** 2, s * t], SRC)
    assert got == parse_form("2*dt/t", SRC, pole_vars=SRC)


def test_mixed_coordinates_rejected():
    a = DiffForm.differential("x", VARS)
    b = DiffForm.differential("s", SRC)
    with pytest.raises(CoordinateMismatch):
        a + b


def test_degree_overflow_is_an_error():
    dx, dy, dz = (DiffForm.differential(v, VARS) for v in VARS)
    top = wedge(wedge(dx, dy), dz)
    with pytest.raises(ValueError):
        wedge(wedge(dx, dy), wedge(dz, dx))
    with pytest.raises(ValueError):
        d(top)


def test_parenthesized_exponents():
    assert parse_form("x^(2)*dz", VARS) == parse_form("x^2*dz", VARS)
    assert parse_form("z^(-2)*dx", VARS, pole_vars=("z",)) == parse_form("dx/z^2", VARS, pole_vars=("z",))


def test_two_variable_denominator_prints_unambiguously():
    u = DiffForm(VARS, 1, {(2,): MeroFunction(Polynomial.constant(1, VARS), (1, 0, 1))})
    assert parse_form(format_form(u), VARS, pole_vars=VARS) == u
