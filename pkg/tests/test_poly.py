from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from betasheaf.poly import MeroFunction, Polynomial

VARS = ("x", "y", "z")
X, Y, Z = Polynomial.variables(VARS)
SX, SY, SZ = sympy.symbols(VARS)

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
exps = st.tuples(*(st.integers(0, 3) for _ in VARS))
polys = st.dictionaries(exps, coeffs, max_size=5).map(lambda t: Polynomial(t, VARS))


def to_sympy(p: Polynomial):
    return sum((sympy.Rational(c.numerator, c.denominator) * SX ** e[0] * SY ** e[1] * SZ ** e[2]
                for e, c in p.terms.items()), sympy.Integer(0))


@given(polys, polys)
def test_ring_operations_agree_with_sympy(p, q):
    assert sympy.expand(to_sympy(p * q) - to_sympy(p) * to_sympy(q)) == 0
    assert sympy.expand(to_sympy(p + q) - to_sympy(p) - to_sympy(q)) == 0
    assert sympy.expand(to_sympy(p - q) - to_sympy(p) + to_sympy(q)) == 0


@given(polys)
def test_derivative_agrees_with_sympy(p):
    for i, s in enumerate((SX, SY, SZ)):
        assert sympy.expand(to_sympy(p.diff(i)) - sympy.diff(to_sympy(p), s)) == 0


@given(polys, polys, polys)
def test_substitution_is_composition(p, a, b):
    c = Polynomial.variable("z", VARS)
    composed = p.substitute([a, b, c], VARS)
    expected = to_sympy(p).subs({SX: to_sympy(a), SY: to_sympy(b)}, simultaneous=True)
    assert sympy.expand(to_sympy(composed) - expected) == 0


def test_printing():
    assert str((X + Y) ** 2) == "x^2 + 2*x*y + y^2"
    assert str(Polynomial.zero(VARS)) == "0"


def test_mixed_contexts_rejected():
    other = Polynomial.variable("t", ("t",))
    with pytest.raises(ValueError):
        X + other


def test_mero_normalizes_common_monomials():
    f = MeroFunction(X * Z ** 2, (0, 0, 3))
    assert f.num == X and f.den == (0, 0, 1)
    assert MeroFunction(Polynomial.zero(VARS), (1, 0, 0)).den == (0, 0, 0)


def test_mero_arithmetic():
    a = MeroFunction(X, (0, 0, 1))
    b = MeroFunction(Y, (0, 0, 2))
    s = a + b
    assert s.den == (0, 0, 2)
    assert (a * b).den == (0, 0, 3)
    assert (a - a).is_zero()
    with pytest.raises(ValueError):
        MeroFunction(X, (0, -1, 0))


def test_mero_laurent_round_trip():
    f = MeroFunction.from_laurent({(1, 0, -2): Fraction(3), (0, 1, 0): Fraction(-1)}, VARS)
    assert f.laurent_terms() == {(1, 0, -2): Fraction(3), (0, 1, 0): Fraction(-1)}
