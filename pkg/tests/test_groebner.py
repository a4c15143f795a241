"""Buchberger implementation against a naive oracle and against sympy."""
from fractions import Fraction
from itertools import combinations

import sympy
from hypothesis import given, settings, strategies as st

from betasheaf.groebner import (IdealPresentation, ModuleBasis, divide, groebner_basis,
                                module_equal, module_membership, normal_form)
from betasheaf.poly import Polynomial, monomial_divides, monomial_lcm, order_key

VARS = ("x", "y", "z")
X, Y, Z = Polynomial.variables(VARS)
SYMS = sympy.symbols(VARS)


def to_sympy(p):
    return sum((sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*(s ** k for s, k in zip(SYMS, e)))
                for e, c in p.terms.items()), sympy.Integer(0))


def naive_groebner(gens, order="degrevlex"):
    """Textbook Buchberger: every S-pair, no criteria, then interreduce."""
    key = order_key(order)

    def lead(p):
        e = max(p.terms, key=key)
        return e, p.terms[e]

    def reduce(p, basis):
        r = Polynomial.zero(VARS)
        while not p.is_zero():
            e, c = lead(p)
            for g in basis:
                ge, gc = lead(g)
                if monomial_divides(ge, e):
                    shift = tuple(a - b for a, b in zip(e, ge))
                    p = p - g.mul_term(shift, c / gc)
                    break
            else:
                r = r + Polynomial({e: c}, VARS)
                p = p - Polynomial({e: c}, VARS)
        return r

    G = [g for g in gens if not g.is_zero()]
    changed = True
    while changed:
        changed = False
        for f, g in combinations(list(G), 2):
            (fe, fc), (ge, gc) = lead(f), lead(g)
            m = monomial_lcm(fe, ge)
            s = f.mul_term(tuple(a - b for a, b in zip(m, fe)), 1 / fc) - \
                g.mul_term(tuple(a - b for a, b in zip(m, ge)), 1 / gc)
            r = reduce(s, G)
            if not r.is_zero():
                G.append(r)
                changed = True
    # minimal, reduced, monic
    G = [g for g in G if not any(h is not g and monomial_divides(lead(h)[0], lead(g)[0])
                                 and (lead(h)[0] != lead(g)[0] or id(h) < id(g)) for h in G)]
    out = []
    for g in G:
        rest = [h for h in G if h is not g]
        e, c = lead(g)
        tail = reduce(g - Polynomial({e: c}, VARS), rest)
        out.append((Polynomial({e: c}, VARS) + tail).mul_term((0,) * 3, 1 / c))
    return sorted(out, key=lambda p: key(lead(p)[0]), reverse=True)


small = st.dictionaries(st.tuples(*(st.integers(0, 2) for _ in VARS)),
                        st.integers(-3, 3).map(Fraction), min_size=1, max_size=3
                        ).map(lambda t: Polynomial(t, VARS))


@settings(max_examples=25)
@given(st.lists(small, min_size=1, max_size=3))
def test_reduced_basis_matches_naive_oracle(gens):
    for order in ("degrevlex", "lex"):
        assert groebner_basis(gens, order) == naive_groebner(gens, order)


@settings(max_examples=25)
@given(st.lists(small, min_size=1, max_size=3))
def test_reduced_basis_matches_sympy(gens):
    ours = groebner_basis(gens, "degrevlex")
    theirs = sympy.groebner([to_sympy(g) for g in gens], *SYMS, order="grevlex", domain="QQ")
    theirs = [sympy.expand(e / sympy.LC(e, *SYMS, order="grevlex")) for e in theirs.exprs if e != 0]
    assert len(ours) == len(theirs)
    assert all(sympy.expand(to_sympy(a) - b) == 0 for a, b in zip(ours, theirs))


@given(small, st.lists(small, min_size=1, max_size=3))
def test_division_identity(p, divisors):
    qs, r = divide(p, divisors)
    total = r
    for q, g in zip(qs, divisors):
        total = total + q * g
    assert total == p


@given(st.lists(small, min_size=1, max_size=3), small)
def test_ideal_membership_of_combinations(gens, h):
    I = IdealPresentation(gens)
    assert I.contains(h * gens[0])
    assert normal_form(h * gens[0] + gens[-1] * X, I.basis()).is_zero()


def test_known_basis_twisted_cubic():
    gens = [Y - X ** 2, Z - X ** 3]
    expected = [X ** 2 - Y, X * Y - Z, X * Z - Y ** 2, Y ** 3 - Z ** 2]
    assert groebner_basis(gens, "lex") == expected


def test_zero_ideal():
    assert groebner_basis([Polynomial.zero(VARS)]) == []


def test_module_membership_with_witness():
    g1, g2 = [X, Y], [Z, X]
    elt = [X * Z + Z * Z, Y * Z + Z * X]
    m = module_membership(elt, [g1, g2])
    assert m.member
    c1, c2 = m.coefficients
    assert [c1 * a + c2 * b for a, b in zip(g1, g2)] == elt
    assert not module_membership([X, Polynomial.zero(VARS)], [g1, g2]).member


def test_module_membership_modulo_relations():
    f = X * Y - Z ** 2
    rel = [[f, Polynomial.zero(VARS)], [Polynomial.zero(VARS), f]]
    # (xy, 0) = (z^2, 0) modulo f
    assert module_membership([X * Y, Polynomial.zero(VARS)], [[Z ** 2, Polynomial.zero(VARS)]], rel).member
    assert module_equal([[X * Y, Polynomial.zero(VARS)]], [[Z ** 2, Polynomial.zero(VARS)]], rel)


def test_module_basis_incremental_add():
    mb = ModuleBasis(2, VARS)
    assert mb.add([X, Y])
    assert not mb.add([X * X, X * Y])
    assert mb.contains([X * Z, Y * Z])


# brute-force membership: with homogeneous data, coefficients have fixed degree,
# so solving a linear system over truncated monomial spaces (degree <= 6) is exact
V2 = ("x", "y")


def _monos(deg):
    return [(i, deg - i) for i in range(deg + 1)] if deg >= 0 else []


def linear_algebra_member(elt, gens, degs, d):
    cols, unknown = [], []
    for gi, (g, dg) in enumerate(zip(gens, degs)):
        for mono in _monos(d - dg):
            cols.append([comp.mul_term(mono, Fraction(1)) for comp in g])
    keys = sorted({e for col in cols for comp in col for e in comp.terms}
                  | {e for comp in elt for e in comp.terms})
    rows = [[col[r].terms.get(e, Fraction(0)) for col in cols]
            for r in range(len(elt)) for e in keys]
    rhs = [elt[r].terms.get(e, Fraction(0)) for r in range(len(elt)) for e in keys]
    if not cols:
        return all(x == 0 for x in rhs)
    A, b = sympy.Matrix(rows), sympy.Matrix(rhs)
    return A.rank() == A.row_join(b).rank()


@st.composite
def homogeneous_module(draw):
    def hom(deg):
        return Polynomial({m: Fraction(draw(st.integers(-2, 2))) for m in _monos(deg)}, V2)

    degs = draw(st.lists(st.integers(1, 3), min_size=1, max_size=3))
    gens = [[hom(dg), hom(dg)] for dg in degs]
    d = draw(st.integers(max(degs), 6))
    if draw(st.booleans()):  # a genuine combination, so both outcomes occur
        elt = [Polynomial.zero(V2), Polynomial.zero(V2)]
        for g, dg in zip(gens, degs):
            c = hom(d - dg)
            elt = [a + c * b for a, b in zip(elt, g)]
    else:
        elt = [hom(d), hom(d)]
    return elt, gens, degs, d


@settings(max_examples=40)
@given(homogeneous_module())
def test_module_membership_against_linear_algebra(data):
    elt, gens, degs, d = data
    assert module_membership(elt, gens).member == linear_algebra_member(elt, gens, degs, d)
