from fractions import Fraction

import pytest

from betasheaf import varfile
from betasheaf.maps import MapError, compose, identity, pullback, resolve_map
from betasheaf.varieties import (VarietyError, builtin, curve35, fermat, product, resolve_variety,
                                 surface_S, threefold_M)


@pytest.mark.parametrize("ident", ["curve35", "S:2", "S:5", "M:3", "Fermat:4", "Fermat:5",
                                   "product(S:2,w)", "affine:x,y"])
def test_builtins_validate(ident):
    spec = resolve_variety(ident)
    assert spec.validate() is spec
    assert spec.dimension == len(spec.vars) - len(spec.equations)


@pytest.mark.parametrize("k", [2, 3, 4, 7])
def test_surface_parametrization_and_deck_group(k):
    S = surface_S(k)
    a, b = S.params
    for f in S.equations:
        assert f.substitute(list(S.parametrization), S.params).is_zero()
    # the image monomials a^k, b^k, ab are the invariants of the deck group
    assert S.deck.is_invariant((k, 0)) and S.deck.is_invariant((1, 1))
    assert not S.deck.is_invariant((1, 0))


def test_curve_parametrization_is_bijective_on_exponents():
    C = curve35()
    x, y = C.parametrization
    assert x.terms == {(5,): 1} and y.terms == {(3,): 1}


def test_bad_parameters_rejected():
    for bad in ("S:1", "S:x", "Fermat:2", "M:0", "nosuch"):
        with pytest.raises(VarietyError):
            resolve_variety(bad)


def test_product_adds_a_factor():
    P = product(surface_S(2), "w")
    assert P.vars == ("x", "y", "z", "w") and P.dimension == 3
    with pytest.raises(VarietyError):
        product(surface_S(2), "x")


@pytest.mark.parametrize("spec", [curve35(), surface_S(4), threefold_M(3), fermat(5), fermat(4)],
                         ids=lambda s: s.id)
def test_varfile_round_trip(spec):
    assert varfile.loads(varfile.dumps(spec)) == spec


def test_varfile_shipped_fixture():
    assert varfile.load("fermat5.variety") == fermat(5)


def test_varfile_rejects_bad_parametrization():
    text = varfile.dumps(curve35()).replace("t^5", "t^4")
    with pytest.raises(varfile.VarfileError) as info:
        varfile.loads(text)
    assert info.value.line_no is not None
    assert "parametrization" in str(info.value)


def test_varfile_missing_key():
    with pytest.raises(varfile.VarfileError, match="name"):
        varfile.loads("variables: x, y\ndimension: 2\n")


def test_maps_validate_and_compose():
    q = resolve_map("q:4")
    assert q.source.id == "affine:a,b" and q.target.id == "S:4"
    jq = resolve_map("jq:3")
    assert jq.source.id == "affine:a,b" and jq.target.id == "M:3"
    assert [str(c) for c in jq.components] == ["a^3", "b^3", "a*b", "1"]
    ident = identity(surface_S(2))
    w = surface_S(2).form("x*dy/z")
    assert pullback(ident, w) == w
    with pytest.raises(MapError):
        resolve_map("q:x")


def test_pullback_is_contravariant():
    from betasheaf.maps import quotient_map_renamed, slice_v1

    f, g = quotient_map_renamed(3), slice_v1(3)
    gf = compose(g, f)
    M = g.target
    for text in ("x*dy/u", "y*dx^dv/u", "dx^du", "v*du"):
        u = M.form(text)
        assert pullback(gf, u) == pullback(f, pullback(g, u))
