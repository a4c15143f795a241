import pytest

from betasheaf.models import AmbientModel, GradedModel, model_for
from betasheaf.varieties import curve35, fermat, surface_S, threefold_M

PROBES = {
    ("S:4", 1): ["dx", "x*dy/z^2", "y*dx/z^2", "x*dy/z^3", "dz/z", "z*dz", "x*dy/z + y*dx/z", "dx/z^2"],
    ("S:3", 2): ["dx^dy", "dx^dy/z", "dx^dy/z^2", "dx^dz/z", "dy^dz/z^2"],
    ("curve35", 1): ["dx", "dy", "y*dy/x", "y^2*dy/x", "dx/x", "y^3*dx/x^2"],
}


def _spec(ident):
    return {"S:4": surface_S(4), "S:3": surface_S(3), "curve35": curve35()}[ident]


@pytest.mark.parametrize("key", sorted(PROBES))
def test_graded_and_ambient_models_agree_on_membership(key):
    ident, q = key
    spec = _spec(ident)
    gm, am = GradedModel(spec, q), AmbientModel(spec, q)
    gens = [spec.form(t) for t in PROBES[key][:2]]
    gmod = gm.module([g for _, g in gm.omega_generators()] + [gm.to_param(g) for g in gens])
    amod = am.module([g for _, g in am.omega_generators()] + gens)
    for text in PROBES[key]:
        u = spec.form(text)
        assert gmod.contains(gm.to_param(u)) == amod.contains(u), text


def test_model_selection():
    assert isinstance(model_for(surface_S(4), 1), GradedModel)
    assert isinstance(model_for(fermat(4), 2), AmbientModel)
    assert isinstance(model_for(surface_S(4), 1, prefer="ambient"), AmbientModel)
    with pytest.raises(ValueError):
        model_for(fermat(4), 2, prefer="graded")


def test_graded_round_trip():
    S = surface_S(4)
    gm = GradedModel(S, 1)
    u = S.form("x*dy/z^2 + 3*dz")
    total = None
    for deg, vec in gm.graded(u).items():
        piece = gm.to_ambient(deg, vec)
        total = piece if total is None else total + piece
    assert gm.equal(gm.to_param(total), gm.to_param(u))


def test_torus_chart_model_for_threefold():
    M = threefold_M(3)
    gm = model_for(M, 1)
    assert isinstance(gm, GradedModel) and not gm.finite
    assert gm.is_zero(gm.to_param(M.form("x*dy + y*dx - 3*u^2*v*du - u^3*dv")))
