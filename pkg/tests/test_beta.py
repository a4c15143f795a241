import pytest

from betasheaf.beta import BetaEngine, StabilizationError, classify, engine
from betasheaf.estimator import LABELS, BetaSheafEstimator, NotFittedError
from betasheaf.forms import d, wedge
from betasheaf.varieties import curve35, resolve_variety, surface_S

SPECS = ["curve35", "S:2", "S:3", "S:4", "S:5"]


@pytest.mark.parametrize("ident", SPECS)
def test_levels_increase(ident):
    eng = engine(resolve_variety(ident))
    for q in range(eng.spec.dimension + 1):
        for p in range(q + 2):
            assert eng.level(q, p + 1).contains_set(eng.level(q, p))


@pytest.mark.parametrize("ident", SPECS)
def test_ladder_is_nested(ident):
    eng = engine(resolve_variety(ident))
    for q in range(eng.spec.dimension + 1):
        om, al, (be, _), L = eng.omega(q), eng.level(q, 0), eng.beta(q), eng.L(q)
        assert al.contains_set(om)
        assert be.contains_set(al)
        assert L.contains_set(be)


@pytest.mark.parametrize("ident", SPECS)
def test_beta_is_closed_under_wedge_and_d(ident):
    spec = resolve_variety(ident)
    eng = engine(spec)
    n = spec.dimension
    B = {q: eng.beta(q)[0] for q in range(n + 1)}
    gens = {q: B[q].ambient_generators() for q in B}
    for q in range(n):
        for g in gens[q]:
            assert B[q + 1].contains(d(g)), (q, str(g))
    for q in range(n + 1):
        for r in range(n + 1 - q):
            for g in gens[q]:
                for h in gens[r]:
                    assert B[q + r].contains(wedge(g, h)), (str(g), str(h))


def test_stabilization_cap_is_enforced():
    eng = BetaEngine(surface_S(4))
    with pytest.raises(StabilizationError):
        eng.beta(2, cap=1)


def test_classify_flags():
    S = surface_S(4)
    rep = classify(S, S.form("dx^dy/z^3"))
    assert rep.in_L and not rep.in_beta and rep.alpha.in_alpha is False
    rep = classify(S, S.form("dx^dy/z"))
    assert rep.alpha.in_alpha and rep.alpha_level == 0


def test_estimator_parameters():
    est = BetaSheafEstimator()
    assert est.get_params() == {"variety": "S:4", "degrees": None, "level_cap": None, "max_cert_degree": 6}
    assert est.set_params(variety="S:3", degrees=[1]) is est
    assert est.get_params()["variety"] == "S:3"
    with pytest.raises(ValueError):
        est.set_params(bogus=1)
    assert "S:3" in repr(est)


def test_estimator_requires_fit():
    with pytest.raises(NotFittedError):
        BetaSheafEstimator().predict(["dx"])


def test_estimator_predicts_ladder_labels():
    est = BetaSheafEstimator("S:4").fit()
    forms = ["dx^dz", "dx^dy/z", "dx^dy/z^2", "dx^dy/z^3", "dx^dy/z^4", "x*dy/z^2"]
    labels = est.predict(forms)
    assert labels == ["omega", "alpha", "beta", "L", "outside", "alpha"]
    assert set(labels) <= set(LABELS)
    assert est.summary()["degrees"][2]["p_star"] == est.p_star_[2]


def test_estimator_degree_validation():
    with pytest.raises(ValueError):
        BetaSheafEstimator("curve35", degrees=[2]).fit()
    est = BetaSheafEstimator("curve35", degrees=[0]).fit()
    with pytest.raises(ValueError):
        est.predict(["dx"])
