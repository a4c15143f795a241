from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from betasheaf.beta import engine
from betasheaf.certfile import CertificateFormatError, dump_certificate, fixture, parse_certificate
from betasheaf.closure import (ArcDegenerate, ArcSpec, CertificateError, Verdict, classify_alpha,
                               closure_at, decide_at, decide_monomial, graded_generators, newton_lp,
                               refute_by_arc, scale_certificate, search_certificate, verify_certificate,
                               wedge_certificate)
from betasheaf.models import GradedModel
from betasheaf.varieties import curve35, fermat, surface_S, threefold_M

KS = [2, 3, 4, 5, 6, 7, 8]


@pytest.mark.parametrize("k", KS)
def test_surface_certificates_verify(k):
    S = surface_S(k)
    for name, text in (("sk_alpha1", "x*dy/z^{m}"), ("sk_alpha2", "dx^dy/z^{m-1}")):
        cert = fixture(name, S)
        assert verify_certificate(S, S.form(text.replace("{m}", str(k // 2))
                                                .replace("{m-1}", str(k // 2 - 1))), cert)


SK_WRONG_EXPONENT = """\
name: Sk/alpha1-literal
variety: S:{k}
form: x*dy/z^{m}
degree: 2
S1: -{k}*z^{k-m} : dz
S2: z^{k-2*m} : dx dy
"""


@pytest.mark.parametrize("k", KS)
def test_certificate_with_shifted_exponent_is_rejected(k):
    cert = parse_certificate(SK_WRONG_EXPONENT, params={"k": k})
    S = surface_S(k)
    assert not verify_certificate(S, cert.form, cert)


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_threefold_certificates_verify(k):
    M = threefold_M(k)
    m = k // 2
    assert verify_certificate(M, M.form(f"x*dy/u^{m}"), fixture("mk_eq2", M))
    assert verify_certificate(M, M.form(f"x*dy^dv/u^{m}"), fixture("mk_w", M))


def test_certificate_transport():
    S = surface_S(4)
    cert = fixture("sk_alpha1", S)
    u = S.form("x*dy/z^2")
    assert verify_certificate(S, u.scale(3), scale_certificate(cert, 3))
    assert not verify_certificate(S, u.scale(3), cert)
    # wedge with a holomorphic form
    dz = S.form("dz")
    assert verify_certificate(S, u ^ dz, wedge_certificate(S, cert, dz, "dz"))


def test_certificate_dump_round_trip():
    S = surface_S(6)
    cert = fixture("sk_alpha1", S)
    again = parse_certificate(dump_certificate(cert), S)
    assert verify_certificate(S, S.form("x*dy/z^3"), again)


@pytest.mark.parametrize("text, line", [
    ("variety: S:4\nform: dx\ndegree: 2\nS3: 1 : dx dx dx\n", 4),
    ("variety: S:4\nform: dx\ndegree: 1\nS1: 1 : dw\n", 4),
    ("variety: S:4\nform: dx\ndegree: 1\nS1: {nope} : dx\n", 4),
    ("variety: S:4\nform: dx\ndegree: 2\nS2: 1 : dx\n", 4),
    ("variety: S:4\nform: dx\ndegree: two\n", 3),
])
def test_certificate_format_errors(text, line):
    with pytest.raises(CertificateError) as info:
        parse_certificate(text)
    if isinstance(info.value, CertificateFormatError):
        assert info.value.line_no == line


def test_arc_refutation_on_surface():
    S = surface_S(4)
    diag = ArcSpec((1, 1))
    assert refute_by_arc(S, S.form("x*dy/z^3"), None, diag)
    assert not refute_by_arc(S, S.form("x*dy/z^2"), None, diag)
    with pytest.raises(ValueError):
        ArcSpec((1, -1))


def test_arc_refutation_on_cusp():
    C = curve35()
    res = refute_by_arc(C, C.form("dy/x"), None, ArcSpec((1,)))
    assert res.refuted and res.method == "order"


def _sweep(spec, q):
    eng = engine(spec)
    model = GradedModel(spec, q)
    items = graded_generators(model, model.omega_generators())
    return eng, model, items, list(eng.sweep_queries(q))


@pytest.mark.parametrize("ident, q", [("curve35", 0), ("curve35", 1), ("S:3", 1), ("S:4", 2)])
def test_chamber_decision_against_arcs_and_certificates(ident, q):
    from betasheaf.varieties import resolve_variety

    spec = resolve_variety(ident)
    _, model, items, queries = _sweep(spec, q)
    assert queries
    for deg, vec in queries:
        dec = decide_at(model, items, deg, vec, confirm=False)
        u = model.to_ambient(deg, vec)
        if dec.member:
            assert search_certificate(model, items, deg, vec, 6) is not None
        else:
            assert refute_by_arc(spec, u, None, dec.arc()).refuted


@pytest.mark.parametrize("ident", ["curve35"])
def test_lp_agrees_with_chambers_in_rank_one(ident):
    from betasheaf.varieties import resolve_variety

    spec = resolve_variety(ident)
    for q in (0, 1):
        _, model, items, queries = _sweep(spec, q)
        for deg, _ in queries:
            C, _ = closure_at(model, items, deg)
            assert newton_lp(model, items, deg) == (C.dim == 1)


def test_decide_monomial_rejects_non_homogeneous_forms():
    S = surface_S(4)
    with pytest.raises(ValueError):
        decide_monomial(S, S.form("x*dy/z^2 + dx"))


@pytest.mark.parametrize("text, tag", [
    ("dx", Verdict.IN_OMEGA),
    ("x*dy/z^2", Verdict.MONOMIAL),
    ("x*dy/z^3", Verdict.REFUTED),
])
def test_classify_alpha_tags(text, tag):
    S = surface_S(4)
    assert classify_alpha(S, S.form(text)).tag == tag


def test_classify_without_cover_is_unknown_or_certified():
    F = fermat(5)
    u = F.form("(a*b)^2*da^db/z^4")
    plain = classify_alpha(F, u)
    assert plain.tag == Verdict.UNKNOWN
    assert classify_alpha(F, u, fixture("fermat_odd", F)).tag == Verdict.CERTIFIED
