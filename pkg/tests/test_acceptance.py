"""One test per acceptance criterion; each records a PASS/FAIL line with its timing."""
import time
from fractions import Fraction

from betasheaf.beta import BetaEngine, check_pullback_levels
from betasheaf.certfile import fixture
from betasheaf.closure import (Verdict, classify_alpha, decide_at, graded_generators, pullback_certificate,
                               scale_certificate, search_certificate, verify_certificate)
from betasheaf.forms import d
from betasheaf.integration import family_scan, integrate, stokes_residual
from betasheaf.maps import compose, pi_map, pullback, quotient_map, resolve_map, restrict, slice_v1
from betasheaf.models import GradedModel
from betasheaf.numcases import FAMILY_GRID, integral_cases, s4_family, stokes_cases
from betasheaf.varieties import curve35, fermat, resolve_variety, surface_S, threefold_M


class Checks:
    def __init__(self):
        self.failed = []
        self.count = 0
        self.t0 = time.perf_counter()

    def __call__(self, label, ok):
        self.count += 1
        if not ok:
            self.failed.append(label)

    @property
    def seconds(self):
        return time.perf_counter() - self.t0

    def report(self, acceptance, number, limit=None):
        secs = self.seconds
        ok = not self.failed and (limit is None or secs < limit)
        detail = f"{self.count - len(self.failed)}/{self.count} checks, {secs:.2f} s"
        if limit is not None:
            detail += f" (limit {limit:g} s)"
        if self.failed:
            detail += "; failed: " + ", ".join(self.failed[:5])
        acceptance(number, ok, detail)
        assert ok, detail


def test_criterion_1_cusp_curve(acceptance):
    c = Checks()
    C = curve35()
    eng = BetaEngine(C)
    model = GradedModel(C, 0)
    alpha0 = eng.level(0, 0)
    # O-span of the pull-backs t^0, t, t^2, t^4, t^7
    pulled = ["1", "y^2/x", "y^4/x^2", "y^3/x", "y^4/x"]
    for text, power in zip(pulled, (0, 1, 2, 4, 7)):
        c(f"{text} pulls back to t^{power}", model.to_param(C.form(text)) == C.param_form(f"t^{power}"))
    c("alpha0", alpha0.equals(eng.span(0, pulled)))
    c("alpha0 = L0", alpha0.equals(eng.L(0)))
    c("alpha1", eng.level(1, 0).equals(eng.span(1, ["y^2*dy/x"])))
    beta1, p_star = eng.beta(1)
    c("p* = 1", p_star == 1)
    c("beta1 = L1", beta1.equals(eng.L(1)))
    c.report(acceptance, 1, limit=5)


def test_criterion_2_cyclic_quotients(acceptance):
    c = Checks()
    for k in range(2, 9):
        S = surface_S(k)
        eng = BetaEngine(S)
        m = k // 2
        c(f"k={k} alpha1", eng.level(1, 0).equals(eng.span(1, [f"x*dy/z^{m}"])))
        alpha2 = eng.level(2, 0)
        c(f"k={k} alpha2", alpha2.equals(eng.span(2, [f"dx^dy/z^{m - 1}"])))
        beta2, _ = eng.beta(2)
        c(f"k={k} beta2 = alpha2[1]", beta2.equals(eng.level(2, 1)))
        c(f"k={k} beta2", beta2.equals(eng.span(2, [f"dx^dy/z^{m}"])))
        L2 = eng.L(2)
        c(f"k={k} dx^dy/z^(k-1) in L2", L2.contains(S.form(f"dx^dy/z^{k - 1}")))
        c(f"k={k} dx^dy/z^k not in L2", not L2.contains(S.form(f"dx^dy/z^{k}")))
        if k >= 4:
            om = eng.omega(2)
            for name, a, b in (("Omega<alpha", om, alpha2), ("alpha<beta", alpha2, beta2), ("beta<L", beta2, L2)):
                c(f"k={k} {name}", b.contains_set(a) and not a.contains_set(b))
    c.report(acceptance, 2, limit=60)


BUILTINS = (["curve35", "affine:x,y", "product(S:2,w)"] + [f"S:{k}" for k in range(2, 9)]
            + [f"M:{k}" for k in range(2, 7)] + [f"Fermat:{n}" for n in (3, 4, 5, 6, 8)])


def test_criterion_3_stabilization_bounds(acceptance):
    c = Checks()
    for ident in BUILTINS:
        spec = resolve_variety(ident)
        eng = BetaEngine(spec)
        for q in range(spec.dimension + 1):
            _, p_star = eng.beta(q)
            bound = q - 1 if spec.normal and q >= 1 else q
            c(f"{ident} q={q} p*={p_star}", p_star <= bound)
    c.report(acceptance, 3)


def test_criterion_4_threefolds(acceptance):
    c = Checks()
    for k in range(2, 7):
        M = threefold_M(k)
        m = k // 2
        omega_m = M.form(f"x*dy/u^{m}")
        c(f"k={k} omega_m certificate", verify_certificate(M, omega_m, fixture("mk_eq2", M)))
        j = slice_v1(k)
        restricted = restrict(d(omega_m), j)
        v = classify_alpha(j.source, restricted)
        c(f"k={k} d omega_m on v=1 refuted", v.tag == Verdict.REFUTED)
        w = omega_m ^ M.form("dv")
        c(f"k={k} w certificate", verify_certificate(M, w, fixture("mk_w", M)))
        c(f"k={k} w certified", classify_alpha(M, w, fixture("mk_w", M)).tag == Verdict.CERTIFIED)
        pi = pi_map(k)
        v = classify_alpha(pi.source, pullback(pi, d(w)))
        c(f"k={k} pi* dw refuted", v.tag == Verdict.REFUTED)
    c.report(acceptance, 4)


def test_criterion_5_fermat(acceptance):
    c = Checks()
    for n in (3, 4, 5, 6, 8):
        F = fermat(n)
        p = n // 2
        omega2 = BetaEngine(F).omega(2)
        if n % 2 == 0:
            u = F.form(f"(a*b)^{p}*da^db/z^{2 * p - 1}")
            c(f"n={n} certificate", verify_certificate(F, u, fixture("fermat_even", F, p=p)))
            f = resolve_map(f"fermat:{p}")
            route = pullback_certificate(f, fixture("sk_alpha2", f.target))
            route = scale_certificate(route, Fraction(1, 2 * p * p))
            r = F.form(f"(a*b)^{p - 1}*da^db/z^{p - 1}")
            c(f"n={n} pull-back route", verify_certificate(F, r, route))
            c(f"n={n} route form not holomorphic", not omega2.contains(r))
        else:
            u = F.form(f"(a*b)^{p}*da^db/z^{2 * p}")
            c(f"n={n} certificate", verify_certificate(F, u, fixture("fermat_odd", F, p=p)))
        c(f"n={n} form not holomorphic", not omega2.contains(u))
    c.report(acceptance, 5)


def test_criterion_6_pullback_compatibility(acceptance):
    c = Checks()
    maps = ["q:2", "q:3", "q:4", "fermat:2", "fermat:3", "pi:2", "slice_v1:2", "slice_v1:3", "id:S:4", "jq:2"]
    for text in maps:
        rep = check_pullback_levels(resolve_map(text), (0, 1))
        c(f"{text}: {rep.violations[:1]}", rep.ok)
    # functoriality on generators of the target levels
    from betasheaf.maps import quotient_map_renamed

    for k in (2, 3):
        f, g = quotient_map_renamed(k), slice_v1(k)
        gf = compose(g, f)
        eng = BetaEngine(g.target)
        for q in range(3):
            for p in (0, 1):
                for u in eng.level(q, p).ambient_generators():
                    c(f"k={k} {u}", pullback(gf, u) == pullback(f, pullback(g, u)))
    c.report(acceptance, 6)


def test_criterion_7_stokes(acceptance):
    c = Checks()
    cases = stokes_cases()
    c("three registered cases", sorted(cases) == ["S2-diagonal", "curve35", "disc"])
    for name, case in cases.items():
        rep = stokes_residual(case.cycle, case.rho, case.u, case.v)
        c(f"{name} residual {abs(rep.limit):.1e}", abs(rep.limit) < 1e-6)
    c.report(acceptance, 7, limit=60)


def _monotone(values, scale):
    inc = [abs(b - a) for a, b in zip(values, values[1:])]
    inc = [0.0 if x < 1e-13 * scale else x for x in inc]
    return all(b <= a for a, b in zip(inc, inc[1:]))


def test_criterion_8_convergence_and_boundedness(acceptance):
    c = Checks()
    for name, case in integral_cases().items():
        rep = integrate(case.cycle, case.rho, case.u, case.v)
        scale = max(1.0, max(abs(v) for v in rep.values))
        c(f"{name} monotone", _monotone(rep.values, scale))
        c(f"{name} Cauchy", rep.converged)
    fam = s4_family()
    rep = family_scan(fam.cycle, fam.rho, fam.u, fam.v, FAMILY_GRID)
    c("family sup finite", rep.sup < float("inf"))
    c("family converged", not rep.failures)
    c("single C", all(abs(r.limit) <= rep.constant * r.mass * (1 + 1e-12) for r in rep.reports))
    c("bounded", rep.bounded)
    c.report(acceptance, 8)


def test_criterion_9_oracle_equivalence(acceptance):
    c = Checks()
    targets = [("curve35", 0), ("curve35", 1)] + [(f"S:{k}", q) for k in range(2, 9) for q in (1, 2)]
    total = agree = 0
    for ident, q in targets:
        spec = resolve_variety(ident)
        eng = BetaEngine(spec)
        model = GradedModel(spec, q)
        items = graded_generators(model, model.omega_generators())
        for deg, vec in eng.sweep_queries(q):
            fast = decide_at(model, items, deg, vec, confirm=False).member
            oracle = search_certificate(model, items, deg, vec, 6) is not None
            total += 1
            agree += fast == oracle
            c(f"{ident} q={q} {deg}", fast == oracle)
    c("queries exist", total > 0)
    c.report(acceptance, 9)
    assert agree == total
