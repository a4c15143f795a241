"""Integral dependence on Sym(Omega^q / torsion).

Three mechanisms decide membership of a meromorphic q-form in alpha^q:

* verification of an explicit monic relation (``DependenceCertificate``),
* an exact decision for torus-homogeneous forms on monomial covers,
* refutation along arcs (order test, then an exact DVR membership test).

``classify_alpha`` chains them together with the product rule for ``A x disc``
and refutation through pull-backs along registered maps.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, product as iproduct
from typing import Dict, List, Optional, Sequence, Tuple

from .forms import DiffForm
from .grammar import FormSyntaxError
from .linalg import Span, intersect, solve
from .models import AmbientModel, GradedModel, NotHomogeneous, model_for
from .poly import MeroFunction, Polynomial
from .varieties import VarietySpec

__all__ = [
    "CertificateError",
    "CertTerm",
    "DependenceCertificate",
    "verify_certificate",
    "check_certificate",
    "pullback_certificate",
    "scale_certificate",
    "wedge_certificate",
    "ArcSpec",
    "ArcDegenerate",
    "ArcResult",
    "refute_by_arc",
    "MonomialDecision",
    "decide_monomial",
    "decide_at",
    "graded_generators",
    "closure_at",
    "newton_lp",
    "search_certificate",
    "Verdict",
    "MembershipVerdict",
    "classify_alpha",
    "stock_arcs",
]


class CertificateError(ValueError):
    """Malformed certificate: unresolved name or degree mismatch."""


# --------------------------------------------------------------------------
# polynomials in frame symbols (the symmetric algebra)


def _iszero(c) -> bool:
    return c.is_zero() if isinstance(c, MeroFunction) else c == 0


def _linear(vec) -> Dict[Tuple[int, ...], object]:
    r = len(vec)
    return {tuple(1 if i == j else 0 for i in range(r)): c for j, c in enumerate(vec) if not _iszero(c)}


def _pmul(a, b):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out[e] + ca * cb if e in out else ca * cb
    return {e: c for e, c in out.items() if not _iszero(c)}


def _padd(a, b):
    out = dict(a)
    for e, c in b.items():
        out[e] = out[e] + c if e in out else c
    return {e: c for e, c in out.items() if not _iszero(c)}



# --------------------------------------------------------------------------
# certificates


@dataclass
class CertTerm:
    """``coefficient * factor_1 ... factor_h`` inside ``S_h``."""

    coefficient: MeroFunction
    factors: Tuple[str, ...]


@dataclass
class DependenceCertificate:
    """Monic relation ``z^k + S_1 z^(k-1) + ... + S_k`` annihilating a form.

    Factor names resolve first through ``bindings`` and otherwise as form
    text on the variety (``dx``, ``dz^da``).
    """

    degree: int
    terms: Dict[int, List[CertTerm]]
    bindings: Dict[str, DiffForm] = field(default_factory=dict)
    variety: Optional[str] = None
    form: Optional[DiffForm] = None
    name: str = "certificate"

    def __post_init__(self):
        if self.degree < 1:
            raise CertificateError("certificate degree must be at least 1")
        for h in self.terms:
            if not 1 <= h <= self.degree:
                raise CertificateError(f"S_{h} is outside 1..{self.degree}")
            for t in self.terms[h]:
                if len(t.factors) != h:
                    raise CertificateError(
                        f"S_{h} term has {len(t.factors)} factors, expected {h}")

    def names(self) -> List[str]:
        seen = []
        for h in sorted(self.terms):
            for t in self.terms[h]:
                for f in t.factors:
                    if f not in seen:
                        seen.append(f)
        return seen


def _resolve(spec: VarietySpec, cert: DependenceCertificate, name: str) -> DiffForm:
    if name in cert.bindings:
        return cert.bindings[name]
    if name in spec.named_forms:
        return spec.form(spec.named_forms[name])
    try:
        return spec.form(name)
    except FormSyntaxError:
        raise CertificateError(f"unresolved generator {name!r}") from None


def check_certificate(spec: VarietySpec, omega: DiffForm, cert: DependenceCertificate):
    """``(ok, reason)``; raises ``CertificateError`` for malformed input."""
    q = omega.degree
    forms = {n: _resolve(spec, cert, n) for n in cert.names()}
    for n, f in forms.items():
        if f.vars != spec.vars:
            raise CertificateError(f"generator {n} does not live on {spec.id}")
        if f.degree != q:
            raise CertificateError(f"generator {n} has degree {f.degree}, the form has degree {q}")
    model = AmbientModel(spec, q)
    omega_mod = None
    for n, f in forms.items():
        if spec.reduce_form(f).is_holomorphic():
            continue
        if omega_mod is None:
            omega_mod = model.module([g for _, g in model.omega_generators()])
        if not omega_mod.contains(f):
            return False, f"generator {n} is not in Omega^{q}/torsion"
    for h, terms in cert.terms.items():
        for t in terms:
            c = spec.reduce(t.coefficient)
            if not c.is_polynomial():
                return False, f"a coefficient of S_{h} is not regular: {c}"
    r = model.rank
    vecs = {n: _linear(model.vector(f)) for n, f in forms.items()}
    x = _linear(model.vector(omega))
    one = MeroFunction.laurent_monomial((0,) * len(spec.vars), spec.vars)
    powers = [{(0,) * r: one}]
    for _ in range(cert.degree):
        powers.append(_pmul(powers[-1], x))
    total = powers[cert.degree]
    for h, terms in cert.terms.items():
        s_h = {}
        for t in terms:
            prod = {(0,) * r: t.coefficient}
            for n in t.factors:
                prod = _pmul(prod, vecs[n])
            s_h = _padd(s_h, prod)
        total = _padd(total, _pmul(s_h, powers[cert.degree - h]))
    for c in total.values():
        if not spec.reduce(c).is_zero():
            return False, "P(omega) does not vanish on the variety"
    return True, "ok"


def verify_certificate(spec: VarietySpec, omega: DiffForm, cert: DependenceCertificate) -> bool:
    return check_certificate(spec, omega, cert)[0]


def pullback_certificate(f, cert: DependenceCertificate, omega: Optional[DiffForm] = None
                         ) -> DependenceCertificate:
    """Transport a certificate on ``f.target`` to ``f.source``."""
    from .maps import pullback

    tgt, src = f.target, f.source
    bindings = {}
    for n in cert.names():
        bindings[f"{f.name}*{n}"] = pullback(f, _resolve(tgt, cert, n))
    images = [MeroFunction(c) for c in f.components]
    terms = {}
    for h, ts in cert.terms.items():
        terms[h] = [CertTerm(src.reduce(t.coefficient.substitute(images, src.vars)),
                             tuple(f"{f.name}*{n}" for n in t.factors)) for t in ts]
    base = omega if omega is not None else cert.form
    form = pullback(f, base) if base is not None else None
    return DependenceCertificate(cert.degree, terms, bindings, src.id, form, f"{f.name}*{cert.name}")


def scale_certificate(cert: DependenceCertificate, c) -> DependenceCertificate:
    """Relation for ``c * omega``: ``S_h`` becomes ``c^h S_h``."""
    c = Fraction(c)
    if c == 0:
        raise CertificateError("cannot scale a certificate by zero")
    terms = {h: [CertTerm(t.coefficient * (c ** h), t.factors) for t in ts] for h, ts in cert.terms.items()}
    form = cert.form.scale(c) if cert.form is not None else None
    return DependenceCertificate(cert.degree, terms, dict(cert.bindings), cert.variety, form,
                                 f"{c}*{cert.name}")


def wedge_certificate(spec: VarietySpec, cert: DependenceCertificate, sigma: DiffForm,
                      label: str = "sigma") -> DependenceCertificate:
    """Relation for ``omega ^ sigma`` with ``sigma`` holomorphic.

    ``u -> u ^ sigma`` is linear, so it extends to the symmetric algebras and
    carries the relation along.
    """
    bindings = {f"({n})^{label}": _resolve(spec, cert, n) ^ sigma for n in cert.names()}
    terms = {h: [CertTerm(t.coefficient, tuple(f"({n})^{label}" for n in t.factors)) for t in ts]
             for h, ts in cert.terms.items()}
    form = cert.form ^ sigma if cert.form is not None else None
    return DependenceCertificate(cert.degree, terms, bindings, cert.variety, form,
                                 f"{cert.name}^{label}")


# --------------------------------------------------------------------------
# arcs


class ArcDegenerate(ValueError):
    """The arc kills the form and every generator; no conclusion."""


@dataclass(frozen=True)
class ArcSpec:
    """Monomial arc ``t -> (c_i t^{w_i})`` into the cover or the ambient space."""

    exponents: Tuple[int, ...]
    coefficients: Tuple[Fraction, ...] = ()
    space: str = "parameter"
    description: str = ""

    def __post_init__(self):
        if self.space not in ("parameter", "ambient"):
            raise ValueError(f"arc space must be 'parameter' or 'ambient', got {self.space!r}")
        if any(w < 0 for w in self.exponents):
            raise ValueError("arc exponents must be non-negative")
        if not self.coefficients:
            object.__setattr__(self, "coefficients", tuple(Fraction(1) for _ in self.exponents))
        if len(self.coefficients) != len(self.exponents):
            raise ValueError("arc needs one coefficient per coordinate")

    def images(self) -> List[MeroFunction]:
        t = ("t",)
        return [MeroFunction.laurent_monomial((w,), t, Fraction(c))
                for w, c in zip(self.exponents, self.coefficients)]

    def label(self) -> str:
        return self.description or f"t -> t^{list(self.exponents)}"

    def to_json(self):
        return {"space": self.space, "exponents": list(self.exponents),
                "coefficients": [str(c) for c in self.coefficients], "description": self.label()}


@dataclass
class ArcResult:
    refuted: bool
    method: str
    order_form: Optional[int]
    order_generators: Optional[int]
    arc: ArcSpec

    def __bool__(self):
        return self.refuted

    def to_json(self):
        return {"refuted": self.refuted, "method": self.method, "order_form": self.order_form,
                "order_generators": self.order_generators, "arc": self.arc.to_json()}


def _laurent_vector(coeffs: Sequence[MeroFunction], images) -> List[Dict[int, Fraction]]:
    out = []
    for c in coeffs:
        if c.is_zero():
            out.append({})
            continue
        try:
            val = c.substitute(images, ("t",))
        except ZeroDivisionError:
            raise ArcDegenerate("the arc runs inside the pole locus") from None
        out.append({e[0]: k for e, k in val.laurent_terms().items()})
    return out


def _order(vec) -> Optional[int]:
    orders = [min(c) for c in vec if c]
    return min(orders) if orders else None


def _arc_vectors(spec: VarietySpec, forms: Sequence[DiffForm], arc: ArcSpec, q: int):
    if arc.space == "parameter":
        model = GradedModel(spec, q)
        if len(arc.exponents) != model.n:
            raise ValueError(f"arc needs {model.n} exponents for the chart of {spec.id}")
        if not model.finite:
            for e in model.exps:
                if sum(a * b for a, b in zip(arc.exponents, e)) < 0:
                    raise ValueError("arc leaves the variety through the chart")
        images = arc.images()
        out = []
        for f in forms:
            p = model.to_param(f)
            out.append(_laurent_vector([p.coefficient(idx) for idx in model.index], images))
        return out
    if len(arc.exponents) != len(spec.vars):
        raise ValueError(f"arc needs {len(spec.vars)} components on {spec.id}")
    images = arc.images()
    for f in spec.equations:
        val = MeroFunction(f).substitute(images, ("t",))
        if not val.is_zero():
            raise ValueError(f"arc does not lie on {spec.id}")
    model = AmbientModel(spec, q)
    return [_laurent_vector(model.vector(f), images) for f in forms]


def _dvr_member(v, gens) -> bool:
    """Exact membership of a Laurent vector in the C[[t]]-span of ``gens``."""
    shift = min([_order(x) for x in [v] + list(gens) if _order(x) is not None], default=0)
    T = ("t",)

    def poly(c):
        return Polynomial({(e - shift,): k for e, k in c.items()}, T) if c else Polynomial.zero(T)

    def ordp(p):
        return min(e[0] for e in p.terms)

    rows = [[poly(c) for c in g] for g in gens]
    vec = [poly(c) for c in v]
    r = len(vec)
    for comp in range(r):
        cands = [(ordp(row[comp]), i) for i, row in enumerate(rows) if not row[comp].is_zero()]
        if not cands:
            if not vec[comp].is_zero():
                return False
            continue
        o, i = min(cands)
        piv = rows.pop(i)
        unit = Polynomial({(e[0] - o,): k for e, k in piv[comp].terms.items()}, T)

        def elim(row):
            e = row[comp]
            if e.is_zero():
                return row
            qt = Polynomial({(x[0] - o,): k for x, k in e.terms.items()}, T)
            return [unit * a - qt * b for a, b in zip(row, piv)]

        rows = [elim(row) for row in rows]
        if not vec[comp].is_zero():
            if ordp(vec[comp]) < o:
                return False
            vec = elim(vec)
    return all(c.is_zero() for c in vec)


def refute_by_arc(spec: VarietySpec, omega: DiffForm, gens: Optional[Sequence[DiffForm]],
                  arc: ArcSpec) -> ArcResult:
    """One-way test: ``True`` proves ``omega`` is not integral over ``gens``.

    First the order comparison ``ord(omega) < min ord(g)``; when that is
    inconclusive, exact membership of the arc image in the C[[t]]-span of the
    generator images (a necessary condition for integral dependence).
    """
    q = omega.degree
    if gens is None:
        gens = [g for _, g in model_for(spec, q).omega_generators()]
    vecs = _arc_vectors(spec, [omega] + list(gens), arc, q)
    v, gv = vecs[0], [g for g in vecs[1:] if _order(g) is not None]
    ov = _order(v)
    og = min((_order(g) for g in gv), default=None)
    if ov is None and og is None:
        raise ArcDegenerate(f"{arc.label()} kills the form and all generators")
    if ov is None:
        return ArcResult(False, "order", None, og, arc)
    if og is None or ov < og:
        return ArcResult(True, "order", ov, og, arc)
    return ArcResult(not _dvr_member(v, gv), "dvr-membership", ov, og, arc)


def stock_arcs(spec: VarietySpec) -> List[ArcSpec]:
    """Diagonal and coordinate-axis arcs on the cover; lines through small
    rational points for varieties without a cover."""
    chart = spec.chart
    if chart is not None and spec.parametrization is not None:
        n = len(chart[0])
        arcs = [ArcSpec((1,) * n, description="diagonal")]
        for i in range(n):
            w = tuple(1 if j == i else 2 if n > 1 else 1 for j in range(n))
            arcs.append(ArcSpec(w, description=f"axis {chart[0][i]}"))
        return arcs
    if len(spec.equations) != 1:
        return []
    f = spec.equations[0]
    if len({sum(e) for e in f.terms}) != 1:
        return []
    arcs = []
    for pt in iproduct((-1, 0, 1, 2), repeat=len(spec.vars)):
        if not any(pt) or next(x for x in pt if x) < 0:
            continue
        if f.evaluate([Fraction(x) for x in pt]) != 0:
            continue
        arcs.append(ArcSpec((1,) * len(pt), tuple(Fraction(x) for x in pt), "ambient",
                            f"line through {pt}"))
    return arcs[:6]


# --------------------------------------------------------------------------
# monomial decision


def _primitive(v):
    g = 0
    for x in v:
        g = math.gcd(g, int(x))
    return tuple(int(x) // g for x in v) if g else tuple(int(x) for x in v)


def graded_generators(model: GradedModel, gens: Sequence[Tuple[str, DiffForm]]):
    items = []
    for name, g in gens:
        gr = model.graded(g)
        if not gr:
            continue
        if len(gr) != 1:
            raise NotHomogeneous(f"generator {name} is not torus-homogeneous")
        (u, e), = gr.items()
        items.append((name, u, e))
    return items


def _dual_cone(model: GradedModel):
    """Extreme rays of ``{w : w . E >= 0}`` for the chart exponents ``E``."""
    exps = model.exps
    if model.n == 1:
        return [(1,)] if all(e[0] >= 0 for e in exps) else [(-1,)]
    cands = set()
    for e in exps:
        for w in ((-e[1], e[0]), (e[1], -e[0])):
            w = _primitive(w)
            if all(w[0] * x[0] + w[1] * x[1] >= 0 for x in exps):
                cands.add(w)
    ref = math.atan2(model._weight[1], model._weight[0])
    key = [(_angle(w, ref), w) for w in cands]
    key.sort()
    return [key[0][1], key[-1][1]]


def _angle(w, ref):
    a = math.atan2(w[1], w[0]) - ref
    while a <= -math.pi:
        a += 2 * math.pi
    while a > math.pi:
        a -= 2 * math.pi
    return a


def _test_weights(model: GradedModel, items, deg) -> List[Tuple[int, ...]]:
    """Rays and chamber representatives of the dual cone for ``deg``."""
    rays = _dual_cone(model)
    if model.n == 1:
        return rays
    exps = model.exps

    def inside(w):
        return all(w[0] * x[0] + w[1] * x[1] >= 0 for x in exps)

    cands = set(rays)
    for _, u, _ in items:
        d = (u[0] - deg[0], u[1] - deg[1])
        if d == (0, 0):
            continue
        for w in ((-d[1], d[0]), (d[1], -d[0])):
            w = _primitive(w)
            if inside(w):
                cands.add(w)
    ref = math.atan2(model._weight[1], model._weight[0])
    ordered = [w for _, w in sorted((_angle(w, ref), w) for w in cands)]
    out = list(ordered)
    for a, b in zip(ordered, ordered[1:]):
        out.append(_primitive((a[0] + b[0], a[1] + b[1])))
    return out


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def closure_at(model: GradedModel, items, deg) -> Tuple[Span, Dict[Tuple[int, ...], Span]]:
    """Subspace of vectors ``e`` whose ``t^deg e`` passes every monomial arc.

    Returns the intersection and the per-weight subspaces ``E_w``.
    """
    if model.n > 2:
        raise ValueError("the monomial decision is implemented for charts of dimension 1 and 2")
    r = model.rank
    full = Span(r, [[1 if i == j else 0 for i in range(r)] for j in range(r)])
    per = {}
    out = full
    for w in _test_weights(model, items, deg):
        E = Span(r, [e for _, u, e in items if _dot(w, u) <= _dot(w, deg)])
        per[w] = E
        out = intersect(out, E)
    return out, per


def newton_lp(model: GradedModel, items, deg) -> bool:
    """Exact LP: ``deg`` in conv(generator exponents) + cone(chart exponents).

    The system has at most ``n + 1`` equality rows, so feasibility is decided
    by enumerating basic solutions (Caratheodory) with exact arithmetic.
    """
    if not items:
        return False
    cols = [(1,) + tuple(u) for _, u, _ in items] + [(0,) + tuple(e) for e in model.exps]
    rhs = [Fraction(1)] + [Fraction(x) for x in deg]
    rows = len(rhs)
    for size in range(1, rows + 1):
        for subset in combinations(range(len(cols)), size):
            mat = [[Fraction(cols[j][i]) for j in subset] for i in range(rows)]
            sol = solve(mat, rhs)
            if sol is not None and all(x >= 0 for x in sol):
                return True
    return False


@dataclass
class GradedCertificate:
    """Certificate found by the lattice search, in the chart's log frame."""

    degree: int
    terms: List[Tuple[int, Fraction, Tuple[int, ...], Tuple[str, ...]]]

    def to_dependence(self, model: GradedModel, omega: Optional[DiffForm] = None) -> DependenceCertificate:
        terms: Dict[int, List[CertTerm]] = {}
        for h, c, s, names in self.terms:
            coeff = model.ambient_monomial(s) * c
            terms.setdefault(h, []).append(CertTerm(coeff, names))
        return DependenceCertificate(self.degree, terms, variety=model.spec.id, form=omega,
                                     name="lattice-search")


def search_certificate(model: GradedModel, items, deg, vec, max_degree: int = 6
                       ) -> Optional[GradedCertificate]:
    """Brute-force oracle: monic relations with monomial coefficients.

    Unknowns are the coefficients of ``a^s * g_1 ... g_h`` with
    ``s = h * deg - sum(deg g_i)`` in the coordinate semigroup; the relation
    is solved as a polynomial identity in the frame symbols.
    """
    r = model.rank
    L = {k: v for k, v in _linear(vec).items()}
    gl = [_linear(e) for _, _, e in items]
    for K in range(1, max_degree + 1):
        pw = [{(0,) * r: Fraction(1)}]
        for _ in range(K):
            pw.append(_pmul(pw[-1], L))
        cols, labels = [], []
        for h in range(1, K + 1):
            for combo in combinations_with_replacement(range(len(items)), h):
                s = tuple(h * deg[i] - sum(items[j][1][i] for j in combo) for i in range(model.n))
                if not model.in_semigroup(s):
                    continue
                prod = {(0,) * r: Fraction(1)}
                for j in combo:
                    prod = _pmul(prod, gl[j])
                col = _pmul(prod, pw[K - h])
                if col:
                    cols.append(col)
                    labels.append((h, s, tuple(items[j][0] for j in combo)))
        target = pw[K]
        keys = sorted(set(target) | {e for c in cols for e in c})
        mat = [[c.get(e, Fraction(0)) for c in cols] for e in keys]
        rhs = [-target.get(e, Fraction(0)) for e in keys]
        sol = solve(mat, rhs) if cols else None
        if sol is not None:
            terms = [(h, x, s, names) for (h, s, names), x in zip(labels, sol) if x]
            return GradedCertificate(K, terms)
    return None


@dataclass
class MonomialDecision:
    member: Optional[bool]
    degree: Tuple[int, ...]
    vector: Tuple[Fraction, ...]
    route: str
    weight: Optional[Tuple[int, ...]] = None
    certificate: Optional[GradedCertificate] = None

    def arc(self) -> Optional[ArcSpec]:
        if self.weight is None:
            return None
        return ArcSpec(tuple(self.weight), description=f"monomial arc with weight {list(self.weight)}")


def _omega_items(model: GradedModel):
    return graded_generators(model, model.omega_generators())


def decide_monomial(spec: VarietySpec, omega: DiffForm, generators=None, max_degree: int = 6,
                    confirm: bool = True) -> MonomialDecision:
    """Decide integral dependence of a torus-homogeneous form on a monomial cover.

    Rank one uses an exact LP; otherwise every chamber of the dual cone is
    tested.  Positive answers are confirmed by a lattice certificate search
    (``member`` is ``None`` when the search finds nothing up to ``max_degree``).
    """
    model = GradedModel(spec, omega.degree)
    if not model.finite:
        raise ValueError(f"{spec.id} has no finite monomial cover")
    gr = model.graded(omega)
    if len(gr) > 1:
        raise NotHomogeneous(f"{omega} is not a monomial form")
    items = _omega_items(model) if generators is None else graded_generators(model, generators)
    if not gr:
        return MonomialDecision(True, (0,) * model.n, (Fraction(0),) * model.rank, "zero")
    (deg, vec), = gr.items()
    if not model.is_invariant(deg):
        raise ValueError(f"{omega} is not invariant under the deck group of {spec.id}")
    return decide_at(model, items, deg, vec, max_degree, confirm)


def decide_at(model, items, deg, vec, max_degree=6, confirm=True) -> MonomialDecision:
    C, per = closure_at(model, items, deg)
    inside = C.contains(vec)
    route = "chambers"
    if model.rank == 1:
        lp = newton_lp(model, items, deg)
        if lp != inside:
            raise AssertionError(f"LP and chamber decisions disagree at {deg}")
        route = "newton-lp"
    if not inside:
        w = next(w for w, E in per.items() if not E.contains(vec))
        return MonomialDecision(False, deg, vec, route, weight=w)
    if not confirm:
        return MonomialDecision(True, deg, vec, route)
    cert = search_certificate(model, items, deg, vec, max_degree)
    if cert is None and model.rank > 1:
        return MonomialDecision(None, deg, vec, route)
    return MonomialDecision(True, deg, vec, route, certificate=cert)


# --------------------------------------------------------------------------
# classification


class Verdict(str, Enum):
    IN_OMEGA = "InOmegaTorsionFree"
    CERTIFIED = "InAlphaCertified"
    MONOMIAL = "InAlphaDecidedMonomial"
    REFUTED = "NotInAlphaRefuted"
    UNKNOWN = "Unknown"


@dataclass
class MembershipVerdict:
    tag: Verdict
    evidence: Dict[str, object] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    @property
    def in_alpha(self) -> Optional[bool]:
        if self.tag in (Verdict.IN_OMEGA, Verdict.CERTIFIED, Verdict.MONOMIAL):
            return True
        if self.tag == Verdict.REFUTED:
            return False
        return None

    def to_json(self):
        return {"tag": self.tag.value, "evidence": self.evidence, "notes": list(self.notes)}


def _omega_witness(spec, omega):
    """Membership in Omega^q/torsion with a readable witness, or ``None``."""
    model = model_for(spec, omega.degree)
    gens = model.omega_generators()
    if isinstance(model, GradedModel):
        items = graded_generators(model, gens)
        gr = model.graded(omega)
        witness = []
        for deg, vec in sorted(gr.items()):
            usable = [(n, u, e) for n, u, e in items
                      if model.in_semigroup(tuple(a - b for a, b in zip(deg, u)))]
            if not usable:
                return None
            mat = [[e[j] for _, _, e in usable] for j in range(model.rank)]
            sol = solve(mat, list(vec))
            if sol is None:
                return None
            for (n, u, _), c in zip(usable, sol):
                if c:
                    s = tuple(a - b for a, b in zip(deg, u))
                    witness.append([str(model.ambient_monomial(s) * c), n])
        return witness
    mod = model.module([g for _, g in gens])
    if not mod.contains(omega):
        return None
    return [["(Groebner reduction)", "Omega generators"]]


def _product_split(spec: VarietySpec, omega: DiffForm):
    """Pieces ``(with_ds, power of s, form on the factor)``."""
    base, var = spec.factor
    s = len(spec.vars) - 1
    pieces: Dict[Tuple[bool, int], Dict[Tuple[int, ...], MeroFunction]] = {}
    for idx, c in omega.components.items():
        has = s in idx
        rest = tuple(i for i in idx if i != s)
        for e, k in c.num.terms.items():
            if c.den[s]:
                raise ValueError("pole along the disc coordinate")
            mono = MeroFunction(Polynomial({e[:s] + (0,): k}, spec.vars), c.den)
            key = (has, e[s])
            d = pieces.setdefault(key, {})
            d[rest] = d[rest] + mono if rest in d else mono
    out = []
    for (has, j), comps in sorted(pieces.items()):
        deg = omega.degree - 1 if has else omega.degree
        # ds is the last coordinate, so dx_idx ^ ds needs no sign
        sub = {idx: MeroFunction(Polynomial({e[:s]: k for e, k in c.num.terms.items()}, base.vars),
                                 c.den[:s]) for idx, c in comps.items()}
        if deg:
            form = DiffForm(base.vars, deg, sub)
        else:
            form = DiffForm.function(sub[()], base.vars)
        out.append((has, j, form))
    return base, var, out


def classify_alpha(spec: VarietySpec, omega: DiffForm, cert: Optional[DependenceCertificate] = None,
                   arcs: Sequence[ArcSpec] = (), use_maps: bool = True) -> MembershipVerdict:
    """Where ``omega`` sits relative to Omega^q/torsion and alpha^q."""
    notes: List[str] = []
    q = omega.degree
    witness = _omega_witness(spec, omega)
    if witness is not None:
        return MembershipVerdict(Verdict.IN_OMEGA, {"kind": "membership", "witness": witness})
    if cert is not None:
        ok, reason = check_certificate(spec, omega, cert)
        if ok:
            return MembershipVerdict(Verdict.CERTIFIED, {"kind": "certificate", "name": cert.name,
                                                         "degree": cert.degree})
        notes.append(f"certificate {cert.name} rejected: {reason}")
    if spec.factor is not None:
        v = _classify_product(spec, omega, notes)
        if v is not None:
            return v
    chart = spec.chart
    if chart is not None and spec.parametrization is not None and len(chart[0]) <= 2:
        v = _classify_graded(spec, omega, notes)
        if v is not None:
            return v
    if use_maps:
        v = _refute_by_maps(spec, omega, notes)
        if v is not None:
            return v
    gens = None
    for arc in list(arcs) + stock_arcs(spec):
        try:
            res = refute_by_arc(spec, omega, gens, arc)
        except (ArcDegenerate, ValueError) as exc:
            notes.append(f"{arc.label()}: {exc}")
            continue
        if res:
            return MembershipVerdict(Verdict.REFUTED, {"kind": "arc", **res.to_json()}, notes)
    reason = "no certificate supplied" if cert is None else "certificate rejected"
    if spec.chart is None or spec.parametrization is None:
        reason += "; no finite monomial cover"
    notes.append(reason)
    return MembershipVerdict(Verdict.UNKNOWN, {"kind": "none", "reason": reason}, notes)


def _classify_graded(spec, omega, notes) -> Optional[MembershipVerdict]:
    model = GradedModel(spec, omega.degree)
    items = _omega_items(model)
    parts = model.graded(omega)
    decisions = []
    for deg, vec in sorted(parts.items()):
        if not model.is_invariant(deg):
            notes.append(f"component of multidegree {deg} is not deck invariant")
            return None
        d = decide_at(model, items, deg, vec)
        if d.member is False:
            arc = d.arc()
            ev = {"kind": "arc", "route": d.route, "multidegree": list(deg),
                  "weight": list(d.weight), "arc": arc.to_json()}
            return MembershipVerdict(Verdict.REFUTED, ev, notes)
        decisions.append(d)
    if all(d.member for d in decisions):
        ev = {"kind": "monomial", "components": [
            {"multidegree": list(d.degree), "route": d.route,
             "certificate_degree": d.certificate.degree if d.certificate else None}
            for d in decisions]}
        return MembershipVerdict(Verdict.MONOMIAL, ev, notes)
    notes.append("closure test positive but no certificate found within the search bound")
    return None


def _classify_product(spec, omega, notes) -> Optional[MembershipVerdict]:
    base, var, pieces = _product_split(spec, omega)
    inner = []
    for has, j, form in pieces:
        v = classify_alpha(base, form)
        inner.append({"piece": f"{var}^{j}" + (f" * (.)^d{var}" if has else ""),
                      "form": str(form), "verdict": v.to_json()})
        if v.in_alpha is False:
            return MembershipVerdict(Verdict.REFUTED, {"kind": "product-rule", "factor": base.id,
                                                       "pieces": inner}, notes)
        if v.in_alpha is None:
            notes.append(f"product rule: piece {form} undecided on {base.id}")
            return None
    tag = Verdict.CERTIFIED if any(p["verdict"]["tag"] == Verdict.CERTIFIED.value for p in inner) \
        else Verdict.MONOMIAL
    return MembershipVerdict(tag, {"kind": "product-rule", "factor": base.id, "pieces": inner}, notes)


def _refute_by_maps(spec, omega, notes) -> Optional[MembershipVerdict]:
    if not spec.maps:
        return None
    from .maps import MapError, builtin_map, pullback

    k = spec.constants.get("k")
    for name in spec.maps:
        try:
            f = builtin_map(name, k)
        except (MapError, TypeError, ValueError) as exc:
            notes.append(f"map {name}: {exc}")
            continue
        if f.target.id != spec.id:
            continue
        try:
            pb = pullback(f, omega)
        except MapError as exc:
            notes.append(f"map {name}: {exc}")
            continue
        v = classify_alpha(f.source, pb, use_maps=False)
        if v.in_alpha is False:
            ev = {"kind": "pullback", "map": f.name, "source": f.source.id,
                  "pulled_back": str(pb), "inner": v.to_json()}
            return MembershipVerdict(Verdict.REFUTED, ev, notes)
    return None
