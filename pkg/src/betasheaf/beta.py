"""The recursion ``alpha^q[p] -> alpha^q[p+1]`` and its stable value ``beta^q``.

Generators are kept in the native coordinates of the variety's model (chart
parameters for graded models, ambient coordinates otherwise).  Every level is
a module in that model, so equality and membership are exact.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from typing import Dict, List, Optional, Sequence, Tuple

from .closure import (
    DependenceCertificate,
    MembershipVerdict,
    graded_generators,
    classify_alpha,
    closure_at,
    pullback_certificate,
    search_certificate,
    verify_certificate,
)
from .forms import DiffForm, d, wedge
from .models import AmbientModel, GradedModel, model_for
from .varieties import VarietySpec

__all__ = [
    "StabilizationError",
    "GradedGeneratorSet",
    "BetaEngine",
    "engine",
    "alpha_seeds",
    "alpha_level",
    "beta",
    "omega_set",
    "l_set",
    "ClassificationReport",
    "classify",
    "PullbackReport",
    "check_pullback_levels",
]

log = logging.getLogger(__name__)


class StabilizationError(RuntimeError):
    """The recursion did not stabilize below the level cap."""


@dataclass
class GradedGeneratorSet:
    """Finite generator list of a module of q-forms, with provenance."""

    variety: str
    degree: int
    kind: str
    level: Optional[int]
    generators: List[DiffForm]
    provenance: List[str]
    module: object = field(repr=False)
    source: str = "computed"
    certificates: Dict[int, DependenceCertificate] = field(default_factory=dict, repr=False)

    def __len__(self):
        return len(self.generators)

    def contains(self, u: DiffForm) -> bool:
        return self.module.contains(u)

    def contains_set(self, other: "GradedGeneratorSet") -> bool:
        return all(self.module.contains(g) for g in other.generators)

    def equals(self, other: "GradedGeneratorSet") -> bool:
        return self.contains_set(other) and other.contains_set(self)

    def ambient_generators(self) -> List[DiffForm]:
        model = self.module.model
        return [ambient_form(model, g) for g in self.generators]

    def to_json(self):
        return {
            "variety": self.variety, "degree": self.degree, "kind": self.kind,
            "level": self.level, "source": self.source,
            "generators": [{"form": str(g), "provenance": p}
                           for g, p in zip(self.ambient_generators(), self.provenance)],
        }


def ambient_form(model, u: DiffForm) -> DiffForm:
    """Ambient representative of a model-native form."""
    if u.coords == "ambient":
        return u
    total = DiffForm.zero(model.spec.vars, u.degree)
    for deg, vec in sorted(model.graded(u).items()):
        total = total + model.to_ambient(deg, vec)
    return total


def _native(model, u: DiffForm) -> DiffForm:
    return model.to_param(u) if isinstance(model, GradedModel) else u


class BetaEngine:
    """Caches models, seeds and levels for one variety."""

    def __init__(self, spec: VarietySpec, max_cert_degree: int = 6):
        self.spec = spec
        self.max_cert_degree = max_cert_degree
        self._models: Dict[int, object] = {}
        self._omega: Dict[int, GradedGeneratorSet] = {}
        self._levels: Dict[Tuple[int, int], GradedGeneratorSet] = {}
        self._L: Dict[int, Optional[GradedGeneratorSet]] = {}

    # models ---------------------------------------------------------------
    def model(self, q: int):
        if q not in self._models:
            self._models[q] = model_for(self.spec, q)
        return self._models[q]

    def native(self, q: int, u: DiffForm) -> DiffForm:
        return _native(self.model(q), u)

    def _new_set(self, q, kind, level, source="computed") -> GradedGeneratorSet:
        return GradedGeneratorSet(self.spec.id, q, kind, level, [], [], self.model(q).module(), source)

    def _add(self, gs: GradedGeneratorSet, u: DiffForm, prov: str) -> bool:
        u = self.native(gs.degree, u)
        if gs.module.add(u):
            gs.generators.append(u)
            gs.provenance.append(prov)
            return True
        return False

    def span(self, q: int, forms: Sequence, include_omega: bool = True, kind: str = "span"
             ) -> GradedGeneratorSet:
        """Module generated by ``forms`` (text or DiffForm), plus Omega/torsion by default."""
        gs = self._new_set(q, kind, None, "given")
        if include_omega:
            for name, g in self.model(q).omega_generators():
                self._add(gs, g, f"omega:{name}")
        for f in forms:
            u = self.spec.form(f, q) if isinstance(f, str) else f
            self._add(gs, u, f"given:{f}")
        return gs

    # Omega^q / torsion ------------------------------------------------------
    def omega(self, q: int) -> GradedGeneratorSet:
        if q not in self._omega:
            gs = self._new_set(q, "omega", None)
            for name, g in self.model(q).omega_generators():
                self._add(gs, g, f"omega:{name}")
            self._omega[q] = gs
        return self._omega[q]

    # alpha seeds ----------------------------------------------------------
    def seeds(self, q: int) -> GradedGeneratorSet:
        key = (q, 0)
        if key in self._levels:
            return self._levels[key]
        spec = self.spec
        if q > spec.dimension:
            raise ValueError(f"degree {q} exceeds the dimension of {spec.id}")
        model = self.model(q)
        if spec.factor is not None:
            gs = self._product_seeds(q)
        elif isinstance(model, GradedModel) and model.finite and model.n <= 2:
            gs = self._sweep_seeds(q)
        else:
            gs = self._declared_seeds(q)
        self._levels[key] = gs
        return gs

    def sweep_box(self, q: int) -> Tuple[int, ...]:
        model = self.model(q)
        items = graded_generators(model, model.omega_generators())
        return tuple(max([u[i] for _, u, _ in items] + [0]) + 2 * max(e[i] for e in model.exps)
                     for i in range(model.n))

    def _sweep_degrees(self, q: int, box):
        model = self.model(q)
        degs = [deg for deg in iproduct(*(range(b + 1) for b in box)) if model.is_invariant(deg)]
        degs.sort(key=lambda deg: (model.weight(deg), deg))
        return degs

    def sweep_queries(self, q: int):
        """``(multidegree, vector)`` pairs the sweep decides: unit vectors at every box degree."""
        model = self.model(q)
        r = model.rank
        units = [tuple(Fraction(int(i == j)) for i in range(r)) for j in range(r)]
        for deg in self._sweep_degrees(q, self.sweep_box(q)):
            for vec in units:
                yield deg, vec

    def _sweep_seeds(self, q: int, box=None) -> GradedGeneratorSet:
        """alpha^q by the monomial closure test over a bounded multidegree box."""
        model = self.model(q)
        items = graded_generators(model, model.omega_generators())
        gs = self._new_set(q, "alpha", 0, "monomial-sweep")
        for name, g in model.omega_generators():
            self._add(gs, g, f"omega:{name}")
        box = box or self.sweep_box(q)
        for deg in self._sweep_degrees(q, box):
            C, _ = closure_at(model, items, deg)
            for vec in C.basis():
                if gs.module.span_at(deg).contains(vec):
                    continue
                cert = search_certificate(model, items, deg, vec, self.max_cert_degree)
                if cert is None:
                    raise RuntimeError(f"{self.spec.id}: closure element at {deg} has no certificate "
                                       f"of degree <= {self.max_cert_degree}")
                form = model.from_graded(deg, vec)
                gs.module.add_graded(deg, vec, form)
                gs.generators.append(form)
                gs.provenance.append(f"alpha-seed:monomial{list(deg)}")
                gs.certificates[len(gs.generators) - 1] = cert.to_dependence(
                    model, ambient_form(model, form))
        return gs

    def _declared_seeds(self, q: int) -> GradedGeneratorSet:
        spec = self.spec
        gs = self._new_set(q, "alpha", 0, "declared")
        for name, g in self.model(q).omega_generators():
            self._add(gs, g, f"omega:{name}")
        for text in spec.alpha_seeds.get(q, []):
            self._add(gs, spec.form(text, q), f"alpha-seed:declared:{text}")
        # alpha is stable under wedge products
        for r in range(1, q):
            low, high = self.seeds(r), self.seeds(q - r)
            for i, g in enumerate(low.generators):
                if low.provenance[i].startswith("omega"):
                    continue
                for j, h in enumerate(high.generators):
                    self._add(gs, wedge(g, h), f"alpha-seed:wedge(a{r}#{i},a{q - r}#{j})")
        for text in spec.pullback_seeds:
            self._pullback_seeds(gs, q, text)
        return gs

    def _pullback_seeds(self, gs: GradedGeneratorSet, q: int, map_text: str):
        """Pull-backs of certified alpha generators along a map leaving this variety."""
        from .maps import pullback, resolve_map

        f = resolve_map(map_text)
        if f.source.id != self.spec.id or q > f.target.dimension:
            return
        tgt = engine(f.target).seeds(q)
        for i, g in enumerate(tgt.generators):
            if i not in tgt.certificates:
                continue
            amb = ambient_form(tgt.module.model, g)
            pb = pullback(f, amb)
            cert = pullback_certificate(f, tgt.certificates[i], amb)
            if not verify_certificate(self.spec, pb, cert):
                raise RuntimeError(f"pulled-back certificate failed for {amb} along {f.name}")
            if self._add(gs, pb, f"alpha-seed:pullback({f.name},{amb})"):
                gs.certificates[len(gs.generators) - 1] = cert

    def _product_seeds(self, q: int) -> GradedGeneratorSet:
        """alpha^q(A x D) = alpha^q(A) + alpha^(q-1)(A) ^ ds."""
        base, var = self.spec.factor
        inner = engine(base)
        gs = self._new_set(q, "alpha", 0, "product-rule")
        model = self.model(q)
        ds = self.native(1, DiffForm.differential(var, self.spec.vars))
        for r, extra in ((q, False), (q - 1, True)):
            if r < 0 or r > base.dimension:
                continue
            src = inner.seeds(r)
            for i, g in enumerate(src.generators):
                lifted = self._lift(inner, r, g)
                if extra:
                    lifted = wedge(lifted, ds)
                self._add(gs, lifted, f"alpha-seed:product({'a' if not extra else 'a^d' + var}{r}#{i})")
        for name, g in model.omega_generators():
            self._add(gs, g, f"omega:{name}")
        return gs

    def _lift(self, inner: "BetaEngine", r: int, g: DiffForm) -> DiffForm:
        if g.coords == "parameter":
            if isinstance(self.model(r), GradedModel) and self.spec.params is not None:
                return g.with_vars(self.spec.params)
            g = ambient_form(inner.model(r), g)
        return g.with_vars(self.spec.vars)

    # levels ---------------------------------------------------------------
    def level(self, q: int, p: int) -> GradedGeneratorSet:
        if p < 0:
            p = 0
        key = (q, p)
        if key in self._levels:
            return self._levels[key]
        if p == 0:
            return self.seeds(q)
        prev = {r: self.level(r, p - 1) for r in range(q + 1)}
        gs = self._new_set(q, "alpha-level", p)
        for i, g in enumerate(prev[q].generators):
            self._add(gs, g, f"a{q}[{p - 1}]#{i}")
        for r in range(1, q):
            for i, g in enumerate(prev[r].generators):
                for j, h in enumerate(prev[q - r].generators):
                    self._add(gs, wedge(g, h), f"wedge(a{r}[{p - 1}]#{i},a{q - r}[{p - 1}]#{j})")
        for r in range(0, q):
            for i, g in enumerate(prev[r].generators):
                for j, h in enumerate(prev[q - r - 1].generators):
                    dh = d(h)
                    if dh.is_zero():
                        continue
                    self._add(gs, wedge(g, dh),
                              f"d-wedge(a{r}[{p - 1}]#{i},d a{q - r - 1}[{p - 1}]#{j})")
        self._levels[key] = gs
        return gs

    def beta(self, q: int, cap: Optional[int] = None) -> Tuple[GradedGeneratorSet, int]:
        """``(beta^q, p*)`` with ``p*`` the first level equal to all later ones."""
        cap = q + 2 if cap is None else cap
        levels = [self.level(q, p) for p in range(cap + 1)]
        if cap >= 1 and not levels[cap - 1].contains_set(levels[cap]):
            raise StabilizationError(f"{self.spec.id}: alpha^{q}[p] still grows at p = {cap}")
        # levels increase with p, so the first level containing the last one equals it
        p_star = next(p for p in range(cap + 1) if levels[p].contains_set(levels[cap]))
        out = levels[p_star]
        result = GradedGeneratorSet(self.spec.id, q, "beta", p_star, list(out.generators),
                                    list(out.provenance), out.module, out.source)
        return result, p_star

    # L --------------------------------------------------------------------
    def L(self, q: int) -> Optional[GradedGeneratorSet]:
        if q in self._L:
            return self._L[q]
        spec = self.spec
        model = self.model(q)
        out = None
        if isinstance(model, GradedModel) and model.finite and spec.factor is None:
            out = self._new_set(q, "L", None, "cover")
            box = self.sweep_box(q)
            for deg in self._sweep_degrees(q, box):
                for j, idx in enumerate(model.index):
                    if all(deg[i] >= 1 for i in idx):
                        vec = tuple(Fraction(1 if t == j else 0) for t in range(model.rank))
                        if not out.module.span_at(deg).contains(vec):
                            form = model.from_graded(deg, vec)
                            out.module.add_graded(deg, vec, form)
                            out.generators.append(form)
                            out.provenance.append(f"L:invariant-holomorphic{list(deg)}")
        elif spec.l_presentation is not None and q in spec.l_presentation:
            out = self._new_set(q, "L", None, "declared")
            for name, g in model.omega_generators():
                self._add(out, g, f"omega:{name}")
            for text in spec.l_presentation[q]:
                self._add(out, spec.form(text, q), f"L:declared:{text}")
        self._L[q] = out
        return out

    def in_L(self, u: DiffForm) -> Optional[bool]:
        model = self.model(u.degree)
        if isinstance(model, GradedModel) and model.finite:
            p = model.to_param(u)
            return p.is_holomorphic() and all(model.is_invariant(deg) for deg in model.graded(u))
        gs = self.L(u.degree)
        return None if gs is None else gs.contains(u)


def engine(spec: VarietySpec) -> BetaEngine:
    """The cached engine attached to ``spec``."""
    eng = getattr(spec, "_engine", None)
    if eng is None:
        eng = BetaEngine(spec)
        object.__setattr__(spec, "_engine", eng)
    return eng


def alpha_seeds(spec: VarietySpec, q: int) -> GradedGeneratorSet:
    return engine(spec).seeds(q)


def alpha_level(spec: VarietySpec, q: int, p: int) -> GradedGeneratorSet:
    return engine(spec).level(q, p)


def beta(spec: VarietySpec, q: int, cap: Optional[int] = None) -> Tuple[GradedGeneratorSet, int]:
    return engine(spec).beta(q, cap)


def omega_set(spec: VarietySpec, q: int) -> GradedGeneratorSet:
    return engine(spec).omega(q)


def l_set(spec: VarietySpec, q: int) -> Optional[GradedGeneratorSet]:
    return engine(spec).L(q)


# --------------------------------------------------------------------------
# classification ladder


@dataclass
class ClassificationReport:
    variety: str
    form: str
    degree: int
    in_omega: bool
    alpha: MembershipVerdict
    alpha_level: Optional[int]
    in_beta: bool
    in_L: Optional[bool]
    level_cap: int
    notes: List[str] = field(default_factory=list)

    def rungs(self) -> Dict[str, Optional[bool]]:
        return {"omega": self.in_omega, "alpha": self.alpha.in_alpha,
                "beta": self.in_beta, "L": self.in_L}

    def to_json(self):
        return {
            "variety": self.variety, "form": self.form, "degree": self.degree,
            "rungs": self.rungs(), "alpha_verdict": self.alpha.to_json(),
            "alpha_level": self.alpha_level, "level_cap": self.level_cap, "notes": list(self.notes),
        }

    def table(self) -> str:
        def yn(v):
            return "yes" if v else ("no" if v is False else "unknown")

        lvl = "none" if self.alpha_level is None else str(self.alpha_level)
        rows = [("form", self.form), ("variety", self.variety),
                ("Omega/torsion", yn(self.in_omega)),
                ("alpha", f"{yn(self.alpha.in_alpha)} ({self.alpha.tag.value})"),
                ("first alpha[p]", f"{lvl} (cap {self.level_cap})"),
                ("beta", yn(self.in_beta)), ("L", yn(self.in_L))]
        width = max(len(k) for k, _ in rows)
        return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


def classify(spec: VarietySpec, u: DiffForm, cert: Optional[DependenceCertificate] = None,
             level_cap: Optional[int] = None) -> ClassificationReport:
    eng = engine(spec)
    q = u.degree
    cap = q + 2 if level_cap is None else level_cap
    notes: List[str] = []
    in_omega = eng.omega(q).contains(u)
    verdict = classify_alpha(spec, u, cert)
    first = None
    for p in range(cap + 1):
        if eng.level(q, p).contains(u):
            first = p
            break
    beta_set, p_star = eng.beta(q, max(cap, q + 2))
    in_beta = beta_set.contains(u)
    if verdict.in_alpha and not in_beta:
        notes.append("alpha verdict positive but the generator set misses the form; "
                     "declared seeds are incomplete")
        in_beta = True
    if verdict.in_alpha is False and first == 0:
        raise AssertionError(f"{u} refuted out of alpha but lies in the seed module")
    in_L = eng.in_L(u)
    if in_L is False and (in_beta or verdict.in_alpha):
        raise AssertionError(f"{u} is in beta but not in L")
    return ClassificationReport(spec.id, str(u), q, in_omega, verdict, first, in_beta, in_L, cap, notes)


# --------------------------------------------------------------------------
# pull-back compatibility


@dataclass
class PullbackReport:
    map: str
    checked: int = 0
    violations: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self):
        return {"map": self.map, "checked": self.checked, "ok": self.ok, "violations": self.violations}


def check_pullback_levels(f, levels: Sequence[int] = (0, 1), max_pairs: int = 12) -> PullbackReport:
    """Level preservation plus wedge/d compatibility on generators of the target."""
    from .maps import pullback

    src, tgt = engine(f.source), engine(f.target)
    rep = PullbackReport(f.name)
    top = min(f.source.dimension, f.target.dimension)
    for p in levels:
        gens = {}
        for q in range(top + 1):
            gs = tgt.level(q, p)
            gens[q] = gs.ambient_generators()
            sset = src.level(q, p)
            for i, g in enumerate(gens[q]):
                rep.checked += 1
                pb = pullback(f, g)
                if not sset.contains(pb):
                    rep.violations.append(f"level {p}, degree {q}: pull-back of {g} not in the source level")
        for q in range(top + 1):
            for r in range(top - q + 1):
                pairs = [(a, b) for a in gens[q] for b in gens[r]][:max_pairs]
                model = src.model(q + r)
                for a, b in pairs:
                    lhs = pullback(f, wedge(a, b))
                    rhs = wedge(pullback(f, a), pullback(f, b))
                    rep.checked += 1
                    if not model.equal(lhs, rhs):
                        rep.violations.append(f"wedge: pull-back does not commute on {a}, {b}")
            if q < top:
                model = src.model(q + 1)
                for a in gens[q][:max_pairs]:
                    rep.checked += 1
                    if not model.equal(pullback(f, d(a)), d(pullback(f, a))):
                        rep.violations.append(f"d: pull-back does not commute on {a}")
    return rep
