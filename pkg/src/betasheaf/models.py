"""Concrete models of the torsion-free sheaves Omega^q / torsion.

Two models are provided.

``GradedModel``
    For varieties with a monomial chart (a finite monomial parametrization or a
    Laurent torus chart).  Forms are pulled back to the chart and written in
    the logarithmic frame ``t^u dt_J / t_J``; every module we meet is spanned
    by torus-homogeneous elements, so membership splits into linear algebra
    per multidegree ``u``.

``AmbientModel``
    For any hypersurface with a variable ``e`` whose partial derivative is a
    monomial: ``d(e)`` is eliminated through ``df = 0`` and forms become
    vectors of meromorphic functions in the remaining frame.  Membership is a
    module Groebner basis computation modulo the defining equation.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product as iproduct
from typing import Dict, List, Optional, Sequence, Tuple

from .forms import DiffForm, pullback_form, wedge
from .groebner import ModuleBasis
from .linalg import Span
from .poly import MeroFunction, Polynomial
from .varieties import VarietySpec

__all__ = [
    "NotHomogeneous",
    "GradedModel",
    "AmbientModel",
    "TorsionFreePresentation",
    "omega_torsionfree",
    "model_for",
]

Graded = Dict[Tuple[int, ...], Tuple[Fraction, ...]]


class NotHomogeneous(ValueError):
    """A module generator is not torus-homogeneous."""


def _basis_name(vars, idx) -> str:
    return "^".join("d" + vars[i] for i in idx) if idx else "1"


# --------------------------------------------------------------------------
# graded model


class GradedModel:
    kind = "graded"

    def __init__(self, spec: VarietySpec, q: int):
        chart = spec.chart
        if chart is None:
            raise ValueError(f"{spec.id} has no monomial chart")
        if q < 0 or q > spec.dimension:
            raise ValueError(f"degree {q} exceeds the dimension of {spec.id}")
        self.spec, self.q = spec, q
        self.params, self.images = chart
        self.n = len(self.params)
        if self.n != spec.dimension:
            raise ValueError(f"{spec.id}: chart dimension differs from the variety dimension")
        self.exps: List[Tuple[int, ...]] = []
        self.coeffs: List[Fraction] = []
        for img in self.images:
            terms = img.laurent_terms()
            if len(terms) != 1:
                raise ValueError(f"{spec.id}: chart component {img} is not a monomial")
            (e, c), = terms.items()
            self.exps.append(e)
            self.coeffs.append(c)
        self.index = list(combinations(range(self.n), q))
        self.rank = len(self.index)
        self.finite = spec.parametrization is not None
        self._weight = self._positive_weight()
        self._semigroup = lru_cache(maxsize=None)(self._in_semigroup)

    # conversions ----------------------------------------------------------
    def to_param(self, u: DiffForm) -> DiffForm:
        if u.coords == "parameter":
            return u
        if u.vars != self.spec.vars:
            raise ValueError(f"form on {u.vars} does not live on {self.spec.id}")
        return pullback_form(u, self.images, self.params, coords="parameter")

    def graded(self, u: DiffForm) -> Graded:
        """Decompose into ``{u: vector in the log frame}``."""
        p = self.to_param(u)
        if p.degree != self.q:
            raise ValueError(f"expected a {self.q}-form, got degree {p.degree}")
        out: Dict[Tuple[int, ...], List[Fraction]] = {}
        for j, idx in enumerate(self.index):
            c = p.components.get(idx)
            if c is None:
                continue
            for s, coeff in c.laurent_terms().items():
                deg = tuple(a + (1 if i in idx else 0) for i, a in enumerate(s))
                vec = out.setdefault(deg, [Fraction(0)] * self.rank)
                vec[j] += coeff
        return {k: tuple(v) for k, v in out.items() if any(v)}

    def from_graded(self, deg, vec) -> DiffForm:
        comps = {}
        for e, idx in zip(vec, self.index):
            if e:
                s = tuple(a - (1 if i in idx else 0) for i, a in enumerate(deg))
                comps[idx] = MeroFunction.laurent_monomial(s, self.params, e)
        return DiffForm(self.params, self.q, comps, "parameter")

    def homogeneous(self, u: DiffForm):
        g = self.graded(u)
        if len(g) != 1:
            raise NotHomogeneous(f"{u} is not torus-homogeneous")
        (deg, vec), = g.items()
        return deg, vec

    # semigroup of the coordinate ring -------------------------------------
    def _positive_weight(self):
        bound = max(max(abs(x) for x in e) for e in self.exps) + 2
        for lam in iproduct(range(1, bound + 1), repeat=self.n):
            if all(sum(a * b for a, b in zip(lam, e)) > 0 for e in self.exps):
                return lam
        raise ValueError(f"{self.spec.id}: chart exponents do not span a pointed cone")

    def weight(self, s) -> int:
        return sum(a * b for a, b in zip(self._weight, s))

    def _in_semigroup(self, s: Tuple[int, ...]) -> bool:
        if not any(s):
            return True
        if self.weight(s) <= 0:
            return False
        for e in self.exps:
            if self._semigroup(tuple(a - b for a, b in zip(s, e))):
                return True
        return False

    def in_semigroup(self, s) -> bool:
        return self._semigroup(tuple(s))

    def is_invariant(self, deg) -> bool:
        if self.spec.deck is None:
            return True
        return self.spec.deck.is_invariant(deg)

    # predicates -----------------------------------------------------------
    def is_zero(self, u: DiffForm) -> bool:
        return self.to_param(u).is_zero()

    def equal(self, u: DiffForm, v: DiffForm) -> bool:
        return self.to_param(u) == self.to_param(v)

    def holomorphic_on_cover(self, u: DiffForm) -> bool:
        if not self.finite:
            raise ValueError(f"{self.spec.id}: the chart is not a finite cover")
        return self.to_param(u).is_holomorphic()

    def module(self, gens: Sequence[DiffForm] = ()) -> "GradedModule":
        return GradedModule(self, gens)

    # presentation ---------------------------------------------------------
    def omega_generators(self) -> List[Tuple[str, DiffForm]]:
        vars = self.spec.vars
        out = []
        for idx in combinations(range(len(vars)), self.q):
            form = DiffForm(vars, self.q, {idx: 1}) if self.q else DiffForm.function(1, vars)
            if not self.is_zero(form):
                out.append((_basis_name(vars, idx), form))
        return out

    # ambient display --------------------------------------------------------
    def _inverse_charts(self):
        """All invertible square minors of the chart exponents, with inverses."""
        got = getattr(self, "_invs", None)
        if got is not None:
            return got
        from sympy import Matrix

        out = []
        for B in combinations(range(len(self.exps)), self.n):
            M = Matrix([[self.exps[j][i] for j in B] for i in range(self.n)])
            if M.det() != 0:
                inv = M.inv()
                out.append((B, [[Fraction(int(inv[i, j].p), int(inv[i, j].q)) for j in range(self.n)]
                                for i in range(self.n)]))
        if not out:
            raise ValueError(f"{self.spec.id}: chart exponents have no invertible minor")
        self._invs = out
        return out

    def _monomial_lifts(self, deg, chart=None, limit: int = 24):
        """Ambient exponent vectors pulling back to ``t^deg`` (up to scale)."""
        B, inv = chart or self._inverse_charts()[0]
        W = [j for j in range(len(self.exps)) if j not in B]
        bound = max(max(abs(x) for x in e) for e in self.exps) * 2 + 2
        out = []
        for nW in iproduct(range(bound), repeat=len(W)):
            rest = list(deg)
            for j, k in zip(W, nW):
                rest = [a - k * b for a, b in zip(rest, self.exps[j])]
            nB = [sum(inv[i][c] * rest[c] for c in range(self.n)) for i in range(self.n)]
            if any(x.denominator != 1 for x in nB):
                continue
            cand = dict(zip(W, nW))
            cand.update({j: int(x) for j, x in zip(B, nB)})
            out.append([cand.get(j, 0) for j in range(len(self.spec.vars))])
            if len(out) >= limit:
                break
        if not out:
            raise ValueError(f"multidegree {deg} is not in the chart lattice")
        return out

    def _lift(self, exps) -> MeroFunction:
        scale = Fraction(1)
        for j, k in enumerate(exps):
            scale /= self.coeffs[j] ** k
        return MeroFunction.laurent_monomial(exps, self.spec.vars, scale)

    def ambient_monomial(self, deg) -> MeroFunction:
        """An ambient Laurent monomial pulling back to ``t^deg``."""
        lifts = [e for ch in self._inverse_charts() for e in self._monomial_lifts(deg, ch)]
        best = next((e for e in lifts if all(k >= 0 for k in e)), lifts[0])
        return _prefer_poles(self._lift(best), self.spec)

    def _log_frame(self, chart):
        B, inv = chart
        vars = self.spec.vars
        # dxi_j / xi_j = sum_i exps[j][i] eps_i, so eps_i = sum_c inv[c][i] dxi_{B_c} / xi_{B_c}
        eps = []
        for i in range(self.n):
            comps = {}
            for c, j in enumerate(B):
                if inv[c][i]:
                    comps[(j,)] = MeroFunction.laurent_monomial(
                        [-1 if t == j else 0 for t in range(len(vars))], vars, inv[c][i])
            eps.append(DiffForm(vars, 1, comps))
        return eps

    def to_ambient(self, deg, vec) -> DiffForm:
        """Ambient meromorphic form whose chart pull-back is ``(deg, vec)``.

        Several monomial lifts are tried; the one with the fewest
        denominators outside the pole variables is kept.
        """
        vars = self.spec.vars
        pole = {vars.index(v) for v in self.spec.pole_vars}
        best, best_key = None, None
        cands = [(ch, e) for ch in self._inverse_charts() for e in self._monomial_lifts(deg, ch)]
        for chart, exps in cands:
            eps = self._log_frame(chart)
            mono = self._lift(exps)
            total = DiffForm.zero(vars, self.q)
            for e, idx in zip(vec, self.index):
                if not e:
                    continue
                piece = DiffForm.function(mono * e, vars)
                for i in idx:
                    piece = wedge(piece, eps[i])
                total = total + piece
            total = total.map_coefficients(lambda c: _prefer_poles(c, self.spec))
            if self.graded(total) != {tuple(deg): tuple(vec)}:
                raise AssertionError(f"ambient lift of {deg} does not pull back correctly")
            cs = list(total.components.values())
            key = (sum(k for c in cs for i, k in enumerate(c.den) if i not in pole),
                   sum(sum(c.den) for c in cs), sum(len(c.num.terms) for c in cs), str(total))
            if best_key is None or key < best_key:
                best, best_key = total, key
        return best


class GradedModule:
    """Module over the coordinate ring spanned by homogeneous generators."""

    def __init__(self, model: GradedModel, gens: Sequence[DiffForm] = ()):
        self.model = model
        self.items: List[Tuple[Tuple[int, ...], Tuple[Fraction, ...]]] = []
        self.generators: List[DiffForm] = []
        self._cache: Dict[Tuple[int, ...], Span] = {}
        for g in gens:
            self.add(g)

    def span_at(self, deg) -> Span:
        got = self._cache.get(deg)
        if got is None:
            rows = [e for (ug, e) in self.items
                    if self.model.in_semigroup(tuple(a - b for a, b in zip(deg, ug)))]
            got = Span(self.model.rank, rows)
            self._cache[deg] = got
        return got

    def contains_graded(self, g: Graded) -> bool:
        return all(self.span_at(deg).contains(vec) for deg, vec in g.items())

    def contains(self, u: DiffForm) -> bool:
        return self.contains_graded(self.model.graded(u))

    def add(self, u: DiffForm) -> bool:
        g = self.model.graded(u)
        if not g:
            return False
        if len(g) != 1:
            raise NotHomogeneous(f"generator {u} is not torus-homogeneous")
        if self.contains_graded(g):
            return False
        (deg, vec), = g.items()
        self.items.append((deg, vec))
        self.generators.append(u)
        self._cache.clear()
        return True

    def add_graded(self, deg, vec, form: Optional[DiffForm] = None) -> bool:
        if self.span_at(tuple(deg)).contains(vec):
            return False
        self.items.append((tuple(deg), tuple(vec)))
        self.generators.append(form if form is not None else self.model.from_graded(deg, vec))
        self._cache.clear()
        return True

    def contains_module(self, other: "GradedModule") -> bool:
        return all(self.span_at(d).contains(v) for d, v in other.items)


def _prefer_poles(f: MeroFunction, spec: VarietySpec) -> MeroFunction:
    """Move denominators onto the pole variables using a binomial equation."""
    if len(spec.equations) != 1 or len(spec.equations[0].terms) != 2 or f.is_zero():
        return f
    vars = f.vars
    if vars != spec.vars:
        return f
    (t1, c1), (t2, c2) = spec.equations[0].terms.items()
    pole = {vars.index(v) for v in spec.pole_vars}
    for _ in range(64):
        bad = [i for i, k in enumerate(f.den) if k and i not in pole]
        if not bad:
            break
        i = bad[0]
        for (ta, ca), (tb, cb) in (((t1, c1), (t2, c2)), ((t2, c2), (t1, c1))):
            if ta[i] and all(tb[j] == 0 or j in pole for j in range(len(vars))):
                # ca*ta + cb*tb = 0 on X, so 1/x_i = (ta/x_i) / (-(cb/ca) tb)
                up = list(ta)
                up[i] -= 1
                num = MeroFunction.laurent_monomial(up, vars)
                den = MeroFunction.laurent_monomial(tb, vars, -cb / ca)
                xi = MeroFunction.laurent_monomial([1 if j == i else 0 for j in range(len(vars))], vars)
                f = (f * xi) * num / den
                break
        else:
            break
    return f


# --------------------------------------------------------------------------
# ambient model


class AmbientModel:
    kind = "ambient"

    def __init__(self, spec: VarietySpec, q: int):
        if len(spec.equations) > 1:
            raise ValueError("only hypersurfaces are supported")
        if q < 0 or q > spec.dimension:
            raise ValueError(f"degree {q} exceeds the dimension of {spec.id}")
        self.spec, self.q = spec, q
        vars = spec.vars
        self.elim: Optional[int] = None
        if spec.equations:
            self.elim = self._choose_elimination(spec)
        self.frame = tuple(i for i in range(len(vars)) if i != self.elim)
        self.index = list(combinations(self.frame, q))
        self.rank = len(self.index)
        one_forms = []
        for i in range(len(vars)):
            if i != self.elim:
                one_forms.append(DiffForm(vars, 1, {(i,): 1}))
                continue
            f = spec.equations[0]
            de = MeroFunction(f.diff(i))
            comps = {(j,): -MeroFunction(f.diff(j)) / de for j in self.frame if not f.diff(j).is_zero()}
            one_forms.append(DiffForm(vars, 1, comps))
        self._one_forms = one_forms

    @staticmethod
    def _choose_elimination(spec: VarietySpec) -> int:
        f = spec.equations[0]
        cands = []
        for i, v in enumerate(spec.vars):
            g = f.diff(i)
            if g.is_zero() or not g.is_monomial():
                continue
            (e, _), = g.terms.items()
            poles_ok = all(k == 0 or spec.vars[j] in spec.pole_vars for j, k in enumerate(e))
            cands.append((not poles_ok, sum(e), i))
        if not cands:
            raise ValueError(f"{spec.id}: no variable has a monomial partial derivative")
        return min(cands)[2]

    def vector(self, u: DiffForm) -> Tuple[MeroFunction, ...]:
        if u.vars != self.spec.vars or u.coords != "ambient":
            raise ValueError(f"form does not live on {self.spec.id}")
        if u.degree != self.q:
            raise ValueError(f"expected a {self.q}-form, got degree {u.degree}")
        vars = self.spec.vars
        total = DiffForm.zero(vars, self.q)
        for idx, c in u.components.items():
            piece = DiffForm.function(c, vars)
            for i in idx:
                piece = wedge(piece, self._one_forms[i])
            total = total + piece
        return tuple(self.spec.reduce(total.coefficient(idx)) for idx in self.index)

    def is_zero(self, u: DiffForm) -> bool:
        return all(c.is_zero() for c in self.vector(u))

    def equal(self, u: DiffForm, v: DiffForm) -> bool:
        return self.is_zero(u - v)

    def module(self, gens: Sequence[DiffForm] = ()) -> "AmbientModule":
        return AmbientModule(self, gens)

    def omega_generators(self) -> List[Tuple[str, DiffForm]]:
        vars = self.spec.vars
        out = []
        for idx in combinations(range(len(vars)), self.q):
            form = DiffForm(vars, self.q, {idx: 1}) if self.q else DiffForm.function(1, vars)
            out.append((_basis_name(vars, idx), form))
        return out

    def from_vector(self, vec) -> DiffForm:
        return DiffForm(self.spec.vars, self.q, {idx: c for idx, c in zip(self.index, vec)})


class AmbientModule:
    """Submodule of the generic frame; Groebner basis after clearing denominators."""

    def __init__(self, model: AmbientModel, gens: Sequence[DiffForm] = ()):
        self.model = model
        self.vectors: List[Tuple[MeroFunction, ...]] = []
        self.generators: List[DiffForm] = []
        self.den = (0,) * len(model.spec.vars)
        self._basis: Optional[ModuleBasis] = None
        for g in gens:
            self.add(g)

    def _scaled(self, vec) -> List[Polynomial]:
        out = []
        for c in vec:
            shift = tuple(a - b for a, b in zip(self.den, c.den))
            p = c.num.mul_term(shift, Fraction(1))
            out.append(self.model.spec.reduce(MeroFunction(p)).num)
        return out

    def _ensure(self, extra=()):
        den = self.den
        for vec in list(self.vectors) + list(extra):
            for c in vec:
                den = tuple(max(a, b) for a, b in zip(den, c.den))
        if den != self.den or self._basis is None:
            self.den = den
            spec = self.model.spec
            rel = []
            if spec.equations:
                for j in range(self.model.rank):
                    rel.append([spec.equations[0] if i == j else Polynomial.zero(spec.vars)
                                for i in range(self.model.rank)])
            mb = ModuleBasis(self.model.rank, spec.vars, "degrevlex")
            for r in rel:
                mb.add(r)
            for vec in self.vectors:
                mb.add(self._scaled(vec))
            self._basis = mb

    def contains_vector(self, vec) -> bool:
        if all(c.is_zero() for c in vec):
            return True
        self._ensure([vec])
        return self._basis.contains(self._scaled(vec))

    def contains(self, u: DiffForm) -> bool:
        return self.contains_vector(self.model.vector(u))

    def add(self, u: DiffForm) -> bool:
        vec = self.model.vector(u)
        if self.contains_vector(vec):
            return False
        self.vectors.append(vec)
        self.generators.append(u)
        self._ensure()
        self._basis.add(self._scaled(vec))
        return True

    def contains_module(self, other: "AmbientModule") -> bool:
        return all(self.contains_vector(v) for v in other.vectors)


# --------------------------------------------------------------------------


def model_for(spec: VarietySpec, q: int, prefer: Optional[str] = None):
    """Graded model when a monomial chart exists, ambient model otherwise."""
    if prefer == "ambient":
        return AmbientModel(spec, q)
    if spec.chart is not None:
        try:
            return GradedModel(spec, q)
        except ValueError:
            if prefer == "graded":
                raise
    if prefer == "graded":
        raise ValueError(f"{spec.id} has no monomial chart")
    return AmbientModel(spec, q)


@dataclass
class TorsionFreePresentation:
    variety: str
    degree: int
    coords: str
    names: Tuple[str, ...]
    generators: Tuple[DiffForm, ...]


def omega_torsionfree(spec: VarietySpec, q: int) -> TorsionFreePresentation:
    """Generators of Omega^q / torsion in the variety's canonical coordinates."""
    if q > spec.dimension:
        raise ValueError(f"degree {q} exceeds the dimension {spec.dimension} of {spec.id}")
    if spec.parametrization is not None:
        model = GradedModel(spec, q)
        gens = [(n, model.to_param(g)) for n, g in model.omega_generators()]
        return TorsionFreePresentation(spec.id, q, "parameter", tuple(n for n, _ in gens),
                                       tuple(g for _, g in gens))
    model = AmbientModel(spec, q)
    gens = [(n, g) for n, g in model.omega_generators() if not model.is_zero(g)]
    return TorsionFreePresentation(spec.id, q, "ambient", tuple(n for n, _ in gens),
                                   tuple(g for _, g in gens))
