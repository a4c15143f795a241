"""Registered singular spaces and their metadata."""
from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .forms import DiffForm
from .grammar import parse_form
from .groebner import IdealPresentation
from .poly import MeroFunction, Polynomial
from .templates import expand

__all__ = [
    "DeckGroup",
    "VarietySpec",
    "VarietyError",
    "builtin",
    "product",
    "rename",
    "affine",
    "curve35",
    "surface_S",
    "threefold_M",
    "fermat",
    "resolve_variety",
]


class VarietyError(ValueError):
    """Invalid variety name, parameter or inconsistent data."""


@dataclass(frozen=True)
class DeckGroup:
    """Diagonal action ``t_i -> zeta^{w_i} t_i`` of the k-th roots of unity."""

    order: int
    weights: Tuple[int, ...]

    def character(self, exponent: Sequence[int]) -> int:
        return sum(w * e for w, e in zip(self.weights, exponent)) % self.order

    def is_invariant(self, exponent: Sequence[int]) -> bool:
        return self.character(exponent) == 0


@dataclass
class VarietySpec:
    """A hypersurface (or smooth affine space) with the data the engine needs.

    Forms attached to the spec (named forms, declared seeds, L-presentation,
    golden data) are stored as grammar strings and parsed on demand.
    ``torus_chart`` is a Laurent monomial birational chart used for graded
    module computations when no finite parametrization exists.
    """

    id: str
    vars: Tuple[str, ...]
    equations: Tuple[Polynomial, ...]
    dimension: int
    singular: Tuple[Polynomial, ...] = ()
    params: Optional[Tuple[str, ...]] = None
    parametrization: Optional[Tuple[Polynomial, ...]] = None
    torus_chart: Optional[Tuple[MeroFunction, ...]] = None
    chart_params: Optional[Tuple[str, ...]] = None
    deck: Optional[DeckGroup] = None
    normal: bool = False
    pole_vars: Tuple[str, ...] = ()
    constants: Dict[str, int] = field(default_factory=dict)
    named_forms: Dict[str, str] = field(default_factory=dict)
    alpha_seeds: Dict[int, List[str]] = field(default_factory=dict)
    l_presentation: Optional[Dict[int, List[str]]] = None
    golden: Dict[str, object] = field(default_factory=dict)
    maps: Tuple[str, ...] = ()
    pullback_seeds: Tuple[str, ...] = ()
    factor: Optional[Tuple["VarietySpec", str]] = None

    # parsing helpers ------------------------------------------------------
    def form(self, text: str, degree: Optional[int] = None) -> DiffForm:
        """Parse ``text`` (templates expanded with the spec constants)."""
        return parse_form(expand(text, self.constants), self.vars, self.pole_vars, "ambient", degree)

    def named(self, name: str) -> DiffForm:
        if name not in self.named_forms:
            raise VarietyError(f"{self.id} has no named form {name!r}")
        return self.form(self.named_forms[name])

    def param_form(self, text: str, degree: Optional[int] = None) -> DiffForm:
        if self.params is None:
            raise VarietyError(f"{self.id} has no parametrization")
        return parse_form(expand(text, self.constants), self.params, self.params, "parameter", degree)

    def function(self, text: str) -> MeroFunction:
        return self.form(text, 0).coefficient(())

    @property
    def ideal(self) -> IdealPresentation:
        got = getattr(self, "_ideal", None)
        if got is None:
            got = IdealPresentation(self.equations)
            object.__setattr__(self, "_ideal", got)
        return got

    @property
    def chart(self) -> Optional[Tuple[Tuple[str, ...], Tuple[MeroFunction, ...]]]:
        """Monomial chart used by the graded model: finite cover or torus chart."""
        if self.parametrization is not None and self.params is not None:
            return self.params, tuple(MeroFunction(p) for p in self.parametrization)
        if self.torus_chart is not None:
            return self.chart_params, self.torus_chart
        return None

    @property
    def ambient_dim(self) -> int:
        return len(self.vars)

    def is_smooth_space(self) -> bool:
        return not self.equations

    def reduce(self, f: MeroFunction) -> MeroFunction:
        """Numerator normal form modulo the defining ideal."""
        if not self.equations:
            return f
        return MeroFunction(self.ideal.normal_form(f.num), f.den)

    def reduce_form(self, u: DiffForm) -> DiffForm:
        return u.map_coefficients(self.reduce)

    # consistency ----------------------------------------------------------
    def validate(self) -> "VarietySpec":
        for f in self.equations:
            if f.vars != self.vars:
                raise VarietyError(f"{self.id}: equation {f} uses other variables")
        if self.parametrization is not None:
            if len(self.parametrization) != len(self.vars):
                raise VarietyError(f"{self.id}: parametrization needs one component per variable")
            for f in self.equations:
                img = f.substitute(list(self.parametrization), self.params)
                if not img.is_zero():
                    raise VarietyError(
                        f"{self.id}: parametrization does not satisfy the equation {f} "
                        f"(residual {img})")
            if self._jacobian_rank(self.parametrization, self.params) != self.dimension:
                raise VarietyError(f"{self.id}: parametrization is not generically finite")
            if self.deck is not None:
                for comp in self.parametrization:
                    for e in comp.terms:
                        if not self.deck.is_invariant(e):
                            raise VarietyError(f"{self.id}: component {comp} is not deck invariant")
        if self.torus_chart is not None:
            for f in self.equations:
                img = f.substitute(list(self.torus_chart), self.chart_params)
                if not img.is_zero():
                    raise VarietyError(f"{self.id}: torus chart violates {f}")
        return self

    @staticmethod
    def _jacobian_rank(comps, params) -> int:
        import sympy

        # a fixed rational point with distinct non-trivial coordinates
        point = [Fraction(3 + 2 * i, 5 + i) for i in range(len(params))]
        rows = [[c.diff(j).evaluate(point) for j in range(len(params))] for c in comps]
        return sympy.Matrix(rows).rank()

    def singular_generators(self) -> Tuple[Polynomial, ...]:
        if self.singular:
            return self.singular
        if not self.equations:
            return ()
        f = self.equations[0]
        return (f,) + tuple(f.diff(v) for v in self.vars)


# construction helpers -------------------------------------------------------

def _poly(text: str, vars) -> Polynomial:
    f = parse_form(text, vars, (), "ambient", 0).coefficient(())
    return f.as_polynomial()


def affine(vars: Sequence[str]) -> VarietySpec:
    vars = tuple(vars)
    ident = tuple(Polynomial.variable(v, vars) for v in vars)
    return VarietySpec(
        id="affine:" + ",".join(vars), vars=vars, equations=(), dimension=len(vars),
        params=vars, parametrization=ident, normal=True, pole_vars=(),
    ).validate()


def curve35() -> VarietySpec:
    vars, params = ("x", "y"), ("t",)
    t = Polynomial.variable("t", params)
    golden = {
        "alpha0": ["1", "y^2/x", "y^4/x^2", "y^3/x", "y^4/x"],
        "alpha1_extra": ["y^2*dy/x"],
        "beta1_level": 1,
        "beta1_stated": "y^2*dx/x^2",
        "L1_param": ["dt", "t*dt", "t^2*dt", "t^4*dt"],
        "omega0_stated": "L0 + O*y/x^2",
        "omega1_stated": "Omega1/torsion + O*dy/x^2",
    }
    return VarietySpec(
        id="curve35", vars=vars, equations=(_poly("x^3 - y^5", vars),), dimension=1,
        singular=(_poly("x", vars), _poly("y", vars)),
        params=params, parametrization=(t ** 5, t ** 3), normal=False, pole_vars=("x",),
        golden=golden,
    ).validate()


def surface_S(k: int, names: Sequence[str] = ("x", "y", "z")) -> VarietySpec:
    if not isinstance(k, int) or k < 2:
        raise VarietyError(f"S_k needs an integer k >= 2, got {k!r}")
    x, y, z = names
    vars, params = tuple(names), ("a", "b")
    a, b = Polynomial.variables(params)
    m = k // 2
    golden = {
        "alpha1_extra": [f"{x}*d{y}/{z}^{{m}}"],
        "alpha2_extra": [f"d{x}^d{y}/{z}^{{m-1}}"],
        "beta2_extra": [f"d{x}^d{y}/{z}^{{m}}"],
        "L2_extra": [f"d{x}^d{y}/{z}^{{k-1}}"],
        "not_L2": [f"d{x}^d{y}/{z}^{{k}}"],
    }
    return VarietySpec(
        id=f"S:{k}" if tuple(names) == ("x", "y", "z") else f"S:{k}[{','.join(names)}]",
        vars=vars, equations=(_poly(f"{x}*{y} - {z}^{k}", vars),), dimension=2,
        singular=tuple(Polynomial.variable(v, vars) for v in vars),
        params=params, parametrization=(a ** k, b ** k, a * b),
        deck=DeckGroup(k, (1, k - 1)), normal=True, pole_vars=(z,),
        constants={"k": k, "m": m},
        named_forms={"omega": f"{x}*d{y}/{z}^{{m}}"},
        golden=golden,
    ).validate()


def threefold_M(k: int) -> VarietySpec:
    if not isinstance(k, int) or k < 1:
        raise VarietyError(f"M_k needs an integer k >= 1, got {k!r}")
    vars = ("x", "y", "u", "v")
    chart_params = ("a", "b", "c")
    a, b, c = (MeroFunction(p) for p in Polynomial.variables(chart_params))
    m = k // 2
    return VarietySpec(
        id=f"M:{k}", vars=vars, equations=(_poly(f"x*y - u^{k}*v", vars),), dimension=3,
        singular=tuple(Polynomial.variable(v, vars) for v in ("x", "y", "u")),
        torus_chart=(a, b, c, a * b / c ** k), chart_params=chart_params,
        normal=True, pole_vars=("u",), constants={"k": k, "m": m},
        named_forms={"omega_m": "x*dy/u^{m}", "w": "x*dy^dv/u^{m}"},
        alpha_seeds={1: ["x*dy/u^{m}", "y*dx/u^{m}"]},
        maps=("slice_v1", "pi"),
    ).validate()


def fermat(n: int) -> VarietySpec:
    if not isinstance(n, int) or n < 3:
        raise VarietyError(f"Fermat surfaces need an integer n >= 3, got {n!r}")
    vars = ("a", "b", "z")
    p = n // 2
    if n % 2 == 0:
        extra = ["(a*b)^{p}*da^db/z^{2*p-1}", "(a*b)^{p-1}*da^db/z^{p-1}"]
    else:
        extra = ["(a*b)^{p}*da^db/z^{2*p}"]
    return VarietySpec(
        id=f"Fermat:{n}", vars=vars, equations=(_poly(f"a^{n} - b^{n} - z^{n}", vars),),
        dimension=2, singular=tuple(Polynomial.variable(v, vars) for v in vars),
        normal=True, pole_vars=("z",), constants={"n": n, "p": p},
        alpha_seeds={2: extra}, golden={"alpha2_extra": list(extra)},
        pullback_seeds=(f"fermat:{p}",) if n % 2 == 0 else (),
    ).validate()


def _lift_poly(f: Polynomial, vars) -> Polynomial:
    return f.with_vars(vars)


def product(spec: VarietySpec, var: str) -> VarietySpec:
    """``spec`` times a disc with coordinate ``var``."""
    if var in spec.vars or (spec.params and var in spec.params) or (
            spec.chart_params and var in spec.chart_params):
        raise VarietyError(f"variable {var!r} already used by {spec.id}")
    vars = spec.vars + (var,)
    params = spec.params + (var,) if spec.params is not None else None
    parametrization = None
    if spec.parametrization is not None:
        parametrization = tuple(c.with_vars(params) for c in spec.parametrization)
        parametrization += (Polynomial.variable(var, params),)
    chart_params = torus = None
    if spec.torus_chart is not None:
        chart_params = spec.chart_params + (var,)
        torus = tuple(c.with_vars(chart_params) for c in spec.torus_chart)
        torus += (MeroFunction(Polynomial.variable(var, chart_params)),)
    deck = None
    if spec.deck is not None:
        deck = DeckGroup(spec.deck.order, spec.deck.weights + (0,))
    seeds = {}
    for q, gens in spec.alpha_seeds.items():
        seeds.setdefault(q, []).extend(gens)
        seeds.setdefault(q + 1, []).extend(f"({g})^d{var}" for g in gens)
    return VarietySpec(
        id=f"product({spec.id},{var})", vars=vars,
        equations=tuple(_lift_poly(f, vars) for f in spec.equations),
        dimension=spec.dimension + 1,
        singular=tuple(_lift_poly(f, vars) for f in spec.singular_generators()),
        params=params, parametrization=parametrization,
        torus_chart=torus, chart_params=chart_params, deck=deck,
        normal=spec.normal, pole_vars=spec.pole_vars, constants=dict(spec.constants),
        named_forms=dict(spec.named_forms), alpha_seeds=seeds,
        factor=(spec, var),
    ).validate()


def rename(spec: VarietySpec, mapping: Mapping[str, str], new_id: Optional[str] = None) -> VarietySpec:
    """Rename ambient variables (forms stored as text are rewritten too)."""
    vars = tuple(mapping.get(v, v) for v in spec.vars)
    if len(set(vars)) != len(vars):
        raise VarietyError("renaming produces duplicate variables")

    def ren_poly(f: Polynomial) -> Polynomial:
        return Polynomial(f.terms, vars)

    pattern = re.compile(r"\b(d?)(" + "|".join(map(re.escape, spec.vars)) + r")\b")

    def ren_text(text: str) -> str:
        return pattern.sub(lambda m: m.group(1) + mapping.get(m.group(2), m.group(2)), text)

    def ren_all(obj):
        if isinstance(obj, str):
            return ren_text(obj)
        if isinstance(obj, list):
            return [ren_all(o) for o in obj]
        if isinstance(obj, dict):
            return {k: ren_all(v) for k, v in obj.items()}
        return obj

    return replace(
        spec,
        id=new_id or f"{spec.id}[{','.join(vars)}]",
        vars=vars,
        equations=tuple(ren_poly(f) for f in spec.equations),
        singular=tuple(ren_poly(f) for f in spec.singular),
        pole_vars=tuple(mapping.get(v, v) for v in spec.pole_vars),
        named_forms=ren_all(spec.named_forms),
        alpha_seeds=ren_all(spec.alpha_seeds),
        l_presentation=ren_all(spec.l_presentation),
        golden=ren_all(spec.golden),
    ).validate()


_BUILTIN = {
    "curve35": lambda arg: curve35(),
    "S": lambda arg: surface_S(_int(arg, "S")),
    "M": lambda arg: threefold_M(_int(arg, "M")),
    "Fermat": lambda arg: fermat(_int(arg, "Fermat")),
    "affine": lambda arg: affine(arg.split(",")),
}


def _int(arg, name):
    try:
        return int(arg)
    except (TypeError, ValueError):
        raise VarietyError(f"{name} needs an integer parameter, got {arg!r}") from None


def builtin(name: str, param=None) -> VarietySpec:
    """Built-in variety by family name, e.g. ``builtin("S", 4)``."""
    if name not in _BUILTIN:
        raise VarietyError(f"unknown variety {name!r} (known: {', '.join(sorted(_BUILTIN))})")
    return _BUILTIN[name](param)


def resolve_variety(text: str) -> VarietySpec:
    """Parse identifiers such as ``S:4``, ``curve35``, ``product(S:2,w)`` or a path."""
    text = text.strip()
    if text.endswith(".variety"):
        from .varfile import load

        return load(text)
    m = re.fullmatch(r"product\((.+),\s*([A-Za-z_][A-Za-z0-9_']*)\)", text)
    if m:
        return product(resolve_variety(m.group(1)), m.group(2))
    name, _, arg = text.partition(":")
    return builtin(name, arg or None)
