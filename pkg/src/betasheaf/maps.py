"""Polynomial maps between registered varieties and pull-back of forms."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .forms import DiffForm, pullback_form
from .poly import MeroFunction, Polynomial
from .varieties import VarietyError, VarietySpec, affine, fermat, product, surface_S, threefold_M

__all__ = ["MapSpec", "MapError", "pullback", "restrict", "compose", "identity", "builtin_map",
           "BUILTIN_MAPS"]


class MapError(ValueError):
    """Invalid map data or a pull-back landing inside the pole locus."""


@dataclass
class MapSpec:
    name: str
    source: VarietySpec
    target: VarietySpec
    components: Tuple[Polynomial, ...]
    witness: Tuple[Fraction, ...]
    inclusion: bool = False

    def validate(self) -> "MapSpec":
        if len(self.components) != len(self.target.vars):
            raise MapError(f"{self.name}: need one component per target variable")
        for c in self.components:
            if c.vars != self.source.vars:
                raise MapError(f"{self.name}: component {c} not in source variables")
        for f in self.target.equations:
            img = f.substitute(list(self.components), self.source.vars)
            if self.source.equations:
                img = self.source.ideal.normal_form(img)
            if not img.is_zero():
                raise MapError(f"{self.name}: target equation {f} does not pull back to 0")
        pt = [Fraction(x) for x in self.witness]
        for f in self.source.equations:
            if f.evaluate(pt) != 0:
                raise MapError(f"{self.name}: witness point is not on {self.source.id}")
        img = [c.evaluate(pt) for c in self.components]
        sing = self.target.singular_generators()
        if sing and all(g.evaluate(img) == 0 for g in sing):
            raise MapError(f"{self.name}: witness maps into the singular locus of {self.target.id}")
        return self

    def image_point(self, point):
        return [c.evaluate(point) for c in self.components]


def pullback(f: MapSpec, u: DiffForm) -> DiffForm:
    """Pull an ambient form on ``f.target`` back to ``f.source``."""
    if u.vars != f.target.vars:
        raise MapError(f"form lives on {u.vars}, map {f.name} targets {f.target.vars}")
    try:
        out = pullback_form(u, f.components, f.source.vars)
    except ZeroDivisionError as exc:
        raise MapError(f"{f.name}: a denominator of the form pulls back to zero") from exc
    return f.source.reduce_form(out)


def restrict(u: DiffForm, j: MapSpec) -> DiffForm:
    """Restriction to a registered slice (a pull-back along an inclusion)."""
    if not j.inclusion:
        raise MapError(f"{j.name} is not a registered inclusion")
    return pullback(j, u)


def compose(g: MapSpec, f: MapSpec) -> MapSpec:
    """``g o f``: first ``f``, then ``g``."""
    if f.target.vars != g.source.vars:
        raise MapError(f"cannot compose {g.name} after {f.name}")
    comps = tuple(c.substitute(list(f.components), f.source.vars) for c in g.components)
    if f.source.equations:
        comps = tuple(f.source.ideal.normal_form(c) for c in comps)
    return MapSpec(f"{g.name}.{f.name}", f.source, g.target, comps, f.witness).validate()


def identity(spec: VarietySpec) -> MapSpec:
    comps = tuple(Polynomial.variable(v, spec.vars) for v in spec.vars)
    point = _point_on(spec)
    return MapSpec(f"id[{spec.id}]", spec, spec, comps, point).validate()


def _point_on(spec: VarietySpec):
    if spec.parametrization is not None:
        pt = [Fraction(1)] * len(spec.params)
        return tuple(c.evaluate(pt) for c in spec.parametrization)
    if spec.torus_chart is not None:
        pt = [Fraction(1)] * len(spec.chart_params)
        return tuple(c.evaluate(pt) for c in spec.torus_chart)
    raise VarietyError(f"no witness point known for {spec.id}")


def _P(text: str, vars) -> Polynomial:
    from .varieties import _poly

    return _poly(text, vars)


def quotient_map(k: int) -> MapSpec:
    """``q_k : C^2 -> S_k``."""
    src, tgt = affine(("a", "b")), surface_S(k)
    comps = tuple(_P(t, src.vars) for t in (f"a^{k}", f"b^{k}", "a*b"))
    return MapSpec(f"q_{k}", src, tgt, comps, (Fraction(1), Fraction(1))).validate()


def fermat_to_S(p: int) -> MapSpec:
    """``F_{2p} -> S_{2p}``, ``(a, b, z) -> (a^p - b^p, a^p + b^p, z)``."""
    src, tgt = fermat(2 * p), surface_S(2 * p)
    comps = tuple(_P(t, src.vars) for t in (f"a^{p} - b^{p}", f"a^{p} + b^{p}", "z"))
    return MapSpec(f"f_F{2*p}", src, tgt, comps, (Fraction(1), Fraction(0), Fraction(1))).validate()


def slice_v1(k: int) -> MapSpec:
    """Inclusion of ``S_k = {v = 1}`` (coordinates x, y, u) into ``M_k``."""
    src, tgt = surface_S(k, ("x", "y", "u")), threefold_M(k)
    comps = tuple(_P(t, src.vars) for t in ("x", "y", "u", "1"))
    return MapSpec(f"j_{k}", src, tgt, comps, (Fraction(1),) * 3, inclusion=True).validate()


def pi_map(k: int) -> MapSpec:
    """``S_k x C -> M_k``, ``(x, y, u, v) -> (x v, y, u, v)``."""
    src, tgt = product(surface_S(k, ("x", "y", "u")), "v"), threefold_M(k)
    comps = tuple(_P(t, src.vars) for t in ("x*v", "y", "u", "v"))
    return MapSpec(f"pi_{k}", src, tgt, comps, (Fraction(1),) * 4).validate()


BUILTIN_MAPS = {
    "q": quotient_map,
    "fermat": fermat_to_S,
    "slice_v1": slice_v1,
    "pi": pi_map,
}


def builtin_map(name: str, param: Optional[int] = None) -> MapSpec:
    """Registered maps: ``q:k``, ``fermat:p``, ``slice_v1:k``, ``pi:k``, ``jq:k``."""
    if name == "jq":
        return compose(slice_v1(param), quotient_map_renamed(param))
    if name not in BUILTIN_MAPS:
        raise MapError(f"unknown map {name!r}")
    return BUILTIN_MAPS[name](int(param))


def quotient_map_renamed(k: int) -> MapSpec:
    src, tgt = affine(("a", "b")), surface_S(k, ("x", "y", "u"))
    comps = tuple(_P(t, src.vars) for t in (f"a^{k}", f"b^{k}", "a*b"))
    return MapSpec(f"q_{k}", src, tgt, comps, (Fraction(1), Fraction(1))).validate()


def resolve_map(text: str) -> MapSpec:
    name, _, arg = text.strip().partition(":")
    if name == "id":
        from .varieties import resolve_variety

        return identity(resolve_variety(arg))
    try:
        return builtin_map(name, int(arg))
    except ValueError as exc:
        if isinstance(exc, MapError):
            raise
        raise MapError(f"bad map parameter in {text!r}") from None


def as_images(f: MapSpec) -> Sequence[MeroFunction]:
    return [MeroFunction(c) for c in f.components]
