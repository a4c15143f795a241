"""Numeric integration of ``rho * u ^ conj(v)`` over parametrized 1-cycles.

A cycle is a list of patches ``s -> (phi_1(s), ..., phi_N(s))`` on a disc
``|s| <= R`` of the complex parameter ``s``.  The region ``{max |g_i| > eps}``
(``g_i`` the singular-locus generators) is integrated in polar coordinates
with tensor Gauss-Legendre rules; the radial interval is split at the
exclusion radius and at the edge of the cut-off support so the integrand is
smooth on every piece.  Forms are pulled back symbolically and evaluated with
numpy.

Normalization: ``(i/2) ds ^ conj(ds)`` is the Euclidean area element, so
``u = v`` with ``rho >= 0`` integrates to a non-negative number.  Only cycle
dimension 1 is supported.
"""
from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .forms import DiffForm
from .poly import MeroFunction, Polynomial
from .varieties import VarietySpec

__all__ = [
    "CutoffSpec",
    "Patch",
    "CycleSpec",
    "IntegralReport",
    "integrate",
    "stokes_residual",
    "FamilyReport",
    "family_scan",
    "DirectImageReport",
    "direct_image_check",
    "eps_sequence",
    "extrapolate",
]

S = ("s",)


# --------------------------------------------------------------------------
# cut-offs and cycles


@dataclass(frozen=True)
class CutoffSpec:
    """Radial bump ``rho(x)`` around ``center`` in the ambient space."""

    center: Tuple[complex, ...]
    radius: float
    smoothness: str = "C1"

    def __post_init__(self):
        if self.smoothness not in ("C0", "C1"):
            raise ValueError("smoothness must be 'C0' or 'C1'")
        if self.radius <= 0:
            raise ValueError("cut-off radius must be positive")

    def expression(self) -> str:
        if self.smoothness == "C1":
            return "(1 - |x - c|^2 / R^2)^2 on |x - c| < R, else 0"
        return "1 - |x - c| / R on |x - c| < R, else 0"

    def _dist2(self, pts: np.ndarray) -> np.ndarray:
        c = np.asarray(self.center, dtype=complex)
        return np.sum(np.abs(pts - c[:, None]) ** 2, axis=0)

    def value(self, pts: np.ndarray) -> np.ndarray:
        """``pts`` has shape (ambient dim, N)."""
        q = self._dist2(pts) / self.radius ** 2
        if self.smoothness == "C1":
            return np.where(q < 1, (1 - q) ** 2, 0.0)
        return np.where(q < 1, 1 - np.sqrt(q), 0.0)

    def d_s(self, pts: np.ndarray, dpts: np.ndarray) -> np.ndarray:
        """``d/ds`` of ``rho(phi(s))`` for a holomorphic patch (C1 bumps only)."""
        if self.smoothness != "C1":
            raise ValueError("Stokes runs need a C1 cut-off")
        c = np.asarray(self.center, dtype=complex)
        q = self._dist2(pts) / self.radius ** 2
        # d|phi - c|^2 / ds = sum phi_j' * conj(phi_j - c_j)
        dq = np.sum(dpts * np.conj(pts - c[:, None]), axis=0) / self.radius ** 2
        return np.where(q < 1, -2 * (1 - q) * dq, 0.0)


@dataclass
class Patch:
    """Polynomial map from the disc ``|s| <= radius``; may depend on a family parameter."""

    components: Tuple[Polynomial, ...]
    radius: float = 1.0
    multiplicity: int = 1

    @property
    def vars(self):
        return self.components[0].vars

    def at(self, t) -> "Patch":
        if self.vars == S:
            return self
        images = [Polynomial.variable("s", S), Polynomial.constant(Fraction(t), S)]
        return Patch(tuple(c.substitute(images, S) for c in self.components), self.radius, self.multiplicity)


@dataclass
class CycleSpec:
    variety: VarietySpec
    patches: List[Patch]
    dimension: int = 1
    family_var: Optional[str] = None
    label: str = ""

    def validate(self) -> "CycleSpec":
        if self.dimension != 1:
            raise ValueError("only 1-cycles are supported")
        if not self.patches:
            raise ValueError("a cycle needs at least one patch")
        for p in self.patches:
            if len(p.components) != len(self.variety.vars):
                raise ValueError(f"patch needs {len(self.variety.vars)} components")
            if self.family_var is None and p.vars != S:
                raise ValueError("patch components must be polynomials in s")
            for f in self.variety.equations:
                img = f.substitute(list(p.components), p.vars)
                if not img.is_zero():
                    raise ValueError(f"patch does not lie on {self.variety.id}: residual {img}")
            sing = self.variety.singular_generators()
            if sing and all(g.substitute(list(p.components), p.vars).is_zero() for g in sing):
                raise ValueError("patch lies inside the singular locus")
        return self

    def at(self, t) -> "CycleSpec":
        return CycleSpec(self.variety, [p.at(t) for p in self.patches], 1, None,
                         f"{self.label}[t={t}]").validate()

    @classmethod
    def from_text(cls, spec: VarietySpec, comps: Sequence[str], radius: float = 1.0,
                  multiplicity: int = 1, family_var: Optional[str] = None, label: str = ""):
        from .grammar import parse_form

        vars = S + ((family_var,) if family_var else ())
        polys = tuple(parse_form(c, vars, (), "ambient", 0).coefficient(()).as_polynomial() for c in comps)
        return cls(spec, [Patch(polys, radius, multiplicity)], 1, family_var, label).validate()


# --------------------------------------------------------------------------
# numeric evaluation helpers


def _laurent_eval(f: MeroFunction, s: np.ndarray) -> np.ndarray:
    out = np.zeros_like(s, dtype=complex)
    for (e,), c in f.laurent_terms().items():
        out = out + float(c) * s ** e
    return out


def _poly_eval(f: Polynomial, s: np.ndarray) -> np.ndarray:
    return _laurent_eval(MeroFunction(f), s)


def _mero_at(f: MeroFunction, pts: np.ndarray) -> np.ndarray:
    out = np.zeros(pts.shape[1], dtype=complex)
    for e, c in f.laurent_terms().items():
        term = np.full(pts.shape[1], float(c), dtype=complex)
        for i, k in enumerate(e):
            if k:
                term = term * pts[i] ** k
        out = out + term
    return out


def _form_values(u: DiffForm, pts: np.ndarray, dpts: np.ndarray) -> np.ndarray:
    """Coefficient of the pulled-back form in ``s`` (``ds`` for 1-forms)."""
    if u.degree == 0:
        return _mero_at(u.coefficient(()), pts)
    out = np.zeros(pts.shape[1], dtype=complex)
    for (j,), c in u.components.items():
        out = out + _mero_at(c, pts) * dpts[j]
    return out


def _d_function(u: DiffForm, pts: np.ndarray, dpts: np.ndarray) -> np.ndarray:
    f = u.coefficient(())
    out = np.zeros(pts.shape[1], dtype=complex)
    for j in range(len(f.vars)):
        out = out + _mero_at(f.diff(j), pts) * dpts[j]
    return out


def eps_sequence(eps_max: float = 1e-1, eps_min: float = 1e-6, count: int = 10) -> List[float]:
    return [float(x) for x in np.geomspace(eps_max, eps_min, count)]


def extrapolate(values: Sequence[complex]) -> complex:
    """Aitken / Richardson limit of a sequence sampled at geometric eps."""
    v = list(values)
    if len(v) < 3:
        return v[-1]
    out = []
    for part in (np.real, np.imag):
        a, b, c = (float(part(x)) for x in v[-3:])
        d1, d2 = b - a, c - b
        denom = d2 - d1
        if abs(d2) < 1e-300 or abs(denom) < 1e-14 * max(1.0, abs(c)) or abs(d2) >= abs(d1):
            out.append(c)
        else:
            out.append(c - d2 * d2 / denom)
    return complex(out[0], out[1])


def _ray_root(fn: Callable[[np.ndarray], np.ndarray], level: float, theta: np.ndarray,
              rmax: float, grid: int = 256) -> np.ndarray:
    """First radius where ``fn(r e^{i theta})`` reaches ``level``; ``rmax`` if never."""
    rs = np.linspace(0.0, rmax, grid)
    ray = np.exp(1j * theta)
    vals = fn((rs[:, None] * ray[None, :]).ravel()).reshape(grid, theta.size)
    above = vals >= level
    hit = above.any(axis=0)
    idx = np.where(hit, np.argmax(above, axis=0), grid - 1)
    # once above, the ray must stay above: the region has to be star-shaped
    tail = np.arange(grid)[:, None] >= idx[None, :]
    if np.any(tail & ~above & hit[None, :]):
        raise ValueError("the region is not star-shaped along a ray of the patch")
    lo = rs[np.maximum(idx - 1, 0)]
    hi = rs[idx]
    for _ in range(55):
        mid = 0.5 * (lo + hi)
        up = fn(mid * ray) >= level
        hi = np.where(up, mid, hi)
        lo = np.where(up, lo, mid)
    out = np.where(idx == 0, 0.0, hi)
    return np.where(hit, out, rmax)


# --------------------------------------------------------------------------
# integration


@dataclass
class IntegralReport:
    kind: str
    eps: List[float]
    values: List[complex]
    limit: complex
    converged: bool
    quad_error: float
    mass: float
    orders: Tuple[int, int]
    notes: List[str] = field(default_factory=list)

    def increments(self) -> List[float]:
        return [abs(b - a) for a, b in zip(self.values, self.values[1:])]

    def to_json(self):
        return {
            "kind": self.kind,
            "eps": self.eps,
            "values": [[v.real, v.imag] for v in self.values],
            "limit": [self.limit.real, self.limit.imag],
            "converged": self.converged,
            "quad_error": self.quad_error,
            "mass": self.mass,
            "orders": list(self.orders),
            "notes": list(self.notes),
        }


def _converged(values: Sequence[complex], tol: float) -> bool:
    """Monotone increments and a stable limit (last increment or Aitken estimates)."""
    scale = max(1.0, max(abs(v) for v in values))
    floor = 1e-13 * scale
    inc = [abs(b - a) for a, b in zip(values, values[1:])]
    inc = [0.0 if x < floor else x for x in inc]
    if not all(b <= a for a, b in zip(inc, inc[1:])):
        return False
    if inc[-1] <= tol * scale:
        return True
    return abs(extrapolate(values) - extrapolate(values[:-1])) <= tol * scale


class _PatchRule:
    """Polar quadrature on one patch for one eps."""

    def __init__(self, spec: VarietySpec, patch: Patch, rho: CutoffSpec, rho_map, n_r: int, n_t: int):
        self.spec, self.patch, self.rho, self.rho_map = spec, patch, rho, rho_map
        self.n_r, self.n_t = n_r, n_t
        self.sing = [g for g in spec.singular_generators()]
        self.theta_x, self.theta_w = np.polynomial.legendre.leggauss(n_t)
        self.r_x, self.r_w = np.polynomial.legendre.leggauss(n_r)
        self.theta = math.pi * (self.theta_x + 1)
        self.theta_w = math.pi * self.theta_w
        # radial edge of the cut-off support
        self.r_supp = _ray_root(lambda s: (self._rho(s) <= 0).astype(float), 0.5, self.theta, patch.radius)

    def points(self, s):
        return np.array([_poly_eval(c, s) for c in self.patch.components])

    def dpoints(self, s):
        return np.array([_poly_eval(c.diff(0), s) for c in self.patch.components])

    def rho_points(self, s):
        pts = self.points(s)
        if self.rho_map is not None:
            pts = np.array([_mapped(c, pts) for c in self.rho_map])
        return pts

    def _rho(self, s):
        return self.rho.value(self.rho_points(s))

    def exclusion(self, s):
        if not self.sing:
            return np.full(s.shape, np.inf)
        pts = self.points(s)
        vals = [np.abs(_mapped(g, pts)) for g in self.sing]
        return np.max(vals, axis=0)

    def nodes(self, eps: float):
        r_lo = np.zeros_like(self.theta) if eps <= 0 or not self.sing else \
            _ray_root(self.exclusion, eps, self.theta, self.patch.radius)
        r_hi = self.r_supp
        a = np.minimum(r_lo, r_hi)
        half = 0.5 * (r_hi - a)
        r = a[None, :] + half[None, :] * (self.r_x[:, None] + 1)
        w = half[None, :] * self.r_w[:, None] * self.theta_w[None, :] * r
        s = r * np.exp(1j * self.theta)[None, :]
        return s.ravel(), w.ravel()


def _mapped(f: Polynomial, pts: np.ndarray) -> np.ndarray:
    return _mero_at(MeroFunction(f), pts)


def _integrand_value(rule: "_PatchRule", u: DiffForm, v: DiffForm, eps: float) -> complex:
    s, w = rule.nodes(eps)
    pts, dpts = rule.points(s), rule.dpoints(s)
    vals = rule._rho(s) * _form_values(u, pts, dpts) * np.conj(_form_values(v, pts, dpts))
    return complex(np.sum(vals * w))


def _mass(rule: _PatchRule) -> float:
    s, w = rule.nodes(0.0)
    dpts = rule.dpoints(s)
    h = np.sum(np.abs(dpts) ** 2, axis=0)
    return float(np.sum(np.abs(rule._rho(s)) * h * w))


def _run(kind: str, cycle: CycleSpec, rho: CutoffSpec, per_patch, eps_list, tol, n_r, n_t,
         rho_map=None) -> IntegralReport:
    cycle.validate()
    rules = [(_PatchRule(cycle.variety, p, rho, rho_map, n_r, n_t),
              _PatchRule(cycle.variety, p, rho, rho_map, 2 * n_r, 2 * n_t), p) for p in cycle.patches]
    values = []
    for eps in eps_list:
        total = 0j
        for rule, _, p in rules:
            total += p.multiplicity * per_patch(rule, p, eps)
        values.append(total)
    fine = sum(p.multiplicity * per_patch(r2, p, eps_list[-1]) for _, r2, p in rules)
    quad_error = abs(fine - values[-1])
    mass = sum(p.multiplicity * _mass(r) for r, _, p in rules)
    limit = extrapolate(values)
    conv = _converged(values, tol)
    notes = [] if conv else ["eps-sequence increments are not monotonically below tolerance"]
    return IntegralReport(kind, list(eps_list), values, limit, conv, quad_error, mass, (n_r, n_t), notes)


def integrate(cycle: CycleSpec, rho: CutoffSpec, u: DiffForm, v: DiffForm,
              eps: Optional[Sequence[float]] = None, tol: float = 1e-6,
              n_r: int = 48, n_t: int = 64, rho_map: Optional[Sequence[Polynomial]] = None
              ) -> IntegralReport:
    """``lim_eps int_{|g| > eps} rho * u ^ conj(v)`` with the area normalization."""
    if u.degree != 1 or v.degree != 1:
        raise ValueError("integrate pairs two 1-forms on a 1-cycle")
    eps_list = list(eps) if eps is not None else eps_sequence()

    def per_patch(rule, p, e):
        return _integrand_value(rule, u, v, e)

    return _run("integral", cycle, rho, per_patch, eps_list, tol, n_r, n_t, rho_map)


def stokes_residual(cycle: CycleSpec, rho: CutoffSpec, u: DiffForm, v: DiffForm,
                    eps: Optional[Sequence[float]] = None, tol: float = 1e-6,
                    n_r: int = 48, n_t: int = 64) -> IntegralReport:
    """``int d(rho u conj(v))`` for a function ``u`` and a 1-form ``v``.

    On a patch ``d(rho U conj(B) d conj(s)) = d_s(rho U) conj(B) ds ^ d conj(s)``
    because ``B`` is holomorphic; the limit should vanish.
    """
    if u.degree != 0 or v.degree != 1:
        raise ValueError("Stokes residual needs a function u and a 1-form v")
    if rho.smoothness != "C1":
        raise ValueError("Stokes runs need a C1 cut-off")
    eps_list = list(eps) if eps is not None else eps_sequence()

    def per_patch(rule, p, e):
        s, w = rule.nodes(e)
        pts, dpts = rule.points(s), rule.dpoints(s)
        rpts = rule.rho_points(s)
        drho = rho.d_s(rpts, dpts)
        U = _form_values(u, pts, dpts)
        dU = _d_function(u, pts, dpts)
        val = (drho * U + rule._rho(s) * dU) * np.conj(_form_values(v, pts, dpts))
        return complex(np.sum(val * w))

    return _run("stokes", cycle, rho, per_patch, eps_list, tol, n_r, n_t)


# --------------------------------------------------------------------------
# families and direct images


@dataclass
class FamilyReport:
    grid: List[float]
    reports: List[IntegralReport]
    sup: float
    constant: float
    bounded: bool
    failures: List[float]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "re", "im", "mass", "converged"])
        for t, r in zip(self.grid, self.reports):
            w.writerow([repr(float(t)), repr(r.limit.real), repr(r.limit.imag), repr(r.mass), int(r.converged)])
        return buf.getvalue()

    def to_json(self):
        return {"grid": [float(t) for t in self.grid], "sup": self.sup, "C": self.constant,
                "bounded": self.bounded, "failures": self.failures,
                "reports": [r.to_json() for r in self.reports]}


def family_scan(family: CycleSpec, rho: CutoffSpec, u: DiffForm, v: DiffForm, grid: Sequence,
                rho_family: Optional[Callable[[float], CutoffSpec]] = None, **kw) -> FamilyReport:
    """``phi(t)`` over a grid; reports ``sup |phi|`` and ``C = max |phi| / mass``."""
    reports, failures = [], []
    for t in grid:
        cyc = family.at(t) if family.family_var else family
        r = integrate(cyc, rho_family(t) if rho_family else rho, u, v, **kw)
        reports.append(r)
        if not r.converged:
            failures.append(float(t))
    sup = max(abs(r.limit) for r in reports)
    ratios = [abs(r.limit) / r.mass for r in reports if r.mass > 0]
    const = max(ratios) if ratios else float("inf")
    bounded = math.isfinite(sup) and math.isfinite(const) and all(
        abs(r.limit) <= const * r.mass * (1 + 1e-12) + 1e-15 for r in reports)
    return FamilyReport([float(t) for t in grid], reports, sup, const, bounded, failures)


@dataclass
class DirectImageReport:
    source: IntegralReport
    target: IntegralReport
    degree: int
    relative_difference: float
    warnings: List[str] = field(default_factory=list)

    def to_json(self):
        return {"source": self.source.to_json(), "target": self.target.to_json(), "degree": self.degree,
                "relative_difference": self.relative_difference, "warnings": self.warnings}


def direct_image_check(f, Z: CycleSpec, rho: CutoffSpec, u: DiffForm, v: DiffForm,
                       image: Optional[CycleSpec] = None, degree: int = 1, **kw) -> DirectImageReport:
    """Compare ``int_Z f*(rho) f*(u) ^ conj(f*(v))`` with ``int_{f_*(Z)} rho u ^ conj(v)``.

    ``image`` parametrizes ``f(Z)`` independently; ``f_*(Z)`` is ``degree``
    times it.  Without ``image`` the composite patches ``f o phi`` are used.
    """
    from .maps import pullback

    if Z.variety.id != f.source.id:
        raise ValueError("the cycle does not live on the source of the map")
    src = integrate(Z, rho, pullback(f, u), pullback(f, v), rho_map=f.components, **kw)
    if image is None:
        patches = [Patch(tuple(c.substitute(list(p.components), S) for c in f.components), p.radius,
                         p.multiplicity) for p in Z.patches]
        image = CycleSpec(f.target, patches, 1, None, f"{f.name}({Z.label})")
        degree = 1
    tgt1 = integrate(image, rho, u, v, **kw)
    tgt = IntegralReport(tgt1.kind, tgt1.eps, [degree * x for x in tgt1.values], degree * tgt1.limit,
                         tgt1.converged, degree * tgt1.quad_error, degree * tgt1.mass, tgt1.orders,
                         tgt1.notes)
    diff = abs(src.limit - tgt.limit) / max(abs(tgt.limit), 1e-300)
    notes = []
    if abs(tgt1.limit) > 0:
        ratio = abs(src.limit / tgt1.limit)
        if abs(ratio - degree) > 1e-3 * degree:
            notes.append(f"covering degree {degree} inconsistent with the integral ratio {ratio:.6g}")
            warnings.warn(notes[-1])
    return DirectImageReport(src, tgt, degree, diff, notes)
