"""Registered numeric cases: Stokes checks, integrands and the S_4 family scan."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional

from .forms import DiffForm
from .integration import CutoffSpec, CycleSpec
from .maps import MapSpec, fermat_to_S, identity, quotient_map
from .varieties import affine, curve35, surface_S

__all__ = ["NumericCase", "stokes_cases", "integral_cases", "direct_image_cases", "s4_family",
           "FAMILY_GRID", "case"]

FAMILY_GRID = (1.0, 0.5, 0.25, 0.1, 0.05, 0.02, 0.01, 0.005, 0.001)


@dataclass
class NumericCase:
    name: str
    cycle: CycleSpec
    rho: CutoffSpec
    u: DiffForm
    v: DiffForm
    description: str = ""
    map: Optional[MapSpec] = None
    image: Optional[CycleSpec] = None
    degree: int = 1


def stokes_cases() -> Dict[str, NumericCase]:
    """``u`` a function in beta^0 and ``v`` a 1-form in beta^1."""
    A = affine(("x",))
    C = curve35()
    S2 = surface_S(2)
    return {
        "disc": NumericCase(
            "disc", CycleSpec.from_text(A, ["s"], label="disc"), CutoffSpec((0,), 0.8),
            A.form("x^2"), A.form("dx"), "smooth disc, u = x^2, v = dx"),
        "curve35": NumericCase(
            "curve35", CycleSpec.from_text(C, ["s^5", "s^3"], label="curve35"), CutoffSpec((0, 0), 0.8),
            C.form("y^2/x"), C.form("1/3*y/x*dy"), "cusp x^3 = y^5, u = t, v = dt"),
        "S2-diagonal": NumericCase(
            "S2-diagonal", CycleSpec.from_text(S2, ["s", "s", "s"], label="diagonal"),
            CutoffSpec((0, 0, 0), 0.9), S2.form("y"), S2.form("x*dy/z"),
            "diagonal of S_2, u = y, v = x dy/z"),
    }


def integral_cases() -> Dict[str, NumericCase]:
    """Integrands ``rho u ^ conj(u)`` for the convergence checks."""
    out = {}
    for name, c in stokes_cases().items():
        out[name] = NumericCase(name, c.cycle, c.rho, c.v, c.v, f"{c.description}; integrand v ^ conj(v)")
    S4 = surface_S(4)
    w = S4.form("x*dy/z^2")
    out["S4-family-t=0.1"] = NumericCase(
        "S4-family-t=0.1", s4_family().cycle.at(0.1), CutoffSpec((0, 0, 0), 0.5), w, w,
        "S_4 curve (s^4, t^4 s^4, t s^2) at t = 0.1")
    out["S4-beta-generator"] = NumericCase(
        "S4-beta-generator", CycleSpec.from_text(S4, ["s^2", "s^2", "s"], label="S4-curve"),
        CutoffSpec((0, 0, 0), 0.9), S4.form("y*dx/z^2"), S4.form("y*dx/z^2"),
        "S_4 curve (s^2, s^2, s), y dx / z^2")
    return out


def direct_image_cases() -> Dict[str, NumericCase]:
    S2, S4 = surface_S(2), surface_S(4)
    q = quotient_map(2)
    f = fermat_to_S(2)
    w2, w4 = S2.form("x*dy/z"), S4.form("x*dy/z^2")
    return {
        "q2-diagonal": NumericCase(
            "q2-diagonal", CycleSpec.from_text(q.source, ["s", "s"], label="diagonal"),
            CutoffSpec((0, 0, 0), 0.7), w2, w2, "diagonal of C^2 onto the diagonal of S_2 (degree 2)",
            q, CycleSpec.from_text(S2, ["s", "s", "s"], label="image"), 2),
        "fermat4-line": NumericCase(
            "fermat4-line", CycleSpec.from_text(f.source, ["1+s", "0", "1+s"], radius=0.5, label="line"),
            CutoffSpec((1, 1, 1), 0.6), w4, w4, "ruling of F_4 through (1, 0, 1), away from the origin", f),
        "identity": NumericCase(
            "identity", CycleSpec.from_text(S2, ["s", "s", "s"], label="diagonal"),
            CutoffSpec((0, 0, 0), 0.9), w2, w2, "identity map on S_2", identity(S2)),
    }


def s4_family() -> NumericCase:
    """``Y_t = q_4(s, t s)``, ``u = v = x dy / z^2``; the pairing tends to 0 with t."""
    S4 = surface_S(4)
    w = S4.form("x*dy/z^2")
    fam = CycleSpec.from_text(S4, ["s^4", "t^4*s^4", "t*s^2"], family_var="t", label="Y_t")
    return NumericCase("S4-family", fam, CutoffSpec((0, 0, 0), 0.5), w, w, "Y_t = q_4(s, t s)")


def case(name: str, kind: Optional[str] = None) -> NumericCase:
    """Look ``name`` up; ``kind`` ("stokes", "integral", "direct-image") is searched first."""
    tables = {"stokes": stokes_cases, "integral": integral_cases, "direct-image": direct_image_cases}
    order = ([kind] if kind in tables else []) + [k for k in tables if k != kind]
    for key in order:
        table = tables[key]()
        if name in table:
            return table[name]
    if name == "S4-family":
        return s4_family()
    raise KeyError(f"unknown numeric case {name!r}")
