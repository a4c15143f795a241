"""Numeric pairings against independent radial quadratures."""
import math
import warnings

import numpy as np
import pytest
from scipy.integrate import quad

from betasheaf.integration import (CutoffSpec, CycleSpec, direct_image_check, eps_sequence, extrapolate,
                                   family_scan, integrate, stokes_residual)
from betasheaf.numcases import FAMILY_GRID, direct_image_cases, integral_cases, s4_family, stokes_cases
from betasheaf.varieties import affine, curve35, surface_S


def radial(weight, support, R2):
    """``2 pi int_0^1 rho(r) weight(r) r dr`` with ``rho = (1 - support(r)/R2)^2``."""
    def f(r):
        q = support(r) / R2
        return (1 - q) ** 2 * weight(r) * r if q < 1 else 0.0
    # locate the edge of the support for the integrator
    lo, hi = 0.0, 1.0
    if support(hi) >= R2:
        for _ in range(200):
            mid = (lo + hi) / 2
            lo, hi = (mid, hi) if support(mid) < R2 else (lo, mid)
    return 2 * math.pi * quad(f, 0, hi, limit=200, epsabs=1e-14, epsrel=1e-13)[0]


def test_disc_value():
    c = integral_cases()["disc"]
    r = integrate(c.cycle, c.rho, c.u, c.v)
    assert r.converged
    assert abs(r.limit - math.pi * 0.64 / 3) < 1e-10


def test_cusp_value_against_radial_oracle():
    # (s^5, s^3): y dy / (3 x) pulls back to ds
    c = integral_cases()["curve35"]
    r = integrate(c.cycle, c.rho, c.u, c.v)
    oracle = radial(lambda r: 1.0, lambda r: r ** 10 + r ** 6, 0.64)
    assert r.converged
    assert abs(r.limit - oracle) < 1e-8


@pytest.mark.parametrize("t", [1.0, 0.25, 0.01])
def test_family_value_and_mass_against_oracle(t):
    fam = s4_family()
    r = integrate(fam.cycle.at(t), fam.rho, fam.u, fam.v)
    # x dy / z^2 pulls back to 4 t^2 s^3 ds
    support = lambda r: r ** 8 + t ** 8 * r ** 8 + t ** 2 * r ** 4
    value = radial(lambda r: 16 * t ** 4 * r ** 6, support, 0.25)
    mass = radial(lambda r: 16 * r ** 6 + 16 * t ** 8 * r ** 6 + 4 * t ** 2 * r ** 2, support, 0.25)
    assert abs(r.limit - value) < 1e-9 * max(1, value)
    assert abs(r.mass - mass) < 1e-9 * max(1, mass)


@pytest.mark.parametrize("name", sorted(stokes_cases()))
def test_stokes_residuals_vanish(name):
    c = stokes_cases()[name]
    r = stokes_residual(c.cycle, c.rho, c.u, c.v)
    assert abs(r.limit) < 1e-10


@pytest.mark.parametrize("name", sorted(integral_cases()))
def test_integrals_converge_monotonically(name):
    c = integral_cases()[name]
    r = integrate(c.cycle, c.rho, c.u, c.v)
    assert r.converged, r.notes
    assert r.quad_error < 1e-8 * max(1, abs(r.limit))
    assert r.mass > 0


def test_extrapolation_of_geometric_sequence():
    seq = [2 + 3 * 0.5 ** n + 0.5j * 0.25 ** n for n in range(8)]
    assert abs(extrapolate(seq) - 2) < 1e-12
    assert extrapolate([1.0]) == 1.0
    assert eps_sequence()[0] == pytest.approx(1e-1) and eps_sequence()[-1] == pytest.approx(1e-6)


def test_family_scan_is_bounded_by_mass():
    fam = s4_family()
    rep = family_scan(fam.cycle, fam.rho, fam.u, fam.v, FAMILY_GRID)
    assert rep.bounded and not rep.failures
    assert math.isfinite(rep.sup)
    for r in rep.reports:
        assert abs(r.limit) <= rep.constant * r.mass * (1 + 1e-12)
    lines = rep.to_csv().splitlines()
    assert lines[0] == "t,re,im,mass,converged" and len(lines) == len(FAMILY_GRID) + 1


@pytest.mark.parametrize("name", sorted(direct_image_cases()))
def test_direct_images(name):
    c = direct_image_cases()[name]
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        rep = direct_image_check(c.map, c.cycle, c.rho, c.u, c.v, image=c.image, degree=c.degree)
    assert rep.relative_difference < 1e-8
    assert not rep.warnings


def test_direct_image_warns_on_wrong_degree():
    c = direct_image_cases()["q2-diagonal"]
    with pytest.warns(UserWarning, match="covering degree"):
        rep = direct_image_check(c.map, c.cycle, c.rho, c.u, c.v, image=c.image, degree=1)
    assert rep.relative_difference > 0.5


def test_patch_validation():
    S = surface_S(4)
    with pytest.raises(ValueError, match="does not lie"):
        CycleSpec.from_text(S, ["s", "s", "s"])
    with pytest.raises(ValueError, match="singular locus"):
        CycleSpec.from_text(S, ["0", "0", "0"])
    with pytest.raises(ValueError):
        CycleSpec.from_text(curve35(), ["s^5", "s^3", "s"])


def test_cutoff_validation():
    with pytest.raises(ValueError):
        CutoffSpec((0,), -1.0)
    with pytest.raises(ValueError):
        CutoffSpec((0,), 1.0, "C2")
    c = stokes_cases()["disc"]
    with pytest.raises(ValueError):
        stokes_residual(c.cycle, CutoffSpec((0,), 0.8, "C0"), c.u, c.v)


def test_degree_checks():
    A = affine(("x",))
    cyc = CycleSpec.from_text(A, ["s"])
    with pytest.raises(ValueError):
        integrate(cyc, CutoffSpec((0,), 0.5), A.form("x"), A.form("dx"))
    with pytest.raises(ValueError):
        stokes_residual(cyc, CutoffSpec((0,), 0.5), A.form("dx"), A.form("dx"))
