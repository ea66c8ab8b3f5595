"""Closed-form radial integrals, the coefficient ledger, and the final constant."""

import dataclasses
import math
import time

import pytest

from bosegas.errors import DilutenessWarning, IdentityViolation
from bosegas.semiclassical import (
    LHY_RATIO,
    assemble_ledger,
    integral_kinetic,
    integral_number_density,
    integral_pair,
    lhy_energy,
    pair_integrand_forms,
    predicted_energy_density,
)

_CLOSED = {
    "number_density": 1.0 / (3.0 * math.pi**2),
    "kinetic": -8.0 / (5.0 * math.pi**2),
    "pair": 1.0 / math.pi**2,
}


@pytest.mark.parametrize(
    "func,key,power",
    [
        (integral_number_density, "number_density", 1.5),
        (integral_kinetic, "kinetic", 2.5),
        (integral_pair, "pair", 1.5),
    ],
)
def test_integral_closed_forms(func, key, power):
    t0 = time.perf_counter()
    res = func(1.0)
    dt = time.perf_counter() - t0
    assert dt < 1.0
    assert math.isclose(res.value, _CLOSED[key], rel_tol=1e-6)
    assert math.isclose(func(1.0, refine=True).value, _CLOSED[key], rel_tol=1e-9)
    # exact dimensional scaling in the coupling
    assert math.isclose(func(4.0).value, 4.0**power * res.value, rel_tol=1e-11)


@pytest.mark.parametrize("func", [integral_number_density, integral_kinetic, integral_pair])
def test_integral_rejects_nonpositive_coupling(func):
    with pytest.raises(ValueError):
        func(0.0)
    with pytest.raises(ValueError):
        func(-1.0)


def test_pair_integrand_forms_agree():
    # raw difference form vs the cancellation-free rewrite
    for k in (0.05, 0.3, 1.0, 7.0, 40.0):
        raw, stable = pair_integrand_forms(1.3, k)
        assert math.isclose(raw, stable, rel_tol=1e-9, abs_tol=1e-18)


# ---------------------------------------------------------------- ledger


def test_ledger_milestones_with_identities_imposed(gaussian_solution):
    led = assemble_ledger(gaussian_solution)
    g0 = led.g0
    milestone = 26.0 * g0**2.5 / (15.0 * math.pi**2)
    final = 16.0 * g0**2.5 / (15.0 * math.pi**2)
    assert led.leading_imposed_residual <= 1e-12
    assert abs(led.second_sum_imposed - milestone) / milestone <= 1e-12
    assert abs(led.final_coefficient - final) / final <= 1e-12
    assert led.second_imposed_residual <= 1e-12
    assert led.final_residual <= 1e-12


def test_ledger_raw_sums_bounded_by_identity_residuals(gaussian_solution):
    # the raw columns carry the solved norms, so their telescopes are only
    # as good as the two identity residuals that feed them
    from bosegas.scattering import check_scattering_identities

    led = assemble_ledger(gaussian_solution)
    rep = check_scattering_identities(gaussian_solution)
    slack = (rep.residual_gradient + rep.residual_length) / led.g0
    assert led.leading_residual <= 1.5 * slack + 1e-15
    assert led.milestone_raw_residual <= 10.0 * (rep.residual_gradient + rep.residual_length)
    # and still far better than the tolerance of anything downstream
    assert led.leading_residual < 1e-9
    assert led.milestone_raw_residual < 1e-9


def test_ledger_component_tables_telescope(gaussian_solution):
    led = assemble_ledger(gaussian_solution)
    assert set(led.leading) == set(led.second_order) == {
        "kinetic", "HS1", "HS2", "HS3", "HA1", "HA2",
    }
    assert math.isclose(sum(led.leading.values()), led.leading_sum, rel_tol=1e-15)
    assert math.isclose(sum(led.second_order.values()), led.second_sum_raw, rel_tol=1e-15)
    # asymmetric components contribute nothing at leading order
    assert led.leading["HA1"] == led.leading["HA2"] == 0.0


def test_ledger_refuses_broken_identities(gaussian_solution):
    broken = dataclasses.replace(gaussian_solution, v0=gaussian_solution.v0 * 1.01)
    with pytest.raises(IdentityViolation):
        assemble_ledger(broken)


def test_condensate_density_band(gaussian_solution):
    led = assemble_ledger(gaussian_solution)
    rho = 1e-6
    base = rho - led.depletion_coefficient * rho**1.5
    assert math.isclose(led.rho0(rho), base, rel_tol=1e-15)
    lo, hi = led.rho0_band(rho)
    assert lo < led.rho0(rho) < hi
    # band endpoints live at the rho scale, so their difference keeps only
    # the digits that survive the cancellation
    assert math.isclose(hi - lo, 2.0 * led.eps_band * rho**1.5, rel_tol=1e-9)
    assert math.isclose(led.rho0(1e-6), 9.999397277557458e-07, rel_tol=1e-12)


# ---------------------------------------------------------------- constants


def test_second_order_constant_identities():
    # (16/15 pi^2) (4 pi)^(5/2) = 4 pi * 128/(15 sqrt(pi)) = 512 sqrt(pi)/15
    lhs = LHY_RATIO * (4.0 * math.pi) ** 2.5
    mid = 4.0 * math.pi * 128.0 / (15.0 * math.sqrt(math.pi))
    rhs = 512.0 * math.sqrt(math.pi) / 15.0
    assert abs(lhs - rhs) / rhs <= 1e-12
    assert abs(mid - rhs) / rhs <= 1e-12


def test_lhy_energy_ratio_is_constant():
    for rho, a in [(1e-6, 0.1), (1e-8, 1.0), (3e-5, 0.02)]:
        rep = lhy_energy(rho, a)
        assert abs(rep["ratio"] - LHY_RATIO) / LHY_RATIO <= 1e-12
        assert math.isclose(rep["leading"], 4.0 * math.pi * a * rho, rel_tol=1e-15)
        assert rep["e0"] > rep["leading"]


def test_lhy_energy_edge_cases():
    assert lhy_energy(1e-6, 0.0)["ratio"] == 0.0
    with pytest.raises(ValueError):
        lhy_energy(0.0, 0.1)
    with pytest.raises(ValueError):
        lhy_energy(1e-6, -0.1)
    with pytest.warns(DilutenessWarning):
        lhy_energy(0.5, 1.0)


def test_predicted_energy_density_formula():
    rho, g0 = 1e-5, 1.4712695338835973
    expect = g0 * rho**2 + LHY_RATIO * g0**2.5 * rho**2.5
    assert math.isclose(predicted_energy_density(rho, g0), expect, rel_tol=1e-15)
    # second-order term is a small positive correction in the dilute regime
    assert 0.0 < predicted_energy_density(rho, g0) - g0 * rho**2 < g0 * rho**2
