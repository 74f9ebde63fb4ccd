"""Scale-transformation indicators and the slope criterion."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nlde.errors import DomainError
from nlde.nr_limit import mnlse_profile, mnlse_stationary, nlse_profile
from nlde.solitary import ModelParams, density_at, energy_closed_form, make_wave
from nlde.special_fn import integrate
from nlde.stability import (
    Classification,
    hamiltonian_parts,
    nlse_mass,
    scaled_energy,
    second_variation,
    stretched_energy,
    vk_slope,
)

K_GRID = [0.5, 1.0, 1.5, 3.0]


def nlde(k, om=0.6, ch="ss"):
    return make_wave(ModelParams(1.0, 1.0, k, ch), om)


def test_identity_scaling_gives_energy():
    w = nlde(1.5)
    assert scaled_energy("nlde", w, 1.0) == pytest.approx(energy_closed_form(w).H_sol, rel=1e-10)
    sol = nlse_profile(1.0, 1.0, 1.5, 1.0)
    H1, H2 = hamiltonian_parts("nlse", sol)
    assert scaled_energy("nlse", sol, 1.0) == pytest.approx(H1 - H2, rel=1e-14)


@pytest.mark.parametrize("k", K_GRID + [2.0, 2.5])
def test_stationarity_identities(k):
    H1, H2 = hamiltonian_parts("nlse", nlse_profile(1.0, 1.0, k, 1.3))
    assert H1 == pytest.approx(k / 2 * H2, rel=1e-8)
    for ch in ("ss", "vv"):
        h1, _, h3 = hamiltonian_parts("nlde", nlde(k, 0.4, ch))
        assert h3 == pytest.approx(h1 / k, rel=1e-8)


@pytest.mark.parametrize("model, make", [
    ("nlde", lambda k: nlde(k, 0.5)),
    ("nlde", lambda k: nlde(k, 0.5, "vv")),
    ("nlse", lambda k: nlse_profile(1.0, 1.0, k, 0.8)),
    ("mnlse_ss", lambda k: mnlse_profile(1.0, 1.0, k, 0.85, "ss")),
    ("mnlse_vv", lambda k: mnlse_profile(1.0, 1.0, k, 0.85, "vv")),
])
@pytest.mark.parametrize("k", [0.5, 1.0, 3.0])
def test_scaling_law_against_stretched_quadrature(model, make, k):
    sol = make(k)
    for beta in (0.7, 1.0, 1.3):
        assert stretched_energy(model, sol, beta) == pytest.approx(
            scaled_energy(model, sol, beta), rel=1e-9, abs=1e-12
        )


@given(st.sampled_from(K_GRID), st.floats(0.1, 0.9), st.floats(0.3, 3.0))
def test_stretch_conserves_charge(k, om, beta):
    w = nlde(k, om)
    f = lambda x: beta * density_at(w, beta * x)
    stretched = 2 * integrate(f, 0.0, np.inf)
    plain = 2 * integrate(lambda x: density_at(w, x), 0.0, np.inf)
    assert stretched == pytest.approx(plain, rel=1e-9)


def test_second_variation_examples():
    sol = nlse_profile(1.0, 1.0, 1.0, 1.0)
    rep = second_variation("nlse", sol)
    assert rep.second_derivative_at_1 == pytest.approx(2 * rep.H_parts[0], rel=1e-14)
    assert rep.classification is Classification.STABLE_INDICATOR

    rep = second_variation("nlde", nlde(1.0))
    assert abs(rep.second_derivative_at_1) <= 1e-8
    assert rep.classification is Classification.NOT_A_STABILITY_CRITERION

    rep = second_variation("mnlse_ss", mnlse_stationary(1.0, 1.0, 2.0, 0.9, "ss"))
    assert rep.second_derivative_at_1 == pytest.approx(8 * rep.H_parts[1], rel=1e-12)
    assert rep.second_derivative_at_1 > 0


def _solutions(k):
    yield "nlse", nlse_profile(1.0, 1.0, k, 1.0)
    for om in (0.3, 0.6, 0.9):
        for ch in ("ss", "vv"):
            yield "nlde", nlde(k, om, ch)
    for om in (0.85, 0.9, 0.95):
        yield "mnlse_ss", mnlse_stationary(1.0, 1.0, k, om, "ss")
        yield "mnlse_vv", mnlse_stationary(1.0, 1.0, k, om, "vv")


@pytest.mark.parametrize("k", K_GRID)
def test_closed_form_matches_finite_differences(k):
    for model, sol in _solutions(k):
        rep = second_variation(model, sol)
        scale = max(abs(rep.second_derivative_at_1), *map(abs, rep.H_parts))
        assert rep.fd_agrees, (model, k)
        assert abs(rep.fd_second_derivative - rep.second_derivative_at_1) <= 1e-6 * scale
        assert abs(rep.first_derivative_at_1) <= 1e-6 * max(rep.H_parts)


@pytest.mark.parametrize("k", [0.5, 1.0, 1.5, 2.5, 3.0])
def test_nlse_sign_flips_at_two(k):
    rep = second_variation("nlse", nlse_profile(1.0, 1.0, k, 1.0))
    expected = Classification.STABLE_INDICATOR if k < 2 else Classification.UNSTABLE_INDICATOR
    assert rep.classification is expected
    assert second_variation("nlse", nlse_profile(1.0, 1.0, 2.0, 1.0)).classification is Classification.MARGINAL


def test_model_and_solution_must_match():
    with pytest.raises(DomainError):
        second_variation("nlse", nlde(1.0))
    with pytest.raises(DomainError):
        scaled_energy("nlde", nlde(1.0), 0.0)


# ---------------------------------------------------------------- slope test


@pytest.mark.parametrize("k, verdict", [(1.0, "stable"), (2.0, "marginal"), (3.0, "unstable")])
def test_vk_examples(k, verdict):
    assert vk_slope(k, -0.5).verdict == verdict


def test_vk_flips_exactly_at_two():
    assert vk_slope(math.nextafter(2.0, 0.0), -1.0).verdict == "stable"
    assert vk_slope(2.0, -1.0).verdict == "marginal"
    assert vk_slope(math.nextafter(2.0, 3.0), -1.0).verdict == "unstable"
    with pytest.raises(DomainError):
        vk_slope(1.0, 0.0)


@given(st.floats(0.3, 4.0), st.floats(0.1, 5.0))
def test_vk_matches_numerical_slope(k, Omega):
    # M as a function of omega = -Omega, differentiated numerically
    if abs(k - 2.0) < 1e-3:
        return
    h = 1e-6 * Omega
    dM = (nlse_mass(1.0, 1.0, k, Omega - h) - nlse_mass(1.0, 1.0, k, Omega + h)) / (2 * h)
    assert int(np.sign(dM)) == vk_slope(k, -Omega).slope_sign
    ratio = nlse_mass(1.0, 1.0, k, 2 * Omega) / nlse_mass(1.0, 1.0, k, Omega)
    assert math.log2(ratio) == pytest.approx(vk_slope(k, -Omega).exponent, rel=1e-10, abs=1e-12)


def test_nlse_mass_matches_profile():
    sol = nlse_profile(1.0, 1.0, 1.5, 0.7)
    assert nlse_mass(1.0, 1.0, 1.5, sol.Omega) == pytest.approx(sol.mass_quadrature(), rel=1e-9)
