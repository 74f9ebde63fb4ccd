"""Frequency inversion, bound-state domains and the double-hump crossover."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nlde.errors import DomainError
from nlde.omega_solver import (
    bound_state_domain,
    center_curvature,
    charge_curve,
    is_bound,
    omega_c,
    scan_grid,
    solve_omega,
)
from nlde.solitary import ModelParams, charge_closed_form, charge_quadrature, energy_closed_form, make_wave


def test_solve_examples():
    (om,) = solve_omega(ModelParams(1.0, 2.0, 1.0, "ss"), 1.0)
    assert om == pytest.approx(1 / math.sqrt(2), abs=1e-12)
    (om,) = solve_omega(ModelParams(1.0, 1.0, 1.0, "vv"), 1.0)
    assert om == pytest.approx(math.cos(0.5), abs=1e-12)
    assert solve_omega(ModelParams(1.0, math.pi, 1.0, "vv"), 1.0) == []
    assert solve_omega(ModelParams(1.0, 4.0, 1.0, "vv"), 1.0) == []


def test_solve_rejects_nonpositive_charge():
    with pytest.raises(DomainError):
        solve_omega(ModelParams(1.0, 1.0, 1.0), 0.0)


@given(st.floats(0.05, 20.0), st.floats(0.1, 5.0))
def test_k1_ss_closed_form(g2, Q):
    (om,) = solve_omega(ModelParams(1.0, g2, 1.0, "ss"), Q)
    assert om == pytest.approx(1 / math.sqrt(1 + Q * Q * g2 * g2 / 4), rel=1e-10)


@given(st.floats(0.05, 3.1), st.floats(0.1, 1.0))
def test_k1_vv_closed_form(g2, Q):
    roots = solve_omega(ModelParams(1.0, g2, 1.0, "vv"), Q)
    assert roots and roots[0] == pytest.approx(math.cos(g2 * Q / 2), abs=1e-10)


@given(
    st.sampled_from([0.5, 1.0, 1.5, 2.0, 2.5, 3.0]),
    st.floats(0.1, 5.0),
    st.floats(0.2, 3.0),
    st.sampled_from(["ss", "vv"]),
)
def test_roots_reproduce_charge(k, g2, Q, ch):
    params = ModelParams(1.0, g2, k, ch)
    roots = solve_omega(params, Q)
    assert roots == sorted(roots)
    for om in roots:
        w = make_wave(params, om)
        assert 0 < om < 1
        assert abs(charge_closed_form(w) - Q) <= 1e-9 * Q or _sign_change_within_ulps(params, om, Q)
        assert charge_quadrature(w) == pytest.approx(Q, rel=1e-7)


def _sign_change_within_ulps(params, om, Q):
    h = 4 * np.spacing(om)
    lo, hi = charge_curve(params, [om - h, om + h]) - Q
    return lo * hi <= 0


def test_finds_both_roots_of_nonmonotone_charge():
    # for k > 2 Q(omega) diverges at both ends of (0, m), so values above the
    # minimum are hit twice
    params = ModelParams(1.0, 1.0, 3.0, "ss")
    om = np.linspace(1e-3, 1 - 1e-6, 20001)
    q = np.array([charge_closed_form(make_wave(params, w)) for w in om])
    Q = 1.05 * q.min()
    expected = int(np.sum(np.diff(np.sign(q - Q)) != 0))
    roots = solve_omega(params, Q)
    assert expected == 2 and len(roots) == 2
    assert [charge_quadrature(make_wave(params, r)) for r in roots] == pytest.approx([Q, Q], rel=1e-8)


def test_scan_grid_inside_open_interval():
    g = scan_grid(2.0)
    assert g.min() > 0 and g.max() < 2.0 and np.all(np.diff(g) > 0)


def test_is_bound_examples():
    assert is_bound(make_wave(ModelParams(1.0, 2.0, 1.0), 1 / math.sqrt(2)), 1.0)
    params = ModelParams(1.0, 3.1, 1.0, "vv")
    (om,) = solve_omega(params, 1.0)
    w = make_wave(params, om)
    assert energy_closed_form(w, 1.0).H_sol == pytest.approx(2 / 3.1 * math.sin(1.55), rel=1e-10)
    assert is_bound(w, 1.0)


def test_marginal_limit_is_not_bound():
    # omega -> m: H_sol -> m Q from below; equality must count as unbound
    w = make_wave(ModelParams(1.0, 1.0, 1.0), 1 - 1e-9)
    obs = energy_closed_form(w)
    assert obs.H_sol == pytest.approx(obs.Q, rel=1e-6)
    assert is_bound(w, obs.H_sol) is False


# ---------------------------------------------------------------- domains


def test_ss_k1_bound_everywhere():
    row = bound_state_domain(1.0, 1.0, np.linspace(0.05, 4.0, 40), "ss")
    assert row.g_min == 0.05 and row.lower_open and row.upper_open
    assert row.g_max is None


def test_vv_k1_window_is_pi():
    row = bound_state_domain(1.0, 1.0, np.linspace(0.05, 3.0, 60), "vv", tol=1e-6)
    assert row.lower_open and not row.upper_open
    assert row.g_max**2 == pytest.approx(math.pi, abs=1e-5)
    assert row.spot_check_error < 1e-8


def test_vv_window_closes_past_two_and_a_half():
    grid = np.linspace(0.05, 4.0, 80)
    assert not bound_state_domain(2.4, 1.0, grid, "vv").empty
    assert bound_state_domain(2.6, 1.0, grid, "vv").empty


def test_domain_refinement_is_stable_under_grid_halving():
    coarse = np.linspace(0.1, 4.0, 21)
    fine = np.linspace(0.1, 4.0, 41)
    cell = coarse[1] - coarse[0]
    a = bound_state_domain(1.8, 1.0, coarse, "vv")
    b = bound_state_domain(1.8, 1.0, fine, "vv")
    assert abs(a.g_min - b.g_min) <= cell and abs(a.g_max - b.g_max) <= cell
    assert a.g_min <= a.g_max


def test_domain_grid_must_ascend():
    with pytest.raises(DomainError):
        bound_state_domain(1.0, 1.0, [1.0, 0.5], "ss")


# ---------------------------------------------------------------- double hump


def _curvature_oracle(k, om, m=1.0):
    # rho ~ rho(0) [1 + (beta_k x)^2 (alpha^2 (2 + 1/k) - 1/k)] from the small-x series
    a2 = (m - om) / (m + om)
    return a2 * (2 + 1 / k) - 1 / k


@given(st.floats(0.3, 4.0), st.floats(0.02, 0.98))
def test_center_curvature_matches_series(k, om):
    w = make_wave(ModelParams(1.0, 1.0, k, "ss"), om)
    assert center_curvature(w) == pytest.approx(_curvature_oracle(k, om), rel=1e-10, abs=1e-12)


@pytest.mark.parametrize("k", [0.5, 1.0, 1.5, 2.0, 3.0])
def test_omega_c_oracle(k):
    oc = omega_c(k)
    assert oc == pytest.approx(k / (k + 1), abs=1e-8)
    above = make_wave(ModelParams(1.0, 1.0, k, "ss"), oc + 1e-3)
    below = make_wave(ModelParams(1.0, 1.0, k, "ss"), oc - 1e-3)
    assert center_curvature(above) < 0 < center_curvature(below)


def test_omega_c_scales_with_mass():
    assert omega_c(2.0, m=3.0) == pytest.approx(2.0, rel=1e-10)


def test_fig5_bracket():
    assert 0.3 < omega_c(1.0) < 0.9


def test_vv_never_double_humped():
    assert omega_c(1.0, channel="vv") is None
    for k in (0.5, 1.0, 1.5, 2.0, 2.5, 3.0):
        for om in np.linspace(0.05, 0.95, 19):
            assert center_curvature(make_wave(ModelParams(1.0, 1.0, k, "vv"), om)) < 0
