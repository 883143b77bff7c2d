import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lambdamem.cavity_memory import (
    CavityMode,
    CavityParams,
    cooperativity,
    fast_limit_check,
    optimal_pulse_duration,
    overall_efficiency,
    retrieval_efficiency_integral,
    simulate_cavity_memory,
)


def gaussian_input(t_s=0.5, fwhm=0.2, n=4001):
    t = np.linspace(0.0, t_s, n)
    sigma = fwhm / (2 * math.sqrt(math.log(2)))
    return t, np.exp(-((t - t_s / 2) ** 2) / (2 * sigma**2))


def test_cooperativity_examples():
    assert cooperativity(CavityParams(kappa=1.0, g=1.0, n_atoms=1, gamma_e=1.0)) == 1.0
    a = CavityParams(2.0, 0.3, 10, 0.7)
    b = CavityParams(2.0, 0.3, 40, 0.7)
    assert b.cooperativity() == pytest.approx(4 * a.cooperativity(), rel=1e-15)
    p = CavityParams.for_cooperativity(10.0, kappa=2 * math.pi * 1e9, gamma_e=2 * math.pi * 13.5e6, n_atoms=1e6)
    assert p.cooperativity() == pytest.approx(10.0, abs=1e-12)


def test_params_validation():
    with pytest.raises(ValueError):
        CavityParams(kappa=0.0, g=1.0, n_atoms=1, gamma_e=1.0)
    with pytest.raises(ValueError):
        CavityParams(kappa=math.inf, g=1.0, n_atoms=1, gamma_e=1.0)


def test_retrieval_integral_closed_form_example():
    g = math.sqrt(10 * 1000.0)
    eta = retrieval_efficiency_integral(g, 1, 1000.0, 1.0, 0.5)
    assert eta == pytest.approx(10 / 11 * (1 - math.exp(-11)), rel=1e-6)
    assert eta == pytest.approx(0.90908, abs=1e-5)


def test_retrieval_integral_limits():
    g = math.sqrt(3.0 * 100.0)
    assert retrieval_efficiency_integral(g, 1, 100.0, 1.0, 200.0) == pytest.approx(3 / 4, rel=1e-9)
    assert retrieval_efficiency_integral(lambda t: 0.0, 1, 100.0, 1.0, 1.0) == 0.0
    assert retrieval_efficiency_integral(g, 1, 100.0, 1.0, 0.0) == 0.0
    with pytest.raises(ValueError):
        retrieval_efficiency_integral(g, 1, 100.0, 1.0, -1.0)


def test_retrieval_integral_sampled_matches_callable():
    t = np.linspace(0, 1.0, 4001)
    g = 3.0 * (1 + 0.5 * np.sin(3 * t))
    sampled = retrieval_efficiency_integral(g, 4, 50.0, 1.0, 1.0)
    exact = retrieval_efficiency_integral(lambda x: 3.0 * (1 + 0.5 * math.sin(3 * x)), 4, 50.0, 1.0, 1.0)
    assert sampled == pytest.approx(exact, rel=1e-8)


def test_overall_efficiency_examples():
    assert overall_efficiency(10, 1.0, math.inf, math.inf) == pytest.approx(100 / 121, rel=1e-15)
    assert overall_efficiency(0, 1.0, 1.0, 1.0) == 0.0
    assert overall_efficiency(10, 1.0, 0.5, 0.5) == pytest.approx(100 / 121 * (1 - math.exp(-11)) ** 2, rel=1e-15)
    assert overall_efficiency(10, 1.0, 0.5, 0.5) == pytest.approx(0.82642, abs=1e-5)


@given(st.floats(0, 100), st.floats(0.01, 5), st.floats(0.01, 5), st.floats(0.001, 1))
def test_overall_efficiency_monotone_and_bounded(c, ts, tr, step):
    base = overall_efficiency(c, 1.0, ts, tr)
    assert base <= (c / (1 + c)) ** 2 + 1e-15
    assert overall_efficiency(c + step, 1.0, ts, tr) >= base
    assert overall_efficiency(c, 1.0, ts + step, tr) >= base
    assert overall_efficiency(c, 1.0, ts, tr + step) >= base


def test_optimal_pulse_duration():
    assert optimal_pulse_duration(1, 2.0) == 0.5
    assert optimal_pulse_duration(10, 2 * math.pi * 13.5e6) == pytest.approx(1.18e-9, rel=5e-3)
    assert optimal_pulse_duration(20, 1.0) == optimal_pulse_duration(10, 1.0) / 2
    with pytest.raises(ValueError):
        optimal_pulse_duration(0, 1.0)


def test_fast_limit_check():
    assert fast_limit_check(2 * 3.0 * 10, 3.0, 10)
    assert not fast_limit_check(3.0 * 10, 3.0, 10)
    gamma = 2 * math.pi * 27e6
    omega = 2 * math.pi * 300e6
    assert fast_limit_check(omega, gamma, 10) == (omega > gamma * 10)


def test_empty_cavity_reflects_input():
    t, e = gaussian_input()
    params = CavityParams(kappa=1000.0, g=1.0, n_atoms=1, gamma_e=1.0)
    run, eta = simulate_cavity_memory(params, t, e, t_r=0.5, g_schedule=lambda x: 0.0 * x)
    assert eta == 0.0
    # with E_out = −E_in + √(2κ)E and E = √(2κ)E_in/κ the empty cavity returns +E_in
    np.testing.assert_allclose(run.E_out[: len(t)], e, atol=1e-12)


@pytest.mark.parametrize("mode", list(CavityMode))
def test_zero_energy_input_is_rejected(mode):
    t = np.linspace(0, 0.5, 101)
    params = CavityParams.for_cooperativity(10, 1000.0, 1.0)
    with pytest.raises(ValueError, match="zero energy"):
        simulate_cavity_memory(params, t, np.zeros_like(t), t_r=0.2, mode=mode)


def test_full_and_adiabatic_models_agree():
    t, e = gaussian_input()
    params = CavityParams.for_cooperativity(10, 1e6, 1.0)
    _, eta_full = simulate_cavity_memory(params, t, e, t_r=0.5, mode=CavityMode.FULL_ODE)
    _, eta_ad = simulate_cavity_memory(params, t, e, t_r=0.5, mode=CavityMode.ADIABATIC_CAVITY)
    assert eta_full == pytest.approx(eta_ad, rel=1e-2)


def test_storage_and_retrieval_are_symmetric():
    t, e = gaussian_input()
    run, eta = simulate_cavity_memory(CavityParams.for_cooperativity(10, 1000.0, 1.0), t, e, t_r=0.5)
    eta_r = eta / run.eta_storage
    assert run.eta_storage == pytest.approx(eta_r, rel=2e-2)


def test_lossless_cavity_conserves_norm():
    t, e = gaussian_input()
    params = CavityParams(kappa=1000.0, g=100.0, n_atoms=1, gamma_e=1e-9)
    run, _ = simulate_cavity_memory(params, t, e, t_r=0.5, mode=CavityMode.FULL_ODE)
    remaining = abs(run.S[-1]) ** 2 + abs(run.P[-1]) ** 2 + abs(run.E_cav[-1]) ** 2
    assert run.output_energy() + remaining == pytest.approx(run.input_energy, rel=1e-2)


def test_window_and_grid_validation():
    t, e = gaussian_input(n=101)
    params = CavityParams.for_cooperativity(10, 1000.0, 1.0)
    with pytest.raises(ValueError):
        simulate_cavity_memory(params, t, e, t_r=-0.1)
    with pytest.raises(ValueError):
        simulate_cavity_memory(params, t, e, t_s=0.3, t_r=0.1)
    with pytest.raises(ValueError):
        simulate_cavity_memory(params, t ** 2, e, t_r=0.1)


def test_slow_user_control_warns():
    t, e = gaussian_input(n=201)
    params = CavityParams.for_cooperativity(10, 1000.0, 1.0)
    with pytest.warns(UserWarning, match="fast limit"):
        simulate_cavity_memory(params, t, e, t_r=0.1, omega=lambda x: 1.0 + 0 * x)
