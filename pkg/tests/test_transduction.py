import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.constants import hbar, k

from lambdamem.transduction import (
    FidelityReport,
    TransducerConfig,
    dark_count_model,
    default_thermal_rate,
    evaluate,
    fidelity_at_max_efficiency,
    fidelity_from_snr,
    signal_occupation,
    thermal_occupation,
    transduction_efficiency,
)

MW = 2 * math.pi * 2.25e9


def test_thermal_occupation_examples():
    assert thermal_occupation(MW, 0.020) == pytest.approx(0.0045, abs=2e-4)
    assert thermal_occupation(MW, 0.0) == 0.0
    t_fixed = hbar * MW / (k * math.log(2))
    assert thermal_occupation(MW, t_fixed) == pytest.approx(1.0, rel=1e-12)
    with pytest.raises(ValueError):
        thermal_occupation(MW, -1.0)


def test_transduction_efficiency_examples():
    assert transduction_efficiency(10, 10, 1) == pytest.approx(100 / 121)
    assert transduction_efficiency(10, 10, 0) == 0.0
    assert transduction_efficiency(1, 1, 1) == 0.25
    with pytest.raises(ValueError):
        transduction_efficiency(1, 1, 1.5)


@given(st.floats(0, 1e3), st.floats(0, 1e3), st.floats(0, 1), st.floats(1e-3, 10))
def test_transduction_efficiency_symmetric_and_monotone(cs, cr, eta, step):
    assert transduction_efficiency(cs, cr, eta) == pytest.approx(transduction_efficiency(cr, cs, eta), rel=1e-15)
    assert transduction_efficiency(cs + step, cr, eta) >= transduction_efficiency(cs, cr, eta)
    assert transduction_efficiency(cs, cr + step, eta) >= transduction_efficiency(cs, cr, eta)


def test_signal_occupation():
    kappa = 2 * math.pi * 1e6
    assert signal_occupation(kappa / 100 / (2 * math.pi), kappa) == pytest.approx(0.01)
    assert signal_occupation(0.0, kappa) == 0.0
    cs, ges = 10.0, 2 * math.pi * 500.0
    assert signal_occupation(cs * ges / (2 * math.pi), kappa) == pytest.approx(cs * ges / kappa)
    with pytest.raises(ValueError):
        signal_occupation(kappa / (2 * math.pi * 5), kappa)


def test_fidelity_from_snr():
    assert fidelity_from_snr(1.0) == 0.5
    assert fidelity_from_snr(1e15) == pytest.approx(1.0)
    assert fidelity_from_snr(0.1 / 0.0045) == pytest.approx(1 / 1.045, rel=1e-12)
    with pytest.raises(ValueError):
        fidelity_from_snr(0.0)


def test_fidelity_at_max_efficiency():
    assert fidelity_at_max_efficiency(0.0, 10.0, 10.0, 1.0) == 1.0
    assert fidelity_at_max_efficiency(0.0045, 10.0, 10.0, 1.0) == pytest.approx(0.9955)
    assert fidelity_at_max_efficiency(0.0045, 10.0, 20.0, 1.0) > fidelity_at_max_efficiency(0.0045, 10.0, 10.0, 1.0)
    with pytest.raises(ValueError, match="fidelity_from_snr"):
        fidelity_at_max_efficiency(0.1, 100.0, 1.0, 1.0)


@given(st.floats(1e-4, 0.1), st.floats(10.0, 1e4))
def test_first_order_fidelity_agrees_with_exact(ratio, n_sig_scale):
    n_sig = 1e-3 * n_sig_scale
    n_th = ratio * n_sig
    kappa, gamma_es = 2 * math.pi * 1e6, 1.0
    c_s = n_sig * kappa / gamma_es
    approx = fidelity_at_max_efficiency(n_th, kappa, c_s, gamma_es)
    assert abs(approx - fidelity_from_snr(n_sig / n_th)) < ratio**2


@given(st.floats(1e-6, 1.0), st.floats(1e-4, 1.0), st.floats(1e-3, 10.0), st.floats(1e-9, 1e-3))
def test_dark_count_path_recovers_pre_transduction_snr(n_sig, eta, n_th, t_tr):
    rate = n_th / t_tr
    rep = dark_count_model(rate, eta, t_tr, n_sig)
    assert rep.snr == pytest.approx(n_sig / n_th, rel=1e-12)
    assert rep.fidelity == pytest.approx(fidelity_from_snr(n_sig / n_th), rel=1e-12)


def test_dark_count_examples():
    rep = dark_count_model(1e3, 0.0, 1e-3, 0.1)
    assert rep.dark_count_rate == 0.0 and rep.pmf(0) == 1.0
    rep = dark_count_model(2.0, 1.0, 1.0, 0.1)
    assert rep.mean_dark_counts == 2.0
    np.testing.assert_allclose(rep.pmf([0, 1, 2]), [math.exp(-2), 2 * math.exp(-2), 2 * math.exp(-2)], rtol=1e-12)


@given(st.floats(0.01, 50.0))
def test_poisson_pmf_normalised(mean):
    rep = FidelityReport(0, 0, 1, 0.5, 0.5, mean, mean)
    n = np.arange(0, int(mean + 12 * math.sqrt(mean)) + 20)
    assert rep.pmf(n).sum() == pytest.approx(1.0, abs=1e-9)


def test_config_validation_and_evaluate():
    base = dict(c_s=10, c_r=10, eta_m=1.0, kappa_s=2 * math.pi * 1e6, gamma_es=2 * math.pi * 1e3,
                b_sig=10e3, temperature=0.02, omega_mw=MW)
    rep = evaluate(TransducerConfig(**base))
    assert rep.efficiency == pytest.approx(100 / 121)
    assert rep.signal.n_th == pytest.approx(0.0045, abs=2e-4)
    assert rep.signal.snr == pytest.approx(rep.signal.n_sig / rep.signal.n_th)
    with pytest.raises(ValueError):
        TransducerConfig(**{**base, "eta_m": 1.5})
    with pytest.raises(ValueError):
        TransducerConfig(**{**base, "b_sig": 1e6})
    assert default_thermal_rate(0.0045, 2 * math.pi * 1e6) == pytest.approx(4500.0)
