"""Microwave-to-optical transduction figures of merit.

Unit bridge: signal bandwidths are FWHM values in Hz while κ_s and γ_es are
angular rates, so the signal occupation is n_sig = 2π·B_sig/κ_s.  The
efficiency-optimal bandwidth then reads 2π·B_sig = C_s·γ_es.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.constants import hbar, k as k_boltzmann
from scipy.stats import poisson

TWO_PI = 2.0 * math.pi


class TransductionScheme(enum.Enum):
    """Which spin levels carry the microwave photon; informational only."""

    NUCLEAR_WITH_TRANSFER = "nuclear-with-transfer"
    ELECTRON_LAMBDA = "electron-lambda"
    RESOLVED_HYPERFINE = "resolved-hyperfine"


@dataclass(frozen=True)
class TransducerConfig:
    c_s: float
    c_r: float
    eta_m: float
    kappa_s: float  # rad/s
    gamma_es: float  # rad/s
    b_sig: float  # Hz
    temperature: float  # K
    omega_mw: float  # rad/s
    t_s: float = 0.0  # s
    t_r: float = 0.0  # s
    scheme: TransductionScheme = TransductionScheme.ELECTRON_LAMBDA

    def __post_init__(self):
        if not 0.0 <= self.eta_m <= 1.0:
            raise ValueError(f"eta_m must be in [0, 1], got {self.eta_m}")
        if min(self.c_s, self.c_r, self.b_sig, self.temperature, self.t_s, self.t_r) < 0:
            raise ValueError("cooperativities, bandwidth, temperature and times must be >= 0")
        if not (self.kappa_s > 0 and self.gamma_es > 0 and self.omega_mw > 0):
            raise ValueError("kappa_s, gamma_es and omega_mw must be > 0")
        _check_bandwidth(self.b_sig, self.kappa_s)


@dataclass(frozen=True)
class FidelityReport:
    n_th: float
    n_sig: float
    snr: float
    fidelity: float
    fidelity_approx: float
    dark_count_rate: float = 0.0  # 1/s
    mean_dark_counts: float = 0.0

    def pmf(self, n) -> np.ndarray:
        """Poisson probability of ``n`` dark counts in the transduction window."""
        return poisson.pmf(n, self.mean_dark_counts)


@dataclass(frozen=True)
class TransductionReport:
    efficiency: float
    signal: FidelityReport  # thermal-occupation view before transduction
    dark_counts: FidelityReport  # Poisson dark-count view after transduction


def _check_bandwidth(b_sig: float, kappa_s: float):
    if b_sig >= kappa_s / (TWO_PI * 10.0):
        raise ValueError(
            f"signal bandwidth {b_sig:.4g} Hz is not << κ_s/2π = {kappa_s / TWO_PI:.4g} Hz "
            "(need b_sig < κ_s/(2π·10) for n_sig = 2πB_sig/κ_s to hold)"
        )


def thermal_occupation(omega: float, temperature: float) -> float:
    """Bose-Einstein occupation of a mode at angular frequency ``omega``."""
    if not omega > 0:
        raise ValueError("omega must be > 0")
    if temperature < 0:
        raise ValueError("temperature must be >= 0")
    if temperature == 0:
        return 0.0
    return 1.0 / math.expm1(hbar * omega / (k_boltzmann * temperature))


def transduction_efficiency(c_s: float, c_r: float, eta_m: float) -> float:
    if min(c_s, c_r) < 0 or not 0.0 <= eta_m <= 1.0:
        raise ValueError("cooperativities must be >= 0 and eta_m in [0, 1]")
    return eta_m * c_s * c_r / ((1.0 + c_s) * (1.0 + c_r))


def signal_occupation(b_sig: float, kappa_s: float) -> float:
    if b_sig < 0 or not kappa_s > 0:
        raise ValueError("b_sig must be >= 0 and kappa_s > 0")
    _check_bandwidth(b_sig, kappa_s)
    return TWO_PI * b_sig / kappa_s


def fidelity_from_snr(snr: float) -> float:
    if not snr > 0:
        raise ValueError(f"snr must be > 0, got {snr}")
    return 1.0 / (1.0 + 1.0 / snr)


def fidelity_at_max_efficiency(n_th: float, kappa_s: float, c_s: float, gamma_es: float) -> float:
    """First-order fidelity 1 − n_th·κ_s/(C_s·γ_es) at the efficiency-optimal bandwidth."""
    if not c_s * gamma_es > 0:
        raise ValueError("C_s·gamma_es must be > 0")
    x = n_th * kappa_s / (c_s * gamma_es)
    if x >= 0.5:
        raise ValueError(
            f"n_th·κ_s/(C_s·γ_es) = {x:.3g} >= 0.5: the first-order form is invalid, "
            "use fidelity_from_snr(n_sig/n_th) instead"
        )
    return 1.0 - x


def default_thermal_rate(n_th: float, kappa_s: float) -> float:
    """Thermal photon arrival rate R = n_th·κ_s/2π (1/s)."""
    return n_th * kappa_s / TWO_PI


def dark_count_model(rate_thermal: float, eta: float, t_tr: float, n_sig: float) -> FidelityReport:
    """Thermal photons treated as Poisson dark counts at rate D = R·η.

    The post-transduction SNR is η·n_sig/(D·T_tr) = n_sig/(R·T_tr).
    """
    if min(rate_thermal, eta, t_tr, n_sig) < 0:
        raise ValueError("dark-count inputs must be >= 0")
    d = rate_thermal * eta
    equivalent_nth = rate_thermal * t_tr
    snr = math.inf if equivalent_nth == 0 else n_sig / equivalent_nth
    if snr == 0:
        fidelity = approx = 0.0
    else:
        fidelity = fidelity_from_snr(snr)
        approx = 1.0 - 1.0 / snr
    return FidelityReport(equivalent_nth, n_sig, snr, fidelity, approx, d, d * t_tr)


def evaluate(config: TransducerConfig) -> TransductionReport:
    n_th = thermal_occupation(config.omega_mw, config.temperature)
    n_sig = signal_occupation(config.b_sig, config.kappa_s)
    eta = transduction_efficiency(config.c_s, config.c_r, config.eta_m)
    snr = math.inf if n_th == 0 else n_sig / n_th
    fidelity = fidelity_from_snr(snr) if snr > 0 else 0.0
    approx = 1.0 - n_th / n_sig if n_sig > 0 else 0.0
    signal = FidelityReport(n_th, n_sig, snr, fidelity, approx)
    rate = default_thermal_rate(n_th, config.kappa_s)
    dark = dark_count_model(rate, eta, config.t_s + config.t_r, n_sig)
    return TransductionReport(eta, signal, dark)
