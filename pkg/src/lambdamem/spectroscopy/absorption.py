"""Absorption reduction: resolution correction, optical depth and concentration.

Concentration follows the integrated-absorption relation

    [c] = (g1/g2) · 8π n² τ_ZP · ∫α dν / λ²,   τ_ZP = τ / (η_R η_DW)

with ∫α dν in Hz·cm⁻¹, λ in cm and [c] in cm⁻³.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..lambda_system import TCentrePreset
from .lineshapes import ModelKind, gaussian, lineshape_area, lorentzian
from .spectrum import Spectrum


@dataclass(frozen=True)
class ConcentrationInput:
    integrated_area: float  # Hz·cm⁻¹
    lifetime: float  # s
    eta_r: float
    eta_dw: float
    degeneracy_ratio: float = 2.0  # g1/g2
    refractive_index: float = 3.45
    wavelength: float = 1326e-7  # cm

    def __post_init__(self):
        if min(self.integrated_area, self.lifetime, self.degeneracy_ratio,
               self.refractive_index, self.wavelength) <= 0:
            raise ValueError("concentration inputs must be positive")
        if not (0 < self.eta_r <= 1 and 0 < self.eta_dw <= 1):
            raise ValueError("eta_r and eta_dw must lie in (0, 1]")

    @property
    def zero_phonon_lifetime(self) -> float:
        return self.lifetime / (self.eta_r * self.eta_dw)

    @property
    def prefactor(self) -> float:
        """[c] per unit integrated area (cm⁻³ per Hz·cm⁻¹)."""
        return (self.degeneracy_ratio * 8.0 * math.pi * self.refractive_index**2
                * self.zero_phonon_lifetime / self.wavelength**2)


def t_centre_concentration_input(
    integrated_area: float, eta_r: float = 1.0, degeneracy_ratio: float = 2.0
) -> ConcentrationInput:
    p = TCentrePreset()
    return ConcentrationInput(
        integrated_area, p.tx0_lifetime, eta_r, p.debye_waller, degeneracy_ratio,
        p.refractive_index, p.wavelength * 100.0,
    )


def concentration_from_absorption(inp: ConcentrationInput) -> float:
    return inp.prefactor * inp.integrated_area


def integrated_absorption(alpha: Spectrum) -> float:
    """∫α dν in Hz·cm⁻¹ of an absorption-coefficient spectrum (any axis unit)."""
    nu = alpha.axis_in("hz")
    return abs(float(np.trapezoid(alpha.values, nu)))


def transmission_to_od(dip_depth: float, sample_length: float) -> tuple[float, float]:
    """Optical depth and absorption coefficient (cm⁻¹) of a fractional dip."""
    if not 0.0 < dip_depth < 1.0:
        raise ValueError(f"dip depth must lie in (0, 1), got {dip_depth}")
    if not sample_length > 0:
        raise ValueError("sample length must be > 0")
    d = -math.log1p(-dip_depth)
    return d, d / sample_length


def transmission_to_alpha(s: Spectrum, sample_length: float) -> Spectrum:
    """Absorption-coefficient spectrum α = −ln(T)/L (cm⁻¹) from transmission."""
    if not sample_length > 0:
        raise ValueError("sample length must be > 0")
    if np.any(s.values <= 0):
        raise ValueError("transmission must be > 0 everywhere")
    return s.with_values(-np.log(s.values) / sample_length, "alpha_cm-1")


def _shape(kind: ModelKind, x, center, fwhm):
    if kind is ModelKind.LORENTZIAN:
        return lorentzian(x, center, fwhm)
    if kind is ModelKind.GAUSSIAN:
        return gaussian(x, center, fwhm)
    raise ValueError(f"resolution correction supports lorentzian or gaussian, not {kind.value}")


def correct_resolution_limited(
    measured: Spectrum,
    true_fwhm: float,
    model: ModelKind = ModelKind.LORENTZIAN,
    baseline: float | None = 1.0,
) -> tuple[float, Spectrum]:
    """Reshape a resolution-broadened transmission dip to its true linewidth.

    The absorbed fraction ``baseline − T`` is integrated over the axis and a
    ``model`` line of FWHM ``true_fwhm`` (Hz) with the same area on the same
    axis is returned, as its peak absorption and as a transmission spectrum.
    ``baseline=None`` estimates the off-resonant level from the edge samples.
    """
    if not true_fwhm > 0:
        raise ValueError("true_fwhm must be > 0")
    nu = measured.axis_in("hz")
    if baseline is None:
        n = max(2, len(nu) // 10)
        baseline = float(np.median(np.r_[measured.values[:n], measured.values[-n:]]))
    absorbed = baseline - measured.values
    area = float(np.trapezoid(absorbed, nu))
    if nu[0] > nu[-1]:
        area = -area
    if not area > 0:
        raise ValueError("measured dip has no positive absorption area")
    center = float(nu[int(np.argmax(absorbed))])
    shape = _shape(model, nu, center, true_fwhm)
    shape_area = abs(float(np.trapezoid(shape, nu)))
    peak = area / shape_area
    corrected = Spectrum(
        measured.axis, baseline - peak * shape, measured.axis_unit, measured.value_unit,
        {**measured.metadata, "corrected_fwhm_hz": true_fwhm, "model": model.value},
    )
    return peak, corrected


def peak_alpha_from_concentration(concentration: float, strength: ConcentrationInput, linewidth_fwhm: float,
                                  model: ModelKind = ModelKind.LORENTZIAN) -> float:
    """Peak absorption coefficient (cm⁻¹) of a line of given FWHM (Hz)."""
    if concentration < 0 or not linewidth_fwhm > 0:
        raise ValueError("concentration must be >= 0 and linewidth > 0")
    area = concentration / strength.prefactor
    return area / lineshape_area(model, linewidth_fwhm)


def od_forecast(
    concentration: float,
    length: float,
    linewidth_fwhm: float,
    strength: ConcentrationInput,
    orientation_penalty: float = 1.0,
) -> float:
    """Resonant optical depth of a sample of ``length`` cm.

    ``strength`` supplies lifetime, efficiencies, degeneracy ratio, index and
    wavelength; its ``integrated_area`` is ignored.
    """
    if not 1.0 <= orientation_penalty <= 12.0:
        raise ValueError("orientation penalty must lie in [1, 12]")
    if length < 0:
        raise ValueError("length must be >= 0")
    alpha = peak_alpha_from_concentration(concentration, strength, linewidth_fwhm)
    return alpha * length / orientation_penalty


def cavity_enhanced_od(d_single_pass: float, finesse: float) -> float:
    """Effective optical depth inside an impedance-free resonator: (2F/π)·d."""
    if finesse < 1:
        raise ValueError("finesse must be >= 1")
    if d_single_pass < 0:
        raise ValueError("optical depth must be >= 0")
    return 2.0 * finesse / math.pi * d_single_pass


def hyperfine_constant(pump_freq: float, probe_freq_at_dip: float) -> float:
    """Signed probe−pump offset (Hz) at which the CPT dip appears."""
    return probe_freq_at_dip - pump_freq
