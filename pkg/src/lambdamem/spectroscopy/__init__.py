"""Spectrum reduction and line fitting."""

from .absorption import (
    ConcentrationInput,
    cavity_enhanced_od,
    concentration_from_absorption,
    correct_resolution_limited,
    hyperfine_constant,
    integrated_absorption,
    od_forecast,
    peak_alpha_from_concentration,
    t_centre_concentration_input,
    transmission_to_alpha,
    transmission_to_od,
)
from .fitting import FitError, LineFit, fit_cpt, fit_line, fit_split_peak
from .lineshapes import LineModel, ModelKind, gaussian, lineshape_area, lorentzian
from .spectrum import AXIS_UNITS, Spectrum, SpectrumFormatError
from .synthetic import at_doublet, cpt_resonance, synthesize

__all__ = [
    "AXIS_UNITS", "ConcentrationInput", "FitError", "LineFit", "LineModel", "ModelKind",
    "Spectrum", "SpectrumFormatError", "at_doublet", "cavity_enhanced_od",
    "concentration_from_absorption", "correct_resolution_limited", "cpt_resonance", "fit_cpt",
    "fit_line", "fit_split_peak", "gaussian", "hyperfine_constant", "integrated_absorption",
    "lineshape_area", "lorentzian", "od_forecast", "peak_alpha_from_concentration", "synthesize",
    "t_centre_concentration_input", "transmission_to_alpha", "transmission_to_od",
]
