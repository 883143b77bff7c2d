"""Synthetic spectra for testing fits and building example data."""

from __future__ import annotations

import numpy as np

from .lineshapes import LineModel, ModelKind
from .spectrum import Spectrum


def synthesize(
    axis: np.ndarray,
    model: LineModel | str,
    params: dict,
    *,
    noise: float = 0.0,
    seed: int | None = None,
    axis_unit: str = "hz",
    value_unit: str = "counts",
) -> Spectrum:
    """Evaluate ``model`` on ``axis`` and add Gaussian noise of std ``noise``.

    Missing baseline parameters default to zero.
    """
    if isinstance(model, str):
        model = LineModel.parse(model)
    full = {"baseline_0": 0.0, "baseline_1": 0.0, **params}
    missing = set(model.param_names) - set(full)
    if missing:
        raise ValueError(f"missing parameters for {model.label}: {sorted(missing)}")
    p = np.array([full[n] for n in model.param_names], float)
    axis = np.asarray(axis, float)
    values = model(axis, p)
    if noise:
        values = values + np.random.default_rng(seed).normal(0.0, noise, len(axis))
    meta = {"model": model.label, "params": full, "noise": noise, "seed": seed}
    return Spectrum(axis, values, axis_unit, value_unit, meta)


def at_doublet(axis_khz: np.ndarray, rabi_khz: float, *, fwhm_khz: float = 8.0, amplitude: float = 1.0,
               center_khz: float = 0.0, noise: float = 0.0, seed: int | None = None) -> Spectrum:
    """Autler-Townes doublet: two equal Lorentzians split by the Rabi frequency."""
    half = 0.5 * rabi_khz
    return synthesize(
        axis_khz, LineModel(ModelKind.SPLIT_PEAK),
        {"center_1": center_khz - half, "fwhm_1": fwhm_khz, "amplitude_1": amplitude,
         "center_2": center_khz + half, "fwhm_2": fwhm_khz, "amplitude_2": amplitude},
        noise=noise * amplitude, seed=seed, axis_unit="khz", value_unit="counts",
    )


def cpt_resonance(axis_khz: np.ndarray, *, peak_fwhm_khz: float = 500.0, dip_centers_khz=(-121.0, 121.0),
                  dip_fwhm_khz: float = 16.0, dip_depth: float = 0.5, amplitude: float = 1.0,
                  noise: float = 0.0, seed: int | None = None) -> Spectrum:
    """Broad resonance carrying narrow coherent-population-trapping dips."""
    k = len(dip_centers_khz)
    params = {"center": 0.0, "fwhm": peak_fwhm_khz, "amplitude": amplitude}
    for j, c in enumerate(dip_centers_khz, start=1):
        params.update({f"dip_center_{j}": c, f"dip_fwhm_{j}": dip_fwhm_khz, f"dip_depth_{j}": dip_depth * amplitude})
    return synthesize(axis_khz, LineModel(ModelKind.PEAK_WITH_DIPS, k), params,
                      noise=noise * amplitude, seed=seed, axis_unit="khz", value_unit="counts")
