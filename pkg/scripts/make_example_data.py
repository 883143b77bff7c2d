"""Regenerate the bundled example spectra in src/lambdamem/data."""

import csv
import math
from pathlib import Path

import numpy as np

from lambdamem.spectroscopy import ModelKind, at_doublet, correct_resolution_limited, synthesize

DATA = Path(__file__).resolve().parents[1] / "src" / "lambdamem" / "data"

# resolution-limited dip: Gaussian with the area of a 0.93 %, 56 MHz Lorentzian
MEASURED_PEAK = 0.0027
TRUE_PEAK = 0.0093
TRUE_FWHM_MHZ = 56.0
RABI_KHZ = (20.0, 25.0, 30.0, 35.0, 40.0, 45.0, 50.0, 55.0)


def main():
    lorentz_area = TRUE_PEAK * 0.5 * math.pi * TRUE_FWHM_MHZ
    gauss_fwhm = lorentz_area / (MEASURED_PEAK * math.sqrt(math.pi / (4.0 * math.log(2.0))))
    axis = np.arange(-3000.0, 3000.0 + 2.5, 5.0)
    measured = synthesize(axis, "gaussian", {"center": 0.0, "fwhm": gauss_fwhm, "amplitude": -MEASURED_PEAK,
                                              "baseline_0": 1.0}, axis_unit="mhz", value_unit="transmission")
    measured.to_csv(DATA / "measured_absorption.csv")
    _, corrected = correct_resolution_limited(measured, TRUE_FWHM_MHZ * 1e6, ModelKind.LORENTZIAN)
    corrected.to_csv(DATA / "corrected_absorption.csv")

    doublets = DATA / "at_doublets"
    khz = np.arange(-150.0, 150.0 + 0.25, 0.5)
    rows = []
    for seed, rabi in enumerate(RABI_KHZ):
        name = f"at_doublet_{int(rabi):02d}khz.csv"
        at_doublet(khz, rabi, noise=0.03, seed=seed).to_csv(doublets / name)
        rows.append([name, rabi, seed])
    with (doublets / "manifest.csv").open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["file", "rabi_khz", "seed"])
        w.writerows(rows)


if __name__ == "__main__":
    main()
