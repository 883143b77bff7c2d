"""Unit-tagged one-dimensional spectra and their CSV representation.

CSV format: a header ``axis_<unit>,value_<unit>`` followed by two
comma-separated decimal columns, UTF-8, LF line endings.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT, e as ELEMENTARY_CHARGE, h as PLANCK

# Multiplier converting each axis unit to Hz.
AXIS_UNITS = {
    "hz": 1.0,
    "khz": 1e3,
    "mhz": 1e6,
    "ghz": 1e9,
    "mev": 1e-3 * ELEMENTARY_CHARGE / PLANCK,
    "cm-1": 100.0 * SPEED_OF_LIGHT,
}

_HEADER = re.compile(r"^axis_([a-z0-9\-]+),value_([a-z0-9_\-]+)$")


class SpectrumFormatError(ValueError):
    """Malformed spectrum file or inconsistent spectrum arrays."""


@dataclass(frozen=True)
class Spectrum:
    axis: np.ndarray
    values: np.ndarray
    axis_unit: str = "hz"
    value_unit: str = "transmission"
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        axis = np.asarray(self.axis, dtype=float)
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "axis", axis)
        object.__setattr__(self, "values", values)
        if self.axis_unit not in AXIS_UNITS:
            raise SpectrumFormatError(f"unknown axis unit {self.axis_unit!r}; expected one of {sorted(AXIS_UNITS)}")
        if axis.ndim != 1 or axis.shape != values.shape:
            raise SpectrumFormatError("axis and values must be 1-D arrays of equal length")
        if len(axis) < 8:
            raise SpectrumFormatError(f"need at least 8 samples, got {len(axis)}")
        if not (np.all(np.isfinite(axis)) and np.all(np.isfinite(values))):
            raise SpectrumFormatError("axis and values must be finite")
        step = np.diff(axis)
        if not (np.all(step > 0) or np.all(step < 0)):
            raise SpectrumFormatError("axis must be strictly monotone")

    def __len__(self) -> int:
        return len(self.axis)

    def axis_in(self, unit: str) -> np.ndarray:
        if unit not in AXIS_UNITS:
            raise SpectrumFormatError(f"unknown axis unit {unit!r}")
        return self.axis * (AXIS_UNITS[self.axis_unit] / AXIS_UNITS[unit])

    def to_unit(self, unit: str) -> "Spectrum":
        return Spectrum(self.axis_in(unit), self.values, unit, self.value_unit, dict(self.metadata))

    def with_values(self, values, value_unit: str | None = None) -> "Spectrum":
        return Spectrum(self.axis, values, self.axis_unit, value_unit or self.value_unit, dict(self.metadata))

    def to_csv(self, path: str | Path) -> None:
        lines = [f"axis_{self.axis_unit},value_{self.value_unit}"]
        lines += [f"{a!r},{v!r}" for a, v in zip(self.axis.tolist(), self.values.tolist())]
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")

    @classmethod
    def from_csv(cls, path: str | Path) -> "Spectrum":
        text = Path(path).read_text(encoding="utf-8")
        rows = text.splitlines()
        if not rows:
            raise SpectrumFormatError(f"{path}: empty file")
        m = _HEADER.match(rows[0].strip())
        if not m:
            raise SpectrumFormatError(f"{path}: header must look like 'axis_<unit>,value_<unit>', got {rows[0]!r}")
        axis, values = [], []
        for n, row in enumerate(rows[1:], start=2):
            if not row.strip():
                continue
            parts = row.split(",")
            if len(parts) != 2:
                raise SpectrumFormatError(f"{path}:{n}: expected two columns")
            try:
                axis.append(float(parts[0]))
                values.append(float(parts[1]))
            except ValueError as exc:
                raise SpectrumFormatError(f"{path}:{n}: {exc}") from None
        return cls(np.array(axis), np.array(values), m.group(1), m.group(2), {"source": str(path)})
