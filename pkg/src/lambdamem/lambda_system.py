"""Three-level system parameters, pulse/control descriptions and T-centre constants.

Unit convention: every rate is stored as an angular frequency (rad/s).  Any
ordinary frequency (Hz) carries an explicit ``_over_2pi`` / ``_hz`` name or is
documented as a FWHM bandwidth in Hz.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

TWO_PI = 2.0 * math.pi
LN2 = math.log(2.0)

# Intensity-FWHM time-bandwidth product of a Fourier-limited Gaussian.
GAUSSIAN_TBP = 2.0 * LN2 / math.pi


class Scheme(enum.Enum):
    LAMBDA = "lambda"
    V = "v"


@dataclass(frozen=True)
class LambdaParams:
    """Rates and wiring of a Λ (or V) three-level system.

    ``gamma_e`` is derived, always exactly ``gamma_big / 2``.
    """

    gamma_big: float
    gamma_s: float = 0.0
    splitting_g1g2: float = 0.0
    scheme: Scheme = Scheme.LAMBDA
    signal_transition: str = "A"
    control_transition: str = "B"

    def __post_init__(self):
        if not self.gamma_big > 0:
            raise ValueError(f"gamma_big must be > 0, got {self.gamma_big}")
        if self.gamma_s < 0:
            raise ValueError(f"gamma_s must be >= 0, got {self.gamma_s}")
        if self.signal_transition == self.control_transition:
            raise ValueError("signal and control must drive different transitions")

    @property
    def gamma_e(self) -> float:
        return self.gamma_big / 2.0

    @classmethod
    def from_linewidth(cls, linewidth_over_2pi: float, **kwargs) -> "LambdaParams":
        """Build from an ordinary-frequency linewidth Γ/2π in Hz."""
        return cls(gamma_big=TWO_PI * linewidth_over_2pi, **kwargs)


@dataclass(frozen=True)
class TCentrePreset:
    tx0_lifetime: float = 0.94e-6
    debye_waller: float = 0.23
    radiative_efficiency_bounds: tuple[float, float] = (0.03, 1.0)
    wavelength: float = 1326e-9
    refractive_index: float = 3.45
    homogeneous_linewidth_over_2pi: float = 27e6
    electron_t2: float = 2.1e-3
    nuclear_t2: float = 1.1
    mw_frequency_over_2pi: float = 2.25e9
    hyperfine_constants: tuple[float, float] = (-2.93e6, -2.57e6)
    ensemble_linewidth: float = 56e6

    def __post_init__(self):
        positive = (
            self.tx0_lifetime, self.debye_waller, self.wavelength, self.refractive_index,
            self.homogeneous_linewidth_over_2pi, self.electron_t2, self.nuclear_t2,
            self.mw_frequency_over_2pi, self.ensemble_linewidth,
        )
        if any(v <= 0 for v in positive):
            raise ValueError("T-centre preset values must be positive")
        lo, hi = self.radiative_efficiency_bounds
        if not 0 < lo <= hi <= 1:
            raise ValueError("radiative efficiency bounds must satisfy 0 < lo <= hi <= 1")

    @property
    def lifetime_limited_linewidth(self) -> float:
        return lifetime_limited_linewidth(self.tx0_lifetime)

    def lambda_params(self, gamma_s: float = 0.0) -> LambdaParams:
        """Optical Λ system with the homogeneous linewidth used for memory estimates."""
        return LambdaParams.from_linewidth(self.homogeneous_linewidth_over_2pi, gamma_s=gamma_s)


def lifetime_limited_linewidth(lifetime: float) -> float:
    """FWHM linewidth in Hz of a transition limited only by its lifetime."""
    if not lifetime > 0:
        raise ValueError(f"lifetime must be > 0, got {lifetime}")
    return 1.0 / (TWO_PI * lifetime)


def make_t_centre_preset() -> TCentrePreset:
    return TCentrePreset()


class PulseShape(enum.Enum):
    GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class PulseSpec:
    """Signal pulse with unit energy; widths are intensity FWHMs."""

    bandwidth_fwhm: float
    duration_fwhm: float
    arrival_time: float = 0.0
    shape: PulseShape = PulseShape.GAUSSIAN

    def __post_init__(self):
        if not (self.bandwidth_fwhm > 0 and self.duration_fwhm > 0):
            raise ValueError("pulse bandwidth and duration must be > 0")

    @classmethod
    def fourier_limited(cls, bandwidth_fwhm: float, arrival_time: float = 0.0) -> "PulseSpec":
        return cls(bandwidth_fwhm, GAUSSIAN_TBP / bandwidth_fwhm, arrival_time)

    @property
    def energy(self) -> float:
        return 1.0

    def amplitude(self, t) -> np.ndarray:
        """Field amplitude normalised so that ∫|E|² dt = 1 (t in seconds)."""
        tau = self.duration_fwhm
        norm = (4.0 * LN2 / math.pi) ** 0.25 / math.sqrt(tau)
        t = np.asarray(t, dtype=float)
        return norm * np.exp(-2.0 * LN2 * (t - self.arrival_time) ** 2 / tau**2)


@dataclass(frozen=True)
class TanhRamp:
    """Smooth switch ``Ω0·(1 ∓ tanh((t − center)/ramp_time))/2``.

    ``direction`` is ``"down"`` (on → off) or ``"up"`` (off → on).  ``center``
    defaults to the segment midpoint.
    """

    ramp_time: float
    direction: str = "down"
    center: float | None = None

    def __post_init__(self):
        if not self.ramp_time > 0:
            raise ValueError("ramp_time must be > 0")
        if self.direction not in ("down", "up"):
            raise ValueError(f"unknown ramp direction {self.direction!r}")


@dataclass(frozen=True)
class Segment:
    start: float
    end: float
    rabi: complex
    ramp: TanhRamp | None = None  # None means a hard step

    def __post_init__(self):
        if not self.end > self.start:
            raise ValueError(f"segment end {self.end} must exceed start {self.start}")

    @property
    def ramp_center(self) -> float:
        if self.ramp is None or self.ramp.center is None:
            return 0.5 * (self.start + self.end)
        return self.ramp.center

    def envelope(self, t: np.ndarray) -> np.ndarray:
        inside = (t >= self.start) & (t < self.end)
        if self.ramp is None:
            return inside.astype(float)
        sign = -1.0 if self.ramp.direction == "down" else 1.0
        u = (t - self.ramp_center) / self.ramp.ramp_time
        return np.where(inside, 0.5 * (1.0 + sign * np.tanh(u)), 0.0)

    def _primitive(self, t: float) -> float:
        # antiderivative of the envelope (without the inside mask)
        if self.ramp is None:
            return t
        tr = self.ramp.ramp_time
        u = (t - self.ramp_center) / tr
        # log(cosh(u)) evaluated without overflow
        logcosh = abs(u) + math.log1p(math.exp(-2.0 * abs(u))) - LN2
        sign = -1.0 if self.ramp.direction == "down" else 1.0
        return 0.5 * (t + sign * tr * logcosh)

    def area(self, t0: float, t1: float) -> float:
        lo, hi = max(t0, self.start), min(t1, self.end)
        if hi <= lo:
            return 0.0
        return abs(self.rabi) * (self._primitive(hi) - self._primitive(lo))


@dataclass(frozen=True)
class ControlSchedule:
    """Piecewise control Rabi frequency Ω(t) in rad/s on non-overlapping segments."""

    segments: tuple[Segment, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        for a, b in zip(self.segments, self.segments[1:]):
            if b.start < a.end:
                raise ValueError("control segments must be time-ordered and non-overlapping")

    @classmethod
    def constant(cls, rabi: complex, start: float, end: float) -> "ControlSchedule":
        return cls((Segment(start, end, rabi),))

    @classmethod
    def zero(cls) -> "ControlSchedule":
        return cls(())

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape, dtype=complex)
        for seg in self.segments:
            out = out + seg.rabi * seg.envelope(t)
        return out

    def max_rabi(self) -> float:
        return max((abs(s.rabi) for s in self.segments), default=0.0)

    @property
    def domain(self) -> tuple[float, float]:
        if not self.segments:
            return (0.0, 0.0)
        return (self.segments[0].start, self.segments[-1].end)

    def breakpoints(self) -> list[float]:
        pts: set[float] = set()
        for s in self.segments:
            if s.ramp is None:
                pts.update((s.start, s.end))
        return sorted(pts)


def pulse_area(schedule: ControlSchedule, window: Sequence[float]) -> float:
    """∫|Ω(t)| dt over ``window = (t0, t1)``; exact for steps and tanh ramps."""
    t0, t1 = window
    if t1 <= t0:
        return 0.0
    return sum(seg.area(t0, t1) for seg in schedule.segments)


def concat_schedules(parts: Iterable[ControlSchedule]) -> ControlSchedule:
    segs: list[Segment] = []
    for p in parts:
        segs.extend(p.segments)
    return ControlSchedule(tuple(segs))
