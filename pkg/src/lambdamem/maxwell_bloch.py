"""One-dimensional Maxwell-Bloch propagation for free-space Λ-system memories.

The solver works in dimensionless co-moving variables: time in units of
1/γ_e, position z ∈ [0, 1] across the medium, and

    ∂t P = −(1 + iδ) P + i√(d/2) E + i(Ω/2) S
    ∂t S = −(γ_s/2) S + i(Ω*/2) P
    ∂z E = i√(d/2) P

With Ω = 0 and a stationary resonant input the intensity transmission is
exactly e^−d, i.e. ``d`` is the ordinary (intensity) optical depth.  γ_s is an
energy decay rate: a stored excitation decays as exp(−γ_s t).

(P, S) are advanced with classical RK4 in time; at every stage E is rebuilt
from P by cumulative trapezoidal integration in z.
"""

from __future__ import annotations

import enum
import math
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Callable, Sequence

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT
from scipy.optimize import minimize_scalar

from .lambda_system import (
    GAUSSIAN_TBP,
    LN2,
    TWO_PI,
    ControlSchedule,
    LambdaParams,
    PulseSpec,
    Segment,
    TanhRamp,
)

# Ω² = dΓB/EIT_DELAY_FACTOR puts the group delay at twice the signal FWHM.
EIT_DELAY_FACTOR = 2.0 * GAUSSIAN_TBP

# Dimensionless time after which a decaying polarisation is treated as gone.
_HOLD_CAP = 12.0
# Dimensionless emission tail simulated after an ATS read pulse.
_ATS_READ_TAIL = 8.0


class Direction(enum.Enum):
    FORWARD = "forward"
    BACKWARD = "backward"


class SolverError(RuntimeError):
    """Raised when a propagation diverges or produces non-finite values."""


class GridError(ValueError):
    """Raised when a grid violates the stability contract."""


class PhaseMismatchWarning(UserWarning):
    pass


@dataclass(frozen=True)
class MediumParams:
    optical_depth: float
    length: float | None = None  # m, metadata
    inhom_linewidth: float | None = None  # Hz, metadata; never used by the solver

    def __post_init__(self):
        if self.optical_depth < 0:
            raise ValueError(f"optical depth must be >= 0, got {self.optical_depth}")


@dataclass(frozen=True)
class Grid1D:
    nz: int
    nt: int
    t_max: float  # s

    def __post_init__(self):
        if self.nz < 16:
            raise GridError(f"nz must be >= 16, got {self.nz}")
        if self.nt < 64:
            raise GridError(f"nt must be >= 64, got {self.nt}")
        if not self.t_max > 0:
            raise GridError("t_max must be > 0")

    @property
    def dt(self) -> float:
        return self.t_max / self.nt

    @property
    def dz(self) -> float:
        return 1.0 / self.nz


@dataclass(frozen=True)
class FieldState:
    """Sampled (z, t) trajectory; rows are time samples, columns z nodes."""

    z: np.ndarray
    t: np.ndarray  # s
    E: np.ndarray
    P: np.ndarray
    S: np.ndarray
    output: np.ndarray  # E(z=1, t) at every time step
    output_t: np.ndarray  # s
    lost_polarization: float
    lost_spin: float


@dataclass(frozen=True)
class EnergyBudget:
    input: float
    leaked: float
    retrieved: float
    lost_polarization: float
    lost_spin: float
    residual: float

    @property
    def closure(self) -> float:
        """Relative mismatch of the full budget (0 for exact bookkeeping)."""
        total = self.leaked + self.retrieved + self.lost_polarization + self.lost_spin + self.residual
        return (total - self.input) / self.input


@dataclass(frozen=True)
class MemoryResult:
    eta_storage: float
    eta_retrieval: float
    eta_total: float
    output_times: np.ndarray = field(repr=False)
    output_waveform: np.ndarray = field(repr=False)  # |E_out|², 1/s
    leak_times: np.ndarray = field(repr=False)
    leak_waveform: np.ndarray = field(repr=False)
    rabi: float = 0.0  # rad/s
    energy: EnergyBudget | None = None


# ----------------------------------------------------------------------------
# analytic helpers


def group_delay(d: float, gamma_big: float, omega: float) -> float:
    """EIT group delay τ_d = dΓ/Ω² (rates in rad/s)."""
    if omega == 0:
        raise ValueError("group delay is undefined for zero control Rabi frequency")
    return d * gamma_big / omega**2


def eit_optimal_rabi(d: float, gamma_big: float, b_sig: float) -> float:
    """Control Rabi frequency (rad/s) giving τ_d = 2τ_sig for a Gaussian signal.

    ``b_sig`` is the intensity-FWHM bandwidth in Hz.
    """
    if d <= 0 or gamma_big <= 0 or b_sig < 0:
        raise ValueError("eit_optimal_rabi needs d > 0, gamma_big > 0, b_sig >= 0")
    if d <= 20:
        warnings.warn(
            f"d={d} <= 20: constant-control EIT optimisation is not expected to be optimal",
            stacklevel=2,
        )
    return math.sqrt(d * gamma_big * b_sig / EIT_DELAY_FACTOR)


def ats_rabi_for_factor(f: float, gamma_over_2pi: float) -> float:
    """Control Rabi frequency Ω/2π (Hz) for ATS factor F = Ω/Γ."""
    if f < 0 or gamma_over_2pi < 0:
        raise ValueError("ATS factor and linewidth must be non-negative")
    return f * gamma_over_2pi


def apply_storage_decay(eta: float, gamma_s: float, t: float) -> float:
    return eta * math.exp(-gamma_s * t)


def ats_efficiency_estimate(d: float, f: float, direction: Direction) -> float:
    """Closed-form ATS memory efficiency estimate.

    Backward: (1 − e^{−d/2F})² e^{−1/F};  forward: (d/2F)² e^{−d/2F} e^{−1/F}.
    These are the broadband estimates whose d=27 maxima sit at F≈4 (72.6 %)
    and F=7.25 (46.9 %).  They are not derived from the PDE above.
    """
    if f <= 0:
        return 0.0
    x = d / (2.0 * f)
    dephasing = math.exp(-1.0 / f)
    if direction is Direction.BACKWARD:
        return (1.0 - math.exp(-x)) ** 2 * dephasing
    return x**2 * math.exp(-x) * dephasing


def stability_limit(omega_max: float, b_sig: float, detuning: float = 0.0) -> float:
    """Largest admissible dimensionless step for the given dimensionless rates."""
    scales = [1.0]
    if omega_max > 0:
        scales.append(TWO_PI / omega_max)
    if b_sig > 0:
        scales.append(1.0 / (TWO_PI * b_sig))
    if detuning != 0:
        scales.append(1.0 / abs(detuning))
    return 0.1 * min(scales)


def _default_nz(d: float) -> int:
    return max(128, 8 * math.ceil(d))


# ----------------------------------------------------------------------------
# integration kernel (dimensionless)


@dataclass
class _Trace:
    P: np.ndarray
    S: np.ndarray
    t: np.ndarray
    out: np.ndarray
    lost_p: float
    lost_s: float
    snapshots: list = field(default_factory=list)


def _stage_samples(fn, t0: float, dt: float, n: int) -> np.ndarray:
    """Values of ``fn`` at RK4 stage times, shape (n, 3): start, mid, end.

    Start/end samples sit a hair inside the step so step-aligned control
    edges are seen from the correct side.
    """
    k = np.arange(n)
    eps = 1e-9 * dt
    ts = np.stack([t0 + k * dt + eps, t0 + (k + 0.5) * dt, t0 + (k + 1) * dt - eps], axis=1)
    return np.asarray(fn(ts), dtype=complex)


def _integrate(
    d: float,
    nz: int,
    t0: float,
    dt: float,
    n_steps: int,
    omega: Callable[[np.ndarray], np.ndarray],
    e_in: Callable[[np.ndarray], np.ndarray] | None,
    gamma_s: float = 0.0,
    detuning: float = 0.0,
    P0: np.ndarray | None = None,
    S0: np.ndarray | None = None,
    record_every: int = 0,
) -> _Trace:
    c = math.sqrt(d / 2.0)
    dz = 1.0 / nz
    half_dz = 0.5 * dz
    P = np.zeros(nz + 1, complex) if P0 is None else np.array(P0, dtype=complex)
    S = np.zeros(nz + 1, complex) if S0 is None else np.array(S0, dtype=complex)
    om = _stage_samples(omega, t0, dt, n_steps)
    ein = np.zeros((n_steps, 3), complex) if e_in is None else _stage_samples(e_in, t0, dt, n_steps)
    decay = 1.0 + 1j * detuning
    cum = np.zeros(nz + 1, complex)

    def field_from(P, e0):
        np.cumsum(P[1:] + P[:-1], out=cum[1:])
        return e0 + (1j * c * half_dz) * cum

    def rhs(P, S, o, e0):
        E = field_from(P, e0)
        dP = -decay * P + (1j * c) * E + (0.5j * o) * S
        dS = (-0.5 * gamma_s) * S + (0.5j * np.conj(o)) * P
        return dP, dS

    def zint(y):
        return dz * (y.sum() - 0.5 * (y[0] + y[-1]))

    out = np.empty(n_steps + 1, complex)
    out[0] = field_from(P, ein[0, 0] if n_steps else 0.0)[-1]
    snaps = []
    if record_every:
        snaps.append((0, P.copy(), S.copy(), field_from(P, ein[0, 0] if n_steps else 0.0)))
    fp_prev = zint(np.abs(P) ** 2)
    fs_prev = zint(np.abs(S) ** 2)
    lost_p = lost_s = 0.0
    h2, h6 = 0.5 * dt, dt / 6.0
    for n in range(n_steps):
        o0, o1, o2 = om[n]
        e0, e1, e2 = ein[n]
        k1p, k1s = rhs(P, S, o0, e0)
        k2p, k2s = rhs(P + h2 * k1p, S + h2 * k1s, o1, e1)
        k3p, k3s = rhs(P + h2 * k2p, S + h2 * k2s, o1, e1)
        k4p, k4s = rhs(P + dt * k3p, S + dt * k3s, o2, e2)
        P = P + h6 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        S = S + h6 * (k1s + 2.0 * k2s + 2.0 * k3s + k4s)
        E = field_from(P, e2)
        out[n + 1] = E[-1]
        fp = zint(np.abs(P) ** 2)
        fs = zint(np.abs(S) ** 2)
        lost_p += dt * (fp_prev + fp)  # 2·∫|P|² by trapezoid
        lost_s += 0.5 * gamma_s * dt * (fs_prev + fs)
        fp_prev, fs_prev = fp, fs
        if n % 256 == 0 and not (np.isfinite(fp) and np.isfinite(fs)):
            raise SolverError(f"non-finite state at step {n} (t={t0 + (n + 1) * dt:.4g}/γ_e)")
        if record_every and (n + 1) % record_every == 0:
            snaps.append((n + 1, P.copy(), S.copy(), E))
    if not (np.all(np.isfinite(P)) and np.all(np.isfinite(S))):
        raise SolverError("non-finite state at end of integration")
    t = t0 + dt * np.arange(n_steps + 1)
    return _Trace(P, S, t, out, lost_p, lost_s, snaps)


def _trapz(y: np.ndarray, dx: float) -> float:
    if len(y) < 2:
        return 0.0
    return float(dx * (y.sum() - 0.5 * (y[0] + y[-1])))


def _zenergy(y: np.ndarray) -> float:
    return _trapz(np.abs(y) ** 2, 1.0 / (len(y) - 1))


def _steps(duration: float, dt_max: float) -> tuple[int, float]:
    n = max(1, math.ceil(duration / dt_max - 1e-9))
    return n, duration / n


def _hold(P, S, gap, gamma_s):
    """Control off, no input, for a dimensionless time ``gap`` (analytic part).

    The polarisation has already been given ``_HOLD_CAP`` to radiate; what is
    left of it is dropped and reported as polarisation loss.
    """
    lost = _zenergy(P)
    S = S * math.exp(-0.5 * gamma_s * gap)
    return np.zeros_like(P), S, lost


# ----------------------------------------------------------------------------
# public solver


def propagate(
    medium: MediumParams,
    params: LambdaParams,
    control: ControlSchedule,
    input: PulseSpec | Callable[[np.ndarray], np.ndarray],
    grid: Grid1D,
    *,
    detuning: float = 0.0,
    initial_spin_wave: np.ndarray | None = None,
    record_every: int | None = None,
) -> FieldState:
    """Propagate a signal through the medium over ``[0, grid.t_max]``.

    ``input`` is a unit-energy :class:`PulseSpec` or a callable giving the
    field amplitude (√(1/s) units) at z=0 as a function of time in seconds.
    ``detuning`` is the signal one-photon detuning in rad/s.
    """
    ge = params.gamma_e
    dt = grid.dt * ge
    omega_max = control.max_rabi() / ge
    b_sig = input.bandwidth_fwhm / ge if isinstance(input, PulseSpec) else 0.0
    limit = stability_limit(omega_max, b_sig, detuning / ge)
    if dt > limit * (1 + 1e-12):
        raise GridError(
            f"time step {dt:.4g}/γ_e exceeds the stability contract {limit:.4g}/γ_e "
            f"(Ω={omega_max:.3g}γ_e, B_sig={b_sig:.3g}γ_e); use nt >= {math.ceil(grid.t_max * ge / limit)}"
        )
    src = input.amplitude if isinstance(input, PulseSpec) else input
    sq = math.sqrt(ge)

    def e_in(t):
        return np.asarray(src(t / ge), dtype=complex) / sq

    def omega(t):
        return control(t / ge) / ge

    if record_every is None:
        record_every = max(1, grid.nt // 512)
    tr = _integrate(
        medium.optical_depth, grid.nz, 0.0, dt, grid.nt, omega, e_in,
        gamma_s=params.gamma_s / ge, detuning=detuning / ge, S0=initial_spin_wave,
        record_every=record_every,
    )
    idx = np.array([s[0] for s in tr.snapshots])
    return FieldState(
        z=np.linspace(0.0, 1.0, grid.nz + 1),
        t=idx * grid.dt,
        E=np.array([s[3] for s in tr.snapshots]),
        P=np.array([s[1] for s in tr.snapshots]),
        S=np.array([s[2] for s in tr.snapshots]),
        output=tr.out * sq,
        output_t=tr.t / ge,
        lost_polarization=tr.lost_p,
        lost_spin=tr.lost_s,
    )


def _check_phase_matching(medium: MediumParams, params: LambdaParams, direction: Direction):
    if direction is not Direction.BACKWARD or medium.length is None:
        return
    mismatch = medium.length * params.splitting_g1g2 / SPEED_OF_LIGHT
    if math.sqrt(medium.optical_depth) < 10.0 * mismatch:
        warnings.warn(
            f"backward retrieval: sqrt(d)={math.sqrt(medium.optical_depth):.3g} is not >> "
            f"L·ω_g1g2/c={mismatch:.3g}; the neglected phase mismatch will reduce efficiency",
            PhaseMismatchWarning,
            stacklevel=3,
        )


def _finish(ge, e_input, write, leak_dt, stored, read, read_dt, lost_p, lost_s, rabi=0.0) -> MemoryResult:
    leak = np.abs(write.out) ** 2
    out = np.abs(read.out) ** 2
    leaked = _trapz(leak, leak_dt)
    retrieved = _trapz(out, read_dt)
    residual = _zenergy(read.P) + _zenergy(read.S)
    eta_s = stored / e_input
    eta_t = retrieved / e_input
    eta_r = retrieved / stored if stored > 0 else 0.0
    budget = EnergyBudget(e_input, leaked, retrieved, lost_p, lost_s, residual)
    return MemoryResult(
        eta_storage=eta_s,
        eta_retrieval=eta_r,
        eta_total=eta_t,
        output_times=read.t / ge,
        output_waveform=out * ge,
        leak_times=write.t / ge,
        leak_waveform=leak * ge,
        rabi=rabi,
        energy=budget,
    )


def _store_and_read(
    d, nz, dt_max, gamma_s, direction,
    write_duration, write_omega, e_in,
    gap, read_duration, read_omega,
) -> tuple:
    """Shared write → hold → (flip) → read sequence in dimensionless time."""
    n_w, dt_w = _steps(write_duration, dt_max)
    write = _integrate(d, nz, 0.0, dt_w, n_w, write_omega, e_in, gamma_s=gamma_s)
    e_input = _trapz(np.abs(e_in(write.t)) ** 2, dt_w)
    P, S = write.P, write.S
    stored = _zenergy(S)
    lost_p, lost_s = write.lost_p, write.lost_s
    if gap > 0:
        explicit = min(gap, _HOLD_CAP)
        n_h, dt_h = _steps(explicit, dt_max)
        hold = _integrate(d, nz, 0.0, dt_h, n_h, lambda t: np.zeros_like(t), None,
                          gamma_s=gamma_s, P0=P, S0=S)
        # light radiated during the hold leaves the medium unretrieved
        lost_p += hold.lost_p + _trapz(np.abs(hold.out) ** 2, dt_h)
        lost_s += hold.lost_s
        P, S = hold.P, hold.S
        if gap > explicit:
            before = _zenergy(S)
            P, S, dropped = _hold(P, S, gap - explicit, gamma_s)
            lost_p += dropped
            lost_s += before - _zenergy(S)
    if direction is Direction.BACKWARD:
        P, S = P[::-1].copy(), S[::-1].copy()
    n_r, dt_r = _steps(read_duration, dt_max)
    read = _integrate(d, nz, 0.0, dt_r, n_r, read_omega, None, gamma_s=gamma_s, P0=P, S0=S)
    lost_p += read.lost_p
    lost_s += read.lost_s
    return e_input, write, dt_w, stored, read, dt_r, lost_p, lost_s


def run_ats_memory(
    medium: MediumParams,
    params: LambdaParams,
    f_factor: float,
    storage_time: float = 0.0,
    direction: Direction = Direction.FORWARD,
    *,
    refine: int = 1,
    nz: int | None = None,
) -> MemoryResult:
    """Autler-Townes memory with 2π-area constant write and read control pulses.

    The signal is Fourier-limited with B_sig = FΓ/2π, its peak centred in the
    write window of length 2π/Ω.  ``storage_time`` (s) runs from the end of
    the write window to the start of the read pulse; values shorter than the
    signal's trailing tail are extended to it.
    """
    if not f_factor > 0:
        raise ValueError(f"ATS factor must be > 0, got {f_factor}")
    if storage_time < 0:
        raise ValueError("storage_time must be >= 0")
    if refine < 1:
        raise ValueError("refine must be >= 1")
    _check_phase_matching(medium, params, direction)
    ge = params.gamma_e
    d = medium.optical_depth
    nz = (nz or _default_nz(d)) * refine
    omega = f_factor * params.gamma_big / ge  # = 2F
    b_sig = omega / TWO_PI
    tau = GAUSSIAN_TBP / b_sig
    window = TWO_PI / omega
    dt_max = 0.5 * stability_limit(omega, b_sig) / refine
    # align window edges with step boundaries
    per_window = math.ceil(window / dt_max)
    dt = window / per_window
    k_start = math.ceil((3.0 * tau - 0.5 * window) / dt)
    w_start = k_start * dt
    w_end = w_start + window
    t_peak = w_start + 0.5 * window
    write_duration = dt * math.ceil((t_peak + 3.0 * tau) / dt)
    pulse = PulseSpec.fourier_limited(b_sig, arrival_time=t_peak)
    gap = max(0.0, w_end + storage_time * ge - write_duration)

    def write_omega(t):
        return np.where((t >= w_start) & (t < w_end), omega, 0.0)

    def read_omega(t):
        return np.where(t < window, omega, 0.0)

    read_duration = window + _ATS_READ_TAIL
    res = _store_and_read(
        d, nz, dt, params.gamma_s / ge, direction,
        write_duration, write_omega, pulse.amplitude,
        gap, read_duration, read_omega,
    )
    return _finish(ge, *res, rabi=omega * ge)


def _eit_run(d, nz, dt_max, gamma_s, direction, tau, omega, ramp, storage):
    """EIT sequence in dimensionless units; returns the _store_and_read tuple."""
    tau_d = 2.0 * d / omega**2
    t_peak = 3.0 * tau
    t_off = t_peak + 0.5 * tau_d
    margin = 6.0 * ramp
    if storage >= 2.0 * margin:
        write_end, gap = t_off + margin, storage - 2.0 * margin
        read_from = margin  # read clock 0 is ``margin`` before the ramp-up centre
    else:
        write_end, gap = t_off + 0.5 * storage, 0.0
        read_from = 0.5 * storage
    pulse = PulseSpec(GAUSSIAN_TBP / tau, tau, arrival_time=t_peak)
    down = Segment(0.0, write_end, omega, TanhRamp(ramp, "down", t_off))
    read_duration = read_from + 2.0 * tau_d + 4.0 * tau
    up = Segment(0.0, read_duration, omega, TanhRamp(ramp, "up", read_from))
    return _store_and_read(
        d, nz, dt_max, gamma_s, direction,
        write_end, lambda t: omega * down.envelope(t), pulse.amplitude,
        gap, read_duration, lambda t: omega * up.envelope(t),
    )


def run_eit_memory(
    medium: MediumParams,
    params: LambdaParams,
    input: PulseSpec,
    storage_time: float = 0.0,
    direction: Direction = Direction.FORWARD,
    *,
    rabi: float | None = None,
    optimize: bool = True,
    ramp_fraction: float = 0.25,
    refine: int = 1,
    nz: int | None = None,
) -> MemoryResult:
    """EIT memory: constant control, tanh ramp-down, hold, tanh ramp-up, read.

    The control defaults to :func:`eit_optimal_rabi`; with ``optimize`` it is
    refined by a bounded scalar search over ±30 % maximising the total
    efficiency.  The ramp (time constant ``ramp_fraction``·τ_sig) is centred
    when the signal peak reaches the middle of the medium.  ``storage_time``
    (s) separates the ramp-down and ramp-up centres.
    """
    if storage_time < 0:
        raise ValueError("storage_time must be >= 0")
    if refine < 1:
        raise ValueError("refine must be >= 1")
    _check_phase_matching(medium, params, direction)
    ge = params.gamma_e
    d = medium.optical_depth
    nz = (nz or _default_nz(d)) * refine
    tau = input.duration_fwhm * ge
    b_sig = GAUSSIAN_TBP / tau
    ramp = ramp_fraction * tau
    storage = storage_time * ge
    gamma_s = params.gamma_s / ge
    if d == 0:
        omega0 = rabi / ge if rabi else 1.0
        optimize = False
    elif rabi is None:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            omega0 = eit_optimal_rabi(d, params.gamma_big, input.bandwidth_fwhm) / ge
    else:
        omega0 = rabi / ge

    def dt_for(omega):
        return 0.5 * min(stability_limit(omega, b_sig), 0.1 * ramp) / refine

    def run(omega):
        return _eit_run(d, nz, dt_for(omega), gamma_s, direction, tau, omega, ramp, storage)

    if optimize:
        def objective(scale):
            e_input, _, _, _, read, read_dt, _, _ = run(scale * omega0)
            return -_trapz(np.abs(read.out) ** 2, read_dt) / e_input

        best = minimize_scalar(objective, bounds=(0.7, 1.3), method="bounded",
                               options={"xatol": 2e-3})
        omega0 = best.x * omega0
    return _finish(ge, *run(omega0), rabi=omega0 * ge)


# ----------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class AtsSweep:
    f_values: tuple[float, ...]
    results: tuple[MemoryResult, ...]
    direction: Direction

    @property
    def eta(self) -> np.ndarray:
        return np.array([r.eta_total for r in self.results])

    @property
    def best(self) -> tuple[float, float]:
        i = int(np.argmax(self.eta))
        return self.f_values[i], float(self.eta[i])


def _ats_point(f, medium, params, storage_time, direction, kwargs):
    return run_ats_memory(medium, params, f, storage_time, direction, **kwargs)


def default_jobs() -> int:
    env = os.environ.get("LAMBDAMEM_JOBS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def parallel_map(fn, items: Sequence, jobs: int = 1) -> list:
    """Order-preserving map, fanned out over processes when ``jobs > 1``."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(jobs, len(items))) as pool:
        return list(pool.map(fn, items))


def sweep_ats_factor(
    medium: MediumParams,
    params: LambdaParams,
    f_values: Sequence[float],
    direction: Direction = Direction.FORWARD,
    storage_time: float = 0.0,
    *,
    jobs: int = 1,
    **run_kwargs,
) -> AtsSweep:
    f_values = tuple(float(f) for f in f_values)
    if not f_values:
        raise ValueError("f_values must not be empty")
    if any(f <= 0 for f in f_values):
        raise ValueError("ATS factors must be positive")
    if any(b < a for a, b in zip(f_values, f_values[1:])):
        raise ValueError("ATS factors must be sorted")
    fn = partial(_ats_point, medium=medium, params=params, storage_time=storage_time,
                 direction=direction, kwargs=run_kwargs)
    return AtsSweep(f_values, tuple(parallel_map(fn, f_values, jobs)), direction)
