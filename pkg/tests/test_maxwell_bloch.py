import math
import warnings

import numpy as np
import pytest

from lambdamem.lambda_system import ControlSchedule, LambdaParams, PulseSpec
from lambdamem.maxwell_bloch import (
    Direction,
    Grid1D,
    GridError,
    MediumParams,
    PhaseMismatchWarning,
    SolverError,
    apply_storage_decay,
    ats_efficiency_estimate,
    ats_rabi_for_factor,
    eit_optimal_rabi,
    group_delay,
    propagate,
    run_ats_memory,
    run_eit_memory,
    sweep_ats_factor,
)

# γ_e = 1 so physical and dimensionless times coincide
UNIT = LambdaParams(gamma_big=2.0)
T_CENTRE = LambdaParams.from_linewidth(27e6)
GAMMA_E = T_CENTRE.gamma_e


def smooth_step(t):
    return 0.5 * (1.0 + np.tanh(np.asarray(t) - 5.0))


def stationary_transmission(d, nz=400, detuning=0.0, t_max=60.0, nt=1200):
    grid = Grid1D(nz=nz, nt=nt, t_max=t_max)
    state = propagate(MediumParams(d), UNIT, ControlSchedule.zero(), smooth_step, grid, detuning=detuning)
    return abs(state.output[-1]) ** 2


def test_identity_propagation_at_zero_depth():
    grid = Grid1D(nz=16, nt=400, t_max=20.0)
    state = propagate(MediumParams(0.0), UNIT, ControlSchedule.zero(), smooth_step, grid)
    np.testing.assert_allclose(state.output, smooth_step(state.output_t), rtol=1e-8, atol=1e-12)


@pytest.mark.parametrize("d", [1.0, 5.0])
def test_resonant_transmission_is_beer_lambert(d):
    assert stationary_transmission(d) == pytest.approx(math.exp(-d), rel=1e-2)


def test_detuned_transmission_matches_two_level_solution():
    # stationary intensity transmission exp(−d/(1+δ²))
    assert stationary_transmission(5.0, nz=128, detuning=2.0, nt=6000) == pytest.approx(math.exp(-1.0), rel=1e-2)


def test_far_detuned_medium_is_transparent():
    t = stationary_transmission(1.0, nz=32, detuning=50.0, t_max=30.0, nt=16000)
    assert abs(t - 1.0) < 1e-3


def test_grid_contract_is_enforced():
    with pytest.raises(GridError):
        Grid1D(nz=8, nt=100, t_max=1.0)
    with pytest.raises(GridError):
        Grid1D(nz=32, nt=10, t_max=1.0)
    coarse = Grid1D(nz=32, nt=64, t_max=100.0)
    with pytest.raises(GridError, match="stability contract"):
        propagate(MediumParams(1.0), UNIT, ControlSchedule.zero(), smooth_step, coarse)


def test_non_finite_input_aborts():
    grid = Grid1D(nz=16, nt=300, t_max=10.0)
    with pytest.raises(SolverError):
        propagate(MediumParams(1.0), UNIT, ControlSchedule.zero(), lambda t: np.full(np.shape(t), np.nan), grid)


def test_propagate_is_deterministic_and_shaped():
    grid = Grid1D(nz=32, nt=512, t_max=20.0)
    ctrl = ControlSchedule.constant(3.0, 0.0, 20.0)
    pulse = PulseSpec.fourier_limited(0.1, arrival_time=8.0)
    a = propagate(MediumParams(5.0), UNIT, ctrl, pulse, grid, record_every=16)
    b = propagate(MediumParams(5.0), UNIT, ctrl, pulse, grid, record_every=16)
    assert a.E.tobytes() == b.E.tobytes() and a.S.tobytes() == b.S.tobytes()
    assert a.P.shape == (33, 33) and a.z.shape == (33,)
    assert a.t[-1] == pytest.approx(20.0)


def test_eit_optimal_rabi_gives_twice_the_pulse_duration_as_delay():
    b = 1e6
    gamma = 2 * math.pi * 27e6
    omega = eit_optimal_rabi(27, gamma, b)
    tau_sig = 2 * math.log(2) / math.pi / b
    assert group_delay(27, gamma, omega) / tau_sig == pytest.approx(2.0, abs=1e-6)
    assert omega / (2 * math.pi) == pytest.approx(11.47e6, rel=1e-3)


def test_eit_optimal_rabi_limits_and_errors():
    assert eit_optimal_rabi(27, 1.0, 0.0) == 0.0
    with pytest.warns(UserWarning):
        eit_optimal_rabi(10, 1.0, 1.0)
    with pytest.raises(ValueError):
        eit_optimal_rabi(0, 1.0, 1.0)


def test_group_delay_scaling():
    assert group_delay(1, 3.0, 3.0) == pytest.approx(1 / 3.0)
    assert group_delay(5, 2.0, 4.0) / group_delay(5, 2.0, 8.0) == pytest.approx(4.0)
    with pytest.raises(ValueError):
        group_delay(1, 1.0, 0.0)


def test_ats_rabi_for_factor():
    assert ats_rabi_for_factor(4, 27e6) == pytest.approx(108e6)
    assert ats_rabi_for_factor(7.25, 27e6) == pytest.approx(195.75e6)
    assert ats_rabi_for_factor(0, 27e6) == 0.0
    with pytest.raises(ValueError):
        ats_rabi_for_factor(-1, 27e6)


def test_apply_storage_decay():
    assert apply_storage_decay(0.7, 5.0, 0.0) == 0.7
    assert apply_storage_decay(0.7, 1 / 2.1e-3, 2.1e-3) == pytest.approx(0.7 / math.e)
    assert apply_storage_decay(0.726, 1 / 1.1, 0.1) == pytest.approx(0.663, abs=5e-4)


def test_ats_estimate_maxima():
    f = np.linspace(1, 12, 11001)
    back = np.array([ats_efficiency_estimate(27, x, Direction.BACKWARD) for x in f])
    fwd = np.array([ats_efficiency_estimate(27, x, Direction.FORWARD) for x in f])
    assert back.max() == pytest.approx(0.7265, abs=5e-4)
    assert 3.9 < f[back.argmax()] < 4.2
    assert ats_efficiency_estimate(27, 7.25, Direction.FORWARD) == pytest.approx(0.469, abs=5e-4)
    assert 7.0 < f[fwd.argmax()] < 7.5


def test_eit_without_medium_stores_nothing():
    r = run_eit_memory(MediumParams(0.0), T_CENTRE, PulseSpec.fourier_limited(5e6))
    assert r.eta_total == 0.0 and r.eta_storage == 0.0


def test_eit_rejects_negative_storage_time():
    with pytest.raises(ValueError):
        run_eit_memory(MediumParams(5.0), T_CENTRE, PulseSpec.fourier_limited(5e6), storage_time=-1.0)


@pytest.fixture(scope="module")
def eit_reference():
    pulse = PulseSpec.fourier_limited(5e6)
    return pulse, run_eit_memory(MediumParams(27), T_CENTRE, pulse, optimize=False)


def test_eit_energy_bookkeeping(eit_reference):
    _, r = eit_reference
    assert abs(r.energy.closure) < 1e-2
    assert 0 <= r.eta_total <= r.eta_storage <= 1
    assert 0 <= r.eta_retrieval <= 1


def test_eit_spin_decay_matches_exponential_factor():
    # write and read legs are identical so only the extra hold time decays
    pulse = PulseSpec.fourier_limited(5e6)
    t = 200.0 / GAMMA_E
    lossy = LambdaParams.from_linewidth(27e6, gamma_s=1.0 / t)
    short = run_eit_memory(MediumParams(27), lossy, pulse, storage_time=t, optimize=False)
    long = run_eit_memory(MediumParams(27), lossy, pulse, storage_time=2 * t, optimize=False)
    assert long.eta_total == pytest.approx(apply_storage_decay(short.eta_total, 1.0 / t, t), rel=2e-2)
    lossless = run_eit_memory(MediumParams(27), T_CENTRE, pulse, storage_time=t, optimize=False)
    assert short.eta_total < apply_storage_decay(lossless.eta_total, 1.0 / t, t)


def test_eit_efficiency_grows_with_depth():
    pulse = PulseSpec.fourier_limited(5e6)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        etas = [run_eit_memory(MediumParams(d), T_CENTRE, pulse, optimize=False).eta_total for d in (1, 5, 10, 27)]
    assert all(b >= a for a, b in zip(etas, etas[1:]))


def test_eit_backward_runs_and_conserves_energy():
    r = run_eit_memory(MediumParams(10), T_CENTRE, PulseSpec.fourier_limited(5e6),
                       direction=Direction.BACKWARD, optimize=False)
    assert 0 < r.eta_total <= r.eta_storage
    assert abs(r.energy.closure) < 1e-2


@pytest.mark.parametrize("f,direction", [(4.0, Direction.BACKWARD), (7.25, Direction.FORWARD)])
def test_ats_energy_bookkeeping(f, direction):
    r = run_ats_memory(MediumParams(27), T_CENTRE, f, direction=direction)
    assert abs(r.energy.closure) < 1e-2
    assert 0 <= r.eta_total <= r.eta_storage <= 1


def test_ats_backward_beats_forward():
    for f in (4.0, 7.25):
        b = run_ats_memory(MediumParams(27), T_CENTRE, f, direction=Direction.BACKWARD).eta_total
        fw = run_ats_memory(MediumParams(27), T_CENTRE, f, direction=Direction.FORWARD).eta_total
        assert b >= fw


def test_ats_narrowband_limit_vanishes():
    r = run_ats_memory(MediumParams(27), T_CENTRE, 0.05, direction=Direction.BACKWARD)
    assert r.eta_total < 0.02


def test_ats_rejects_bad_factor():
    with pytest.raises(ValueError):
        run_ats_memory(MediumParams(27), T_CENTRE, 0.0)


def test_ats_storage_time_decay():
    t = 100.0 / GAMMA_E
    lossy = LambdaParams.from_linewidth(27e6, gamma_s=0.5 / t)
    r0 = run_ats_memory(MediumParams(27), T_CENTRE, 4.0, t, Direction.BACKWARD)
    r1 = run_ats_memory(MediumParams(27), lossy, 4.0, t, Direction.BACKWARD)
    assert r1.eta_total == pytest.approx(apply_storage_decay(r0.eta_total, 0.5 / t, t), rel=2e-2)


def test_sweep_preserves_order_across_workers():
    m = MediumParams(5.0)
    serial = sweep_ats_factor(m, T_CENTRE, [1.0, 2.0, 3.0], jobs=1)
    parallel = sweep_ats_factor(m, T_CENTRE, [1.0, 2.0, 3.0], jobs=3)
    assert serial.eta.tobytes() == parallel.eta.tobytes()
    assert np.all((serial.eta >= 0) & (serial.eta <= 1))
    assert serial.best[0] in serial.f_values


def test_sweep_validation():
    with pytest.raises(ValueError):
        sweep_ats_factor(MediumParams(5.0), T_CENTRE, [3.0, 1.0])
    with pytest.raises(ValueError):
        sweep_ats_factor(MediumParams(5.0), T_CENTRE, [])


def test_backward_phase_mismatch_warning():
    params = LambdaParams.from_linewidth(27e6, splitting_g1g2=2 * math.pi * 10e9)
    with pytest.warns(PhaseMismatchWarning):
        run_ats_memory(MediumParams(27, length=1.0), params, 4.0, direction=Direction.BACKWARD)
