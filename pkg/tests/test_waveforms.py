import math

import numpy as np
import pytest

from peristalsim.actuator import ActuatorSpec
from peristalsim.drivetrain import CrankSpec, Manifold, default_port_map
from peristalsim.errors import ConfigError, DomainError, ScheduleValidationError
from peristalsim.waveforms import (ALL_IN_PHASE, PERISTALTIC,
                                   SEQUENTIAL_SQUEEZE, SpatialWaveParams,
                                   WaveCommand, compose_pattern, motor_angle,
                                   radial_amplitude, spatial_wave,
                                   wavelength_from_delay)

from conftest import measure_lag

MID = 0.5 * (math.radians(30.0) + math.radians(120.0))


def _cmd(**kw):
    base = dict(amplitude=0.5, frequency=0.2, onset_delay=0.25,
                num_actuators=8, start_actuator=1, duration=20.0)
    base.update(kw)
    return WaveCommand(**base)


def test_motor_angle_rest_position():
    cmd = _cmd()
    assert motor_angle(cmd, 1, 0.0) == pytest.approx(MID)


def test_zero_delay_makes_all_actuators_identical():
    cmd = _cmd(onset_delay=0.0)
    for t in np.linspace(0.0, 10.0, 50):
        angles = [motor_angle(cmd, n, float(t)) for n in range(1, 9)]
        assert max(angles) - min(angles) < 1e-12


def test_adjacent_phase_delay():
    # 0.2 Hz with 1.25 s delay -> quarter-period phase between neighbours
    cmd = _cmd(frequency=0.2, onset_delay=1.25)
    t = 3.21
    a1 = motor_angle(cmd, 1, t)
    a2 = motor_angle(cmd, 2, t + 1.25)
    assert a2 == pytest.approx(a1, rel=1e-12)
    phase = 2.0 * math.pi * cmd.frequency * cmd.onset_delay
    assert phase == pytest.approx(math.pi / 2.0)


def test_motor_angle_index_checked():
    cmd = _cmd()
    with pytest.raises(DomainError):
        motor_angle(cmd, 0, 1.0)
    with pytest.raises(DomainError):
        motor_angle(cmd, 9, 1.0)


def test_spatial_wave_zero_amplitude_and_periodicity():
    params = SpatialWaveParams(amplitude=0.0, wavelength=0.22, frequency=0.2)
    assert spatial_wave(params, 0.123, 4.56) == 0.0
    params = SpatialWaveParams(amplitude=1e-4, wavelength=0.22, frequency=0.2)
    y0 = spatial_wave(params, 0.05, 1.0)
    assert spatial_wave(params, 0.05 + 0.22, 1.0) == pytest.approx(y0, rel=1e-9)
    assert spatial_wave(params, 0.05, 1.0 + 5.0) == pytest.approx(y0, rel=1e-9)


def test_wavelength_from_delay_anchors():
    assert wavelength_from_delay(1.1e-2, 0.2, 0.250) == pytest.approx(0.22)
    assert wavelength_from_delay(1.1e-2, 0.2, 0.125) == pytest.approx(0.44)
    assert math.isinf(wavelength_from_delay(1.1e-2, 0.2, 0.0))


def test_spatial_wave_matches_motor_phasing():
    """Sampling the spatial wave at actuator positions with the implied
    wavelength reproduces the per-actuator lag structure."""
    pitch = 1.1e-2
    f, delay = 0.2, 0.25
    lam = wavelength_from_delay(pitch, f, delay)
    params = SpatialWaveParams(amplitude=1.0, wavelength=lam, frequency=f,
                               pitch=pitch)
    dt = 0.01
    t = np.arange(0.0, 40.0, dt)
    traces = [np.array([spatial_wave(params, n * pitch, float(tt))
                        for tt in t]) for n in range(3)]
    assert measure_lag(traces[0], traces[1], dt, 2.4) == pytest.approx(
        delay, abs=dt + 1e-9)
    assert measure_lag(traces[1], traces[2], dt, 2.4) == pytest.approx(
        delay, abs=dt + 1e-9)


def test_radial_amplitude_linear():
    spec = ActuatorSpec()
    assert radial_amplitude(spec, 34.814, 0.0) == 0.0
    one = radial_amplitude(spec, 34.814, 2e-6)
    assert radial_amplitude(spec, 34.814, 4e-6) == pytest.approx(2 * one)
    # full-swing displacement matches the transport calibration amplitude
    assert radial_amplitude(spec, 34.814, 5e-6) == pytest.approx(1.7407e-4)
    with pytest.raises(DomainError):
        radial_amplitude(spec, 34.814, 6e-6)


def _device():
    return ActuatorSpec(), CrankSpec(), Manifold()


def test_all_in_phase_traces_identical():
    act, crank, manifold = _device()
    cmd = _cmd(amplitude=crank.alpha_half_range, onset_delay=0.0)
    schedule = compose_pattern(ALL_IN_PHASE, cmd, act, crank, manifold)
    for n in range(1, 8):
        assert np.array_equal(schedule.volumes[n], schedule.volumes[0])


def test_peristaltic_adjacent_lag():
    act, crank, manifold = _device()
    cmd = _cmd(amplitude=crank.alpha_half_range)
    schedule = compose_pattern(PERISTALTIC, cmd, act, crank, manifold)
    dt = schedule.sample_period
    lag = measure_lag(schedule.volumes[0], schedule.volumes[1], dt, 2.4)
    assert lag == pytest.approx(0.25, abs=dt + 1e-9)
    # shifted copies: the delay is an integer number of samples
    shift = int(round(0.25 / dt))
    assert np.allclose(schedule.volumes[1][shift:],
                       schedule.volumes[0][:-shift], rtol=1e-9, atol=1e-15)


def test_direction_reverses_lag_sign():
    act, crank, manifold = _device()
    amp = crank.alpha_half_range
    fwd = compose_pattern(PERISTALTIC, _cmd(amplitude=amp), act, crank, manifold)
    rev = compose_pattern(
        PERISTALTIC,
        _cmd(amplitude=amp, start_actuator=8, direction="proximal_to_distal"),
        act, crank, manifold)
    dt = fwd.sample_period
    lag_f = measure_lag(fwd.volumes[2], fwd.volumes[3], dt, 2.4)
    lag_r = measure_lag(rev.volumes[2], rev.volumes[3], dt, 2.4)
    assert lag_f == pytest.approx(0.25, abs=dt + 1e-9)
    assert lag_r == pytest.approx(-0.25, abs=dt + 1e-9)
    # integer-sample shifted copies, in opposite directions
    shift = int(round(0.25 / dt))
    assert np.allclose(fwd.volumes[3][shift:], fwd.volumes[2][:-shift],
                       rtol=1e-9, atol=1e-15)
    assert np.allclose(rev.volumes[2][shift:], rev.volumes[3][:-shift],
                       rtol=1e-9, atol=1e-15)


def test_sequential_squeeze_cycle_length():
    act, crank, manifold = _device()
    cmd = _cmd(amplitude=crank.alpha_half_range, duration=16.0)
    schedule = compose_pattern(SEQUENTIAL_SQUEEZE, cmd, act, crank, manifold,
                               squeeze_time=1.0)
    rest = schedule.max_fluid_volume
    for n in range(8):
        active = schedule.times[schedule.volumes[n] < rest - 1e-12]
        # one activation window per 8 s cycle, starting at (n)*t_s
        assert active[0] == pytest.approx(n * 1.0 + schedule.sample_period,
                                          abs=1e-9)
        first_cycle = active[active < 8.0]
        assert first_cycle[-1] < (n + 1) * 1.0
        second_cycle = active[active >= 8.0]
        assert second_cycle[0] == pytest.approx(
            8.0 + n * 1.0 + schedule.sample_period, abs=1e-9)


def test_sequential_squeeze_requires_time():
    act, crank, manifold = _device()
    with pytest.raises(ConfigError):
        compose_pattern(SEQUENTIAL_SQUEEZE, _cmd(), act, crank, manifold)
    with pytest.raises(ConfigError):
        compose_pattern(PERISTALTIC, _cmd(), act, crank, manifold,
                        squeeze_time=1.0)


def test_schedule_respects_volume_bounds():
    act, crank, manifold = _device()
    cmd = _cmd(amplitude=crank.alpha_half_range)
    schedule = compose_pattern(PERISTALTIC, cmd, act, crank, manifold)
    assert schedule.volumes.min() >= 0.0
    assert schedule.volumes.max() <= act.max_fluid_volume * (1 + 1e-12)


def test_overdrawn_schedule_rejected():
    act = ActuatorSpec()
    crank = CrankSpec(bore_area=3.2583e-4 * 3.0)  # oversized cylinder
    manifold = Manifold()
    cmd = _cmd(amplitude=crank.alpha_half_range)
    with pytest.raises(ScheduleValidationError):
        compose_pattern(PERISTALTIC, cmd, act, crank, manifold)


def test_amplitude_beyond_range_rejected():
    act, crank, manifold = _device()
    cmd = _cmd(amplitude=crank.alpha_half_range * 1.01)
    with pytest.raises(ScheduleValidationError):
        compose_pattern(PERISTALTIC, cmd, act, crank, manifold)


def test_two_piston_manifold_accepts_quarter_period_delay():
    act, crank, _ = _device()
    manifold = Manifold(num_motors=2, port_map=default_port_map(2))
    period = 1.0 / 0.2
    cmd = _cmd(amplitude=crank.alpha_half_range, onset_delay=period / 4.0)
    schedule = compose_pattern(PERISTALTIC, cmd, act, crank, manifold)
    assert schedule.motor_angles.shape[0] == 2
    # same-port actuators carry identical volume traces
    assert np.array_equal(schedule.volumes[0], schedule.volumes[4])


def test_two_piston_manifold_rejects_incompatible_delay():
    act, crank, _ = _device()
    manifold = Manifold(num_motors=2, port_map=default_port_map(2))
    cmd = _cmd(amplitude=crank.alpha_half_range, onset_delay=0.125)
    with pytest.raises(ScheduleValidationError):
        compose_pattern(PERISTALTIC, cmd, act, crank, manifold)


def test_wave_command_validation():
    with pytest.raises(ConfigError):
        _cmd(frequency=0.0)
    with pytest.raises(ConfigError):
        _cmd(onset_delay=-0.1)
    with pytest.raises(ConfigError):
        _cmd(start_actuator=9)
    with pytest.raises(ConfigError):
        _cmd(duration=0.0)
    with pytest.raises(ConfigError):
        _cmd(direction="sideways")
