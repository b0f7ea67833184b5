"""Command-signal composition and the spatial compression wave.

Per-motor commands are sinusoids about the mid-range crank angle,

    alpha_n(t) = mid + A * sin(2*pi*f*(t - k_n * dt)),

where k_n counts actuators from the wave's start actuator along its travel
direction and dt is the onset delay between neighbours.  Sign convention
used throughout this package: positive onset delay propagates the wave
from the start actuator toward higher k, i.e. trace k+1 lags trace k by
dt.  The envelope of all actuators forms the spatial wave

    y(x, t) = A' * cos(2*pi*x/lambda - 2*pi*f*(t - dt)),

whose wavelength relates to the delay through lambda = pitch / (f * dt);
zero delay is the all-in-phase limit (infinite wavelength).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .actuator import ActuatorSpec
from .drivetrain import (ALPHA_MAX_DEFAULT, ALPHA_MIN_DEFAULT, CHAMBER_A,
                         CrankSpec, Manifold, piston_position)
from .errors import ConfigError, DomainError, ScheduleValidationError

PERISTALTIC = "peristaltic"
ALL_IN_PHASE = "all_in_phase"
SEQUENTIAL_SQUEEZE = "sequential_squeeze"
PATTERN_KINDS = (PERISTALTIC, ALL_IN_PHASE, SEQUENTIAL_SQUEEZE)

DISTAL_TO_PROXIMAL = "distal_to_proximal"
PROXIMAL_TO_DISTAL = "proximal_to_distal"
DIRECTIONS = (DISTAL_TO_PROXIMAL, PROXIMAL_TO_DISTAL)

DEFAULT_PITCH_M = 1.1e-2
DEFAULT_SAMPLE_PERIOD_S = 0.01

# Limb compliance mapping withdrawn fluid volume to radial displacement,
# calibrated so a full 5 mL swing produces the default occlusion amplitude.
DEFAULT_LIMB_COMPLIANCE_M_PER_M3 = 34.814

_SERIES_TOL = 1e-9


@dataclass(frozen=True)
class WaveCommand:
    """Per-motor sinusoid parameters for one compression pattern."""

    amplitude: float            # motor rotation amplitude, rad
    frequency: float            # Hz
    onset_delay: float = 0.0    # s between adjacent actuators
    num_actuators: int = 8
    start_actuator: int = 1
    direction: str = DISTAL_TO_PROXIMAL
    duration: float = 10.0      # s

    def __post_init__(self):
        if self.amplitude < 0.0:
            raise ConfigError("amplitude must be non-negative")
        if self.frequency <= 0.0:
            raise ConfigError("frequency must be positive")
        if self.onset_delay < 0.0:
            raise ConfigError("onset_delay must be non-negative")
        if self.num_actuators < 1:
            raise ConfigError("num_actuators must be >= 1")
        if not 1 <= self.start_actuator <= self.num_actuators:
            raise ConfigError("start_actuator out of range")
        if self.direction not in DIRECTIONS:
            raise ConfigError(f"direction must be one of {DIRECTIONS}")
        if self.duration <= 0.0:
            raise ConfigError("duration must be positive")


@dataclass(frozen=True)
class SpatialWaveParams:
    """Parameters of the composed travelling compression wave."""

    amplitude: float               # radial displacement amplitude, m
    wavelength: float              # m; may be inf (all-in-phase)
    frequency: float               # Hz
    pitch: float = DEFAULT_PITCH_M
    onset_delay: float = 0.0       # s, phase reference of the wave

    def __post_init__(self):
        if self.amplitude < 0.0:
            raise ConfigError("amplitude must be non-negative")
        if not (self.wavelength > 0.0):
            raise ConfigError("wavelength must be positive (or inf)")
        if self.frequency <= 0.0:
            raise ConfigError("frequency must be positive")
        if self.pitch <= 0.0:
            raise ConfigError("pitch must be positive")


def wave_step_index(cmd: WaveCommand, n: int) -> int:
    """Steps of actuator ``n`` from the start actuator along travel direction."""
    if not 1 <= n <= cmd.num_actuators:
        raise DomainError(f"actuator index {n} out of 1..{cmd.num_actuators}")
    if cmd.direction == DISTAL_TO_PROXIMAL:
        return n - cmd.start_actuator
    return cmd.start_actuator - n


def motor_angle(cmd: WaveCommand, n: int, t: float,
                alpha_range: tuple[float, float] = (ALPHA_MIN_DEFAULT,
                                                    ALPHA_MAX_DEFAULT)) -> float:
    """Commanded motor angle for actuator ``n`` at time ``t``.

    The sinusoid is offset so rest maps to the mid-range angle; actuator
    k+1 lags actuator k by the onset delay.
    """
    if t < 0.0:
        raise DomainError("time must be non-negative")
    k = wave_step_index(cmd, n)
    mid = 0.5 * (alpha_range[0] + alpha_range[1])
    phase = 2.0 * math.pi * cmd.frequency * (t - k * cmd.onset_delay)
    return mid + cmd.amplitude * math.sin(phase)


def spatial_wave(params: SpatialWaveParams, x: float, t: float) -> float:
    """Radial displacement of the composed wave at position x, time t."""
    k = 0.0 if math.isinf(params.wavelength) else 2.0 * math.pi / params.wavelength
    return params.amplitude * math.cos(
        k * x - 2.0 * math.pi * params.frequency * (t - params.onset_delay))


def wavelength_from_delay(pitch: float, f: float, delta_t: float) -> float:
    """Spatial wavelength implied by the onset delay: lambda = p/(f*dt).

    Zero delay returns inf (all-in-phase).
    """
    if pitch <= 0.0:
        raise DomainError("pitch must be positive")
    if f <= 0.0:
        raise DomainError("frequency must be positive")
    if delta_t < 0.0:
        raise DomainError("onset delay must be non-negative")
    if delta_t == 0.0:
        return math.inf
    return pitch / (f * delta_t)


def radial_amplitude(spec: ActuatorSpec, limb_compliance: float,
                     volume_swing: float) -> float:
    """Radial displacement produced by a fluid volume swing.

    Linear limb compliance: A' = k_c * dV.
    """
    if limb_compliance < 0.0 or volume_swing < 0.0:
        raise DomainError("compliance and volume swing must be non-negative")
    if volume_swing > spec.max_fluid_volume * (1.0 + 1e-9):
        raise DomainError("volume swing exceeds actuator working volume")
    return limb_compliance * volume_swing


@dataclass(frozen=True, eq=False)
class PatternSchedule:
    """Sampled per-actuator targets for one composed pattern."""

    kind: str
    command: WaveCommand
    squeeze_time: float | None
    sample_period: float
    times: np.ndarray            # (N,)
    actuator_angles: np.ndarray  # (num_actuators, N) ideal per-actuator command
    motor_angles: np.ndarray     # (num_motors, N) realized motor targets
    volumes: np.ndarray          # (num_actuators, N) contained fluid volume
    max_fluid_volume: float
    num_motors: int

    @property
    def num_actuators(self) -> int:
        return self.actuator_angles.shape[0]

    @property
    def num_samples(self) -> int:
        return self.times.shape[0]

    @property
    def duration(self) -> float:
        return self.num_samples * self.sample_period

    def volume_swing(self) -> float:
        """Largest per-actuator withdrawn volume over the schedule."""
        return float(self.max_fluid_volume - self.volumes.min())


def _ideal_angle_series(kind: str, cmd: WaveCommand, times: np.ndarray,
                        mid: float, squeeze_time: float | None) -> np.ndarray:
    n_act = cmd.num_actuators
    series = np.empty((n_act, times.shape[0]))
    if kind == SEQUENTIAL_SQUEEZE:
        cycle = n_act * squeeze_time
        for n in range(1, n_act + 1):
            slot = wave_step_index(cmd, n) % n_act
            u = np.mod(times, cycle) - slot * squeeze_time
            active = (u >= 0.0) & (u < squeeze_time)
            profile = np.where(active,
                               np.sin(math.pi * u / squeeze_time), 0.0)
            series[n - 1] = mid + cmd.amplitude * profile
        return series
    delay = 0.0 if kind == ALL_IN_PHASE else cmd.onset_delay
    for n in range(1, n_act + 1):
        k = wave_step_index(cmd, n)
        phase = 2.0 * math.pi * cmd.frequency * (times - k * delay)
        series[n - 1] = mid + cmd.amplitude * np.sin(phase)
    return series


def compose_pattern(kind: str, cmd: WaveCommand, actuator: ActuatorSpec,
                    crank: CrankSpec, manifold: Manifold, *,
                    squeeze_time: float | None = None,
                    sample_period: float = DEFAULT_SAMPLE_PERIOD_S) -> PatternSchedule:
    """Sample a pattern into per-actuator and per-motor target series.

    Raises ScheduleValidationError when the pattern would overdraw an
    actuator or cannot be realized on the given manifold.
    """
    if kind not in PATTERN_KINDS:
        raise ConfigError(f"unknown pattern kind {kind!r}")
    if kind == SEQUENTIAL_SQUEEZE:
        if squeeze_time is None or squeeze_time <= 0.0:
            raise ConfigError("sequential squeeze requires a positive squeeze_time")
    elif squeeze_time is not None:
        raise ConfigError(f"squeeze_time is only valid for {SEQUENTIAL_SQUEEZE}")
    if sample_period <= 0.0:
        raise ConfigError("sample_period must be positive")
    if cmd.num_actuators != manifold.num_actuators:
        raise ConfigError("command and manifold disagree on actuator count")
    if cmd.amplitude > crank.alpha_half_range * (1.0 + 1e-12):
        raise ScheduleValidationError(
            "amplitude drives the motor outside its operating range")

    n_samples = max(1, int(round(cmd.duration / sample_period)))
    times = np.arange(n_samples) * sample_period
    mid = crank.alpha_mid
    ideal = _ideal_angle_series(kind, cmd, times, mid, squeeze_time)

    # Realize the per-actuator commands on the manifold's motors.  An
    # actuator on chamber B compresses on the opposite half-swing, so its
    # ideal command must mirror its motor's angle about mid-range.
    ports = manifold.port_actuators()
    motor_series = np.empty((manifold.num_motors, n_samples))
    assigned = [False] * manifold.num_motors
    for (motor, chamber), acts in sorted(ports.items()):
        rep = ideal[acts[0] - 1]
        realized = rep if chamber == CHAMBER_A else 2.0 * mid - rep
        for act in acts[1:]:
            if np.max(np.abs(ideal[act - 1] - rep)) > _SERIES_TOL:
                raise ScheduleValidationError(
                    f"actuators {acts} share one port but command different "
                    "waveforms; pattern not realizable on this manifold")
        if assigned[motor - 1]:
            if np.max(np.abs(motor_series[motor - 1] - realized)) > _SERIES_TOL:
                raise ScheduleValidationError(
                    f"chambers of motor {motor} demand inconsistent motion; "
                    "pattern not realizable on this manifold")
        else:
            motor_series[motor - 1] = realized
            assigned[motor - 1] = True
    if not all(assigned):
        raise ConfigError("manifold leaves a motor without any actuator")

    # Quasi-static fluid mapping: withdrawn volume per actuator from the
    # piston position relative to mid-range rest, split per port.
    x_mid = piston_position(crank, mid)
    counts = {port: len(acts) for port, acts in ports.items()}
    volumes = np.empty((manifold.num_actuators, n_samples))
    vol_tol = 1e-9 * actuator.max_fluid_volume
    for act, (motor, chamber) in sorted(manifold.port_map.items()):
        x = np.array([piston_position(crank, a) for a in motor_series[motor - 1]])
        raw = crank.bore_area * ((x_mid - x) if chamber == CHAMBER_A else (x - x_mid))
        share = np.maximum(raw, 0.0) / counts[(motor, chamber)]
        over = share - actuator.max_fluid_volume
        if np.any(over > vol_tol):
            idx = int(np.argmax(over > vol_tol))
            raise ScheduleValidationError(
                f"actuator {act} overdrawn at t={times[idx]:.3f}s",
                actuator=act, time=float(times[idx]))
        volumes[act - 1] = actuator.max_fluid_volume - np.minimum(
            share, actuator.max_fluid_volume)

    return PatternSchedule(
        kind=kind, command=cmd, squeeze_time=squeeze_time,
        sample_period=sample_period, times=times, actuator_angles=ideal,
        motor_angles=motor_series, volumes=volumes,
        max_fluid_volume=actuator.max_fluid_volume,
        num_motors=manifold.num_motors)
