"""Virtual-device controller: donning, run lifecycle, safety, telemetry.

One session owns all mutable device state and advances it on a fixed
1 ms simulation step; telemetry frames are decimated to 100 Hz.  Commands
are plain method calls; a serving layer may funnel network commands into
them one at a time.  Everything is deterministic: identical config,
schedule and step sizes reproduce identical frame sequences.

Donning is modeled as a registration procedure.  Each donning step parks
the pistons at one chamber's fully-pressurized extreme so that chamber's
actuators can be fastened at rest; when donning completes the pistons
park at mid-range and every actuator is registered at its maximum fluid
volume (minimum pressure).  Only from then on are actuator volumes
coupled to piston motion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .drivetrain import CHAMBER_A, chamber_volumes, crank_torque, piston_position
from .errors import BusyError, ConfigError, DomainError, ScheduleValidationError, StateError
from .transport import simulate_transport
from .waveforms import PatternSchedule

PRESSURE_CAP_CEILING_PA = 30e3

IDLE_HOLD = "hold"
IDLE_RELEASE = "release"


class SessionState(str, Enum):
    IDLE = "idle"
    DONNING_STEP1 = "donning_step1"
    DONNING_STEP2 = "donning_step2"
    READY = "ready"
    RUNNING = "running"
    FAULTED = "faulted"


@dataclass(frozen=True)
class SafetyLimits:
    """Hard operational limits enforced before and during a run."""

    pressure_cap: float = 22e3
    max_frequency_cap: float = 20.0

    def __post_init__(self):
        if not 0.0 < self.pressure_cap <= PRESSURE_CAP_CEILING_PA:
            raise ConfigError(
                f"pressure_cap must be in (0, {PRESSURE_CAP_CEILING_PA}] Pa")
        if self.max_frequency_cap <= 0.0:
            raise ConfigError("max_frequency_cap must be positive")


@dataclass(frozen=True)
class SessionParams:
    """Simulation loop configuration."""

    sim_dt: float = 1e-3
    telemetry_period: float = 1e-2
    idle_behavior: str = IDLE_HOLD
    limb_surface_radius: float = 31.85e-3
    limb_compliance: float = 34.814

    def __post_init__(self):
        if self.sim_dt <= 0.0 or self.telemetry_period <= 0.0:
            raise ConfigError("time steps must be positive")
        stride = self.telemetry_period / self.sim_dt
        if abs(stride - round(stride)) > 1e-9 or round(stride) < 1:
            raise ConfigError("telemetry_period must be a multiple of sim_dt")
        if self.idle_behavior not in (IDLE_HOLD, IDLE_RELEASE):
            raise ConfigError("idle_behavior must be 'hold' or 'release'")
        if self.limb_surface_radius <= 0.0:
            raise ConfigError("limb_surface_radius must be positive")
        if self.limb_compliance < 0.0:
            raise ConfigError("limb_compliance must be non-negative")


@dataclass(frozen=True)
class ActuatorReading:
    radius: float
    pressure: float
    volume: float


@dataclass(frozen=True)
class MotorReading:
    alpha: float
    piston_x: float
    torque: float


@dataclass(frozen=True)
class TelemetryFrame:
    t: float
    state: str
    actuators: tuple[ActuatorReading, ...]
    motors: tuple[MotorReading, ...]
    qcum: float
    fault_reason: str | None = None

    def to_json_obj(self) -> dict:
        obj = {
            "v": 1,
            "t": self.t,
            "actuators": [{"r": a.radius, "p": a.pressure, "v": a.volume}
                          for a in self.actuators],
            "motors": [{"alpha": m.alpha, "x": m.piston_x, "tau": m.torque}
                       for m in self.motors],
            "qcum": self.qcum,
            "state": self.state,
        }
        if self.fault_reason is not None:
            obj["reason"] = self.fault_reason
        return obj


def frame_csv_header(num_actuators: int, num_motors: int) -> str:
    cols = ["t_s", "state", "qcum_m3"]
    for i in range(1, num_actuators + 1):
        cols += [f"act{i}_radius_m", f"act{i}_pressure_pa", f"act{i}_volume_m3"]
    for j in range(1, num_motors + 1):
        cols += [f"motor{j}_alpha_rad", f"motor{j}_x_m", f"motor{j}_torque_nm"]
    return ",".join(cols)


def frame_csv_row(frame: TelemetryFrame) -> str:
    vals = [repr(frame.t), frame.state, repr(frame.qcum)]
    for a in frame.actuators:
        vals += [repr(a.radius), repr(a.pressure), repr(a.volume)]
    for m in frame.motors:
        vals += [repr(m.alpha), repr(m.piston_x), repr(m.torque)]
    return ",".join(vals)


def write_frames_csv(frames, path, num_actuators: int, num_motors: int):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(frame_csv_header(num_actuators, num_motors) + "\n")
        for frame in frames:
            fh.write(frame_csv_row(frame) + "\n")


def rebase_time(t_abs: float, t0: float, dt: float) -> float:
    """Run-relative timestamp, snapped to the simulation grid.

    Reconstructing the playback tick count keeps the value bit-identical
    across runs that started at different absolute times.
    """
    return round((t_abs - t0) / dt) * dt


class DeviceSession:
    """Owns the virtual device's mutable state and its simulation clock."""

    def __init__(self, config):
        self.config = config
        self.actuator = config.actuator
        self.crank = config.crank
        self.manifold = config.manifold
        self.limb = config.limb
        self.fluid = config.fluid
        self.safety = config.safety
        self.params = config.session

        self.num_actuators = self.manifold.num_actuators
        self.num_motors = self.manifold.num_motors
        ports = self.manifold.port_actuators()
        counts = {port: len(acts) for port, acts in ports.items()}
        self._motor_index = np.empty(self.num_actuators, dtype=int)
        self._chamber_sign = np.empty(self.num_actuators)
        self._port_share = np.empty(self.num_actuators)
        for act, (motor, chamber) in self.manifold.port_map.items():
            self._motor_index[act - 1] = motor - 1
            self._chamber_sign[act - 1] = 1.0 if chamber == CHAMBER_A else -1.0
            self._port_share[act - 1] = counts[(motor, chamber)]
        self._x_mid = piston_position(self.crank, self.crank.alpha_mid)
        self._telemetry_stride = round(self.params.telemetry_period /
                                       self.params.sim_dt)

        self.state = SessionState.IDLE
        self.fault_reason: str | None = None
        self._ticks = 0
        self.qcum = 0.0
        self.motor_alpha = np.full(self.num_motors, self.crank.alpha_mid)
        self.volumes = np.full(self.num_actuators, self.actuator.max_fluid_volume)
        self._coupled = False
        self._schedule: PatternSchedule | None = None
        self._schedule_start_tick = 0
        self._ticks_per_sample = 1
        self._stop_requested = False
        self._qdot = 0.0

    # ------------------------------------------------------------------
    # commands

    def don_step1(self) -> SessionState:
        """Park pistons at the chamber-A extreme and fasten its actuators."""
        self._require(SessionState.IDLE, "don1")
        self.motor_alpha[:] = self.crank.alpha_min
        self.state = SessionState.DONNING_STEP1
        return self.state

    def don_step2(self) -> SessionState:
        """Park pistons at the chamber-B extreme and fasten the rest."""
        self._require(SessionState.DONNING_STEP1, "don2")
        self.motor_alpha[:] = self.crank.alpha_max
        self.volumes[:] = self.actuator.max_fluid_volume
        self.state = SessionState.DONNING_STEP2
        return self.state

    def start(self, schedule: PatternSchedule) -> SessionState:
        if self.state is SessionState.RUNNING:
            raise BusyError("a schedule is already running")
        self._require(SessionState.READY, "start")
        self.validate_schedule(schedule)
        self._schedule = schedule
        self._schedule_start_tick = self._ticks
        self._ticks_per_sample = round(schedule.sample_period / self.params.sim_dt)
        self._stop_requested = False
        result = simulate_transport(self.limb, self.fluid, schedule,
                                    limb_compliance=self.params.limb_compliance)
        self._qdot = result.mean_flow
        self.state = SessionState.RUNNING
        return self.state

    def stop(self) -> SessionState:
        self._require(SessionState.RUNNING, "stop")
        self._stop_requested = True
        return self.state

    def estop(self, reason: str = "operator e-stop") -> SessionState:
        # Legal from every state; motors hold their current angles.
        self.state = SessionState.FAULTED
        self.fault_reason = reason
        self._schedule = None
        self._qdot = 0.0
        return self.state

    def reset(self) -> SessionState:
        self._require(SessionState.FAULTED, "reset")
        self.state = SessionState.IDLE
        self.fault_reason = None
        self.motor_alpha[:] = self.crank.alpha_mid
        self.volumes[:] = self.actuator.max_fluid_volume
        self._coupled = False
        self._schedule = None
        self._stop_requested = False
        self.qcum = 0.0
        self._qdot = 0.0
        return self.state

    def _require(self, state: SessionState, cmd: str):
        if self.state is not state:
            raise StateError(
                f"command {cmd!r} illegal in state {self.state.value!r}")

    # ------------------------------------------------------------------
    # schedule validation

    def validate_schedule(self, schedule: PatternSchedule):
        """Reject schedules the device cannot execute safely."""
        if schedule.num_motors != self.num_motors:
            raise ScheduleValidationError(
                "schedule composed for a different motor count")
        if schedule.num_actuators != self.num_actuators:
            raise ScheduleValidationError(
                "schedule composed for a different actuator count")
        stride = schedule.sample_period / self.params.sim_dt
        if abs(stride - round(stride)) > 1e-9 or round(stride) < 1:
            raise ScheduleValidationError(
                "sample_period must be a multiple of the simulation step")
        if schedule.command.frequency > self.safety.max_frequency_cap:
            raise ScheduleValidationError(
                f"commanded frequency {schedule.command.frequency} Hz exceeds "
                f"the {self.safety.max_frequency_cap} Hz cap")
        curve = self.actuator.pv_curve
        pressures = np.interp(schedule.volumes, curve.volumes, curve.pressures)
        over = pressures > self.safety.pressure_cap
        if np.any(over):
            act_idx, t_idx = np.unravel_index(int(np.argmax(over)), over.shape)
            t_bad = float(schedule.times[t_idx])
            raise ScheduleValidationError(
                f"schedule exceeds the {self.safety.pressure_cap} Pa pressure "
                f"cap on actuator {act_idx + 1} at t={t_bad:.3f}s",
                actuator=int(act_idx + 1), time=t_bad)

    # ------------------------------------------------------------------
    # simulation loop

    @property
    def t(self) -> float:
        return self._ticks * self.params.sim_dt

    def tick(self, dt: float | None = None) -> TelemetryFrame | None:
        """Advance one fixed simulation step; emit a frame on telemetry ticks.

        While a schedule runs, telemetry aligns to the run's own clock so
        frames land on exact playback sample times no matter when the run
        started; outside a run the global clock paces the heartbeat.
        """
        if dt is not None and not math.isclose(dt, self.params.sim_dt,
                                               rel_tol=1e-12):
            raise DomainError(f"tick step must equal the configured "
                              f"{self.params.sim_dt} s")
        self._ticks += 1
        dt = self.params.sim_dt

        if self.state is SessionState.DONNING_STEP2:
            # Donning settles: pistons park mid-range, device becomes ready.
            self.motor_alpha[:] = self.crank.alpha_mid
            self._coupled = True
            self.state = SessionState.READY
        running_basis = self.state is SessionState.RUNNING
        if running_basis:
            self._advance_schedule(dt)

        if self._coupled and self.state is not SessionState.FAULTED:
            self._update_volumes()
        self.qcum += self._qdot * dt

        fault = self._check_pressures()
        if running_basis:
            phase = self._ticks - self._schedule_start_tick
        else:
            phase = self._ticks
        emit = fault or (phase % self._telemetry_stride == 0)
        return self._make_frame() if emit else None

    def _advance_schedule(self, dt: float):
        schedule = self._schedule
        playback = self._ticks - self._schedule_start_tick
        sample = playback // self._ticks_per_sample
        at_boundary = playback % self._ticks_per_sample == 0
        done = sample >= schedule.num_samples
        if done or (self._stop_requested and at_boundary):
            self.state = SessionState.READY
            self._schedule = None
            self._stop_requested = False
            self._qdot = 0.0
            if self.params.idle_behavior == IDLE_RELEASE:
                self.motor_alpha[:] = self.crank.alpha_mid
            return
        targets = schedule.motor_angles[:, sample]
        max_step = self.crank.omega_max * dt
        delta = np.clip(targets - self.motor_alpha, -max_step, max_step)
        self.motor_alpha += delta

    def _update_volumes(self):
        x = np.array([piston_position(self.crank, a) for a in self.motor_alpha])
        raw = self.crank.bore_area * self._chamber_sign * \
            (self._x_mid - x[self._motor_index])
        withdrawn = np.clip(raw / self._port_share, 0.0,
                            self.actuator.max_fluid_volume)
        self.volumes = self.actuator.max_fluid_volume - withdrawn

    def _pressures(self) -> np.ndarray:
        curve = self.actuator.pv_curve
        return np.interp(self.volumes, curve.volumes, curve.pressures)

    def _check_pressures(self) -> bool:
        pressures = self._pressures()
        over = pressures > self.safety.pressure_cap * (1.0 + 1e-12)
        if np.any(over) and self.state is not SessionState.FAULTED:
            idx = int(np.argmax(over)) + 1
            self.estop(reason=f"pressure cap exceeded on actuator {idx}")
            return True
        return False

    def _make_frame(self) -> TelemetryFrame:
        pressures = self._pressures()
        withdrawn = self.actuator.max_fluid_volume - self.volumes
        radii = self.params.limb_surface_radius - \
            self.params.limb_compliance * withdrawn
        actuators = tuple(
            ActuatorReading(radius=float(radii[i]), pressure=float(pressures[i]),
                            volume=float(self.volumes[i]))
            for i in range(self.num_actuators))
        motors = []
        for m in range(self.num_motors):
            alpha = float(self.motor_alpha[m])
            acts = [i for i in range(self.num_actuators)
                    if self._motor_index[i] == m]
            p_proxy = max((float(pressures[i]) for i in acts), default=0.0)
            motors.append(MotorReading(
                alpha=alpha, piston_x=piston_position(self.crank, alpha),
                torque=crank_torque(self.crank, alpha,
                                    p_proxy * self.crank.bore_area)))
        return TelemetryFrame(t=self.t, state=self.state.value,
                              actuators=actuators, motors=tuple(motors),
                              qcum=self.qcum, fault_reason=self.fault_reason)

    # ------------------------------------------------------------------
    # conveniences

    def settle(self, max_ticks: int = 1000) -> SessionState:
        """Tick until the state machine leaves its transient donning state."""
        for _ in range(max_ticks):
            if self.state is not SessionState.DONNING_STEP2:
                return self.state
            self.tick()
        return self.state

    def don(self) -> SessionState:
        """Run the whole two-step donning workflow to Ready."""
        self.don_step1()
        self.don_step2()
        return self.settle()

    def run_schedule(self, schedule: PatternSchedule) -> list[TelemetryFrame]:
        """Execute a schedule to completion, returning the emitted frames."""
        self.start(schedule)
        frames = []
        while self.state is SessionState.RUNNING:
            frame = self.tick()
            if frame is not None:
                frames.append(frame)
        return frames

    def chamber_state(self) -> list[tuple[float, float]]:
        """Per-motor (chamber A, chamber B) fluid volumes at the current angles."""
        return [chamber_volumes(self.crank, float(a)) for a in self.motor_alpha]
