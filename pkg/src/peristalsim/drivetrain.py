"""Servo-driven slider-crank hydraulic cylinders and port routing.

Each motor turns a crank of length r coupled through a connecting rod of
length l (the build uses l = r) to the piston of a double-acting
hydraulic cylinder.  Piston position follows the offset slider-crank
kinematics

    x = r*cos(alpha) + l*sqrt(1 - ((r*sin(alpha) - r)/l)**2)

over the operating range of the crank angle alpha, and the quasi-static
motor torque is tau = r * F_t * sin(alpha) with F_t the rod force.  The
cylinder's two chambers drive complementary actuator groups through a
manifold that routes ports to actuators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ConfigError, DomainError

ALPHA_MIN_DEFAULT = math.radians(30.0)
ALPHA_MAX_DEFAULT = math.radians(120.0)

# Bore sized so one full half-stroke from mid-range displaces one
# actuator's 5 mL working volume with the default 20 mm crank.
DEFAULT_BORE_AREA_M2 = 3.2583e-4

CHAMBER_A = "A"
CHAMBER_B = "B"

_ANGLE_TOL = 1e-9


@dataclass(frozen=True)
class CrankSpec:
    """Slider-crank geometry plus servo torque/speed limits."""

    crank_length: float = 0.02
    rod_length: float = 0.02
    alpha_min: float = ALPHA_MIN_DEFAULT
    alpha_max: float = ALPHA_MAX_DEFAULT
    bore_area: float = DEFAULT_BORE_AREA_M2
    torque_max: float = 7.0
    omega_max: float = 10.0

    def __post_init__(self):
        if self.crank_length <= 0.0:
            raise ConfigError("crank_length must be positive")
        if self.rod_length < self.crank_length:
            raise ConfigError("rod_length must be >= crank_length")
        if self.alpha_min >= self.alpha_max:
            raise ConfigError("alpha_min must be below alpha_max")
        for name in ("bore_area", "torque_max", "omega_max"):
            if getattr(self, name) <= 0.0:
                raise ConfigError(f"{name} must be positive")

    @property
    def alpha_mid(self) -> float:
        """Rest angle; sinusoidal commands swing about this point."""
        return 0.5 * (self.alpha_min + self.alpha_max)

    @property
    def alpha_half_range(self) -> float:
        return 0.5 * (self.alpha_max - self.alpha_min)


def _check_alpha(spec: CrankSpec, alpha: float) -> float:
    if alpha < spec.alpha_min - _ANGLE_TOL or alpha > spec.alpha_max + _ANGLE_TOL:
        raise DomainError(
            f"crank angle {alpha} outside [{spec.alpha_min}, {spec.alpha_max}]")
    return min(max(alpha, spec.alpha_min), spec.alpha_max)


def piston_position(spec: CrankSpec, alpha: float) -> float:
    """Piston location x for crank angle alpha (offset slider-crank)."""
    alpha = _check_alpha(spec, alpha)
    r, l = spec.crank_length, spec.rod_length
    offset = (r * math.sin(alpha) - r) / l
    return r * math.cos(alpha) + l * math.sqrt(1.0 - offset * offset)


def crank_torque(spec: CrankSpec, alpha: float, f_t: float) -> float:
    """Quasi-static motor torque for rod force ``f_t``: tau = r*F_t*sin(alpha)."""
    alpha = _check_alpha(spec, alpha)
    return spec.crank_length * f_t * math.sin(alpha)


def stroke_volume(spec: CrankSpec) -> float:
    """Fluid volume displaced by the full alpha_min -> alpha_max stroke."""
    return spec.bore_area * (
        piston_position(spec, spec.alpha_min) - piston_position(spec, spec.alpha_max))


def displaced_volume(spec: CrankSpec, alpha: float,
                     reference: float | None = None) -> float:
    """Volume pushed out of chamber A since the reference angle.

    The reference defaults to alpha_min, the fully-pressurized chamber-A
    position.  Chamber B receives the complement, so the two chamber
    volumes always sum to the full stroke volume.
    """
    ref = spec.alpha_min if reference is None else reference
    return spec.bore_area * (piston_position(spec, ref) - piston_position(spec, alpha))


def chamber_volumes(spec: CrankSpec, alpha: float) -> tuple[float, float]:
    """Fluid volumes (chamber A, chamber B) at crank angle alpha.

    Chamber A is full at alpha_min, chamber B at alpha_max; the sum is the
    stroke volume for every alpha.
    """
    x = piston_position(spec, alpha)
    x_min = piston_position(spec, spec.alpha_max)
    x_max = piston_position(spec, spec.alpha_min)
    v_a = spec.bore_area * (x - x_min)
    v_b = spec.bore_area * (x_max - x)
    return v_a, v_b


def max_frequency(spec: CrankSpec, stroke_fraction: float) -> float:
    """Largest sinusoid frequency the servo can track at a stroke fraction.

    For alpha(t) = mid + A*sin(2*pi*f*t) with angular amplitude
    A = stroke_fraction * range / 2, the peak angular rate 2*pi*f*A may
    not exceed the servo's no-load speed.
    """
    if not 0.0 < stroke_fraction <= 1.0:
        raise DomainError("stroke_fraction must be in (0, 1]")
    amplitude = stroke_fraction * spec.alpha_half_range
    return spec.omega_max / (2.0 * math.pi * amplitude)


def achieved_frequency(spec: CrankSpec, commanded_f: float,
                       stroke_fraction: float) -> float:
    """Commanded frequency clamped to the servo speed plateau."""
    if commanded_f <= 0.0:
        raise DomainError("commanded frequency must be positive")
    return min(commanded_f, max_frequency(spec, stroke_fraction))


def achieved_stroke(spec: CrankSpec, commanded_f: float,
                    stroke_fraction: float) -> float:
    """Stroke fraction the rate-limited servo sweeps at the commanded cadence."""
    if commanded_f <= 0.0:
        raise DomainError("commanded frequency must be positive")
    factor = min(1.0, max_frequency(spec, stroke_fraction) / commanded_f)
    return stroke_fraction * factor


def default_port_map(num_motors: int) -> dict[int, tuple[int, str]]:
    """Actuator -> (motor, chamber) assignment reproducing the design wave.

    Two motors: chambers are interleaved so that a quarter-period command
    delay between motors advances the spatial phase by a quarter turn per
    actuator.  Eight motors: identity routing on chamber A.
    """
    if num_motors == 2:
        return {1: (1, CHAMBER_A), 5: (1, CHAMBER_A),
                3: (1, CHAMBER_B), 7: (1, CHAMBER_B),
                2: (2, CHAMBER_A), 6: (2, CHAMBER_A),
                4: (2, CHAMBER_B), 8: (2, CHAMBER_B)}
    if num_motors == 8:
        return {n: (n, CHAMBER_A) for n in range(1, 9)}
    raise ConfigError("num_motors must be 2 or 8")


@dataclass(frozen=True)
class Manifold:
    """Routing of hydraulic cylinder ports to actuators."""

    num_motors: int = 8
    port_map: dict[int, tuple[int, str]] = field(default_factory=lambda: default_port_map(8))

    def __post_init__(self):
        if self.num_motors not in (2, 8):
            raise ConfigError("num_motors must be 2 or 8")
        actuators = sorted(self.port_map)
        if actuators != list(range(1, len(actuators) + 1)):
            raise ConfigError("port_map must assign actuators 1..N exactly once")
        per_port: dict[tuple[int, str], list[int]] = {}
        for act, (motor, chamber) in self.port_map.items():
            if not 1 <= motor <= self.num_motors:
                raise ConfigError(f"actuator {act} routed to unknown motor {motor}")
            if chamber not in (CHAMBER_A, CHAMBER_B):
                raise ConfigError(f"actuator {act} routed to unknown chamber {chamber}")
            per_port.setdefault((motor, chamber), []).append(act)
        expected = 2 if self.num_motors == 2 else 1
        for port, acts in per_port.items():
            if len(acts) != expected:
                raise ConfigError(
                    f"port {port} drives {len(acts)} actuators, expected {expected}")
        if self.num_motors == 8:
            used = sorted(motor for motor, _ in per_port)
            if used != list(range(1, 9)):
                raise ConfigError("eight-piston manifold must use every motor once")

    @property
    def num_actuators(self) -> int:
        return len(self.port_map)

    def port_actuators(self) -> dict[tuple[int, str], tuple[int, ...]]:
        out: dict[tuple[int, str], list[int]] = {}
        for act, port in self.port_map.items():
            out.setdefault(port, []).append(act)
        return {port: tuple(sorted(acts)) for port, acts in out.items()}


def route_volumes(manifold: Manifold,
                  motor_volumes: list[tuple[float, float]]) -> list[float]:
    """Split per-port chamber volumes among the actuators they feed.

    ``motor_volumes`` holds one (chamber A, chamber B) pair per motor.
    Each port's volume divides equally between its attached actuators;
    with one actuator per port this is identity routing.
    """
    if len(motor_volumes) != manifold.num_motors:
        raise ConfigError(
            f"expected {manifold.num_motors} motor volume pairs, "
            f"got {len(motor_volumes)}")
    ports = manifold.port_actuators()
    out = [0.0] * manifold.num_actuators
    for (motor, chamber), acts in ports.items():
        vol_a, vol_b = motor_volumes[motor - 1]
        vol = vol_a if chamber == CHAMBER_A else vol_b
        share = vol / len(acts)
        for act in acts:
            out[act - 1] = share
    return out
