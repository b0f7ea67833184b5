"""Single-actuator compression model.

A fabric-sheathed fluidic actuator wrapped circumferentially around a limb
rests at its maximum fluid volume; withdrawing fluid contracts it and
raises the skin compression pressure.  Quasi-static behaviour is captured
by a calibrated pressure-volume table plus the hoop-stress balance

    P_c = t_act * sigma_act / R = F / A_c,      A_c = R * theta * w

linking compression pressure P_c, actuator wall tension sigma_act and
thickness t_act, the wrapped radius R, and the force F collected on a
sensor arc of central angle theta and axial width w.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ConfigError, DomainError

# Calibration anchors: 22 kPa at full withdrawal, near-linear on either
# side of the 4 mL knee with the steeper drop between 4 and 5 mL.
DEFAULT_MAX_PRESSURE_PA = 22e3
DEFAULT_PV_POINTS = ((0.0, 22e3), (4e-6, 8e3), (5e-6, 0.0))


@dataclass(frozen=True)
class PVCurve:
    """Piecewise-linear compression pressure vs. contained fluid volume.

    Knots run from the fully withdrawn state (volume 0, maximum pressure)
    to the rest state (maximum volume, minimum pressure).
    """

    points: tuple[tuple[float, float], ...] = DEFAULT_PV_POINTS

    def __post_init__(self):
        pts = tuple((float(v), float(p)) for v, p in self.points)
        object.__setattr__(self, "points", pts)
        if len(pts) < 2:
            raise ConfigError("pv_curve needs at least two points")
        vols = [v for v, _ in pts]
        prs = [p for _, p in pts]
        if vols[0] != 0.0:
            raise ConfigError("pv_curve must start at volume 0")
        if any(b <= a for a, b in zip(vols, vols[1:])):
            raise ConfigError("pv_curve volumes must be strictly increasing")
        if any(b > a for a, b in zip(prs, prs[1:])):
            raise ConfigError("pv_curve pressures must be non-increasing")

    @property
    def volumes(self):
        return tuple(v for v, _ in self.points)

    @property
    def pressures(self):
        return tuple(p for _, p in self.points)

    @property
    def max_pressure(self):
        return self.points[0][1]

    @property
    def min_pressure(self):
        return self.points[-1][1]

    @property
    def max_volume(self):
        return self.points[-1][0]


@dataclass(frozen=True)
class ActuatorSpec:
    """Geometry and calibrated pressure-volume law of one actuator."""

    tube_outer_diameter: float = 4.8e-3
    tube_inner_diameter: float = 3.2e-3
    stitch_length: float = 0.177
    wrinkle_ratio: float = 2.5
    width: float = 15e-3
    thickness: float = 1.5e-3
    max_fluid_volume: float = 5e-6
    pv_curve: PVCurve = field(default_factory=PVCurve)

    def __post_init__(self):
        if self.tube_inner_diameter >= self.tube_outer_diameter:
            raise ConfigError("tube inner diameter must be below outer diameter")
        for name in ("tube_outer_diameter", "tube_inner_diameter", "stitch_length",
                     "width", "thickness"):
            if getattr(self, name) <= 0.0:
                raise ConfigError(f"{name} must be positive")
        if self.wrinkle_ratio < 1.0:
            raise ConfigError("wrinkle_ratio must be >= 1")
        if self.max_fluid_volume <= 0.0:
            raise ConfigError("max_fluid_volume must be positive")
        if not math.isclose(self.pv_curve.max_volume, self.max_fluid_volume,
                            rel_tol=1e-12):
            raise ConfigError("pv_curve must end at max_fluid_volume")


@dataclass(frozen=True)
class FixtureSpec:
    """Cylindrical test fixture used to convert sensed force to pressure."""

    cylinder_diameter: float = 63.7e-3
    sensor_arc: float = math.radians(68.9)
    actuator_width: float = 15e-3

    def __post_init__(self):
        if self.cylinder_diameter <= 0.0:
            raise ConfigError("cylinder_diameter must be positive")
        if not 0.0 < self.sensor_arc < 2.0 * math.pi:
            raise ConfigError("sensor_arc must be in (0, 2*pi)")
        if self.actuator_width <= 0.0:
            raise ConfigError("actuator_width must be positive")


def pressure_from_volume(spec: ActuatorSpec, v: float) -> float:
    """Compression pressure at contained fluid volume ``v``.

    Piecewise-linear interpolation on the calibration table; monotone
    non-increasing in ``v``.
    """
    if not 0.0 <= v <= spec.max_fluid_volume:
        raise DomainError(
            f"volume {v} outside [0, {spec.max_fluid_volume}]")
    vols = spec.pv_curve.volumes
    prs = spec.pv_curve.pressures
    for i in range(len(vols) - 1):
        if v <= vols[i + 1]:
            frac = (v - vols[i]) / (vols[i + 1] - vols[i])
            return prs[i] + frac * (prs[i + 1] - prs[i])
    return prs[-1]


def volume_from_pressure(spec: ActuatorSpec, p: float) -> float:
    """Inverse lookup of :func:`pressure_from_volume`.

    On a flat segment of the curve the smallest volume is returned.
    """
    curve = spec.pv_curve
    if not curve.min_pressure <= p <= curve.max_pressure:
        raise DomainError(
            f"pressure {p} outside [{curve.min_pressure}, {curve.max_pressure}]")
    vols = curve.volumes
    prs = curve.pressures
    # Pressures are non-increasing, so the first matching segment holds
    # the smallest admissible volume.
    for i in range(len(vols) - 1):
        p_hi, p_lo = prs[i], prs[i + 1]
        if p_lo <= p <= p_hi:
            if p_hi == p_lo:
                return vols[i]
            frac = (p_hi - p) / (p_hi - p_lo)
            return vols[i] + frac * (vols[i + 1] - vols[i])
    return vols[-1]


def pressure_from_sensor_force(fixture: FixtureSpec, f: float) -> float:
    """Compression pressure from the force on the sensor arc.

    P_c = F / A_c with contact area A_c = R * theta * w.
    """
    if f < 0.0:
        raise DomainError("sensor force must be non-negative")
    radius = fixture.cylinder_diameter / 2.0
    contact_area = radius * fixture.sensor_arc * fixture.actuator_width
    return f / contact_area


def tension_from_pressure(spec: ActuatorSpec, p_c: float,
                          limb_radius: float) -> float:
    """Actuator wall tension sustaining compression pressure ``p_c``.

    Hoop-stress balance: sigma_act = P_c * R / t_act.
    """
    if p_c < 0.0:
        raise DomainError("compression pressure must be non-negative")
    if limb_radius <= 0.0:
        raise DomainError("limb radius must be positive")
    return p_c * limb_radius / spec.thickness
