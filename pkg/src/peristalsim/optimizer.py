"""Search for driving regimes that maximize predicted fluid transport.

The feasible set has kinks (servo speed plateau, wavelength cap), so the
search is an exhaustive grid evaluation with a deterministic tie-break,
followed by golden-section refinement of the frequency axis when it is
continuous.  No randomness anywhere; results reproduce bit-for-bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .actuator import ActuatorSpec, pressure_from_volume
from .drivetrain import CrankSpec, max_frequency, piston_position
from .errors import ConfigError, InfeasibleError
from .transport import FluidSpec, LimbModel, flow_for_regime
from .waveforms import (DEFAULT_LIMB_COMPLIANCE_M_PER_M3,
                        wavelength_from_delay)

# Onset-delay grid of the transport experiments: 0 to 1.125 s by 125 ms.
DEFAULT_DELTA_T_GRID_S = (0.0, 0.125, 0.25, 0.375, 0.5, 0.625, 0.75,
                          0.875, 1.0, 1.125)

GOLDEN_TOL_HZ = 1e-4
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class RegimeConstraints:
    """Search space and feasibility limits for the regime search."""

    f_range: tuple[float, float] = (0.2, 0.5)
    delta_t_grid: tuple[float, ...] | None = DEFAULT_DELTA_T_GRID_S
    delta_t_range: tuple[float, float] | None = None
    amplitude_range: tuple[float, float] = (0.1, 1.0)
    lambda_max: float | None = None     # defaults to the limb's lambda_crit
    pressure_cap: float = 22e3
    f_points: int = 13
    delta_t_points: int = 10
    amplitude_points: int = 10

    def __post_init__(self):
        lo, hi = self.f_range
        if not 0.0 < lo <= hi:
            raise ConfigError("f_range must be a nonempty positive interval")
        if (self.delta_t_grid is None) == (self.delta_t_range is None):
            raise ConfigError("provide exactly one of delta_t_grid / delta_t_range")
        if self.delta_t_grid is not None:
            if not self.delta_t_grid or any(d < 0.0 for d in self.delta_t_grid):
                raise ConfigError("delta_t_grid values must be >= 0")
        else:
            dlo, dhi = self.delta_t_range
            if not 0.0 <= dlo <= dhi:
                raise ConfigError("delta_t_range must be a nonempty interval")
        alo, ahi = self.amplitude_range
        if not 0.0 < alo <= ahi <= 1.0:
            raise ConfigError("amplitude_range must lie in (0, 1]")
        if self.lambda_max is not None and not self.lambda_max > 0.0:
            raise ConfigError("lambda_max must be positive")
        if self.pressure_cap <= 0.0:
            raise ConfigError("pressure_cap must be positive")
        for name in ("f_points", "delta_t_points", "amplitude_points"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1")


@dataclass(frozen=True)
class GridPoint:
    """One evaluated regime."""

    frequency: float
    delta_t: float
    amplitude: float
    wavelength: float
    flow: float
    feasible: bool
    violated: tuple[str, ...] = ()


@dataclass(frozen=True)
class RegimeResult:
    """Best feasible regime plus the full evaluation grid."""

    frequency: float
    delta_t: float
    amplitude: float
    predicted_flow: float
    wavelength: float
    active_constraints: tuple[str, ...]
    grid: tuple[GridPoint, ...]
    refined: bool = False


def _axis(lo: float, hi: float, points: int) -> list[float]:
    if lo == hi or points == 1:
        return [lo]
    step = (hi - lo) / (points - 1)
    return [lo + i * step for i in range(points)]


def _volume_swing(crank: CrankSpec, amplitude: float, port_share: int) -> float:
    """Peak withdrawn volume per actuator at a stroke fraction."""
    mid = crank.alpha_mid
    top = mid + amplitude * crank.alpha_half_range
    return crank.bore_area * (
        piston_position(crank, mid) - piston_position(crank, top)) / port_share


def optimize_regime(limb: LimbModel, fluid: FluidSpec, crank: CrankSpec,
                    constraints: RegimeConstraints, *,
                    actuator: ActuatorSpec | None = None,
                    port_share: int = 1,
                    limb_compliance: float = DEFAULT_LIMB_COMPLIANCE_M_PER_M3
                    ) -> RegimeResult:
    """Maximize predicted mean flow over (f, delta_t, stroke amplitude).

    Feasibility: the servo must track the sinusoid (f <= max_frequency),
    the implied wavelength may not exceed lambda_max, and the peak
    compression pressure may not exceed the cap.  Ties break toward the
    lowest frequency, then the largest onset delay, then the smallest
    amplitude.
    """
    act = ActuatorSpec() if actuator is None else actuator
    lambda_max = limb.lambda_crit if constraints.lambda_max is None \
        else constraints.lambda_max

    f_lo, f_hi = constraints.f_range
    f_values = _axis(f_lo, f_hi, constraints.f_points)
    if constraints.delta_t_grid is not None:
        dt_values = list(constraints.delta_t_grid)
    else:
        dt_values = _axis(*constraints.delta_t_range, constraints.delta_t_points)
    amp_values = _axis(*constraints.amplitude_range, constraints.amplitude_points)

    def evaluate(f: float, dt: float, amp: float) -> GridPoint:
        violated = []
        if f > max_frequency(crank, amp):
            violated.append("frequency_limit")
        swing = _volume_swing(crank, amp, port_share)
        if swing > act.max_fluid_volume * (1.0 + 1e-9):
            violated.append("stroke_volume")
            peak_pressure = math.inf
        else:
            peak_pressure = pressure_from_volume(
                act, max(act.max_fluid_volume - swing, 0.0))
        if peak_pressure > constraints.pressure_cap:
            violated.append("pressure_cap")
        lam = wavelength_from_delay(limb.actuator_pitch, f, dt)
        if lam > lambda_max:
            violated.append("wavelength_limit")
        if violated:
            return GridPoint(f, dt, amp, lam, 0.0, False, tuple(violated))
        b = min(limb_compliance * swing, limb.vein_mean_radius)
        lam, qbar = flow_for_regime(limb, f, dt, b=b)
        return GridPoint(f, dt, amp, lam, qbar, True)

    grid = []
    best = None
    for f in f_values:
        for dt in dt_values:
            for amp in amp_values:
                point = evaluate(f, dt, amp)
                grid.append(point)
                if not point.feasible:
                    continue
                if best is None or _better(point, best):
                    best = point

    if best is None:
        seen = sorted({name for p in grid for name in p.violated})
        raise InfeasibleError(
            f"no feasible regime; violated constraints: {', '.join(seen)}",
            binding=seen)

    refined = False
    if f_lo < f_hi:
        point = _refine_frequency(best, f_values, evaluate)
        if point is not None:
            best = point
            refined = True

    return RegimeResult(
        frequency=best.frequency, delta_t=best.delta_t, amplitude=best.amplitude,
        predicted_flow=best.flow, wavelength=best.wavelength,
        active_constraints=_active_constraints(best, crank, act, port_share,
                                               constraints, lambda_max),
        grid=tuple(grid), refined=refined)


def _better(a: GridPoint, b: GridPoint) -> bool:
    ka = (-a.flow, a.frequency, -a.delta_t, a.amplitude)
    kb = (-b.flow, b.frequency, -b.delta_t, b.amplitude)
    return ka < kb


def _refine_frequency(best: GridPoint, f_values: list[float], evaluate):
    """Golden-section sweep of f inside the winning grid cell.

    The refined point replaces the grid winner only on a strict flow
    improvement, keeping grid argmax results exact on plateaus.
    """
    idx = min(range(len(f_values)),
              key=lambda i: abs(f_values[i] - best.frequency))
    lo = f_values[max(idx - 1, 0)]
    hi = f_values[min(idx + 1, len(f_values) - 1)]
    if hi - lo <= GOLDEN_TOL_HZ:
        return None

    def flow_at(f: float) -> float:
        point = evaluate(f, best.delta_t, best.amplitude)
        return point.flow if point.feasible else -math.inf

    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = flow_at(c), flow_at(d)
    while b - a > GOLDEN_TOL_HZ:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = flow_at(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = flow_at(d)
    f_star = 0.5 * (a + b)
    point = evaluate(f_star, best.delta_t, best.amplitude)
    if point.feasible and point.flow > best.flow:
        return point
    return None


def _active_constraints(best: GridPoint, crank: CrankSpec, act: ActuatorSpec,
                        port_share: int, constraints: RegimeConstraints,
                        lambda_max: float) -> tuple[str, ...]:
    active = []
    if math.isclose(best.frequency, max_frequency(crank, best.amplitude),
                    rel_tol=1e-9):
        active.append("frequency_limit")
    if math.isfinite(lambda_max) and math.isclose(best.wavelength, lambda_max,
                                                  rel_tol=1e-9):
        active.append("wavelength_limit")
    swing = _volume_swing(crank, best.amplitude, port_share)
    peak = pressure_from_volume(act, max(act.max_fluid_volume - swing, 0.0))
    if math.isclose(peak, constraints.pressure_cap, rel_tol=1e-9):
        active.append("pressure_cap")
    return tuple(active)
