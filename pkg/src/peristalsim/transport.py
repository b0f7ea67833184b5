"""Peristaltically induced flow in the limb's vein.

For a travelling sinusoidal wall wave of amplitude b on a tube of mean
radius a moving at speed c, zero net pressure rise per wavelength gives
the time-averaged flow

    Qbar = (pi * c * b**2 / 2) * (16*a**2 - b**2) / (2*a**2 + 3*b**2),

and with c = lambda * f the flow grows linearly in wavelength at fixed
frequency.  An independent lubrication-theory oracle recovers the same
number by quadrature: in the wave frame the axial pressure gradient of
low-Reynolds flow through the waisted tube is

    dp/dx = -(8*mu / (pi*h**4)) * (q + pi*c*h**2),      h = a + b*cos(2*pi*x/lambda),

the wave-frame flux q is fixed by requiring zero pressure rise over one
wavelength, and the lab-frame mean flow is q + pi*c*<h**2>.  Viscosity
cancels through the zero-pressure-rise condition, so the oracle doubles
as a check that the transport regime is viscosity-insensitive.

Fluid properties for glycerin-water mixtures follow the published
exponent-blend viscosity correlation (valid 0-100 degC) and ideal mass
mixing for density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson
from scipy.optimize import brentq

from .errors import DomainError, NumericError, ScheduleValidationError
from .waveforms import (ALL_IN_PHASE, DEFAULT_LIMB_COMPLIANCE_M_PER_M3,
                        DEFAULT_PITCH_M, PERISTALTIC, SEQUENTIAL_SQUEEZE,
                        PatternSchedule, wavelength_from_delay)

GLYCERIN_DENSITY_KG_M3 = 1260.0
WATER_DENSITY_KG_M3 = 998.0

# Occlusion amplitude anchoring the 1 mL/min peak flow at the 22 cm
# wavelength, 0.2 Hz regime on the default 3 mm vein.
DEFAULT_OCCLUSION_AMPLITUDE_M = 1.7407e-4

# Velocity-diameter product reproducing the published mixture Reynolds
# numbers; corresponds to roughly 0.9 mL/min through the 3 mm vein.
REYNOLDS_REF_SPEED_DIAMETER_M2_S = 3.18e-6

ORACLE_MIN_STATIONS = 2048


@dataclass(frozen=True)
class LimbModel:
    """Vein and actuator-array geometry of the limb under the sleeve."""

    vein_mean_radius: float = 3e-3
    occlusion_amplitude: float = DEFAULT_OCCLUSION_AMPLITUDE_M
    actuator_pitch: float = DEFAULT_PITCH_M
    actuation_length: float = 9.2e-2
    lambda_crit: float = 0.22

    def __post_init__(self):
        if self.vein_mean_radius <= 0.0:
            raise DomainError("vein_mean_radius must be positive")
        if not 0.0 <= self.occlusion_amplitude <= self.vein_mean_radius:
            raise DomainError("occlusion amplitude must lie in [0, vein radius]")
        if self.actuator_pitch <= 0.0:
            raise DomainError("actuator_pitch must be positive")
        if self.actuation_length <= 0.0:
            raise DomainError("actuation_length must be positive")
        if not self.lambda_crit > 0.0:
            raise DomainError("lambda_crit must be positive (use inf to disable)")


def water_viscosity(temperature_c: float) -> float:
    """Dynamic viscosity of water in Pa*s."""
    t = temperature_c
    return 1.790e-3 * math.exp((-1230.0 - t) * t / (36100.0 + 360.0 * t))


def glycerin_viscosity(temperature_c: float) -> float:
    """Dynamic viscosity of pure glycerin in Pa*s."""
    t = temperature_c
    return 12.100 * math.exp((-1233.0 + t) * t / (9900.0 + 70.0 * t))


def _check_mixture_inputs(cm: float, temperature_c: float):
    if not 0.0 <= cm <= 1.0:
        raise DomainError("glycerin mass fraction must be in [0, 1]")
    if not 0.0 <= temperature_c <= 100.0:
        raise DomainError("correlation valid for 0..100 degC only")


def cheng_viscosity(cm: float, temperature_c: float = 22.0) -> float:
    """Dynamic viscosity of a glycerin-water mixture in Pa*s.

    Exponent blend mu = mu_w**alpha * mu_g**(1-alpha) with the published
    temperature-dependent weighting alpha(cm, T).
    """
    _check_mixture_inputs(cm, temperature_c)
    t = temperature_c
    mu_w = water_viscosity(t)
    mu_g = glycerin_viscosity(t)
    a = 0.705 - 0.0017 * t
    b = (4.9 + 0.036 * t) * a ** 2.5
    alpha = 1.0 - cm + a * b * cm * (1.0 - cm) / (a * cm + b * (1.0 - cm))
    return mu_g * math.exp(math.log(mu_w / mu_g) * alpha)


def mixture_density(cm: float, temperature_c: float = 22.0) -> float:
    """Density of a glycerin-water mixture in kg/m^3 (ideal mass mixing)."""
    _check_mixture_inputs(cm, temperature_c)
    return 1.0 / (cm / GLYCERIN_DENSITY_KG_M3 + (1.0 - cm) / WATER_DENSITY_KG_M3)


@dataclass(frozen=True)
class FluidSpec:
    """Glycerin-water mixture; density and viscosity derive from composition."""

    glycerin_mass_fraction: float = 1.0
    temperature: float = 22.0

    def __post_init__(self):
        _check_mixture_inputs(self.glycerin_mass_fraction, self.temperature)

    @property
    def density(self) -> float:
        return mixture_density(self.glycerin_mass_fraction, self.temperature)

    @property
    def dynamic_viscosity(self) -> float:
        return cheng_viscosity(self.glycerin_mass_fraction, self.temperature)


def mean_flow_from_speed(a: float, b: float, c: float) -> float:
    """Time-averaged peristaltic flow for wave speed c (zero pressure rise)."""
    if a <= 0.0:
        raise DomainError("tube radius must be positive")
    if not 0.0 <= b <= a:
        raise DomainError("wave amplitude must lie in [0, a]")
    if c < 0.0:
        raise DomainError("wave speed must be non-negative")
    return (math.pi * c * b * b / 2.0) * (16.0 * a * a - b * b) / (
        2.0 * a * a + 3.0 * b * b)


def mean_flow_from_wavelength(a: float, b: float, lam: float, f: float) -> float:
    """Time-averaged flow with the wave speed written as lambda * f."""
    if lam <= 0.0 or f <= 0.0:
        raise DomainError("wavelength and frequency must be positive")
    return mean_flow_from_speed(a, b, lam * f)


def lubrication_oracle(a: float, b: float, lam: float, f: float, mu: float,
                       stations: int = 4096) -> float:
    """Mean flow from first principles, by quadrature in the wave frame.

    Integrates the lubrication pressure gradient over one wavelength,
    solves the zero-pressure-rise condition for the wave-frame flux, and
    maps back to the lab frame.  Independent of the closed-form result
    and, in exact arithmetic, of mu.
    """
    if a <= 0.0 or lam <= 0.0 or f <= 0.0 or mu <= 0.0:
        raise DomainError("a, lambda, f, mu must be positive")
    if not 0.0 <= b < a:
        raise DomainError("oracle requires partial occlusion (0 <= b < a)")
    n = max(int(stations), ORACLE_MIN_STATIONS)
    if n % 2:
        n += 1
    c = lam * f
    x = np.linspace(0.0, lam, n + 1)
    h = a + b * np.cos(2.0 * math.pi * x / lam)
    h2 = h * h
    inv_h4 = 1.0 / (h2 * h2)

    def pressure_rise(q_wave: float) -> float:
        grad = -(8.0 * mu / math.pi) * (q_wave + math.pi * c * h2) * inv_h4
        return simpson(grad, x=x)

    scale = math.pi * c * (a + b) ** 2
    lo, hi = -2.0 * scale - 1.0, 1.0
    try:
        q_wave = brentq(pressure_rise, lo, hi, xtol=1e-10 * max(scale, 1e-30),
                        rtol=8.9e-16, maxiter=200)
    except ValueError as exc:
        raise NumericError(
            f"zero-pressure-rise solve failed for a={a}, b={b}, lam={lam}, "
            f"f={f}, mu={mu}: {exc}") from exc
    mean_h2 = simpson(h2, x=x) / lam
    return q_wave + math.pi * c * mean_h2


def reynolds_report(fluid: FluidSpec, qbar: float, a: float) -> float:
    """Reynolds number rho*v*D/mu at section-mean speed v = qbar/(pi*a^2)."""
    if a <= 0.0:
        raise DomainError("tube radius must be positive")
    v = qbar / (math.pi * a * a)
    return fluid.density * v * (2.0 * a) / fluid.dynamic_viscosity


def flow_for_regime(limb: LimbModel, f: float, delta_t: float,
                    b: float | None = None) -> tuple[float, float]:
    """(wavelength, mean flow) for a driving regime (f, onset delay).

    Zero delay is all-in-phase: no travelling wave, zero net flow.  Beyond
    the critical wavelength the finite actuation length attenuates the
    flow in proportion to lambda_crit/lambda, decaying toward the
    all-in-phase baseline.
    """
    amp = limb.occlusion_amplitude if b is None else b
    lam = wavelength_from_delay(limb.actuator_pitch, f, delta_t)
    if math.isinf(lam):
        return lam, 0.0
    if lam <= limb.lambda_crit:
        return lam, mean_flow_from_wavelength(limb.vein_mean_radius, amp, lam, f)
    q_crit = mean_flow_from_wavelength(limb.vein_mean_radius, amp,
                                       limb.lambda_crit, f)
    return lam, q_crit * (limb.lambda_crit / lam)


@dataclass(frozen=True, eq=False)
class TransportResult:
    """Flow prediction for one executed pattern."""

    mean_flow: float           # m^3/s
    reynolds: float
    cumulative_volume: float   # m^3 over the schedule duration
    wavelength: float          # m
    trace: np.ndarray          # instantaneous flow per schedule sample
    times: np.ndarray


def _effective_regime(schedule: PatternSchedule) -> tuple[float, float]:
    """Map a schedule to the (frequency, onset delay) driving the wave."""
    cmd = schedule.command
    if schedule.kind == PERISTALTIC:
        return cmd.frequency, cmd.onset_delay
    if schedule.kind == ALL_IN_PHASE:
        return cmd.frequency, 0.0
    if schedule.kind == SEQUENTIAL_SQUEEZE:
        ts = schedule.squeeze_time
        return 1.0 / (2.0 * ts), ts
    raise ScheduleValidationError(f"unknown schedule kind {schedule.kind!r}")


def simulate_transport(limb: LimbModel, fluid: FluidSpec,
                       schedule: PatternSchedule, *,
                       limb_compliance: float = DEFAULT_LIMB_COMPLIANCE_M_PER_M3
                       ) -> TransportResult:
    """Predict induced flow for a composed pattern.

    The occlusion amplitude couples to the schedule through the limb
    compliance and the largest per-actuator volume swing; the wavelength
    derives from the pattern's effective onset delay.
    """
    if schedule.volumes.min() < -1e-15 or \
            schedule.volumes.max() > schedule.max_fluid_volume * (1.0 + 1e-9):
        raise ScheduleValidationError("schedule volumes out of actuator bounds")
    f, delta_t = _effective_regime(schedule)
    b = min(limb_compliance * schedule.volume_swing(), limb.vein_mean_radius)
    lam, qbar = flow_for_regime(limb, f, delta_t, b=b)
    trace = np.full(schedule.num_samples, qbar)
    cumulative = qbar * schedule.duration
    return TransportResult(
        mean_flow=qbar, reynolds=reynolds_report(fluid, qbar, limb.vein_mean_radius),
        cumulative_volume=cumulative, wavelength=lam, trace=trace,
        times=schedule.times.copy())


def sweep_transport(limb: LimbModel, delta_ts: list[float], freqs: list[float],
                    mass_fractions: list[float],
                    temperature: float = 22.0) -> list[dict]:
    """Grid evaluation of the transport model over driving regimes.

    One record per (delta_t, f, Cm); field names match the exported CSV
    columns.
    """
    rows = []
    for f in freqs:
        for delta_t in delta_ts:
            lam, qbar = flow_for_regime(limb, f, delta_t)
            for cm in mass_fractions:
                fluid = FluidSpec(glycerin_mass_fraction=cm,
                                  temperature=temperature)
                rows.append({
                    "delta_t_ms": delta_t * 1e3,
                    "wavelength_m": lam,
                    "frequency_hz": f,
                    "Cm": cm,
                    "mu_cP": fluid.dynamic_viscosity * 1e3,
                    "qbar_m3s": qbar,
                    "qbar_mL_min": qbar * 60e6,
                    "reynolds": reynolds_report(fluid, qbar,
                                                limb.vein_mean_radius),
                })
    return rows
