"""Device configuration file: load, validate, save.

One JSON document bundles every model's parameters.  Field names carry
explicit units (``_m``, ``_pa``, ``_hz``, ``_deg``) because unit mix-ups
are the main hazard in this domain; unknown fields are rejected rather
than ignored.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .actuator import ActuatorSpec, FixtureSpec, PVCurve
from .drivetrain import CHAMBER_A, CHAMBER_B, CrankSpec, Manifold
from .errors import ConfigError
from .session import SafetyLimits, SessionParams
from .transport import FluidSpec, LimbModel

CONFIG_VERSION = 1

_SECTIONS = ("v", "actuator", "fixture", "crank", "manifold", "limb",
             "fluid", "safety", "session")


@dataclass(frozen=True)
class DeviceConfig:
    """Validated bundle of every model's parameters."""

    actuator: ActuatorSpec = field(default_factory=ActuatorSpec)
    fixture: FixtureSpec = field(default_factory=FixtureSpec)
    crank: CrankSpec = field(default_factory=CrankSpec)
    manifold: Manifold = field(default_factory=Manifold)
    limb: LimbModel = field(default_factory=LimbModel)
    fluid: FluidSpec = field(default_factory=FluidSpec)
    safety: SafetyLimits = field(default_factory=SafetyLimits)
    session: SessionParams = field(default_factory=SessionParams)


def default_config() -> DeviceConfig:
    return DeviceConfig()


def _take(section: dict, name: str, known: set[str]):
    unknown = set(section) - known
    if unknown:
        raise ConfigError(f"unknown field(s) in {name}: {sorted(unknown)}")


def _build(section: dict | None, name: str, mapping: dict, factory):
    """Construct a spec from a config section via a json-key -> kwarg map."""
    if section is None:
        return factory()
    if not isinstance(section, dict):
        raise ConfigError(f"section {name} must be an object")
    _take(section, name, set(mapping))
    kwargs = {}
    for key, value in section.items():
        attr, convert = mapping[key]
        kwargs[attr] = convert(value) if convert else value
    try:
        return factory(**kwargs)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid {name} section: {exc}") from exc


def _pv_curve(points) -> PVCurve:
    if not isinstance(points, list):
        raise ConfigError("pv_curve_points_m3_pa must be a list of [v, p] pairs")
    return PVCurve(points=tuple((float(v), float(p)) for v, p in points))


def _port_map(raw) -> dict[int, tuple[int, str]]:
    if not isinstance(raw, dict):
        raise ConfigError("port_map must map actuator index to [motor, chamber]")
    out = {}
    for key, value in raw.items():
        motor, chamber = value
        if chamber not in (CHAMBER_A, CHAMBER_B):
            raise ConfigError(f"chamber must be 'A' or 'B', got {chamber!r}")
        out[int(key)] = (int(motor), chamber)
    return out


def _lambda_crit(value) -> float:
    # null disables the finite-length attenuation entirely
    return math.inf if value is None else float(value)


_ACTUATOR_MAP = {
    "tube_outer_diameter_m": ("tube_outer_diameter", float),
    "tube_inner_diameter_m": ("tube_inner_diameter", float),
    "stitch_length_m": ("stitch_length", float),
    "wrinkle_ratio": ("wrinkle_ratio", float),
    "width_m": ("width", float),
    "thickness_m": ("thickness", float),
    "max_fluid_volume_m3": ("max_fluid_volume", float),
    "pv_curve_points_m3_pa": ("pv_curve", _pv_curve),
}

_FIXTURE_MAP = {
    "cylinder_diameter_m": ("cylinder_diameter", float),
    "sensor_arc_deg": ("sensor_arc", lambda v: math.radians(float(v))),
    "actuator_width_m": ("actuator_width", float),
}

_CRANK_MAP = {
    "crank_length_m": ("crank_length", float),
    "rod_length_m": ("rod_length", float),
    "alpha_min_deg": ("alpha_min", lambda v: math.radians(float(v))),
    "alpha_max_deg": ("alpha_max", lambda v: math.radians(float(v))),
    "bore_area_m2": ("bore_area", float),
    "torque_max_nm": ("torque_max", float),
    "omega_max_rad_s": ("omega_max", float),
}

_MANIFOLD_MAP = {
    "num_motors": ("num_motors", int),
    "port_map": ("port_map", _port_map),
}

_LIMB_MAP = {
    "vein_mean_radius_m": ("vein_mean_radius", float),
    "occlusion_amplitude_m": ("occlusion_amplitude", float),
    "actuator_pitch_m": ("actuator_pitch", float),
    "actuation_length_m": ("actuation_length", float),
    "lambda_crit_m": ("lambda_crit", _lambda_crit),
}

_FLUID_MAP = {
    "glycerin_mass_fraction": ("glycerin_mass_fraction", float),
    "temperature_c": ("temperature", float),
}

_SAFETY_MAP = {
    "pressure_cap_pa": ("pressure_cap", float),
    "max_frequency_cap_hz": ("max_frequency_cap", float),
}

_SESSION_MAP = {
    "sim_dt_s": ("sim_dt", float),
    "telemetry_period_s": ("telemetry_period", float),
    "idle_behavior": ("idle_behavior", None),
    "limb_surface_radius_m": ("limb_surface_radius", float),
    "limb_compliance_m_per_m3": ("limb_compliance", float),
}


def parse_config(doc: dict) -> DeviceConfig:
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    _take(doc, "config", set(_SECTIONS))
    version = doc.get("v", CONFIG_VERSION)
    if version != CONFIG_VERSION:
        raise ConfigError(f"unsupported config version {version!r}")

    manifold_doc = doc.get("manifold")
    if isinstance(manifold_doc, dict) and "num_motors" in manifold_doc \
            and "port_map" not in manifold_doc:
        # allow choosing the design by motor count alone
        from .drivetrain import default_port_map
        manifold_doc = dict(manifold_doc)
        manifold_doc["port_map"] = {
            str(a): [m, c]
            for a, (m, c) in default_port_map(int(manifold_doc["num_motors"])).items()}
    manifold = _build(manifold_doc, "manifold", _MANIFOLD_MAP, Manifold)

    return DeviceConfig(
        actuator=_build(doc.get("actuator"), "actuator", _ACTUATOR_MAP, ActuatorSpec),
        fixture=_build(doc.get("fixture"), "fixture", _FIXTURE_MAP, FixtureSpec),
        crank=_build(doc.get("crank"), "crank", _CRANK_MAP, CrankSpec),
        manifold=manifold,
        limb=_build(doc.get("limb"), "limb", _LIMB_MAP, LimbModel),
        fluid=_build(doc.get("fluid"), "fluid", _FLUID_MAP, FluidSpec),
        safety=_build(doc.get("safety"), "safety", _SAFETY_MAP, SafetyLimits),
        session=_build(doc.get("session"), "session", _SESSION_MAP, SessionParams),
    )


def load_config(path) -> DeviceConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return parse_config(doc)


def config_to_dict(cfg: DeviceConfig) -> dict:
    act, fix, crk = cfg.actuator, cfg.fixture, cfg.crank
    limb, fluid = cfg.limb, cfg.fluid
    return {
        "v": CONFIG_VERSION,
        "actuator": {
            "tube_outer_diameter_m": act.tube_outer_diameter,
            "tube_inner_diameter_m": act.tube_inner_diameter,
            "stitch_length_m": act.stitch_length,
            "wrinkle_ratio": act.wrinkle_ratio,
            "width_m": act.width,
            "thickness_m": act.thickness,
            "max_fluid_volume_m3": act.max_fluid_volume,
            "pv_curve_points_m3_pa": [list(p) for p in act.pv_curve.points],
        },
        "fixture": {
            "cylinder_diameter_m": fix.cylinder_diameter,
            "sensor_arc_deg": math.degrees(fix.sensor_arc),
            "actuator_width_m": fix.actuator_width,
        },
        "crank": {
            "crank_length_m": crk.crank_length,
            "rod_length_m": crk.rod_length,
            "alpha_min_deg": math.degrees(crk.alpha_min),
            "alpha_max_deg": math.degrees(crk.alpha_max),
            "bore_area_m2": crk.bore_area,
            "torque_max_nm": crk.torque_max,
            "omega_max_rad_s": crk.omega_max,
        },
        "manifold": {
            "num_motors": cfg.manifold.num_motors,
            "port_map": {str(a): [m, c] for a, (m, c)
                         in sorted(cfg.manifold.port_map.items())},
        },
        "limb": {
            "vein_mean_radius_m": limb.vein_mean_radius,
            "occlusion_amplitude_m": limb.occlusion_amplitude,
            "actuator_pitch_m": limb.actuator_pitch,
            "actuation_length_m": limb.actuation_length,
            "lambda_crit_m": None if math.isinf(limb.lambda_crit)
                             else limb.lambda_crit,
        },
        "fluid": {
            "glycerin_mass_fraction": fluid.glycerin_mass_fraction,
            "temperature_c": fluid.temperature,
        },
        "safety": {
            "pressure_cap_pa": cfg.safety.pressure_cap,
            "max_frequency_cap_hz": cfg.safety.max_frequency_cap,
        },
        "session": {
            "sim_dt_s": cfg.session.sim_dt,
            "telemetry_period_s": cfg.session.telemetry_period,
            "idle_behavior": cfg.session.idle_behavior,
            "limb_surface_radius_m": cfg.session.limb_surface_radius,
            "limb_compliance_m_per_m3": cfg.session.limb_compliance,
        },
    }


def save_config(cfg: DeviceConfig, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(config_to_dict(cfg), fh, indent=2, sort_keys=True)
        fh.write("\n")
