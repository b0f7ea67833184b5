"""Digital twin of a peristaltic soft wearable compression robot."""

from .actuator import (ActuatorSpec, FixtureSpec, PVCurve,
                       pressure_from_sensor_force, pressure_from_volume,
                       tension_from_pressure, volume_from_pressure)
from .config import DeviceConfig, default_config, load_config, save_config
from .drivetrain import (CrankSpec, Manifold, chamber_volumes, crank_torque,
                         displaced_volume, max_frequency, piston_position,
                         route_volumes, stroke_volume)
from .optimizer import RegimeConstraints, RegimeResult, optimize_regime
from .session import (DeviceSession, SafetyLimits, SessionParams,
                      SessionState, TelemetryFrame)
from .transport import (FluidSpec, LimbModel, TransportResult,
                        cheng_viscosity, flow_for_regime, lubrication_oracle,
                        mean_flow_from_speed, mean_flow_from_wavelength,
                        mixture_density, reynolds_report, simulate_transport,
                        sweep_transport)
from .waveforms import (PatternSchedule, SpatialWaveParams, WaveCommand,
                        compose_pattern, motor_angle, radial_amplitude,
                        spatial_wave, wavelength_from_delay)

__version__ = "0.1.0"

__all__ = [
    "ActuatorSpec", "FixtureSpec", "PVCurve", "pressure_from_volume",
    "volume_from_pressure", "pressure_from_sensor_force",
    "tension_from_pressure",
    "CrankSpec", "Manifold", "piston_position", "crank_torque",
    "displaced_volume", "chamber_volumes", "stroke_volume", "max_frequency",
    "route_volumes",
    "WaveCommand", "SpatialWaveParams", "PatternSchedule", "motor_angle",
    "spatial_wave", "wavelength_from_delay", "radial_amplitude",
    "compose_pattern",
    "LimbModel", "FluidSpec", "TransportResult", "cheng_viscosity",
    "mixture_density", "mean_flow_from_speed", "mean_flow_from_wavelength",
    "lubrication_oracle", "reynolds_report", "flow_for_regime",
    "simulate_transport", "sweep_transport",
    "RegimeConstraints", "RegimeResult", "optimize_regime",
    "DeviceSession", "SessionState", "SafetyLimits", "SessionParams",
    "TelemetryFrame",
    "DeviceConfig", "default_config", "load_config", "save_config",
    "__version__",
]
