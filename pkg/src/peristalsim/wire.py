"""Canonical serialization shared between the CLI, service and UI.

Pattern documents must serialize to identical bytes no matter which
component produced them, so numbers follow one rule everywhere: integral
values print without a decimal point, everything else prints as the
shortest round-trip decimal.  Keys are sorted and separators carry no
whitespace, matching ``JSON.stringify`` output on the UI side.
"""

from __future__ import annotations

import json
import math

from .errors import ConfigError
from .waveforms import (DEFAULT_SAMPLE_PERIOD_S, DIRECTIONS, PATTERN_KINDS,
                        SEQUENTIAL_SQUEEZE, PatternSchedule, WaveCommand)

PATTERN_DOC_VERSION = 1

_PATTERN_FIELDS = {
    "v", "kind", "frequency_hz", "amplitude_fraction", "onset_delay_s",
    "duration_s", "start_actuator", "direction", "num_actuators",
    "sample_period_s", "squeeze_time_s",
}


def _canonical_number(x) -> str:
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ConfigError("non-finite numbers cannot be serialized")
        if x == int(x) and abs(x) < 2 ** 53:
            return str(int(x))
        return repr(x)
    return str(x)


def canonical_json(obj) -> str:
    """Deterministic, cross-language JSON encoding."""
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, float)):
        return _canonical_number(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(canonical_json(v) for v in obj) + "]"
    if isinstance(obj, dict):
        items = []
        for key in sorted(obj):
            if not isinstance(key, str):
                raise ConfigError("object keys must be strings")
            items.append(json.dumps(key, ensure_ascii=False) + ":" +
                         canonical_json(obj[key]))
        return "{" + ",".join(items) + "}"
    raise ConfigError(f"cannot serialize {type(obj).__name__}")


def pattern_document(kind: str, cmd: WaveCommand, half_range: float,
                     squeeze_time: float | None = None,
                     sample_period: float = DEFAULT_SAMPLE_PERIOD_S) -> dict:
    """Parameter-level pattern description submitted by UI or CLI."""
    return {
        "v": PATTERN_DOC_VERSION,
        "kind": kind,
        "frequency_hz": cmd.frequency,
        "amplitude_fraction": cmd.amplitude / half_range,
        "onset_delay_s": cmd.onset_delay,
        "duration_s": cmd.duration,
        "start_actuator": cmd.start_actuator,
        "direction": cmd.direction,
        "num_actuators": cmd.num_actuators,
        "sample_period_s": sample_period,
        "squeeze_time_s": squeeze_time,
    }


def document_from_schedule(schedule: PatternSchedule, half_range: float) -> dict:
    return pattern_document(schedule.kind, schedule.command, half_range,
                            squeeze_time=schedule.squeeze_time,
                            sample_period=schedule.sample_period)


def command_from_document(doc: dict, half_range: float):
    """Parse a pattern document into (kind, command, squeeze_time, sample_period).

    Unknown fields are rejected; value constraints mirror WaveCommand.
    """
    if not isinstance(doc, dict):
        raise ConfigError("pattern document must be an object")
    unknown = set(doc) - _PATTERN_FIELDS
    if unknown:
        raise ConfigError(f"unknown pattern fields: {sorted(unknown)}")
    missing = _PATTERN_FIELDS - set(doc)
    if missing:
        raise ConfigError(f"missing pattern fields: {sorted(missing)}")
    if doc["v"] != PATTERN_DOC_VERSION:
        raise ConfigError(f"unsupported pattern document version {doc['v']!r}")
    kind = doc["kind"]
    if kind not in PATTERN_KINDS:
        raise ConfigError(f"unknown pattern kind {kind!r}")
    if doc["direction"] not in DIRECTIONS:
        raise ConfigError(f"unknown direction {doc['direction']!r}")
    fraction = float(doc["amplitude_fraction"])
    if not 0.0 < fraction <= 1.0:
        raise ConfigError("amplitude_fraction must be in (0, 1]")
    squeeze_time = doc["squeeze_time_s"]
    if kind == SEQUENTIAL_SQUEEZE:
        if squeeze_time is None or float(squeeze_time) <= 0.0:
            raise ConfigError("sequential squeeze requires squeeze_time_s > 0")
        squeeze_time = float(squeeze_time)
    elif squeeze_time is not None:
        raise ConfigError("squeeze_time_s is only valid for sequential squeeze")
    cmd = WaveCommand(
        amplitude=fraction * half_range,
        frequency=float(doc["frequency_hz"]),
        onset_delay=float(doc["onset_delay_s"]),
        num_actuators=int(doc["num_actuators"]),
        start_actuator=int(doc["start_actuator"]),
        direction=doc["direction"],
        duration=float(doc["duration_s"]),
    )
    sample_period = float(doc["sample_period_s"])
    if sample_period <= 0.0:
        raise ConfigError("sample_period_s must be positive")
    return kind, cmd, squeeze_time, sample_period
