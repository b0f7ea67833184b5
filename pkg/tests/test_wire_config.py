import json
import math
from pathlib import Path

import pytest

from peristalsim.config import (config_to_dict, default_config, load_config,
                                parse_config, save_config)
from peristalsim.errors import ConfigError
from peristalsim.waveforms import (PERISTALTIC, WaveCommand,
                                   wavelength_from_delay)
from peristalsim.wire import (canonical_json, command_from_document,
                              document_from_schedule, pattern_document)

SHARED = Path(__file__).resolve().parents[1] / "shared"
HALF_RANGE = 0.5 * (math.radians(120.0) - math.radians(30.0))


# ----------------------------------------------------------------------
# canonical serialization


def test_canonical_number_forms():
    assert canonical_json(60.0) == "60"
    assert canonical_json(0.0) == "0"
    assert canonical_json(0.25) == "0.25"
    assert canonical_json(8) == "8"
    assert canonical_json(0.333) == "0.333"
    assert canonical_json(None) == "null"
    assert canonical_json(True) == "true"


def test_canonical_objects_sorted_and_compact():
    assert canonical_json({"b": 1, "a": [1.5, 2.0]}) == '{"a":[1.5,2],"b":1}'


def test_canonical_rejects_non_finite():
    with pytest.raises(ConfigError):
        canonical_json(math.inf)


def test_shared_pattern_vectors_reproduce():
    doc = json.loads((SHARED / "pattern_vectors.json").read_text())
    assert doc["v"] == 1
    for vector in doc["vectors"]:
        assert canonical_json(vector["draft"]) == vector["canonical"]


def test_shared_wavelength_vectors_reproduce():
    doc = json.loads((SHARED / "wavelength_vectors.json").read_text())
    for vector in doc["vectors"]:
        lam = wavelength_from_delay(vector["pitch_m"], vector["frequency_hz"],
                                    vector["onset_delay_s"])
        if vector["wavelength_m"] is None:
            assert math.isinf(lam)
        else:
            assert lam == vector["wavelength_m"]


# ----------------------------------------------------------------------
# pattern documents


def test_pattern_document_round_trip():
    cmd = WaveCommand(amplitude=0.5 * HALF_RANGE, frequency=0.2,
                      onset_delay=0.25, duration=30.0)
    doc = pattern_document(PERISTALTIC, cmd, HALF_RANGE)
    kind, back, squeeze, sample_period = command_from_document(doc, HALF_RANGE)
    assert kind == PERISTALTIC
    assert squeeze is None
    assert back.amplitude == pytest.approx(cmd.amplitude, rel=1e-15)
    assert back.frequency == cmd.frequency
    assert back.onset_delay == cmd.onset_delay
    assert back.duration == cmd.duration


def test_pattern_document_from_shared_vectors_compose():
    doc = json.loads((SHARED / "pattern_vectors.json").read_text())
    cfg = default_config()
    for vector in doc["vectors"]:
        kind, cmd, squeeze, sp = command_from_document(
            vector["draft"], cfg.crank.alpha_half_range)
        from peristalsim.waveforms import compose_pattern
        schedule = compose_pattern(kind, cmd, cfg.actuator, cfg.crank,
                                   cfg.manifold, squeeze_time=squeeze,
                                   sample_period=sp)
        # serializing the composed schedule reproduces the draft bytes
        round_tripped = document_from_schedule(schedule,
                                               cfg.crank.alpha_half_range)
        assert canonical_json(round_tripped) == vector["canonical"]


def test_pattern_document_rejects_unknown_and_missing():
    cmd = WaveCommand(amplitude=0.5, frequency=0.2, duration=10.0)
    doc = pattern_document(PERISTALTIC, cmd, HALF_RANGE)
    bad = dict(doc)
    bad["extra"] = 1
    with pytest.raises(ConfigError):
        command_from_document(bad, HALF_RANGE)
    short = dict(doc)
    del short["duration_s"]
    with pytest.raises(ConfigError):
        command_from_document(short, HALF_RANGE)
    wrong_version = dict(doc)
    wrong_version["v"] = 2
    with pytest.raises(ConfigError):
        command_from_document(wrong_version, HALF_RANGE)


def test_pattern_document_squeeze_rules():
    cmd = WaveCommand(amplitude=0.5, frequency=0.2, duration=10.0)
    doc = pattern_document(PERISTALTIC, cmd, HALF_RANGE)
    doc["squeeze_time_s"] = 1.0
    with pytest.raises(ConfigError):
        command_from_document(doc, HALF_RANGE)
    doc["kind"] = "sequential_squeeze"
    kind, _, squeeze, _ = command_from_document(doc, HALF_RANGE)
    assert squeeze == 1.0


# ----------------------------------------------------------------------
# device config


def test_default_config_round_trip(tmp_path):
    cfg = default_config()
    path = tmp_path / "device.json"
    save_config(cfg, path)
    loaded = load_config(path)
    assert loaded == cfg


def test_config_unknown_field_rejected():
    with pytest.raises(ConfigError):
        parse_config({"actuator": {"bogus_m": 1.0}})
    with pytest.raises(ConfigError):
        parse_config({"unknown_section": {}})


def test_config_invariants_enforced():
    with pytest.raises(ConfigError):
        parse_config({"actuator": {"tube_inner_diameter_m": 9e-3}})
    with pytest.raises(ConfigError):
        parse_config({"safety": {"pressure_cap_pa": 50e3}})


def test_config_angles_in_degrees():
    cfg = parse_config({"crank": {"alpha_min_deg": 30.0,
                                  "alpha_max_deg": 120.0}})
    assert cfg.crank.alpha_min == pytest.approx(math.radians(30.0))
    assert cfg.crank.alpha_max == pytest.approx(math.radians(120.0))


def test_config_two_piston_by_motor_count():
    cfg = parse_config({"manifold": {"num_motors": 2}})
    assert cfg.manifold.num_motors == 2
    assert cfg.manifold.port_map[5] == (1, "A")


def test_config_lambda_crit_null_disables_clamp():
    cfg = parse_config({"limb": {"lambda_crit_m": None}})
    assert math.isinf(cfg.limb.lambda_crit)
    out = config_to_dict(cfg)
    assert out["limb"]["lambda_crit_m"] is None


def test_config_rejects_bad_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(path)
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")
