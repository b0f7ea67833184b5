import socket
from pathlib import Path

import pytest

from peristalsim.cli import main

GOLDEN = Path(__file__).resolve().parent / "golden"


def _read(path):
    return Path(path).read_text()


def test_help_lists_subcommands(capsys):
    with pytest.raises(SystemExit) as exit_info:
        main(["--help"])
    assert exit_info.value.code == 0
    out = capsys.readouterr().out
    for name in ("characterize", "transport", "optimize", "serve"):
        assert name in out


@pytest.mark.parametrize("args,golden", [
    (["characterize", "pv"], "pv_sweep.csv"),
    (["characterize", "freq"], "freq_sweep.csv"),
    (["transport"], "transport_default.csv"),
])
def test_reports_match_golden_files(tmp_path, args, golden):
    out = tmp_path / golden
    assert main(args + ["--out", str(out), "--no-plot"]) == 0
    assert _read(out) == _read(GOLDEN / golden)


def test_optimize_matches_golden(tmp_path):
    out = tmp_path / "optimize.csv"
    assert main(["optimize", "--out", str(out), "--no-plot"]) == 0
    assert _read(out) == _read(GOLDEN / "optimize.csv")
    assert _read(tmp_path / "optimize_summary.txt") == \
        _read(GOLDEN / "optimize_summary.txt")


def test_report_figures_rendered(tmp_path):
    out = tmp_path / "pv.csv"
    assert main(["characterize", "pv", "--out", str(out)]) == 0
    assert (tmp_path / "pv.png").exists()
    out = tmp_path / "tr.csv"
    assert main(["transport", "--out", str(out)]) == 0
    assert (tmp_path / "tr.png").exists()
    out = tmp_path / "opt.csv"
    assert main(["optimize", "--out", str(out)]) == 0
    assert (tmp_path / "opt.png").exists()


def test_transport_custom_grid(tmp_path):
    out = tmp_path / "grid.csv"
    assert main(["transport", "--out", str(out), "--no-plot",
                 "--delta-t-ms", "0,250", "--freq", "0.2",
                 "--cm", "1.0"]) == 0
    lines = _read(out).splitlines()
    assert len(lines) == 1 + 2  # header + 2 rows


def test_transport_empty_grid_header_only(tmp_path):
    out = tmp_path / "empty.csv"
    assert main(["transport", "--out", str(out), "--no-plot",
                 "--delta-t-ms", "", "--freq", "0.2", "--cm", "1.0"]) == 0
    assert _read(out) == ("delta_t_ms,wavelength_m,frequency_hz,Cm,mu_cP,"
                          "qbar_m3s,qbar_mL_min,reynolds\n")


def test_bad_config_exits_two(tmp_path):
    missing = tmp_path / "nope.json"
    assert main(["transport", "--config", str(missing), "--no-plot",
                 "--out", str(tmp_path / "x.csv")]) == 2
    malformed = tmp_path / "bad.json"
    malformed.write_text('{"actuator": {"unknown_field": 1}}')
    assert main(["transport", "--config", str(malformed), "--no-plot",
                 "--out", str(tmp_path / "y.csv")]) == 2


def test_infeasible_optimize_exits_three(tmp_path):
    assert main(["optimize", "--out", str(tmp_path / "o.csv"), "--no-plot",
                 "--f-min", "30", "--f-max", "40"]) == 3


def test_serve_bind_failure_exits_four():
    with socket.socket() as blocker:
        blocker.bind(("127.0.0.1", 0))
        blocker.listen(1)
        port = blocker.getsockname()[1]
        assert main(["serve", "--port", str(port)]) == 4


def test_config_round_trip_through_cli(tmp_path):
    from peristalsim.config import default_config, save_config
    path = tmp_path / "device.json"
    save_config(default_config(), path)
    out = tmp_path / "t.csv"
    assert main(["transport", "--config", str(path), "--out", str(out),
                 "--no-plot"]) == 0
    assert _read(out) == _read(GOLDEN / "transport_default.csv")
