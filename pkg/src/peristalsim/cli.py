"""Command-line entry point.

Subcommands reproduce the characterization and transport experiments as
CSV reports (with figures rendered alongside unless --no-plot) and launch
the live controller service.

Exit codes: 0 ok, 2 bad configuration or arguments, 3 infeasible
optimization, 4 network failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from .actuator import pressure_from_volume
from .config import default_config, load_config
from .drivetrain import achieved_frequency, achieved_stroke
from .errors import ConfigError, InfeasibleError
from .optimizer import (DEFAULT_DELTA_T_GRID_S, RegimeConstraints,
                        optimize_regime)
from .server import run_server
from .transport import sweep_transport

PV_STROKES_PCT = tuple(range(10, 101, 10))
PV_POINTS_PER_STROKE = 26
FREQ_STROKES_PCT = tuple(range(10, 101, 10))
FREQ_SWEEP_POINTS = 28

DEFAULT_CM_GRID = (0.5, 0.7, 0.8, 0.9, 0.95, 1.0)
DEFAULT_FREQ_GRID = (0.2, 0.5)


def _write_csv(path, columns, rows):
    def cell(value):
        if isinstance(value, float):
            return repr(value)
        return str(value)

    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(cell(row[c]) for c in columns) + "\n")


def _figure_path(out_path) -> Path:
    return Path(out_path).with_suffix(".png")


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"bad numeric list {text!r}: {exc}") from exc


def _load(args):
    if args.config:
        return load_config(args.config)
    return default_config()


def cmd_characterize(args) -> int:
    cfg = _load(args)
    rows = []
    if args.sweep == "pv":
        act = cfg.actuator
        for stroke in PV_STROKES_PCT:
            v_lo = act.max_fluid_volume * (1.0 - stroke / 100.0)
            for v in np.linspace(v_lo, act.max_fluid_volume,
                                 PV_POINTS_PER_STROKE):
                rows.append({"stroke_pct": float(stroke),
                             "volume_m3": float(v),
                             "pressure_pa": pressure_from_volume(act, float(v))})
        columns = ["stroke_pct", "volume_m3", "pressure_pa"]
    else:
        freqs = np.geomspace(0.2, 50.0, FREQ_SWEEP_POINTS)
        for stroke in FREQ_STROKES_PCT:
            s = stroke / 100.0
            for f in freqs:
                rows.append({
                    "stroke_pct": float(stroke),
                    "commanded_hz": float(f),
                    "achieved_hz": achieved_frequency(cfg.crank, float(f), s),
                    "stroke_magnitude": achieved_stroke(cfg.crank, float(f), s),
                })
        columns = ["stroke_pct", "commanded_hz", "achieved_hz",
                   "stroke_magnitude"]
    out = args.out or (f"{args.sweep}_sweep.csv")
    _write_csv(out, columns, rows)
    if not args.no_plot:
        from . import plotting
        if args.sweep == "pv":
            plotting.save_pv_figure(rows, _figure_path(out))
        else:
            plotting.save_freq_figure(rows, _figure_path(out))
    print(f"wrote {len(rows)} rows to {out}")
    return 0


def cmd_transport(args) -> int:
    cfg = _load(args)
    if args.delta_t_ms is None:
        delta_ts = list(DEFAULT_DELTA_T_GRID_S)
    else:
        delta_ts = [v / 1e3 for v in _float_list(args.delta_t_ms)]
    freqs = _float_list(args.freq) if args.freq is not None \
        else list(DEFAULT_FREQ_GRID)
    cms = _float_list(args.cm) if args.cm is not None else list(DEFAULT_CM_GRID)
    rows = sweep_transport(cfg.limb, delta_ts, freqs, cms,
                           temperature=cfg.fluid.temperature)
    columns = ["delta_t_ms", "wavelength_m", "frequency_hz", "Cm", "mu_cP",
               "qbar_m3s", "qbar_mL_min", "reynolds"]
    out = args.out or "transport_sweep.csv"
    _write_csv(out, columns, rows)
    if not args.no_plot:
        from . import plotting
        plotting.save_transport_figure(rows, _figure_path(out))
    print(f"wrote {len(rows)} rows to {out}")
    return 0


def cmd_optimize(args) -> int:
    cfg = _load(args)
    kwargs = {}
    if args.delta_t_ms:
        kwargs["delta_t_grid"] = tuple(v / 1e3
                                       for v in _float_list(args.delta_t_ms))
    if args.lambda_max_m is not None:
        kwargs["lambda_max"] = args.lambda_max_m
    if args.pressure_cap_pa is not None:
        kwargs["pressure_cap"] = args.pressure_cap_pa
    constraints = RegimeConstraints(
        f_range=(args.f_min, args.f_max),
        amplitude_range=(args.amp_min, args.amp_max),
        **kwargs)
    port_share = 2 if cfg.manifold.num_motors == 2 else 1
    result = optimize_regime(cfg.limb, cfg.fluid, cfg.crank, constraints,
                             actuator=cfg.actuator, port_share=port_share,
                             limb_compliance=cfg.session.limb_compliance)
    out = args.out or "optimize.csv"
    columns = ["frequency_hz", "delta_t_s", "amplitude", "wavelength_m",
               "qbar_m3s", "feasible", "violated"]
    rows = [{
        "frequency_hz": p.frequency, "delta_t_s": p.delta_t,
        "amplitude": p.amplitude, "wavelength_m": p.wavelength,
        "qbar_m3s": p.flow, "feasible": int(p.feasible),
        "violated": "|".join(p.violated),
    } for p in result.grid]
    _write_csv(out, columns, rows)
    summary_path = Path(out).with_name(Path(out).stem + "_summary.txt")
    with open(summary_path, "w", encoding="utf-8") as fh:
        fh.write("best regime\n")
        fh.write(f"  frequency_hz: {result.frequency!r}\n")
        fh.write(f"  delta_t_s: {result.delta_t!r}\n")
        fh.write(f"  amplitude: {result.amplitude!r}\n")
        fh.write(f"  wavelength_m: {result.wavelength!r}\n")
        fh.write(f"  qbar_m3s: {result.predicted_flow!r}\n")
        fh.write(f"  qbar_mL_min: {result.predicted_flow * 60e6!r}\n")
        fh.write(f"  active_constraints: {', '.join(result.active_constraints) or 'none'}\n")
        fh.write(f"  refined: {result.refined}\n")
    if not args.no_plot:
        from . import plotting
        plotting.save_optimize_figure(result, _figure_path(out))
    print(f"best regime: f={result.frequency} Hz, delta_t={result.delta_t} s, "
          f"amplitude={result.amplitude}, "
          f"flow={result.predicted_flow * 60e6:.3f} mL/min")
    print(f"wrote grid to {out} and summary to {summary_path}")
    return 0


def cmd_serve(args) -> int:
    cfg = _load(args)
    try:
        run_server(cfg, host=args.host, port=args.port, ws_port=args.ws_port,
                   realtime=not args.fast, record_path=args.record)
    except OSError as exc:
        print(f"network error: {exc}", file=sys.stderr)
        return 4
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="peristalsim",
        description="Digital twin of a peristaltic compression sleeve")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="device config JSON path")

    report = argparse.ArgumentParser(add_help=False, parents=[common])
    report.add_argument("--out", help="output CSV path")
    report.add_argument("--no-plot", action="store_true",
                        help="skip figure rendering")

    p_char = sub.add_parser("characterize", parents=[report],
                            help="single-actuator and drivetrain sweeps")
    p_char.add_argument("sweep", choices=("pv", "freq"))
    p_char.set_defaults(func=cmd_characterize)

    p_tr = sub.add_parser("transport", parents=[report],
                          help="flow predictions over driving regimes")
    p_tr.add_argument("--delta-t-ms", help="comma list of onset delays (ms)")
    p_tr.add_argument("--freq", help="comma list of frequencies (Hz)")
    p_tr.add_argument("--cm", help="comma list of glycerin mass fractions")
    p_tr.set_defaults(func=cmd_transport)

    p_opt = sub.add_parser("optimize", parents=[report],
                           help="search driving regimes maximizing flow")
    p_opt.add_argument("--f-min", type=float, default=0.2)
    p_opt.add_argument("--f-max", type=float, default=0.5)
    p_opt.add_argument("--amp-min", type=float, default=1.0)
    p_opt.add_argument("--amp-max", type=float, default=1.0)
    p_opt.add_argument("--delta-t-ms", help="comma list of onset delays (ms)")
    p_opt.add_argument("--lambda-max-m", type=float)
    p_opt.add_argument("--pressure-cap-pa", type=float)
    p_opt.set_defaults(func=cmd_optimize)

    p_srv = sub.add_parser("serve", parents=[common],
                           help="run the live controller service")
    p_srv.add_argument("--host", default="127.0.0.1")
    p_srv.add_argument("--port", type=int, default=7745)
    p_srv.add_argument("--ws-port", type=int, default=None,
                       help="also serve WebSocket on this port")
    p_srv.add_argument("--record", help="write run recordings to this CSV")
    p_srv.add_argument("--fast", action="store_true",
                       help="run the simulation without wall-clock pacing")
    p_srv.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
