"""Figure rendering for the CLI report paths.

Each report command writes its figure next to the delimited output with
the same stem.  Rendering is headless (Agg) and optional.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _group(rows, key):
    out = {}
    for row in rows:
        out.setdefault(row[key], []).append(row)
    return out


def save_pv_figure(rows, path):
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for stroke, group in sorted(_group(rows, "stroke_pct").items()):
        vol = [r["volume_m3"] * 1e6 for r in group]
        prs = [r["pressure_pa"] * 1e-3 for r in group]
        ax.plot(vol, prs, label=f"{stroke:.0f}%")
    ax.set_xlabel("fluid volume (mL)")
    ax.set_ylabel("compression pressure (kPa)")
    ax.set_title("Compression pressure vs. fluid volume")
    ax.legend(title="stroke range", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_freq_figure(rows, path):
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 4.0))
    for stroke, group in sorted(_group(rows, "stroke_pct").items()):
        cmd = [r["commanded_hz"] for r in group]
        ach = [r["achieved_hz"] for r in group]
        mag = [r["stroke_magnitude"] * 100 for r in group]
        ax1.plot(cmd, ach, label=f"{stroke:.0f}%")
        ax2.plot(cmd, mag, label=f"{stroke:.0f}%")
    ax1.plot([0.2, 50.0], [0.2, 50.0], "k:", linewidth=0.8)
    ax1.set_xscale("log")
    ax1.set_yscale("log")
    ax1.set_xlabel("commanded frequency (Hz)")
    ax1.set_ylabel("achieved frequency (Hz)")
    ax2.set_xscale("log")
    ax2.set_xlabel("commanded frequency (Hz)")
    ax2.set_ylabel("achieved stroke (%)")
    ax1.legend(title="stroke range", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_transport_figure(rows, path):
    finite = [r for r in rows if math.isfinite(r["wavelength_m"])]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 4.0))
    by_freq = _group(finite, "frequency_hz")
    for f, group in sorted(by_freq.items()):
        seen = {}
        for r in group:
            seen[r["wavelength_m"]] = r["qbar_mL_min"]
        lam = sorted(seen)
        ax1.plot([x * 100 for x in lam], [seen[x] for x in lam], "o-",
                 label=f"{f} Hz")
    ax1.set_xlabel("wavelength (cm)")
    ax1.set_ylabel("mean flow (mL/min)")
    ax1.set_title("Flow vs. wavelength")
    ax1.legend(fontsize=8)
    by_cm = _group(finite, "Cm")
    cms = sorted(by_cm)
    flows = [max(r["qbar_mL_min"] for r in by_cm[cm]) for cm in cms]
    ax2.bar(range(len(cms)), flows, tick_label=[f"{cm:g}" for cm in cms])
    ax2.set_xlabel("glycerin mass fraction")
    ax2.set_ylabel("peak mean flow (mL/min)")
    ax2.set_title("Viscosity insensitivity")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_optimize_figure(result, path):
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    feasible = [p for p in result.grid if p.feasible]
    infeasible = [p for p in result.grid if not p.feasible]
    ax.plot([p.delta_t * 1e3 for p in infeasible],
            [p.flow * 60e6 for p in infeasible], "x", color="0.7",
            label="infeasible")
    amps = sorted({p.amplitude for p in feasible})
    for amp in amps:
        pts = sorted((p for p in feasible if p.amplitude == amp),
                     key=lambda p: p.delta_t)
        ax.plot([p.delta_t * 1e3 for p in pts],
                [p.flow * 60e6 for p in pts], "o-",
                label=f"amplitude {amp:.2f}")
    ax.plot([result.delta_t * 1e3], [result.predicted_flow * 60e6], "r*",
            markersize=14, label="optimum")
    ax.set_xlabel("onset delay (ms)")
    ax.set_ylabel("mean flow (mL/min)")
    ax.set_title("Regime search")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
