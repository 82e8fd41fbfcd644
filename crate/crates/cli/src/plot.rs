//! Matplotlib script emitted next to the sweep outputs.

pub const PLOT_SCRIPT: &str = r#"#!/usr/bin/env python3
"""Plot trajectories and sweep summaries written by photon-momentum."""
import csv
import pathlib
import sys

import matplotlib.pyplot as plt

root = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else pathlib.Path(__file__).parent)


def read(path):
    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    return rows


def column(rows, key):
    return [float(r[key]) if r[key] else float("nan") for r in rows]


summary = read(root / "summary.csv")
for row in summary:
    run = root / row["run_dir"]
    traj = run / "trajectory.csv"
    if not traj.exists():
        continue
    rows = read(traj)
    t = column(rows, "t")
    fig, (ax_p, ax_f) = plt.subplots(2, 1, sharex=True, figsize=(7, 6))
    ax_p.plot(t, column(rows, "p_kinetic"), label="kinetic")
    ax_p.plot(t, column(rows, "p_canonical"), label="canonical")
    ax_p.set_ylabel("momentum (kg m/s)")
    ax_p.legend()
    ax_f.plot(t, column(rows, "F_total"), label="total")
    ax_f.plot(t, column(rows, "F_scatt"), label="scattering")
    ax_f.plot(t, column(rows, "F_disp"), label="dispersive")
    ax_f.set_xlabel("t (s)")
    ax_f.set_ylabel("force (N)")
    ax_f.legend()
    fig.tight_layout()
    fig.savefig(run / "trajectory.png", dpi=120)
    plt.close(fig)

if len(summary) > 1:
    axes = [k for k in summary[0] if "." in k]
    x_key = axes[0] if axes else "delta_over_gamma"
    try:
        x = column(summary, x_key)
    except ValueError:
        x = list(range(len(summary)))
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(x, column(summary, "net_dispersive_impulse"), "o", label="simulated")
    ax.plot(x, column(summary, "net_dispersive_closed_form"), "-", label="closed form")
    ax.set_xlabel(x_key)
    ax.set_ylabel("net dispersive impulse (kg m/s)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(root / "summary.png", dpi=120)
"#;
