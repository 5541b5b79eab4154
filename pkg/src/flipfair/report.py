"""Experiment report rendering: per-trial delimited data plus summary figures.

Writes a ``trials.csv`` with one row per trial and a matplotlib histogram of
the observed worst-case gammas next to it.  Pure file output; nothing here
affects the JSON the CLI prints.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def write_experiment_report(outdir, meta: dict, rows: list[dict]) -> list[Path]:
    """rows: per-trial dicts with trial, seed, gamma, gamma_approx, rho."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    csv_path = outdir / "trials.csv"
    with csv_path.open("w", newline="") as handle:
        writer = csv.DictWriter(
            handle, fieldnames=["trial", "seed", "gamma", "gamma_approx", "rho"]
        )
        writer.writeheader()
        for row in rows:
            writer.writerow(row)

    fig_path = outdir / "gamma_hist.png"
    gammas = [row["gamma_approx"] for row in rows]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.hist(gammas, bins=min(40, max(10, len(set(gammas)))), color="#4878a8", edgecolor="white")
    worst = min(gammas)
    ax.axvline(worst, color="#c44e52", linestyle="--", label=f"worst = {worst:.6g}")
    ax.set_xlabel(f"allocation-level {meta['notion']} gamma")
    ax.set_ylabel("trials")
    ax.set_title(
        f"{meta['alg']} on {meta['family']} instances "
        f"(n={meta['n']}, k={meta['k']}, {meta['trials']} trials)"
    )
    ax.legend()
    fig.tight_layout()
    fig.savefig(fig_path, dpi=150)
    plt.close(fig)
    return [csv_path, fig_path]
