"""Figure rendering for the report paths.

Figures are written next to the CSV output: fidelity-versus-wall-time
curves (error bars one standard deviation, dotted line for the point
estimate's own fidelity when present) and purity density histograms.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .experiments import PurityTable, ResultTable  # noqa: E402


def plot_fig2(table: ResultTable, path) -> None:
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    by_prior: dict = {}
    ml_row = None
    for row in table.rows:
        if row.prior == "rho_ml":
            ml_row = row
            continue
        by_prior.setdefault(row.prior, []).append(row)
    for prior, rows in by_prior.items():
        rows = sorted(rows, key=lambda r: r.length)
        ax.errorbar(
            [r.mean_wall_s for r in rows],
            [r.mean_fidelity for r in rows],
            yerr=[r.std_fidelity for r in rows],
            marker="o",
            markersize=3,
            capsize=2,
            label=prior,
        )
    if ml_row is not None:
        ax.axhline(ml_row.mean_fidelity, ls=":", color="gray", label="point estimate")
    ax.set_xscale("log")
    ax.set_xlabel("wall time (s)")
    ax.set_ylabel("mean fidelity")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_purity_pdf(table: PurityTable, path) -> None:
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    by_source: dict = {}
    for label, left, right, density in table.rows:
        by_source.setdefault(label, []).append((left, right, density))
    for label, cells in by_source.items():
        xs = [0.5 * (lo + hi) for lo, hi, _ in cells]
        ys = [d for _, _, d in cells]
        ax.step(xs, ys, where="mid", label=label)
    ax.set_xlabel("purity")
    ax.set_ylabel("probability density")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
