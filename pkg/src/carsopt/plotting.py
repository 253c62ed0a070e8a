"""Figure rendering for benchmark outputs (performance profiles, traces)."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .bench import ProfileTable


def plot_profile(table: ProfileTable, path, title: str | None = None) -> None:
    """Render a performance profile as a step plot with log-scaled tau."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for solver in table.solvers:
        ax.step(table.tau_grid, table.rho[solver], where="post", label=solver)
    ax.set_xscale("log")
    ax.set_xlabel(r"performance ratio $\tau$")
    ax.set_ylabel(r"fraction of instances solved within $\tau$")
    ax.set_ylim(-0.02, 1.02)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(loc="lower right")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_traces(records, f_star, path, title: str | None = None) -> None:
    """Best objective value versus query count, one curve per record."""
    fig, ax = plt.subplots(figsize=(6, 4))
    seen = set()
    for rec in records:
        if not rec.trace:
            continue
        counts = [c for c, _ in rec.trace]
        gaps = [max(v - f_star, 1e-300) for _, v in rec.trace]
        label = rec.solver if rec.solver not in seen else None
        seen.add(rec.solver)
        ax.plot(counts, gaps, label=label, alpha=0.8)
    ax.set_xlabel("oracle queries")
    ax.set_ylabel("best value minus optimum")
    ax.set_yscale("log")
    ax.grid(True, which="both", alpha=0.3)
    if seen:
        ax.legend(loc="best")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
