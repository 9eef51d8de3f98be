"""Figure rendering for the report paths.

Each CSV emitter has a matching PNG renderer; the CLI writes the figure next
to the delimited file (same stem) unless asked not to. The CSV stays the
canonical, byte-reproducible artifact; figures are a convenience view.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .activations import Activation
from .reports import RunReport


def _plt():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def plot_path_for(csv_path) -> Path:
    return Path(csv_path).with_suffix(".png")


def save_curve_plot(a: Activation, x_min: float, x_max: float, steps: int, path) -> Path:
    """Value and derivative panels over the sampled range."""
    plt = _plt()
    xs = np.linspace(x_min, x_max, steps)
    fig, (ax_f, ax_d) = plt.subplots(1, 2, figsize=(9, 3.6))
    ax_f.plot(xs, a.value(xs), lw=1.5)
    ax_f.axhline(0.0, color="gray", lw=0.5)
    ax_f.set_xlabel("x")
    ax_f.set_ylabel("f(x)")
    ax_f.set_title(a.describe())
    ax_d.plot(xs, a.derivative(xs), lw=1.5, color="tab:orange")
    ax_d.axhline(0.0, color="gray", lw=0.5)
    ax_d.set_xlabel("x")
    ax_d.set_ylabel("df/dx")
    ax_d.set_title("derivative")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def save_training_plot(report: RunReport, path) -> Path:
    """Training loss and test accuracy against the epoch index."""
    plt = _plt()
    epochs = [m.epoch for m in report.per_epoch]
    fig, ax_loss = plt.subplots(figsize=(6, 3.6))
    ax_loss.plot(epochs, [m.train_loss for m in report.per_epoch],
                 color="tab:blue", lw=1.5, label="train loss")
    ax_loss.set_xlabel("epoch")
    ax_loss.set_ylabel("train loss", color="tab:blue")
    ax_acc = ax_loss.twinx()
    ax_acc.plot(epochs, [m.test_accuracy for m in report.per_epoch],
                color="tab:orange", lw=1.5, label="test accuracy")
    ax_acc.set_ylabel("test accuracy", color="tab:orange")
    ax_acc.set_ylim(0.0, 1.0)
    ax_loss.set_title(report.run_id)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def save_sweep_plot(reports: list[RunReport], path) -> Path:
    """Final test accuracy per run, ordered as in the sweep CSV."""
    plt = _plt()
    rows = [r for r in reports if r.final_accuracy is not None]
    labels = [r.activation for r in rows]
    accs = [r.final_accuracy for r in rows]
    fig, ax = plt.subplots(figsize=(max(5.0, 1.1 * len(rows)), 4.0))
    ax.bar(range(len(rows)), accs, color="tab:blue")
    ax.set_xticks(range(len(rows)))
    ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("final test accuracy")
    if accs:
        span = max(accs) - min(accs)
        ax.set_ylim(max(0.0, min(accs) - 2 * span - 0.01), min(1.0, max(accs) + span + 0.01))
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)
