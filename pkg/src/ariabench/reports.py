"""Run reports and the CSV emitters for curves and sweep tables.

Floats are written with repr(), Python's shortest round-trip form, so every
emitted number re-parses to the identical 64-bit value. CSVs use comma
separators, LF line endings, and a mandatory header row.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .activations import Activation
from .errors import InvalidParamsError

CHECKPOINT_EPOCHS = (10, 25, 50, 100)


@dataclass(frozen=True)
class EpochMetrics:
    epoch: int
    train_loss: float
    test_accuracy: float


@dataclass
class RunReport:
    """Per-epoch metrics of one training run.

    ``wall_seconds`` is measurement metadata: it is excluded from emitted
    CSVs and from any determinism comparison. ``alpha``/``beta`` carry the
    run's activation hyper-parameters when they apply, for sweep tables.
    """

    run_id: str
    activation: str
    per_epoch: list[EpochMetrics] = field(default_factory=list)
    wall_seconds: float = 0.0
    alpha: float | None = None
    beta: float | None = None
    status: str = "ok"

    def __post_init__(self):
        for i, m in enumerate(self.per_epoch):
            if m.epoch != i + 1:
                raise InvalidParamsError("epochs must increase strictly from 1")
            if not (0.0 <= m.test_accuracy <= 1.0):
                raise InvalidParamsError(f"accuracy {m.test_accuracy} outside [0, 1]")
            if not math.isfinite(m.train_loss):
                raise InvalidParamsError(f"non-finite loss at epoch {m.epoch}")

    @property
    def final_accuracy(self) -> float | None:
        return self.per_epoch[-1].test_accuracy if self.per_epoch else None

    def accuracy_at(self, epoch: int) -> float | None:
        for m in self.per_epoch:
            if m.epoch == epoch:
                return m.test_accuracy
        return None


def _fmt(value) -> str:
    if value is None:
        return ""
    return repr(float(value))


def write_curve_csv(a: Activation, x_min: float, x_max: float, steps: int, path) -> None:
    """Sample the activation and its derivative on an even grid."""
    if steps < 2:
        raise InvalidParamsError(f"steps must be >= 2, got {steps}")
    if not (x_min < x_max):
        raise InvalidParamsError(f"need x_min < x_max, got {x_min} >= {x_max}")
    xs = np.linspace(x_min, x_max, steps)
    fs = a.value(xs)
    dfs = a.derivative(xs)
    lines = ["x,f,df"]
    lines += [f"{_fmt(x)},{_fmt(f)},{_fmt(d)}" for x, f, d in zip(xs, fs, dfs)]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _kind(r: RunReport) -> str:
    """Bare activation kind, e.g. 'aria2' from 'aria2(alpha=1.5,beta=2)'."""
    return r.activation.split("(", 1)[0]


def _sort_key(r: RunReport):
    kind = _kind(r)
    if kind == "relu":
        return (0, 0.0, 0.0, r.activation)
    # Baselines with no swept alpha sort by their effective position in the
    # (alpha, beta) plane: swish is the alpha=1 member, aria1 the beta=1 one.
    alpha = r.alpha if r.alpha is not None else (1.0 if kind == "swish" else -1.0)
    beta = r.beta if r.beta is not None else (1.0 if kind == "aria1" else -1.0)
    return (1, alpha, beta, r.activation)


def write_sweep_csv(reports: list[RunReport], path) -> None:
    """One row per run: kind label, hyper-parameters, status, accuracies.

    The activation column carries the bare kind (alpha/beta live in their own
    columns, blank where they do not apply). Checkpoint columns mirror the
    fixed epochs 10/25/50/100, intersected with the epochs the runs reached.
    """
    if not reports:
        raise InvalidParamsError("no reports to write")
    max_epoch = max((m.epoch for r in reports for m in r.per_epoch), default=0)
    checkpoints = [e for e in CHECKPOINT_EPOCHS if e <= max_epoch]
    header = ["activation", "alpha", "beta", "status", "final_accuracy"]
    header += [f"accuracy_epoch_{e}" for e in checkpoints]
    lines = [",".join(header)]
    for r in sorted(reports, key=_sort_key):
        row = [_kind(r), _fmt(r.alpha), _fmt(r.beta), r.status, _fmt(r.final_accuracy)]
        row += [_fmt(r.accuracy_at(e)) for e in checkpoints]
        lines.append(",".join(row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_report_csv(report: RunReport, path) -> None:
    """Per-epoch metrics of a single run (deterministic: no wall time)."""
    lines = ["epoch,train_loss,test_accuracy"]
    lines += [
        f"{m.epoch},{_fmt(m.train_loss)},{_fmt(m.test_accuracy)}"
        for m in report.per_epoch
    ]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
