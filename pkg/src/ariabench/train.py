"""Deterministic training loop and evaluation."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .activations import Aria1, Aria2, Swish
from .data import Dataset
from .errors import InvalidParamsError
from .model import Model
from .optim import OptimizerSpec, make_optimizer
from .reports import EpochMetrics, RunReport
from .rng import shuffle_stream


@dataclass(frozen=True)
class TrainConfig:
    optimizer: OptimizerSpec
    epochs: int
    batch_size: int
    shuffle_seed: int = 0

    def __post_init__(self):
        if self.epochs < 1:
            raise InvalidParamsError(f"epochs must be >= 1, got {self.epochs}")
        if self.batch_size < 1:
            raise InvalidParamsError(f"batch_size must be >= 1, got {self.batch_size}")


def evaluate(model: Model, data: Dataset, chunk: int = 512) -> float:
    """Fraction of samples whose argmax probability matches the label.

    argmax resolves ties toward the lowest class index.
    """
    if len(data) == 0:
        raise InvalidParamsError("cannot evaluate on an empty dataset")
    hits = 0
    for start in range(0, len(data), chunk):
        probs = model.forward(data.images[start : start + chunk], train=False)
        hits += int((probs.argmax(axis=1) == data.labels[start : start + chunk]).sum())
    return hits / len(data)


def activation_hyperparams(model: Model) -> tuple[float | None, float | None]:
    """(alpha, beta) of the model's shared activation, where they apply."""
    acts = {
        spec.activation
        for spec in model.spec.layers
        if getattr(spec, "activation", None) is not None
    }
    if len(acts) != 1:
        return None, None
    act = acts.pop()
    if isinstance(act, Swish):
        return None, act.beta
    if isinstance(act, Aria1):
        return act.alpha, None
    if isinstance(act, Aria2):
        return act.params.alpha, act.params.beta
    return None, None


def train(model: Model, train_data: Dataset, test_data: Dataset,
          config: TrainConfig, run_id: str | None = None,
          progress=None) -> RunReport:
    """Run the full loop: shuffle, batch, backprop, step, evaluate.

    Everything downstream of (model spec, seeds, data) is deterministic;
    repeated runs produce identical metrics. ``progress``, when given, is
    called with each epoch's metrics as they complete.
    """
    if len(train_data) == 0 or len(test_data) == 0:
        raise InvalidParamsError("datasets must be non-empty")
    started = time.perf_counter()
    optimizer = make_optimizer(config.optimizer, model.parameters())
    n = len(train_data)
    per_epoch: list[EpochMetrics] = []
    for epoch in range(1, config.epochs + 1):
        order = np.arange(n)
        shuffle_stream(config.shuffle_seed, epoch - 1).shuffle(order)
        loss_sum = 0.0
        for start in range(0, n, config.batch_size):
            idx = order[start : start + config.batch_size]
            loss, grads = model.loss_and_gradients(
                train_data.images[idx], train_data.labels[idx], train=True
            )
            optimizer.step(grads, epoch)
            loss_sum += loss * len(idx)
        metrics = EpochMetrics(
            epoch=epoch,
            train_loss=loss_sum / n,
            test_accuracy=evaluate(model, test_data),
        )
        per_epoch.append(metrics)
        if progress is not None:
            progress(metrics)
    description = model.spec.activation_description()
    alpha, beta = activation_hyperparams(model)
    return RunReport(
        run_id=run_id if run_id is not None else f"{description}-seed{model.spec.seed}",
        activation=description,
        per_epoch=per_epoch,
        wall_seconds=time.perf_counter() - started,
        alpha=alpha,
        beta=beta,
    )
