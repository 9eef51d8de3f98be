"""Grid-sweep orchestration: one training run per activation, fixed seeds.

Every grid point trains a fresh model built from the same template and seed
on the same data, so rows differ only in the activation. Runs are
independent; with ``jobs > 1`` they execute in worker processes and are
reassembled in grid order, making parallel output identical to sequential.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

from .activations import Activation, Aria2, Aria2Params, Relu, Swish
from .config import SweepConfig
from .data import Dataset
from .model import build_model
from .reports import RunReport
from .train import TrainConfig, train


def grid_activations(cfg: SweepConfig) -> list[Activation]:
    """Baselines first (relu, then swish at beta=1), then the (alpha, beta)
    grid in row-major order, then any extra points; duplicates collapse."""
    acts: list[Activation] = []
    if cfg.include_relu:
        acts.append(Relu())
    if cfg.include_swish_beta1:
        acts.append(Swish(1.0))
    for alpha in cfg.alphas:
        for beta in cfg.betas:
            acts.append(Aria2(Aria2Params(alpha, beta)))
    for alpha, beta in cfg.extra_points:
        acts.append(Aria2(Aria2Params(alpha, beta)))
    return list(dict.fromkeys(acts))


def run_grid_point(model_template, activation: Activation, train_cfg: TrainConfig,
                   train_data: Dataset, test_data: Dataset) -> RunReport:
    """Train one activation; failures become status=failed rows, not raises."""
    try:
        model = build_model(model_template.spec_for(activation))
        return train(model, train_data, test_data, train_cfg,
                     run_id=f"{activation.describe()}-seed{model.spec.seed}")
    except Exception:  # recorded per-row; the sweep itself continues
        alpha = getattr(activation, "alpha", None)
        beta = getattr(activation, "beta", None)
        if isinstance(activation, Aria2):
            alpha, beta = activation.params.alpha, activation.params.beta
        return RunReport(
            run_id=f"{activation.describe()}-failed",
            activation=activation.describe(),
            per_epoch=[],
            alpha=alpha,
            beta=beta,
            status="failed",
        )


def run_sweep(cfg: SweepConfig, train_data: Dataset, test_data: Dataset,
              jobs: int | None = None, progress=None) -> list[RunReport]:
    """All grid points, in grid order regardless of execution order."""
    activations = grid_activations(cfg)
    jobs = cfg.jobs if jobs is None else jobs
    if jobs <= 1 or len(activations) <= 1:
        reports = []
        for act in activations:
            report = run_grid_point(cfg.model, act, cfg.train, train_data, test_data)
            reports.append(report)
            if progress is not None:
                progress(report)
        return reports
    with ProcessPoolExecutor(max_workers=min(jobs, len(activations))) as pool:
        futures = [
            pool.submit(run_grid_point, cfg.model, act, cfg.train, train_data, test_data)
            for act in activations
        ]
        reports = []
        for future in futures:  # grid order, not completion order
            report = future.result()
            reports.append(report)
            if progress is not None:
                progress(report)
    return reports
