"""JSON run configuration: parsing, validation, dataset materialization.

Every validation failure raises :class:`ConfigError` carrying the JSON path
of the offending field (e.g. ``train.optimizer.lr``), which the CLI prints
verbatim before exiting with code 2.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .activations import (
    Activation,
    Aria1,
    Aria2,
    Aria2Params,
    AriaFull,
    Relu,
    RichardsParams,
    Sigmoid,
    Swish,
)
from .data import Dataset, load_mnist_idx, make_two_moons, split_train_test, subset
from .errors import AriabenchError, ConfigError
from .model import (
    Conv2DSpec,
    DenseSpec,
    DropoutSpec,
    FlattenSpec,
    LayerSpec,
    MaxPool2DSpec,
    ModelSpec,
    SoftmaxOutputSpec,
)
from .optim import AdamSpec, OptimizerSpec, SGDSpec
from .train import TrainConfig

@dataclass(frozen=True)
class SweepSlot:
    """Stands in for the grid activation in sweep model templates.

    Compared by value, so templates survive pickling into worker processes.
    """


SWEEP_PLACEHOLDER = SweepSlot()

DEFAULT_DECAY_EPOCHS = (30, 60, 80)  # at 100 epochs; scaled to the run length


def _require(node: dict, path: str, key: str):
    if key not in node:
        raise ConfigError(f"{path}.{key}", "missing required field")
    return node[key]


def _dict(node, path: str) -> dict:
    if not isinstance(node, dict):
        raise ConfigError(path, f"expected an object, got {type(node).__name__}")
    return node


def _number(node: dict, path: str, key: str, *, default=None, minimum=None,
            minimum_exclusive=None, maximum=None, maximum_exclusive=None) -> float:
    if key not in node:
        if default is not None:
            return default
        raise ConfigError(f"{path}.{key}", "missing required field")
    value = node[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}.{key}", f"expected a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(f"{path}.{key}", "must be finite")
    if minimum is not None and value < minimum:
        raise ConfigError(f"{path}.{key}", f"must be >= {minimum}, got {value:g}")
    if minimum_exclusive is not None and value <= minimum_exclusive:
        raise ConfigError(f"{path}.{key}", f"must be > {minimum_exclusive}, got {value:g}")
    if maximum is not None and value > maximum:
        raise ConfigError(f"{path}.{key}", f"must be <= {maximum}, got {value:g}")
    if maximum_exclusive is not None and value >= maximum_exclusive:
        raise ConfigError(f"{path}.{key}", f"must be < {maximum_exclusive}, got {value:g}")
    return value


def _int(node: dict, path: str, key: str, *, default=None, minimum=None) -> int:
    if key not in node:
        if default is not None:
            return default
        raise ConfigError(f"{path}.{key}", "missing required field")
    value = node[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{path}.{key}", f"expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(f"{path}.{key}", f"must be >= {minimum}, got {value}")
    return value


def _string(node: dict, path: str, key: str, *, default=None) -> str:
    if key not in node:
        if default is not None:
            return default
        raise ConfigError(f"{path}.{key}", "missing required field")
    value = node[key]
    if not isinstance(value, str):
        raise ConfigError(f"{path}.{key}", f"expected a string, got {value!r}")
    return value


def _bool(node: dict, path: str, key: str, *, default: bool) -> bool:
    value = node.get(key, default)
    if not isinstance(value, bool):
        raise ConfigError(f"{path}.{key}", f"expected a boolean, got {value!r}")
    return value


def activation_from_json(node, path: str, allow_placeholder: bool = False):
    """Parse an activation descriptor; ``{"kind": "sweep"}`` marks the slot a
    sweep fills per grid point (template contexts only)."""
    node = _dict(node, path)
    kind = _string(node, path, "kind")
    if kind == "relu":
        return Relu()
    if kind == "sigmoid":
        return Sigmoid()
    if kind == "swish":
        return Swish(_number(node, path, "beta", minimum=0.0))
    if kind == "aria1":
        return Aria1(_number(node, path, "alpha", minimum_exclusive=0.0))
    if kind == "aria2":
        return Aria2(Aria2Params(
            _number(node, path, "alpha", minimum_exclusive=0.0),
            _number(node, path, "beta", minimum=0.0),
        ))
    if kind == "aria":
        return AriaFull(RichardsParams(
            A=_number(node, path, "A"),
            K=_number(node, path, "K"),
            B=_number(node, path, "B"),
            nu=_number(node, path, "nu", minimum_exclusive=0.0),
            Q=_number(node, path, "Q", minimum=0.0),
            C=_number(node, path, "C", minimum_exclusive=0.0),
        ))
    if kind == "sweep":
        if allow_placeholder:
            return SWEEP_PLACEHOLDER
        raise ConfigError(f"{path}.kind", "'sweep' placeholders are only valid in sweep configs")
    raise ConfigError(f"{path}.kind", f"unknown activation kind {kind!r}")


def _layer_from_json(node, path: str, allow_placeholder: bool):
    node = _dict(node, path)
    kind = _string(node, path, "type")
    activation = None
    if "activation" in node and node["activation"] is not None:
        activation = activation_from_json(node["activation"], f"{path}.activation",
                                          allow_placeholder)
    if kind == "dense":
        return ("dense", {
            "in_size": _int(node, path, "in", minimum=1),
            "out_size": _int(node, path, "out", minimum=1),
        }, activation)
    if kind == "conv2d":
        kernel = node.get("kernel", [3, 3])
        if (not isinstance(kernel, list) or len(kernel) != 2
                or not all(isinstance(k, int) and k >= 1 for k in kernel)):
            raise ConfigError(f"{path}.kernel", f"expected [h, w] positive integers, got {kernel!r}")
        return ("conv2d", {
            "in_channels": _int(node, path, "in_channels", minimum=1),
            "out_channels": _int(node, path, "out_channels", minimum=1),
            "kernel": tuple(kernel),
            "stride": _int(node, path, "stride", default=1, minimum=1),
            "padding": _int(node, path, "padding", default=0, minimum=0),
        }, activation)
    if activation is not None:
        raise ConfigError(f"{path}.activation", f"layer type {kind!r} takes no activation")
    if kind == "maxpool":
        window = node.get("window", [2, 2])
        if (not isinstance(window, list) or len(window) != 2
                or not all(isinstance(k, int) and k >= 1 for k in window)):
            raise ConfigError(f"{path}.window", f"expected [h, w] positive integers, got {window!r}")
        return ("maxpool", {
            "window": tuple(window),
            "stride": _int(node, path, "stride", default=2, minimum=1),
        }, None)
    if kind == "dropout":
        return ("dropout", {
            "rate": _number(node, path, "rate", minimum=0.0, maximum_exclusive=1.0),
        }, None)
    if kind == "flatten":
        return ("flatten", {}, None)
    if kind == "softmax":
        return ("softmax", {"classes": _int(node, path, "classes", minimum=2)}, None)
    raise ConfigError(f"{path}.type", f"unknown layer type {kind!r}")


@dataclass(frozen=True)
class ModelTemplate:
    """Parsed model block; placeholders are realized per activation."""

    layers: tuple  # of (kind, kwargs, activation-or-placeholder)
    seed: int
    path: str

    @property
    def has_placeholder(self) -> bool:
        return any(isinstance(act, SweepSlot) for _, _, act in self.layers)

    def spec_for(self, grid_activation: Activation | None = None) -> ModelSpec:
        specs: list[LayerSpec] = []
        for kind, kwargs, act in self.layers:
            if isinstance(act, SweepSlot):
                act = grid_activation
            try:
                if kind == "dense":
                    specs.append(DenseSpec(activation=act, **kwargs))
                elif kind == "conv2d":
                    specs.append(Conv2DSpec(activation=act, **kwargs))
                elif kind == "maxpool":
                    specs.append(MaxPool2DSpec(**kwargs))
                elif kind == "dropout":
                    specs.append(DropoutSpec(**kwargs))
                elif kind == "flatten":
                    specs.append(FlattenSpec())
                else:
                    specs.append(SoftmaxOutputSpec(**kwargs))
            except AriabenchError as exc:
                raise ConfigError(self.path, str(exc)) from exc
        try:
            return ModelSpec(layers=tuple(specs), seed=self.seed)
        except AriabenchError as exc:
            raise ConfigError(f"{self.path}.layers", str(exc)) from exc


def model_from_json(node, path: str, allow_placeholder: bool = False) -> ModelTemplate:
    node = _dict(node, path)
    seed = _int(node, path, "seed", default=0, minimum=0)
    layers_node = _require(node, path, "layers")
    if not isinstance(layers_node, list) or not layers_node:
        raise ConfigError(f"{path}.layers", "expected a non-empty array of layers")
    layers = tuple(
        _layer_from_json(layer, f"{path}.layers[{i}]", allow_placeholder)
        for i, layer in enumerate(layers_node)
    )
    template = ModelTemplate(layers=layers, seed=seed, path=path)
    if not allow_placeholder:
        template.spec_for(None)  # validate the chain eagerly
    return template


def optimizer_from_json(node, path: str, epochs: int) -> OptimizerSpec:
    node = _dict(node, path)
    kind = _string(node, path, "type")
    if kind == "adam":
        return AdamSpec(
            lr=_number(node, path, "lr", default=0.001, minimum_exclusive=0.0),
            beta1=_number(node, path, "beta1", default=0.9, minimum=0.0, maximum_exclusive=1.0),
            beta2=_number(node, path, "beta2", default=0.999, minimum=0.0, maximum_exclusive=1.0),
            eps=_number(node, path, "eps", default=1e-8, minimum_exclusive=0.0),
        )
    if kind == "sgd":
        decay_epochs = node.get("decay_epochs")
        if decay_epochs is None:
            # the stock schedule assumes 100 epochs; scale it to this run
            decay_epochs = [max(1, round(e * epochs / 100)) for e in DEFAULT_DECAY_EPOCHS]
        if (not isinstance(decay_epochs, list)
                or not all(isinstance(e, int) and e >= 1 for e in decay_epochs)):
            raise ConfigError(
                f"{path}.decay_epochs", f"expected positive integers, got {decay_epochs!r}"
            )
        return SGDSpec(
            lr=_number(node, path, "lr", minimum_exclusive=0.0),
            decay_factor=_number(node, path, "decay_factor", default=1.0,
                                 minimum_exclusive=0.0, maximum=1.0),
            decay_epochs=tuple(dict.fromkeys(decay_epochs)),
        )
    raise ConfigError(f"{path}.type", f"unknown optimizer type {kind!r}")


def train_from_json(node, path: str) -> TrainConfig:
    node = _dict(node, path)
    epochs = _int(node, path, "epochs", minimum=1)
    return TrainConfig(
        optimizer=optimizer_from_json(_require(node, path, "optimizer"),
                                      f"{path}.optimizer", epochs),
        epochs=epochs,
        batch_size=_int(node, path, "batch_size", minimum=1),
        shuffle_seed=_int(node, path, "shuffle_seed", default=0, minimum=0),
    )


@dataclass(frozen=True)
class TwoMoonsSource:
    n: int
    noise: float
    seed: int
    test_fraction: float

    def load(self) -> tuple[Dataset, Dataset]:
        return split_train_test(
            make_two_moons(self.n, self.noise, self.seed),
            self.test_fraction,
            self.seed + 1,
        )


@dataclass(frozen=True)
class MnistSource:
    train_images: str
    train_labels: str
    test_images: str
    test_labels: str
    train_subset: int | None
    test_subset: int | None
    subset_seed: int

    def load(self) -> tuple[Dataset, Dataset]:
        train = load_mnist_idx(self.train_images, self.train_labels)
        test = load_mnist_idx(self.test_images, self.test_labels)
        if self.train_subset is not None:
            train = subset(train, self.train_subset, self.subset_seed)
        if self.test_subset is not None:
            test = subset(test, self.test_subset, self.subset_seed + 1)
        return train, test


DatasetSource = TwoMoonsSource | MnistSource


def dataset_from_json(node, path: str) -> DatasetSource:
    node = _dict(node, path)
    kind = _string(node, path, "type")
    if kind == "two_moons":
        n = _int(node, path, "n", minimum=2)
        if n % 2:
            raise ConfigError(f"{path}.n", f"must be even, got {n}")
        return TwoMoonsSource(
            n=n,
            noise=_number(node, path, "noise", default=0.1, minimum=0.0),
            seed=_int(node, path, "seed", default=0, minimum=0),
            test_fraction=_number(node, path, "test_fraction", default=0.25,
                                  minimum_exclusive=0.0, maximum_exclusive=1.0),
        )
    if kind == "mnist":
        paths = {}
        for key in ("train_images", "train_labels", "test_images", "test_labels"):
            value = _string(node, path, key)
            if not Path(value).exists():
                raise ConfigError(f"{path}.{key}", f"file not found: {value}")
            paths[key] = value
        train_subset = _int(node, path, "train_subset", minimum=1) \
            if "train_subset" in node else None
        test_subset = _int(node, path, "test_subset", minimum=1) \
            if "test_subset" in node else None
        return MnistSource(
            **paths,
            train_subset=train_subset,
            test_subset=test_subset,
            subset_seed=_int(node, path, "subset_seed", default=0, minimum=0),
        )
    raise ConfigError(f"{path}.type", f"unknown dataset type {kind!r}")


@dataclass(frozen=True)
class TrainRunConfig:
    model: ModelTemplate
    train: TrainConfig
    dataset: DatasetSource
    report_csv: str
    plot: bool


def load_json(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read config: {exc}") from exc
    try:
        node = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(str(path), f"invalid JSON: {exc}") from exc
    return _dict(node, "config")


def load_train_config(path) -> TrainRunConfig:
    node = load_json(path)
    out = _dict(node.get("output", {}), "output")
    return TrainRunConfig(
        model=model_from_json(_require(node, "config", "model"), "model"),
        train=train_from_json(_require(node, "config", "train"), "train"),
        dataset=dataset_from_json(_require(node, "config", "dataset"), "dataset"),
        report_csv=_string(out, "output", "report_csv", default="run_report.csv"),
        plot=_bool(out, "output", "plot", default=True),
    )


@dataclass(frozen=True)
class SweepConfig:
    alphas: tuple[float, ...]
    betas: tuple[float, ...]
    extra_points: tuple[tuple[float, float], ...]
    include_relu: bool
    include_swish_beta1: bool
    model: ModelTemplate
    train: TrainConfig
    dataset: DatasetSource
    output_path: str
    jobs: int
    plot: bool


def load_sweep_config(path) -> SweepConfig:
    node = load_json(path)
    sweep = _dict(_require(node, "config", "sweep"), "sweep")

    def _grid(key: str, *, minimum=None, minimum_exclusive=None) -> tuple[float, ...]:
        values = sweep.get(key, [])
        if not isinstance(values, list):
            raise ConfigError(f"sweep.{key}", f"expected an array, got {values!r}")
        out = []
        for i, v in enumerate(values):
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ConfigError(f"sweep.{key}[{i}]", f"expected a number, got {v!r}")
            v = float(v)
            if minimum is not None and v < minimum:
                raise ConfigError(f"sweep.{key}[{i}]", f"must be >= {minimum}, got {v:g}")
            if minimum_exclusive is not None and v <= minimum_exclusive:
                raise ConfigError(f"sweep.{key}[{i}]", f"must be > {minimum_exclusive}, got {v:g}")
            out.append(v)
        return tuple(out)

    alphas = _grid("alphas", minimum_exclusive=0.0)
    betas = _grid("betas", minimum=0.0)

    extra_raw = sweep.get("extra_points", [])
    if not isinstance(extra_raw, list):
        raise ConfigError("sweep.extra_points", f"expected an array of [alpha, beta] pairs, got {extra_raw!r}")
    extra_points = []
    for i, pair in enumerate(extra_raw):
        ppath = f"sweep.extra_points[{i}]"
        if (not isinstance(pair, list) or len(pair) != 2
                or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in pair)):
            raise ConfigError(ppath, f"expected [alpha, beta], got {pair!r}")
        alpha, beta = float(pair[0]), float(pair[1])
        if alpha <= 0:
            raise ConfigError(ppath, f"alpha must be > 0, got {alpha:g}")
        if beta < 0:
            raise ConfigError(ppath, f"beta must be >= 0, got {beta:g}")
        extra_points.append((alpha, beta))
    extra_points = tuple(extra_points)

    include_relu = _bool(sweep, "sweep", "include_relu", default=False)
    include_swish = _bool(sweep, "sweep", "include_swish_beta1", default=False)
    if not (alphas and betas) and not extra_points and not include_relu and not include_swish:
        raise ConfigError("sweep", "empty grid: no (alpha, beta) points and no baselines")

    model = model_from_json(_require(node, "config", "model"), "model",
                            allow_placeholder=True)
    if ((alphas and betas) or extra_points) and not model.has_placeholder:
        raise ConfigError(
            "model.layers",
            'sweep model needs at least one {"kind": "sweep"} activation placeholder',
        )
    return SweepConfig(
        alphas=alphas,
        betas=betas,
        extra_points=extra_points,
        include_relu=include_relu,
        include_swish_beta1=include_swish,
        model=model,
        train=train_from_json(_require(node, "config", "train"), "train"),
        dataset=dataset_from_json(_require(node, "config", "dataset"), "dataset"),
        output_path=_string(sweep, "sweep", "output_path", default="sweep.csv"),
        jobs=_int(sweep, "sweep", "jobs", default=1, minimum=1),
        plot=_bool(sweep, "sweep", "plot", default=True),
    )
