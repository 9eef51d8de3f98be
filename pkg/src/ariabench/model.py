"""Declarative model specs, deterministic weight init, and the Model itself.

A :class:`ModelSpec` lists layer specs plus a seed; :func:`build_model` turns
it into a :class:`Model` with He-uniform weights drawn from the seed's init
stream, so two builds from the same spec are bit-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .activations import Activation
from .errors import InvalidParamsError, ShapeMismatchError
from .layers import Conv2D, Dense, Dropout, Flatten, Layer, MaxPool2D, SoftmaxOutput
from .rng import SplitMix64, dropout_stream, init_stream


@dataclass(frozen=True)
class DenseSpec:
    in_size: int
    out_size: int
    activation: Activation | None = None

    def __post_init__(self):
        if self.in_size < 1 or self.out_size < 1:
            raise InvalidParamsError("dense dimensions must be positive")


@dataclass(frozen=True)
class Conv2DSpec:
    in_channels: int
    out_channels: int
    kernel: tuple[int, int] = (3, 3)
    stride: int = 1
    padding: int = 0
    activation: Activation | None = None

    def __post_init__(self):
        if self.in_channels < 1 or self.out_channels < 1:
            raise InvalidParamsError("channel counts must be positive")
        if self.kernel[0] < 1 or self.kernel[1] < 1:
            raise InvalidParamsError("kernel extents must be positive")
        if self.stride < 1:
            raise InvalidParamsError("stride must be >= 1")
        if self.padding < 0:
            raise InvalidParamsError("padding must be >= 0")


@dataclass(frozen=True)
class MaxPool2DSpec:
    window: tuple[int, int] = (2, 2)
    stride: int = 2

    def __post_init__(self):
        if self.window[0] < 1 or self.window[1] < 1:
            raise InvalidParamsError("pool window extents must be positive")
        if self.stride < 1:
            raise InvalidParamsError("pool stride must be >= 1")


@dataclass(frozen=True)
class DropoutSpec:
    rate: float

    def __post_init__(self):
        if not (0.0 <= self.rate < 1.0):
            raise InvalidParamsError(f"dropout rate must be in [0, 1), got {self.rate}")


@dataclass(frozen=True)
class FlattenSpec:
    pass


@dataclass(frozen=True)
class SoftmaxOutputSpec:
    classes: int

    def __post_init__(self):
        if self.classes < 2:
            raise InvalidParamsError("softmax needs at least 2 classes")


LayerSpec = (
    DenseSpec | Conv2DSpec | MaxPool2DSpec | DropoutSpec | FlattenSpec | SoftmaxOutputSpec
)


@dataclass(frozen=True)
class ModelSpec:
    layers: tuple[LayerSpec, ...]
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        if not self.layers:
            raise InvalidParamsError("model needs at least one layer")
        if not isinstance(self.layers[-1], SoftmaxOutputSpec):
            raise InvalidParamsError("last layer must be a softmax output")
        _validate_chain(self.layers)

    def activation_description(self) -> str:
        """Distinct activations of the parameterized layers, for reports."""
        seen: list[str] = []
        for spec in self.layers:
            act = getattr(spec, "activation", None)
            if act is not None and act.describe() not in seen:
                seen.append(act.describe())
        return "+".join(seen) if seen else "linear"


def _validate_chain(layers: tuple[LayerSpec, ...]) -> None:
    """Check the statically-known feature dimensions between adjacent layers.

    Spatial extents depend on the input tensor and are checked at forward
    time; here we track dense widths and channel counts where declared.
    """
    units: int | None = None  # known dense width
    channels: int | None = None  # known channel count
    prev_desc = "input"
    for idx, spec in enumerate(layers):
        desc = f"layer {idx} ({type(spec).__name__})"
        if isinstance(spec, DenseSpec):
            if units is not None and units != spec.in_size:
                raise ShapeMismatchError(
                    f"{desc} expects {spec.in_size} inputs but {prev_desc} "
                    f"produces {units}"
                )
            units, channels = spec.out_size, None
        elif isinstance(spec, Conv2DSpec):
            if channels is not None and channels != spec.in_channels:
                raise ShapeMismatchError(
                    f"{desc} expects {spec.in_channels} channels but {prev_desc} "
                    f"produces {channels}"
                )
            channels, units = spec.out_channels, None
        elif isinstance(spec, FlattenSpec):
            units, channels = None, None  # width depends on spatial extents
        elif isinstance(spec, SoftmaxOutputSpec):
            if units is not None and units != spec.classes:
                raise ShapeMismatchError(
                    f"{desc} expects {spec.classes} logits but {prev_desc} "
                    f"produces {units}"
                )
        prev_desc = desc


def _he_uniform(rng: SplitMix64, shape: tuple[int, ...], fan_in: int) -> np.ndarray:
    bound = math.sqrt(6.0 / fan_in)
    return rng.uniform_signed(bound, shape)


def desk_cnn_spec(activation: Activation, seed: int = 0, dense_units: int = 128,
                  classes: int = 10) -> ModelSpec:
    """The two-conv-block digit classifier at desk scale.

    Conv 1->8 and 8->16 (3x3, stride 1, pad 1), each followed by 2x2 max
    pooling, then a dense layer with dropout 0.4 and a linear projection to
    the class logits. ``dense_units=1024`` restores the full-scale width.
    """
    return ModelSpec(
        layers=(
            Conv2DSpec(1, 8, (3, 3), 1, 1, activation),
            MaxPool2DSpec((2, 2), 2),
            Conv2DSpec(8, 16, (3, 3), 1, 1, activation),
            MaxPool2DSpec((2, 2), 2),
            FlattenSpec(),
            DenseSpec(16 * 7 * 7, dense_units, activation),
            DropoutSpec(0.4),
            DenseSpec(dense_units, classes),
            SoftmaxOutputSpec(classes),
        ),
        seed=seed,
    )


def build_model(spec: ModelSpec) -> "Model":
    """Instantiate layers with He-uniform weights from the spec's seed."""
    rng = init_stream(spec.seed)
    layers: list[Layer] = []
    for idx, ls in enumerate(spec.layers):
        name = f"layer {idx} ({type(ls).__name__})"
        if isinstance(ls, DenseSpec):
            w = _he_uniform(rng, (ls.in_size, ls.out_size), fan_in=ls.in_size)
            b = np.zeros(ls.out_size)
            layers.append(Dense(name, w, b, ls.activation))
        elif isinstance(ls, Conv2DSpec):
            kh, kw = ls.kernel
            fan_in = ls.in_channels * kh * kw
            w = _he_uniform(rng, (ls.out_channels, ls.in_channels, kh, kw), fan_in)
            b = np.zeros(ls.out_channels)
            layers.append(Conv2D(name, w, b, ls.stride, ls.padding, ls.activation))
        elif isinstance(ls, MaxPool2DSpec):
            layers.append(MaxPool2D(name, ls.window, ls.stride))
        elif isinstance(ls, DropoutSpec):
            layers.append(Dropout(name, ls.rate))
        elif isinstance(ls, FlattenSpec):
            layers.append(Flatten(name))
        elif isinstance(ls, SoftmaxOutputSpec):
            layers.append(SoftmaxOutput(name, ls.classes))
        else:
            raise InvalidParamsError(f"unknown layer spec {ls!r}")
    return Model(spec, layers)


class Model:
    """A built network. Training mutates it; do not share a training model."""

    def __init__(self, spec: ModelSpec, layers: list[Layer]):
        self.spec = spec
        self.layers = layers
        self.dropout_rng = dropout_stream(spec.seed)

    @property
    def classes(self) -> int:
        return self.layers[-1].classes

    def parameters(self) -> list[np.ndarray]:
        return [p for layer in self.layers for p in layer.params()]

    def gradients(self) -> list[np.ndarray]:
        return [g for layer in self.layers for g in layer.grads()]

    def forward(self, batch: np.ndarray, train: bool = False,
                dropout_rng: SplitMix64 | None = None) -> np.ndarray:
        """Class probabilities for a batch; rows sum to 1.

        In train mode dropout masks come from ``dropout_rng`` (the model's
        own stream when not given); eval mode applies no dropout at all.
        """
        rng = dropout_rng if dropout_rng is not None else self.dropout_rng
        x = np.asarray(batch, dtype=np.float64)
        for layer in self.layers:
            x = layer.forward(x, train, rng)
            assert np.all(np.isfinite(x)), f"non-finite output from {layer.name}"
        return x

    def loss_and_gradients(self, batch: np.ndarray, labels: np.ndarray,
                           train: bool = True,
                           dropout_rng: SplitMix64 | None = None
                           ) -> tuple[float, list[np.ndarray]]:
        """Mean cross-entropy and gradients for every trainable parameter."""
        self.forward(batch, train=train, dropout_rng=dropout_rng)
        loss, grad = self.layers[-1].loss_and_logit_grad(np.asarray(labels))
        for layer in reversed(self.layers[:-1]):
            grad = layer.backward(grad)
        return loss, self.gradients()
