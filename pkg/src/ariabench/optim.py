"""Optimizers: Adam with bias-corrected moments, SGD with stepped lr decay."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParamsError, ShapeMismatchError


@dataclass(frozen=True)
class AdamSpec:
    lr: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    def __post_init__(self):
        if self.lr <= 0:
            raise InvalidParamsError(f"lr must be > 0, got {self.lr}")
        if not (0.0 <= self.beta1 < 1.0) or not (0.0 <= self.beta2 < 1.0):
            raise InvalidParamsError("beta1/beta2 must lie in [0, 1)")
        if self.eps <= 0:
            raise InvalidParamsError("eps must be > 0")


@dataclass(frozen=True)
class SGDSpec:
    lr: float
    decay_factor: float = 1.0
    decay_epochs: tuple[int, ...] = ()

    def __post_init__(self):
        if self.lr <= 0:
            raise InvalidParamsError(f"lr must be > 0, got {self.lr}")
        if not (0.0 < self.decay_factor <= 1.0):
            raise InvalidParamsError("decay_factor must lie in (0, 1]")
        object.__setattr__(self, "decay_epochs", tuple(self.decay_epochs))


OptimizerSpec = AdamSpec | SGDSpec


def _check_shapes(params: list[np.ndarray], grads: list[np.ndarray]) -> None:
    if len(params) != len(grads) or any(
        p.shape != g.shape for p, g in zip(params, grads)
    ):
        raise ShapeMismatchError("gradient shapes do not match parameters")


class Adam:
    def __init__(self, spec: AdamSpec, params: list[np.ndarray]):
        self.spec = spec
        self.params = params
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]
        self.t = 0

    def step(self, grads: list[np.ndarray], epoch: int) -> None:
        _check_shapes(self.params, grads)
        s = self.spec
        self.t += 1
        bc1 = 1.0 - s.beta1**self.t
        bc2 = 1.0 - s.beta2**self.t
        for p, g, m, v in zip(self.params, grads, self.m, self.v):
            m *= s.beta1
            m += (1.0 - s.beta1) * g
            v *= s.beta2
            v += (1.0 - s.beta2) * g * g
            p -= s.lr * (m / bc1) / (np.sqrt(v / bc2) + s.eps)


class SGD:
    """Plain SGD; lr is multiplied by decay_factor the first time a step
    runs in each epoch listed in decay_epochs."""

    def __init__(self, spec: SGDSpec, params: list[np.ndarray]):
        self.spec = spec
        self.params = params
        self.lr = spec.lr
        self._decayed: set[int] = set()

    def step(self, grads: list[np.ndarray], epoch: int) -> None:
        _check_shapes(self.params, grads)
        if epoch in self.spec.decay_epochs and epoch not in self._decayed:
            self.lr *= self.spec.decay_factor
            self._decayed.add(epoch)
        for p, g in zip(self.params, grads):
            p -= self.lr * g


Optimizer = Adam | SGD


def make_optimizer(spec: OptimizerSpec, params: list[np.ndarray]) -> Optimizer:
    if isinstance(spec, AdamSpec):
        return Adam(spec, params)
    if isinstance(spec, SGDSpec):
        return SGD(spec, params)
    raise InvalidParamsError(f"unknown optimizer spec {spec!r}")
