"""Network layers: forward passes and reverse-mode gradients.

Tensors are row-major float64 numpy arrays. Image batches use NCHW layout.
Every layer caches what its backward pass needs during forward; backward
consumes the cache and accumulates parameter gradients on the layer.
"""

from __future__ import annotations

import numpy as np

from .activations import Activation
from .errors import LabelOutOfRangeError, ShapeMismatchError
from .rng import SplitMix64


class Layer:
    """Base class; stateless layers only override forward/backward."""

    def params(self) -> list[np.ndarray]:
        return []

    def grads(self) -> list[np.ndarray]:
        return []

    def forward(self, x: np.ndarray, train: bool, rng: SplitMix64 | None) -> np.ndarray:
        raise NotImplementedError

    def backward(self, grad: np.ndarray) -> np.ndarray:
        raise NotImplementedError


class Dense(Layer):
    def __init__(self, name: str, weight: np.ndarray, bias: np.ndarray,
                 activation: Activation | None):
        self.name = name
        self.weight = weight
        self.bias = bias
        self.activation = activation
        self.grad_weight = np.zeros_like(weight)
        self.grad_bias = np.zeros_like(bias)
        self._x = None
        self._z = None

    def params(self):
        return [self.weight, self.bias]

    def grads(self):
        return [self.grad_weight, self.grad_bias]

    def forward(self, x, train, rng):
        if x.ndim != 2 or x.shape[1] != self.weight.shape[0]:
            raise ShapeMismatchError(
                f"{self.name}: expected input (batch, {self.weight.shape[0]}), "
                f"got {x.shape}"
            )
        z = x @ self.weight + self.bias
        self._x, self._z = x, z
        return self.activation.value(z) if self.activation is not None else z

    def backward(self, grad):
        dz = grad * self.activation.derivative(self._z) if self.activation is not None else grad
        self.grad_weight = self._x.T @ dz
        self.grad_bias = dz.sum(axis=0)
        return dz @ self.weight.T


class Conv2D(Layer):
    """Direct 2D convolution (cross-correlation) over NCHW batches."""

    def __init__(self, name: str, weight: np.ndarray, bias: np.ndarray,
                 stride: int, padding: int, activation: Activation | None):
        self.name = name
        self.weight = weight  # (out_c, in_c, kh, kw)
        self.bias = bias
        self.stride = stride
        self.padding = padding
        self.activation = activation
        self.grad_weight = np.zeros_like(weight)
        self.grad_bias = np.zeros_like(bias)
        self._xp = None
        self._z = None
        self._in_shape = None

    def params(self):
        return [self.weight, self.bias]

    def grads(self):
        return [self.grad_weight, self.grad_bias]

    def _out_hw(self, h: int, w: int) -> tuple[int, int]:
        kh, kw = self.weight.shape[2:]
        oh = (h + 2 * self.padding - kh) // self.stride + 1
        ow = (w + 2 * self.padding - kw) // self.stride + 1
        return oh, ow

    def forward(self, x, train, rng):
        out_c, in_c, kh, kw = self.weight.shape
        if x.ndim != 4 or x.shape[1] != in_c:
            raise ShapeMismatchError(
                f"{self.name}: expected input (batch, {in_c}, h, w), got {x.shape}"
            )
        n, _, h, w = x.shape
        oh, ow = self._out_hw(h, w)
        if oh <= 0 or ow <= 0:
            raise ShapeMismatchError(
                f"{self.name}: kernel {kh}x{kw} does not fit input {h}x{w}"
            )
        p, s = self.padding, self.stride
        xp = np.pad(x, ((0, 0), (0, 0), (p, p), (p, p))) if p else x
        acc = np.zeros((n, oh, ow, out_c))
        for i in range(kh):
            for j in range(kw):
                patch = xp[:, :, i : i + s * oh : s, j : j + s * ow : s]
                acc += np.tensordot(patch, self.weight[:, :, i, j], axes=([1], [1]))
        z = acc.transpose(0, 3, 1, 2) + self.bias[None, :, None, None]
        self._xp, self._z, self._in_shape = xp, z, x.shape
        return self.activation.value(z) if self.activation is not None else z

    def backward(self, grad):
        dz = grad * self.activation.derivative(self._z) if self.activation is not None else grad
        out_c, in_c, kh, kw = self.weight.shape
        n, _, oh, ow = dz.shape
        p, s = self.padding, self.stride
        dz_nhwo = dz.transpose(0, 2, 3, 1)
        self.grad_bias = dz.sum(axis=(0, 2, 3))
        self.grad_weight = np.empty_like(self.weight)
        dxp = np.zeros_like(self._xp)
        for i in range(kh):
            for j in range(kw):
                patch = self._xp[:, :, i : i + s * oh : s, j : j + s * ow : s]
                self.grad_weight[:, :, i, j] = np.tensordot(
                    dz_nhwo, patch, axes=([0, 1, 2], [0, 2, 3])
                )
                dxp[:, :, i : i + s * oh : s, j : j + s * ow : s] += np.tensordot(
                    dz_nhwo, self.weight[:, :, i, j], axes=([3], [0])
                ).transpose(0, 3, 1, 2)
        if p:
            return dxp[:, :, p:-p, p:-p]
        return dxp


class MaxPool2D(Layer):
    def __init__(self, name: str, window: tuple[int, int], stride: int):
        self.name = name
        self.window = window
        self.stride = stride
        self._argmax = None
        self._in_shape = None

    def forward(self, x, train, rng):
        if x.ndim != 4:
            raise ShapeMismatchError(f"{self.name}: expected NCHW input, got {x.shape}")
        wh, ww = self.window
        s = self.stride
        n, c, h, w = x.shape
        oh = (h - wh) // s + 1
        ow = (w - ww) // s + 1
        if oh <= 0 or ow <= 0:
            raise ShapeMismatchError(
                f"{self.name}: window {wh}x{ww} does not fit input {h}x{w}"
            )
        slices = [
            x[:, :, i : i + s * oh : s, j : j + s * ow : s]
            for i in range(wh)
            for j in range(ww)
        ]
        stack = np.stack(slices, axis=-1)
        # argmax takes the first maximum, i.e. ties route to the earliest
        # window position (row-major), keeping the backward pass deterministic.
        self._argmax = stack.argmax(axis=-1)
        self._in_shape = x.shape
        return stack.max(axis=-1)

    def backward(self, grad):
        wh, ww = self.window
        s = self.stride
        n, c, oh, ow = grad.shape
        dx = np.zeros(self._in_shape)
        for k, (i, j) in enumerate((i, j) for i in range(wh) for j in range(ww)):
            mask = self._argmax == k
            view = dx[:, :, i : i + s * oh : s, j : j + s * ow : s]
            view[mask] += grad[mask]
        return dx


class Dropout(Layer):
    """Inverted dropout: survivors scaled by 1/(1-rate) at train time so
    evaluation is the identity."""

    def __init__(self, name: str, rate: float):
        self.name = name
        self.rate = rate
        self._scaled_mask = None

    def forward(self, x, train, rng):
        if not train or self.rate == 0.0:
            self._scaled_mask = None
            return x
        keep = rng.uniform(x.shape) >= self.rate
        self._scaled_mask = keep / (1.0 - self.rate)
        return x * self._scaled_mask

    def backward(self, grad):
        if self._scaled_mask is None:
            return grad
        return grad * self._scaled_mask


class Flatten(Layer):
    def __init__(self, name: str):
        self.name = name
        self._in_shape = None

    def forward(self, x, train, rng):
        self._in_shape = x.shape
        return x.reshape(x.shape[0], -1)

    def backward(self, grad):
        return grad.reshape(self._in_shape)


class SoftmaxOutput(Layer):
    """Row-wise softmax with a fused log-softmax cross-entropy loss."""

    def __init__(self, name: str, classes: int):
        self.name = name
        self.classes = classes
        self._shifted = None
        self._probs = None

    def forward(self, x, train, rng):
        if x.ndim != 2 or x.shape[1] != self.classes:
            raise ShapeMismatchError(
                f"{self.name}: expected logits (batch, {self.classes}), got {x.shape}"
            )
        shifted = x - x.max(axis=1, keepdims=True)
        expz = np.exp(shifted)
        self._shifted = shifted
        self._probs = expz / expz.sum(axis=1, keepdims=True)
        return self._probs

    def loss_and_logit_grad(self, labels: np.ndarray) -> tuple[float, np.ndarray]:
        """Mean cross-entropy over the batch and its gradient w.r.t. logits."""
        n = self._probs.shape[0]
        labels = np.asarray(labels)
        if labels.shape != (n,):
            raise ShapeMismatchError(
                f"{self.name}: expected {n} labels, got shape {labels.shape}"
            )
        if labels.min(initial=0) < 0 or labels.max(initial=0) >= self.classes:
            raise LabelOutOfRangeError(
                f"{self.name}: labels must lie in [0, {self.classes})"
            )
        log_norm = np.log(np.exp(self._shifted).sum(axis=1))
        log_probs = self._shifted - log_norm[:, None]
        loss = -float(log_probs[np.arange(n), labels].mean())
        grad = self._probs.copy()
        grad[np.arange(n), labels] -= 1.0
        return loss, grad / n

    def backward(self, grad):
        raise RuntimeError("SoftmaxOutput backward runs through loss_and_logit_grad")
