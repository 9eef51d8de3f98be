"""The activation-function family built on Richard's generalized logistic curve.

The family covers ReLU, the logistic sigmoid, Swish, and the two
Richard's-curve weighted activations: the full six-parameter form
``x * richards_sigma(p, x)`` and its two-hyper-parameter specialization
``x * (1 + exp(-beta*x))**(-alpha)``. Values and first derivatives are exact
closed forms evaluated in log-domain so no finite input overflows.

All evaluation helpers accept a scalar or a numpy array and return the same;
array evaluation is elementwise bit-identical to scalar evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParamsError, UnsupportedActivationError

__all__ = [
    "RichardsParams",
    "Aria2Params",
    "Relu",
    "Sigmoid",
    "Swish",
    "Aria1",
    "Aria2",
    "AriaFull",
    "Activation",
    "relu",
    "relu_derivative",
    "sigmoid",
    "swish",
    "richards_sigma",
    "aria",
    "aria2",
    "aria2_derivative",
    "derivative",
    "apply_elementwise",
    "canonical_richards",
]


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise InvalidParamsError(f"{name} must be finite, got {value}")
    return value


@dataclass(frozen=True)
class RichardsParams:
    """Six-parameter configuration of the generalized logistic curve.

    ``A`` lower asymptote, ``K`` upper asymptote, ``B`` exponential growth
    rate, ``nu`` growth-direction exponent, ``Q`` initial-value parameter,
    ``C`` additive constant. Requires ``nu > 0`` and ``C > 0, Q >= 0`` so
    the base of the nu-th root stays positive for every finite input.
    """

    A: float
    K: float
    B: float
    nu: float
    Q: float
    C: float

    def __post_init__(self):
        for name in ("A", "K", "B", "nu", "Q", "C"):
            object.__setattr__(self, name, _require_finite(name, getattr(self, name)))
        if self.nu <= 0:
            raise InvalidParamsError(f"nu must be > 0, got {self.nu}")
        if self.C <= 0:
            raise InvalidParamsError(f"C must be > 0, got {self.C}")
        if self.Q < 0:
            raise InvalidParamsError(f"Q must be >= 0, got {self.Q}")


@dataclass(frozen=True)
class Aria2Params:
    """Hyper-parameters of the two-parameter curve: exponent and rate.

    ``alpha`` is the reciprocal of the growth-direction exponent and must be
    positive; ``beta`` is the rate and must be nonnegative (``beta = 0``
    degenerates to the scaled-linear case ``x * 2**-alpha``).
    """

    alpha: float
    beta: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", _require_finite("alpha", self.alpha))
        object.__setattr__(self, "beta", _require_finite("beta", self.beta))
        if self.alpha <= 0:
            raise InvalidParamsError(f"alpha must be > 0, got {self.alpha}")
        if self.beta < 0:
            raise InvalidParamsError(f"beta must be >= 0, got {self.beta}")


def _wrap(x, out: np.ndarray):
    """Return a float for scalar input, the array otherwise."""
    if np.ndim(x) == 0 and not isinstance(x, np.ndarray):
        return float(out)
    return out


def _softplus(t: np.ndarray) -> np.ndarray:
    # max(t,0) + log1p(exp(-|t|)): exact for large |t|, no overflow anywhere.
    return np.maximum(t, 0.0) + np.log1p(np.exp(-np.abs(t)))


def _logistic(t: np.ndarray) -> np.ndarray:
    # Two-branch stable logistic; exp argument is always <= 0.
    e = np.exp(-np.abs(t))
    return np.where(t >= 0.0, 1.0 / (1.0 + e), e / (1.0 + e))


def _sigma2(alpha: float, beta: float, x: np.ndarray) -> np.ndarray:
    """(1 + exp(-beta*x))**(-alpha), computed as exp(-alpha*softplus(-beta*x))."""
    return np.exp(-alpha * _softplus(-beta * x))


def _sigma2_grad(alpha: float, beta: float, x: np.ndarray) -> np.ndarray:
    """d/dx of x * _sigma2: sigma * (1 + x*alpha*beta*(1 - logistic(beta*x)))."""
    s = _logistic(beta * x)
    return _sigma2(alpha, beta, x) * (1.0 + x * alpha * beta * (1.0 - s))


def _log_richards_base(p: RichardsParams, x: np.ndarray) -> np.ndarray:
    """log(C + Q*exp(-B*x)) without evaluating exp(-B*x) directly."""
    log_c = math.log(p.C)
    if p.Q == 0.0:
        return np.full(np.shape(x), log_c)
    return np.logaddexp(log_c, -p.B * x + math.log(p.Q))


def _richards_kernel(p: RichardsParams, x: np.ndarray) -> np.ndarray:
    return p.A + (p.K - p.A) * np.exp(-_log_richards_base(p, x) / p.nu)


def _richards_weighted_grad(p: RichardsParams, x: np.ndarray) -> np.ndarray:
    """d/dx of x * richards_sigma(p, x)."""
    sigma = _richards_kernel(p, x)
    if p.Q == 0.0:
        return sigma  # the curve is constant in x
    g = _log_richards_base(p, x)
    # sigma'(x) = (K-A)*(B*Q/nu)*exp(-B*x)*(C+Q*exp(-B*x))**(-1/nu - 1),
    # assembled in log-domain so neither factor overflows on its own.
    dsigma = (p.K - p.A) * (p.B / p.nu) * np.exp(
        -p.B * x + math.log(p.Q) - (1.0 / p.nu + 1.0) * g
    )
    return sigma + x * dsigma


# ---------------------------------------------------------------------------
# Scalar/elementwise operations
# ---------------------------------------------------------------------------


def relu(x):
    """max(0, x)."""
    arr = np.asarray(x, dtype=np.float64)
    return _wrap(x, np.maximum(arr, 0.0))


def relu_derivative(x):
    """Subgradient of relu: 1 for x > 0, else 0 (including at x = 0)."""
    arr = np.asarray(x, dtype=np.float64)
    return _wrap(x, np.where(arr > 0.0, 1.0, 0.0))


def sigmoid(beta, x):
    """Logistic curve with rate beta: 1 / (1 + exp(-beta*x)), overflow-safe."""
    arr = np.asarray(x, dtype=np.float64)
    return _wrap(x, _logistic(float(beta) * arr))


def swish(beta, x):
    """x * sigmoid(beta, x). Shares the two-parameter code path (alpha = 1)."""
    arr = np.asarray(x, dtype=np.float64)
    return _wrap(x, arr * _sigma2(1.0, float(beta), arr))


def richards_sigma(p: RichardsParams, x):
    """A + (K - A) / (C + Q*exp(-B*x))**(1/nu)."""
    arr = np.asarray(x, dtype=np.float64)
    return _wrap(x, _richards_kernel(p, arr))


def aria(p: RichardsParams, x):
    """x * richards_sigma(p, x)."""
    arr = np.asarray(x, dtype=np.float64)
    return _wrap(x, arr * _richards_kernel(p, arr))


def aria2(p: Aria2Params, x):
    """x * (1 + exp(-beta*x))**(-alpha), evaluated in log-domain."""
    arr = np.asarray(x, dtype=np.float64)
    return _wrap(x, arr * _sigma2(p.alpha, p.beta, arr))


def aria2_derivative(p: Aria2Params, x):
    """Exact first derivative of aria2 with respect to x.

    Equals ``sigma + x*alpha*beta*exp(-beta*x)*sigma/(1+exp(-beta*x))`` but is
    assembled from the stable sigma and logistic kernels; at x = 0 it is
    exactly 2**-alpha.
    """
    arr = np.asarray(x, dtype=np.float64)
    return _wrap(x, _sigma2_grad(p.alpha, p.beta, arr))


# ---------------------------------------------------------------------------
# The closed activation catalog
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Relu:
    label = "relu"

    def value(self, x):
        return relu(x)

    def derivative(self, x):
        return relu_derivative(x)

    def describe(self) -> str:
        return "relu"


@dataclass(frozen=True)
class Sigmoid:
    """The standard logistic unit (rate fixed at 1)."""

    label = "sigmoid"

    def value(self, x):
        return sigmoid(1.0, x)

    def derivative(self, x):
        arr = np.asarray(x, dtype=np.float64)
        s = _logistic(arr)
        return _wrap(x, s * (1.0 - s))

    def describe(self) -> str:
        return "sigmoid"


@dataclass(frozen=True)
class Swish:
    """x * sigmoid(beta*x); evaluation delegates to the alpha = 1 curve."""

    beta: float

    label = "swish"

    def __post_init__(self):
        object.__setattr__(self, "beta", _require_finite("beta", self.beta))
        if self.beta < 0:
            raise InvalidParamsError(f"beta must be >= 0, got {self.beta}")

    def value(self, x):
        arr = np.asarray(x, dtype=np.float64)
        return _wrap(x, arr * _sigma2(1.0, self.beta, arr))

    def derivative(self, x):
        arr = np.asarray(x, dtype=np.float64)
        return _wrap(x, _sigma2_grad(1.0, self.beta, arr))

    def describe(self) -> str:
        return f"swish(beta={self.beta:g})"


@dataclass(frozen=True)
class Aria1:
    """Single hyper-parameter curve: alpha free, rate fixed at 1."""

    alpha: float

    label = "aria1"

    def __post_init__(self):
        object.__setattr__(self, "alpha", _require_finite("alpha", self.alpha))
        if self.alpha <= 0:
            raise InvalidParamsError(f"alpha must be > 0, got {self.alpha}")

    def value(self, x):
        arr = np.asarray(x, dtype=np.float64)
        return _wrap(x, arr * _sigma2(self.alpha, 1.0, arr))

    def derivative(self, x):
        arr = np.asarray(x, dtype=np.float64)
        return _wrap(x, _sigma2_grad(self.alpha, 1.0, arr))

    def describe(self) -> str:
        return f"aria1(alpha={self.alpha:g})"


@dataclass(frozen=True)
class Aria2:
    params: Aria2Params

    label = "aria2"

    def value(self, x):
        return aria2(self.params, x)

    def derivative(self, x):
        return aria2_derivative(self.params, x)

    def describe(self) -> str:
        return f"aria2(alpha={self.params.alpha:g},beta={self.params.beta:g})"


@dataclass(frozen=True)
class AriaFull:
    params: RichardsParams

    label = "aria"

    def value(self, x):
        return aria(self.params, x)

    def derivative(self, x):
        arr = np.asarray(x, dtype=np.float64)
        return _wrap(x, _richards_weighted_grad(self.params, arr))

    def describe(self) -> str:
        p = self.params
        return (
            f"aria(A={p.A:g},K={p.K:g},B={p.B:g},nu={p.nu:g},Q={p.Q:g},C={p.C:g})"
        )


Activation = Relu | Sigmoid | Swish | Aria1 | Aria2 | AriaFull


def derivative(a: Activation, x):
    """df/dx of the selected activation at x."""
    return a.derivative(x)


def apply_elementwise(a: Activation, xs: np.ndarray) -> np.ndarray:
    """Apply the activation to every element; shape is preserved."""
    out = a.value(np.asarray(xs, dtype=np.float64))
    return np.asarray(out, dtype=np.float64)


def canonical_richards(a: Activation) -> RichardsParams:
    """Six-parameter curve that reproduces the activation exactly.

    Defined for the sigmoid-power family members: the mapping is
    ``A=0, K=1, B=beta, nu=1/alpha, Q=1, C=1`` (alpha = 1 for Swish).
    ReLU and the bare sigmoid are not products of x with such a curve.
    """
    if isinstance(a, Swish):
        return RichardsParams(A=0.0, K=1.0, B=a.beta, nu=1.0, Q=1.0, C=1.0)
    if isinstance(a, Aria1):
        return RichardsParams(A=0.0, K=1.0, B=1.0, nu=1.0 / a.alpha, Q=1.0, C=1.0)
    if isinstance(a, Aria2):
        p = a.params
        return RichardsParams(A=0.0, K=1.0, B=p.beta, nu=1.0 / p.alpha, Q=1.0, C=1.0)
    raise UnsupportedActivationError(
        f"no canonical Richard's parameters for {type(a).__name__}"
    )
