"""Richard's-curve weighted activations and a small deterministic training engine."""

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
    apply_elementwise,
    aria,
    aria2,
    aria2_derivative,
    canonical_richards,
    derivative,
    relu,
    richards_sigma,
    sigmoid,
    swish,
)

__all__ = [
    "Activation",
    "Aria1",
    "Aria2",
    "Aria2Params",
    "AriaFull",
    "Relu",
    "RichardsParams",
    "Sigmoid",
    "Swish",
    "apply_elementwise",
    "aria",
    "aria2",
    "aria2_derivative",
    "canonical_richards",
    "derivative",
    "relu",
    "richards_sigma",
    "sigmoid",
    "swish",
]

__version__ = "0.1.0"
