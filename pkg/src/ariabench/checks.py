"""The invariant battery behind the `check` subcommand.

Each property returns a :class:`CheckResult`; failures carry the first
offending (alpha, beta, x) triple so regressions are immediately locatable.
The battery is deterministic: the stability fuzz draws from a fixed seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .activations import (
    Aria2,
    Aria2Params,
    AriaFull,
    RichardsParams,
    Swish,
    aria,
    aria2,
    aria2_derivative,
    canonical_richards,
    relu,
    relu_derivative,
    richards_sigma,
    sigmoid,
    swish,
)
from .rng import SplitMix64

ALPHA_GRID = (0.5, 1.0, 1.5, 2.0)
BETA_GRID = (0.1, 1.0, 2.0, 10.0)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _grid(density: int) -> np.ndarray:
    return np.linspace(-20.0, 20.0, density)


def check_gradient(density: int, break_gradient: bool = False) -> CheckResult:
    """Closed-form derivative vs central differences (h = 1e-6)."""
    h = 1e-6
    xs = _grid(density)
    worst = 0.0
    worst_at = (0.0, 0.0, 0.0)
    for alpha in ALPHA_GRID:
        for beta in BETA_GRID:
            p = Aria2Params(alpha, beta)
            closed = aria2_derivative(p, xs)
            if break_gradient:
                closed = closed + 1e-3
            fd = (aria2(p, xs + h) - aria2(p, xs - h)) / (2.0 * h)
            err = np.abs(closed - fd) / np.maximum(1.0, np.abs(closed))
            i = int(err.argmax())
            if err[i] > worst:
                worst = float(err[i])
                worst_at = (alpha, beta, float(xs[i]))
    detail = f"max rel err {worst:.3e} at (alpha={worst_at[0]}, beta={worst_at[1]}, x={worst_at[2]:g})"
    return CheckResult("gradient-check", worst <= 1e-6, detail)


def check_reduction_identity(density: int) -> CheckResult:
    """aria2 equals aria at the canonical Richard's parameters."""
    xs = _grid(density)
    for alpha in ALPHA_GRID:
        for beta in BETA_GRID:
            p = Aria2Params(alpha, beta)
            rp = canonical_richards(Aria2(p))
            a = aria2(p, xs)
            b = aria(rp, xs)
            err = np.abs(a - b) / np.maximum(np.abs(a), 1e-300)
            i = int(err.argmax())
            if err[i] > 1e-12:
                return CheckResult(
                    "reduction-identity",
                    False,
                    f"rel err {err[i]:.3e} at (alpha={alpha}, beta={beta}, x={xs[i]:g})",
                )
    return CheckResult("reduction-identity", True, "aria(canonical) == aria2 to 1e-12")


def check_swish_identity(density: int) -> CheckResult:
    """aria2 at alpha=1 is bitwise identical to swish."""
    xs = _grid(density)
    for beta in (0.0, 0.3, 1.0, 2.0, 10.0):
        a = aria2(Aria2Params(1.0, beta), xs)
        b = swish(beta, xs)
        if not np.array_equal(a, b):
            i = int(np.flatnonzero(a != b)[0])
            return CheckResult(
                "swish-identity", False,
                f"mismatch at (alpha=1, beta={beta}, x={xs[i]:g})",
            )
    return CheckResult("swish-identity", True, "aria2(alpha=1) == swish bitwise")


def check_power_identity(density: int) -> CheckResult:
    """sigma(alpha,beta,x) equals sigmoid(beta*x)**alpha where not denormal."""
    xs = _grid(density)
    for alpha in ALPHA_GRID:
        for beta in BETA_GRID:
            s = sigmoid(1.0, beta * xs)
            keep = s > 2.3e-308
            a = aria2(Aria2Params(alpha, beta), xs[keep])
            b = xs[keep] * s[keep] ** alpha
            err = np.abs(a - b) / np.maximum(np.abs(b), 1e-300)
            err[b == a] = 0.0
            i = int(err.argmax())
            if err[i] > 1e-12:
                return CheckResult(
                    "power-identity", False,
                    f"rel err {err[i]:.3e} at (alpha={alpha}, beta={beta}, x={xs[keep][i]:g})",
                )
    return CheckResult("power-identity", True, "sigma == sigmoid**alpha to 1e-12")


def check_relu_limit(_density: int) -> CheckResult:
    """aria2 with beta=1000 approximates relu away from the origin."""
    xs = np.concatenate([np.arange(-10, -0.09, 0.1), np.arange(0.1, 10.01, 0.1)])
    gap = np.abs(aria2(Aria2Params(1.0, 1000.0), xs) - relu(xs))
    i = int(gap.argmax())
    ok = gap[i] <= 1e-6
    return CheckResult(
        "relu-limit", ok,
        f"max gap {gap[i]:.3e} at (alpha=1, beta=1000, x={xs[i]:g})",
    )


def check_bounded_sign(density: int) -> CheckResult:
    """Weight in [0,1]; output strictly between 0 and x off saturation."""
    xs = _grid(density)
    xs = xs[np.abs(xs) > 1e-12]
    for alpha in ALPHA_GRID:
        for beta in BETA_GRID:
            vals = aria2(Aria2Params(alpha, beta), xs)
            sig = vals / xs
            if not (np.all(sig >= 0.0) and np.all(sig <= 1.0)):
                i = int(np.flatnonzero((sig < 0) | (sig > 1))[0])
                return CheckResult(
                    "bounded-sign", False,
                    f"weight outside [0,1] at (alpha={alpha}, beta={beta}, x={xs[i]:g})",
                )
            inner = np.abs(beta * xs) <= 30.0
            strict = (sig[inner] > 0.0) & (sig[inner] < 1.0)
            if not np.all(strict):
                i = int(np.flatnonzero(~strict)[0])
                return CheckResult(
                    "bounded-sign", False,
                    f"saturated weight at (alpha={alpha}, beta={beta}, x={xs[inner][i]:g})",
                )
    return CheckResult("bounded-sign", True, "0 <= sigma <= 1, strict off saturation")


def check_non_monotonicity(_density: int) -> CheckResult:
    """The alpha=1, beta=1 curve dips, unlike relu whose slope is >= 0."""
    p = Aria2Params(1.0, 1.0)
    d = aria2_derivative(p, -3.0)
    xs = np.arange(-20.0, 0.0, 0.01)
    min_val = float(aria2(p, xs).min())
    relu_ok = bool(np.all(relu_derivative(np.linspace(-20, 20, 4001)) >= 0.0))
    ok = d < 0.0 and min_val < 0.0 and relu_ok
    return CheckResult(
        "non-monotonicity", ok,
        f"derivative(-3) = {d:.4f}, min value {min_val:.4f} (alpha=1, beta=1)",
    )


def check_stability(_density: int, samples: int = 1_000_000) -> CheckResult:
    """Random fuzz over x in [-1e4, 1e4], alpha in (0, 4], beta in [0, 100]."""
    rng = SplitMix64(20240)
    xs = (rng.uniform(samples) * 2.0 - 1.0) * 1e4
    alphas = (1.0 - rng.uniform(samples)) * 4.0  # (0, 4]
    betas = rng.uniform(samples) * 100.0
    sig = np.exp(-alphas * (np.maximum(-betas * xs, 0.0) + np.log1p(np.exp(-np.abs(betas * xs)))))
    vals = xs * sig
    s = sigmoid(1.0, betas * xs)
    derivs = sig * (1.0 + xs * alphas * betas * (1.0 - s))
    rich = richards_sigma(RichardsParams(A=-1, K=2, B=3, nu=0.5, Q=2, C=1), xs)
    bad = ~(np.isfinite(vals) & np.isfinite(derivs) & np.isfinite(s) & np.isfinite(rich))
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        return CheckResult(
            "stability", False,
            f"non-finite at (alpha={alphas[i]:g}, beta={betas[i]:g}, x={xs[i]:g})",
        )
    return CheckResult("stability", True, f"{samples} draws, no NaN/Inf")


def check_richards_asymptotes(_density: int) -> CheckResult:
    """With C=1, Q>0, B>0 the curve reaches K at +50/B and A at -50/B."""
    for b in (0.5, 1.0, 4.0):
        p = RichardsParams(A=-2.0, K=3.0, B=b, nu=1.3, Q=0.7, C=1.0)
        hi = abs(richards_sigma(p, 50.0 / b) - p.K)
        lo = abs(richards_sigma(p, -50.0 / b) - p.A)
        if hi > 1e-10 or lo > 1e-10:
            return CheckResult(
                "richards-asymptotes", False,
                f"gap {max(hi, lo):.3e} at (B={b}, x=+-50/B)",
            )
    return CheckResult("richards-asymptotes", True, "within 1e-10 of A and K at -+50/B")


def run_checks(grid_density: int = 4001, stability_samples: int = 1_000_000,
               break_gradient: bool = False) -> list[CheckResult]:
    """Run the full battery in a fixed order."""
    return [
        check_gradient(grid_density, break_gradient=break_gradient),
        check_reduction_identity(grid_density),
        check_swish_identity(grid_density),
        check_power_identity(grid_density),
        check_relu_limit(grid_density),
        check_bounded_sign(grid_density),
        check_non_monotonicity(grid_density),
        check_stability(grid_density, samples=stability_samples),
        check_richards_asymptotes(grid_density),
    ]
