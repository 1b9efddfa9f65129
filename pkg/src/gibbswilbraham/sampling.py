"""Generalized sampling series ``S_W[f](t) = sum_n f(n/W) phi(W t - n)``."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DomainError
from .gibbs import JumpSpec, gibbs_values
from .kernel_core import (
    DEFAULT_POLICY,
    LOWER,
    UPPER,
    AbsolutelySummable,
    Kernel,
    ShiftCombination,
    TruncationPolicy,
    _radius_for,
    lattice_sums,
)


@dataclass(frozen=True, eq=False)
class SampledSignal:
    """A bounded signal.

    ``jump`` records the one-sided limits at 0 for signals whose only
    discontinuity is there. ``is_step`` marks signals that are exactly
    ``jump.left_limit`` on ``t < 0`` and ``jump.right_limit`` on ``t >= 0``.
    """

    evaluate_fn: Callable[[np.ndarray], np.ndarray]
    sup_bound: float
    description: str
    jump: Optional[JumpSpec] = None
    is_step: bool = False

    def evaluate(self, t):
        x = np.asarray(t, dtype=float)
        y = np.asarray(self.evaluate_fn(x), dtype=float)
        return float(y) if x.ndim == 0 else y


def sign_signal() -> SampledSignal:
    """``sgn`` with ``sgn(0) = 1``."""
    return SampledSignal(lambda t: np.where(t >= 0, 1.0, -1.0), 1.0, "sgn", JumpSpec(-1.0, 1.0), True)


def step_signal(left: float, right: float) -> SampledSignal:
    jump = JumpSpec(left, right)
    return SampledSignal(
        lambda t: np.where(t >= 0, right, left), max(abs(left), abs(right)), f"step({left:g},{right:g})", jump, True
    )


def constant_signal(c: float) -> SampledSignal:
    return SampledSignal(lambda t: np.full(np.shape(t), float(c)), abs(c), f"const:{c:g}")


def linear_signal() -> SampledSignal:
    return SampledSignal(lambda t: np.asarray(t, dtype=float), math.inf, "linear")


def ramp_step_signal() -> SampledSignal:
    """``sgn(t) (1 + |t|)``: unbounded, so only usable with compact kernels."""
    return SampledSignal(
        lambda t: np.where(t >= 0, 1.0, -1.0) * (1.0 + np.abs(t)), math.inf, "sgn-ramp", JumpSpec(-1.0, 1.0)
    )


def cosine_signal() -> SampledSignal:
    return SampledSignal(np.cos, 1.0, "cos")


@dataclass(frozen=True)
class SeriesEvalConfig:
    W: float
    sum_policy: TruncationPolicy = DEFAULT_POLICY

    def __post_init__(self):
        if not self.W > 0:
            raise ValueError("sampling rate W must be positive")


def _ordered(n):
    # ascending |n|, ties negative-first
    return n[np.lexsort((n, np.abs(n)))]


def _series_at(kernel: Kernel, f: SampledSignal, W: float, x: float, policy: TruncationPolicy):
    """``sum_n f(n/W) phi(x - n)`` and its truncation bound."""
    radius = kernel.support_radius
    if radius is not None:
        n = np.arange(math.ceil(x - radius), math.floor(x + radius) + 1, dtype=float)
        n = _ordered(n)
        return float(np.sum(f.evaluate(n / W) * kernel.evaluate(x - n))), 0.0

    if f.is_step:
        # f(n/W) is right_limit for n >= 0 and left_limit for n < 0
        lv, lb, _ = lattice_sums(kernel, [x], LOWER, policy.scaled(0.5 / max(1.0, abs(f.jump.right_limit))))
        uv, ub, _ = lattice_sums(kernel, [x], UPPER, policy.scaled(0.5 / max(1.0, abs(f.jump.left_limit))))
        value = f.jump.right_limit * lv[0] + f.jump.left_limit * uv[0]
        bound = abs(f.jump.right_limit) * lb[0] + abs(f.jump.left_limit) * ub[0]
        return float(value), float(bound)

    decay = kernel.decay
    if not isinstance(decay, (AbsolutelySummable, ShiftCombination)):
        raise DomainError(f"{kernel.name} is not absolutely summable; only step signals are supported")
    if not math.isfinite(f.sup_bound):
        raise DomainError(f"signal {f.description} has no finite sup bound")
    R = _radius_for(decay.tail_bound, policy.target_abs_error, policy.max_radius)
    m = math.floor(x)
    n = _ordered(np.arange(m - R, m + R + 1, dtype=float))
    value = float(np.sum(f.evaluate(n / W) * kernel.evaluate((x - m) - (n - m))))
    return value, f.sup_bound * decay.tail_bound(R)


def sampling_series(kernel: Kernel, f: SampledSignal, config: SeriesEvalConfig, t: float) -> float:
    return _series_at(kernel, f, config.W, config.W * t, config.sum_policy)[0]


def rescaled_series(
    kernel: Kernel, f: SampledSignal, N: int, xi: float, policy: TruncationPolicy = DEFAULT_POLICY
) -> float:
    """``S_N[f](xi / N) = sum_n f(n/N) phi(xi - n)``."""
    if N < 1:
        raise ValueError("N must be a positive integer")
    return _series_at(kernel, f, N, xi, policy)[0]


def default_xi_grid() -> np.ndarray:
    """129-point grid of step 1/16 on [-4, 4] with the jump point 0 removed."""
    grid = np.linspace(-4.0, 4.0, 129)
    return grid[grid != 0.0]


def convergence_probe(
    kernel: Kernel,
    f: SampledSignal,
    N_list: Sequence[int],
    xi_grid=None,
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> list[tuple[int, float]]:
    """Sup distance between the rescaled series and ``G[f]`` for each N."""
    if f.jump is None:
        raise DomainError(f"signal {f.description} declares no jump at 0")
    xi_grid = default_xi_grid() if xi_grid is None else np.asarray(xi_grid, dtype=float)
    target, _ = gibbs_values(kernel, f.jump, xi_grid, policy)
    out = []
    for N in N_list:
        series = np.array([rescaled_series(kernel, f, N, xi, policy) for xi in xi_grid])
        out.append((int(N), float(np.max(np.abs(series - target)))))
    return out


def continuity_convergence_check(
    kernel: Kernel,
    f: SampledSignal,
    t: float,
    W_list: Sequence[float],
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> list[tuple[float, float]]:
    """``|S_W[f](t) - f(t)|`` for each W at a continuity point t."""
    ft = f.evaluate(t)
    return [(W, abs(sampling_series(kernel, f, SeriesEvalConfig(W, policy), t) - ft)) for W in W_list]
