"""Gibbs-Wilbraham functions and overshoot detection.

For a kernel ``phi`` and a jump at 0 with limits ``f(0-)`` and ``f(0+)`` (the
convention is ``f(0) = f(0+)``), the rescaled sampling series converges to

    G[f](t) = f(0+) * sum_{n>=0} phi(t - n) + f(0-) * sum_{n<0} phi(t - n).

With ``f = sgn`` this is the reduced function ``G(t) = lower(t) - upper(t)``.
If the integer shifts of ``phi`` sum to 1, an overshoot on the left exists iff
``lower(y) < 0`` for some ``y < 0``. An overshoot on the right exists iff
``upper(x) < 0`` for some ``x > 0``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import integrate

from .errors import DegenerateJumpError, DomainError, PreconditionError
from .kernel_core import (
    DEFAULT_POLICY,
    LOWER,
    UPPER,
    Kernel,
    TruncationPolicy,
    lattice_sums,
    partition_of_unity_defect,
)

NONE_FOUND = "none-found"
NONE_EXACT = "none-exact"
LEFT = "left"
RIGHT = "right"
STRONG = "strong"
CLASSIFICATIONS = (NONE_FOUND, NONE_EXACT, LEFT, RIGHT, STRONG)

POU_TOLERANCE = 1e-6
# compact kernels wider than this are not rescanned over their whole support
EXACT_SCAN_CAP = 1024.0

_INV_PHI = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class JumpSpec:
    left_limit: float
    right_limit: float

    def __post_init__(self):
        if self.left_limit == self.right_limit:
            raise DegenerateJumpError("jump needs left_limit != right_limit")


@dataclass(frozen=True)
class ScanConfig:
    scan_radius: float = 8.0
    grid_step: float = 1.0 / 64
    refine_tolerance: float = 1e-9
    sum_policy: TruncationPolicy = DEFAULT_POLICY
    pou_tolerance: float = POU_TOLERANCE

    def __post_init__(self):
        if not self.scan_radius > 0 or not self.grid_step > 0:
            raise ValueError("scan_radius and grid_step must be positive")
        if not self.grid_step < self.scan_radius:
            raise ValueError("grid_step must be smaller than scan_radius")
        if not self.refine_tolerance > 0:
            raise ValueError("refine_tolerance must be positive")


@dataclass
class OvershootReport:
    classification: str
    left_witness: Optional[float]
    left_sum_value: Optional[float]
    right_witness: Optional[float]
    right_sum_value: Optional[float]
    max_gibbs_value: float
    min_gibbs_value: float
    # not serialized
    left_sum_bound: Optional[float] = field(default=None, repr=False)
    right_sum_bound: Optional[float] = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "classification": self.classification,
            "left_witness": self.left_witness,
            "left_sum_value": self.left_sum_value,
            "right_witness": self.right_witness,
            "right_sum_value": self.right_sum_value,
            "max_gibbs_value": self.max_gibbs_value,
            "min_gibbs_value": self.min_gibbs_value,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _both_sides(kernel, ts, policy):
    half = policy.scaled(0.5)
    lv, lb, _ = lattice_sums(kernel, ts, LOWER, half)
    uv, ub, _ = lattice_sums(kernel, ts, UPPER, half)
    return lv, lb, uv, ub


def gibbs_values(kernel: Kernel, jump: JumpSpec, ts, policy: TruncationPolicy = DEFAULT_POLICY):
    """Vectorized ``G[f](t)``; returns ``(values, error_bounds)``."""
    lv, lb, uv, ub = _both_sides(kernel, ts, policy)
    values = jump.right_limit * lv + jump.left_limit * uv
    bounds = abs(jump.right_limit) * lb + abs(jump.left_limit) * ub
    return values, bounds


def gibbs_function(kernel: Kernel, jump: JumpSpec, t: float, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    values, _ = gibbs_values(kernel, jump, [t], policy)
    return float(values[0])


def constant_gibbs(kernel: Kernel, c: float, t: float, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """``G[c](t)`` for the constant function c (no jump)."""
    lv, _, uv, _ = _both_sides(kernel, [t], policy)
    return float(c * lv[0] + c * uv[0])


SIGN_JUMP = JumpSpec(-1.0, 1.0)


def reduced_gibbs(kernel: Kernel, t: float, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """``G(t) = sum_{n>=0} phi(t-n) - sum_{n<0} phi(t-n)``."""
    return gibbs_function(kernel, SIGN_JUMP, t, policy)


def normalize_jump(left: float, right: float) -> tuple[float, float]:
    """Return ``(d, c)`` with ``d (left + c) = -1`` and ``d (right + c) = 1``."""
    if left == right:
        raise DegenerateJumpError("cannot normalize a jump with equal limits")
    return 2.0 / (right - left), -(left + right) / 2.0


def even_reflection_witness(x: float) -> float:
    """Map a right witness ``x > 0`` of an even kernel to the left witness ``-x - 1``."""
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    return -x - 1.0


def half_point_identity_check(kernel: Kernel, policy: TruncationPolicy = DEFAULT_POLICY) -> tuple[float, float]:
    """``(G(1/2), 2 phi(1/2))``, equal for every even kernel."""
    if not kernel.even:
        raise PreconditionError(f"{kernel.name} is not even")
    return reduced_gibbs(kernel, 0.5, policy), 2.0 * kernel.evaluate(0.5)


def fourier_gibbs_constant(xi: float) -> float:
    """``2 * int_0^xi sin(pi x) / (pi x) dx``, the limit profile of Fourier partial sums of sgn."""
    if not math.isfinite(xi):
        raise DomainError("xi must be finite")
    if xi == 0:
        return 0.0
    value, _ = integrate.quad(np.sinc, 0.0, xi, epsabs=5e-11, epsrel=0.0, limit=200)
    return 2.0 * value


# ---------------------------------------------------------------------------
# detection
# ---------------------------------------------------------------------------


def _golden_minimize(fn, a, b, tol):
    """Batched golden-section search of ``fn`` on the intervals ``[a_i, b_i]``."""
    a = np.array(a, dtype=float)
    b = np.array(b, dtype=float)
    while np.max(b - a) > tol:
        c = b - _INV_PHI * (b - a)
        d = a + _INV_PHI * (b - a)
        fc = fn(c)
        fd = fn(d)
        left = fc < fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
    return (a + b) / 2


def _side_sums(kernel, side, policy):
    def fn(ts):
        v, b, _ = lattice_sums(kernel, ts, side, policy)
        return v, b

    return fn


def _find_witness(sums, points, values, bounds, lo, hi, step, tol):
    """Refine every local grid minimum and return the best verified witness."""
    n = len(values)
    left_ok = np.r_[True, values[1:] <= values[:-1]]
    right_ok = np.r_[values[:-1] <= values[1:], True]
    minima = np.nonzero(left_ok & right_ok)[0]
    a = np.clip(points[minima] - step, lo, hi)
    b = np.clip(points[minima] + step, lo, hi)
    refined = _golden_minimize(lambda ts: sums(ts)[0], a, b, tol)
    rv, rb = sums(refined)

    candidates = []
    for i, x, v, e in zip(minima, refined, rv, rb):
        candidates.append((float(v), abs(float(x)), float(x), float(e)))
        candidates.append((float(values[i]), abs(float(points[i])), float(points[i]), float(bounds[i])))
    candidates = [cand for cand in candidates if cand[0] < -cand[3]]
    if not candidates:
        return None
    v, _, x, e = min(candidates, key=lambda cand: (cand[0], cand[1]))
    return x, v, e


def _scan(kernel, radius, config):
    policy = config.sum_policy
    step = config.grid_step
    count = int(round(radius / step))
    xs = np.arange(1, count + 1) * step
    ys = -xs[::-1]
    lower = _side_sums(kernel, LOWER, policy)
    upper = _side_sums(kernel, UPPER, policy)

    ly_v, ly_b = lower(ys)
    uy_v, _ = upper(ys)
    ux_v, ux_b = upper(xs)
    lx_v, _ = lower(xs)
    eps = step * 1e-6
    left = _find_witness(lower, ys, ly_v, ly_b, -radius, -eps, step, config.refine_tolerance)
    right = _find_witness(upper, xs, ux_v, ux_b, eps, radius, step, config.refine_tolerance)
    g_right = lx_v - ux_v
    g_left = ly_v - uy_v
    return left, right, float(np.max(g_right)), float(np.min(g_left))


def detect_overshoot(kernel: Kernel, config: ScanConfig = ScanConfig()) -> OvershootReport:
    """Search for left and right overshoot witnesses on a bounded grid.

    ``none-found`` means no witness in the scanned range. ``none-exact`` is
    reported for compactly supported kernels whose entire non-constant range
    ``|t| <= support + 1`` was scanned with exact finite sums.
    """
    policy = config.sum_policy
    defect = partition_of_unity_defect(kernel, policy=policy)
    if defect > config.pou_tolerance:
        raise PreconditionError(
            f"{kernel.name}: partition-of-unity defect {defect:.3e} exceeds {config.pou_tolerance:.1e}",
            defect=defect,
        )

    radius = config.scan_radius
    left, right, g_max, g_min = _scan(kernel, radius, config)

    support = kernel.support_radius
    exact = support is not None and support + 1 <= radius
    if (left is None or right is None) and support is not None and not exact and support + 1 <= EXACT_SCAN_CAP:
        radius = support + 1
        left, right, g_max2, g_min2 = _scan(kernel, radius, config)
        g_max, g_min = max(g_max, g_max2), min(g_min, g_min2)
        exact = True

    if kernel.even and (left is None) != (right is None):
        left, right = _reflect(kernel, left, right, policy)

    if left and right:
        label = STRONG
    elif left:
        label = LEFT
    elif right:
        label = RIGHT
    else:
        label = NONE_EXACT if exact else NONE_FOUND

    return OvershootReport(
        classification=label,
        left_witness=left[0] if left else None,
        left_sum_value=left[1] if left else None,
        right_witness=right[0] if right else None,
        right_sum_value=right[1] if right else None,
        max_gibbs_value=g_max,
        min_gibbs_value=g_min,
        left_sum_bound=left[2] if left else None,
        right_sum_bound=right[2] if right else None,
    )


def _reflect(kernel, left, right, policy):
    """Fill in the missing side of an even kernel by index reflection."""
    if right is not None:
        y = even_reflection_witness(right[0])
        v, b, _ = lattice_sums(kernel, [y], LOWER, policy)
        if v[0] < -b[0]:
            left = (y, float(v[0]), float(b[0]))
    else:
        # lower(y) = upper(-y - 1) for even kernels
        x = -left[0] - 1.0
        if x > 0:
            v, b, _ = lattice_sums(kernel, [x], UPPER, policy)
            if v[0] < -b[0]:
                right = (x, float(v[0]), float(b[0]))
    return left, right


def gibbs_grid(kernel: Kernel, config: ScanConfig = ScanConfig()):
    """Reduced Gibbs function on the scan grid: ``(t, G)`` arrays, ascending t."""
    step = config.grid_step
    count = int(round(config.scan_radius / step))
    xs = np.arange(1, count + 1) * step
    ts = np.concatenate([-xs[::-1], xs])
    values, _ = gibbs_values(kernel, SIGN_JUMP, ts, config.sum_policy)
    return ts, values
