"""Kernels on the real line and their integer-shift lattice sums.

A kernel ``phi`` is evaluated pointwise and summed over integer shifts,

    lower(t) = sum_{n >= 0} phi(t - n)
    upper(t) = sum_{n < 0}  phi(t - n)
    full(t)  = lower(t) + upper(t)

Every sum comes back with a truncation bound. How the bound is produced depends
on the kernel's decay class:

``CompactSupport``
    finite sums, bound 0.
``AbsolutelySummable``
    truncation at the smallest radius whose tail bound meets the target, or an
    exact closed form for the one-sided sums when the kernel supplies one.
``AlternatingEnvelope``
    kernels such as sinc with ``phi(t - n) = (-1)**n * prefactor(t) * envelope(t - n)``.
    One-sided sums converge only conditionally. The head is summed in pairs
    and the tail is estimated with a finite Euler transform. This is rigorous
    when ``|envelope|`` is completely monotone past the origin. Full sums are
    symmetric limits.
``ShiftCombination``
    ``phi = sum_{|n| <= R} c_n g(. - n)`` for a generator kernel ``g``. Lattice
    sums reduce to lattice sums of ``g`` weighted by cumulative coefficients.

Error bounds ignore floating-point rounding.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np
from scipy import special

from .errors import InvalidOrderError, TruncationBudgetError

ArrayFn = Callable[[np.ndarray], np.ndarray]

LOWER = "lower"
UPPER = "upper"

# rows * columns cap for the dense term matrices built below
_CHUNK_ELEMENTS = 2_000_000


@dataclass(frozen=True)
class TruncationPolicy:
    target_abs_error: float = 1e-10
    max_radius: int = 1_000_000

    def __post_init__(self):
        if not self.target_abs_error > 0:
            raise ValueError("target_abs_error must be positive")
        if self.max_radius < 1:
            raise ValueError("max_radius must be >= 1")

    def scaled(self, factor: float) -> "TruncationPolicy":
        return TruncationPolicy(self.target_abs_error * factor, self.max_radius)


DEFAULT_POLICY = TruncationPolicy()


@dataclass(frozen=True)
class LatticeSumResult:
    value: float
    error_bound: float
    terms_used: int
    bound_kind: str = "rigorous"


@dataclass(frozen=True)
class CompactSupport:
    radius: float


@dataclass(frozen=True)
class AbsolutelySummable:
    """``tail_bound(R)`` bounds ``sum_{|n| > R} |phi(t - n)|`` uniformly for t in [0, 1).

    ``lower_sum`` / ``upper_sum`` are optional exact closed forms for the
    one-sided sums (vectorized in t).
    """

    tail_bound: Callable[[int], float]
    lower_sum: Optional[ArrayFn] = None
    upper_sum: Optional[ArrayFn] = None


@dataclass(frozen=True)
class AlternatingEnvelope:
    """``phi(t - n) = (-1)**n * prefactor(t) * envelope(t - n)`` for integer n.

    ``|envelope(x)|`` must be completely monotone in ``|x|`` on each side of the
    origin. ``euler_order`` is the number of Euler-transform levels used for the
    tail estimate.
    """

    prefactor: ArrayFn
    envelope: ArrayFn
    euler_order: int = 4


@dataclass(frozen=True, eq=False)
class ShiftCombination:
    """``phi(t) = sum_{n=-R}^{R} coefficients[n + R] * generator(t - n)``."""

    generator: "Kernel"
    coefficients: np.ndarray
    tail_bound: Callable[[int], float]

    @property
    def radius(self) -> int:
        return (len(self.coefficients) - 1) // 2


Decay = Union[CompactSupport, AbsolutelySummable, AlternatingEnvelope, ShiftCombination]


@dataclass(frozen=True, eq=False)
class Kernel:
    name: str
    evaluate_fn: ArrayFn
    even: bool
    decay: Decay

    def evaluate(self, t):
        x = np.asarray(t, dtype=float)
        y = np.asarray(self.evaluate_fn(x), dtype=float)
        if x.ndim == 0:
            return float(y)
        return y

    __call__ = evaluate

    @property
    def support_radius(self) -> Optional[float]:
        """Radius of the support if it is compact, else None."""
        decay = self.decay
        if isinstance(decay, CompactSupport):
            return float(decay.radius)
        if isinstance(decay, ShiftCombination):
            g = decay.generator.support_radius
            if g is None:
                return None
            nz = np.nonzero(decay.coefficients)[0]
            if len(nz) == 0:
                return 0.0
            return float(np.max(np.abs(nz - decay.radius))) + g
        return None

    def __repr__(self):
        return f"Kernel({self.name!r})"


# ---------------------------------------------------------------------------
# kernel factories
# ---------------------------------------------------------------------------


def make_sinc() -> Kernel:
    """The cardinal sine ``sin(pi x) / (pi x)`` with ``sinc(0) = 1``."""

    def prefactor(t):
        # reduce to t - round(t) (exact) so sin keeps relative accuracy near integers
        m = np.round(t)
        sign = 1.0 - 2.0 * np.mod(m, 2.0)
        return sign * np.sin(np.pi * (t - m)) / np.pi

    def envelope(x):
        return 1.0 / x

    return Kernel("sinc", np.sinc, True, AlternatingEnvelope(prefactor, envelope))


def centered_bspline(n: int, x) -> np.ndarray:
    """Evaluate the centered B-spline ``M_n`` by the two-term recurrence.

    ``M_1`` is the indicator of ``[-1/2, 1/2)``. For ``m >= 2``::

        M_m(x) = ((m/2 + x) M_{m-1}(x + 1/2) + (m/2 - x) M_{m-1}(x - 1/2)) / (m - 1)

    Shifted values are shared between levels, so the cost is O(n**2) array
    operations.
    """
    x = np.asarray(x, dtype=float)
    shifts = [(n - 1) / 2.0 - i for i in range(n)]
    vals = [((x + s) >= -0.5) & ((x + s) < 0.5) for s in shifts]
    vals = [v.astype(float) for v in vals]
    for m in range(2, n + 1):
        new = []
        for i in range(n - m + 1):
            y = x + ((n - m) / 2.0 - i)
            new.append(((m / 2.0 + y) * vals[i] + (m / 2.0 - y) * vals[i + 1]) / (m - 1))
        vals = new
    return vals[0]


def make_bspline(n: int) -> Kernel:
    """Centered cardinal B-spline of order ``n`` (n-fold box convolution)."""
    if int(n) != n or n < 1:
        raise InvalidOrderError(f"B-spline order must be an integer >= 1, got {n!r}")
    n = int(n)
    return Kernel(f"bspline:{n}", lambda x: centered_bspline(n, x), True, CompactSupport(n / 2.0))


def _decreasing_tail(g: Callable[[float], float], integral_from: Callable[[float], float]):
    """Tail bound ``2 * (g(R) + int_R^inf g)`` for g even and decreasing in |x|."""

    def tail_bound(radius):
        r = float(radius)
        return 2.0 * (g(r) + integral_from(r))

    return tail_bound


def make_inverse_multiquadric(c: float = 1.0, scale: float = 1.0, name: Optional[str] = None) -> Kernel:
    """``scale / (x**2 + c**2)`` with digamma closed forms for its one-sided sums.

    sum_{n>=0} 1 / ((n + a)**2 + c**2) = Im digamma(a + i c) / c, valid for any
    real a since the poles of digamma sit on the real axis.
    """
    if not c > 0:
        raise ValueError("shape parameter c must be positive")
    c = float(c)
    scale = float(scale)

    def evaluate(x):
        return scale / (x * x + c * c)

    def lower(t):
        t = np.asarray(t, dtype=float)
        return scale * np.imag(special.digamma(-t + 1j * c)) / c

    def upper(t):
        t = np.asarray(t, dtype=float)
        return scale * np.imag(special.digamma(t + 1.0 + 1j * c)) / c

    tail = _decreasing_tail(
        lambda r: scale / (r * r + c * c),
        lambda r: scale * (math.pi / 2 - math.atan(r / c)) / c,
    )
    return Kernel(name or f"invmq:{c:g}", evaluate, True, AbsolutelySummable(tail, lower, upper))


def make_poisson() -> Kernel:
    """Poisson kernel ``1 / (pi (1 + x**2))``."""
    return make_inverse_multiquadric(1.0, 1.0 / math.pi, name="poisson")


def make_gaussian(alpha: float = 1.0) -> Kernel:
    """``exp(-(x / alpha)**2)``."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    alpha = float(alpha)
    tail = _decreasing_tail(
        lambda r: math.exp(-((r / alpha) ** 2)),
        lambda r: alpha * math.sqrt(math.pi) / 2 * math.erfc(r / alpha),
    )
    return Kernel(f"gaussian:{alpha:g}", lambda x: np.exp(-((x / alpha) ** 2)), True, AbsolutelySummable(tail))


# ---------------------------------------------------------------------------
# lattice sums
# ---------------------------------------------------------------------------


def _radius_for(tail_bound, target, max_radius) -> int:
    """Smallest integer radius with ``tail_bound(radius) <= target``."""
    best = tail_bound(max_radius)
    if best > target:
        raise TruncationBudgetError(
            f"tail bound {best:.3e} at max_radius={max_radius} exceeds target {target:.3e}",
            best_bound=best,
        )
    lo, hi = 0, max_radius
    if tail_bound(0) <= target:
        return 0
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if tail_bound(mid) <= target:
            hi = mid
        else:
            lo = mid
    return hi


def _chunks(n_rows, n_cols):
    step = max(1, _CHUNK_ELEMENTS // max(1, n_cols))
    for start in range(0, n_rows, step):
        yield slice(start, min(n_rows, start + step))


def _compact_sums(kernel, ts, side):
    radius = kernel.decay.radius
    width = int(math.floor(2 * radius)) + 2
    offsets = np.arange(width)
    values = np.empty(len(ts))
    terms = np.empty(len(ts), dtype=np.int64)
    for sl in _chunks(len(ts), width):
        t = ts[sl]
        n = np.ceil(t - radius)[:, None] + offsets[None, :]
        mask = (n >= 0) if side == LOWER else (n < 0)
        mask &= np.abs(t[:, None] - n) <= radius
        vals = np.where(mask, kernel.evaluate_fn(t[:, None] - n), 0.0)
        values[sl] = vals.sum(axis=1)
        terms[sl] = mask.sum(axis=1)
    return values, np.zeros(len(ts)), terms


def _summable_sums(kernel, ts, side, policy):
    decay = kernel.decay
    closed = decay.lower_sum if side == LOWER else decay.upper_sum
    if closed is not None:
        return np.asarray(closed(ts), dtype=float), np.zeros(len(ts)), np.ones(len(ts), dtype=np.int64)
    radius = _radius_for(decay.tail_bound, policy.target_abs_error, policy.max_radius)
    bound = decay.tail_bound(radius)
    j = np.arange(-radius, radius + 1, dtype=float)
    values = np.empty(len(ts))
    terms = np.empty(len(ts), dtype=np.int64)
    for sl in _chunks(len(ts), len(j)):
        t = ts[sl]
        m = np.floor(t)
        t0 = t - m
        n = j[None, :] + m[:, None]
        mask = (n >= 0) if side == LOWER else (n < 0)
        vals = np.where(mask, kernel.evaluate_fn(t0[:, None] - j[None, :]), 0.0)
        values[sl] = vals.sum(axis=1)
        terms[sl] = mask.sum(axis=1)
    return values, np.full(len(ts), bound), terms


def _euler_tail(b: np.ndarray, order: int):
    """Estimate ``A = sum_j (-1)**j b[:, j]`` from its first ``order + 1`` columns.

    For completely monotone b, ``A = sum_{k<J} D^k b_0 / 2**(k+1) + r`` with
    ``0 <= r <= D^J b_0 / 2**J`` where D is the backward-difference
    ``b_k - b_{k+1}``. The midpoint of that interval is returned with half its
    width as the bound.
    """
    est = np.zeros(b.shape[0])
    diff = b
    for k in range(order):
        est += diff[:, 0] / 2.0 ** (k + 1)
        diff = diff[:, :-1] - diff[:, 1:]
    last = np.abs(diff[:, 0]) / 2.0 ** (order + 1)
    return est + last, last


def _alternating_sums(kernel, ts, side, policy):
    decay = kernel.decay
    order = decay.euler_order
    target = policy.target_abs_error
    values = np.empty(len(ts))
    bounds = np.empty(len(ts))
    terms = np.empty(len(ts), dtype=np.int64)
    for idx, t in enumerate(ts):
        # k indexes terms in the order they are added: lower uses n = k,
        # upper uses n = -(k + 1). Terms with |t - n| < 1 go in the head,
        # where the kernel is evaluated directly.
        if side == LOWER:
            k0 = max(0, math.floor(t) + 2)

            def point(k):
                return t - k

            def parity(k):
                return np.where(k % 2 == 0, 1.0, -1.0)
        else:
            k0 = max(0, math.floor(-t) + 1)

            def point(k):
                return t + k + 1

            def parity(k):
                return np.where(k % 2 == 0, -1.0, 1.0)

        head_k = np.arange(k0)
        head = float(np.sum(kernel.evaluate_fn(point(head_k)))) if k0 else 0.0
        pref = float(decay.prefactor(np.asarray(t)))
        if pref == 0.0:
            values[idx], bounds[idx], terms[idx] = head, 0.0, k0
            continue
        n_terms = 32
        while True:
            k = k0 + np.arange(n_terms + order + 1)
            env = np.asarray(decay.envelope(point(k)), dtype=float)
            series = parity(k) * pref * env
            paired = series[:n_terms:2] + series[1:n_terms:2]
            partial = float(np.sum(paired))
            mags = np.abs(env[n_terms:])[None, :]
            est, err = _euler_tail(mags, order)
            bound = abs(pref) * float(err[0])
            if bound <= target or n_terms >= policy.max_radius:
                break
            n_terms *= 2
        if bound > target:
            raise TruncationBudgetError(
                f"alternating tail bound {bound:.3e} exceeds target {target:.3e}", best_bound=bound
            )
        sign = np.sign(series[n_terms])
        values[idx] = head + partial + sign * abs(pref) * float(est[0])
        bounds[idx] = bound
        terms[idx] = k0 + n_terms + order + 1
    return values, bounds, terms


def _shift_combination_sums(kernel, ts, side, policy):
    decay = kernel.decay
    g = decay.generator
    c = np.asarray(decay.coefficients, dtype=float)
    radius = decay.radius
    cum = np.cumsum(c)
    total = float(cum[-1])
    m_all = np.arange(-radius, radius, dtype=float)
    weights_all = cum[:-1] if side == LOWER else total - cum[:-1]
    w_max = float(np.max(np.abs(weights_all))) if len(weights_all) else 0.0

    target = policy.target_abs_error
    window = None
    window_bound = 0.0
    g_radius = g.support_radius
    if g_radius is not None:
        window = g_radius
    elif isinstance(g.decay, AbsolutelySummable) and w_max > 0:
        try:
            r = _radius_for(g.decay.tail_bound, target / (2 * w_max), policy.max_radius)
        except TruncationBudgetError:
            r = None
        if r is not None and r < 2 * radius:
            window = r + 1
            window_bound = w_max * g.decay.tail_bound(r)

    if window is None:
        cols = len(m_all)
    else:
        cols = int(math.floor(2 * window)) + 3
    values = np.zeros(len(ts))
    for sl in _chunks(len(ts), cols):
        t = ts[sl]
        if window is None:
            m = np.broadcast_to(m_all, (len(t), cols))
            w = np.broadcast_to(weights_all, (len(t), cols))
            vals = g.evaluate_fn(t[:, None] - m) * w
        else:
            m = np.floor(t - window)[:, None] + np.arange(cols)[None, :]
            inside = (m >= -radius) & (m <= radius - 1)
            idx = np.clip(m + radius, 0, 2 * radius - 1).astype(np.int64)
            w = np.where(inside, weights_all[idx] if len(weights_all) else 0.0, 0.0)
            vals = np.where(w != 0.0, g.evaluate_fn(t[:, None] - m) * w, 0.0)
        values[sl] = vals.sum(axis=1)

    bounds = np.full(len(ts), window_bound)
    terms = np.full(len(ts), cols, dtype=np.int64)
    if total != 0.0:
        sub_policy = policy.scaled(0.5 / abs(total)) if window_bound else policy.scaled(1.0 / abs(total))
        if side == LOWER:
            gv, gb, gt = lattice_sums(g, ts - radius, LOWER, sub_policy)
        else:
            gv, gb, gt = lattice_sums(g, ts + radius, UPPER, sub_policy)
        values = values + total * gv
        bounds = bounds + abs(total) * gb
        terms = terms + gt
    return values, bounds, terms


def lattice_sums(kernel: Kernel, ts, side: str, policy: TruncationPolicy = DEFAULT_POLICY):
    """Vectorized one-sided lattice sums.

    Returns ``(values, error_bounds, terms_used)`` arrays matching ``ts``.
    ``side`` is ``"lower"`` (n >= 0) or ``"upper"`` (n < 0).
    """
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    if not np.all(np.isfinite(ts)):
        raise ValueError("lattice sums need finite t")
    if side not in (LOWER, UPPER):
        raise ValueError(f"side must be 'lower' or 'upper', got {side!r}")
    decay = kernel.decay
    if isinstance(decay, CompactSupport):
        return _compact_sums(kernel, ts, side)
    if isinstance(decay, AbsolutelySummable):
        return _summable_sums(kernel, ts, side, policy)
    if isinstance(decay, AlternatingEnvelope):
        return _alternating_sums(kernel, ts, side, policy)
    if isinstance(decay, ShiftCombination):
        return _shift_combination_sums(kernel, ts, side, policy)
    raise TypeError(f"unknown decay class {type(decay).__name__}")


def _scalar(kernel, t, side, policy):
    v, b, n = lattice_sums(kernel, [t], side, policy)
    return LatticeSumResult(float(v[0]), float(b[0]), int(n[0]))


def one_sided_sum_lower(kernel: Kernel, t: float, policy: TruncationPolicy = DEFAULT_POLICY) -> LatticeSumResult:
    """``sum_{n >= 0} phi(t - n)``."""
    return _scalar(kernel, t, LOWER, policy)


def one_sided_sum_upper(kernel: Kernel, t: float, policy: TruncationPolicy = DEFAULT_POLICY) -> LatticeSumResult:
    """``sum_{n < 0} phi(t - n)``."""
    return _scalar(kernel, t, UPPER, policy)


def full_lattice_sums(kernel: Kernel, ts, policy: TruncationPolicy = DEFAULT_POLICY):
    """Vectorized ``sum_n phi(t - n)``; each side gets half the error budget."""
    half = policy.scaled(0.5)
    lv, lb, ln = lattice_sums(kernel, ts, LOWER, half)
    uv, ub, un = lattice_sums(kernel, ts, UPPER, half)
    return lv + uv, lb + ub, ln + un


def full_lattice_sum(kernel: Kernel, t: float, policy: TruncationPolicy = DEFAULT_POLICY) -> LatticeSumResult:
    """Two-sided lattice sum (symmetric limit for alternating kernels)."""
    v, b, n = full_lattice_sums(kernel, [t], policy)
    return LatticeSumResult(float(v[0]), float(b[0]), int(n[0]))


POU_GRID = np.arange(64) / 64.0


def partition_of_unity_defect(kernel: Kernel, grid=None, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """``max_t |sum_n phi(t - n) - 1|`` over a grid in [0, 1)."""
    grid = POU_GRID if grid is None else np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValueError("grid must be nonempty")
    values, _, _ = full_lattice_sums(kernel, grid, policy)
    return float(np.max(np.abs(values - 1.0)))
