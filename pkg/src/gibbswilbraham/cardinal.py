"""Cardinal functions built from generators by symbol inversion.

Given a generator ``psi`` whose integer samples are summable, the cardinal
function is represented as a shift combination

    L(t) = sum_{|n| <= R} c_n psi(t - n),

where ``c`` is the inverse of the sample sequence ``psi(k)`` under discrete
convolution. By Poisson summation the periodized Fourier transform of ``psi``
is the Fourier series of its integer samples (the *symbol*), so ``c`` is
obtained as the inverse DFT of ``1 / symbol`` on a length-P grid. No Fourier
transform of ``psi`` is ever needed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import gibbs
from .errors import (
    AccuracyError,
    AdapterError,
    DomainError,
    GibbsWilbrahamError,
    PreconditionError,
    SymbolNotInvertibleError,
)
from .kernel_core import (
    DEFAULT_POLICY,
    Kernel,
    ShiftCombination,
    TruncationPolicy,
    _radius_for,
    make_bspline,
    make_gaussian,
    make_inverse_multiquadric,
    partition_of_unity_defect,
)

DEFAULT_PERIOD = 4096
DEFAULT_EVAL_RADIUS = 512
SYMBOL_FLOOR = 1e-8
ADAPTER_DEFECT_TOLERANCE = 1e-4


@dataclass(frozen=True, eq=False)
class Generator:
    """A generating function together with the decay data the construction needs.

    ``integer_samples_decay(R)`` bounds ``sum_{|k| > R} |psi(k)|``.
    ``spatial_decay(R)`` bounds ``sum_{|n| > R} |psi(t - n)|`` for t in [0, 1).
    ``periodize(P)``, when given, returns the exact P-periodized integer samples
    ``sum_m psi(r + m P)`` for r = 0..P-1.
    """

    kernel: Kernel
    integer_samples_decay: Callable[[int], float]
    spatial_decay: Callable[[int], float]
    sup_abs: float
    periodize: Optional[Callable[[int], np.ndarray]] = None

    @property
    def name(self) -> str:
        return self.kernel.name

    @property
    def even(self) -> bool:
        return self.kernel.even

    def evaluate(self, t):
        return self.kernel.evaluate(t)


def bspline_generator(n: int) -> Generator:
    kernel = make_bspline(n)
    half = n / 2.0

    def decay(radius):
        return 0.0 if radius >= half else 1.0

    return Generator(kernel, decay, decay, 1.0)


def inverse_multiquadric_generator(c: float = 1.0, scale: float = 1.0, name: Optional[str] = None) -> Generator:
    kernel = make_inverse_multiquadric(c, scale, name)

    def integer_decay(radius):
        return 2.0 * scale * (math.pi / 2 - math.atan(radius / c)) / c

    def periodize(period):
        # sum_m 1/((r + mP)^2 + c^2) = pi sinh(a) / (P c (cosh(a) - cos(b)))
        a = 2 * math.pi * c / period
        b = 2 * math.pi * np.arange(period) / period
        denom = 2 * math.sinh(a / 2) ** 2 + 2 * np.sin(b / 2) ** 2
        return scale * math.pi * math.sinh(a) / (period * c * denom)

    return Generator(kernel, integer_decay, kernel.decay.tail_bound, scale / (c * c), periodize)


def poisson_generator() -> Generator:
    return inverse_multiquadric_generator(1.0, 1.0 / math.pi, name="poisson")


def gaussian_generator(alpha: float = 1.0) -> Generator:
    kernel = make_gaussian(alpha)

    def integer_decay(radius):
        return alpha * math.sqrt(math.pi) * math.erfc(radius / alpha)

    return Generator(kernel, integer_decay, kernel.decay.tail_bound, 1.0)


@dataclass(frozen=True, eq=False)
class SymbolData:
    period: int
    dft_values: np.ndarray
    min_modulus: float


@dataclass(frozen=True)
class CardinalDiagnostics:
    interpolation_defect: float
    pou_defect: float
    symbol_min: float

    def to_dict(self):
        return {
            "interpolation_defect": self.interpolation_defect,
            "pou_defect": self.pou_defect,
            "symbol_min": self.symbol_min,
        }


@dataclass(frozen=True, eq=False)
class CardinalFunction:
    generator: Generator
    period: int
    coefficients: np.ndarray  # c_n for n = -P/2 .. P/2 - 1
    eval_radius: int
    diagnostics: CardinalDiagnostics
    symbol: SymbolData = field(repr=False)

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.period // 2, self.period // 2)

    def coefficient(self, n: int) -> float:
        return float(self.coefficients[n + self.period // 2])

    def truncated_coefficients(self) -> np.ndarray:
        """``c_n`` for ``|n| <= eval_radius``."""
        mid = self.period // 2
        return self.coefficients[mid - self.eval_radius: mid + self.eval_radius + 1]

    def series(self, t):
        return _shift_series(self.generator.kernel, self.truncated_coefficients(), t)


def _is_power_of_two(p):
    return p >= 1 and (p & (p - 1)) == 0


def _shift_series(g: Kernel, c: np.ndarray, t):
    """``sum_{|n| <= R} c_n g(t - n)`` with c stored for n = -R..R."""
    x = np.asarray(t, dtype=float)
    flat = np.atleast_1d(x).ravel()
    radius = (len(c) - 1) // 2
    rho = g.support_radius
    out = np.empty(len(flat))
    if rho is not None:
        width = int(math.floor(2 * rho)) + 2
        step = max(1, 1_000_000 // width)
        for s in range(0, len(flat), step):
            xs = flat[s: s + step]
            n = np.ceil(xs - rho)[:, None] + np.arange(width)[None, :]
            inside = np.abs(n) <= radius
            idx = np.clip(n + radius, 0, 2 * radius).astype(np.int64)
            vals = np.where(inside, c[idx] * g.evaluate_fn(xs[:, None] - n), 0.0)
            out[s: s + step] = vals.sum(axis=1)
    else:
        n = np.arange(-radius, radius + 1, dtype=float)
        step = max(1, 1_000_000 // len(n))
        for s in range(0, len(flat), step):
            xs = flat[s: s + step]
            out[s: s + step] = g.evaluate_fn(xs[:, None] - n[None, :]) @ c
    if x.ndim == 0:
        return float(out[0])
    return out.reshape(x.shape)


def _shift_tail_bound(generator: Generator, c: np.ndarray):
    """Bound ``sum_{|j| > J} |L(t - j)|`` for t in [0, 1).

    Split the coefficients at |n| <= K: the inner part only sees generator
    shifts beyond J - K, the outer part is bounded by the coefficient tail times
    the generator's full lattice l1 norm.
    """
    radius = (len(c) - 1) // 2
    a = np.abs(c)
    l1 = float(a.sum())
    # tail[K] = sum_{K < |n| <= R} |c_n|
    sym = a[radius:].copy()
    sym[1:] += a[:radius][::-1]
    tails = np.concatenate([np.cumsum(sym[::-1])[::-1][1:], [0.0]])
    g_sum = generator.sup_abs + generator.spatial_decay(0)
    rho = generator.kernel.support_radius

    def ctail(k):
        return float(tails[k]) if k < len(tails) else 0.0

    def bound(j):
        j = int(j)
        candidates = [j // 2]
        if rho is not None:
            candidates.append(max(0, j - int(math.ceil(rho))))
        return min(l1 * generator.spatial_decay(j - k) + ctail(k) * g_sum for k in candidates)

    return bound


def _kernel_from_coefficients(generator: Generator, c: np.ndarray, name: str) -> Kernel:
    g = generator.kernel
    decay = ShiftCombination(g, c, _shift_tail_bound(generator, c))
    return Kernel(name, lambda t: _shift_series(g, c, t), generator.even, decay)


def compute_symbol(
    generator: Generator,
    P: int = DEFAULT_PERIOD,
    policy: TruncationPolicy = DEFAULT_POLICY,
    symbol_floor: float = SYMBOL_FLOOR,
) -> SymbolData:
    """DFT of the integer samples of ``generator`` at ``xi_j = j / P``."""
    if not _is_power_of_two(P) or P < 64:
        raise DomainError(f"P must be a power of two >= 64, got {P}")
    if generator.periodize is not None:
        samples = np.asarray(generator.periodize(P), dtype=float)
    else:
        K = _radius_for(generator.integer_samples_decay, policy.target_abs_error, policy.max_radius)
        k = np.arange(-K, K + 1)
        samples = np.bincount(k % P, weights=generator.kernel.evaluate_fn(k.astype(float)), minlength=P)
    dft = np.fft.fft(samples)
    min_modulus = float(np.min(np.abs(dft)))
    if min_modulus < symbol_floor:
        raise SymbolNotInvertibleError(
            f"symbol of {generator.name} has min modulus {min_modulus:.3e} < floor {symbol_floor:.1e}",
            min_modulus=min_modulus,
        )
    return SymbolData(P, dft, min_modulus)


def _construct(generator, P, R, policy, symbol_floor):
    if not 1 <= R < P // 2:
        raise DomainError(f"eval_radius must satisfy 1 <= R < P/2, got R={R}, P={P}")
    symbol = compute_symbol(generator, P, policy, symbol_floor)
    raw = np.fft.ifft(1.0 / symbol.dft_values).real
    coefficients = np.fft.fftshift(raw)
    mid = P // 2
    c_trunc = coefficients[mid - R: mid + R + 1]
    kernel = _kernel_from_coefficients(generator, c_trunc, f"cardinal[{generator.name}]")

    ks = np.arange(-(P // 4), P // 4 + 1, dtype=float)
    residual = _shift_series(generator.kernel, c_trunc, ks)
    residual[P // 4] -= 1.0
    interpolation_defect = float(np.max(np.abs(residual)))
    pou_defect = partition_of_unity_defect(kernel, policy=policy)
    diagnostics = CardinalDiagnostics(interpolation_defect, pou_defect, symbol.min_modulus)
    return CardinalFunction(generator, P, coefficients, R, diagnostics, symbol)


def cardinal_from_generator(
    generator: Generator,
    P: int = DEFAULT_PERIOD,
    eval_radius: int = DEFAULT_EVAL_RADIUS,
    policy: TruncationPolicy = DEFAULT_POLICY,
    tolerance: Optional[float] = None,
    symbol_floor: float = SYMBOL_FLOOR,
) -> CardinalFunction:
    """Construct ``L_psi`` with diagnostics.

    If ``tolerance`` is given and the interpolation defect exceeds it, P is
    doubled once before an ``AccuracyError`` is raised.
    """
    card = _construct(generator, P, eval_radius, policy, symbol_floor)
    if tolerance is None or card.diagnostics.interpolation_defect <= tolerance:
        return card
    card = _construct(generator, 2 * P, eval_radius, policy, symbol_floor)
    if card.diagnostics.interpolation_defect > tolerance:
        raise AccuracyError(
            f"interpolation defect {card.diagnostics.interpolation_defect:.3e} > {tolerance:.1e} "
            f"at P={2 * P}, R={eval_radius}; increase P or R",
            defect=card.diagnostics.interpolation_defect,
        )
    return card


def eval_cardinal(card: CardinalFunction, t):
    """Evaluate ``L`` inside its accuracy region ``|t| <= P/4``."""
    x = np.asarray(t, dtype=float)
    if np.any(np.abs(x) > card.period / 4):
        raise DomainError(f"t outside the accuracy region |t| <= {card.period // 4}")
    return card.series(t)


def as_kernel(card: CardinalFunction, max_interpolation_defect: float = ADAPTER_DEFECT_TOLERANCE) -> Kernel:
    """Expose a cardinal function as a lattice-summable kernel."""
    d = card.diagnostics
    if not d.symbol_min > 0 or not d.interpolation_defect <= max_interpolation_defect:
        raise AdapterError(
            f"cardinal function for {card.generator.name} has interpolation defect "
            f"{d.interpolation_defect:.3e} (limit {max_interpolation_defect:.1e})"
        )
    return _kernel_from_coefficients(card.generator, card.truncated_coefficients(), f"cardinal[{card.generator.name}]")


def generator_coefficients(f, W: float, card: CardinalFunction, n_range: tuple[int, int]) -> np.ndarray:
    """Coefficients ``a_m`` with ``sum_m a_m psi(W t - m) = sum_n f(n/W) L(W t - n)``.

    ``a`` is the discrete convolution of the samples ``f(n/W)`` with ``c``,
    returned for ``m = lo..hi`` inclusive.
    """
    lo, hi = n_range
    if hi < lo:
        raise ValueError("empty n_range")
    c = card.truncated_coefficients()
    R = card.eval_radius
    k = np.arange(-R, R + 1)
    m = np.arange(lo, hi + 1)
    samples = f.evaluate((m[:, None] - k[None, :]) / W)
    return samples @ c


@dataclass
class SweepRow:
    parameter: float
    L_half: Optional[float]
    gap_to_sinc: Optional[float]
    classification: str
    max_gibbs_value: Optional[float]
    error: Optional[str] = None

    def as_record(self):
        return [self.parameter, self.L_half, self.gap_to_sinc, self.classification, self.max_gibbs_value]


SWEEP_HEADER = ["parameter", "L_half", "gap_to_sinc", "classification", "max_gibbs_value"]


def family_sweep(
    family: Sequence[tuple[float, Generator]],
    P: int = DEFAULT_PERIOD,
    R: int = DEFAULT_EVAL_RADIUS,
    policy: TruncationPolicy = DEFAULT_POLICY,
    scan: Optional["gibbs.ScanConfig"] = None,
) -> list[SweepRow]:
    """Build ``L`` for each generator and classify its overshoot.

    Failures are recorded in the row (classification ``error:<kind>``) and the
    sweep continues.
    """
    if any(not gen.even for _, gen in family):
        raise ValueError("family_sweep needs even generators")
    scan = scan or gibbs.ScanConfig(sum_policy=policy)
    rows = []
    for parameter, gen in family:
        row = SweepRow(parameter, None, None, "", None)
        try:
            card = cardinal_from_generator(gen, P, R, policy)
            row.L_half = eval_cardinal(card, 0.5)
            row.gap_to_sinc = abs(row.L_half - 2 / math.pi)
            report = gibbs.detect_overshoot(as_kernel(card), scan)
            row.classification = report.classification
            row.max_gibbs_value = report.max_gibbs_value
        except SymbolNotInvertibleError as exc:
            row.classification, row.error = "error:symbol-not-invertible", str(exc)
        except PreconditionError as exc:
            row.classification, row.error = "error:precondition", str(exc)
        except GibbsWilbrahamError as exc:
            row.classification, row.error = f"error:{type(exc).__name__}", str(exc)
        rows.append(row)
    return rows
