import math

import numpy as np
import pytest
from scipy import linalg

from gibbswilbraham import cardinal, gibbs, kernel_core as kc, registry, sampling
from gibbswilbraham.errors import (
    AccuracyError,
    AdapterError,
    DomainError,
    PreconditionError,
    SymbolNotInvertibleError,
)

CUBIC_C0 = 1.7320508075688776
BSPLINE_C0 = {
    3: 1.414213562373095,
    4: 1.7320508075688776,
    5: 2.2127302652693217,
    6: 2.842170922021622,
    7: 3.7267935311729694,
    8: 4.964732886301681,
    9: 6.723111925648423,
    10: 9.236704811120632,
}


def toeplitz_inverse_centre(samples: dict, size: int = 401) -> float:
    """Centre entry of the solution of the banded Toeplitz system ``T c = e_0``."""
    bw = max(samples)
    ab = np.zeros((2 * bw + 1, size))
    for k in range(-bw, bw + 1):
        ab[bw - k, :] = samples[abs(k)]
    rhs = np.zeros(size)
    rhs[size // 2] = 1.0
    return float(linalg.solve_banded((bw, bw), ab, rhs)[size // 2])


class TestSymbol:
    def test_hat_symbol_is_one(self):
        sym = cardinal.compute_symbol(cardinal.bspline_generator(2), 64)
        np.testing.assert_allclose(sym.dft_values, 1.0, atol=1e-15)
        assert sym.min_modulus == pytest.approx(1.0)

    def test_cubic_nyquist(self):
        sym = cardinal.compute_symbol(cardinal.bspline_generator(4), 128)
        assert sym.dft_values[64].real == pytest.approx(2 / 3 - 2 / 6, abs=1e-15)
        assert sym.dft_values[0].real == pytest.approx(1 / 6 + 2 / 3 + 1 / 6, abs=1e-15)

    def test_inverse_multiquadric_at_zero(self):
        k = np.arange(1, 1_000_001, dtype=float)
        brute = 1 + 2 * math.fsum(1 / (k * k + 1)) + 2 / 1_000_000  # plus integral tail
        sym = cardinal.compute_symbol(registry.make_generator("invmq:1"))
        assert sym.dft_values[0].real == pytest.approx(brute, abs=1e-10)
        assert sym.dft_values[0].real == pytest.approx(math.pi / math.tanh(math.pi), abs=1e-12)

    def test_inverse_multiquadric_minimum(self):
        # alternating sum of 1/(k**2 + 1) is pi / sinh(pi)
        sym = cardinal.compute_symbol(registry.make_generator("invmq:1"))
        assert sym.min_modulus == pytest.approx(math.pi / math.sinh(math.pi), abs=1e-12)

    def test_generic_path_matches_closed_form(self):
        closed = registry.make_generator("invmq:1")
        generic = cardinal.Generator(closed.kernel, closed.integer_samples_decay, closed.spatial_decay, closed.sup_abs)
        a = cardinal.compute_symbol(closed, 256, kc.TruncationPolicy(1e-5)).dft_values
        b = cardinal.compute_symbol(generic, 256, kc.TruncationPolicy(1e-5)).dft_values
        np.testing.assert_allclose(a, b, atol=2e-5)

    @pytest.mark.parametrize("P", [32, 100, 0])
    def test_bad_period(self, P):
        with pytest.raises(DomainError):
            cardinal.compute_symbol(cardinal.bspline_generator(4), P)

    def test_not_invertible(self):
        with pytest.raises(SymbolNotInvertibleError) as info:
            cardinal.compute_symbol(registry.make_generator("invmq:8"))
        assert 0 <= info.value.min_modulus < 1e-8


class TestConstruction:
    @pytest.mark.parametrize("n", [1, 2])
    def test_already_cardinal(self, cardinal_of, n):
        card = cardinal_of(f"bspline:{n}")
        delta = np.zeros(card.period)
        delta[card.period // 2] = 1.0
        np.testing.assert_allclose(card.coefficients, delta, atol=1e-12)

    def test_cubic_centre_against_toeplitz(self, cardinal_of):
        oracle = toeplitz_inverse_centre({0: 2 / 3, 1: 1 / 6})
        assert oracle == pytest.approx(math.sqrt(3), abs=1e-14)
        assert cardinal_of("bspline:4").coefficient(0) == pytest.approx(oracle, abs=1e-12)

    @pytest.mark.parametrize("n", sorted(BSPLINE_C0))
    def test_frozen_centres(self, cardinal_of, n):
        assert cardinal_of(f"bspline:{n}").coefficient(0) == pytest.approx(BSPLINE_C0[n], rel=1e-12)

    @pytest.mark.parametrize("n", [5, 6])
    def test_centres_against_toeplitz(self, cardinal_of, n):
        spline = kc.make_bspline(n)
        samples = {k: float(spline(k)) for k in range(0, n // 2 + 1) if spline(k) > 0}
        assert cardinal_of(f"bspline:{n}").coefficient(0) == pytest.approx(toeplitz_inverse_centre(samples), abs=1e-12)

    @pytest.mark.parametrize("gid", ["bspline:4", "bspline:7", "invmq:1", "gaussian:1"])
    def test_symbol_duality(self, cardinal_of, gid):
        card = cardinal_of(gid)
        dft_c = np.fft.fft(np.fft.ifftshift(card.coefficients))
        np.testing.assert_allclose(dft_c * card.symbol.dft_values, 1.0, atol=1e-12)

    @pytest.mark.parametrize("gid", ["bspline:4", "bspline:9", "invmq:2"])
    def test_even_symmetry(self, cardinal_of, gid):
        card = cardinal_of(gid)
        c = card.coefficients[1:]  # n = -P/2 + 1 .. P/2 - 1
        np.testing.assert_allclose(c, c[::-1], atol=1e-12)
        ts = np.linspace(0.0, 6.0, 25)
        np.testing.assert_allclose(cardinal.eval_cardinal(card, ts), cardinal.eval_cardinal(card, -ts), atol=1e-12)

    @pytest.mark.parametrize("gid", ["bspline:2", "bspline:4", "bspline:10"])
    def test_interpolation(self, cardinal_of, gid):
        assert cardinal_of(gid).diagnostics.interpolation_defect <= 1e-8

    def test_inverse_multiquadric_frozen_defects(self, cardinal_of):
        # the coefficients decay algebraically, so truncation at R = 512 leaves ~1e-6
        diag = cardinal_of("invmq:1").diagnostics
        assert diag.interpolation_defect == pytest.approx(1.1182022077017873e-06, rel=1e-6)
        assert diag.pou_defect == pytest.approx(0.006277534546652697, rel=1e-6)

    def test_gaussian_not_partition(self, cardinal_of):
        diag = cardinal_of("gaussian:1").diagnostics
        assert diag.pou_defect > 1e-4
        assert diag.pou_defect == pytest.approx(2.068713447237469e-4, rel=1e-6)
        assert diag.interpolation_defect < 1e-12

    def test_accuracy_error(self):
        gen = registry.make_generator("invmq:1")
        with pytest.raises(AccuracyError) as info:
            cardinal.cardinal_from_generator(gen, 256, 64, tolerance=1e-12)
        assert info.value.defect > 1e-12

    def test_tolerance_met_after_doubling(self):
        card = cardinal.cardinal_from_generator(cardinal.bspline_generator(4), 64, 30, tolerance=1e-14)
        assert card.period in (64, 128)

    def test_bad_radius(self):
        with pytest.raises(DomainError):
            cardinal.cardinal_from_generator(cardinal.bspline_generator(4), 64, 32)


class TestEvaluation:
    def test_hat(self, cardinal_of):
        assert cardinal.eval_cardinal(cardinal_of("bspline:2"), 0.5) == pytest.approx(0.5, abs=1e-15)

    def test_cubic_at_integers(self, cardinal_of):
        card = cardinal_of("bspline:4")
        assert cardinal.eval_cardinal(card, 0.0) == pytest.approx(1.0, abs=card.diagnostics.interpolation_defect + 1e-15)
        assert abs(cardinal.eval_cardinal(card, 3.0)) <= 1e-14

    def test_high_order_near_sinc(self, cardinal_of):
        value = cardinal.eval_cardinal(cardinal_of("bspline:10"), 0.5)
        assert abs(value - 2 / math.pi) < 0.03

    def test_domain(self, cardinal_of):
        with pytest.raises(DomainError):
            cardinal.eval_cardinal(cardinal_of("bspline:4"), 1025.0)


class TestAdapter:
    def test_hat_identity(self, cardinal_of):
        kernel = cardinal.as_kernel(cardinal_of("bspline:2"))
        ts = np.linspace(-3, 3, 97)
        np.testing.assert_allclose(kernel.evaluate(ts), kc.make_bspline(2).evaluate(ts), atol=1e-15)

    def test_cubic_partition_of_unity(self, cardinal_of):
        kernel = cardinal.as_kernel(cardinal_of("bspline:4"))
        assert kernel.even
        assert kc.partition_of_unity_defect(kernel) < 1e-6

    def test_gaussian_refused_downstream(self, cardinal_of):
        kernel = cardinal.as_kernel(cardinal_of("gaussian:1"))
        with pytest.raises(PreconditionError):
            gibbs.detect_overshoot(kernel)

    def test_defect_limit(self, cardinal_of):
        with pytest.raises(AdapterError):
            cardinal.as_kernel(cardinal_of("invmq:1"), max_interpolation_defect=1e-9)

    def test_kernel_sums_match_brute_force(self, cardinal_of):
        kernel = cardinal.as_kernel(cardinal_of("bspline:4"))
        n = np.arange(0, 80)
        brute = math.fsum(kernel.evaluate(0.3 - n))
        assert kc.one_sided_sum_lower(kernel, 0.3).value == pytest.approx(brute, abs=1e-12)


class TestGeneratorCoefficients:
    def test_constant_hat(self, cardinal_of):
        a = cardinal.generator_coefficients(sampling.constant_signal(1.0), 1.0, cardinal_of("bspline:2"), (-5, 5))
        np.testing.assert_allclose(a, 1.0, atol=1e-15)

    def test_constant_cubic(self, cardinal_of):
        a = cardinal.generator_coefficients(sampling.constant_signal(1.0), 3.0, cardinal_of("bspline:4"), (-5, 5))
        # sum of c is 1 / symbol(0) and symbol(0) = 1/6 + 2/3 + 1/6
        np.testing.assert_allclose(a, 1.0 / (1 / 6 + 2 / 3 + 1 / 6), atol=1e-12)

    def test_sign_against_convolution(self, cardinal_of):
        card = cardinal_of("bspline:4")
        R = card.eval_radius
        samples = np.where(np.arange(-8 - R, 8 + R + 1) >= 0, 1.0, -1.0)
        full = np.convolve(samples, card.truncated_coefficients(), mode="valid")
        a = cardinal.generator_coefficients(sampling.sign_signal(), 1.0, card, (-8, 8))
        np.testing.assert_allclose(a, full, atol=1e-10)

    def test_series_agree(self, cardinal_of):
        card = cardinal_of("bspline:4")
        W = 2.0
        f = sampling.cosine_signal()
        a = cardinal.generator_coefficients(f, W, card, (-20, 20))
        psi = kc.make_bspline(4)
        m = np.arange(-20, 21)
        n = np.arange(-80, 81)
        for x in np.linspace(-2, 2, 9):
            lhs = float(np.sum(a * psi.evaluate(x - m)))
            rhs = float(np.sum(f.evaluate(n / W) * cardinal.eval_cardinal(card, x - n)))
            assert lhs == pytest.approx(rhs, abs=1e-12)

    def test_empty_range(self, cardinal_of):
        with pytest.raises(ValueError):
            cardinal.generator_coefficients(sampling.sign_signal(), 1.0, cardinal_of("bspline:2"), (3, 2))


class TestSweep:
    def test_bspline_family(self):
        rows = cardinal.family_sweep(registry.parse_family("bspline:3..10"))
        gaps = [r.gap_to_sinc for r in rows]
        assert all(a > b for a, b in zip(gaps, gaps[1:]))
        assert all(r.classification == gibbs.STRONG for r in rows)
        assert 2 * gaps[-1] < 0.05
        assert gaps[0] == pytest.approx(0.050833334740676528, rel=1e-9)
        assert gaps[-1] == pytest.approx(0.0062762176753744514, rel=1e-9)

    def test_inverse_multiquadric_family(self):
        rows = cardinal.family_sweep(registry.parse_family("invmq:1,2,4,8"))
        assert [r.classification for r in rows] == ["error:precondition"] * 3 + ["error:symbol-not-invertible"]
        assert rows[0].L_half == pytest.approx(0.57400294133529228, rel=1e-9)
        assert rows[3].L_half is None and rows[3].error

    def test_hat_only(self):
        rows = cardinal.family_sweep([(2, cardinal.bspline_generator(2))])
        assert rows[0].classification == gibbs.NONE_EXACT
        assert rows[0].max_gibbs_value == 1.0

    def test_needs_even(self):
        odd = cardinal.Generator(
            kc.Kernel("odd", lambda t: np.exp(-t * t) * (1 + 0.1 * t), False, kc.CompactSupport(1.0)),
            lambda R: 0.0, lambda R: 0.0, 1.0,
        )
        with pytest.raises(ValueError):
            cardinal.family_sweep([(1, odd)])
