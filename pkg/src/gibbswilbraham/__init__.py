"""Generalized sampling series, Gibbs-Wilbraham functions and cardinal interpolants."""
from .cardinal import (
    CardinalFunction,
    Generator,
    as_kernel,
    cardinal_from_generator,
    compute_symbol,
    eval_cardinal,
    family_sweep,
    generator_coefficients,
)
from .gibbs import (
    JumpSpec,
    OvershootReport,
    ScanConfig,
    detect_overshoot,
    even_reflection_witness,
    fourier_gibbs_constant,
    gibbs_function,
    half_point_identity_check,
    normalize_jump,
    reduced_gibbs,
)
from .kernel_core import (
    Kernel,
    LatticeSumResult,
    TruncationPolicy,
    full_lattice_sum,
    make_bspline,
    make_sinc,
    one_sided_sum_lower,
    one_sided_sum_upper,
    partition_of_unity_defect,
)
from .sampling import (
    SampledSignal,
    SeriesEvalConfig,
    continuity_convergence_check,
    convergence_probe,
    rescaled_series,
    sampling_series,
)

__version__ = "0.1.0"
