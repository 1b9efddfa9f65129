"""Built-in kernel and generator identifiers.

Kernels: ``sinc``, ``bspline:n``, ``invmq:c``, ``poisson``, ``gaussian:a``,
``gaussian-cardinal:a``, ``bspline-cardinal:n``.
Generators: ``bspline:n``, ``invmq:c``, ``poisson``, ``gaussian:a``.
Families (for sweeps): ``bspline:3..10``, ``bspline:3,5,7``, ``invmq:1,2,4,8``.
"""
from __future__ import annotations

from . import cardinal
from .errors import GibbsWilbrahamError
from .kernel_core import (
    DEFAULT_POLICY,
    Kernel,
    TruncationPolicy,
    make_bspline,
    make_gaussian,
    make_inverse_multiquadric,
    make_poisson,
    make_sinc,
)

KERNEL_IDS = ("sinc", "bspline:n", "invmq:c", "poisson", "gaussian:a", "gaussian-cardinal:a", "bspline-cardinal:n")
GENERATOR_IDS = ("bspline:n", "invmq:c", "poisson", "gaussian:a")


class UsageError(GibbsWilbrahamError, ValueError):
    pass


def _split(identifier: str):
    name, _, param = identifier.strip().partition(":")
    return name, param


def _int_param(identifier, param):
    try:
        value = int(param)
    except ValueError:
        raise UsageError(f"{identifier!r}: expected an integer parameter") from None
    if value < 1:
        raise UsageError(f"{identifier!r}: order must be >= 1")
    return value


def _float_param(identifier, param):
    try:
        value = float(param)
    except ValueError:
        raise UsageError(f"{identifier!r}: expected a numeric parameter") from None
    if not value > 0:
        raise UsageError(f"{identifier!r}: parameter must be positive")
    return value


def _unknown(identifier, known):
    return UsageError(f"unknown identifier {identifier!r}; available: {', '.join(known)}")


def make_generator(identifier: str) -> cardinal.Generator:
    name, param = _split(identifier)
    if name == "bspline":
        return cardinal.bspline_generator(_int_param(identifier, param))
    if name == "invmq":
        return cardinal.inverse_multiquadric_generator(_float_param(identifier, param))
    if name == "poisson" and not param:
        return cardinal.poisson_generator()
    if name == "gaussian":
        return cardinal.gaussian_generator(_float_param(identifier, param))
    raise _unknown(identifier, GENERATOR_IDS)


def make_kernel(
    identifier: str,
    P: int = cardinal.DEFAULT_PERIOD,
    R: int = cardinal.DEFAULT_EVAL_RADIUS,
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> Kernel:
    name, param = _split(identifier)
    if name == "sinc" and not param:
        return make_sinc()
    if name == "bspline":
        return make_bspline(_int_param(identifier, param))
    if name == "invmq":
        return make_inverse_multiquadric(_float_param(identifier, param))
    if name == "poisson" and not param:
        return make_poisson()
    if name == "gaussian":
        return make_gaussian(_float_param(identifier, param))
    if name == "gaussian-cardinal":
        gen = cardinal.gaussian_generator(_float_param(identifier, param))
        return cardinal.as_kernel(cardinal.cardinal_from_generator(gen, P, R, policy))
    if name == "bspline-cardinal":
        gen = cardinal.bspline_generator(_int_param(identifier, param))
        return cardinal.as_kernel(cardinal.cardinal_from_generator(gen, P, R, policy))
    raise _unknown(identifier, KERNEL_IDS)


def parse_family(text: str) -> list[tuple[float, cardinal.Generator]]:
    name, param = _split(text)
    if not param:
        raise UsageError(f"family {text!r} needs parameters, e.g. bspline:3..10 or invmq:1,2,4")
    if ".." in param:
        lo, _, hi = param.partition("..")
        try:
            values = list(range(int(lo), int(hi) + 1))
        except ValueError:
            raise UsageError(f"bad range in family {text!r}") from None
    else:
        try:
            values = [float(v) for v in param.split(",")]
        except ValueError:
            raise UsageError(f"bad parameter list in family {text!r}") from None
    if not values:
        raise UsageError(f"family {text!r} is empty")
    if name == "bspline":
        return [(int(v), make_generator(f"bspline:{int(v)}")) for v in values]
    if name == "invmq":
        return [(float(v), make_generator(f"invmq:{v:g}")) for v in values]
    if name == "gaussian":
        return [(float(v), make_generator(f"gaussian:{v:g}")) for v in values]
    raise UsageError(f"unknown family {name!r}; available: bspline, invmq, gaussian")
