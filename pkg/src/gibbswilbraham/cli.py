"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 partition-of-unity precondition failed,
3 numerical failure.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import cardinal, gibbs, registry, sampling, serialize
from .errors import (
    AccuracyError,
    AdapterError,
    DegenerateJumpError,
    DomainError,
    InvalidOrderError,
    PreconditionError,
    SymbolNotInvertibleError,
    TruncationBudgetError,
)
from .kernel_core import TruncationPolicy

EXIT_OK, EXIT_USAGE, EXIT_PRECONDITION, EXIT_NUMERICAL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise registry.UsageError(message)


def _number(text: str) -> float:
    """Parse ``0.25`` or a fraction such as ``1/64``."""
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer list: {text!r}") from None


def _number_list(text: str) -> list[float]:
    return [_number(v) for v in text.split(",") if v]


def _common(parser):
    parser.add_argument("-P", "--P", dest="P", type=int, default=cardinal.DEFAULT_PERIOD, help="DFT period (power of two)")
    parser.add_argument("--R", dest="R", type=int, default=cardinal.DEFAULT_EVAL_RADIUS, help="coefficient truncation radius")
    parser.add_argument("--tolerance", type=_number, default=1e-10, help="target absolute error of lattice sums")
    parser.add_argument("--max-radius", "--max_radius", dest="max_radius", type=int, default=1_000_000)
    parser.add_argument("-o", "--output", type=Path, default=None, help="output file (default: stdout)")


def _scan_options(parser):
    parser.add_argument("--scan-radius", "--scan_radius", dest="scan_radius", type=_number, default=8.0)
    parser.add_argument("--grid-step", "--grid_step", dest="grid_step", type=_number, default=1.0 / 64)
    parser.add_argument("--refine-tolerance", "--refine_tolerance", dest="refine_tolerance", type=_number, default=1e-9)
    parser.add_argument("--pou-tolerance", "--pou_tolerance", dest="pou_tolerance", type=_number, default=gibbs.POU_TOLERANCE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gibbswil", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("scan", help="detect and classify overshoot for a kernel")
    p.add_argument("--kernel", required=True, help=", ".join(registry.KERNEL_IDS))
    p.add_argument("--format", choices=("json", "csv"), default="json")
    _common(p)
    _scan_options(p)

    p = sub.add_parser("cardinal", help="construct a cardinal function from a generator")
    p.add_argument("--generator", required=True, help=", ".join(registry.GENERATOR_IDS))
    p.add_argument("--diagnostics", type=Path, default=None, help="diagnostics JSON path (default: stderr)")
    _common(p)

    p = sub.add_parser("converge", help="convergence probes of the sampling series")
    p.add_argument("--kernel", required=True)
    p.add_argument("--signal", default="sgn", help="sgn, sgn-ramp, cos, linear, zero, const:c")
    p.add_argument("--mode", choices=("rescaled", "continuity"), default="rescaled")
    p.add_argument("--N", dest="N", type=_int_list, default=[4, 16, 64, 256])
    p.add_argument("--W", dest="W", type=_number_list, default=[2.0, 8.0, 32.0, 128.0])
    p.add_argument("--t", dest="t", type=_number, default=0.3, help="continuity point for --mode continuity")
    _common(p)

    p = sub.add_parser("sweep", help="cardinal-function family sweep")
    p.add_argument("--family", required=True, help="e.g. bspline:3..10 or invmq:1,2,4,8")
    _common(p)
    _scan_options(p)

    p = sub.add_parser("gibbs-constant", help="2 * int_0^xi sinc")
    p.add_argument("--xi", type=_number, default=1.0)
    p.add_argument("-o", "--output", type=Path, default=None)
    return parser


def _policy(args) -> TruncationPolicy:
    return TruncationPolicy(args.tolerance, args.max_radius)


def _scan_config(args) -> gibbs.ScanConfig:
    return gibbs.ScanConfig(args.scan_radius, args.grid_step, args.refine_tolerance, _policy(args), args.pou_tolerance)


def _emit(text: str, path, stream):
    if path is None:
        stream.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="\n")


def _signal(text: str) -> sampling.SampledSignal:
    name, _, param = text.partition(":")
    factories = {
        "sgn": sampling.sign_signal,
        "sgn-ramp": sampling.ramp_step_signal,
        "cos": sampling.cosine_signal,
        "linear": sampling.linear_signal,
        "zero": lambda: sampling.constant_signal(0.0),
    }
    if name == "const" and param:
        return sampling.constant_signal(_number(param))
    if name in factories and not param:
        return factories[name]()
    raise registry.UsageError(f"unknown signal {text!r}; available: sgn, sgn-ramp, cos, linear, zero, const:c")


def cmd_scan(args, out) -> int:
    policy = _policy(args)
    kernel = registry.make_kernel(args.kernel, args.P, args.R, policy)
    config = _scan_config(args)
    report = gibbs.detect_overshoot(kernel, config)
    if args.format == "json":
        _emit(serialize.to_json(report.to_dict()), args.output, out)
    else:
        ts, values = gibbs.gibbs_grid(kernel, config)
        _emit(serialize.to_csv(["t", "G"], zip(ts, values)), args.output, out)
    return EXIT_OK


def cmd_cardinal(args, out, err) -> int:
    gen = registry.make_generator(args.generator)
    card = cardinal.cardinal_from_generator(gen, args.P, args.R, _policy(args))
    _emit(serialize.to_csv(["n", "c_n"], zip(card.indices.tolist(), card.coefficients)), args.output, out)
    _emit(serialize.to_json(card.diagnostics.to_dict()), args.diagnostics, err)
    return EXIT_OK


def cmd_converge(args, out) -> int:
    policy = _policy(args)
    kernel = registry.make_kernel(args.kernel, args.P, args.R, policy)
    signal = _signal(args.signal)
    if args.mode == "rescaled":
        rows = sampling.convergence_probe(kernel, signal, args.N, policy=policy)
        text = serialize.to_csv(["N", "sup_error"], rows)
    else:
        rows = sampling.continuity_convergence_check(kernel, signal, args.t, args.W, policy)
        text = serialize.to_csv(["W", "abs_error"], rows)
    _emit(text, args.output, out)
    return EXIT_OK


def cmd_sweep(args, out) -> int:
    family = registry.parse_family(args.family)
    rows = cardinal.family_sweep(family, args.P, args.R, _policy(args), _scan_config(args))
    _emit(serialize.to_csv(cardinal.SWEEP_HEADER, (r.as_record() for r in rows)), args.output, out)
    return EXIT_OK


def cmd_gibbs_constant(args, out) -> int:
    value = gibbs.fourier_gibbs_constant(args.xi)
    _emit(serialize.format_value(value) + "\n", args.output, out)
    return EXIT_OK


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.command == "scan":
            return cmd_scan(args, out)
        if args.command == "cardinal":
            return cmd_cardinal(args, out, err)
        if args.command == "converge":
            return cmd_converge(args, out)
        if args.command == "sweep":
            return cmd_sweep(args, out)
        return cmd_gibbs_constant(args, out)
    except (registry.UsageError, DomainError, InvalidOrderError, DegenerateJumpError, ValueError) as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except PreconditionError as exc:
        err.write(f"precondition failed: {exc} (pou defect {exc.defect:.6e})\n")
        return EXIT_PRECONDITION
    except (TruncationBudgetError, SymbolNotInvertibleError, AccuracyError, AdapterError, ArithmeticError) as exc:
        err.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
