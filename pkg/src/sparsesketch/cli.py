"""Command-line interface.

Subcommands: ``recover`` (one approximation to a Matrix Market file),
``sweep`` (error-versus-queries experiment to CSV plus a rendered figure),
``color`` (greedy column coloring as CSV), and ``gen`` (emit built-in
patterns and matrices as Matrix Market files). Exit codes: 0 on success,
2 for validation errors, 3 for numerical failures.
"""

from __future__ import annotations

import argparse
import sys

from .coloring import column_intersection_graph, greedy_coloring
from .core import GENERATOR_ID, RandomSeed
from .matrices import (
    model_problem_matrix,
    model_source_matrix,
    trefethen_matrix,
    trefethen_source_matrix,
)
from .mmio import read_dense, write_dense, write_pattern, write_sparse
from .oracle import CountingOracle, DenseOracle, InverseOracle
from .recover import boosted_recover, fixed_sparse_recover
from .sweep import ExperimentConfig, parse_matrix_spec, parse_pattern_spec, run_sweep
from .wishart import wishart_matrix


def _matrix_oracle(spec, seed):
    """Oracle for a matrix source; inverse sources stay matrix-free."""
    name, _, args = spec.partition(":")
    if name == "model":
        return InverseOracle(model_source_matrix(int(args)))
    if name == "trefethen":
        return InverseOracle(trefethen_source_matrix(int(args)))
    return DenseOracle(parse_matrix_spec(spec, seed))


def _cmd_recover(args):
    seed = RandomSeed(args.seed, args.stream)
    oracle = CountingOracle(_matrix_oracle(args.matrix, seed))
    S = parse_pattern_spec(args.pattern)
    if args.boost is not None:
        if args.symmetrize:
            raise ValueError("--symmetrize is not supported together with --boost")
        result = boosted_recover(oracle, S, args.m, args.boost, seed)
    else:
        result = fixed_sparse_recover(oracle, S, args.m, seed, symmetrize=args.symmetrize)
    comments = [
        f"sparsesketch recover matrix={args.matrix} pattern={args.pattern}",
        f"m={args.m} boost={args.boost} symmetrize={args.symmetrize} "
        f"seed={args.seed} stream={args.stream}",
        f"queries_used={result.queries_used} rng={GENERATOR_ID}",
    ]
    write_sparse(args.out, result.approx, comments=comments)
    print(f"wrote {args.out} ({S.nnz} slots, {result.queries_used} queries)")
    return 0


def _cmd_sweep(args):
    config = ExperimentConfig.from_json_file(args.config)
    if args.out is None and config.output is None:
        raise ValueError("no output path: pass --out or set 'output' in the config")
    report = run_sweep(config, out=args.out, make_plot=not args.no_plot)
    for agg in report.aggregates:
        print(
            f"m={agg.m} trials={agg.trials} "
            f"rms_recovery={agg.rms_recovery_error:.6g} "
            f"rms_approx={agg.rms_approx_error:.6g} "
            f"queries={agg.queries_used}"
        )
    return 0


def _cmd_color(args):
    S = parse_pattern_spec(args.pattern)
    coloring = greedy_coloring(column_intersection_graph(S), order=args.order)
    lines = [f"# n_colors={coloring.n_colors}", "column,color"]
    lines += [f"{j},{int(c)}" for j, c in enumerate(coloring.color_of)]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(text)
        print(f"wrote {args.out} ({coloring.n_colors} colors)")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_gen(args):
    if args.kind == "pattern":
        S = parse_pattern_spec(args.spec)
        write_pattern(args.out, S, comments=[f"sparsesketch gen pattern {args.spec}"])
    elif args.kind == "model":
        write_dense(args.out, model_problem_matrix(args.d),
                    comments=[f"sparsesketch gen model d={args.d}"])
    elif args.kind == "trefethen":
        write_dense(args.out, trefethen_matrix(args.d),
                    comments=[f"sparsesketch gen trefethen d={args.d}"])
    else:  # wishart
        A = wishart_matrix(args.r, args.d, RandomSeed(args.seed, args.stream))
        write_dense(
            args.out, A,
            comments=[
                f"sparsesketch gen wishart r={args.r} d={args.d} "
                f"seed={args.seed} stream={args.stream}",
                f"rng={GENERATOR_ID}",
            ],
        )
    print(f"wrote {args.out}")
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="sparsesketch",
        description="Fixed-sparsity matrix approximation from matvec queries",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("recover", help="compute one approximation and write it")
    p.add_argument("--matrix", required=True,
                   help="mm-file | model:d | trefethen:d | wishart:r,d")
    p.add_argument("--pattern", required=True, help="builder:args | mm-file")
    p.add_argument("--m", type=int, required=True, help="sketch width (queries)")
    p.add_argument("--boost", type=int, default=None, metavar="R",
                   help="run R candidates and keep the median-centered one")
    p.add_argument("--symmetrize", action="store_true",
                   help="average each slot with its mirror")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--stream", type=int, default=0)
    p.add_argument("--out", required=True, help="output Matrix Market file")
    p.set_defaults(func=_cmd_recover)

    p = sub.add_parser("sweep", help="run an error-versus-queries experiment")
    p.add_argument("--config", required=True, help="JSON experiment config")
    p.add_argument("--out", default=None, help="CSV output path (overrides config)")
    p.add_argument("--no-plot", action="store_true", help="skip figure rendering")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("color", help="greedily color a pattern's columns")
    p.add_argument("--pattern", required=True, help="builder:args | mm-file")
    p.add_argument("--order", choices=("natural", "degree"), default="natural")
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    p.set_defaults(func=_cmd_color)

    p = sub.add_parser("gen", help="emit a built-in pattern or matrix")
    gensub = p.add_subparsers(dest="kind", required=True)
    g = gensub.add_parser("pattern")
    g.add_argument("spec", help="builder:args, e.g. banded:100,2")
    g.add_argument("--out", required=True)
    g = gensub.add_parser("model")
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--out", required=True)
    g = gensub.add_parser("trefethen")
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--out", required=True)
    g = gensub.add_parser("wishart")
    g.add_argument("--r", type=int, required=True)
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--stream", type=int, default=0)
    g.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen)

    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ArithmeticError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
