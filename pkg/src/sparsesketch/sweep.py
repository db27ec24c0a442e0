"""Experiment driver: sweep query budgets over trials and report errors.

For each budget m and trial the selected algorithm runs against a counting
oracle, and the report records the recovery error (distance to the pattern
restriction of the true matrix), the approximation error, the off-pattern
mass, the error-bound envelopes, and the exact query count. Identical
configurations produce byte-identical CSV output.
"""

from __future__ import annotations

import json
import math
import os
import warnings
from dataclasses import dataclass, field

import numpy as np

from .coloring import (
    banded_rademacher_estimate,
    column_intersection_graph,
    exact_recover_by_coloring,
    greedy_coloring,
)
from .core import GENERATOR_ID, RandomSeed, frobenius_norm, hadamard_mask
from .matrices import model_problem_matrix, trefethen_matrix
from .mmio import read_dense, read_pattern
from .oracle import CountingOracle, DenseOracle
from .pattern import (
    banded_pattern,
    block_diagonal_pattern,
    circulant_band_pattern,
    diagonal_pattern,
    hard_coloring_pattern,
    multiband_pattern,
)
from .recover import boosted_recover, fixed_sparse_recover
from .wishart import wishart_matrix

ALGORITHMS = ("sketch", "boosted", "coloring", "banded-rademacher")

# Each (m, trial) run owns a block of 2^16 substreams so boosted candidates
# never collide across runs; matrix generation sits far above all run blocks.
_RUN_STREAM_SPACING = 1 << 16
_MATRIX_STREAM_OFFSET = 1 << 62

CSV_SCHEMA = "m,trial,recovery_error,approx_error,off_mass,bound_recovery,bound_approx,queries_used,status"
SUMMARY_SCHEMA = (
    "m,trials,rms_recovery_error,rms_approx_error,q10_recovery_error,q90_recovery_error,"
    "q10_approx_error,q90_approx_error,bound_recovery,bound_approx,queries_used"
)


def _parse_int_args(spec, text, count):
    parts = text.split(",") if text else []
    if len(parts) != count:
        raise ValueError(f"{spec!r}: expected {count} integer argument(s)")
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise ValueError(f"{spec!r}: arguments must be integers")


def parse_matrix_spec(spec, seed):
    """Resolve a matrix source string to a dense array.

    Accepts ``model:d``, ``trefethen:d``, ``wishart:r,d`` (drawn from a
    dedicated substream of ``seed``), or a Matrix Market file path.
    """
    name, _, args = spec.partition(":")
    if name == "model":
        (d,) = _parse_int_args(spec, args, 1)
        return model_problem_matrix(d)
    if name == "trefethen":
        (d,) = _parse_int_args(spec, args, 1)
        return trefethen_matrix(d)
    if name == "wishart":
        r, d = _parse_int_args(spec, args, 2)
        return wishart_matrix(r, d, RandomSeed.coerce(seed).child(_MATRIX_STREAM_OFFSET))
    if os.path.exists(spec):
        return read_dense(spec)
    raise ValueError(f"unknown matrix source {spec!r} (not a builder, not a file)")


def parse_pattern_spec(spec):
    """Resolve a pattern source string to a SparsityPattern.

    Builders: ``diagonal:d``, ``banded:d,b``, ``circulant:d,b``,
    ``multiband:d,b,t1+t2+...`` (``pow2`` expands to 1+2+...+512),
    ``hard:k``, ``blockdiag:d,block``. Anything else is read as a
    Matrix Market coordinate pattern file.
    """
    name, _, args = spec.partition(":")
    if name == "diagonal":
        (d,) = _parse_int_args(spec, args, 1)
        return diagonal_pattern(d)
    if name == "banded":
        d, b = _parse_int_args(spec, args, 2)
        return banded_pattern(d, b)
    if name == "circulant":
        d, b = _parse_int_args(spec, args, 2)
        return circulant_band_pattern(d, b)
    if name == "multiband":
        parts = args.split(",")
        if len(parts) != 3:
            raise ValueError(f"{spec!r}: expected multiband:d,b,offsets")
        d, b = _parse_int_args(spec, ",".join(parts[:2]), 2)
        if parts[2] == "pow2":
            offsets = [2**p for p in range(10)]
        else:
            try:
                offsets = [int(t) for t in parts[2].split("+")]
            except ValueError:
                raise ValueError(f"{spec!r}: offsets must be '+'-separated integers")
        return multiband_pattern(d, offsets, b)
    if name == "hard":
        (k,) = _parse_int_args(spec, args, 1)
        return hard_coloring_pattern(k)
    if name == "blockdiag":
        d, block = _parse_int_args(spec, args, 2)
        return block_diagonal_pattern(d, block)
    if os.path.exists(spec):
        return read_pattern(spec)
    raise ValueError(f"unknown pattern source {spec!r} (not a builder, not a file)")


@dataclass(frozen=True)
class ExperimentConfig:
    """A sweep: matrix source, pattern source, budgets, trials, algorithm."""

    matrix: str
    pattern: str
    m_values: tuple
    trials: int = 20
    seed: int = 0
    stream: int = 0
    algorithm: str = "sketch"
    symmetrize: bool = False
    boost_r: int | None = None
    order: str = "natural"
    output: str | None = None

    _JSON_KEYS = {
        "matrix", "pattern", "m", "trials", "seed", "stream",
        "algorithm", "symmetrize", "boost_r", "order", "output",
    }

    def __post_init__(self):
        object.__setattr__(self, "m_values", tuple(int(m) for m in self.m_values))
        if not self.m_values or any(m < 1 for m in self.m_values):
            raise ValueError("m values must be a nonempty list of positive integers")
        if self.trials < 1:
            raise ValueError("trials must be positive")
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}, pick from {ALGORITHMS}")
        if self.algorithm == "boosted" and (self.boost_r is None or self.boost_r < 1):
            raise ValueError("boosted runs need boost_r >= 1")
        if self.symmetrize and self.algorithm != "sketch":
            raise ValueError("symmetrize is only supported for the sketch algorithm")
        if self.order not in ("natural", "degree"):
            raise ValueError(f"unknown coloring order {self.order!r}")
        if self.algorithm == "banded-rademacher" and not self.pattern.startswith("banded:"):
            raise ValueError("banded-rademacher needs a 'banded:d,b' pattern source")

    @classmethod
    def from_dict(cls, data):
        unknown = set(data) - cls._JSON_KEYS
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        for key in ("matrix", "pattern", "m"):
            if key not in data:
                raise ValueError(f"config is missing required key {key!r}")
        return cls(
            matrix=data["matrix"],
            pattern=data["pattern"],
            m_values=tuple(data["m"]),
            trials=data.get("trials", 20),
            seed=data.get("seed", 0),
            stream=data.get("stream", 0),
            algorithm=data.get("algorithm", "sketch"),
            symmetrize=data.get("symmetrize", False),
            boost_r=data.get("boost_r"),
            order=data.get("order", "natural"),
            output=data.get("output"),
        )

    @classmethod
    def from_json_file(cls, path):
        with open(path, "r", encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ValueError(f"config {path}: {exc}")
        if not isinstance(data, dict):
            raise ValueError(f"config {path}: expected a JSON object")
        return cls.from_dict(data)

    def canonical_json(self):
        data = {
            "matrix": self.matrix,
            "pattern": self.pattern,
            "m": list(self.m_values),
            "trials": self.trials,
            "seed": self.seed,
            "stream": self.stream,
            "algorithm": self.algorithm,
            "symmetrize": self.symmetrize,
            "boost_r": self.boost_r,
            "order": self.order,
        }
        return json.dumps(data, sort_keys=True, separators=(",", ":"))

    def base_seed(self):
        return RandomSeed(self.seed, self.stream)

    def run_seed(self, m_index, trial):
        """Substream for one (m, trial) run."""
        run_index = m_index * self.trials + trial
        return self.base_seed().child(run_index * _RUN_STREAM_SPACING)


@dataclass(frozen=True)
class TrialRecord:
    m: int
    trial: int
    recovery_error: float
    approx_error: float
    off_mass: float
    bound_recovery: float
    bound_approx: float
    queries_used: int
    status: str = "ok"


@dataclass(frozen=True)
class AggregateRecord:
    m: int
    trials: int
    rms_recovery_error: float
    rms_approx_error: float
    q10_recovery_error: float
    q90_recovery_error: float
    q10_approx_error: float
    q90_approx_error: float
    bound_recovery: float
    bound_approx: float
    queries_used: int


@dataclass
class ErrorReport:
    """Per-trial records plus per-budget aggregates for one sweep."""

    config: ExperimentConfig
    records: list = field(default_factory=list)
    aggregates: list = field(default_factory=list)

    def _header_lines(self, schema_name, schema):
        return [
            f"# sparsesketch {schema_name} v1",
            f"# config={self.config.canonical_json()}",
            f"# rng={GENERATOR_ID}",
            schema,
        ]

    def write_csv(self, path):
        lines = self._header_lines("sweep", CSV_SCHEMA)
        for r in self.records:
            lines.append(
                f"{r.m},{r.trial},{r.recovery_error!r},{r.approx_error!r},"
                f"{r.off_mass!r},{r.bound_recovery!r},{r.bound_approx!r},"
                f"{r.queries_used},{r.status}"
            )
        with open(path, "w", encoding="ascii") as fh:
            fh.write("\n".join(lines) + "\n")

    def write_summary_csv(self, path):
        lines = self._header_lines("sweep-summary", SUMMARY_SCHEMA)
        for a in self.aggregates:
            lines.append(
                f"{a.m},{a.trials},{a.rms_recovery_error!r},{a.rms_approx_error!r},"
                f"{a.q10_recovery_error!r},{a.q90_recovery_error!r},"
                f"{a.q10_approx_error!r},{a.q90_approx_error!r},"
                f"{a.bound_recovery!r},{a.bound_approx!r},{a.queries_used}"
            )
        with open(path, "w", encoding="ascii") as fh:
            fh.write("\n".join(lines) + "\n")


def error_bounds(s, m, off_mass):
    """Envelopes sqrt(s/(m-s-1)) * off and sqrt(1 + s/(m-s-1)) * off.

    Undefined (infinite) when m < s + 2.
    """
    if m >= s + 2:
        ratio = s / (m - s - 1)
        return math.sqrt(ratio) * off_mass, math.sqrt(1.0 + ratio) * off_mass
    return math.inf, math.inf


def _run_one(config, A, S, m, seed, coloring):
    oracle = CountingOracle(DenseOracle(A))
    if config.algorithm == "sketch":
        result = fixed_sparse_recover(oracle, S, m, seed, symmetrize=config.symmetrize)
    elif config.algorithm == "boosted":
        result = boosted_recover(oracle, S, m, config.boost_r, seed)
    elif config.algorithm == "coloring":
        result = exact_recover_by_coloring(oracle, S, coloring)
    else:  # banded-rademacher
        d, b = _parse_int_args(config.pattern, config.pattern.partition(":")[2], 2)
        s = 2 * b + 1
        result = banded_rademacher_estimate(oracle, d, b, m // s, seed)
    if result.queries_used != oracle.counter.count:
        raise RuntimeError(
            f"query accounting mismatch: declared {result.queries_used}, "
            f"counted {oracle.counter.count}"
        )
    return result


def run_sweep(config, out=None, make_plot=True):
    """Run every (m, trial) cell and return the report.

    When ``out`` (or ``config.output``) names a CSV path, writes the trial
    CSV there plus ``<stem>-summary.csv`` and, unless disabled, a rendered
    ``<stem>.png`` figure of error versus queries. Per-trial numerical
    failures become ``failed:...`` rows; validation problems raise before
    any query is made.
    """
    out = out or config.output
    A = parse_matrix_spec(config.matrix, config.base_seed())
    S = parse_pattern_spec(config.pattern)
    if A.shape != S.shape:
        raise ValueError(f"matrix shape {A.shape} does not match pattern shape {S.shape}")
    s = S.max_row_nnz()
    bad = [m for m in config.m_values if m < s]
    if bad:
        raise ValueError(
            f"m values {bad} are below the widest pattern row ({s} slots)"
        )
    low = [m for m in config.m_values if m < s + 2]
    if low and config.algorithm in ("sketch", "boosted"):
        warnings.warn(
            f"m values {low} are below s+2={s + 2}; the expected-error bound "
            "does not apply there"
        )
    if config.algorithm == "banded-rademacher":
        d, b = _parse_int_args(config.pattern, config.pattern.partition(":")[2], 2)
        if d % (2 * b + 1) != 0:
            raise ValueError(f"banded-rademacher needs (2b+1) | d, got d={d}, b={b}")

    coloring = None
    if config.algorithm == "coloring":
        coloring = greedy_coloring(column_intersection_graph(S), order=config.order)

    true_vals = hadamard_mask(A, S)
    off_mass = frobenius_norm(A - true_vals.to_dense())

    report = ErrorReport(config=config)
    for m_index, m in enumerate(config.m_values):
        bound_rec, bound_approx = error_bounds(s, m, off_mass)
        rec_errors, approx_errors, queries = [], [], []
        for trial in range(config.trials):
            seed = config.run_seed(m_index, trial)
            try:
                result = _run_one(config, A, S, m, seed, coloring)
            except ArithmeticError as exc:
                report.records.append(TrialRecord(
                    m=m, trial=trial, recovery_error=math.nan,
                    approx_error=math.nan, off_mass=off_mass,
                    bound_recovery=bound_rec, bound_approx=bound_approx,
                    queries_used=0, status=f"failed:{type(exc).__name__}",
                ))
                continue
            rec = float(np.linalg.norm(true_vals.values - result.approx.values))
            approx = frobenius_norm(A - result.approx.to_dense())
            rec_errors.append(rec)
            approx_errors.append(approx)
            queries.append(result.queries_used)
            report.records.append(TrialRecord(
                m=m, trial=trial, recovery_error=rec, approx_error=approx,
                off_mass=off_mass, bound_recovery=bound_rec,
                bound_approx=bound_approx, queries_used=result.queries_used,
            ))
        if rec_errors:
            rec_arr = np.asarray(rec_errors)
            approx_arr = np.asarray(approx_errors)
            report.aggregates.append(AggregateRecord(
                m=m,
                trials=len(rec_errors),
                rms_recovery_error=float(np.sqrt(np.mean(rec_arr**2))),
                rms_approx_error=float(np.sqrt(np.mean(approx_arr**2))),
                q10_recovery_error=float(np.quantile(rec_arr, 0.1)),
                q90_recovery_error=float(np.quantile(rec_arr, 0.9)),
                q10_approx_error=float(np.quantile(approx_arr, 0.1)),
                q90_approx_error=float(np.quantile(approx_arr, 0.9)),
                bound_recovery=bound_rec,
                bound_approx=bound_approx,
                queries_used=queries[0],
            ))

    if out is not None:
        stem, _ = os.path.splitext(out)
        report.write_csv(out)
        report.write_summary_csv(f"{stem}-summary.csv")
        if make_plot:
            from .plotting import render_sweep_figure

            render_sweep_figure(report, f"{stem}.png")
    return report
