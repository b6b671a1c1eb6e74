"""Monte Carlo experiment harness, exact enumeration oracle and scaling fits.

Trial ``t`` at integral index ``i`` of an experiment with master seed ``s``
draws from ``RngStream(s).substream(protocol, i, t)``. Trials are grouped in
chunks and may run on a thread pool; because every trial owns its stream the
records are bit-identical for any chunk size or worker count.

CSV layout (one trial per line, after a single ``# config: {...}`` comment
line holding the resolved experiment as JSON)::

    trial_id,protocol,i_index,I_true,I_est,abs_error

Floats are written with ``repr`` so they round-trip exactly.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
from scipy import stats

from .classical import ClassicalConfig, CounterConfig, counter_baseline, flip_probability, mle_integral
from .field import MagnitudeScale
from .quantum import (
    DEFAULT_GUARD,
    PlanarSpin,
    QuantumConfig,
    choose_alpha,
    correction_angle,
    ladder_readouts,
    ladder_turns,
    method_I_estimates,
    precess,
)
from .rng import RngStream, derive_key

PROTOCOLS = ("classical", "method-i", "method-ii", "combined", "counter")
CSV_HEADER = ("trial_id", "protocol", "i_index", "I_true", "I_est", "abs_error")
MAX_ENUMERATION_QUBITS = 12

ProtocolConfig = Union[ClassicalConfig, QuantumConfig, CounterConfig]


@dataclass(frozen=True)
class TrialRecord:
    trial_id: int
    protocol: str
    i_index: int
    I_true: float
    I_est: float
    abs_error: float


def nearest_rank(sorted_values: np.ndarray, q: float) -> float:
    """Nearest-rank quantile of an ascending array (``q`` in (0, 1])."""
    n = len(sorted_values)
    rank = max(1, math.ceil(q * n))
    return float(sorted_values[min(rank, n) - 1])


@dataclass(frozen=True)
class ErrorStats:
    trials: int
    mean_error: float
    rms_error: float
    median_abs_error: float
    max_abs_error: float
    quantiles: tuple[float, float, float]  # nearest-rank p50, p90, p99 of |error|

    @classmethod
    def from_errors(cls, errors) -> ErrorStats:
        e = np.asarray(errors, dtype=float)
        if e.size == 0:
            raise ValueError("no errors to summarise")
        a = np.sort(np.abs(e))
        top = a[-1]
        rms = top * math.sqrt(np.mean((e / top) ** 2)) if top > 0 else 0.0  # scaled against underflow
        return cls(
            trials=int(e.size),
            mean_error=float(e.mean()),
            rms_error=float(rms),
            median_abs_error=float(np.median(a)),
            max_abs_error=float(a[-1]),
            quantiles=(nearest_rank(a, 0.5), nearest_rank(a, 0.9), nearest_rank(a, 0.99)),
        )


@dataclass(frozen=True)
class ExperimentSpec:
    protocol: str
    config: ProtocolConfig
    i_values: tuple[float, ...]
    trials: int
    seed: int = 0

    def __post_init__(self):
        if self.protocol not in PROTOCOLS:
            raise ValueError(f"unknown protocol {self.protocol!r}; choose from {PROTOCOLS}")
        expected = {
            "classical": ClassicalConfig,
            "counter": CounterConfig,
        }.get(self.protocol, QuantumConfig)
        if not isinstance(self.config, expected):
            raise TypeError(f"{self.protocol} needs a {expected.__name__}")
        if self.protocol == "combined" and self.config.n0 < 2:
            raise ValueError("combined protocol needs n0 >= 2")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.i_values:
            raise ValueError("need at least one integral value")
        object.__setattr__(self, "i_values", tuple(float(v) for v in self.i_values))

    def to_dict(self) -> dict:
        return {
            "protocol": self.protocol,
            "config_type": type(self.config).__name__,
            "config": dataclasses.asdict(self.config),
            "i_values": list(self.i_values),
            "trials": self.trials,
            "seed": self.seed,
        }


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    records: list[TrialRecord]
    stats: ErrorStats
    per_value: list[ErrorStats]

    def errors(self, i_index: int | None = None) -> np.ndarray:
        return np.array(
            [r.I_est - r.I_true for r in self.records if i_index is None or r.i_index == i_index]
        )

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("# config: " + json.dumps(self.spec.to_dict(), sort_keys=True) + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in self.records:
            w.writerow((r.trial_id, r.protocol, r.i_index, repr(r.I_true), repr(r.I_est), repr(r.abs_error)))
        return buf.getvalue()

    def summary(self) -> dict:
        return {
            "seed": self.spec.seed,
            "spec": self.spec.to_dict(),
            "stats": dataclasses.asdict(self.stats),
            "per_value": [
                {"i_index": i, "I_true": v, **dataclasses.asdict(s)}
                for i, (v, s) in enumerate(zip(self.spec.i_values, self.per_value))
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.summary(), indent=2, sort_keys=True) + "\n"


def _uniform_rows(streams: Sequence[RngStream], n: int) -> np.ndarray:
    return np.stack([s.random(n) for s in streams]) if streams else np.empty((0, n))


def _batch_estimates(protocol: str, cfg: ProtocolConfig, I: float, streams: Sequence[RngStream]) -> np.ndarray:
    if protocol == "classical":
        p = flip_probability(I, cfg.lam)
        flips = np.count_nonzero(_uniform_rows(streams, cfg.n_bits) < p, axis=1)
        return mle_integral(flips, cfg.n_bits, cfg.lam)[0]
    if protocol == "counter":
        return np.array([counter_baseline(I, cfg.n_bits, cfg.scale.M, s, cfg.guard).i_hat for s in streams])
    if protocol == "method-i":
        return method_I_estimates(I, cfg.range_max, _uniform_rows(streams, cfg.n_qubits))
    if protocol == "method-ii":
        m_hat = ladder_readouts(I, cfg.alpha, _uniform_rows(streams, cfg.ladder_steps))
        return m_hat * cfg.alpha
    if protocol == "combined":
        u = _uniform_rows(streams, cfg.n_qubits)
        beta = method_I_estimates(I, cfg.alpha, u[:, : cfg.n0])
        m_hat = ladder_readouts(I, cfg.alpha, u[:, cfg.n0 :], beta)
        return m_hat * cfg.alpha + beta
    raise ValueError(f"unknown protocol {protocol!r}")


def trial_stream(seed: int, protocol: str, i_index: int, trial_id: int) -> RngStream:
    return RngStream(seed).substream(protocol, i_index, trial_id)


def run_experiment(spec: ExperimentSpec, workers: int = 1, chunk_size: int = 4096) -> ExperimentResult:
    """Run every trial of ``spec`` and summarise the errors.

    ``workers > 1`` spreads chunks over a thread pool; output is identical
    either way.
    """
    if chunk_size < 1:
        raise ValueError("chunk_size must be >= 1")
    root = RngStream(spec.seed)
    jobs = []
    for i, I in enumerate(spec.i_values):
        for start in range(0, spec.trials, chunk_size):
            jobs.append((i, I, range(start, min(start + chunk_size, spec.trials))))

    def work(job):
        i, I, ids = job
        streams = [root.substream(spec.protocol, i, t) for t in ids]
        return job, _batch_estimates(spec.protocol, spec.config, I, streams)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            done = list(pool.map(work, jobs))
    else:
        done = [work(j) for j in jobs]

    records: list[TrialRecord] = []
    per_value_errors: list[list[np.ndarray]] = [[] for _ in spec.i_values]
    for (i, I, ids), est in sorted(done, key=lambda d: (d[0][0], d[0][2].start)):
        per_value_errors[i].append(est - I)
        records.extend(
            TrialRecord(t, spec.protocol, i, I, float(e), abs(float(e) - I)) for t, e in zip(ids, est)
        )
    per_value = [ErrorStats.from_errors(np.concatenate(errs)) for errs in per_value_errors]
    overall = ErrorStats.from_errors(np.concatenate([np.concatenate(e) for e in per_value_errors]))
    return ExperimentResult(spec, records, overall, per_value)


def enumerate_distribution(I: float, alpha: float, N: int, beta_hat: float = 0.0) -> dict[int, float]:
    """Exact distribution of the method II readout ``m_hat``.

    Walks every one of the ``2**N`` adaptive transcripts, building each step's
    spin from the same rotations the simulator uses and multiplying the
    outcome probabilities down the tree.
    """
    if not 1 <= N <= MAX_ENUMERATION_QUBITS:
        raise ValueError(f"enumeration supports 1..{MAX_ENUMERATION_QUBITS} qubits, got {N}")
    level: list[tuple[list[int], float]] = [([], 1.0)]
    for k, turns in enumerate(ladder_turns(I, alpha, N), 1):
        field_angle = math.pi * turns / 2.0 ** (k - 1)
        nxt = []
        for digits, prob in level:
            spin = precess(precess(PlanarSpin(), field_angle), correction_angle(digits, k, beta_hat, alpha))
            p1 = math.sin(spin.theta / 2.0) ** 2
            nxt.append((digits + [0], prob * (1.0 - p1)))
            nxt.append((digits + [1], prob * p1))
        level = nxt
    return {sum(d << i for i, d in enumerate(digits)): p for digits, p in level}


def total_variation(p: dict[int, float], q: dict[int, float]) -> float:
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


@dataclass(frozen=True)
class Table1Row:
    n: int
    I: float
    quantum: float
    classical: float


@dataclass(frozen=True)
class Table1:
    rows: tuple[Table1Row, ...]
    seed: int
    M: float
    n_carriers: int
    guard: float
    lam: float
    alpha: float

    def format(self) -> str:
        head = f"{'n':>3} | {'I=n*pi mod 10':>13} | {'quantum':>13} | {'classical':>13}"
        lines = [head, "-" * len(head)]
        for r in self.rows:
            lines.append(f"{r.n:>3} | {r.I:>13.9f} | {r.quantum:>13.9f} | {r.classical:>13.9f}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def table1_grid() -> tuple[float, ...]:
    return tuple(math.fmod(n * math.pi, 10.0) for n in range(1, 11))


def table1_experiment(
    seed: int = 0, M: float = 5.0, n_carriers: int = 30, guard: float = DEFAULT_GUARD, lam: float | None = None
) -> Table1:
    """One quantum (method II) and one classical readout for each ``I_n = n pi mod 10``."""
    qcfg = QuantumConfig.for_scale(M, n_carriers, 0, guard)
    ccfg = ClassicalConfig.default(M, n_carriers, lam)
    root = RngStream(seed).substream("table1")
    rows = []
    for n, I in enumerate(table1_grid(), 1):
        q = _batch_estimates("method-ii", qcfg, I, [root.substream("method-ii", n)])[0]
        c = _batch_estimates("classical", ccfg, I, [root.substream("classical", n)])[0]
        rows.append(Table1Row(n, I, float(q), float(c)))
    return Table1(tuple(rows), seed, M, n_carriers, guard, ccfg.lam, qcfg.alpha)


@dataclass(frozen=True)
class ScalingResult:
    protocol: str
    n_values: tuple[int, ...]
    metric_name: str
    metric: tuple[float, ...]
    x_axis: str  # "log N" or "N"
    y_axis: str  # "log metric" or "log2 metric"
    slope: float
    slope_stderr: float

    def table(self) -> str:
        lines = [f"{'N':>6}  {self.metric_name}"]
        lines += [f"{n:>6}  {m:.6g}" for n, m in zip(self.n_values, self.metric)]
        lines.append(f"slope of {self.y_axis} vs {self.x_axis}: {self.slope:.4f} +/- {self.slope_stderr:.4f}")
        return "\n".join(lines)


def scaling_study(
    protocol: str,
    n_list: Sequence[int],
    trials: int,
    seed: int = 0,
    M: float = 5.0,
    guard: float = DEFAULT_GUARD,
    lam: float | None = None,
    I: float | None = None,
    workers: int = 1,
) -> ScalingResult:
    """Fit how the error shrinks with the number of carriers.

    classical and method-i: rms error, slope of ``log rms`` against ``log N``.
    method-ii: median |error| at the worst offset ``I = (K + 1/2) alpha``,
    slope of ``log2`` against ``N``. counter: rms relative error, ``log2``
    against ``N``.
    """
    if len(n_list) < 3:
        raise ValueError("need at least 3 values of N")
    metric = []
    for N in n_list:
        sub_seed = derive_key(seed, "scaling", protocol, N)
        if protocol == "classical":
            target = M if I is None else I
            spec = ExperimentSpec(protocol, ClassicalConfig.default(M, N, lam), (target,), trials, sub_seed)
            metric.append(run_experiment(spec, workers).stats.rms_error)
        elif protocol == "method-i":
            cfg = QuantumConfig.for_scale(M, N, 0, guard, "method-i")
            target = 0.3 * cfg.range_max if I is None else I
            spec = ExperimentSpec(protocol, cfg, (target,), trials, sub_seed)
            metric.append(run_experiment(spec, workers).stats.rms_error)
        elif protocol == "method-ii":
            alpha = choose_alpha(M, N, 0, guard)
            target = (math.floor(M / alpha) + 0.5) * alpha
            spec = ExperimentSpec(protocol, QuantumConfig.for_scale(M, N, 0, guard), (target,), trials, sub_seed)
            metric.append(run_experiment(spec, workers).stats.median_abs_error)
        elif protocol == "counter":
            target = M if I is None else I
            spec = ExperimentSpec(protocol, CounterConfig(N, MagnitudeScale(M), guard), (target,), trials, sub_seed)
            metric.append(run_experiment(spec, workers).stats.rms_error / target)
        else:
            raise ValueError(f"no scaling study for protocol {protocol!r}")

    n = np.asarray(n_list, dtype=float)
    y = np.asarray(metric)
    if protocol in ("classical", "method-i"):
        fit = stats.linregress(np.log(n), np.log(y))
        axes = ("log N", "log metric")
    else:
        fit = stats.linregress(n, np.log2(y))
        axes = ("N", "log2 metric")
    name = {"method-ii": "median |error|", "counter": "rms relative error"}.get(protocol, "rms error")
    return ScalingResult(protocol, tuple(int(v) for v in n_list), name, tuple(metric), *axes, float(fit.slope), float(fit.stderr))
