"""Experiment orchestration: seeded replicate runs, statistics, diagnostics, CSV.

Per-run randomness is derived from a single master seed through splittable
seed sequences, so every experiment is bit-reproducible and replicate runs
are statistically independent.  Bin-packing experiments share one generated
instance across runs; format-game experiments draw a fresh network and
preference matrix for every run.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import binpack, formats
from .model import (
    MAXIMIZE,
    MINIMIZE,
    ConfigurationError,
    Problem,
    UtilityChoice,
    private_utility,
)
from .search import AlgorithmConfig, run_search

TRAJECTORY_HEADER = "t,meanG,stderrG"
FINAL_HEADER = "algorithm,utility,meanG,stderr,best,worst,percentOptimum"


@dataclass
class BinPackSetup:
    n_items: int = 20
    capacity: float = 12.0
    max_size: float | None = None
    integral: bool = True
    instance_path: str | None = None

    kind = "binpack"


@dataclass
class FormatsSetup:
    nodes: int = 100
    topology: str = formats.SHORT_LINKS
    hops: int = 1
    extra_link_fraction: float = 0.06

    kind = "formats"


@dataclass
class ExperimentConfig:
    problem: BinPackSetup | FormatsSetup
    algorithm: AlgorithmConfig
    run_count: int = 25
    master_seed: int = 0

    def __post_init__(self):
        if self.run_count < 1:
            raise ConfigurationError("run_count must be >= 1")
        if self.problem.kind == "binpack":
            if self.problem.n_items < 1 or self.problem.capacity <= 0:
                raise ConfigurationError("bin packing needs n_items >= 1, capacity > 0")
        elif self.problem.kind == "formats":
            if self.problem.topology not in formats.TOPOLOGIES:
                raise ConfigurationError(f"unknown topology {self.problem.topology!r}")
            if self.problem.hops < 1:
                raise ConfigurationError("hop radius must be >= 1")
        else:
            raise ConfigurationError(f"unknown problem kind {self.problem.kind!r}")


@dataclass
class RunRecord:
    trajectory: list[float]
    final_state: np.ndarray
    run_index: int


@dataclass
class SummaryStats:
    mean_g: np.ndarray
    stderr_g: np.ndarray
    final_mean: float
    final_stderr: float
    best: float
    worst: float
    percent_optimum: float
    sense: str


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    stats: SummaryStats
    records: list[RunRecord]
    networks: list[formats.FormatNetwork] = field(default_factory=list)


def percent_optimum(final_values, sense: str, reference: float | None = None) -> float:
    """Percentage of runs within one unit of the best final value.

    ``reference`` overrides the best-of-this-list default (e.g. to compare
    several algorithms against a common best).
    """
    values = list(final_values)
    if not values:
        raise ValueError("need at least one run")
    if reference is None:
        reference = max(values) if sense == MAXIMIZE else min(values)
    hits = sum(1 for v in values if abs(v - reference) <= 1.0)
    return 100.0 * hits / len(values)


def summarize(records: list[RunRecord], sense: str) -> SummaryStats:
    traj = np.array([r.trajectory for r in records], dtype=np.float64)
    n_runs = traj.shape[0]
    mean_g = traj.mean(axis=0)
    if n_runs > 1:
        stderr_g = traj.std(axis=0, ddof=1) / math.sqrt(n_runs)
    else:
        stderr_g = np.zeros(traj.shape[1])
    finals = traj[:, -1]
    if sense == MAXIMIZE:
        best, worst = float(finals.max()), float(finals.min())
    else:
        best, worst = float(finals.min()), float(finals.max())
    return SummaryStats(
        mean_g=mean_g,
        stderr_g=stderr_g,
        final_mean=float(mean_g[-1]),
        final_stderr=float(stderr_g[-1]),
        best=best,
        worst=worst,
        percent_optimum=percent_optimum(finals, sense),
        sense=sense,
    )


def _binpack_instance(setup: BinPackSetup, seed_seq) -> binpack.BinPackInstance:
    if setup.instance_path is not None:
        return binpack.read_instance(setup.instance_path)
    return binpack.generate_instance(
        setup.n_items,
        setup.capacity,
        seed_seq,
        max_size=setup.max_size,
        integral=setup.integral,
    )


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Execute run_count independent seeded runs and aggregate them."""
    master = np.random.SeedSequence(config.master_seed)
    records: list[RunRecord] = []
    networks: list[formats.FormatNetwork] = []

    if config.problem.kind == "binpack":
        instance_seq, *run_seqs = master.spawn(config.run_count + 1)
        instance = _binpack_instance(config.problem, instance_seq)
        problem = binpack.BinPackProblem(instance)
        for i, seq in enumerate(run_seqs):
            trajectory, state = run_search(
                problem, config.algorithm, np.random.default_rng(seq)
            )
            records.append(RunRecord(trajectory, state.current, i))
        sense = MINIMIZE
    else:
        run_seqs = master.spawn(config.run_count)
        for i, seq in enumerate(run_seqs):
            net_seq, pref_seq, search_seq = seq.spawn(3)
            network = formats.build_network(
                config.problem.nodes,
                config.problem.topology,
                config.problem.extra_link_fraction,
                net_seq,
            )
            instance = formats.make_instance(
                network, config.problem.hops, rng_seed=pref_seq
            )
            problem = formats.FormatGameProblem(instance)
            trajectory, state = run_search(
                problem, config.algorithm, np.random.default_rng(search_seq)
            )
            records.append(RunRecord(trajectory, state.current, i))
            networks.append(network)
        sense = MAXIMIZE

    return ExperimentResult(
        config=config, stats=summarize(records, sense), records=records, networks=networks
    )


# --- diagnostics -----------------------------------------------------------


def estimate_intelligence(
    problem: Problem,
    choice: UtilityChoice,
    eta: int,
    z,
    sample_count: int | None = None,
    rng: np.random.Generator | None = None,
) -> float:
    """Fraction of eta's alternative moves the utility ranks below the actual
    move, ties counting one half.

    Uses the signed (maximize) convention so "better" is consistent across
    objective senses.  Enumerates exactly for move counts up to 64; larger
    move spaces are sampled (sample_count draws).
    """
    n = problem.move_count(eta)
    if n == 1:
        return 1.0
    sign = problem.sign
    u_here = sign * private_utility(problem, choice, eta, z)
    alts = [m for m in range(n) if m != z[eta]]
    if n > 64:
        if sample_count is None or sample_count < 1:
            raise ValueError("sampling requires sample_count >= 1")
        if rng is None:
            rng = np.random.default_rng()
        alts = [alts[k] for k in rng.integers(len(alts), size=sample_count)]
    z_alt = np.array(z, dtype=np.int64)
    score = 0.0
    for move in alts:
        z_alt[eta] = move
        u_alt = sign * private_utility(problem, choice, eta, z_alt)
        if u_here > u_alt:
            score += 1.0
        elif u_here == u_alt:
            score += 0.5
    return score / len(alts)


def enumerate_contexts(problem: Problem, eta: int) -> list[np.ndarray]:
    """All joint states over the other agents' moves (eta's coordinate is a
    placeholder the caller overwrites)."""
    ranges = [
        range(problem.move_count(a)) if a != eta else range(1)
        for a in range(problem.agent_count)
    ]
    return [np.array(combo, dtype=np.int64) for combo in itertools.product(*ranges)]


def sample_contexts(
    problem: Problem, eta: int, count: int, rng: np.random.Generator
) -> list[np.ndarray]:
    out = []
    for _ in range(count):
        z = problem.random_state(rng)
        z[eta] = 0
        out.append(z)
    return out


def estimate_learnability(
    problem: Problem,
    choice: UtilityChoice,
    eta: int,
    move1: int,
    move2: int,
    contexts,
) -> float:
    """Signal-to-noise of the utility for agent eta between two of its moves.

    Numerator: mean over the given contexts of the squared utility gap
    between move1 and move2 (sensitivity to eta's own move).  Denominator:
    mean over all of eta's moves of the across-context variance (sensitivity
    to everyone else's moves).  Returns sqrt(num/den); +inf when the utility
    does not depend on the context at all.
    """
    if move1 == move2:
        raise ValueError("need two distinct moves")
    contexts = list(contexts)
    if len(contexts) < 2:
        raise ValueError("need at least two contexts")
    u = _utility_matrix(problem, choice, eta, contexts)
    return learnability_from_matrix(u, move1, move2)


def _utility_matrix(problem, choice, eta, contexts) -> np.ndarray:
    n = problem.move_count(eta)
    u = np.empty((n, len(contexts)))
    for j, ctx in enumerate(contexts):
        z = np.array(ctx, dtype=np.int64)
        for m in range(n):
            z[eta] = m
            u[m, j] = private_utility(problem, choice, eta, z)
    return u


def learnability_from_matrix(u: np.ndarray, move1: int, move2: int) -> float:
    numerator = float(((u[move1] - u[move2]) ** 2).mean())
    denominator = float(u.var(axis=1).mean())
    if denominator == 0.0:
        return math.inf
    return math.sqrt(numerator / denominator)


def mean_learnability(
    problem: Problem,
    choice: UtilityChoice,
    context_count: int | None = None,
    rng: np.random.Generator | None = None,
) -> float:
    """Average learnability over every agent and unordered move pair.

    context_count=None enumerates every context exactly (small instances
    only); otherwise contexts are sampled.
    """
    values = []
    for eta in range(problem.agent_count):
        if context_count is None:
            contexts = enumerate_contexts(problem, eta)
        else:
            if rng is None:
                raise ValueError("sampling contexts requires an rng")
            contexts = sample_contexts(problem, eta, context_count, rng)
        u = _utility_matrix(problem, choice, eta, contexts)
        n = problem.move_count(eta)
        for m1 in range(n):
            for m2 in range(m1 + 1, n):
                v = learnability_from_matrix(u, m1, m2)
                if math.isfinite(v):
                    values.append(v)
    return float(np.mean(values)) if values else math.inf


# --- output ----------------------------------------------------------------


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def write_csv(result: ExperimentResult, out_dir) -> tuple[str, str]:
    """Write trajectory.csv (per-timestep mean and standard error) and
    final.csv (one summary row); returns both paths."""
    os.makedirs(out_dir, exist_ok=True)
    traj_path = os.path.join(out_dir, "trajectory.csv")
    final_path = os.path.join(out_dir, "final.csv")
    stats = result.stats
    try:
        with open(traj_path, "w") as fh:
            fh.write(TRAJECTORY_HEADER + "\n")
            for t, (mean, err) in enumerate(zip(stats.mean_g, stats.stderr_g), start=1):
                fh.write(f"{t},{_fmt(mean)},{_fmt(err)}\n")
        with open(final_path, "w") as fh:
            fh.write(FINAL_HEADER + "\n")
            fh.write(
                ",".join(
                    [
                        result.config.algorithm.algorithm,
                        result.config.algorithm.utility.label(),
                        _fmt(stats.final_mean),
                        _fmt(stats.final_stderr),
                        _fmt(stats.best),
                        _fmt(stats.worst),
                        _fmt(stats.percent_optimum),
                    ]
                )
                + "\n"
            )
    except OSError as exc:
        raise OSError(f"writing results under {out_dir}: {exc}") from exc
    return traj_path, final_path
