"""Per-timestep dynamics of the four search algorithms.

All four share one proposal/acceptance skeleton:

* ``sa``     -- sticky exploration mixture, Boltzmann acceptance.
* ``ic``     -- the sticky mixture reshaped per coordinate by each agent's
                learned move distribution, same Boltzmann acceptance.
* ``coin``   -- agents sample their learned distributions directly and the
                joint move is always adopted (no acceptance layer).
* ``random`` -- every coordinate uniform, always adopted.

Objectives are handled in the maximize convention (signed objective); the
learner is paid the signed private utility of the explored joint move.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .learner import PayoffTable
from .model import TEAM_GAME, ContractViolation, Problem, UtilityChoice

SA = "sa"
IC = "ic"
COIN = "coin"
RANDOM = "random"

ALGORITHMS = (SA, IC, COIN, RANDOM)
_TABLE_ALGORITHMS = (IC, COIN)


@dataclass
class AlgorithmConfig:
    algorithm: str = SA
    utility: UtilityChoice = TEAM_GAME
    stay_probability: float = 0.75
    t_exploit_initial: float = 0.5
    anneal_factor: float = 0.8
    anneal_period: int = 100
    t_learn: float = 0.2
    warmup_steps: int = 0
    horizon: int = 200
    # SA only: (start, end) linear ramp of stay_probability over the horizon
    stay_narrowing: tuple[float, float] | None = None
    payoff_decay: float = 0.95
    econ_rescale: float = 1.0

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if not 0.0 <= self.stay_probability <= 1.0:
            raise ValueError("stay_probability must be in [0, 1]")
        if self.t_exploit_initial <= 0 or self.t_learn <= 0:
            raise ValueError("temperatures must be positive")
        if not 0.0 < self.anneal_factor <= 1.0:
            raise ValueError("anneal_factor must be in (0, 1]")
        if self.anneal_period < 1:
            raise ValueError("anneal_period must be >= 1")
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")
        if self.warmup_steps < 0:
            raise ValueError("warmup_steps must be >= 0")

    def uses_tables(self) -> bool:
        return self.algorithm in _TABLE_ALGORITHMS


@dataclass
class SearchState:
    current: np.ndarray
    signed_value: float
    t_exploit: float
    rng: np.random.Generator
    t: int = 0
    exploitation_steps: int = 0
    tables: list[PayoffTable] | None = None


def init_state(problem: Problem, config: AlgorithmConfig, rng: np.random.Generator) -> SearchState:
    current = problem.random_state(rng)
    tables = None
    if config.uses_tables():
        tables = [
            PayoffTable(problem.move_count(eta), config.payoff_decay)
            for eta in range(problem.agent_count)
        ]
    return SearchState(
        current=current,
        signed_value=problem.signed_objective(current),
        t_exploit=config.t_exploit_initial,
        rng=rng,
        tables=tables,
    )


def current_stay_probability(config: AlgorithmConfig, t: int) -> float:
    if config.algorithm == SA and config.stay_narrowing is not None:
        start, end = config.stay_narrowing
        return start + (end - start) * min(t / config.horizon, 1.0)
    return config.stay_probability


def in_warmup(state: SearchState, config: AlgorithmConfig) -> bool:
    return config.uses_tables() and state.t < config.warmup_steps


def exploration_distribution(
    state: SearchState, eta: int, config: AlgorithmConfig, problem: Problem
) -> list[float]:
    """The distribution agent eta's exploration move is sampled from."""
    n = problem.move_count(eta)
    if n == 1:
        return [1.0]
    if config.algorithm == RANDOM:
        return [1.0 / n] * n
    stay = current_stay_probability(config, state.t)
    spread = (1.0 - stay) / (n - 1)
    h = [spread] * n
    h[state.current[eta]] = stay
    if config.algorithm == SA:
        return h
    c = state.tables[eta].move_distribution(config.t_learn)
    if config.algorithm == COIN:
        return c
    product = [hi * ci for hi, ci in zip(h, c)]
    total = sum(product)
    if total <= 0.0:  # all learned mass underflowed off h's support
        return h
    return [p / total for p in product]


def sample_index(rng: np.random.Generator, probs: list[float]) -> int:
    r = rng.random()
    acc = 0.0
    for i, p in enumerate(probs):
        acc += p
        if r < acc:
            return i
    return len(probs) - 1


def propose(state: SearchState, config: AlgorithmConfig, problem: Problem) -> np.ndarray:
    """Exploration joint move: every coordinate sampled independently.

    During the learner warm-up every coordinate is uniform.
    """
    if in_warmup(state, config):
        return problem.random_state(state.rng)
    return np.array(
        [
            sample_index(state.rng, exploration_distribution(state, eta, config, problem))
            for eta in range(problem.agent_count)
        ],
        dtype=np.int64,
    )


def accept_probability(u_current: float, u_proposed: float, t_exploit: float) -> float:
    """Probability of adopting the proposal (signed, maximize convention).

    Strict improvements are always taken; otherwise the two-state Boltzmann
    choice at the exploitation temperature.
    """
    if u_proposed > u_current:
        return 1.0
    gap = (u_current - u_proposed) / t_exploit
    if gap > 700.0:
        return 0.0
    return 1.0 / (1.0 + math.exp(gap))


def accept(u_current: float, u_proposed: float, t_exploit: float, rng) -> bool:
    p = accept_probability(u_current, u_proposed, t_exploit)
    if p >= 1.0:
        return True
    return rng.random() < p


def step(state: SearchState, config: AlgorithmConfig, problem: Problem) -> SearchState:
    """Advance one timestep in place and return the state."""
    if state.t >= config.horizon:
        raise ContractViolation("step past the configured horizon")
    warm = in_warmup(state, config)
    z_expl = propose(state, config, problem)
    g_expl = problem.world_utility(z_expl)
    u_expl = problem.sign * g_expl

    if state.tables is not None:
        if config.utility.kind == "tg":
            payoffs = np.full(problem.agent_count, g_expl)
        else:
            payoffs = problem.private_utilities(z_expl, config.utility)
        scale = problem.sign
        if config.utility.kind == "econ":
            scale *= config.econ_rescale
        for eta, table in enumerate(state.tables):
            table.record(state.t, int(z_expl[eta]), scale * float(payoffs[eta]))

    if warm or config.algorithm in (COIN, RANDOM):
        adopted = True
    else:
        adopted = accept(state.signed_value, u_expl, state.t_exploit, state.rng)
    if adopted:
        state.current = z_expl
        state.signed_value = u_expl

    if not warm:
        state.exploitation_steps += 1
        if state.exploitation_steps % config.anneal_period == 0:
            state.t_exploit *= config.anneal_factor
    state.t += 1
    return state


def run_search(
    problem: Problem, config: AlgorithmConfig, rng: np.random.Generator
) -> tuple[list[float], SearchState]:
    """One full run; returns the per-timestep reported values and final state."""
    state = init_state(problem, config, rng)
    trajectory = []
    for _ in range(config.horizon):
        step(state, config, problem)
        trajectory.append(problem.reported_value(state.current))
    return trajectory, state
