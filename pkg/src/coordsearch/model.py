"""Joint-move state space, problem abstraction, and shared private-utility forms.

A "collective" is a set of agents, each owning one coordinate of a joint
move vector.  A world utility scores the joint move; each agent is paid a
private utility derived from it: the world utility itself (team game), a
clamped difference (WLU, with problem-defined clamp kinds), a mean-field
difference (AU), or the absent-agent marginal (econ / Groves form).
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

MAXIMIZE = "maximize"
MINIMIZE = "minimize"


class ContractViolation(ValueError):
    """An argument breaks a documented precondition."""


class ConfigurationError(ValueError):
    """Unsupported or inconsistent configuration (e.g. unknown clamp kind)."""


@dataclass(frozen=True)
class UtilityChoice:
    """Which private utility the agents are paid with.

    kind is one of "tg", "wlu", "au", "econ".  ``clamp`` selects a
    problem-defined clamp kind and is meaningful only for "wlu"; None means
    the problem's default clamp.  "econ" is WLU with the problem's
    absent-agent clamp (the agent's exact marginal contribution).
    """

    kind: str
    clamp: str | None = None

    def __post_init__(self):
        if self.kind not in ("tg", "wlu", "au", "econ"):
            raise ConfigurationError(f"unknown utility kind: {self.kind!r}")
        if self.clamp is not None and self.kind != "wlu":
            raise ConfigurationError("an explicit clamp kind is only valid for WLU")

    def label(self) -> str:
        return self.kind if self.clamp is None else f"{self.kind}:{self.clamp}"


TEAM_GAME = UtilityChoice("tg")
WLU = UtilityChoice("wlu")
AU = UtilityChoice("au")
ECON = UtilityChoice("econ")


class Problem(ABC):
    """A collective optimization problem: one agent per coordinate.

    ``world_utility`` is the objective the search drives (possibly a softened
    surrogate); ``reported_value`` is the objective performance is reported
    in.  Both are pure functions of the joint state.
    """

    agent_count: int
    objective_sense: str
    clamp_kinds: tuple[str, ...] = ()
    default_clamp_kind: str = ""
    absent_clamp_kind: str = ""

    @abstractmethod
    def move_count(self, eta: int) -> int: ...

    @abstractmethod
    def world_utility(self, z) -> float: ...

    def reported_value(self, z) -> float:
        return self.world_utility(z)

    @abstractmethod
    def clamped_world_utility(self, z, eta: int, clamp_kind: str) -> float:
        """World utility with agent eta's coordinate replaced by the clamp."""

    @abstractmethod
    def meanfield_world_utility(self, z, eta: int) -> float:
        """World utility with eta's coordinate replaced by its uniform-move expectation."""

    @property
    def sign(self) -> float:
        return 1.0 if self.objective_sense == MAXIMIZE else -1.0

    def signed_objective(self, z) -> float:
        """Maximize-convention objective: +world_utility or -world_utility."""
        return self.sign * self.world_utility(z)

    def private_utilities(self, z, choice: UtilityChoice) -> np.ndarray:
        """Private utility of every agent at z, in raw world-utility units.

        Generic implementation; problems override it with batched kernels.
        """
        return np.array(
            [private_utility(self, choice, eta, z) for eta in range(self.agent_count)]
        )

    def random_state(self, rng: np.random.Generator) -> np.ndarray:
        return np.array(
            [rng.integers(self.move_count(eta)) for eta in range(self.agent_count)],
            dtype=np.int64,
        )


def validate_state(problem: Problem, z) -> None:
    if len(z) != problem.agent_count:
        raise ContractViolation(
            f"state has {len(z)} coordinates, problem has {problem.agent_count} agents"
        )
    for eta, move in enumerate(z):
        if not 0 <= move < problem.move_count(eta):
            raise ContractViolation(f"agent {eta}: move {move} out of range")


def world_utility(problem: Problem, z) -> float:
    validate_state(problem, z)
    return problem.world_utility(z)


def resolve_clamp(problem: Problem, choice: UtilityChoice) -> str:
    if choice.kind == "econ":
        return problem.absent_clamp_kind
    kind = choice.clamp if choice.clamp is not None else problem.default_clamp_kind
    if kind not in problem.clamp_kinds:
        raise ConfigurationError(
            f"clamp kind {kind!r} unsupported; problem offers {problem.clamp_kinds}"
        )
    return kind


def private_utility(problem: Problem, choice: UtilityChoice, eta: int, z) -> float:
    """Agent eta's payoff at z, in raw world-utility units.

    Reference (unbatched) path; always computes the clamped/mean-field term
    by full re-evaluation of the world utility.
    """
    validate_state(problem, z)
    if not 0 <= eta < problem.agent_count:
        raise ContractViolation(f"agent index {eta} out of range")
    if choice.kind == "tg":
        return problem.world_utility(z)
    if choice.kind == "au":
        return problem.world_utility(z) - problem.meanfield_world_utility(z, eta)
    kind = resolve_clamp(problem, choice)
    return problem.world_utility(z) - problem.clamped_world_utility(z, eta, kind)


def _sgn(x: float) -> int:
    return (x > 0) - (x < 0)


def factoredness_check(
    problem: Problem, choice: UtilityChoice, eta: int, z, alt_move: int
) -> bool:
    """True iff the private utility ranks z against the single-coordinate
    variant z' the same way the world utility does.

    Zero differences agree only with zero differences (strict ranking).
    """
    if not 0 <= alt_move < problem.move_count(eta):
        raise ContractViolation(f"agent {eta}: alternative move {alt_move} out of range")
    z_alt = np.array(z, dtype=np.int64)
    z_alt[eta] = alt_move
    dg = private_utility(problem, choice, eta, z) - private_utility(
        problem, choice, eta, z_alt
    )
    dw = problem.world_utility(z) - problem.world_utility(z_alt)
    return _sgn(dg) == _sgn(dw)
