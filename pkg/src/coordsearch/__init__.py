"""Collective coordinate search: agent-shaped annealing with difference-utility payoffs."""

from ._kernels import BACKEND as KERNEL_BACKEND
from .model import (
    AU,
    ECON,
    TEAM_GAME,
    WLU,
    ConfigurationError,
    ContractViolation,
    Problem,
    UtilityChoice,
    factoredness_check,
    private_utility,
    world_utility,
)
from .search import AlgorithmConfig, run_search

__all__ = [
    "KERNEL_BACKEND",
    "AU",
    "ECON",
    "TEAM_GAME",
    "WLU",
    "ConfigurationError",
    "ContractViolation",
    "Problem",
    "UtilityChoice",
    "factoredness_check",
    "private_utility",
    "world_utility",
    "AlgorithmConfig",
    "run_search",
]
