import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from coordsearch.model import MAXIMIZE, Problem


class TableProblem(Problem):
    """Toy problem whose world utility is read from an explicit table.

    ``table`` maps joint-move tuples to values; handy for pinning exact
    utility landscapes in unit tests.  Clamps replace a coordinate with a
    fixed move index; the mean field averages over the agent's moves.
    """

    clamp_kinds = ("zero",)
    default_clamp_kind = "zero"
    absent_clamp_kind = "zero"

    def __init__(self, move_counts, table, sense=MAXIMIZE):
        self.move_counts = tuple(move_counts)
        self.agent_count = len(move_counts)
        self.table = table
        self.objective_sense = sense

    def move_count(self, eta):
        return self.move_counts[eta]

    def world_utility(self, z):
        return float(self.table[tuple(int(m) for m in z)])

    def clamped_world_utility(self, z, eta, clamp_kind):
        z2 = list(int(m) for m in z)
        z2[eta] = 0
        return float(self.table[tuple(z2)])

    def meanfield_world_utility(self, z, eta):
        z2 = list(int(m) for m in z)
        total = 0.0
        for m in range(self.move_counts[eta]):
            z2[eta] = m
            total += float(self.table[tuple(z2)])
        return total / self.move_counts[eta]


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
