"""Tabular per-agent learner: decayed payoff averages and Boltzmann move choice."""

from __future__ import annotations

import math


class OrderingError(ValueError):
    """Payoff samples must arrive in nondecreasing timestep order."""


class PayoffTable:
    """Record of (time, move, payoff) samples with exponential time decay.

    Each move keeps a decayed payoff sum and a decayed weight sum; their
    ratio is the decayed average.  Payoffs follow the maximize convention:
    higher is better.
    """

    __slots__ = ("decay", "payoff_sums", "weight_sums", "last_update")

    def __init__(self, move_count: int, decay: float = 0.95):
        if move_count < 1:
            raise ValueError("move_count must be positive")
        if not 0.0 < decay <= 1.0:
            raise ValueError("decay must be in (0, 1]")
        self.decay = decay
        self.payoff_sums = [0.0] * move_count
        self.weight_sums = [0.0] * move_count
        self.last_update = 0

    @property
    def move_count(self) -> int:
        return len(self.payoff_sums)

    def record(self, t: int, move: int, payoff: float) -> "PayoffTable":
        """Fold one (t, move, payoff) sample in, decaying older samples by
        decay**(t - last_update) first."""
        if t < self.last_update:
            raise OrderingError(
                f"timestep {t} precedes last recorded timestep {self.last_update}"
            )
        if t > self.last_update and self.decay < 1.0:
            factor = self.decay ** (t - self.last_update)
            for m in range(len(self.payoff_sums)):
                self.payoff_sums[m] *= factor
                self.weight_sums[m] *= factor
        self.payoff_sums[move] += payoff
        self.weight_sums[move] += 1.0
        self.last_update = t
        return self

    def average(self, move: int) -> float | None:
        w = self.weight_sums[move]
        return None if w == 0.0 else self.payoff_sums[move] / w

    def averages(self) -> list[float | None]:
        return [self.average(m) for m in range(self.move_count)]

    def move_distribution(self, t_learn: float) -> list[float]:
        """Boltzmann distribution over moves from the decayed averages.

        Unsampled moves take the mean of the sampled averages (0 if nothing
        is sampled yet).  Computed with max subtraction, so it is stable for
        any finite averages and any t_learn > 0.
        """
        if t_learn <= 0.0:
            raise ValueError("learning temperature must be positive")
        avgs = self.averages()
        sampled = [a for a in avgs if a is not None]
        default = sum(sampled) / len(sampled) if sampled else 0.0
        values = [default if a is None else a for a in avgs]
        hi = max(values)
        weights = [math.exp((v - hi) / t_learn) for v in values]
        total = sum(weights)
        return [w / total for w in weights]
