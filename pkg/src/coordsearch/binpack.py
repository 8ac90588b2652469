"""Bin packing as a collective: each agent picks the bin for one item.

The hard objective is the number of occupied bins.  Search instead drives a
soft objective that scores each bin by how far it is from being exactly full
or exactly empty (overfull bins are representable and penalized, not
forbidden).  There are as many potential bins as items.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as kernels
from .model import MINIMIZE, ConfigurationError, Problem

CLAMP_EMPTY = "empty"


@dataclass(frozen=True)
class BinPackInstance:
    capacity: float
    sizes: tuple[float, ...]

    def __post_init__(self):
        if self.capacity <= 0:
            raise ValueError("capacity must be positive")
        if not self.sizes:
            raise ValueError("instance needs at least one item")
        for s in self.sizes:
            if not 0 < s < self.capacity:
                raise ValueError(f"item size {s} must lie strictly in (0, capacity)")

    @property
    def n_items(self) -> int:
        return len(self.sizes)

    @property
    def n_bins(self) -> int:
        return len(self.sizes)

    def sizes_array(self) -> np.ndarray:
        return np.array(self.sizes, dtype=np.float64)


def gsoft_term(x: float, capacity: float) -> float:
    """One bin's soft-objective contribution: 0 when empty or exactly full,
    maximal at half full, quadratic growth when overfull."""
    half = capacity / 2.0
    if x <= capacity:
        return half * half - (x - half) ** 2
    return (x - half) ** 2


def bin_loads(instance: BinPackInstance, z) -> np.ndarray:
    return kernels.bin_loads(
        np.asarray(z, dtype=np.int64), instance.sizes_array(), instance.n_bins
    )


def g_soft(instance: BinPackInstance, loads) -> float:
    return kernels.gsoft_total(np.asarray(loads, dtype=np.float64), instance.capacity)


def g_bins(instance: BinPackInstance, z) -> int:
    """Hard objective: number of occupied bins."""
    return int(len(set(int(b) for b in z)))


def clamp_binpack(instance: BinPackInstance, z, eta: int) -> np.ndarray:
    """Bin loads with item eta removed from every bin (the zero clamp)."""
    loads = bin_loads(instance, z)
    loads[int(z[eta])] -= instance.sizes[eta]
    return loads


def meanfield_loads(instance: BinPackInstance, eta: int, z) -> np.ndarray:
    """Loads with item eta spread uniformly, size/n_bins into every bin."""
    loads = clamp_binpack(instance, z, eta)
    loads += instance.sizes[eta] / instance.n_bins
    return loads


def meanfield_g_binpack(instance: BinPackInstance, eta: int, z) -> float:
    return g_soft(instance, meanfield_loads(instance, eta, z))


def lower_bound(instance: BinPackInstance) -> int:
    """ceil(total size / capacity): no packing can occupy fewer bins."""
    return math.ceil(sum(instance.sizes) / instance.capacity - 1e-12)


def generate_instance(
    n_items: int,
    capacity: float,
    rng_seed,
    max_size: float | None = None,
    integral: bool = True,
) -> BinPackInstance:
    """Seeded instance with item sizes drawn uniformly.

    Default draws integers in [1, max(1, floor(capacity/4))].  Non-integral
    draws are uniform in (0, max_size) and resampled if they land outside.
    """
    rng = np.random.default_rng(rng_seed)
    if max_size is None:
        max_size = max(1, int(capacity // 4)) if integral else capacity
    if max_size >= capacity and integral:
        max_size = capacity - 1
    if max_size < 1 and integral:
        raise ValueError("integral sizes need capacity >= 2")
    sizes = []
    while len(sizes) < n_items:
        if integral:
            s = float(rng.integers(1, int(max_size) + 1))
        else:
            s = float(rng.uniform(0.0, max_size))
        if 0 < s < capacity:
            sizes.append(s)
    return BinPackInstance(capacity=capacity, sizes=tuple(sizes))


def _number_text(x: float) -> str:
    return str(int(x)) if float(x) == int(x) else repr(float(x))


def write_instance(instance: BinPackInstance, path) -> None:
    """Line 1: "N c"; then one size per line.  Integer sizes round-trip bit-exactly."""
    with open(path, "w") as fh:
        fh.write(f"{instance.n_items} {_number_text(instance.capacity)}\n")
        for s in instance.sizes:
            fh.write(_number_text(s) + "\n")


def read_instance(path) -> BinPackInstance:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError(f"{path}: expected header 'N c'")
        n, capacity = int(header[0]), float(header[1])
        sizes = tuple(float(line) for line in fh if line.strip())
    if len(sizes) != n:
        raise ValueError(f"{path}: header says {n} items, found {len(sizes)}")
    return BinPackInstance(capacity=capacity, sizes=sizes)


class BinPackProblem(Problem):
    """Search drives -g_soft; performance is reported as the occupied-bin count."""

    objective_sense = MINIMIZE
    clamp_kinds = (CLAMP_EMPTY,)
    default_clamp_kind = CLAMP_EMPTY
    absent_clamp_kind = CLAMP_EMPTY

    def __init__(self, instance: BinPackInstance):
        self.instance = instance
        self.agent_count = instance.n_items
        self._sizes = instance.sizes_array()

    def move_count(self, eta: int) -> int:
        return self.instance.n_bins

    def world_utility(self, z) -> float:
        return g_soft(self.instance, bin_loads(self.instance, z))

    def reported_value(self, z) -> float:
        return float(g_bins(self.instance, z))

    def clamped_world_utility(self, z, eta: int, clamp_kind: str) -> float:
        if clamp_kind != CLAMP_EMPTY:
            raise ConfigurationError(f"bin packing has no clamp kind {clamp_kind!r}")
        return g_soft(self.instance, clamp_binpack(self.instance, z, eta))

    def meanfield_world_utility(self, z, eta: int) -> float:
        return meanfield_g_binpack(self.instance, eta, z)

    def private_utilities(self, z, choice) -> np.ndarray:
        assign = np.asarray(z, dtype=np.int64)
        loads = kernels.bin_loads(assign, self._sizes, self.instance.n_bins)
        if choice.kind == "tg":
            return np.full(
                self.agent_count, kernels.gsoft_total(loads, self.instance.capacity)
            )
        if choice.kind == "au":
            return kernels.binpack_au_all(assign, self._sizes, loads, self.instance.capacity)
        if choice.kind == "wlu" and choice.clamp not in (None, CLAMP_EMPTY):
            raise ConfigurationError(f"bin packing has no clamp kind {choice.clamp!r}")
        return kernels.binpack_wlu_all(assign, self._sizes, loads, self.instance.capacity)
