"""Music-format choice game on ring networks with extra shortcut links.

Each of m players picks which one of 4 formats NOT to use.  The world
utility sums, over players, formats, and network neighbors within the hop
radius, (format popularity) x (shared use with that neighbor) x (intrinsic
preference).  Popularity counts all players, acting as an inverse price.
Clamping a player to "all formats" is the zero clamp on its exclusion
choice; clamping to "no formats" removes the player economically (Groves
style marginal contribution).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as kernels
from .model import MAXIMIZE, ConfigurationError, Problem

SHORT_LINKS = "short_links"
SMALL_WORLDS = "small_worlds"
TOPOLOGIES = (SHORT_LINKS, SMALL_WORLDS)

N_FORMATS = 4

CLAMP_ALL_FORMATS = "all_formats"
CLAMP_NO_FORMATS = "no_formats"


@dataclass(frozen=True)
class FormatNetwork:
    n_nodes: int
    edges: frozenset  # of (i, j) pairs with i < j, ring edges included
    topology: str = SMALL_WORLDS

    def __post_init__(self):
        for i, j in self.edges:
            if not (0 <= i < j < self.n_nodes):
                raise ValueError(f"bad edge ({i}, {j})")

    def adjacency_lists(self) -> list[list[int]]:
        adj = [[] for _ in range(self.n_nodes)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return [sorted(a) for a in adj]


def ring_edges(m: int) -> set:
    return {tuple(sorted((i, (i + 1) % m))) for i in range(m)}


def build_network(
    m: int, topology: str, extra_link_fraction: float = 0.06, rng_seed=0
) -> FormatNetwork:
    """Ring of m nodes plus round(extra_link_fraction * m) distinct extra edges.

    short_links restricts extras to pairs exactly two ring hops apart;
    small_worlds samples uniformly over all non-ring, non-duplicate pairs.
    """
    if topology not in TOPOLOGIES:
        raise ConfigurationError(f"unknown topology {topology!r}")
    if m < 3:
        raise ValueError("need at least 3 nodes for a ring")
    rng = np.random.default_rng(rng_seed)
    edges = ring_edges(m)
    n_extra = round(extra_link_fraction * m)
    if topology == SHORT_LINKS:
        if m <= 4 and n_extra > 0:
            raise ValueError("short_links needs m > 4: distance-2 pairs collapse onto the ring")
        candidates = {tuple(sorted((i, (i + 2) % m))) for i in range(m)} - edges
        if n_extra > len(candidates):
            raise ValueError("not enough distance-2 pairs for the requested extras")
        order = sorted(candidates)
        picks = rng.choice(len(order), size=n_extra, replace=False)
        extras = {order[k] for k in picks}
    else:
        extras = set()
        while len(extras) < n_extra:
            i = int(rng.integers(m))
            j = int(rng.integers(m))
            if i == j:
                continue
            e = (min(i, j), max(i, j))
            if e in edges or e in extras:
                continue
            extras.add(e)
    return FormatNetwork(n_nodes=m, edges=frozenset(edges | extras), topology=topology)


def neighborhoods(network: FormatNetwork, hop_radius: int) -> list[list[int]]:
    """For every node, the sorted nodes at graph distance 1..hop_radius (self excluded)."""
    if hop_radius < 1:
        raise ValueError("hop radius must be >= 1")
    adj = network.adjacency_lists()
    result = []
    for source in range(network.n_nodes):
        seen = {source: 0}
        queue = deque([source])
        while queue:
            node = queue.popleft()
            if seen[node] == hop_radius:
                continue
            for nxt in adj[node]:
                if nxt not in seen:
                    seen[nxt] = seen[node] + 1
                    queue.append(nxt)
        del seen[source]
        result.append(sorted(seen))
    return result


def dump_edges(network: FormatNetwork, path) -> None:
    """Edge-list dump: header "m=<m>", then one "i j" line per edge, i < j."""
    with open(path, "w") as fh:
        fh.write(f"m={network.n_nodes}\n")
        for i, j in sorted(network.edges):
            fh.write(f"{i} {j}\n")


def load_edges(path, topology: str = SMALL_WORLDS) -> FormatNetwork:
    with open(path) as fh:
        header = fh.readline().strip()
        if not header.startswith("m="):
            raise ValueError(f"{path}: expected header 'm=<m>'")
        m = int(header[2:])
        edges = set()
        for line in fh:
            if line.strip():
                i, j = map(int, line.split())
                edges.add((i, j))
    return FormatNetwork(n_nodes=m, edges=frozenset(edges), topology=topology)


@dataclass
class FormatGameInstance:
    network: FormatNetwork
    hop_radius: int
    prefs: np.ndarray  # (m, N_FORMATS) in [0, 1]
    neighborhoods: list[list[int]]
    _indptr: np.ndarray = field(init=False, repr=False)
    _indices: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.prefs = np.asarray(self.prefs, dtype=np.float64)
        if self.prefs.shape != (self.network.n_nodes, N_FORMATS):
            raise ValueError("prefs must be (m, 4)")
        if self.prefs.min() < 0.0 or self.prefs.max() > 1.0:
            raise ValueError("prefs must lie in [0, 1]")
        counts = [len(nb) for nb in self.neighborhoods]
        self._indptr = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
        self._indices = np.array(
            [b for nb in self.neighborhoods for b in nb], dtype=np.int64
        )

    @property
    def n_agents(self) -> int:
        return self.network.n_nodes


def make_instance(
    network: FormatNetwork,
    hop_radius: int,
    prefs: np.ndarray | None = None,
    rng_seed=None,
    neighborhood_override: list[list[int]] | None = None,
) -> FormatGameInstance:
    if prefs is None:
        prefs = np.random.default_rng(rng_seed).uniform(
            0.0, 1.0, size=(network.n_nodes, N_FORMATS)
        )
    nbhd = (
        neighborhood_override
        if neighborhood_override is not None
        else neighborhoods(network, hop_radius)
    )
    return FormatGameInstance(
        network=network, hop_radius=hop_radius, prefs=prefs, neighborhoods=nbhd
    )


def usage_matrix(instance: FormatGameInstance, z) -> np.ndarray:
    """(m, 4) usage indicator from the excluded-format move vector."""
    usage = np.ones((instance.n_agents, N_FORMATS), dtype=np.float64)
    usage[np.arange(instance.n_agents), np.asarray(z, dtype=np.int64)] = 0.0
    return usage


def clamp_usage_row(clamp_kind: str) -> np.ndarray:
    if clamp_kind == CLAMP_ALL_FORMATS:
        return np.ones(N_FORMATS)
    if clamp_kind == CLAMP_NO_FORMATS:
        return np.zeros(N_FORMATS)
    raise ConfigurationError(f"format game has no clamp kind {clamp_kind!r}")


def g_formats_usage(instance: FormatGameInstance, usage: np.ndarray) -> float:
    """World utility of an arbitrary (fractional allowed) usage matrix."""
    return kernels.formats_g(
        np.ascontiguousarray(usage, dtype=np.float64),
        instance.prefs,
        instance._indptr,
        instance._indices,
    )


def g_formats(instance: FormatGameInstance, z) -> float:
    return g_formats_usage(instance, usage_matrix(instance, z))


def format_counts(instance: FormatGameInstance, z) -> np.ndarray:
    """Per-format user counts across all agents (the inverse price)."""
    return usage_matrix(instance, z).sum(axis=0)


def clamped_g_formats(instance: FormatGameInstance, z, eta: int, clamp_kind: str) -> float:
    """Full re-evaluation with eta's usage row replaced by the clamp."""
    usage = usage_matrix(instance, z)
    usage[eta] = clamp_usage_row(clamp_kind)
    return g_formats_usage(instance, usage)


def meanfield_g_formats(instance: FormatGameInstance, eta: int, z) -> float:
    """Re-evaluation with eta's usage row at its uniform-move expectation (0.75)."""
    usage = usage_matrix(instance, z)
    usage[eta] = (N_FORMATS - 1) / N_FORMATS
    return g_formats_usage(instance, usage)


class FormatGameProblem(Problem):
    objective_sense = MAXIMIZE
    clamp_kinds = (CLAMP_ALL_FORMATS, CLAMP_NO_FORMATS)
    default_clamp_kind = CLAMP_ALL_FORMATS
    absent_clamp_kind = CLAMP_NO_FORMATS

    def __init__(self, instance: FormatGameInstance):
        self.instance = instance
        self.agent_count = instance.n_agents

    def move_count(self, eta: int) -> int:
        return N_FORMATS

    def world_utility(self, z) -> float:
        return g_formats(self.instance, z)

    def clamped_world_utility(self, z, eta: int, clamp_kind: str) -> float:
        return clamped_g_formats(self.instance, z, eta, clamp_kind)

    def meanfield_world_utility(self, z, eta: int) -> float:
        return meanfield_g_formats(self.instance, eta, z)

    def private_utilities(self, z, choice) -> np.ndarray:
        inst = self.instance
        usage = usage_matrix(inst, z)
        if choice.kind == "tg":
            return np.full(self.agent_count, g_formats_usage(inst, usage))
        if choice.kind == "au":
            row = np.full(N_FORMATS, (N_FORMATS - 1) / N_FORMATS)
        elif choice.kind == "econ":
            row = clamp_usage_row(CLAMP_NO_FORMATS)
        else:
            kind = choice.clamp if choice.clamp is not None else self.default_clamp_kind
            row = clamp_usage_row(kind)
        return kernels.formats_private_all(
            usage, inst.prefs, inst._indptr, inst._indices, row
        )
