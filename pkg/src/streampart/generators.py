"""Synthetic topologies, edge-arrival streams, and the random-partition sampler.

All generators are pure functions of their spec plus a seed; the same inputs
always produce the same edge set, and ``stream`` always produces the same
arrival order.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass

import networkx as nx

from . import seeds
from .graph import EdgeEvent, NodeId

Edge = tuple[NodeId, NodeId]


class GeneratorError(ValueError):
    """Invalid generator spec or parameters."""


def _canon(a: NodeId, b: NodeId) -> Edge:
    return (a, b) if a < b else (b, a)


# -- ring of cliques ------------------------------------------------------------


@dataclass(frozen=True)
class RingSpec:
    """Ring of ``2k`` complete clusters, alternately joined by A and B links.

    A-links sit between clusters (2m, 2m+1), B-links between
    (2m+1, 2m+2 mod 2k), for m in [0, k). Both link counts must stay below
    the cluster size.
    """

    k: int
    cluster_size: int
    a_links: int
    b_links: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.cluster_size < 2:
            raise ValueError("cluster_size must be >= 2")
        if not (0 < self.a_links < self.cluster_size):
            raise ValueError("need 0 < a_links < cluster_size")
        if not (0 < self.b_links < self.cluster_size):
            raise ValueError("need 0 < b_links < cluster_size")

    @property
    def n_clusters(self) -> int:
        return 2 * self.k

    @property
    def n_nodes(self) -> int:
        return self.n_clusters * self.cluster_size


def ring_cluster_nodes(spec: RingSpec, c: int) -> range:
    """Node ids of cluster ``c`` (0-based, clusters laid out contiguously)."""
    if not 0 <= c < spec.n_clusters:
        raise ValueError(f"cluster index {c} out of range")
    lo = c * spec.cluster_size
    return range(lo, lo + spec.cluster_size)


def _between(spec: RingSpec, c1: int, c2: int, count: int, offset: int = 0) -> list[Edge]:
    """The ``count`` lowest-id parallel links between two clusters."""
    xs, ys = ring_cluster_nodes(spec, c1), ring_cluster_nodes(spec, c2)
    return [_canon(xs[offset + t], ys[offset + t]) for t in range(count)]


def gen_ring(spec: RingSpec) -> set[Edge]:
    """Edge set of the ring-of-cliques topology."""
    edges: set[Edge] = set()
    for c in range(spec.n_clusters):
        edges.update(itertools.combinations(ring_cluster_nodes(spec, c), 2))
    for m in range(spec.k):
        edges.update(_between(spec, 2 * m, 2 * m + 1, spec.a_links))
        edges.update(_between(spec, 2 * m + 1, (2 * m + 2) % spec.n_clusters, spec.b_links))
    return edges


def ring_extra_a_edges(spec: RingSpec, per_boundary: int = 2) -> set[Edge]:
    """New edges landing on the A cut: ``per_boundary`` fresh links across
    every A boundary, using the next lowest-id endpoint pairs."""
    if spec.a_links + per_boundary > spec.cluster_size:
        raise ValueError("not enough endpoints for the extra A links")
    extra: set[Edge] = set()
    for m in range(spec.k):
        extra.update(_between(spec, 2 * m, 2 * m + 1, per_boundary, offset=spec.a_links))
    return extra


def cluster_pairings(n_clusters: int):
    """All set partitions of ``range(n_clusters)`` into unordered pairs."""
    if n_clusters % 2:
        raise ValueError("cluster count must be even")

    def rec(rest):
        if not rest:
            yield []
            return
        first, others = rest[0], rest[1:]
        for i, second in enumerate(others):
            pair = (first, second)
            for tail in rec(others[:i] + others[i + 1 :]):
                yield [pair] + tail

    yield from rec(list(range(n_clusters)))


def best_cluster_grouping(spec: RingSpec, edges: set[Edge]) -> tuple[list[tuple[int, int]], int]:
    """Exhaustively find the balanced whole-cluster pairing of minimum cut.

    Balanced assignments that keep clusters intact are exactly the pairings
    of the 2k clusters onto the k servers; splitting a clique costs at least
    cluster_size - 1 internal edges and is never competitive here.
    Returns (pairing, cut_edge_count).
    """
    owner = {}
    for c in range(spec.n_clusters):
        for v in ring_cluster_nodes(spec, c):
            owner[v] = c
    best_pairing, best_cut = None, None
    for pairing in cluster_pairings(spec.n_clusters):
        group = {}
        for gid, (c1, c2) in enumerate(pairing):
            group[c1] = gid
            group[c2] = gid
        cut = sum(1 for a, b in edges if group[owner[a]] != group[owner[b]])
        if best_cut is None or cut < best_cut:
            best_pairing, best_cut = pairing, cut
    return best_pairing, best_cut


@dataclass(frozen=True)
class InstabilityReport:
    before_pairing: tuple[tuple[int, int], ...]
    before_cut: int
    after_pairing: tuple[tuple[int, int], ...]
    after_cut: int
    added_edges: int
    nodes_moved: int
    total_nodes: int


def ring_instability(spec: RingSpec, per_boundary: int = 2) -> InstabilityReport:
    """Demonstrate optimal-partition instability under a burst of A-cut edges.

    Computes the brute-force optimal balanced grouping before and after the
    arrival of ``per_boundary`` new edges on each A boundary, and the minimum
    number of node transfers needed to hop between the two optima.
    """
    edges = gen_ring(spec)
    before_pairing, before_cut = best_cluster_grouping(spec, edges)
    extra = ring_extra_a_edges(spec, per_boundary)
    after_pairing, after_cut = best_cluster_grouping(spec, edges | extra)
    moved = pairing_transfer_count(spec, before_pairing, after_pairing)
    return InstabilityReport(
        before_pairing=tuple(before_pairing),
        before_cut=before_cut,
        after_pairing=tuple(after_pairing),
        after_cut=after_cut,
        added_edges=len(extra),
        nodes_moved=moved,
        total_nodes=spec.n_nodes,
    )


def pairing_transfer_count(spec: RingSpec, p1, p2) -> int:
    """Minimum node transfers to reconfigure grouping ``p1`` into ``p2``,
    minimized over server relabelings."""
    groups1 = [set(pair) for pair in p1]
    groups2 = [set(pair) for pair in p2]
    best_overlap = 0
    for perm in itertools.permutations(range(len(groups2))):
        overlap = sum(len(groups1[i] & groups2[perm[i]]) for i in range(len(groups1)))
        best_overlap = max(best_overlap, overlap)
    return (spec.n_clusters - best_overlap) * spec.cluster_size


# -- vicious four-cluster graph ---------------------------------------------------


@dataclass(frozen=True)
class ViciousSpec:
    """Four complete clusters (sizes N, N, n, n); equal-size clusters joined
    by ``c_links`` parallel links, one N-cluster tied to one n-cluster by two
    single links. Requires N > n > c_links > 1."""

    big: int
    small: int
    c_links: int

    def __post_init__(self):
        if not (self.big > self.small > self.c_links > 1):
            raise ValueError("need big > small > c_links > 1")

    @property
    def n_nodes(self) -> int:
        return 2 * (self.big + self.small)


def vicious_clusters(spec: ViciousSpec) -> tuple[range, range, range, range]:
    """Node id ranges of (N1, N2, n1, n2)."""
    N, n = spec.big, spec.small
    return (
        range(0, N),
        range(N, 2 * N),
        range(2 * N, 2 * N + n),
        range(2 * N + n, 2 * N + 2 * n),
    )


def gen_vicious(spec: ViciousSpec) -> set[Edge]:
    """Edge set of the vicious graph; its global minimum edge cut is the two
    single links between N1 and n1."""
    N1, N2, n1, n2 = vicious_clusters(spec)
    edges: set[Edge] = set()
    for cluster in (N1, N2, n1, n2):
        edges.update(itertools.combinations(cluster, 2))
    for t in range(spec.c_links):
        edges.add(_canon(N1[t], N2[t]))
        edges.add(_canon(n1[t], n2[t]))
    edges.add(_canon(N1[0], n1[0]))
    edges.add(_canon(N1[1], n1[1]))
    return edges


# -- power-law / community generators ---------------------------------------------


def gen_powerlaw_cluster(nodes: int, seed: int, m: int = 2, triad: float = 0.5) -> set[Edge]:
    """Clustered power-law graph: preferential attachment with triad closure.

    ``m`` attachment edges per node and triad probability ``triad`` are fixed
    defaults; the generated graph is connected and deterministic per seed.
    """
    if nodes < 10:
        raise ValueError("need at least 10 nodes")
    g = nx.powerlaw_cluster_graph(nodes, m, triad, seed=seed)
    return {_canon(a, b) for a, b in g.edges()}


def gen_community_graph(
    communities: int,
    community_size: int,
    seed: int,
    m: int = 2,
    triad: float = 0.5,
    bridges_per_pair: int = 3,
) -> set[Edge]:
    """Two-level clustered graph: power-law-clustered communities sparsely
    joined by a few random bridges per community pair."""
    if communities < 2:
        raise ValueError("need at least 2 communities")
    edges: set[Edge] = set()
    for c in range(communities):
        offset = c * community_size
        sub = gen_powerlaw_cluster(community_size, seed=seeds.derive(seed, seeds.GRAPH, c), m=m, triad=triad)
        edges.update(_canon(a + offset, b + offset) for a, b in sub)
    rng = random.Random(seeds.derive(seed, seeds.GRAPH, communities, 1))
    for c1, c2 in itertools.combinations(range(communities), 2):
        placed = 0
        while placed < bridges_per_pair:
            a = c1 * community_size + rng.randrange(community_size)
            b = c2 * community_size + rng.randrange(community_size)
            if _canon(a, b) not in edges:
                edges.add(_canon(a, b))
                placed += 1
    return edges


def build_edge_set(kind: str, params: dict, seed: int) -> set[Edge]:
    """Dispatch a generator by name; used by the experiment harness and CLI."""
    try:
        if kind == "powerlaw":
            return gen_powerlaw_cluster(
                params["nodes"],
                seed=seeds.derive(seed, seeds.GRAPH),
                m=params.get("m", 2),
                triad=params.get("triad", 0.5),
            )
        if kind == "ring":
            return gen_ring(
                RingSpec(params["k"], params["cluster_size"], params["a_links"], params["b_links"])
            )
        if kind == "vicious":
            return gen_vicious(ViciousSpec(params["big"], params["small"], params["c_links"]))
        if kind == "communities":
            return gen_community_graph(
                params["communities"],
                params["community_size"],
                seed=seeds.derive(seed, seeds.GRAPH),
                m=params.get("m", 2),
                triad=params.get("triad", 0.5),
                bridges_per_pair=params.get("bridges_per_pair", 3),
            )
    except (KeyError, ValueError) as exc:
        raise GeneratorError(f"invalid {kind!r} generator spec: {exc}") from exc
    raise GeneratorError(f"unknown generator kind {kind!r}")


# -- streaming and sampling ----------------------------------------------------------


@dataclass(frozen=True)
class StreamOrder:
    """Seeded random arrival order; equal seeds give identical streams."""

    seed: int
    mode: str = "random"

    def __post_init__(self):
        if self.mode != "random":
            raise ValueError(f"unsupported stream mode {self.mode!r}")


def stream(edges: set[Edge], order: StreamOrder) -> list[EdgeEvent]:
    """A seed-deterministic random permutation of ``edges`` as arrival events."""
    ordered = sorted(edges)
    rng = random.Random(seeds.derive(order.seed, seeds.STREAM_ORDER))
    rng.shuffle(ordered)
    return [EdgeEvent(a, b) for a, b in ordered]


def sample_random_partitions(
    edges: set[Edge], k: int, trials: int, seed: int
) -> list[tuple[float, float]]:
    """(balance, cut_score) of ``trials`` independent uniform node placements.

    Assignments are unconstrained, so balance is an outcome, not an input;
    per-trial RNG streams derive from the master seed.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    nodes = sorted({v for e in edges for v in e})
    out: list[tuple[float, float]] = []
    for t in range(trials):
        rng = random.Random(seeds.derive(seed, seeds.TRIALS, t))
        part = {v: rng.randrange(k) for v in nodes}
        sizes = [0] * k
        for v in nodes:
            sizes[part[v]] += 1
        balance = (min(sizes) / max(sizes)) if max(sizes) else 1.0
        if edges:
            crossing = sum(1 for a, b in edges if part[a] != part[b])
            cut = 1.0 - crossing / len(edges)
        else:
            cut = 1.0
        out.append((balance, cut))
    return out
