"""Random-walk recommendation workload over the partitioned graph.

Serving a request launches many damping random walks from the querying node;
the most-visited nodes are the recommendation, and every hop whose endpoints
sit on different partitions is one dependency (a remote fetch). The mean
dependency count per request is the compute-time signal the optimizer climbs
against.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass

from . import seeds
from .graph import NodeId, PartitionedGraph


@dataclass(frozen=True)
class WalkConfig:
    walks_per_request: int = 1000
    alpha: float = 0.9  # damping: continue probability per step
    min_hops: int = 3  # steps before termination may trigger
    seed: int = 0

    def __post_init__(self):
        if self.walks_per_request < 1:
            raise ValueError("walks_per_request must be >= 1")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must be in (0,1)")
        if self.min_hops < 0:
            raise ValueError("min_hops must be >= 0")


@dataclass
class RequestResult:
    center: NodeId
    dependencies: int
    visit_counts: Counter

    def top_items(self, k: int = 10, exclude_center: bool = True) -> list[tuple[NodeId, int]]:
        """Most-visited nodes, highest count first, ties by node id."""
        items = [
            (v, c)
            for v, c in self.visit_counts.items()
            if not (exclude_center and v == self.center)
        ]
        items.sort(key=lambda vc: (-vc[1], vc[0]))
        return items[:k]


def random_walk(
    start: NodeId, g: PartitionedGraph, cfg: WalkConfig, rng: random.Random
) -> tuple[list[NodeId], int]:
    """One damping walk from ``start``.

    Each step moves to a uniformly random neighbor; with probability
    1 - alpha the walk terminates instead, except during the first
    ``min_hops`` steps where termination is suppressed. Returns the full
    trajectory (including the start) and the number of partition-crossing
    hops. A dead end (isolated node) ends the walk.
    """
    trace = [start]
    dependencies = 0
    current = start
    steps = 0
    while True:
        if steps >= cfg.min_hops and rng.random() > cfg.alpha:
            break
        neighbors = g.neighbors(current)
        if not neighbors:
            break
        nxt = neighbors[rng.randrange(len(neighbors))]
        if g.partition_of(nxt) != g.partition_of(current):
            dependencies += 1
        trace.append(nxt)
        current = nxt
        steps += 1
    return trace, dependencies


def serve_request(
    center: NodeId,
    g: PartitionedGraph,
    cfg: WalkConfig,
    request_seed: int | None = None,
) -> RequestResult:
    """Aggregate ``walks_per_request`` walks from ``center``.

    Each walk draws from its own sub-seeded RNG, so serial and parallel
    execution aggregate identically.
    """
    base = cfg.seed if request_seed is None else request_seed
    total_deps = 0
    visits: Counter = Counter()
    for w in range(cfg.walks_per_request):
        rng = random.Random(seeds.derive(base, seeds.WALKS, w))
        trace, deps = random_walk(center, g, cfg, rng)
        total_deps += deps
        visits.update(trace[1:])  # nodes stepped onto; the start is not a visit
    return RequestResult(center=center, dependencies=total_deps, visit_counts=visits)


def run_request_batch(
    g: PartitionedGraph, cfg: WalkConfig, batch_size: int, seed: int | None = None
) -> float:
    """Mean dependency count over a batch of uniformly centered requests.

    This is the generic request batch the optimizer replays as its compute-
    time feedback: a fixed seed fixes both the centers and every walk.
    """
    if batch_size < 1:
        raise ValueError("batch_size must be >= 1")
    if g.node_count == 0:
        raise ValueError("cannot run requests on an empty graph")
    base = cfg.seed if seed is None else seed
    nodes = sorted(g.assignment)
    rng = random.Random(seeds.derive(base, seeds.BATCH))
    total = 0
    for i in range(batch_size):
        center = nodes[rng.randrange(len(nodes))]
        result = serve_request(center, g, cfg, request_seed=seeds.derive(base, seeds.BATCH, i))
        total += result.dependencies
    return total / batch_size
