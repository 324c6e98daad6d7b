"""Online placement strategies: random hashing, stream-greedy, and the
full-knowledge weighted-greedy baseline.

All three are single-pass: once placed, a node is never reassigned by its
partitioner (only the optimizer migrates). Placement is sequential per
stream; identical stream + seed + strategy give identical assignments.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import seeds
from .graph import (
    EdgeEvent,
    MetricsSample,
    NodeId,
    PartitionFullError,
    PartitionId,
    PartitionedGraph,
)


@dataclass(frozen=True)
class PlacementDecision:
    """Audit record of one endpoint placement."""

    node: NodeId
    partition: PartitionId
    reason: str  # existing | co-located | least-occupied | hash | weighted-greedy


def hash_partition(node: NodeId, salt: int, k: int) -> PartitionId:
    """Partition choice by hashing the node id: splitmix64(mix(salt) ^ id) mod k,
    1-based. The mixer constants live in ``seeds`` and the README."""
    return seeds.splitmix64(seeds.splitmix64(salt) ^ node) % k + 1


def _least_occupied(g: PartitionedGraph) -> PartitionId:
    """Lowest-index partition of minimum size, skipping full ones."""
    best = None
    for p in range(1, g.k + 1):
        size = g.size(p)
        if g.capacity is not None and size >= g.capacity:
            continue
        if best is None or size < best[0]:
            best = (size, p)
    if best is None:
        raise PartitionFullError("all partitions at capacity; cannot place a new node")
    return best[1]


class RandomHashPartitioner:
    """Pregel-style placement: partition = hash(node id) mod k."""

    def __init__(self, salt: int = 0):
        self.salt = salt

    def place(self, e: EdgeEvent, g: PartitionedGraph) -> list[PlacementDecision]:
        decisions = []
        for v in (e.a, e.b):
            if g.is_assigned(v):
                decisions.append(PlacementDecision(v, g.partition_of(v), "existing"))
            else:
                p = hash_partition(v, self.salt, g.k)
                g.assign(v, p)
                decisions.append(PlacementDecision(v, p, "hash"))
        g.add_link(e.a, e.b)
        return decisions


class StreamGreedyPartitioner:
    """Greedy edge-driven placement.

    Both endpoints known: just link. One known: the new endpoint joins the
    known one's partition if it has room, else the least occupied. Both new:
    both go to the least occupied partition (ties to the lowest index).
    """

    def place(self, e: EdgeEvent, g: PartitionedGraph) -> list[PlacementDecision]:
        a_known, b_known = g.is_assigned(e.a), g.is_assigned(e.b)
        if a_known and b_known:
            decisions = [
                PlacementDecision(e.a, g.partition_of(e.a), "existing"),
                PlacementDecision(e.b, g.partition_of(e.b), "existing"),
            ]
        elif a_known or b_known:
            known, new = (e.a, e.b) if a_known else (e.b, e.a)
            home = g.partition_of(known)
            if g.capacity is None or g.size(home) < g.capacity:
                target, reason = home, "co-located"
            else:
                target, reason = _least_occupied(g), "least-occupied"
            g.assign(new, target)
            decisions = [
                PlacementDecision(known, home, "existing"),
                PlacementDecision(new, target, reason),
            ]
        else:
            target = _least_occupied(g)
            g.assign(e.a, target)
            if g.capacity is not None and g.size(target) >= g.capacity:
                second = _least_occupied(g)  # chosen slot filled up; spill
            else:
                second = target
            g.assign(e.b, second)
            decisions = [
                PlacementDecision(e.a, target, "least-occupied"),
                PlacementDecision(e.b, second, "least-occupied"),
            ]
        g.add_link(e.a, e.b)
        return decisions


def place_baseline(
    v: NodeId, full_neighbors: Iterable[NodeId], g: PartitionedGraph
) -> PlacementDecision:
    """Weighted deterministic greedy placement with full neighbor knowledge.

    Scores each partition by (placed neighbors there) * (1 - size/C) and
    assigns to the argmax; ties and all-zero scores fall back to the least
    occupied partition, then the lowest index.
    """
    if g.capacity is None:
        raise ValueError("baseline placement needs a finite capacity")
    counts = [0] * (g.k + 1)
    for u in full_neighbors:
        if g.is_assigned(u):
            counts[g.partition_of(u)] += 1
    best_score, best = 0.0, None
    for p in range(1, g.k + 1):
        score = counts[p] * (1.0 - g.size(p) / g.capacity)
        if score > best_score or (
            score == best_score
            and best is not None
            and score > 0.0
            and (g.size(p), p) < (g.size(best), best)
        ):
            best_score, best = score, p
    if best is None or best_score <= 0.0:
        target, reason = _least_occupied(g), "least-occupied"
    else:
        target, reason = best, "weighted-greedy"
    g.assign(v, target)
    return PlacementDecision(v, target, reason)


def run_stream(
    events: Sequence[EdgeEvent],
    strategy,
    g: PartitionedGraph,
    sample_every: int = 100,
) -> list[MetricsSample]:
    """Feed an edge stream through a placement strategy, sampling metrics
    every ``sample_every`` distinct edges (plus a final sample)."""
    samples: list[MetricsSample] = []
    next_mark = sample_every
    for e in events:
        strategy.place(e, g)
        while g.edge_count >= next_mark:
            samples.append(g.metrics())
            next_mark += sample_every
    if events and (not samples or samples[-1].edges_seen != g.edge_count):
        samples.append(g.metrics())
    return samples


def run_baseline(
    edges: Iterable[tuple[NodeId, NodeId]],
    g: PartitionedGraph,
    seed: int,
    sample_every: int = 100,
) -> list[MetricsSample]:
    """Stream nodes (not edges) in seeded random order with full adjacency
    known up front, linking each edge once both endpoints are placed."""
    adjacency: dict[NodeId, list[NodeId]] = {}
    for a, b in sorted(edges):
        adjacency.setdefault(a, []).append(b)
        adjacency.setdefault(b, []).append(a)
    order = sorted(adjacency)
    random.Random(seeds.derive(seed, seeds.NODE_ORDER)).shuffle(order)

    samples: list[MetricsSample] = []
    next_mark = sample_every
    for v in order:
        place_baseline(v, adjacency[v], g)
        for u in adjacency[v]:
            if g.is_assigned(u):
                g.add_link(v, u)
        while g.edge_count >= next_mark:
            samples.append(g.metrics())
            next_mark += sample_every
    if order and (not samples or samples[-1].edges_seen != g.edge_count):
        samples.append(g.metrics())
    return samples
