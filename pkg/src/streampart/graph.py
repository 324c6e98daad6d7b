"""Partitioned streamed-graph state and its two quality metrics.

Edges arrive one at a time; nodes live on exactly one of k partition-local
adjacency stores, and a central assignment table maps every node seen so far
to its partition. Cut and balance metrics are maintained incrementally, with
full rescans kept around for cross-checking in tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

NodeId = int
PartitionId = int  # 1-based, in [1, k]


class UnassignedNodeError(RuntimeError):
    """An operation touched a node that has no partition assignment."""


class PartitionFullError(RuntimeError):
    """A new node could not be placed without violating capacity."""


@dataclass(frozen=True)
class EdgeEvent:
    """One element of the input stream: an undirected pair of node ids."""

    a: NodeId
    b: NodeId

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError(f"self-loop edge ({self.a},{self.b}) rejected")
        if self.a < 0 or self.b < 0:
            raise ValueError(f"negative node id in edge ({self.a},{self.b})")

    def key(self) -> tuple[NodeId, NodeId]:
        """Canonical (min, max) form; (a,b) and (b,a) share a key."""
        return (self.a, self.b) if self.a < self.b else (self.b, self.a)


@dataclass(frozen=True)
class MetricsSample:
    edges_seen: int
    balance: float
    cut_score: float


@dataclass
class Snapshot:
    """Full copy of partition stores + assignment; restoring is bit-exact."""

    assignment: dict[NodeId, PartitionId]
    stores: dict[PartitionId, dict[NodeId, list[NodeId]]]
    edges: set[tuple[NodeId, NodeId]]
    crossing: int


def default_capacity(expected_nodes: int, k: int) -> int:
    """Capacity giving each partition 20% headroom over an even split."""
    return math.ceil(1.2 * expected_nodes / k)


class PartitionedGraph:
    """k adjacency-list partitions plus the node-to-partition table.

    Each partition store maps its resident nodes to their full neighbor
    lists, so an edge appears in the adjacency list of both endpoints,
    possibly on two different partitions. ``capacity=None`` disables the
    per-partition node limit.

    Single writer: mutations must be serialized by the owner; concurrent
    read-only metric queries are safe when no mutation is in flight.
    """

    def __init__(self, k: int, capacity: int | None = None):
        if k < 1:
            raise ValueError("need at least one partition")
        if capacity is not None and capacity < 1:
            raise ValueError("capacity must be positive or None")
        self.k = k
        self.capacity = capacity
        self._stores: dict[PartitionId, dict[NodeId, list[NodeId]]] = {
            p: {} for p in range(1, k + 1)
        }
        self._assignment: dict[NodeId, PartitionId] = {}
        self._edges: set[tuple[NodeId, NodeId]] = set()
        self._crossing = 0

    # -- assignment / topology ------------------------------------------------

    @property
    def assignment(self) -> dict[NodeId, PartitionId]:
        return self._assignment

    def partition_of(self, v: NodeId) -> PartitionId:
        try:
            return self._assignment[v]
        except KeyError:
            raise UnassignedNodeError(f"node {v} has no assignment") from None

    def is_assigned(self, v: NodeId) -> bool:
        return v in self._assignment

    def assign(self, v: NodeId, p: PartitionId) -> None:
        """Place a previously unseen node on partition ``p``.

        Enforces capacity when one is set; reassignment of an existing node
        must go through ``migrate``.
        """
        self._check_pid(p)
        if v in self._assignment:
            raise ValueError(f"node {v} already assigned; use migrate()")
        store = self._stores[p]
        if self.capacity is not None and len(store) >= self.capacity:
            raise PartitionFullError(f"partition {p} is at capacity {self.capacity}")
        store[v] = []
        self._assignment[v] = p

    def add_link(self, a: NodeId, b: NodeId) -> bool:
        """Record the undirected edge (a, b) in both endpoints' lists.

        Both endpoints must already be assigned. Duplicate arrivals are
        ignored (set semantics). Returns True when the edge is new.
        """
        if a == b:
            raise ValueError(f"self-loop ({a},{b}) rejected")
        pa, pb = self.partition_of(a), self.partition_of(b)
        key = (a, b) if a < b else (b, a)
        if key in self._edges:
            return False
        self._edges.add(key)
        self._stores[pa][a].append(b)
        self._stores[pb][b].append(a)
        if pa != pb:
            self._crossing += 1
        return True

    def migrate(self, v: NodeId, target: PartitionId) -> None:
        """Move ``v``'s adjacency list to ``target`` and update the table.

        Capacity is deliberately not enforced here: repartitioning heuristics
        may ignore load. Migrating to the current partition is a no-op.
        """
        self._check_pid(target)
        src = self.partition_of(v)
        if src == target:
            return
        neighbors = self._stores[src].pop(v)
        self._stores[target][v] = neighbors
        self._assignment[v] = target
        for u in neighbors:
            pu = self._assignment[u]
            self._crossing -= pu != src
            self._crossing += pu != target
        # a neighbor that sits on src keeps its entry there; only v moved

    def neighbors(self, v: NodeId) -> list[NodeId]:
        """Adjacency list of ``v`` (insertion order; do not mutate)."""
        return self._stores[self.partition_of(v)][v]

    def degree(self, v: NodeId) -> int:
        return len(self.neighbors(v))

    def nodes_in(self, p: PartitionId) -> list[NodeId]:
        self._check_pid(p)
        return list(self._stores[p].keys())

    def size(self, p: PartitionId) -> int:
        self._check_pid(p)
        return len(self._stores[p])

    def sizes(self) -> list[int]:
        return [len(self._stores[p]) for p in range(1, self.k + 1)]

    @property
    def node_count(self) -> int:
        return len(self._assignment)

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    @property
    def crossing_count(self) -> int:
        return self._crossing

    def edges(self) -> set[tuple[NodeId, NodeId]]:
        return set(self._edges)

    # -- metrics ---------------------------------------------------------------

    def load_balance(self) -> float:
        """min partition size / max partition size; 1.0 for an empty graph."""
        sizes = self.sizes()
        top = max(sizes)
        if top == 0:
            return 1.0
        return min(sizes) / top

    def cut_score(self) -> float:
        """1 minus the crossing-edge fraction; 1.0 cuts no edge."""
        if not self._edges:
            return 1.0
        return 1.0 - self._crossing / len(self._edges)

    def badness(self, v: NodeId) -> float:
        """Fraction of v's neighbors co-located with v (lower is worse).

        An isolated node scores 1.0: moving it cannot change the cut.
        """
        p = self.partition_of(v)
        neigh = self._stores[p][v]
        if not neigh:
            return 1.0
        local = sum(1 for u in neigh if self._assignment[u] == p)
        return local / len(neigh)

    def metrics(self, edges_seen: int | None = None) -> MetricsSample:
        return MetricsSample(
            edges_seen=self.edge_count if edges_seen is None else edges_seen,
            balance=self.load_balance(),
            cut_score=self.cut_score(),
        )

    # -- rescans (test oracles for the incremental counters) -------------------

    def recount_crossing(self) -> int:
        """O(|E|) recomputation of the crossing-edge count."""
        return sum(
            1 for (a, b) in self._edges if self._assignment[a] != self._assignment[b]
        )

    def rescan_cut_score(self) -> float:
        if not self._edges:
            return 1.0
        return 1.0 - self.recount_crossing() / len(self._edges)

    # -- snapshot / restore -----------------------------------------------------

    def snapshot(self) -> Snapshot:
        """Atomically record the complete partition layout."""
        return Snapshot(
            assignment=dict(self._assignment),
            stores={p: {v: list(n) for v, n in s.items()} for p, s in self._stores.items()},
            edges=set(self._edges),
            crossing=self._crossing,
        )

    def restore(self, snap: Snapshot) -> None:
        """Return to a previously snapshotted layout."""
        self._assignment = dict(snap.assignment)
        self._stores = {p: {v: list(n) for v, n in s.items()} for p, s in snap.stores.items()}
        self._edges = set(snap.edges)
        self._crossing = snap.crossing

    def state(self):
        """Deep-comparable value of the full mutable state."""
        return (
            dict(self._assignment),
            {p: {v: tuple(n) for v, n in s.items()} for p, s in self._stores.items()},
            frozenset(self._edges),
            self._crossing,
        )

    # -- internals ---------------------------------------------------------------

    def _check_pid(self, p: PartitionId) -> None:
        if not 1 <= p <= self.k:
            raise ValueError(f"partition id {p} outside [1,{self.k}]")
