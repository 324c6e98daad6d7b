"""Experiment orchestration: ingestion, configuration, runs, CSV emission.

CSV schemas (stable, documented here and in the README):
  metrics.csv   edges_seen,balance,cut_score,mean_dependencies
                (mean_dependencies empty on rows without a measurement)
  outcomes.csv  step,criterion,c_before,c_after,committed,migrated,balance,cut_score
  idmap.csv     external_id,internal_id   (only for ingested edge lists)
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import seeds
from .generators import (
    GeneratorError,
    StreamOrder,
    build_edge_set,
    stream,
)
from .graph import EdgeEvent, MetricsSample, PartitionedGraph
from .optimizer import OptimizerConfig, RunReport, run_optimized_stream
from .partitioners import (
    RandomHashPartitioner,
    StreamGreedyPartitioner,
    run_baseline,
    run_stream,
)
from .workload import WalkConfig, run_request_batch

STRATEGIES = ("random", "stream-greedy", "baseline")
OUTPUT_DIR_ENV = "STREAMPART_OUT"


class IngestError(ValueError):
    """Malformed edge-list input."""


@dataclass
class IngestResult:
    events: list[EdgeEvent]
    self_loops_dropped: int = 0
    duplicates_dropped: int = 0


def ingest_edge_list(path: str | Path) -> IngestResult:
    """Read one edge per non-comment line ("src dst", whitespace separated).

    Lines starting with '#' or '%' are skipped; self-loops and duplicate
    edges are dropped and counted. Malformed lines fail with their number.
    """
    result = IngestResult(events=[])
    seen: set[tuple[int, int]] = set()
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line[0] in "#%":
                continue
            parts = line.split()
            if len(parts) != 2:
                raise IngestError(f"{path}:{lineno}: expected two fields, got {len(parts)}")
            try:
                a, b = int(parts[0]), int(parts[1])
            except ValueError:
                raise IngestError(f"{path}:{lineno}: non-integer node id") from None
            if a < 0 or b < 0:
                raise IngestError(f"{path}:{lineno}: negative node id")
            if a == b:
                result.self_loops_dropped += 1
                continue
            key = (a, b) if a < b else (b, a)
            if key in seen:
                result.duplicates_dropped += 1
                continue
            seen.add(key)
            result.events.append(EdgeEvent(a, b))
    return result


def export_edge_list(edges, path: str | Path) -> None:
    """Write a canonical "a b" edge-list file that round-trips through ingest."""
    with open(path, "w") as fh:
        fh.write("# streampart edge list\n")
        for a, b in sorted(edges):
            fh.write(f"{a} {b}\n")


def remap_dense(events: list[EdgeEvent]) -> tuple[list[EdgeEvent], dict[int, int]]:
    """Relabel external ids to 0..n-1 in first-appearance order."""
    mapping: dict[int, int] = {}
    out = []
    for e in events:
        for v in (e.a, e.b):
            if v not in mapping:
                mapping[v] = len(mapping)
        out.append(EdgeEvent(mapping[e.a], mapping[e.b]))
    return out, mapping


@dataclass(frozen=True)
class GeneratorSource:
    kind: str  # powerlaw | ring | vicious | communities
    params: dict = field(default_factory=dict)


@dataclass
class ExperimentSpec:
    source: str | Path | GeneratorSource
    k: int
    strategy: str = "stream-greedy"
    capacity: int | str | None = "auto"  # int, None (unbounded) or 'auto'
    optimizer: OptimizerConfig | None = None
    workload: WalkConfig | None = None
    seed: int = 0
    sample_every: int = 100
    shuffle: bool = False  # reshuffle ingested files (generated graphs always stream shuffled)
    out_dir: str | Path = "out"
    name: str = "experiment"
    first_trigger: int = 200
    buffer_lookahead: int = 10
    batch_size: int | None = None

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if isinstance(self.capacity, str) and self.capacity != "auto":
            raise ValueError("capacity must be an int, None, or 'auto'")
        if self.optimizer is not None and self.strategy != "stream-greedy":
            raise ValueError("the optimizer runs on top of stream-greedy")


@dataclass
class ExperimentResult:
    final: MetricsSample
    metrics_path: Path
    outcomes_path: Path | None = None
    idmap_path: Path | None = None
    report: RunReport | None = None
    warnings: dict = field(default_factory=dict)


def _resolve_out_dir(spec: ExperimentSpec) -> Path:
    out = Path(os.environ.get(OUTPUT_DIR_ENV, spec.out_dir))
    out.mkdir(parents=True, exist_ok=True)
    return out


def load_events(spec: ExperimentSpec) -> tuple[list[EdgeEvent], dict[int, int] | None, dict]:
    """Events plus (for files) the external-to-internal id map."""
    if isinstance(spec.source, GeneratorSource):
        edges = build_edge_set(spec.source.kind, spec.source.params, spec.seed)
        return stream(edges, StreamOrder(seed=spec.seed)), None, {}
    ingest = ingest_edge_list(spec.source)
    events, mapping = remap_dense(ingest.events)
    if spec.shuffle:
        events = stream({e.key() for e in events}, StreamOrder(seed=spec.seed))
    warnings = {
        "self_loops_dropped": ingest.self_loops_dropped,
        "duplicates_dropped": ingest.duplicates_dropped,
    }
    return events, mapping, warnings


def _resolve_capacity(spec: ExperimentSpec, events: list[EdgeEvent]) -> int | None:
    if spec.capacity == "auto":
        nodes = {v for e in events for v in (e.a, e.b)}
        return math.ceil(1.2 * len(nodes) / spec.k)
    return spec.capacity


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def _write_metrics_csv(path: Path, samples, dep_rows) -> None:
    rows = [(s.edges_seen, 0, _fmt(s.balance), _fmt(s.cut_score), "") for s in samples]
    rows += [
        (d.edges_seen, 1, _fmt(d.balance), _fmt(d.cut_score), _fmt(d.mean_dependencies))
        for d in dep_rows
    ]
    rows.sort(key=lambda r: (r[0], r[1]))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["edges_seen", "balance", "cut_score", "mean_dependencies"])
        for edges_seen, _, balance, cut, deps in rows:
            w.writerow([edges_seen, balance, cut, deps])


def _write_outcomes_csv(path: Path, outcome_rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(
            ["step", "criterion", "c_before", "c_after", "committed", "migrated", "balance", "cut_score"]
        )
        for row in outcome_rows:
            o = row.outcome
            w.writerow(
                [
                    row.step,
                    o.criterion,
                    _fmt(o.c_before),
                    _fmt(o.c_after),
                    int(o.committed),
                    o.migrated,
                    _fmt(row.balance),
                    _fmt(row.cut_score),
                ]
            )


def _write_idmap_csv(path: Path, mapping: dict[int, int]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["external_id", "internal_id"])
        for ext, internal in sorted(mapping.items(), key=lambda kv: kv[1]):
            w.writerow([ext, internal])


def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    """Execute one experiment and write its CSV artifacts.

    Fully deterministic for a fixed spec: every random choice derives from
    spec.seed.
    """
    out_dir = _resolve_out_dir(spec)
    events, mapping, warnings = load_events(spec)
    capacity = _resolve_capacity(spec, events)
    metrics_path = out_dir / f"{spec.name}_metrics.csv"
    outcomes_path = None
    report = None

    if spec.strategy == "stream-greedy" and (spec.optimizer or spec.workload):
        walk_cfg = spec.workload or WalkConfig(seed=spec.seed)
        opt_cfg = spec.optimizer or OptimizerConfig()
        report = run_optimized_stream(
            events,
            spec.k,
            capacity,
            opt_cfg,
            walk_cfg,
            spec.seed,
            optimize=spec.optimizer is not None,
            sample_every=spec.sample_every,
            first_trigger=spec.first_trigger,
            buffer_lookahead=spec.buffer_lookahead,
            batch_size=spec.batch_size,
        )
        samples, dep_rows, final = report.samples, report.dependency_timeline, report.final
        if spec.optimizer is not None:
            outcomes_path = out_dir / f"{spec.name}_outcomes.csv"
            _write_outcomes_csv(outcomes_path, report.outcomes)
    else:
        if spec.strategy == "random":
            g = PartitionedGraph(spec.k, capacity=None)  # hashing cannot honor a cap
            strategy = RandomHashPartitioner(salt=seeds.derive(spec.seed, seeds.HASH_SALT))
            samples = run_stream(events, strategy, g, spec.sample_every)
        elif spec.strategy == "stream-greedy":
            g = PartitionedGraph(spec.k, capacity=capacity)
            samples = run_stream(events, StreamGreedyPartitioner(), g, spec.sample_every)
        else:
            cap = capacity if capacity is not None else _resolve_capacity(
                replace(spec, capacity="auto"), events
            )
            g = PartitionedGraph(spec.k, capacity=cap)
            samples = run_baseline([e.key() for e in events], g, spec.seed, spec.sample_every)
        dep_rows = []
        if spec.workload is not None and g.node_count:
            from .optimizer import DependencyRow

            deps = run_request_batch(
                g,
                spec.workload,
                spec.batch_size or max(50, g.node_count // 100),
                seed=seeds.derive(spec.seed, seeds.BATCH, 0),
            )
            dep_rows = [DependencyRow(g.edge_count, deps, g.load_balance(), g.cut_score())]
        final = g.metrics()

    _write_metrics_csv(metrics_path, samples, dep_rows)
    idmap_path = None
    if mapping is not None:
        idmap_path = out_dir / f"{spec.name}_idmap.csv"
        _write_idmap_csv(idmap_path, mapping)
    return ExperimentResult(
        final=final,
        metrics_path=metrics_path,
        outcomes_path=outcomes_path,
        idmap_path=idmap_path,
        report=report,
        warnings=warnings,
    )


@dataclass
class ComparisonResult:
    finals: dict[str, MetricsSample]
    paths: dict[str, Path]

    def table(self) -> str:
        lines = [f"{'strategy':<14} {'edges':>8} {'balance':>9} {'cut_score':>10}"]
        for name, m in self.finals.items():
            lines.append(f"{name:<14} {m.edges_seen:>8} {m.balance:>9.4f} {m.cut_score:>10.4f}")
        return "\n".join(lines)


def compare_strategies(spec: ExperimentSpec) -> ComparisonResult:
    """Run all three strategies on the identical stream and tabulate finals."""
    finals: dict[str, MetricsSample] = {}
    paths: dict[str, Path] = {}
    for strategy in STRATEGIES:
        sub = replace(
            spec,
            strategy=strategy,
            optimizer=None,
            name=f"{spec.name}_{strategy.replace('-', '_')}",
        )
        result = run_experiment(sub)
        finals[strategy] = result.final
        paths[strategy] = result.metrics_path
    return ComparisonResult(finals=finals, paths=paths)
