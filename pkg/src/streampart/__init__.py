"""Streaming graph partitioning with badness-driven repartitioning and a
blind hill-climbing controller fed by application compute-time feedback."""

from .cost_model import (
    CostParams,
    ViciousCostInstance,
    expected_time_mc,
    expected_time_wb,
    expected_walk_locality,
    request_time,
    wb_preferred,
)
from .generators import (
    RingSpec,
    StreamOrder,
    ViciousSpec,
    gen_community_graph,
    gen_powerlaw_cluster,
    gen_ring,
    gen_vicious,
    ring_instability,
    sample_random_partitions,
    stream,
)
from .graph import (
    EdgeEvent,
    MetricsSample,
    PartitionFullError,
    PartitionedGraph,
    Snapshot,
    UnassignedNodeError,
    default_capacity,
)
from .harness import (
    ExperimentSpec,
    GeneratorSource,
    compare_strategies,
    export_edge_list,
    ingest_edge_list,
    run_experiment,
)
from .optimizer import (
    HillClimbController,
    OptimizationOutcome,
    OptimizerConfig,
    blind_hill_climb_step,
    improve_balance,
    improve_cut,
    run_optimized_stream,
    select_worst,
)
from .partitioners import (
    PlacementDecision,
    RandomHashPartitioner,
    StreamGreedyPartitioner,
    place_baseline,
    run_baseline,
    run_stream,
)
from .workload import RequestResult, WalkConfig, random_walk, run_request_batch, serve_request

__version__ = "0.1.0"
