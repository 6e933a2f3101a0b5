"""Windowed network-traffic analytics on a composable asynchronous task model."""

from .analytics import (
    AggregateReport,
    analyze_dataset,
    analyze_matrix,
    max_scan,
    oracle_analyze,
    sum_reduce,
)
from .bench import BenchResult, RunConfig
from .partitioning import Batch, PartitionPlan, batch_table, make_batches, partition_even
from .resources import (
    GroupScheduler,
    InlineScheduler,
    PoolScheduler,
    make_group_scheduler,
    make_inline_scheduler,
    make_pool_scheduler,
)
from .senders import ChainError, Sender, SenderReuseError, bulk, exec_on, just, sync_wait, then
from .traffic import (
    AnonymizationMap,
    FlatContainers,
    MatrixFileError,
    MatrixFormatError,
    PacketRecord,
    PacketStream,
    TrafficMatrix,
    anonymize,
    build_matrices,
    generate_packets,
    read_matrix,
    read_packets,
    to_flat,
    write_matrix,
    write_packets,
)

__version__ = "0.1.0"

__all__ = [
    "AggregateReport",
    "AnonymizationMap",
    "Batch",
    "BenchResult",
    "ChainError",
    "FlatContainers",
    "GroupScheduler",
    "InlineScheduler",
    "MatrixFileError",
    "MatrixFormatError",
    "PacketRecord",
    "PacketStream",
    "PartitionPlan",
    "PoolScheduler",
    "RunConfig",
    "Sender",
    "SenderReuseError",
    "TrafficMatrix",
    "analyze_dataset",
    "analyze_matrix",
    "anonymize",
    "batch_table",
    "build_matrices",
    "bulk",
    "exec_on",
    "generate_packets",
    "just",
    "make_batches",
    "make_group_scheduler",
    "make_inline_scheduler",
    "make_pool_scheduler",
    "max_scan",
    "oracle_analyze",
    "partition_even",
    "read_matrix",
    "read_packets",
    "sum_reduce",
    "sync_wait",
    "then",
    "to_flat",
    "write_matrix",
    "write_packets",
]
