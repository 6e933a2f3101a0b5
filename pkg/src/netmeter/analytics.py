"""Aggregate traffic measures via batched, bulk-scheduled reductions.

Six measures per window matrix: valid packet total, unique links, unique
sources, max source fan-out, unique destinations, max destination fan-in.
The two nontrivial ones are a sum reduction (weights) and a maximum scan
(degree containers); both follow the same workflow: partition the data
evenly across the scheduler's resources, sub-split every partition into
``batch_count`` batches, then launch one bulk per batch index and await it
before the next. Within a bulk, task ``r`` reduces resource ``r``'s slice
and folds it into a partial slot only that resource writes; the awaiting
caller combines the partials at the end.

``oracle_analyze`` computes the same measures by naive set/count logic
straight from (src, dst) pairs, with no matrix and no scheduler, as an
independent cross-check.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .partitioning import batch_table, partition_even
from .senders import SchedulerLike, bulk, exec_on, just, sync_wait
from .traffic import FlatContainers, PacketStream, TrafficMatrix, to_flat

_INT64_MIN = np.iinfo(np.int64).min


@dataclass(frozen=True)
class AggregateReport:
    """The six aggregate measures of one traffic matrix (or of a dataset)."""

    valid_packets: int
    unique_links: int
    unique_sources: int
    max_fanout: int
    unique_destinations: int
    max_fanin: int

    def to_dict(self) -> dict[str, int]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, int]) -> "AggregateReport":
        return cls(**{f: int(data[f]) for f in cls.__dataclass_fields__})

    @classmethod
    def zero(cls) -> "AggregateReport":
        return cls(0, 0, 0, 0, 0, 0)


def _sum_span(index, resource_id, data, spans, partials):
    off, length = spans[index]
    if length:
        partials[resource_id] += np.add.reduce(data[off : off + length])


def _max_span(index, resource_id, data, spans, partials):
    off, length = spans[index]
    if length:
        peak = data[off : off + length].max()
        if peak > partials[resource_id]:
            partials[resource_id] = peak


def _batched_reduce(data, scheduler: SchedulerLike, batch_count: int, task, init: int) -> np.ndarray:
    """Run the batch loop and return the per-resource partial slots."""
    if batch_count < 1:
        raise ValueError("batch_count must be >= 1")
    data = np.asarray(data)
    if data.size and data.dtype.kind not in "iub":
        raise TypeError(f"expected an integer view, got dtype {data.dtype}")
    data = np.ascontiguousarray(data, dtype=np.int64)
    count = scheduler.resource_count
    plan = partition_even(len(data), count)
    partials = np.full(count, init, dtype=np.int64)
    for spans in batch_table(plan, batch_count):
        sync_wait(exec_on(scheduler, bulk(just(data, spans, partials), count, task)))
    return partials


def sum_reduce(data, scheduler: SchedulerLike, batch_count: int = 1) -> int:
    """Sum of an integer view; empty view sums to 0."""
    return int(_batched_reduce(data, scheduler, batch_count, _sum_span, 0).sum())


def max_scan(data, scheduler: SchedulerLike, batch_count: int = 1) -> int:
    """Maximum of an integer view; empty view scans to 0 by convention."""
    peak = _batched_reduce(data, scheduler, batch_count, _max_span, _INT64_MIN).max()
    return 0 if peak == _INT64_MIN else int(peak)


def analyze_matrix(
    flat: FlatContainers, scheduler: SchedulerLike, batch_count: int = 1
) -> AggregateReport:
    """The six measures of one matrix, from its flat containers."""
    return AggregateReport(
        valid_packets=sum_reduce(flat.weights, scheduler, batch_count),
        unique_links=len(flat.edges),
        unique_sources=len(flat.row_sums),
        max_fanout=max_scan(flat.out_degrees, scheduler, batch_count),
        unique_destinations=len(flat.col_sums),
        max_fanin=max_scan(flat.in_degrees, scheduler, batch_count),
    )


def analyze_dataset(
    matrices, scheduler: SchedulerLike, batch_count: int = 1
) -> tuple[list[AggregateReport], AggregateReport]:
    """Per-matrix reports plus dataset totals.

    Accepts TrafficMatrix or FlatContainers items. Totals sum the counting
    measures across windows (uniqueness stays per-window) and take the max
    of the two fan measures.
    """
    reports = []
    for item in matrices:
        flat = to_flat(item) if isinstance(item, TrafficMatrix) else item
        reports.append(analyze_matrix(flat, scheduler, batch_count))
    totals = AggregateReport(
        valid_packets=sum(r.valid_packets for r in reports),
        unique_links=sum(r.unique_links for r in reports),
        unique_sources=sum(r.unique_sources for r in reports),
        max_fanout=max((r.max_fanout for r in reports), default=0),
        unique_destinations=sum(r.unique_destinations for r in reports),
        max_fanin=max((r.max_fanin for r in reports), default=0),
    )
    return reports, totals


def oracle_analyze(window) -> AggregateReport:
    """Brute-force measures from raw pairs: sets and dicts, no matrix, no scheduler.

    ``window`` is a PacketStream (invalid packets are skipped) or an
    iterable of (src, dst) pairs.
    """
    if isinstance(window, PacketStream):
        keep = window.valid
        pairs = list(zip(window.src[keep].tolist(), window.dst[keep].tolist()))
    else:
        pairs = [(int(s), int(d)) for s, d in window]
    links = set(pairs)
    dsts_of: dict[int, set[int]] = {}
    srcs_of: dict[int, set[int]] = {}
    for s, d in links:
        dsts_of.setdefault(s, set()).add(d)
        srcs_of.setdefault(d, set()).add(s)
    return AggregateReport(
        valid_packets=len(pairs),
        unique_links=len(links),
        unique_sources=len(dsts_of),
        max_fanout=max((len(v) for v in dsts_of.values()), default=0),
        unique_destinations=len(srcs_of),
        max_fanin=max((len(v) for v in srcs_of.values()), default=0),
    )
