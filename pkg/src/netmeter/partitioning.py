"""Even contiguous splits of index ranges and per-resource batch views.

The split rule is shared by everything that distributes work: a range of
``total`` items over ``parts`` slots yields contiguous spans whose lengths
differ by at most one, with the remainder going to the lowest-numbered
slots. Resource partitions and the per-partition batch slices both use it.
"""

from __future__ import annotations

from dataclasses import dataclass


def even_lengths(total: int, parts: int) -> list[int]:
    """Lengths of an even split, remainder to the front."""
    if parts < 1:
        raise ValueError("parts must be >= 1")
    if total < 0:
        raise ValueError("total must be >= 0")
    base, rem = divmod(total, parts)
    return [base + 1 if i < rem else base for i in range(parts)]


def even_spans(offset: int, length: int, parts: int) -> list[tuple[int, int]]:
    """(offset, length) spans of the even split of [offset, offset+length)."""
    spans = []
    cursor = offset
    for ln in even_lengths(length, parts):
        spans.append((cursor, ln))
        cursor += ln
    return spans


@dataclass(frozen=True)
class PartitionPlan:
    """Contiguous per-resource spans covering [0, total_len)."""

    total_len: int
    resource_count: int
    spans: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class Batch:
    """One slice of a resource's partition, processed as a unit.

    ``offset`` is absolute within the original container; the view always
    lies inside the owning resource's span. Zero-length batches are legal
    no-ops (they appear when the batch count exceeds the span length).
    """

    resource_id: int
    batch_index: int
    offset: int
    length: int

    @property
    def view(self) -> tuple[int, int]:
        return (self.offset, self.length)


def partition_even(total_len: int, resource_count: int) -> PartitionPlan:
    """Split [0, total_len) into ``resource_count`` contiguous even spans."""
    if resource_count < 1:
        raise ValueError("resource_count must be >= 1")
    return PartitionPlan(
        total_len=total_len,
        resource_count=resource_count,
        spans=tuple(even_spans(0, total_len, resource_count)),
    )


def make_batches(plan: PartitionPlan, batch_count: int) -> list[Batch]:
    """Sub-split every resource span into ``batch_count`` even batches.

    Batches are ordered by (resource_id, batch_index); concatenating their
    views in order reconstructs [0, plan.total_len) with no gaps or
    overlaps. ``batch_count=1`` returns the spans unchanged.
    """
    if batch_count < 1:
        raise ValueError("batch_count must be >= 1")
    batches = []
    for rid, (off, ln) in enumerate(plan.spans):
        for k, (boff, bln) in enumerate(even_spans(off, ln, batch_count)):
            batches.append(Batch(resource_id=rid, batch_index=k, offset=boff, length=bln))
    return batches


def batch_table(plan: PartitionPlan, batch_count: int) -> list[list[tuple[int, int]]]:
    """Batch views grouped by batch index: table[k][r] = view of batch k on resource r.

    Same slices as make_batches, arranged for the sequential batch loop
    (one entry per launch, spanning all resources).
    """
    if batch_count < 1:
        raise ValueError("batch_count must be >= 1")
    per_resource = [even_spans(off, ln, batch_count) for off, ln in plan.spans]
    return [[per_resource[r][k] for r in range(plan.resource_count)] for k in range(batch_count)]
