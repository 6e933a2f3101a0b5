"""Execution resources behind schedulers.

Three backings: inline (the awaiting caller), a worker pool (one resource,
many threads), and an indexed group of pools emulating several devices on
one host. A scheduler is immutable after construction, freely shareable,
and reusable across any number of chains; closing it joins its workers.

Bulk index assignment on a group is the contiguous even split from
:mod:`netmeter.partitioning`: resource ``r`` gets span ``r``, remainder
indices go to the lowest-numbered resources. There is no work stealing
across resources, so a task can treat its resource's accumulator slot as
exclusively owned for the duration of a bulk.
"""

from __future__ import annotations

import os
from concurrent.futures import Future, ThreadPoolExecutor, wait

from .partitioning import even_spans, partition_even
from .senders import TaskFunction


class InlineScheduler:
    """Single resource; tasks run on the awaiting caller in index order."""

    resource_count = 1

    def run_bulk(self, size: int, task: TaskFunction, payload: tuple) -> None:
        for index in range(size):
            task(index, 0, *payload)

    def close(self) -> None:
        pass

    def __enter__(self) -> "InlineScheduler":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def _run_span(offset: int, length: int, resource_id: int, task: TaskFunction, payload: tuple) -> None:
    for index in range(offset, offset + length):
        task(index, resource_id, *payload)


def _await_all(futures: list[Future]) -> None:
    # Settle everything before reporting, so no task is still writing when
    # the caller regains control, then surface the first failure.
    wait(futures)
    for future in futures:
        exc = future.exception()
        if exc is not None:
            raise exc


class PoolScheduler:
    """One execution resource backed by a thread pool."""

    resource_count = 1

    def __init__(self, workers: int):
        if workers < 1:
            raise ValueError("workers must be >= 1")
        self.workers = workers
        self._executor = ThreadPoolExecutor(max_workers=workers)

    def run_bulk(self, size: int, task: TaskFunction, payload: tuple) -> None:
        _await_all(self._submit_span(0, size, 0, task, payload))

    def _submit_span(
        self, offset: int, length: int, resource_id: int, task: TaskFunction, payload: tuple
    ) -> list[Future]:
        # Contiguous even chunks, one per worker, to keep dispatch overhead
        # bounded by the worker count instead of the index count.
        futures = []
        for off, ln in even_spans(offset, length, self.workers):
            if ln:
                futures.append(
                    self._executor.submit(_run_span, off, ln, resource_id, task, payload)
                )
        return futures

    def close(self) -> None:
        self._executor.shutdown(wait=True)

    def __enter__(self) -> "PoolScheduler":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


class GroupScheduler:
    """Indexed group of pools; each member pool is one execution resource."""

    def __init__(self, pools: list[PoolScheduler]):
        if not pools:
            raise ValueError("group needs at least one pool")
        self._pools = list(pools)

    @property
    def resource_count(self) -> int:
        return len(self._pools)

    def run_bulk(self, size: int, task: TaskFunction, payload: tuple) -> None:
        plan = partition_even(size, self.resource_count)
        futures: list[Future] = []
        for rid, (off, ln) in enumerate(plan.spans):
            if ln:
                futures.extend(self._pools[rid]._submit_span(off, ln, rid, task, payload))
        _await_all(futures)

    def close(self) -> None:
        for pool in self._pools:
            pool.close()

    def __enter__(self) -> "GroupScheduler":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def default_workers(resource_count: int) -> int:
    """Host cores divided among the emulated resources, at least one each."""
    return max(1, (os.cpu_count() or 1) // resource_count)


def make_inline_scheduler() -> InlineScheduler:
    return InlineScheduler()


def make_pool_scheduler(workers: int) -> PoolScheduler:
    return PoolScheduler(workers)


def make_group_scheduler(
    resources: int | list[int], workers_per_resource: int | None = None
) -> GroupScheduler:
    """Group of pool resources.

    ``resources`` is either a resource count (every pool gets
    ``workers_per_resource`` workers, defaulting to an even share of the
    host cores) or an explicit list of per-pool worker counts.
    """
    if isinstance(resources, int):
        if resources < 1:
            raise ValueError("resource count must be >= 1")
        workers = workers_per_resource or default_workers(resources)
        specs = [workers] * resources
    else:
        if workers_per_resource is not None:
            raise ValueError("pass workers_per_resource only with a resource count")
        specs = list(resources)
        if not specs:
            raise ValueError("group needs at least one pool spec")
    return GroupScheduler([PoolScheduler(w) for w in specs])
