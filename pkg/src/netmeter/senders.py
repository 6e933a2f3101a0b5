"""Lazy, one-shot descriptions of asynchronous work.

A sender is a value plus an ordered plan of pending stages: value injection
(:func:`just`), transformation (:func:`then`), indexed task expansion
(:func:`bulk`), and resource binding (:func:`exec_on`). Composing senders
performs no work; everything runs when :func:`sync_wait` consumes the chain
on the calling thread and blocks until it completes.

Task functions passed to ``bulk`` are called as ``task(index, resource_id,
*payload)`` once per index, possibly concurrently for distinct indices, and
must confine writes to slots they exclusively own (typically the slot of
the resource they run on). After ``sync_wait`` returns, all task side
effects are visible to the caller.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Protocol

TaskFunction = Callable[..., None]


class ChainError(RuntimeError):
    """A stage of a sender chain failed; raised by sync_wait, no result is produced."""


class SenderReuseError(RuntimeError):
    """A sender was composed or awaited after it had already been consumed."""


class SchedulerLike(Protocol):
    """What a chain needs from an execution resource."""

    resource_count: int

    def run_bulk(self, size: int, task: TaskFunction, payload: tuple) -> None:
        """Invoke task exactly once per index in [0, size); return after all finish."""


@dataclass(frozen=True)
class _Inject:
    values: tuple


@dataclass(frozen=True)
class _Transform:
    fn: Callable[..., Any]


@dataclass(frozen=True)
class _Bulk:
    size: int
    task: TaskFunction


@dataclass(frozen=True)
class _Bind:
    scheduler: SchedulerLike


class Sender:
    """One-shot stage chain. Use the module combinators or the fluent methods."""

    __slots__ = ("_stages", "_consumed")

    def __init__(self, stages: tuple):
        self._stages = stages
        self._consumed = False

    def _take(self) -> tuple:
        if self._consumed:
            raise SenderReuseError("sender already consumed; senders are one-shot")
        self._consumed = True
        return self._stages

    def then(self, fn: Callable[..., Any]) -> "Sender":
        return then(self, fn)

    def bulk(self, size: int, task: TaskFunction) -> "Sender":
        return bulk(self, size, task)

    def on(self, scheduler: SchedulerLike) -> "Sender":
        return exec_on(scheduler, self)


def just(*values: Any) -> Sender:
    """Sender that completes with exactly the injected values."""
    return Sender((_Inject(values),))


def then(sender: Sender, fn: Callable[..., Any]) -> Sender:
    """Apply ``fn`` to the completion value; its return becomes the new payload."""
    return Sender(sender._take() + (_Transform(fn),))


def bulk(sender: Sender, size: int, task: TaskFunction) -> Sender:
    """Run ``task`` once per index in [0, size); the payload passes through unchanged."""
    if size < 0:
        raise ValueError("bulk size must be >= 0")
    return Sender(sender._take() + (_Bulk(size, task),))


def exec_on(scheduler: SchedulerLike, sender: Sender) -> Sender:
    """Bind the chain's stage execution to ``scheduler``'s resources."""
    return Sender((_Bind(scheduler),) + sender._take())


class _CallerResource:
    """Default executor: bulks run on the awaiting caller, in index order."""

    resource_count = 1

    def run_bulk(self, size: int, task: TaskFunction, payload: tuple) -> None:
        for index in range(size):
            task(index, 0, *payload)


_CALLER = _CallerResource()


def sync_wait(sender: Sender) -> Any:
    """Run the chain to completion and return its completion value.

    Blocks until every stage (including all bulk task invocations) has
    finished. A single completion value is returned unwrapped; multiple
    values come back as a tuple, none as None. Any failure inside a stage
    surfaces as :class:`ChainError` and no partial result is returned.
    """
    stages = sender._take()
    scheduler: SchedulerLike = _CALLER
    payload: tuple = ()
    for stage in stages:
        if isinstance(stage, _Inject):
            payload = stage.values
        elif isinstance(stage, _Bind):
            scheduler = stage.scheduler
        elif isinstance(stage, _Transform):
            try:
                payload = (stage.fn(*payload),)
            except Exception as exc:
                raise ChainError(f"transformation failed: {exc!r}") from exc
        else:
            try:
                scheduler.run_bulk(stage.size, stage.task, payload)
            except ChainError:
                raise
            except Exception as exc:
                raise ChainError(f"bulk task failed: {exc!r}") from exc
    if not payload:
        return None
    if len(payload) == 1:
        return payload[0]
    return payload
