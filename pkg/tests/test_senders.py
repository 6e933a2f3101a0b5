import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from netmeter.resources import make_group_scheduler, make_inline_scheduler, make_pool_scheduler
from netmeter.senders import (
    ChainError,
    SenderReuseError,
    bulk,
    exec_on,
    just,
    sync_wait,
    then,
)


def test_just_yields_injected_value():
    assert sync_wait(just(5)) == 5


def test_just_empty_tuple_value():
    assert sync_wait(just(())) == ()


def test_just_multiple_values_come_back_as_tuple():
    assert sync_wait(just(1, "a")) == (1, "a")


def test_just_leaves_views_untouched():
    data = [1, 2, 3]
    assert sync_wait(just(data)) is data
    assert data == [1, 2, 3]


def test_then_applies_transformation():
    assert sync_wait(then(just(5), lambda x: x + 1)) == 6


def test_then_composes_in_order():
    assert sync_wait(then(then(just(2), lambda x: x * 3), lambda x: x + 1)) == 7


@given(st.one_of(st.integers(), st.floats(allow_nan=False), st.text()))
def test_then_identity_matches_direct_application(x):
    assert sync_wait(then(just(x), lambda v: v)) == x


def test_bulk_covers_every_index_exactly_once():
    counters = np.zeros(4, dtype=np.int64)

    def task(i, _rid, slots):
        slots[i] += 1

    out = sync_wait(bulk(just(counters), 4, task))
    assert out is counters
    assert counters.tolist() == [1, 1, 1, 1]


def test_bulk_zero_is_noop():
    calls = []
    value = sync_wait(bulk(just("payload"), 0, lambda *a: calls.append(a)))
    assert value == "payload"
    assert calls == []


def test_bulk_rejects_negative_size():
    with pytest.raises(ValueError):
        bulk(just(()), -1, lambda *a: None)


def test_laziness_no_work_before_sync_wait():
    invocations = []

    chain = bulk(
        then(just([0]), lambda x: invocations.append("then") or x),
        3,
        lambda i, r, x: invocations.append(i),
    )
    assert invocations == []
    sync_wait(chain)
    assert invocations == ["then", 0, 1, 2]


def test_sender_cannot_be_awaited_twice():
    sender = just(7)
    assert sync_wait(sender) == 7
    with pytest.raises(SenderReuseError):
        sync_wait(sender)


def test_consumed_sender_cannot_be_composed():
    sender = just(7)
    then(sender, lambda x: x)
    with pytest.raises(SenderReuseError):
        then(sender, lambda x: x)
    with pytest.raises(SenderReuseError):
        sync_wait(sender)


def test_task_failure_surfaces_as_chain_error():
    def boom(i, r):
        raise RuntimeError("task exploded")

    with pytest.raises(ChainError) as err:
        sync_wait(bulk(just(), 2, boom))
    assert isinstance(err.value.__cause__, RuntimeError)


def test_transformation_failure_surfaces_as_chain_error():
    with pytest.raises(ChainError):
        sync_wait(then(just(1), lambda x: 1 / 0))


def test_failing_chain_returns_no_partial_result(pool_sched):
    def boom(i, rid, slots):
        if i == 3:
            raise ValueError("bad slot")
        slots[i] = 1

    slots = [0] * 8
    with pytest.raises(ChainError):
        sync_wait(exec_on(pool_sched, bulk(just(slots), 8, boom)))


def test_exec_on_inline_runs_on_caller():
    import threading

    seen = []
    sched = make_inline_scheduler()
    sync_wait(
        exec_on(sched, bulk(just(), 1, lambda i, rid: seen.append((threading.get_ident(), rid))))
    )
    assert seen == [(threading.get_ident(), 0)]


def test_exec_on_pool_is_single_resource(pool_sched):
    ids = [None] * 8
    sync_wait(exec_on(pool_sched, bulk(just(ids), 8, lambda i, rid, out: out.__setitem__(i, rid))))
    assert ids == [0] * 8


def test_exec_on_group_assigns_even_contiguous_spans():
    with make_group_scheduler([1, 1, 1, 1]) as sched:
        ids = [None] * 8
        sync_wait(exec_on(sched, bulk(just(ids), 8, lambda i, rid, out: out.__setitem__(i, rid))))
    assert ids == [0, 0, 1, 1, 2, 2, 3, 3]


def test_fluent_chaining_matches_free_functions():
    sched = make_inline_scheduler()
    slots = [0] * 3

    fluent = just(slots).bulk(3, lambda i, r, s: s.__setitem__(i, i + 1)).then(sum).on(sched)
    assert sync_wait(fluent) == 6
    assert slots == [1, 2, 3]


def test_bulk_effects_visible_after_sync_wait(group_sched):
    partials = np.zeros(group_sched.resource_count, dtype=np.int64)
    data = np.arange(1, 101, dtype=np.int64)
    spans = [(i * 25, 25) for i in range(4)]

    def reduce_span(i, rid, values, views, out):
        off, ln = views[i]
        out[rid] += values[off : off + ln].sum()

    sync_wait(exec_on(group_sched, bulk(just(data, spans, partials), 4, reduce_span)))
    assert partials.sum() == 5050


def test_pure_results_identical_across_schedulers():
    def run(sched):
        out = [0] * 64
        sync_wait(exec_on(sched, bulk(just(out), 64, lambda i, r, s: s.__setitem__(i, i * i))))
        return out

    expected = [i * i for i in range(64)]
    assert run(make_inline_scheduler()) == expected
    with make_pool_scheduler(4) as pool:
        assert run(pool) == expected
    with make_group_scheduler([2, 2, 2]) as group:
        assert run(group) == expected
