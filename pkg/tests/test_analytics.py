import json

import numpy as np
import pytest
from helpers import random_matrix, random_stream, stream_pairs
from hypothesis import given, settings
from hypothesis import strategies as st

from netmeter.analytics import (
    AggregateReport,
    analyze_dataset,
    analyze_matrix,
    max_scan,
    oracle_analyze,
    sum_reduce,
)
from netmeter.resources import make_group_scheduler, make_inline_scheduler
from netmeter.traffic import TrafficMatrix, build_matrices, generate_packets, to_flat

HAND_MATRIX = TrafficMatrix(0, 2, [0, 2, 3], [0, 1, 1], [2, 1, 3])
HAND_REPORT = AggregateReport(
    valid_packets=6,
    unique_links=3,
    unique_sources=2,
    max_fanout=2,
    unique_destinations=2,
    max_fanin=2,
)


class TestSumReduce:
    def test_small_sum(self, any_sched):
        assert sum_reduce([1, 2, 3], any_sched) == 6

    def test_empty_view_is_zero(self, any_sched):
        assert sum_reduce([], any_sched, batch_count=4) == 0

    def test_rejects_zero_batches(self, inline_sched):
        with pytest.raises(ValueError):
            sum_reduce([1], inline_sched, batch_count=0)

    def test_rejects_non_integer_views(self, inline_sched):
        with pytest.raises(TypeError):
            sum_reduce(np.array([1.5, 2.5]), inline_sched)

    def test_cross_configuration_equality(self):
        data = np.random.default_rng(21).integers(-1000, 1000, size=100_000)
        expected = int(data.sum())
        assert sum_reduce(data, make_inline_scheduler(), batch_count=1) == expected
        with make_group_scheduler([1] * 8) as group:
            assert sum_reduce(data, group, batch_count=10) == expected


class TestMaxScan:
    def test_small_max(self, any_sched):
        assert max_scan([3, 7, 2], any_sched) == 7

    def test_empty_view_is_zero(self, any_sched):
        assert max_scan([], any_sched, batch_count=3) == 0

    def test_negative_values_handled(self, inline_sched):
        assert max_scan([-5, -2, -9], inline_sched, batch_count=2) == -2

    def test_matches_single_pass_scan(self):
        rng = np.random.default_rng(34)
        for resources in (1, 2, 4, 8):
            with make_group_scheduler([1] * resources) as sched:
                for batches in (1, 5, 10):
                    data = rng.integers(0, 10_000, size=int(rng.integers(0, 5000)))
                    assert max_scan(data, sched, batches) == (int(data.max()) if len(data) else 0)


class TestAnalyzeMatrix:
    def test_hand_fixture(self, any_sched):
        assert analyze_matrix(to_flat(HAND_MATRIX), any_sched, batch_count=2) == HAND_REPORT

    def test_empty_matrix_all_zero(self, any_sched):
        empty = TrafficMatrix(0, 4, [0] * 5, [], [])
        assert analyze_matrix(to_flat(empty), any_sched) == AggregateReport.zero()

    def test_random_matrices_match_oracle(self, group_sched):
        rng = np.random.default_rng(55)
        for _ in range(200):
            stream = random_stream(rng, max_packets=300, max_space=64)
            matrices = build_matrices(stream, window_size=max(1, len(stream)))
            if not matrices:
                continue
            report = analyze_matrix(to_flat(matrices[0]), group_sched, batch_count=3)
            assert report == oracle_analyze(stream_pairs(stream))


class TestAnalyzeDataset:
    def test_single_matrix_totals_equal_report(self, inline_sched):
        reports, totals = analyze_dataset([HAND_MATRIX], inline_sched)
        assert reports == [HAND_REPORT]
        assert totals == HAND_REPORT

    def test_disjoint_matrices_sum(self, inline_sched):
        other = TrafficMatrix(1, 2, [0, 2, 3], [0, 1, 0], [4, 1, 1])
        reports, totals = analyze_dataset([HAND_MATRIX, other], inline_sched)
        assert totals.valid_packets == 12
        assert totals.unique_links == 6
        assert totals.unique_sources == 4
        assert totals.unique_destinations == 4
        assert totals.max_fanout == max(r.max_fanout for r in reports)
        assert totals.max_fanin == max(r.max_fanin for r in reports)

    def test_empty_dataset(self, inline_sched):
        reports, totals = analyze_dataset([], inline_sched)
        assert reports == []
        assert totals == AggregateReport.zero()

    def test_accepts_flats_and_matrices(self, inline_sched):
        _, from_matrix = analyze_dataset([HAND_MATRIX], inline_sched)
        _, from_flat = analyze_dataset([to_flat(HAND_MATRIX)], inline_sched)
        assert from_matrix == from_flat

    @given(n=st.integers(0, 400), window=st.integers(1, 50), seed=st.integers(0, 2**16))
    @settings(max_examples=30)
    def test_totals_conserve_stream_length(self, n, window, seed):
        stream = generate_packets(n, 32, seed=seed)
        sched = make_inline_scheduler()
        _, totals = analyze_dataset(build_matrices(stream, window), sched)
        assert totals.valid_packets == n


class TestOracle:
    def test_hand_count(self):
        report = oracle_analyze([(0, 1), (0, 1), (1, 0)])
        assert report == AggregateReport(3, 2, 2, 1, 2, 1)

    def test_empty_window(self):
        assert oracle_analyze([]) == AggregateReport.zero()

    def test_skips_invalid_packets(self):
        stream = generate_packets(200, 8, seed=4, invalid_fraction=0.5)
        assert oracle_analyze(stream).valid_packets == int(stream.valid.sum())


class TestReportProperties:
    @given(seed=st.integers(0, 2**20))
    @settings(max_examples=60)
    def test_structural_invariants(self, seed):
        rng = np.random.default_rng(seed)
        stream = random_stream(rng, max_packets=200, max_space=32)
        r = oracle_analyze(stream)
        assert r.unique_sources <= r.unique_links
        assert r.unique_destinations <= r.unique_links
        assert r.unique_links <= r.unique_sources * r.unique_destinations
        assert r.max_fanout <= r.unique_destinations
        assert r.max_fanin <= r.unique_sources
        assert r.valid_packets >= r.unique_links
        if r.valid_packets == 0:
            assert r == AggregateReport.zero()

    @given(seed=st.integers(0, 2**20), extra=st.tuples(st.integers(0, 15), st.integers(0, 15)))
    @settings(max_examples=60)
    def test_appending_a_packet_never_decreases_measures(self, seed, extra):
        rng = np.random.default_rng(seed)
        pairs = [(int(s), int(d)) for s, d in rng.integers(0, 16, size=(int(rng.integers(0, 60)), 2))]
        before = oracle_analyze(pairs)
        after = oracle_analyze(pairs + [extra])
        for field in before.to_dict():
            assert getattr(after, field) >= getattr(before, field)

    def test_matrix_path_monotone_too(self, inline_sched):
        rng = np.random.default_rng(3)
        pairs = rng.integers(0, 8, size=(40, 2))
        grown = np.vstack([pairs, [[2, 5]]])
        def report(p):
            from netmeter.traffic import matrix_from_pairs
            return analyze_matrix(to_flat(matrix_from_pairs(p[:, 0], p[:, 1], 8)), inline_sched)
        before, after = report(pairs), report(grown)
        for field in before.to_dict():
            assert getattr(after, field) >= getattr(before, field)


class TestConcurrentUse:
    def test_shared_scheduler_across_threads(self, group_sched):
        # distinct matrices analyzed concurrently on one scheduler
        from concurrent.futures import ThreadPoolExecutor

        rng = np.random.default_rng(91)
        streams = [random_stream(rng, max_packets=400, max_space=32) for _ in range(8)]
        flats, expected = [], []
        for stream in streams:
            matrices = build_matrices(stream, window_size=max(1, len(stream)))
            if not matrices:
                continue
            flats.append(to_flat(matrices[0]))
            expected.append(oracle_analyze(stream_pairs(stream)))
        with ThreadPoolExecutor(4) as pool:
            got = list(pool.map(lambda f: analyze_matrix(f, group_sched, 2), flats))
        assert got == expected


class TestSerialization:
    def test_dict_round_trip(self):
        assert AggregateReport.from_dict(HAND_REPORT.to_dict()) == HAND_REPORT

    def test_json_keys_are_field_names(self):
        payload = json.loads(json.dumps(HAND_REPORT.to_dict()))
        assert list(payload) == [
            "valid_packets",
            "unique_links",
            "unique_sources",
            "max_fanout",
            "unique_destinations",
            "max_fanin",
        ]
        assert AggregateReport.from_dict(payload) == HAND_REPORT
