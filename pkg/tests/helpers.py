"""Random generators shared by the test modules."""

import numpy as np

from netmeter.traffic import PacketStream, TrafficMatrix, matrix_from_pairs


def random_stream(rng, max_packets=200, max_space=64) -> PacketStream:
    n = int(rng.integers(0, max_packets + 1))
    space = int(rng.integers(1, max_space + 1))
    return PacketStream(
        src=rng.integers(0, space, size=n, dtype=np.int64),
        dst=rng.integers(0, space, size=n, dtype=np.int64),
        valid=np.ones(n, dtype=bool),
        address_space=space,
    )


def random_matrix(rng, max_dim=64, max_packets=400, window_id=0) -> TrafficMatrix:
    dim = int(rng.integers(1, max_dim + 1))
    n = int(rng.integers(0, max_packets + 1))
    return matrix_from_pairs(
        rng.integers(0, dim, size=n, dtype=np.int64),
        rng.integers(0, dim, size=n, dtype=np.int64),
        dim,
        window_id=window_id,
    )


def stream_pairs(stream: PacketStream):
    keep = stream.valid
    return list(zip(stream.src[keep].tolist(), stream.dst[keep].tolist()))
