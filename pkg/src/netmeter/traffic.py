"""Packet streams, anonymization, and windowed traffic matrices.

A packet stream is a flat (src, dst, valid) record sequence over a bounded
address space. Streams aggregate into one sparse CSR count matrix per
fixed-size window: entry (i, j) of window t counts the valid packets from
source i to destination j among packets ``t*W .. (t+1)*W-1``. The CSR form
expands into flat per-nonzero containers (edges, weights, degrees, row/col
sums) that the reduction pipeline consumes.

File formats (documented in the README):
  * matrix: text, header line ``dim nnz`` then one ``row col value`` line
    per nonzero, sorted row-major;
  * packets: binary, fixed-width little-endian records of u32 src, u32
    dst, u8 valid flag.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

import numpy as np

_PACKET_DTYPE = np.dtype([("src", "<u4"), ("dst", "<u4"), ("valid", "u1")])


class MatrixFormatError(ValueError):
    """A matrix violates the CSR invariants."""


class MatrixFileError(ValueError):
    """A matrix file cannot be parsed; the message carries path and line."""


@dataclass(frozen=True)
class PacketRecord:
    src: int
    dst: int
    valid: bool = True


@dataclass
class PacketStream:
    """Columnar packet records: src/dst address ids plus a validity flag."""

    src: np.ndarray
    dst: np.ndarray
    valid: np.ndarray
    address_space: int

    def __post_init__(self):
        self.src = np.ascontiguousarray(self.src, dtype=np.int64)
        self.dst = np.ascontiguousarray(self.dst, dtype=np.int64)
        self.valid = np.ascontiguousarray(self.valid, dtype=bool)
        if not (len(self.src) == len(self.dst) == len(self.valid)):
            raise ValueError("src, dst and valid must have equal lengths")
        if self.address_space < 1:
            raise ValueError("address_space must be >= 1")
        if len(self.src):
            lo = min(self.src.min(), self.dst.min())
            hi = max(self.src.max(), self.dst.max())
            if lo < 0 or hi >= self.address_space:
                raise ValueError("addresses must lie in [0, address_space)")

    def __len__(self) -> int:
        return len(self.src)

    def records(self) -> Iterator[PacketRecord]:
        for s, d, v in zip(self.src.tolist(), self.dst.tolist(), self.valid.tolist()):
            yield PacketRecord(s, d, v)


@dataclass(frozen=True)
class AnonymizationMap:
    """Injective raw-address -> anonymized-index map produced by anonymize()."""

    key: int
    mapping: dict[int, int] = field(repr=False)


def generate_packets(
    n: int, address_space: int, seed: int, invalid_fraction: float = 0.0
) -> PacketStream:
    """Uniform random packet stream, identical for identical arguments.

    All packets are valid unless ``invalid_fraction`` > 0, in which case
    roughly that fraction is flagged invalid (and later excluded from
    matrix construction).
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if address_space < 1:
        raise ValueError("address_space must be >= 1")
    if not 0.0 <= invalid_fraction <= 1.0:
        raise ValueError("invalid_fraction must be in [0, 1]")
    rng = np.random.default_rng(seed)
    src = rng.integers(0, address_space, size=n, dtype=np.int64)
    dst = rng.integers(0, address_space, size=n, dtype=np.int64)
    if invalid_fraction > 0.0:
        valid = rng.random(n) >= invalid_fraction
    else:
        valid = np.ones(n, dtype=bool)
    return PacketStream(src=src, dst=dst, valid=valid, address_space=address_space)


def anonymize(stream: PacketStream, key: int) -> tuple[PacketStream, AnonymizationMap]:
    """Relabel every observed address with a keyed pseudorandom dense index.

    Addresses are collected in first-seen order (src before dst within a
    packet) and mapped injectively onto [0, number of distinct addresses)
    via a permutation drawn from ``key``. The relabeling is a bijection on
    the observed addresses, so every aggregate measure of the stream is
    unchanged.
    """
    n = len(stream)
    interleaved = np.empty(2 * n, dtype=np.int64)
    interleaved[0::2] = stream.src
    interleaved[1::2] = stream.dst
    distinct, first_pos, inverse = np.unique(
        interleaved, return_index=True, return_inverse=True
    )
    # rank of each distinct address in first-seen order
    seen_order = np.argsort(first_pos, kind="stable")
    rank = np.empty(len(distinct), dtype=np.int64)
    rank[seen_order] = np.arange(len(distinct), dtype=np.int64)
    perm = np.random.default_rng(key).permutation(len(distinct)).astype(np.int64)
    code = perm[rank]
    relabeled = code[inverse]
    mapping = dict(zip(distinct.tolist(), code.tolist()))
    anon = PacketStream(
        src=relabeled[0::2].copy(),
        dst=relabeled[1::2].copy(),
        valid=stream.valid.copy(),
        address_space=max(1, len(distinct)),
    )
    return anon, AnonymizationMap(key=key, mapping=mapping)


@dataclass(eq=False)
class TrafficMatrix:
    """Sparse packet-count matrix for one window, in CSR form."""

    window_id: int
    dim: int
    row_ptr: np.ndarray
    col_idx: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.row_ptr = np.ascontiguousarray(self.row_ptr, dtype=np.int64)
        self.col_idx = np.ascontiguousarray(self.col_idx, dtype=np.int64)
        self.values = np.ascontiguousarray(self.values, dtype=np.int64)

    @property
    def nnz(self) -> int:
        return len(self.col_idx)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TrafficMatrix):
            return NotImplemented
        return (
            self.window_id == other.window_id
            and self.dim == other.dim
            and np.array_equal(self.row_ptr, other.row_ptr)
            and np.array_equal(self.col_idx, other.col_idx)
            and np.array_equal(self.values, other.values)
        )

    def validate(self) -> None:
        """Raise MatrixFormatError unless all CSR invariants hold."""
        if self.dim < 1:
            raise MatrixFormatError("dim must be >= 1")
        if len(self.row_ptr) != self.dim + 1:
            raise MatrixFormatError("row_ptr must have dim + 1 entries")
        if self.row_ptr[0] != 0 or np.any(np.diff(self.row_ptr) < 0):
            raise MatrixFormatError("row_ptr must start at 0 and be nondecreasing")
        if self.row_ptr[-1] != len(self.col_idx) or len(self.col_idx) != len(self.values):
            raise MatrixFormatError("row_ptr[-1], col_idx and values must agree on nnz")
        if self.nnz:
            if self.col_idx.min() < 0 or self.col_idx.max() >= self.dim:
                raise MatrixFormatError("column indices must lie in [0, dim)")
            if self.values.min() < 1:
                raise MatrixFormatError("values must be positive packet counts")
            rows = np.repeat(np.arange(self.dim, dtype=np.int64), np.diff(self.row_ptr))
            key = rows * self.dim + self.col_idx
            if np.any(np.diff(key) <= 0):
                raise MatrixFormatError("column indices must be strictly increasing within rows")

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.dim, self.dim), dtype=np.int64)
        rows = np.repeat(np.arange(self.dim, dtype=np.int64), np.diff(self.row_ptr))
        dense[rows, self.col_idx] = self.values
        return dense


def matrix_from_pairs(
    src: np.ndarray, dst: np.ndarray, dim: int, window_id: int = 0
) -> TrafficMatrix:
    """Count-aggregate (src, dst) pairs into one CSR matrix."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if dim > 2**31:
        raise ValueError("dim too large for packed pair keys")
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    keys, counts = np.unique(src * dim + dst, return_counts=True)
    rows = keys // dim
    cols = keys % dim
    row_ptr = np.zeros(dim + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=dim), out=row_ptr[1:])
    return TrafficMatrix(
        window_id=window_id,
        dim=dim,
        row_ptr=row_ptr,
        col_idx=cols,
        values=counts.astype(np.int64),
    )


def build_matrices(
    stream: PacketStream, window_size: int, dim: int | None = None
) -> list[TrafficMatrix]:
    """One matrix per window of ``window_size`` packets; the last may be partial.

    Windows are cut by raw stream position; invalid packets keep their
    position but contribute no counts, so each matrix's value total equals
    the window's valid-packet count.
    """
    if window_size < 1:
        raise ValueError("window_size must be >= 1")
    if dim is None:
        dim = stream.address_space
    n = len(stream)
    matrices = []
    for t in range(0, (n + window_size - 1) // window_size):
        lo, hi = t * window_size, min((t + 1) * window_size, n)
        keep = stream.valid[lo:hi]
        matrices.append(
            matrix_from_pairs(stream.src[lo:hi][keep], stream.dst[lo:hi][keep], dim, window_id=t)
        )
    return matrices


@dataclass
class FlatContainers:
    """Flat per-nonzero expansion of a CSR matrix.

    edges[k] = (src, dst) of nonzero k, weights[k] its packet count;
    out_degrees / in_degrees are the nonzero counts of the occupied rows /
    columns; row_sums / col_sums hold (index, packet total) per occupied
    row / column.
    """

    edges: np.ndarray
    weights: np.ndarray
    out_degrees: np.ndarray
    in_degrees: np.ndarray
    row_sums: np.ndarray
    col_sums: np.ndarray


def to_flat(matrix: TrafficMatrix) -> FlatContainers:
    """Expand a valid CSR matrix into its flat containers."""
    matrix.validate()
    dim = matrix.dim
    row_nnz = np.diff(matrix.row_ptr)
    edge_src = np.repeat(np.arange(dim, dtype=np.int64), row_nnz)
    edges = np.column_stack([edge_src, matrix.col_idx]) if matrix.nnz else np.empty((0, 2), np.int64)

    occupied_rows = np.flatnonzero(row_nnz > 0)
    if len(occupied_rows):
        starts = matrix.row_ptr[:-1][occupied_rows]
        row_totals = np.add.reduceat(matrix.values, starts)
    else:
        row_totals = np.empty(0, dtype=np.int64)
    row_sums = np.column_stack([occupied_rows, row_totals]).astype(np.int64)

    col_nnz = np.bincount(matrix.col_idx, minlength=dim)
    col_totals = np.zeros(dim, dtype=np.int64)
    np.add.at(col_totals, matrix.col_idx, matrix.values)
    occupied_cols = np.flatnonzero(col_nnz > 0)
    col_sums = np.column_stack([occupied_cols, col_totals[occupied_cols]]).astype(np.int64)

    return FlatContainers(
        edges=edges,
        weights=matrix.values.copy(),
        out_degrees=row_nnz[occupied_rows].astype(np.int64),
        in_degrees=col_nnz[occupied_cols].astype(np.int64),
        row_sums=row_sums,
        col_sums=col_sums,
    )


def write_matrix(matrix: TrafficMatrix, path: str | Path) -> None:
    """Write the coordinate text form: ``dim nnz`` header, then sorted ``row col value`` lines."""
    matrix.validate()
    rows = np.repeat(np.arange(matrix.dim, dtype=np.int64), np.diff(matrix.row_ptr))
    lines = [f"{matrix.dim} {matrix.nnz}"]
    lines.extend(
        f"{r} {c} {v}"
        for r, c, v in zip(rows.tolist(), matrix.col_idx.tolist(), matrix.values.tolist())
    )
    Path(path).write_text("\n".join(lines) + "\n")


def read_matrix(path: str | Path, window_id: int = 0) -> TrafficMatrix:
    """Parse a matrix file written by write_matrix; exact inverse of it.

    Malformed files raise MatrixFileError naming the file and line. Window
    identity is not stored in the file; callers assign it (the CLI uses
    manifest order).
    """
    path = Path(path)
    lines = [
        (lineno, parts)
        for lineno, parts in enumerate((ln.split() for ln in path.read_text().splitlines()), 1)
        if parts
    ]

    def fail(lineno: int, why: str) -> MatrixFileError:
        return MatrixFileError(f"{path}: line {lineno}: {why}")

    if not lines:
        raise fail(1, "expected header 'dim nnz'")
    if len(lines[0][1]) != 2:
        raise fail(lines[0][0], "expected header 'dim nnz'")
    try:
        dim, nnz = (int(tok) for tok in lines[0][1])
    except ValueError:
        raise fail(lines[0][0], "expected header 'dim nnz'") from None
    if dim < 1:
        raise fail(lines[0][0], "dim must be >= 1")
    if nnz < 0:
        raise fail(lines[0][0], "nnz must be >= 0")

    entry_lines = lines[1:]
    entries = np.empty((len(entry_lines), 3), dtype=np.int64)
    for k, (lineno, parts) in enumerate(entry_lines):
        if len(parts) != 3:
            raise fail(lineno, "expected 'row col value'")
        try:
            entries[k] = [int(tok) for tok in parts]
        except (ValueError, OverflowError):
            raise fail(lineno, "expected 'row col value' integers") from None
    if len(entry_lines) != nnz:
        raise MatrixFileError(
            f"{path}: header claims {nnz} entries, file has {len(entry_lines)}"
        )
    rows, cols, values = entries[:, 0], entries[:, 1], entries[:, 2]
    line_no = np.array([lineno for lineno, _ in entry_lines], dtype=np.int64)

    if nnz:
        bounds = (rows < 0) | (rows >= dim) | (cols < 0) | (cols >= dim)
        if np.any(bounds):
            raise fail(int(line_no[np.argmax(bounds)]), f"row/col outside [0, {dim})")
        if np.any(values < 1):
            raise fail(int(line_no[np.argmax(values < 1)]), "value must be >= 1")
        disorder = np.diff(rows * dim + cols) <= 0
        if np.any(disorder):
            raise fail(
                int(line_no[np.argmax(disorder) + 1]),
                "entries must be sorted row-major with no duplicates",
            )
    row_ptr = np.zeros(dim + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=dim), out=row_ptr[1:])
    return TrafficMatrix(window_id=window_id, dim=dim, row_ptr=row_ptr, col_idx=cols, values=values)


def write_packets(stream: PacketStream, path: str | Path) -> None:
    """Binary packet file: little-endian u32 src, u32 dst, u8 valid per record."""
    if len(stream) and max(stream.src.max(), stream.dst.max()) >= 2**32:
        raise ValueError("addresses exceed the 32-bit record format")
    out = np.empty(len(stream), dtype=_PACKET_DTYPE)
    out["src"] = stream.src
    out["dst"] = stream.dst
    out["valid"] = stream.valid
    out.tofile(str(path))


def read_packets(path: str | Path, address_space: int | None = None) -> PacketStream:
    """Read a binary packet file; address_space defaults to max address + 1."""
    raw = np.fromfile(str(path), dtype=_PACKET_DTYPE)
    src = raw["src"].astype(np.int64)
    dst = raw["dst"].astype(np.int64)
    if address_space is None:
        address_space = int(max(src.max(), dst.max())) + 1 if len(raw) else 1
    return PacketStream(src=src, dst=dst, valid=raw["valid"] != 0, address_space=address_space)
