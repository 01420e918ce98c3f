"""Bit-packed linear algebra over GF(2).

Vectors and matrices store bits row-major in 64-bit words, bit ``i`` of a row
living in word ``i // 64`` at position ``i % 64``. Both types are immutable:
their word arrays are flagged read-only, so values can be shared freely
between threads and processes.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

WORD_BITS = 64

__all__ = [
    "BitVector",
    "BitMatrix",
    "rank",
    "in_rowspace",
    "kernel_basis",
    "popcount",
]

_ONE = np.uint64(1)


def _num_words(length: int) -> int:
    return (length + WORD_BITS - 1) // WORD_BITS


def _tail_mask(length: int) -> np.uint64:
    rem = length % WORD_BITS
    if rem == 0:
        return np.uint64(0xFFFFFFFFFFFFFFFF)
    return np.uint64((1 << rem) - 1)


def popcount(words: np.ndarray) -> np.ndarray:
    """Population count of each uint64 along the last axis, summed."""
    return np.bitwise_count(words).sum(axis=-1, dtype=np.int64)


def pack_bits(bits: np.ndarray) -> np.ndarray:
    """Pack a (..., length) 0/1 array into (..., words) uint64 little-endian."""
    bits = np.asarray(bits, dtype=np.uint8) & 1
    length = bits.shape[-1]
    nw = _num_words(length)
    padded = np.zeros(bits.shape[:-1] + (nw * WORD_BITS,), dtype=np.uint8)
    padded[..., :length] = bits
    packed = np.packbits(padded, axis=-1, bitorder="little")
    return np.ascontiguousarray(packed).view(np.uint64).reshape(bits.shape[:-1] + (nw,))


def unpack_bits(words: np.ndarray, length: int) -> np.ndarray:
    words = np.ascontiguousarray(words, dtype=np.uint64)
    as_bytes = words.view(np.uint8).reshape(words.shape[:-1] + (words.shape[-1] * 8,))
    return np.unpackbits(as_bytes, axis=-1, bitorder="little")[..., :length]


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=np.uint64)
    arr.flags.writeable = False
    return arr


class BitVector:
    """Immutable bit vector of fixed length."""

    __slots__ = ("length", "words")

    def __init__(self, length: int, words: np.ndarray | None = None) -> None:
        if length < 0:
            raise ValueError("length must be non-negative")
        nw = _num_words(length)
        if words is None:
            words = np.zeros(nw, dtype=np.uint64)
        else:
            words = np.array(words, dtype=np.uint64).reshape(-1)
            if words.shape[0] != nw:
                raise ValueError(f"expected {nw} words for length {length}, got {words.shape[0]}")
            if nw:
                words[-1] &= _tail_mask(length)
        self.length = length
        self.words = _frozen(words)

    @classmethod
    def zeros(cls, length: int) -> BitVector:
        return cls(length)

    @classmethod
    def from_bits(cls, bits: Sequence[int] | np.ndarray) -> BitVector:
        bits = np.asarray(bits, dtype=np.uint8)
        return cls(bits.shape[0], pack_bits(bits))

    @classmethod
    def from_support(cls, length: int, support: Iterable[int]) -> BitVector:
        bits = np.zeros(length, dtype=np.uint8)
        for i in support:
            if not 0 <= i < length:
                raise IndexError(f"support index {i} out of range for length {length}")
            bits[i] ^= 1
        return cls.from_bits(bits)

    @classmethod
    def from_int(cls, length: int, value: int) -> BitVector:
        nw = _num_words(length)
        words = [(value >> (WORD_BITS * i)) & 0xFFFFFFFFFFFFFFFF for i in range(nw)]
        return cls(length, np.array(words, dtype=np.uint64))

    def to_bits(self) -> np.ndarray:
        return unpack_bits(self.words, self.length)

    def to_int(self) -> int:
        return sum(int(w) << (WORD_BITS * i) for i, w in enumerate(self.words))

    def support(self) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.to_bits())]

    @property
    def weight(self) -> int:
        return int(popcount(self.words))

    def any(self) -> bool:
        return bool(self.words.any())

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, i: int) -> int:
        if i < 0:
            i += self.length
        if not 0 <= i < self.length:
            raise IndexError(i)
        return int((self.words[i // WORD_BITS] >> np.uint64(i % WORD_BITS)) & _ONE)

    def _check(self, other: BitVector) -> None:
        if self.length != other.length:
            raise ValueError(f"length mismatch: {self.length} != {other.length}")

    def __xor__(self, other: BitVector) -> BitVector:
        self._check(other)
        return BitVector(self.length, self.words ^ other.words)

    def __and__(self, other: BitVector) -> BitVector:
        self._check(other)
        return BitVector(self.length, self.words & other.words)

    def __or__(self, other: BitVector) -> BitVector:
        self._check(other)
        return BitVector(self.length, self.words | other.words)

    def dot(self, other: BitVector) -> int:
        """GF(2) inner product."""
        self._check(other)
        return int(popcount(self.words & other.words)) & 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitVector):
            return NotImplemented
        return self.length == other.length and bool(np.array_equal(self.words, other.words))

    def __hash__(self) -> int:
        return hash((self.length, self.words.tobytes()))

    def __repr__(self) -> str:
        return f"BitVector({''.join(map(str, self.to_bits()))})"


class BitMatrix:
    """Immutable GF(2) matrix, rows packed into 64-bit words."""

    __slots__ = ("rows", "cols", "data", "__dict__")

    def __init__(self, rows: int, cols: int, data: np.ndarray | None = None) -> None:
        nw = _num_words(cols)
        if data is None:
            data = np.zeros((rows, nw), dtype=np.uint64)
        else:
            data = np.array(data, dtype=np.uint64).reshape(rows, nw)
            if nw:
                data[:, -1] &= _tail_mask(cols)
        self.rows = rows
        self.cols = cols
        self.data = _frozen(data)

    @classmethod
    def from_dense(cls, dense: np.ndarray | Sequence[Sequence[int]], cols: int | None = None) -> BitMatrix:
        dense = np.asarray(dense, dtype=np.uint8)
        if dense.ndim == 1 and dense.size == 0:
            return cls(0, cols or 0)
        if dense.ndim != 2:
            raise ValueError("dense matrix must be 2-dimensional")
        return cls(dense.shape[0], dense.shape[1], pack_bits(dense))

    @classmethod
    def from_rows(cls, rows: Sequence[BitVector], cols: int | None = None) -> BitMatrix:
        if not rows:
            if cols is None:
                raise ValueError("cols required for an empty row list")
            return cls(0, cols)
        cols = rows[0].length if cols is None else cols
        for r in rows:
            if r.length != cols:
                raise ValueError("every row must have length == cols")
        return cls(len(rows), cols, np.stack([r.words for r in rows]))

    @classmethod
    def identity(cls, size: int) -> BitMatrix:
        return cls.from_dense(np.eye(size, dtype=np.uint8))

    def to_dense(self) -> np.ndarray:
        return unpack_bits(self.data, self.cols)

    def row(self, i: int) -> BitVector:
        return BitVector(self.cols, self.data[i])

    def __iter__(self):
        return (self.row(i) for i in range(self.rows))

    def __len__(self) -> int:
        return self.rows

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def vstack(self, other: BitMatrix) -> BitMatrix:
        if self.cols != other.cols:
            raise ValueError("column mismatch")
        return BitMatrix(self.rows + other.rows, self.cols, np.vstack([self.data, other.data]))

    def transpose(self) -> BitMatrix:
        return BitMatrix.from_dense(self.to_dense().T.copy()) if self.rows else BitMatrix(self.cols, 0)

    def mul_vec(self, v: BitVector) -> BitVector:
        """Return ``M v`` (one parity per row)."""
        if v.length != self.cols:
            raise ValueError("dimension mismatch")
        bits = popcount(self.data & v.words[None, :]) & 1
        return BitVector.from_bits(bits.astype(np.uint8))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.data, other.data))

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.data.tobytes()))

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"

    @cached_property
    def _rref(self) -> tuple[np.ndarray, list[int]]:
        return _row_reduce(self.data, self.cols)

    def rref(self) -> tuple[BitMatrix, list[int]]:
        """Reduced row echelon form (nonzero rows only) and pivot columns."""
        reduced, pivots = self._rref
        return BitMatrix(len(pivots), self.cols, reduced), list(pivots)

    @property
    def rank(self) -> int:
        return len(self._rref[1])


def _row_reduce(data: np.ndarray, cols: int) -> tuple[np.ndarray, list[int]]:
    a = np.array(data, dtype=np.uint64)
    nrows = a.shape[0]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == nrows:
            break
        w, b = divmod(c, WORD_BITS)
        col = (a[:, w] >> np.uint64(b)) & _ONE
        cand = np.flatnonzero(col[r:])
        if cand.size == 0:
            continue
        p = r + int(cand[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        hits = np.flatnonzero((a[:, w] >> np.uint64(b)) & _ONE)
        hits = hits[hits != r]
        if hits.size:
            a[hits] ^= a[r]
        pivots.append(c)
        r += 1
    return a[:r].copy(), pivots


def rank(m: BitMatrix) -> int:
    """GF(2) row rank."""
    return m.rank


def reduce_vector(v: BitVector, m: BitMatrix) -> BitVector:
    """Residual of ``v`` after eliminating the pivots of ``m``'s RREF."""
    if v.length != m.cols:
        raise ValueError(f"dimension mismatch: vector {v.length}, matrix cols {m.cols}")
    reduced, pivots = m._rref
    if not pivots:
        return v
    piv = np.asarray(pivots)
    coeff = (v.words[piv // WORD_BITS] >> (piv % WORD_BITS).astype(np.uint64)) & _ONE
    sel = reduced[coeff.astype(bool)]
    acc = np.bitwise_xor.reduce(sel, axis=0) if sel.shape[0] else np.zeros_like(v.words)
    return BitVector(v.length, v.words ^ acc)


def in_rowspace(v: BitVector, m: BitMatrix) -> bool:
    """True iff ``v`` is a GF(2) combination of the rows of ``m``."""
    return not reduce_vector(v, m).any()


def kernel_basis(m: BitMatrix) -> BitMatrix:
    """Basis of ``{x : m x = 0}`` as rows, one per free column."""
    reduced, pivots = m._rref
    dense = unpack_bits(reduced, m.cols) if pivots else np.zeros((0, m.cols), dtype=np.uint8)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    basis = np.zeros((len(free), m.cols), dtype=np.uint8)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, p in enumerate(pivots):
            if dense[r, f]:
                basis[i, p] = 1
    if not free:
        return BitMatrix(0, m.cols)
    return BitMatrix.from_dense(basis)


def rowspace_equal(a: BitMatrix, b: BitMatrix) -> bool:
    if a.cols != b.cols:
        return False
    return a.rank == b.rank == a.vstack(b).rank


def complement_basis(sub: BitMatrix, space: BitMatrix) -> BitMatrix:
    """Rows of ``space`` extending a basis of ``rowspace(sub)`` to ``rowspace(space)``.

    Assumes ``rowspace(sub)`` is contained in ``rowspace(space)``.
    """
    chosen: list[BitVector] = []
    current = sub
    for row in space:
        if not in_rowspace(row, current):
            chosen.append(row)
            current = current.vstack(BitMatrix.from_rows([row]))
    return BitMatrix.from_rows(chosen, cols=space.cols)
