from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from bcc.code import from_offsets
from bcc.gf2 import (
    BitMatrix,
    BitVector,
    in_rowspace,
    kernel_basis,
    pack_bits,
    rank,
    rowspace_equal,
    unpack_bits,
)
from conftest import span


def small_matrices(max_rows=8, max_cols=12):
    return st.tuples(st.integers(0, max_rows), st.integers(1, max_cols)).flatmap(
        lambda rc: arrays(np.uint8, rc, elements=st.integers(0, 1))
    )


bit_lists = st.integers(1, 150).flatmap(lambda n: st.lists(st.integers(0, 1), min_size=n, max_size=n))


@given(bit_lists)
def test_bitvector_round_trip(bits):
    v = BitVector.from_bits(bits)
    assert list(v.to_bits()) == bits
    assert v.weight == sum(bits)
    assert v.support() == [i for i, b in enumerate(bits) if b]
    assert BitVector.from_int(len(bits), v.to_int()) == v


@given(bit_lists)
def test_storage_beyond_length_is_zero(bits):
    v = BitVector.from_bits(bits)
    tail = len(v.words) * 64 - len(bits)
    if tail:
        assert int(v.words[-1]) >> (64 - tail) == 0


@given(st.integers(1, 130), st.data())
def test_xor_matches_symmetric_difference(n, data):
    a = set(data.draw(st.lists(st.integers(0, n - 1), max_size=n)))
    b = set(data.draw(st.lists(st.integers(0, n - 1), max_size=n)))
    c = set(data.draw(st.lists(st.integers(0, n - 1), max_size=n)))
    va, vb, vc = (BitVector.from_support(n, s) for s in (a, b, c))
    assert set((va ^ vb).support()) == a ^ b
    assert va ^ vb == vb ^ va
    assert (va ^ vb) ^ vc == va ^ (vb ^ vc)
    assert not (va ^ va).any()
    assert (va & vb).weight == len(a & b)
    assert va.dot(vb) == len(a & b) % 2


def test_xor_length_mismatch():
    with pytest.raises(ValueError):
        BitVector.zeros(3) ^ BitVector.zeros(4)


@given(arrays(np.uint8, st.tuples(st.integers(1, 5), st.integers(1, 200)), elements=st.integers(0, 1)))
def test_pack_unpack(bits):
    assert np.array_equal(unpack_bits(pack_bits(bits), bits.shape[-1]), bits)


def test_rank_examples():
    assert rank(BitMatrix.from_dense(np.zeros((3, 3), dtype=np.uint8))) == 0
    assert rank(BitMatrix.identity(4)) == 4
    assert rank(BitMatrix(0, 5)) == 0


def test_rank_of_18_qubit_symplectic_matrix():
    code = from_offsets(18, [5, 11, 15, 17])
    m = code.symplectic_matrix()
    assert m.shape == (18, 36)
    assert rank(m) == 16
    # independent dense elimination
    dense = m.to_dense().astype(np.int64)
    r = 0
    for c in range(dense.shape[1]):
        piv = [i for i in range(r, dense.shape[0]) if dense[i, c]]
        if not piv:
            continue
        dense[[r, piv[0]]] = dense[[piv[0], r]]
        for i in range(dense.shape[0]):
            if i != r and dense[i, c]:
                dense[i] ^= dense[r]
        r += 1
    assert r == 16


@settings(max_examples=60)
@given(small_matrices())
def test_rank_matches_span_size(dense):
    m = BitMatrix.from_dense(dense, cols=dense.shape[1])
    assert len(span(dense)) == 2 ** rank(m)
    assert rank(m) <= min(dense.shape)
    reduced, _ = m.rref()
    assert rank(reduced) == rank(m)


@settings(max_examples=60)
@given(small_matrices(), st.data())
def test_rank_invariant_under_row_ops(dense, data):
    m = BitMatrix.from_dense(dense, cols=dense.shape[1])
    if dense.shape[0] >= 2:
        perm = data.draw(st.permutations(list(range(dense.shape[0]))))
        mixed = dense[perm].copy()
        mixed[0] ^= mixed[1]
        assert rank(BitMatrix.from_dense(mixed)) == rank(m)


@settings(max_examples=60)
@given(small_matrices())
def test_kernel_basis(dense):
    m = BitMatrix.from_dense(dense, cols=dense.shape[1])
    k = kernel_basis(m)
    assert k.rows == dense.shape[1] - rank(m)
    assert rank(k) == k.rows
    if k.rows and dense.shape[0]:
        assert not ((dense.astype(np.int64) @ k.to_dense().T.astype(np.int64)) % 2).any()


def test_kernel_examples():
    assert kernel_basis(BitMatrix.identity(3)).rows == 0
    assert kernel_basis(BitMatrix.from_dense([[1, 1, 1, 1]])).rows == 3
    code = from_offsets(10, [3, 5, 7])
    k = kernel_basis(code.hz)
    assert k.rows == 10 - rank(code.hz)
    for v in k:
        assert not code.hz.mul_vec(v).any()


@settings(max_examples=60)
@given(small_matrices(max_rows=8, max_cols=10), st.data())
def test_in_rowspace_matches_enumeration(dense, data):
    m = BitMatrix.from_dense(dense, cols=dense.shape[1])
    members = span(dense)
    v = np.array(data.draw(st.lists(st.integers(0, 1), min_size=dense.shape[1], max_size=dense.shape[1])), dtype=np.uint8)
    assert in_rowspace(BitVector.from_bits(v), m) == (v.tobytes() in members)


def test_in_rowspace_examples():
    dense = np.array([[1, 1, 0, 0], [0, 1, 1, 0], [1, 0, 1, 0]], dtype=np.uint8)
    m = BitMatrix.from_dense(dense)
    for row in m:
        assert in_rowspace(row, m)
    assert in_rowspace(BitVector.zeros(4), m)
    outside = BitVector.from_bits([0, 0, 0, 1])
    assert outside.to_bits().tobytes() not in span(dense)
    assert not in_rowspace(outside, m)
    with pytest.raises(ValueError):
        in_rowspace(BitVector.zeros(5), m)


def test_rowspace_equal():
    a = BitMatrix.from_dense([[1, 1, 0], [0, 1, 1]])
    b = BitMatrix.from_dense([[1, 0, 1], [1, 1, 0]])
    c = BitMatrix.from_dense([[1, 0, 0]])
    assert rowspace_equal(a, b)
    assert not rowspace_equal(a, c)


def test_values_are_immutable():
    v = BitVector.from_bits([1, 0, 1])
    with pytest.raises(ValueError):
        v.words[0] = 0
