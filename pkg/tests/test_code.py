from __future__ import annotations

import itertools
from math import gcd

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bcc.code import (
    BccSpec,
    GeneralBccSpec,
    InvalidSpecError,
    PreparedState,
    code_from_spec,
    from_general_spec,
    from_offsets,
    hadamard_swap_permutation,
    is_automorphism,
    logical_count,
    low_weight_stabilizers,
    prepared_logical_state,
    product_logicals,
    pushed_single_logical,
    self_orthogonal,
    shift_permutation,
)
from bcc.distance import distance, distance_xz
from bcc.gf2 import BitMatrix, in_rowspace, rank, rowspace_equal
from bcc.pauli import PauliOperator
from oracles import oracle_generators


@st.composite
def bcc_specs(draw, max_n=20):
    n = draw(st.sampled_from(range(4, max_n + 1, 2)))
    odds = list(range(1, n, 2))
    S = draw(st.lists(st.sampled_from(odds), min_size=1, max_size=len(odds), unique=True))
    return n, sorted(S)


def supports(matrix: BitMatrix) -> list[set[int]]:
    return [set(r.support()) for r in matrix]


def test_generator_examples():
    code = from_offsets(10, [3, 5, 7])
    assert code.x_generators()[0].to_string() == "XIXXIIIIIX"
    assert set(code.x_generators()[0].support) == {0, 2, 3, 9}
    z1 = code.z_generators()[0]
    assert set(z1.support) == {0, 1, 3, 4}
    tiny = from_offsets(4, [1, 3])
    assert supports(tiny.hx) == [{0, 2}, {0, 2}]
    assert supports(tiny.hz) == [{1, 3}, {1, 3}]


@pytest.mark.parametrize(
    "n, S",
    [(9, [1]), (10, [2]), (10, []), (10, [3, 3]), (2, [1]), (10, [3, 13])],
)
def test_invalid_specs(n, S):
    with pytest.raises(InvalidSpecError):
        BccSpec(n, tuple(S))


def test_negative_offsets_normalize():
    assert BccSpec(10, (-3, 3, 5)).offsets == (3, 5, 7)


def test_generators_match_conjugation_oracle_exhaustive_small():
    for n in (4, 6, 8):
        odds = range(1, n, 2)
        for size in range(1, len(odds) + 1):
            for S in itertools.combinations(odds, size):
                code = from_offsets(n, S)
                xs, zs = oracle_generators(n, S)
                assert supports(code.hx) == xs
                assert supports(code.hz) == zs


@settings(max_examples=80, deadline=None)
@given(bcc_specs())
def test_generators_match_conjugation_oracle(spec):
    n, S = spec
    code = from_offsets(n, S)
    xs, zs = oracle_generators(n, S)
    assert supports(code.hx) == xs
    assert supports(code.hz) == zs


@settings(max_examples=60, deadline=None)
@given(bcc_specs())
def test_css_structure(spec):
    n, S = spec
    code = from_offsets(n, S)
    hx, hz = code.hx.to_dense().astype(int), code.hz.to_dense().astype(int)
    assert not ((hx @ hz.T) % 2).any()
    assert logical_count(code) == 2
    assert rank(code.symplectic_matrix()) == n - 2
    for i, (lx, lz) in enumerate(code.logicals):
        for g in code.generators():
            assert lx.commutes_with(g) and lz.commutes_with(g)
        for j, (mx, mz) in enumerate(code.logicals):
            assert lx.commutes_with(mz) == (i != j)
            assert lx.commutes_with(mx) and lz.commutes_with(mz)


@settings(max_examples=40, deadline=None)
@given(bcc_specs(max_n=16))
def test_distance_bounded_by_pushed_logical(spec):
    n, S = spec
    code = from_offsets(n, S)
    push = pushed_single_logical(code, 0)
    assert code.is_logical(push)
    assert push.weight == len(S) + 1
    d = distance(code)
    assert d is not None and d <= len(S) + 1
    dx, dz = distance_xz(code)
    assert dx == dz


@settings(max_examples=40, deadline=None)
@given(bcc_specs())
def test_shift_by_two_is_automorphism(spec):
    n, S = spec
    code = from_offsets(n, S)
    assert is_automorphism(code, shift_permutation(n, 2))
    assert is_automorphism(code, hadamard_swap_permutation(code), then_transversal_h=True)


@settings(max_examples=30, deadline=None)
@given(bcc_specs(max_n=16), st.data())
def test_unit_relabeling_preserves_distance(spec, data):
    n, S = spec
    units = [c for c in range(1, n, 2) if gcd(c, n) == 1]
    c = data.draw(st.sampled_from(units))
    assert distance(from_offsets(n, S)) == distance(from_offsets(n, [c * s for s in S]))


def test_general_spec_matches_single_index():
    spec = BccSpec(18, (5, 11, 15, 17))
    a = code_from_spec(spec)
    b = from_general_spec(spec.to_general())
    assert rowspace_equal(a.hx, b.hx) and rowspace_equal(a.hz, b.hz)
    assert b.k == 2


def test_general_spec_small():
    g = GeneralBccSpec(3, 2, frozenset({1}), frozenset({(1, 2, 0)}))
    code = from_general_spec(g)
    assert code.n == 6
    assert logical_count(code) == 2
    assert all(p.weight <= 4 for p in code.generators())
    with pytest.raises(InvalidSpecError):
        GeneralBccSpec(3, 2, frozenset({1}), frozenset())
    with pytest.raises(InvalidSpecError):
        GeneralBccSpec(3, 2, frozenset({1, 2}), frozenset({(1, 2, 0)}))


def test_logical_count_examples():
    assert logical_count(from_offsets(18, [5, 11, 15, 17])) == 2
    assert logical_count(from_offsets(10, [3, 5, 7])) == 2


def test_product_logicals():
    code = from_offsets(10, [3, 5, 7])
    (x1, z1), (x2, z2) = product_logicals(code)
    assert z1.to_string() == "ZIZIZIZIZI"
    assert not z1.commutes_with(x1)
    assert all(z1.commutes_with(g) for g in code.generators())
    code18 = from_offsets(18, [5, 11, 15, 17])
    for lx, lz in product_logicals(code18):
        assert all(lx.commutes_with(g) and lz.commutes_with(g) for g in code18.generators())
    with pytest.raises(ValueError):
        product_logicals(from_offsets(4, [1, 3]))


def test_pushed_single_logical_examples():
    code = from_offsets(18, [5, 11, 15, 17])
    op = pushed_single_logical(code, 0)
    assert op.is_x_type
    assert op.weight_on(code.a_qubits) == 1 and op.weight_on(code.b_qubits) == 4
    assert code.is_logical(op)
    tiny = from_offsets(4, [1, 3])
    assert pushed_single_logical(tiny, 0).to_string() == "XXIX"
    with pytest.raises(IndexError):
        pushed_single_logical(code, 18)


def test_hadamard_swap_examples():
    for n, S in [(10, [3, 5, 7]), (18, [5, 11, 15, 17])]:
        code = from_offsets(n, S)
        perm = hadamard_swap_permutation(code)
        assert perm != list(range(n))
        assert all((perm[m] - m) % 2 == 1 for m in range(n))
        assert is_automorphism(code, perm, then_transversal_h=True)


def test_random_permutation_is_not_automorphism(rng):
    code = from_offsets(18, [5, 11, 15, 17])
    perm = [int(v) for v in rng.permutation(18)]
    assert not is_automorphism(code, perm)
    assert not is_automorphism(code, perm, then_transversal_h=True)


def test_self_orthogonal():
    assert self_orthogonal(from_offsets(18, [5, 11, 15, 17]))
    assert not self_orthogonal(from_offsets(4, [1, 3]))
    assert not self_orthogonal(from_offsets(10, [3, 5, 7]))


def test_prepared_state():
    assert prepared_logical_state(BccSpec(18, (5, 11, 15, 17))) is PreparedState.PLUS_ZERO
    assert prepared_logical_state(BccSpec(10, (3, 5, 7))) is PreparedState.BELL_PAIR
    assert prepared_logical_state(BccSpec(10, (1, 9))) is PreparedState.PLUS_ZERO


def test_low_weight_stabilizers_18():
    code = from_offsets(18, [5, 11, 15, 17])
    low = low_weight_stabilizers(code, 4)
    strings = {p.to_string() for p in low}
    for t in range(0, 18, 2):
        sup = [(q + t) % 18 for q in (-3, 0, 3, 6)]
        assert PauliOperator.x_type(18, sup).to_string() in strings
        assert PauliOperator.z_type(18, sup).to_string() in strings
    assert all(code.is_stabilizer(p) for p in low)
    assert len(low) == 18
    # three disjoint six-qubit groups {r, r+3, ..., r+15}, each carrying XXXXII, IIXXXX, XXIIXX
    groups = {frozenset(range(r, 18, 3)) for r in range(3)}
    for p in low:
        assert frozenset(p.support) <= next(g for g in groups if p.support[0] in g)


def test_low_weight_stabilizers_rotated_toric():
    code = from_offsets(10, [3, 5, 7])
    low = low_weight_stabilizers(code, 4)
    assert all(p.weight == 4 for p in low)
    assert {frozenset(p.support) for p in low if p.is_z_type} >= {
        frozenset((m + t) % 10 for t in (0, 1, 3, 4)) for m in range(0, 10, 2)
    }
