from __future__ import annotations

import pytest

from bcc.code import BccSpec, InvalidSpecError, from_offsets, logical_count, prepared_logical_state, PreparedState
from bcc.distance import distance
from bcc.families import (
    cluster_state_stabilizers,
    complement_offsets,
    cyclic_cluster_code,
    cyclic_cluster_transform,
    five_qubit_code,
    multiplier_hadamard_holds,
    plaquette,
    plaquettes_in_stabilizer,
    rotated_toric_code,
    rotated_toric_offsets,
)


def test_rotated_toric_offsets():
    assert rotated_toric_offsets(3) == (10, [-3, 3, 5])
    assert rotated_toric_offsets(5) == (26, [-5, 5, -9, 9, 13])
    assert rotated_toric_offsets(7) == (50, [-7, 7, -13, 13, -19, 19, 25])
    with pytest.raises(ValueError):
        rotated_toric_offsets(4)
    with pytest.raises(ValueError):
        rotated_toric_offsets(1)


@pytest.mark.parametrize("d", [3, 5])
def test_rotated_toric_parameters(d):
    code = rotated_toric_code(d)
    assert (code.n, code.k, distance(code)) == (d * d + 1, 2, d)
    assert plaquettes_in_stabilizer(code, d)
    assert multiplier_hadamard_holds(code, d)


def test_plaquette_is_generator_for_d3():
    code = rotated_toric_code(3)
    assert plaquette(10, 0, 3).to_string() == "ZZIZZIIIII"
    assert code.is_stabilizer(plaquette(10, 0, 3))


def test_complement_offsets():
    assert complement_offsets(10, [3, 5, 7]) == [1, 9]
    assert complement_offsets(18, [5, 11, 15, 17]) == [1, 3, 7, 9, 13]
    with pytest.raises(InvalidSpecError):
        complement_offsets(6, [1, 3, 5])


def test_complement_parity_flip():
    for n, S in [(10, [3, 5, 7]), (18, [5, 11, 15, 17]), (14, [1, 3])]:
        comp = complement_offsets(n, S)
        assert len(comp) % 2 != len(S) % 2
        state = prepared_logical_state(BccSpec(n, tuple(comp)))
        assert (state is PreparedState.PLUS_ZERO) == (len(comp) % 2 == 0)
        assert logical_count(from_offsets(n, comp)) == 2


def test_cyclic_cluster_transform():
    assert cyclic_cluster_transform(10, [-3, 3, 5]) == (5, [1, 4])
    half, T = cyclic_cluster_transform(26, [-5, 5, -9, 9, 13])
    assert half == 13
    assert sorted((-t) % 13 for t in T) == T
    with pytest.raises(ValueError):
        cyclic_cluster_transform(12, [1])


def test_five_qubit_code_match():
    cc = cyclic_cluster_code(5, [1, 4])
    assert cc.logical_count() == 1
    assert cc.same_group(five_qubit_code())
    assert cc.distance() == 3
    for a in cc.generators:
        assert all(a.commutes_with(b) for b in cc.generators)


def test_cluster_generators_are_xzz():
    gens = cluster_state_stabilizers(5, [1, 4])
    assert gens[0].to_string() == "XZIIZ"
    with pytest.raises(ValueError):
        cluster_state_stabilizers(5, [])
    with pytest.raises(ValueError):
        cluster_state_stabilizers(5, [1])
    with pytest.raises(ValueError):
        cluster_state_stabilizers(5, [0, 1, 4])
