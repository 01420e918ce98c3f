from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bcc.pauli import PauliOperator

paulis = st.integers(1, 8).flatmap(lambda n: st.text("IXYZ", min_size=n, max_size=n))


def test_from_string_and_weight():
    p = PauliOperator.from_string("XIZY")
    assert p.to_string() == "XIZY"
    assert p.weight == 3
    assert p.support == [0, 2, 3]
    assert PauliOperator.from_string("-XZ").sign == -1
    assert PauliOperator.x_type(4, [0, 2]).to_string() == "XIXI"
    assert PauliOperator.z_type(3, [1]).is_z_type


def test_single_qubit_algebra():
    x, y, z = (PauliOperator.from_string(c) for c in "XYZ")
    assert not x.commutes_with(z)
    assert x.commutes_with(x)
    assert (x * x).to_string(signed=True) == "+I"
    # XZ = -iY is not Hermitian
    with pytest.raises(ValueError):
        x * z


def test_two_qubit_products():
    xx = PauliOperator.from_string("XX")
    zz = PauliOperator.from_string("ZZ")
    assert xx.commutes_with(zz)
    assert (xx * zz).to_string(signed=True) == "-YY"


@given(paulis, st.data())
def test_commutation_is_symplectic(a, data):
    b = data.draw(st.text("IXYZ", min_size=len(a), max_size=len(a)))
    pa, pb = PauliOperator.from_string(a), PauliOperator.from_string(b)
    anti = sum(1 for u, v in zip(a, b) if u != "I" and v != "I" and u != v) % 2
    assert pa.commutes_with(pb) == (anti == 0)
    assert pa.commutes_with(pb) == pb.commutes_with(pa)


@given(paulis)
def test_hadamard_and_permutation(s):
    p = PauliOperator.from_string(s)
    swapped = "".join({"X": "Z", "Z": "X"}.get(c, c) for c in s)
    assert p.hadamard_transformed().to_string() == swapped
    perm = list(range(1, len(s))) + [0]
    moved = p.permuted(perm).to_string()
    assert all(moved[perm[i]] == s[i] for i in range(len(s)))
