from __future__ import annotations

import numpy as np
import pytest
from oracles import deterministic_parity_flips, left_kernel, tableau_fault_flips

from bcc.circuit import bell_experiment, parse_circuit, prep_circuit
from bcc.code import BccSpec
from bcc.frames import (
    Fault,
    NoiseModel,
    propagate_faults,
    sample_chunks,
    sample_frames,
    single_faults,
)


def test_zero_noise_gives_no_flips():
    c, _ = bell_experiment(BccSpec(18, (5, 11, 15, 17)), "shared", "Z")
    assert not sample_frames(c, NoiseModel(0.0), 1000, seed=1).any()


def test_noise_model_validation():
    with pytest.raises(ValueError):
        NoiseModel(-0.1)
    with pytest.raises(ValueError):
        NoiseModel(0.6, gate2=2.0)
    assert NoiseModel(0.01, init=0.5).probability("INIT+") == pytest.approx(0.005)


def _rate_check(text, noise, expected, shots=200_000):
    flips = sample_frames(parse_circuit(text), noise, shots, seed=7)[:, -1]
    sigma = np.sqrt(expected * (1 - expected) / shots)
    assert abs(flips.mean() - expected) < 3 * sigma


def test_single_qubit_gate_flip_rate():
    p = 0.3
    _rate_check("INIT0 0\nH 0\nMX 0\n", NoiseModel(p, init=0, measure=0), 2 * p / 3)


def test_two_qubit_gate_flip_rate():
    p = 0.3
    _rate_check("INIT0 0\nINIT0 1\nCNOT 0 1\nMZ 1\n", NoiseModel(p, init=0, measure=0), 8 * p / 15)


def test_init_and_measure_flip_rates():
    _rate_check("INIT+ 0\nMX 0\n", NoiseModel(0.2, measure=0), 0.2)
    _rate_check("INIT0 0\nMZ 0\n", NoiseModel(0.2, init=0), 0.2)
    # both faults cancel with probability p^2
    _rate_check("INIT0 0\nMZ 0\n", NoiseModel(0.2), 2 * 0.2 * 0.8)


def test_seed_reproducibility():
    c, _ = bell_experiment(BccSpec(10, (1, 9)), "none", "Z")
    noise = NoiseModel(0.05)
    a = sample_frames(c, noise, 3000, seed=11)
    b = sample_frames(c, noise, 3000, seed=11)
    d = sample_frames(c, noise, 3000, seed=12)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, d)


def test_chunks_cover_shots():
    c = prep_circuit(BccSpec(10, (3, 5, 7)))
    sizes = [b.shots for b in sample_chunks(c, NoiseModel(0.01), 1000, seed=3, chunk_shots=300)]
    assert sizes == [300, 300, 300, 100]
    with pytest.raises(ValueError):
        list(sample_chunks(c, NoiseModel(0.01), -1, seed=3))


def test_propagate_rejects_mismatched_faults():
    c = parse_circuit("INIT0 0\nINIT0 1\nCNOT 0 1\nMZ 1\n")
    with pytest.raises(ValueError):
        propagate_faults(c, [[Fault(2, "X")]])
    with pytest.raises(ValueError):
        propagate_faults(c, [[Fault(2, "M")]])


def test_cnot_propagation():
    c = parse_circuit("INIT0 0\nINIT+ 1\nCNOT 0 1\nMZ 0\nMX 1\n")
    flips = propagate_faults(c, [[Fault(0, "X")], [Fault(1, "Z")], [Fault(2, "ZI")]]).unpack_flips()
    assert flips.tolist() == [[True, False], [False, True], [False, False]]


@pytest.mark.parametrize(
    "spec, scheme, basis",
    [
        (BccSpec(10, (1, 9)), "none", "Z"),
        (BccSpec(10, (1, 9)), "none", "X"),
        (BccSpec(6, (1, 3)), "shared", "Z"),
        (BccSpec(6, (1, 3)), "per-block", "X"),
    ],
)
def test_single_faults_match_tableau(spec, scheme, basis):
    c, _ = bell_experiment(spec, scheme, basis)
    assert c.num_qubits <= 24
    faults = single_faults(c)
    expected = tableau_fault_flips(c, faults, pairs=False)
    got = propagate_faults(c, [[f] for f in faults]).unpack_flips()
    assert deterministic_parity_flips(c, got).shape[1] > 0
    assert np.array_equal(deterministic_parity_flips(c, got), deterministic_parity_flips(c, expected))


def test_left_kernel_oracle():
    rng = np.random.default_rng(5)
    for _ in range(20):
        m = rng.integers(0, 2, size=(7, 4))
        k = left_kernel(m)
        assert not ((k.astype(int) @ m) % 2).any()
        vectors = np.array([[(v >> i) & 1 for i in range(7)] for v in range(128)])
        assert 2 ** k.shape[0] == int((((vectors @ m) % 2) == 0).all(axis=1).sum())


def test_x_before_cz_hand_propagation():
    # X_0 through CZ(0,1) becomes X_0 Z_1: only the X readout of qubit 1 flips
    c = parse_circuit("INIT+ 0\nINIT+ 1\nCZ 0 1\nH 1\nMX 0\nMZ 1\n")
    flips = propagate_faults(c, [[Fault(0, "X")], [Fault(2, "XI")]]).unpack_flips()
    assert flips.tolist() == [[False, True], [False, False]]
