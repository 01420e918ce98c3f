"""Bit-packed Pauli-frame sampling under circuit-level noise.

Each shot carries an X and a Z error frame; 64 shots share one ``uint64`` word
per qubit. A measurement records the frame component that anticommutes with it,
which is the flip of that outcome relative to the noiseless reference run. Only
measurements and parities that are deterministic without noise carry meaning.

Noise is drawn sparsely: for every fault location the number of faulted shots is
binomial, those shots are picked without replacement, and each gets a uniformly
random nontrivial Pauli. Chunks of shots use independent Philox streams keyed by
``(seed, chunk index)``, so results do not depend on how chunks are scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .circuit import GATES_2Q, INITS, MEASUREMENTS, Circuit

__all__ = [
    "NoiseModel",
    "Fault",
    "CHUNK_SHOTS",
    "fault_locations",
    "single_faults",
    "FrameBatch",
    "propagate_faults",
    "sample_chunk",
    "sample_chunks",
    "sample_frames",
    "faults_as_mapping",
    "unpack_lanes",
]

CHUNK_SHOTS = 1 << 18
_WORD = 64
_PAULI_1Q = ("X", "Z", "Y")


@dataclass(frozen=True)
class NoiseModel:
    """Circuit-level depolarizing noise with per-location multipliers.

    Single-qubit gates get X/Y/Z with ``p/3`` each, two-qubit gates one of the 15
    nontrivial two-qubit Paulis with ``p/15`` each, preparations produce the
    orthogonal state with probability ``p`` and measurements flip with ``p``.
    """

    p: float
    gate1: float = 1.0
    gate2: float = 1.0
    init: float = 1.0
    measure: float = 1.0

    def __post_init__(self) -> None:
        for name in ("p", "gate1", "gate2", "init", "measure"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        for prob in (self.p * self.gate1, self.p * self.gate2, self.p * self.init, self.p * self.measure):
            if prob > 1:
                raise ValueError("fault probability exceeds 1")

    def probability(self, op: str) -> float:
        if op in INITS:
            return self.p * self.init
        if op in MEASUREMENTS:
            return self.p * self.measure
        if op in GATES_2Q:
            return self.p * self.gate2
        return self.p * self.gate1


@dataclass(frozen=True)
class Fault:
    """One fault after op ``op_index``: a Pauli word over its targets, or ``"M"`` for a readout flip."""

    op_index: int
    word: str


def _words_for(op: str) -> list[str]:
    if op == "INIT+":
        return ["Z"]
    if op == "INIT0":
        return ["X"]
    if op in MEASUREMENTS:
        return ["M"]
    if op in GATES_2Q:
        return [a + b for a in "IXYZ" for b in "IXYZ"][1:]
    return list(_PAULI_1Q)


def fault_locations(circuit: Circuit) -> list[int]:
    """Indices of ops that can fail (every op is a location; idling is noiseless)."""
    return list(range(len(circuit.ops)))


def single_faults(circuit: Circuit) -> list[Fault]:
    """Every fault the noise model can produce at a single location."""
    return [Fault(i, w) for i, (op, _) in enumerate(circuit.ops) for w in _words_for(op)]


def _lane_masks(lanes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return lanes >> 6, np.left_shift(np.uint64(1), (lanes & 63).astype(np.uint64))


class _FrameState:
    def __init__(self, num_qubits: int, num_meas: int, shots: int) -> None:
        self.words = (shots + _WORD - 1) // _WORD
        self.x = np.zeros((num_qubits, self.words), dtype=np.uint64)
        self.z = np.zeros((num_qubits, self.words), dtype=np.uint64)
        self.flips = np.zeros((num_meas, self.words), dtype=np.uint64)

    def apply(self, op: str, targets: tuple[int, ...], slot: int) -> int:
        x, z = self.x, self.z
        if op in INITS:
            q = targets[0]
            x[q] = 0
            z[q] = 0
        elif op == "H":
            q = targets[0]
            x[q], z[q] = z[q].copy(), x[q].copy()
        elif op == "CNOT":
            c, t = targets
            x[t] ^= x[c]
            z[c] ^= z[t]
        elif op == "CZ":
            a, b = targets
            z[a] ^= x[b]
            z[b] ^= x[a]
        elif op == "MZ":
            self.flips[slot] = x[targets[0]]
            return slot + 1
        elif op == "MX":
            self.flips[slot] = z[targets[0]]
            return slot + 1
        return slot

    def inject(self, op: str, targets: tuple[int, ...], slot: int, word: str, words: np.ndarray, masks: np.ndarray) -> None:
        """XOR a fault pattern into the given lanes (``slot`` is the op's own slot if a measurement)."""
        if word == "M":
            np.bitwise_xor.at(self.flips[slot - 1], words, masks)
            return
        for q, c in zip(targets, word):
            if c in "XY":
                np.bitwise_xor.at(self.x[q], words, masks)
            if c in "ZY":
                np.bitwise_xor.at(self.z[q], words, masks)


def _inject_random(state: _FrameState, op: str, targets, slot: int, lanes: np.ndarray, rng: np.random.Generator) -> None:
    if op in INITS or op in MEASUREMENTS:
        state.inject(op, targets, slot, _words_for(op)[0], *_lane_masks(lanes))
        return
    words, masks = _lane_masks(lanes)
    if op in GATES_2Q:
        kinds = rng.integers(1, 16, size=lanes.size)
        bits = [(kinds >> 3) & 1, (kinds >> 2) & 1, (kinds >> 1) & 1, kinds & 1]
        planes = [(state.x, targets[0]), (state.z, targets[0]), (state.x, targets[1]), (state.z, targets[1])]
    else:
        kinds = rng.integers(1, 4, size=lanes.size)
        bits = [kinds & 1, kinds >> 1]
        planes = [(state.x, targets[0]), (state.z, targets[0])]
    for b, (plane, q) in zip(bits, planes):
        sel = b.astype(bool)
        if sel.any():
            np.bitwise_xor.at(plane[q], words[sel], masks[sel])


@dataclass
class FrameBatch:
    """Packed measurement flips ``(measurements, words)`` plus final frames for ``shots`` lanes."""

    shots: int
    flips: np.ndarray
    x: np.ndarray
    z: np.ndarray

    def unpack_flips(self) -> np.ndarray:
        """Boolean ``(shots, measurements)`` flip table."""
        return unpack_lanes(self.flips, self.shots)

    def unpack_frames(self) -> tuple[np.ndarray, np.ndarray]:
        return unpack_lanes(self.x, self.shots), unpack_lanes(self.z, self.shots)


def unpack_lanes(packed: np.ndarray, shots: int) -> np.ndarray:
    if packed.shape[0] == 0:
        return np.zeros((shots, 0), dtype=bool)
    as_bytes = packed.astype("<u8").view(np.uint8).reshape(packed.shape[0], -1)
    bits = np.unpackbits(as_bytes, axis=1, bitorder="little")[:, :shots]
    return bits.T.astype(bool)


def sample_chunk(circuit: Circuit, noise: NoiseModel, shots: int, seed: int, chunk_index: int) -> FrameBatch:
    """One chunk of noisy shots with the stream keyed by ``(seed, chunk_index)``."""
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, chunk_index])))
    state = _FrameState(circuit.num_qubits, circuit.bit_slots, shots)
    slot = 0
    for op, targets in circuit.ops:
        slot = state.apply(op, targets, slot)
        prob = noise.probability(op)
        if prob <= 0:
            continue
        hits = rng.binomial(shots, prob)
        if hits == 0:
            continue
        lanes = rng.choice(shots, size=hits, replace=False) if hits < shots else np.arange(shots)
        _inject_random(state, op, targets, slot, lanes.astype(np.int64), rng)
    return FrameBatch(shots, state.flips, state.x, state.z)


def sample_chunks(
    circuit: Circuit, noise: NoiseModel, shots: int, seed: int, chunk_shots: int = CHUNK_SHOTS
) -> Iterator[FrameBatch]:
    """Yield consecutive chunks covering ``shots`` lanes in total."""
    if shots < 0:
        raise ValueError("shots must be non-negative")
    done = 0
    index = 0
    while done < shots:
        size = min(chunk_shots, shots - done)
        yield sample_chunk(circuit, noise, size, seed, index)
        done += size
        index += 1


def sample_frames(circuit: Circuit, noise: NoiseModel, shots: int, seed: int) -> np.ndarray:
    """Boolean ``(shots, measurements)`` table of outcome flips."""
    parts = [b.unpack_flips() for b in sample_chunks(circuit, noise, shots, seed)]
    if not parts:
        return np.zeros((0, circuit.bit_slots), dtype=bool)
    return np.vstack(parts)


def propagate_faults(circuit: Circuit, fault_sets: Sequence[Iterable[Fault]]) -> FrameBatch:
    """Propagate a fixed fault set per lane; lane ``i`` carries ``fault_sets[i]``."""
    shots = len(fault_sets)
    by_op: dict[int, dict[str, list[int]]] = {}
    for lane, faults in enumerate(fault_sets):
        for f in faults:
            by_op.setdefault(f.op_index, {}).setdefault(f.word, []).append(lane)
    state = _FrameState(circuit.num_qubits, circuit.bit_slots, max(shots, 1))
    slot = 0
    for idx, (op, targets) in enumerate(circuit.ops):
        slot = state.apply(op, targets, slot)
        for word, lanes in by_op.get(idx, {}).items():
            if word == "M" and op not in MEASUREMENTS:
                raise ValueError(f"op {idx}: readout flip on non-measurement {op}")
            if word != "M" and len(word) != len(targets):
                raise ValueError(f"op {idx}: fault {word!r} does not match {op}")
            state.inject(op, targets, slot, word, *_lane_masks(np.asarray(lanes, dtype=np.int64)))
    return FrameBatch(shots, state.flips, state.x, state.z)


def faults_as_mapping(faults: Iterable[Fault]) -> Mapping[int, list[str]]:
    """Group faults by op index, in the form the tableau simulator accepts."""
    out: dict[int, list[str]] = {}
    for f in faults:
        out.setdefault(f.op_index, []).append(f.word)
    return out
