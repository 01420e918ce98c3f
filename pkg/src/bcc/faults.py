"""Exhaustive fault analysis of the two-block preparation.

Each block is examined at the point where preparation ends, right before the
transversal CNOT. Block 1 then holds ``|+0>`` and block 2 ``|0+>``, so besides
the code stabilizers each block's state is also fixed by one X-type and one
Z-type logical (``X_1, Z_2`` and ``Z_1, X_2`` respectively). The residual of a
fault is its frame on a block reduced modulo that full state stabilizer.

Two weights are reported. The *type weight* is the larger of the minimum X-part
and minimum Z-part weights; it is what the per-basis decoders see, since a Z
readout only feels the X part and vice versa. The *union weight* counts every
qubit with a non-identity Pauli after a joint reduction, so a correlated
``X_a Z_b`` from one two-qubit gate has union weight 2 but type weight 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .circuit import Circuit, ExperimentLayout, Scheme, bell_experiment
from .code import BccSpec, CssCode, code_from_spec
from .frames import Fault, propagate_faults, single_faults
from .gf2 import BitMatrix

__all__ = [
    "FaultOutcome",
    "preparation_boundary",
    "residual_weight",
    "state_groups",
    "single_fault_exhaustion",
    "failing_fault_pairs",
]


@dataclass(frozen=True)
class FaultOutcome:
    fault: Fault
    detected: bool
    residual1: int
    residual2: int
    union1: int
    union2: int

    @property
    def worst(self) -> int:
        """Largest type weight over the two blocks."""
        return max(self.residual1, self.residual2)

    @property
    def worst_union(self) -> int:
        return max(self.union1, self.union2)


def preparation_boundary(circuit: Circuit, layout: ExperimentLayout) -> int:
    """Index of the first transversal CNOT between the two blocks."""
    n = layout.n
    for i, (op, t) in enumerate(circuit.ops):
        if op == "CNOT" and t[0] < n and t[1] == t[0] + n:
            return i
    raise ValueError("circuit has no transversal CNOT")


def _span_ints(rows: np.ndarray) -> np.ndarray:
    """Every GF(2) combination of ``rows``, each packed into one ``uint64``."""
    n = rows.shape[1]
    if n > 64:
        raise ValueError("residual analysis packs a block into one 64-bit word")
    packed = [int(sum(int(b) << q for q, b in enumerate(r))) for r in rows]
    out = np.zeros(1 << len(packed), dtype=np.uint64)
    for i, v in enumerate(packed):
        half = 1 << i
        out[half : 2 * half] = out[:half] ^ np.uint64(v)
    return out


def _independent(m: BitMatrix, extra: np.ndarray) -> np.ndarray:
    dense = m.to_dense()
    stacked = BitMatrix.from_dense(np.vstack([dense, extra[None, :]]))
    reduced, pivots = stacked.rref()
    return reduced.to_dense()[: len(pivots)]


@lru_cache(maxsize=16)
def state_groups(code: CssCode) -> tuple[tuple[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]]:
    """Packed X- and Z-type stabilizer groups of ``|+0>`` (block 1) and ``|0+>`` (block 2)."""
    (x1, z1), (x2, z2) = code.logicals
    g1 = (_span_ints(_independent(code.hx, x1.x.to_bits())), _span_ints(_independent(code.hz, z2.z.to_bits())))
    g2 = (_span_ints(_independent(code.hx, x2.x.to_bits())), _span_ints(_independent(code.hz, z1.z.to_bits())))
    return g1, g2


def _pack_row(bits: np.ndarray) -> np.uint64:
    return np.uint64(int(sum(int(b) << q for q, b in enumerate(bits))))


def residual_weight(
    x_bits: np.ndarray, z_bits: np.ndarray, groups: tuple[np.ndarray, np.ndarray]
) -> tuple[int, int, int]:
    """``(x weight, z weight, union weight)`` of ``X^x Z^z`` minimized over the given X and Z groups."""
    xs = groups[0] ^ _pack_row(x_bits)
    zs = groups[1] ^ _pack_row(z_bits)
    wx = int(np.bitwise_count(xs).min())
    wz = int(np.bitwise_count(zs).min())
    return wx, wz, int(np.bitwise_count(xs[:, None] | zs[None, :]).min())


@lru_cache(maxsize=16)
def _experiment(spec: BccSpec, scheme: str, step: int):
    circuit, layout = bell_experiment(spec, scheme, "Z", step)
    boundary = preparation_boundary(circuit, layout)
    prep = Circuit(circuit.num_qubits, circuit.ops[:boundary])
    return circuit, layout, prep


def _outcomes(spec: BccSpec, prep: Circuit, layout: ExperimentLayout, fault_sets) -> list[tuple[bool, tuple, tuple]]:
    code = code_from_spec(spec)
    g1, g2 = state_groups(code)
    batch = propagate_faults(prep, fault_sets)
    flips = batch.unpack_flips()
    fx, fz = batch.unpack_frames()
    anc = list(range(len(layout.ancilla_slots)))
    n = layout.n
    cache: dict[bytes, tuple[int, int, int]] = {}
    out = []
    for lane in range(len(fault_sets)):
        detected = bool(flips[lane, anc].any()) if anc else False
        res = []
        for block, groups in ((layout.block1, g1), (layout.block2, g2)):
            x = fx[lane, list(block)]
            z = fz[lane, list(block)]
            key = bytes(np.packbits(np.concatenate([x, z]))) + bytes([block[0] // n])
            if key not in cache:
                cache[key] = residual_weight(x, z, groups)
            res.append(cache[key])
        out.append((detected, res[0], res[1]))
    return out


def single_fault_exhaustion(spec: BccSpec, scheme: Scheme | str, step: int = 3) -> list[FaultOutcome]:
    """Every single fault up to the end of preparation, with detection flag and per-block residuals.

    Faults on the transversal CNOT and the final readout touch at most one qubit
    per block and are not listed.
    """
    scheme = Scheme(scheme)
    _, layout, prep = _experiment(spec, scheme.value, step)
    faults = single_faults(prep)
    results = _outcomes(spec, prep, layout, [[f] for f in faults])
    return [
        FaultOutcome(f, d, max(r1[:2]), max(r2[:2]), r1[2], r2[2]) for f, (d, r1, r2) in zip(faults, results)
    ]


def failing_fault_pairs(
    spec: BccSpec, scheme: Scheme | str, basis: str, step: int = 3, batch: int = 1 << 14
) -> list[tuple[Fault, Fault]]:
    """Every unordered pair of single faults in the full experiment that is accepted and fails.

    Nonempty output means the postselected failure rate has a ``p^2`` term.
    """
    from .experiment import evaluate_faults

    circuit, _ = bell_experiment(spec, Scheme(scheme), basis, step)
    faults = single_faults(circuit)
    pairs = list(combinations(range(len(faults)), 2))
    out = []
    for start in range(0, len(pairs), batch):
        part = pairs[start : start + batch]
        _, failed = evaluate_faults(spec, scheme, basis, [[faults[i], faults[j]] for i, j in part], step=step)
        out.extend((faults[part[k][0]], faults[part[k][1]]) for k in np.flatnonzero(failed))
    return out
