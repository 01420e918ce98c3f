"""Aaronson-Gottesman stabilizer tableau with symbolic measurement outcomes.

Row signs are affine forms over GF(2): column 0 is a constant bit and column
``j >= 1`` is the coefficient of the ``j``-th random measurement outcome. A
random measurement introduces a fresh variable instead of sampling, so every
later outcome is known exactly as a function of earlier coin flips, and a
parity of outcomes is deterministic iff its variable part vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .circuit import Circuit
from .pauli import PauliOperator

__all__ = [
    "TableauRun",
    "Tableau",
    "SimulationResult",
    "simulate",
    "simulate_lanes",
    "simulate_noiseless",
    "state_stabilized_by",
    "stabilizer_sign",
]


def _g_sum(x1: np.ndarray, z1: np.ndarray, x2: np.ndarray, z2: np.ndarray) -> np.ndarray:
    """Sum over qubits of the phase exponent of ``P1 * P2`` (rows along axis 0)."""
    x1 = x1.astype(np.int8)
    z1 = z1.astype(np.int8)
    x2 = x2.astype(np.int8)
    z2 = z2.astype(np.int8)
    g = np.where(
        (x1 == 1) & (z1 == 1),
        z2 - x2,
        np.where(x1 == 1, z2 * (2 * x2 - 1), np.where(z1 == 1, x2 * (1 - 2 * z2), 0)),
    )
    return g.sum(axis=-1, dtype=np.int64)


class Tableau:
    """Stabilizer state on ``n`` qubits, starting in ``|0...0>``.

    Rows ``0..n-1`` are destabilizers, rows ``n..2n-1`` stabilizers. With
    ``lanes`` set, the tableau carries that many independent sign columns that
    share one X/Z part: Pauli faults only ever change signs, so each lane is the
    full simulation of its own faulty copy of the circuit. Sign forms then come
    back with a trailing lane axis.
    """

    def __init__(self, n: int, capacity: int = 8, lanes: int | None = None) -> None:
        self.n = n
        self.lanes = lanes
        self.x = np.zeros((2 * n, n), dtype=np.uint8)
        self.z = np.zeros((2 * n, n), dtype=np.uint8)
        idx = np.arange(n)
        self.x[idx, idx] = 1
        self.z[n + idx, idx] = 1
        self.r = np.zeros((2 * n, 1 + capacity, lanes or 1), dtype=np.uint8)
        self.num_vars = 0

    def copy(self) -> Tableau:
        t = Tableau.__new__(Tableau)
        t.n = self.n
        t.lanes = self.lanes
        t.x, t.z, t.r = self.x.copy(), self.z.copy(), self.r.copy()
        t.num_vars = self.num_vars
        return t

    def _out(self, form: np.ndarray) -> np.ndarray:
        return form if self.lanes is not None else form[:, 0]

    def _new_var(self) -> np.ndarray:
        self.num_vars += 1
        if self.num_vars >= self.r.shape[1]:
            self.r = np.concatenate([self.r, np.zeros_like(self.r)], axis=1)
        form = np.zeros(self.r.shape[1], dtype=np.uint8)
        form[self.num_vars] = 1
        return form

    def form(self, vec: np.ndarray) -> np.ndarray:
        """Pad an affine form (optionally with a lane axis) to the current width."""
        vec = np.asarray(vec, dtype=np.uint8)
        out = np.zeros((self.r.shape[1],) + vec.shape[1:], dtype=np.uint8)
        out[: len(vec)] = vec[: self.r.shape[1]]
        return out

    # Clifford gates
    def h(self, q: int) -> None:
        self.r[:, 0] ^= (self.x[:, q] & self.z[:, q])[:, None]
        self.x[:, q], self.z[:, q] = self.z[:, q].copy(), self.x[:, q].copy()

    def s(self, q: int) -> None:
        self.r[:, 0] ^= (self.x[:, q] & self.z[:, q])[:, None]
        self.z[:, q] ^= self.x[:, q]

    def cnot(self, c: int, t: int) -> None:
        x, z = self.x, self.z
        self.r[:, 0] ^= (x[:, c] & z[:, t] & (x[:, t] ^ z[:, c] ^ 1))[:, None]
        x[:, t] ^= x[:, c]
        z[:, c] ^= z[:, t]

    def cz(self, a: int, b: int) -> None:
        self.h(b)
        self.cnot(a, b)
        self.h(b)

    def pauli(
        self, q: int, kind: str, condition: np.ndarray | None = None, lanes: np.ndarray | None = None
    ) -> None:
        """Apply X, Y or Z on ``q``.

        With ``condition`` (an affine form) the Pauli is applied conditionally;
        with ``lanes`` (distinct lane indices) only in those lanes.
        """
        flip = np.zeros(2 * self.n, dtype=np.uint8)
        if kind in "XY":
            flip ^= self.z[:, q]
        if kind in "ZY":
            flip ^= self.x[:, q]
        if condition is not None:
            if lanes is not None:
                raise ValueError("condition and lanes cannot be combined")
            cond = self.form(condition)
            if cond.ndim == 1:
                cond = cond[:, None]
            self.r ^= flip[:, None, None] & cond[None, :, :]
        elif lanes is None:
            self.r[:, 0] ^= flip[:, None]
        else:
            self.r[:, 0, lanes] ^= flip[:, None]

    def _rowsum_into(self, rows: np.ndarray, src: int) -> None:
        """Left-multiply each row in ``rows`` by row ``src``."""
        if rows.size == 0:
            return
        g = _g_sum(self.x[src][None, :], self.z[src][None, :], self.x[rows], self.z[rows])
        total = (2 * self.r[rows, 0].astype(np.int64) + 2 * self.r[src, 0].astype(np.int64)[None, :] + g[:, None]) % 4
        self.r[rows] ^= self.r[src][None]
        self.r[rows, 0] = (total == 2).astype(np.uint8)
        self.x[rows] ^= self.x[src][None, :]
        self.z[rows] ^= self.z[src][None, :]

    def _accumulate(self, sources: Iterable[int]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Product of the given stabilizer rows as ``(x, z, sign form)``."""
        n = self.n
        sx = np.zeros(n, dtype=np.uint8)
        sz = np.zeros(n, dtype=np.uint8)
        sr = np.zeros(self.r.shape[1:], dtype=np.uint8)
        for src in sources:
            g = int(_g_sum(self.x[src], self.z[src], sx, sz))
            total = (2 * sr[0].astype(np.int64) + 2 * self.r[src, 0].astype(np.int64) + g) % 4
            sr ^= self.r[src]
            sr[0] = (total == 2).astype(np.uint8)
            sx ^= self.x[src]
            sz ^= self.z[src]
        return sx, sz, sr

    def _measure_z(self, q: int) -> np.ndarray:
        n = self.n
        hits = np.flatnonzero(self.x[n:, q])
        if hits.size:
            p = n + int(hits[0])
            others = np.flatnonzero(self.x[:, q])
            others = others[others != p]
            self._rowsum_into(others, p)
            d = p - n
            self.x[d], self.z[d], self.r[d] = self.x[p], self.z[p], self.r[p]
            self.x[p] = 0
            self.z[p] = 0
            self.z[p, q] = 1
            var = self._new_var()
            self.r[p] = var[:, None]
            return self.r[p].copy()
        # Deterministic: accumulate the stabilizers flagged by the destabilizers.
        return self._accumulate(n + int(i) for i in np.flatnonzero(self.x[:n, q]))[2]

    def measure_z(self, q: int) -> np.ndarray:
        """Measure Z on ``q``; returns the outcome as an affine form."""
        return self._out(self._measure_z(q))

    def measure_x(self, q: int) -> np.ndarray:
        self.h(q)
        out = self.measure_z(q)
        self.h(q)
        return out

    def reset_z(self, q: int) -> None:
        outcome = self._measure_z(q)
        if outcome.any():
            self.pauli(q, "X", condition=outcome)

    def reset_x(self, q: int) -> None:
        self.reset_z(q)
        self.h(q)

    def is_valid(self) -> bool:
        """Destabilizer/stabilizer rows satisfy the canonical commutation pattern."""
        x = self.x.astype(np.int64)
        z = self.z.astype(np.int64)
        form = (x @ z.T + z @ x.T) % 2
        n = self.n
        expected = np.zeros((2 * n, 2 * n), dtype=np.int64)
        expected[np.arange(n), n + np.arange(n)] = 1
        expected[n + np.arange(n), np.arange(n)] = 1
        return bool(np.array_equal(form, expected))

    def stabilizer_sign(self, op: PauliOperator) -> np.ndarray | None:
        """Affine sign form ``f`` with ``(-1)^f op`` in the group (up to the op's own sign), else ``None``."""
        n = self.n
        px = op.x.to_bits()
        pz = op.z.to_bits()
        stab_x, stab_z = self.x[n:], self.z[n:]
        if ((stab_x @ pz + stab_z @ px) % 2).any():
            return None
        coeffs = (self.x[:n] @ pz + self.z[:n] @ px) % 2
        sx, sz, sr = self._accumulate(n + int(i) for i in np.flatnonzero(coeffs))
        if not (np.array_equal(sx, px) and np.array_equal(sz, pz)):
            return None
        if op.sign < 0:
            sr[0] ^= 1
        return self._out(sr)

    def stabilizes(self, op: PauliOperator) -> bool:
        """True iff ``op`` (with its sign) stabilizes the state for every outcome history and lane."""
        sign = self.stabilizer_sign(op)
        return sign is not None and not sign.any()


@dataclass
class SimulationResult:
    tableau: Tableau
    outcomes: np.ndarray  # (measurements, 1 + vars) affine forms
    valid_throughout: bool = True

    @property
    def deterministic(self) -> bool:
        return not self.outcomes[:, 1:].any()

    def measurement_deterministic(self, slot: int) -> bool:
        return not self.outcomes[slot, 1:].any()

    def parity_form(self, slots: Iterable[int]) -> np.ndarray:
        acc = np.zeros(self.outcomes.shape[1], dtype=np.uint8)
        for s in slots:
            acc ^= self.outcomes[s]
        return acc

    def parity_deterministic(self, slots: Iterable[int]) -> bool:
        return not self.parity_form(slots)[1:].any()

    def parity_value(self, slots: Iterable[int]) -> int:
        form = self.parity_form(slots)
        if form[1:].any():
            raise ValueError("parity is not deterministic")
        return int(form[0])

    def constant_bits(self) -> np.ndarray:
        return self.outcomes[:, 0].copy()


class TableauRun:
    """Op-by-op symbolic execution of a circuit that can be copied mid-way.

    A fault is a Pauli word over the op's targets (e.g. ``"XZ"`` for a two-qubit
    gate) applied right after the op, or ``"M"`` to flip a measurement's
    recorded outcome. With ``lanes`` set, faults may be restricted to lanes.
    """

    def __init__(self, circuit: Circuit, check_validity: bool = False, lanes: int | None = None) -> None:
        self.circuit = circuit
        self.tableau = Tableau(circuit.num_qubits, capacity=max(1, circuit.bit_slots), lanes=lanes)
        self.fresh = [True] * circuit.num_qubits
        self.outcomes: list[np.ndarray] = []
        self.position = 0
        self.check_validity = check_validity
        self.valid = True

    def copy(self) -> TableauRun:
        other = TableauRun.__new__(TableauRun)
        other.circuit = self.circuit
        other.tableau = self.tableau.copy()
        other.fresh = list(self.fresh)
        other.outcomes = list(self.outcomes)
        other.position = self.position
        other.check_validity = self.check_validity
        other.valid = self.valid
        return other

    def step(self, words: Sequence[str | tuple[str, np.ndarray]] = ()) -> None:
        """Execute the next op, then apply its faults (``word`` or ``(word, lanes)``)."""
        t = self.tableau
        op, targets = self.circuit.ops[self.position]
        if op == "INIT0" or op == "INIT+":
            q = targets[0]
            if not self.fresh[q]:
                t.reset_z(q)
            self.fresh[q] = False
            if op == "INIT+":
                t.h(q)
        elif op == "H":
            t.h(targets[0])
        elif op == "CZ":
            t.cz(*targets)
        elif op == "CNOT":
            t.cnot(*targets)
        elif op == "MZ" or op == "MX":
            if op == "MX":
                t.h(targets[0])
            self.outcomes.append(t._measure_z(targets[0]))
            if op == "MX":
                t.h(targets[0])
        for item in words:
            word, lanes = (item, None) if isinstance(item, str) else item
            if word == "M":
                flipped = self.outcomes[-1].copy()
                if lanes is None:
                    flipped[0] ^= 1
                else:
                    flipped[0, lanes] ^= 1
                self.outcomes[-1] = flipped
                continue
            for q, c in zip(targets, word):
                if c != "I":
                    t.pauli(q, c, lanes=lanes)
        if self.check_validity:
            self.valid = self.valid and t.is_valid()
        self.position += 1

    def run_to(self, stop: int, faults: Mapping[int, Sequence] | None = None) -> TableauRun:
        faults = faults or {}
        while self.position < stop:
            self.step(faults.get(self.position, ()))
        return self

    def lane_outcomes(self) -> np.ndarray:
        """All outcome forms as ``(lanes, measurements, 1 + vars)``, running to the end first."""
        self.run_to(len(self.circuit.ops))
        width = self.tableau.r.shape[1]
        lanes = self.tableau.r.shape[2]
        out = np.zeros((lanes, len(self.outcomes), width), dtype=np.uint8)
        for i, o in enumerate(self.outcomes):
            out[:, i, : o.shape[0]] = o[:width].T
        return out

    def result(self) -> SimulationResult:
        """Single-lane result; see ``lane_outcomes`` for batched runs."""
        if self.tableau.lanes is not None:
            raise ValueError("batched run: use lane_outcomes()")
        return SimulationResult(self.tableau, self.lane_outcomes()[0], self.valid)


def simulate(
    circuit: Circuit,
    faults: Mapping[int, Sequence[str]] | None = None,
    check_validity: bool = False,
) -> SimulationResult:
    """Run ``circuit`` symbolically, with optional Pauli faults after given ops.

    ``faults[op_index]`` is a list of strings: a Pauli word over the op's targets
    (e.g. ``"XZ"`` for a two-qubit gate) applied right after the op, or ``"M"``
    to flip a measurement's recorded outcome.
    """
    run = TableauRun(circuit, check_validity)
    run.run_to(len(circuit.ops), faults)
    return run.result()


def simulate_lanes(circuit: Circuit, fault_sets: Sequence[Iterable[tuple[int, str]]]) -> np.ndarray:
    """Simulate one faulty copy of ``circuit`` per lane; lane ``i`` carries ``fault_sets[i]``.

    Each fault is ``(op_index, word)``. Returns outcome forms shaped
    ``(lanes, measurements, 1 + vars)``.
    """
    groups: dict[int, dict[str, list[int]]] = {}
    for lane, faults in enumerate(fault_sets):
        for idx, word in faults:
            groups.setdefault(idx, {}).setdefault(word, []).append(lane)
    plan: dict[int, list] = {}
    for idx, by_word in groups.items():
        items = []
        for word, lanes in by_word.items():
            arr = np.asarray(lanes, dtype=np.int64)
            # a lane holding the same fault twice gets it twice
            while arr.size:
                uniq, first = np.unique(arr, return_index=True)
                items.append((word, uniq))
                arr = np.delete(arr, first)
        plan[idx] = items
    run = TableauRun(circuit, lanes=max(1, len(fault_sets)))
    run.run_to(len(circuit.ops), plan)
    return run.lane_outcomes()[: len(fault_sets)]


def simulate_noiseless(circuit: Circuit, check_validity: bool = False) -> SimulationResult:
    """Noiseless symbolic run; ``result.deterministic`` is True iff no measurement was random."""
    return simulate(circuit, None, check_validity)


def stabilizer_sign(circuit: Circuit, op: PauliOperator) -> int | None:
    """+1/-1 if the final state is a deterministic eigenstate of ``op``, else ``None``."""
    res = simulate_noiseless(circuit)
    sign = res.tableau.stabilizer_sign(op)
    if sign is None or sign[1:].any():
        return None
    return -1 if sign[0] else 1


def state_stabilized_by(circuit: Circuit, ops: Iterable[PauliOperator]) -> bool:
    res = simulate_noiseless(circuit)
    return all(res.tableau.stabilizes(op) for op in ops)
