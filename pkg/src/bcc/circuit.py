"""Clifford circuit representation and the preparation / Bell-experiment generators.

Text format, one instruction per line::

    # qubits: 20
    INIT+ 0
    CZ 0 3
    H 1
    CNOT 0 10
    MZ 0

Blank lines and ``#`` comments are ignored except for the optional ``qubits``
header, which pins the register size.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Iterable, NamedTuple, Sequence

from .code import BccSpec, PreparedState, code_from_spec, is_automorphism, prepared_logical_state

__all__ = [
    "Instruction",
    "Circuit",
    "CircuitError",
    "Scheme",
    "ExperimentLayout",
    "prep_circuit",
    "prep_zero_plus_circuit",
    "zero_plus_relabeling",
    "bell_experiment",
    "parse_circuit",
]

GATES_1Q = ("H",)
GATES_2Q = ("CZ", "CNOT")
INITS = ("INIT+", "INIT0")
MEASUREMENTS = ("MZ", "MX")
OPCODES = INITS + GATES_1Q + GATES_2Q + MEASUREMENTS


class CircuitError(ValueError):
    pass


class Instruction(NamedTuple):
    op: str
    targets: tuple[int, ...]

    def __str__(self) -> str:
        return " ".join([self.op, *map(str, self.targets)])


@dataclass(frozen=True)
class Circuit:
    """Ordered Clifford instructions; measurement ``i`` writes classical slot ``i``."""

    num_qubits: int
    ops: tuple[Instruction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "ops", tuple(Instruction(op, tuple(t)) for op, t in self.ops))
        self.validate()

    @property
    def bit_slots(self) -> int:
        return sum(1 for ins in self.ops if ins.op in MEASUREMENTS)

    def validate(self) -> None:
        """Check arities, ranges and the init-before-use / nothing-after-measure ordering."""
        state = ["fresh"] * self.num_qubits
        for i, (op, targets) in enumerate(self.ops):
            if op not in OPCODES:
                raise CircuitError(f"op {i}: unknown instruction {op!r}")
            arity = 2 if op in GATES_2Q else 1
            if len(targets) != arity:
                raise CircuitError(f"op {i}: {op} takes {arity} target(s)")
            for q in targets:
                if not 0 <= q < self.num_qubits:
                    raise CircuitError(f"op {i}: qubit {q} out of range")
            if arity == 2 and targets[0] == targets[1]:
                raise CircuitError(f"op {i}: {op} on a single qubit")
            for q in targets:
                if op in INITS:
                    state[q] = "live"
                elif state[q] == "fresh":
                    raise CircuitError(f"op {i}: qubit {q} used before initialization")
                elif state[q] == "measured":
                    raise CircuitError(f"op {i}: qubit {q} used after measurement")
                elif op in MEASUREMENTS:
                    state[q] = "measured"

    def measurement_qubits(self) -> list[tuple[str, int]]:
        return [(ins.op, ins.targets[0]) for ins in self.ops if ins.op in MEASUREMENTS]

    def to_text(self) -> str:
        lines = [f"# qubits: {self.num_qubits}"]
        lines.extend(str(ins) for ins in self.ops)
        return "\n".join(lines) + "\n"

    def __str__(self) -> str:
        return self.to_text()

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for ins in self.ops:
            out[ins.op] = out.get(ins.op, 0) + 1
        return out

    def relabeled(self, perm: Sequence[int]) -> Circuit:
        """Move every action on qubit ``q`` to ``perm[q]``."""
        return Circuit(self.num_qubits, tuple(Instruction(op, tuple(perm[q] for q in t)) for op, t in self.ops))


def parse_circuit(text: str) -> Circuit:
    ops = []
    declared = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("qubits:"):
                declared = int(body.split(":", 1)[1])
            continue
        parts = line.split()
        op = parts[0].upper()
        if op not in OPCODES:
            raise CircuitError(f"line {lineno}: unknown instruction {parts[0]!r}")
        try:
            targets = tuple(int(p) for p in parts[1:])
        except ValueError as exc:
            raise CircuitError(f"line {lineno}: bad qubit index") from exc
        ops.append(Instruction(op, targets))
    used = max((q for _, t in ops for q in t), default=-1) + 1
    return Circuit(declared if declared is not None else used, tuple(ops))


class Scheme(str, enum.Enum):
    NONE = "none"
    PER_BLOCK = "per-block"
    SHARED = "shared"
    ENTANGLED = "entangled"


@dataclass(frozen=True)
class ExperimentLayout:
    """Where each part of a two-block experiment lives, in qubits and measurement slots."""

    n: int
    scheme: Scheme
    basis: str
    block1: tuple[int, ...]
    block2: tuple[int, ...]
    ancillas: tuple[int, ...]
    ancilla_of: dict[int, int] = field(default_factory=dict)
    ancilla_slots: tuple[int, ...] = ()
    block1_slots: tuple[int, ...] = ()
    block2_slots: tuple[int, ...] = ()
    step: int | None = None
    relabeling: tuple[int, ...] = ()


def _prep_ops(n: int, edges: Iterable[tuple[int, int]], h_qubits: Iterable[int], offset: int = 0):
    init = [Instruction("INIT+", (q + offset,)) for q in range(n)]
    cz = [Instruction("CZ", (a + offset, b + offset)) for a, b in edges]
    h = [Instruction("H", (q + offset,)) for q in h_qubits]
    return init, cz, h


def prep_circuit(spec: BccSpec) -> Circuit:
    """``|+>`` on every qubit, the CZ layer (offset-major order), then H on sublattice B."""
    init, cz, h = _prep_ops(spec.n, spec.edges(), spec.b_qubits)
    return Circuit(spec.n, tuple(init + cz + h))


def _affine_candidates(n: int) -> list[list[int]]:
    """Sublattice-preserving relabelings ``m -> c m + b`` (c a unit, b even), identity first."""
    out = []
    for c in range(1, n, 2):
        if gcd(c, n) != 1:
            continue
        for b in range(0, n, 2):
            out.append([(c * m + b) % n for m in range(n)])
    return out


@lru_cache(maxsize=None)
def zero_plus_relabeling(spec: BccSpec) -> tuple[int, ...]:
    """Relabeling that turns the H-on-A circuit into a ``|0+>`` preparation of the same code.

    Hadamarding sublattice A instead of B prepares the transversal-H image of
    ``|+0>``; a relabeling ``P`` with ``P(A) = A`` for which ``P`` followed by
    transversal H is a code automorphism brings that state back into the code as
    ``|0+>``. Candidates are scanned identity first and each is confirmed by
    noiseless simulation.

    Raises:
        CircuitError: if ``|S|`` is odd or no candidate verifies.
    """
    from .tableau import state_stabilized_by

    if prepared_logical_state(spec) is not PreparedState.PLUS_ZERO:
        raise CircuitError(f"|S|={len(spec.offsets)} is odd: the circuit prepares a Bell pair, not |+0>")
    code = code_from_spec(spec)
    (_, z1), (x2, _) = code.logicals
    checks = code.generators() + [z1, x2]
    for perm in _affine_candidates(spec.n):
        if not is_automorphism(code, perm, then_transversal_h=True):
            continue
        circ = _zero_plus_from(spec, perm)
        if state_stabilized_by(circ, checks):
            return tuple(perm)
    raise CircuitError(f"no relabeling prepares |0+> in the code of {spec}")


def _zero_plus_from(spec: BccSpec, perm: Sequence[int]) -> Circuit:
    edges = [(perm[a], perm[b]) for a, b in spec.edges()]
    h = sorted(perm[q] for q in spec.a_qubits)
    init, cz, hl = _prep_ops(spec.n, edges, h)
    return Circuit(spec.n, tuple(init + cz + hl))


def prep_zero_plus_circuit(spec: BccSpec) -> Circuit:
    """Same-shape circuit preparing logical ``|0+>`` in the code of ``spec``."""
    return _zero_plus_from(spec, zero_plus_relabeling(spec))


def bell_experiment(
    spec: BccSpec, scheme: Scheme | str = Scheme.NONE, final_basis: str = "Z", step: int = 3
) -> tuple[Circuit, ExperimentLayout]:
    """Two-block Bell-pair experiment with an optional bit-flip detection gadget.

    Block 1 is prepared in ``|+0>``, block 2 in ``|0+>``, a transversal CNOT joins
    them and every data qubit is read out in ``final_basis``. Detection gadgets
    bracket the CZ layers: ancilla couplings come right after initialization and
    right before the ancilla measurements.
    """
    scheme = Scheme(scheme)
    basis = final_basis.upper()
    if basis not in ("X", "Z"):
        raise ValueError("final_basis must be 'X' or 'Z'")
    n = spec.n
    perm = zero_plus_relabeling(spec)
    b1 = tuple(range(n))
    b2 = tuple(range(n, 2 * n))
    data = b1 + b2

    if scheme is Scheme.NONE:
        n_anc = 0
    elif scheme is Scheme.PER_BLOCK:
        n_anc = 2 * n
    elif scheme is Scheme.SHARED:
        n_anc = n
    else:
        if step % (n // 2) == 0:
            raise ValueError(f"ring step {step} is trivial modulo n/2={n // 2}")
        n_anc = n // 2
    anc = tuple(range(2 * n, 2 * n + n_anc))
    if scheme is Scheme.PER_BLOCK:
        ancilla_of = {q: 2 * n + q for q in data}
    elif scheme is Scheme.SHARED:
        ancilla_of = {q: 2 * n + (q % n) for q in data}
    elif scheme is Scheme.ENTANGLED:
        ancilla_of = {q: 2 * n + (q % n) % (n // 2) for q in data}
    else:
        ancilla_of = {}

    init1, cz1, h1 = _prep_ops(n, spec.edges(), spec.b_qubits, 0)
    edges2 = [(perm[a], perm[b]) for a, b in spec.edges()]
    init2, cz2, h2 = _prep_ops(n, edges2, sorted(perm[q] for q in spec.a_qubits), n)

    ops: list[Instruction] = init1 + init2
    ring: list[Instruction] = []
    if scheme is Scheme.ENTANGLED:
        ops += [Instruction("INIT+", (a,)) for a in anc]
        half = n // 2
        seen = set()
        for m in range(half):
            e = frozenset((m, (m + step) % half))
            if len(e) == 2 and e not in seen:
                seen.add(e)
                ring.append(Instruction("CZ", (2 * n + m, 2 * n + (m + step) % half)))
        ops += ring
    elif anc:
        ops += [Instruction("INIT0", (a,)) for a in anc]

    def couple() -> list[Instruction]:
        gate = "CZ" if scheme is Scheme.ENTANGLED else "CNOT"
        return [Instruction(gate, (q, ancilla_of[q])) for q in data]

    if anc:
        ops += couple()
    ops += cz1 + cz2
    if anc:
        ops += couple()
        ops += ring
    slot = 0
    anc_slots = []
    meas = "MX" if scheme is Scheme.ENTANGLED else "MZ"
    for a in anc:
        ops.append(Instruction(meas, (a,)))
        anc_slots.append(slot)
        slot += 1
    ops += h1 + h2
    ops += [Instruction("CNOT", (q, q + n)) for q in b1]
    mop = "MZ" if basis == "Z" else "MX"
    slots1, slots2 = [], []
    for q in data:
        ops.append(Instruction(mop, (q,)))
        (slots1 if q < n else slots2).append(slot)
        slot += 1
    circuit = Circuit(2 * n + n_anc, tuple(ops))
    layout = ExperimentLayout(
        n=n,
        scheme=scheme,
        basis=basis,
        block1=b1,
        block2=b2,
        ancillas=anc,
        ancilla_of=ancilla_of,
        ancilla_slots=tuple(anc_slots),
        block1_slots=tuple(slots1),
        block2_slots=tuple(slots2),
        step=step if scheme is Scheme.ENTANGLED else None,
        relabeling=tuple(perm),
    )
    return circuit, layout
