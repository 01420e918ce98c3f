"""Bipartite cyclic cluster (BCC) codes.

A BCC code on ``n`` qubits is fixed by a set ``S`` of odd residues mod ``n``.
Even qubits form sublattice A, odd qubits sublattice B, and a CZ acts between
even ``m`` and odd ``m'`` whenever ``m' - m`` is in ``S``. Preparing every qubit
in ``|+>``, applying the CZ layer and a Hadamard on B yields a state of the CSS
code built here.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence, Union

import numpy as np

from . import _kernels
from .gf2 import (
    BitMatrix,
    BitVector,
    complement_basis,
    in_rowspace,
    kernel_basis,
    rowspace_equal,
)
from .pauli import PauliOperator

__all__ = [
    "InvalidSpecError",
    "BccSpec",
    "GeneralBccSpec",
    "CssCode",
    "PreparedState",
    "from_offsets",
    "from_general_spec",
    "logical_count",
    "product_logicals",
    "pushed_single_logical",
    "is_automorphism",
    "hadamard_swap_permutation",
    "shift_permutation",
    "multiplier_permutation",
    "self_orthogonal",
    "low_weight_stabilizers",
    "prepared_logical_state",
    "css_logicals",
]

# Full group enumeration of a stabilizer type is used up to this many generators.
FULL_SPAN_GENERATORS = 30


class InvalidSpecError(ValueError):
    """Raised for offset data that does not define a BCC code."""


class PreparedState(str, enum.Enum):
    PLUS_ZERO = "PlusZero"
    BELL_PAIR = "BellPair"


@dataclass(frozen=True)
class BccSpec:
    """Single-index k=2 description: ``n`` qubits and odd offsets ``S`` (mod n)."""

    n: int
    offsets: tuple[int, ...]

    def __post_init__(self) -> None:
        n = int(self.n)
        if n < 4 or n % 2:
            raise InvalidSpecError(f"n must be even and >= 4, got {self.n}")
        raw = list(self.offsets)
        if not raw:
            raise InvalidSpecError("offset set S must be nonempty")
        norm = [int(s) % n for s in raw]
        even = [s for s, t in zip(raw, norm) if t % 2 == 0]
        if even:
            raise InvalidSpecError(f"offsets must be odd, got {even}")
        if len(set(norm)) != len(norm):
            raise InvalidSpecError(f"offsets must be distinct mod {n}, got {raw}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "offsets", tuple(sorted(norm)))

    @property
    def n0(self) -> int:
        return self.n // 2

    @property
    def a_qubits(self) -> list[int]:
        return list(range(0, self.n, 2))

    @property
    def b_qubits(self) -> list[int]:
        return list(range(1, self.n, 2))

    def edges(self) -> list[tuple[int, int]]:
        """CZ edges ``(even, odd)``, ordered by ascending offset then position."""
        return [(m, (m + s) % self.n) for s in self.offsets for m in range(0, self.n, 2)]

    def adjacency(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for a, b in self.edges():
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def to_general(self) -> GeneralBccSpec:
        """The equivalent two-column description, with ``(m, 1) -> 2m`` and ``(m, 2) -> 2m + 1``."""
        return GeneralBccSpec(
            n0=self.n0,
            k=2,
            a_set=frozenset({1}),
            edge_offsets=frozenset((1, 2, (s - 1) // 2) for s in self.offsets),
        )


@dataclass(frozen=True)
class GeneralBccSpec:
    """Two-index description with ``k`` columns of length ``n0``.

    Qubit ``(m, j)`` has flat index ``m * k + (j - 1)``. Each triple
    ``(j, j2, l)`` puts a CZ between ``(m, j)`` and ``(m + l, j2)`` for every ``m``.
    """

    n0: int
    k: int
    a_set: frozenset[int]
    edge_offsets: frozenset[tuple[int, int, int]]

    def __post_init__(self) -> None:
        if self.n0 < 1 or self.k < 2:
            raise InvalidSpecError("need n0 >= 1 and k >= 2")
        cols = set(range(1, self.k + 1))
        a_set = frozenset(self.a_set)
        if not a_set or not a_set <= cols:
            raise InvalidSpecError("A_set must be a nonempty subset of {1..k}")
        if not cols - a_set:
            raise InvalidSpecError("complement of A_set must be nonempty")
        if not self.edge_offsets:
            raise InvalidSpecError("spec has no edges")
        norm = set()
        for j, j2, l in self.edge_offsets:
            if j not in a_set or j2 in a_set or j2 not in cols:
                raise InvalidSpecError(f"edge offset {(j, j2, l)} is not A-to-B")
            norm.add((j, j2, l % self.n0))
        if len(norm) != len(self.edge_offsets):
            raise InvalidSpecError("edge offsets repeat modulo n0")
        object.__setattr__(self, "a_set", a_set)
        object.__setattr__(self, "edge_offsets", frozenset(norm))

    @property
    def n(self) -> int:
        return self.n0 * self.k

    @property
    def b_set(self) -> frozenset[int]:
        return frozenset(range(1, self.k + 1)) - self.a_set

    def index(self, m: int, j: int) -> int:
        return (m % self.n0) * self.k + (j - 1)

    def column(self, j: int) -> list[int]:
        return [self.index(m, j) for m in range(self.n0)]

    @property
    def a_qubits(self) -> list[int]:
        return sorted(q for j in self.a_set for q in self.column(j))

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for j, j2, l in sorted(self.edge_offsets):
            for m in range(self.n0):
                out.append((self.index(m, j), self.index(m + l, j2)))
        return out

    def adjacency(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for a, b in self.edges():
            adj[a].add(b)
            adj[b].add(a)
        return adj


Spec = Union[BccSpec, GeneralBccSpec]


@dataclass(frozen=True, eq=False)
class CssCode:
    """CSS code with X-check rows ``hx``, Z-check rows ``hz`` and paired logicals."""

    spec: Spec | None
    hx: BitMatrix
    hz: BitMatrix
    logicals: tuple[tuple[PauliOperator, PauliOperator], ...]
    columns: tuple[tuple[int, ...], ...] = ()
    a_qubits: tuple[int, ...] = ()
    shift: int = 1
    adjacency: tuple[frozenset[int], ...] = field(default=(), repr=False)

    @property
    def n(self) -> int:
        return self.hx.cols

    @property
    def k(self) -> int:
        return len(self.logicals)

    @property
    def n0(self) -> int:
        return self.n // max(len(self.columns), 1)

    @cached_property
    def b_qubits(self) -> tuple[int, ...]:
        a = set(self.a_qubits)
        return tuple(q for q in range(self.n) if q not in a)

    def x_generators(self) -> list[PauliOperator]:
        return [PauliOperator(r, BitVector(self.n)) for r in self.hx]

    def z_generators(self) -> list[PauliOperator]:
        return [PauliOperator(BitVector(self.n), r) for r in self.hz]

    def generators(self) -> list[PauliOperator]:
        return self.x_generators() + self.z_generators()

    def symplectic_matrix(self) -> BitMatrix:
        """Stacked generators as rows ``[x | z]`` of length ``2n``."""
        zx = np.zeros((self.hx.rows, self.n), dtype=np.uint8)
        zz = np.zeros((self.hz.rows, self.n), dtype=np.uint8)
        top = np.hstack([self.hx.to_dense(), zx])
        bottom = np.hstack([zz, self.hz.to_dense()])
        return BitMatrix.from_dense(np.vstack([top, bottom]))

    def is_stabilizer(self, op: PauliOperator) -> bool:
        """Membership of ``op`` (ignoring sign) in the stabilizer group."""
        return in_rowspace(op.x, self.hx) and in_rowspace(op.z, self.hz)

    def is_logical(self, op: PauliOperator) -> bool:
        """True for a nontrivial logical: commutes with all checks, not a stabilizer."""
        if self.hz.mul_vec(op.x).any() or self.hx.mul_vec(op.z).any():
            return False
        return not self.is_stabilizer(op)


def _xor_support(*sets: Iterable[int]) -> set[int]:
    out: set[int] = set()
    for s in sets:
        out ^= set(s)
    return out


def _gf2_inverse(m: np.ndarray) -> np.ndarray:
    k = m.shape[0]
    aug = np.hstack([m.astype(np.uint8) & 1, np.eye(k, dtype=np.uint8)])
    for c in range(k):
        piv = next((r for r in range(c, k) if aug[r, c]), None)
        if piv is None:
            raise ValueError("matrix is singular over GF(2)")
        aug[[c, piv]] = aug[[piv, c]]
        for r in range(k):
            if r != c and aug[r, c]:
                aug[r] ^= aug[c]
    return aug[:, k:]


def css_logicals(hx: BitMatrix, hz: BitMatrix) -> list[tuple[PauliOperator, PauliOperator]]:
    """Symplectically paired logical basis of a CSS code.

    X representatives span ``ker(hz)`` modulo ``rowspace(hx)``, Z representatives
    ``ker(hx)`` modulo ``rowspace(hz)``; the Z side is then rotated so that
    ``X_i`` anticommutes exactly with ``Z_i``.
    """
    n = hx.cols
    lx = complement_basis(hx, kernel_basis(hz))
    lz = complement_basis(hz, kernel_basis(hx))
    if lx.rows != lz.rows:
        raise ValueError("inconsistent logical dimensions; checks do not commute")
    if lx.rows == 0:
        return []
    xd, zd = lx.to_dense(), lz.to_dense()
    gram = (xd.astype(np.int64) @ zd.T.astype(np.int64)) % 2
    coeff = _gf2_inverse(gram).T
    zd = (coeff.astype(np.int64) @ zd.astype(np.int64)) % 2
    return [
        (
            PauliOperator(BitVector.from_bits(xd[i]), BitVector(n)),
            PauliOperator(BitVector(n), BitVector.from_bits(zd[i].astype(np.uint8))),
        )
        for i in range(lx.rows)
    ]


def _column_logicals(n: int, columns: Sequence[Sequence[int]]) -> list[tuple[PauliOperator, PauliOperator]]:
    return [(PauliOperator.x_type(n, col), PauliOperator.z_type(n, col)) for col in columns]


def _assemble(
    spec: Spec,
    x_rows: list[set[int]],
    z_rows: list[set[int]],
    columns: list[list[int]],
    a_qubits: list[int],
    shift: int,
    adjacency: list[set[int]],
) -> CssCode:
    n = spec.n
    hx = BitMatrix.from_dense(_support_rows(n, x_rows))
    hz = BitMatrix.from_dense(_support_rows(n, z_rows))
    k_expected = n - hx.rank - hz.rank
    n0 = n // len(columns)
    if n0 % 2 == 1 and k_expected == len(columns):
        logicals = _column_logicals(n, columns)
    else:
        logicals = css_logicals(hx, hz)
    return CssCode(
        spec=spec,
        hx=hx,
        hz=hz,
        logicals=tuple(logicals),
        columns=tuple(tuple(c) for c in columns),
        a_qubits=tuple(a_qubits),
        shift=shift,
        adjacency=tuple(frozenset(s) for s in adjacency),
    )


def _support_rows(n: int, rows: list[set[int]]) -> np.ndarray:
    dense = np.zeros((len(rows), n), dtype=np.uint8)
    for i, sup in enumerate(rows):
        dense[i, sorted(sup)] = 1
    return dense


def from_offsets(n: int, offsets: Iterable[int]) -> CssCode:
    """Build the k=2 BCC code for ``n`` qubits and offset set ``S``.

    Raises:
        InvalidSpecError: odd ``n``, even or repeated offsets, or empty ``S``.
    """
    spec = offsets if isinstance(offsets, BccSpec) else BccSpec(n, tuple(offsets))
    return code_from_spec(spec)


def code_from_spec(spec: BccSpec) -> CssCode:
    n, S = spec.n, spec.offsets
    x_rows = []
    for m in range(0, n, 2):
        sup = _xor_support(
            {m, (m + 2) % n},
            {(m + s) % n for s in S},
            {(m + 2 + s) % n for s in S},
        )
        x_rows.append(sup)
    z_rows = []
    for m in range(1, n, 2):
        sup = _xor_support(
            {m, (m + 2) % n},
            {(m - s) % n for s in S},
            {(m + 2 - s) % n for s in S},
        )
        z_rows.append(sup)
    return _assemble(
        spec, x_rows, z_rows, [spec.a_qubits, spec.b_qubits], spec.a_qubits, 2, spec.adjacency()
    )


def from_general_spec(spec: GeneralBccSpec) -> CssCode:
    """Build the CSS code of a general ``(n0, k)`` BCC description.

    One X check per ``(m, j in A)`` and one Z check per ``(m, j in B)``.
    """
    adj = spec.adjacency()
    x_rows, z_rows = [], []
    for m in range(spec.n0):
        for j in range(1, spec.k + 1):
            a, b = spec.index(m, j), spec.index(m + 1, j)
            sup = _xor_support({a, b}, adj[a], adj[b])
            (x_rows if j in spec.a_set else z_rows).append(sup)
    columns = [spec.column(j) for j in range(1, spec.k + 1)]
    return _assemble(spec, x_rows, z_rows, columns, spec.a_qubits, spec.k, adj)


def logical_count(code: CssCode) -> int:
    """``n`` minus the rank of the stacked generators."""
    return code.n - code.hx.rank - code.hz.rank


def product_logicals(code: CssCode) -> list[tuple[PauliOperator, PauliOperator]]:
    """Column-product logical pairs ``(prod X, prod Z)``, one per column.

    Raises:
        ValueError: if the column length ``n0`` is even.
    """
    if code.n0 % 2 == 0:
        raise ValueError(f"product logicals need odd n0, got n0={code.n0}")
    pairs = _column_logicals(code.n, code.columns)
    for lx, lz in pairs:
        for g in code.generators():
            if not (g.commutes_with(lx) and g.commutes_with(lz)):
                raise AssertionError("column product fails to commute with a generator")
    return pairs


def pushed_single_logical(code: CssCode, m: int) -> PauliOperator:
    """Single-qubit Pauli pushed through the CZ layer.

    For ``m`` in A this is ``X`` on ``m`` and all its neighbours; for ``m`` in B it
    is the ``Z`` counterpart. Its weight is ``deg(m) + 1``.
    """
    if not 0 <= m < code.n:
        raise IndexError(f"qubit {m} out of range for n={code.n}")
    sup = {m} | set(code.adjacency[m])
    if m in set(code.a_qubits):
        return PauliOperator.x_type(code.n, sup)
    return PauliOperator.z_type(code.n, sup)


def _permute_rows(m: BitMatrix, perm: np.ndarray) -> BitMatrix:
    dense = m.to_dense()
    out = np.zeros_like(dense)
    out[:, perm] = dense
    return BitMatrix.from_dense(out) if m.rows else m


def is_automorphism(code: CssCode, perm: Sequence[int], then_transversal_h: bool = False) -> bool:
    """Whether relabeling qubit ``i`` to ``perm[i]`` (optionally followed by H on every
    qubit) maps the stabilizer group onto itself."""
    perm = np.asarray(perm, dtype=np.int64)
    if sorted(perm.tolist()) != list(range(code.n)):
        raise ValueError("perm must be a bijection on 0..n-1")
    px = _permute_rows(code.hx, perm)
    pz = _permute_rows(code.hz, perm)
    if then_transversal_h:
        px, pz = pz, px
    targets_x, targets_z = code.hx, code.hz
    if px.rank != targets_x.rank or pz.rank != targets_z.rank:
        return False
    return all(in_rowspace(r, targets_x) for r in px) and all(in_rowspace(r, targets_z) for r in pz)


def shift_permutation(n: int, t: int) -> list[int]:
    return [(m + t) % n for m in range(n)]


def multiplier_permutation(n: int, c: int, b: int = 0) -> list[int]:
    """The affine relabeling ``m -> c m + b (mod n)``."""
    return [(c * m + b) % n for m in range(n)]


def hadamard_swap_permutation(spec: BccSpec | CssCode) -> list[int]:
    """First reflection ``m -> c - m`` (``c`` odd) preserving the CZ graph.

    Raises:
        RuntimeError: when no candidate preserves the edge set.
    """
    if isinstance(spec, CssCode):
        spec = spec.spec
    if not isinstance(spec, BccSpec):
        raise TypeError("hadamard_swap_permutation needs a k=2 BccSpec")
    n = spec.n
    edges = {frozenset(e) for e in spec.edges()}
    for c in range(1, n, 2):
        perm = [(c - m) % n for m in range(n)]
        if {frozenset((perm[a], perm[b])) for a, b in edges} == edges:
            return perm
    raise RuntimeError(f"no sublattice-swapping reflection preserves the graph of {spec}")


def self_orthogonal(code: CssCode) -> bool:
    """True iff the X- and Z-check rowspaces coincide."""
    return rowspace_equal(code.hx, code.hz)


def prepared_logical_state(spec: BccSpec) -> PreparedState:
    """Logical state made by the ``|+>``/CZ/H circuit: ``|+0>`` for even ``|S|``, else a Bell pair."""
    return PreparedState.PLUS_ZERO if len(spec.offsets) % 2 == 0 else PreparedState.BELL_PAIR


def _span_low_weight(matrix: BitMatrix, max_weight: int) -> list[BitVector]:
    reduced, _ = matrix.rref()
    if reduced.rows == 0:
        return []
    basis = np.ascontiguousarray(reduced.data)
    limit = 1 << 16
    while True:
        out = np.zeros((limit, basis.shape[1]), dtype=np.uint64)
        count = _kernels.low_weight_span(basis, max_weight, limit, out)
        if count <= limit:
            return [BitVector(matrix.cols, out[i]) for i in range(count)]
        limit = count


def _conjugated_pairs(code: CssCode, column_qubits: Sequence[int], max_weight: int) -> list[BitVector]:
    n = code.n
    singles = []
    for a, b in combinations(column_qubits, 2):
        sup = _xor_support({a, b}, code.adjacency[a], code.adjacency[b])
        singles.append(BitVector.from_support(n, sup))
    found = {v for v in singles if 0 < v.weight <= max_weight}
    for u, v in combinations(singles, 2):
        w = u ^ v
        if 0 < w.weight <= max_weight:
            found.add(w)
    return list(found)


def low_weight_stabilizers(code: CssCode, w: int) -> list[PauliOperator]:
    """All X-type then Z-type stabilizer group elements of weight at most ``w``.

    The full group is walked when a type has at most ``FULL_SPAN_GENERATORS``
    generators; otherwise only conjugated pairs ``U X_a X_b U^dag`` (a, b in one
    column) and their pairwise products are examined.
    """
    if w > code.n:
        raise ValueError("w must not exceed n")
    out: list[PauliOperator] = []
    for kind, mat in (("X", code.hx), ("Z", code.hz)):
        if mat.rows <= FULL_SPAN_GENERATORS:
            vecs = _span_low_weight(mat, w)
        else:
            a_set = set(code.a_qubits)
            want_a = kind == "X"
            vecs = []
            for col in code.columns:
                if (col[0] in a_set) == want_a:
                    vecs.extend(_conjugated_pairs(code, col, w))
            vecs = [v for v in set(vecs) if in_rowspace(v, mat)]
        vecs = sorted(set(vecs), key=lambda v: (v.weight, v.support()))
        for v in vecs:
            zero = BitVector(code.n)
            out.append(PauliOperator(v, zero) if kind == "X" else PauliOperator(zero, v))
    return out
