"""Known code families expressible with offset sets.

Covers the rotated toric family ``[[d^2+1, 2, d]]``, offset complements, and the
non-CSS cyclic cluster codes obtained from a BCC offset set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .code import BccSpec, CssCode, InvalidSpecError, from_offsets, is_automorphism, multiplier_permutation
from .distance import normalizer_logicals, stabilizer_distance
from .gf2 import BitMatrix, BitVector, in_rowspace, rowspace_equal
from .pauli import PauliOperator

__all__ = [
    "rotated_toric_offsets",
    "rotated_toric_code",
    "plaquette",
    "plaquettes_in_stabilizer",
    "complement_offsets",
    "cyclic_cluster_transform",
    "cyclic_cluster_code",
    "cluster_state_stabilizers",
    "CyclicClusterCode",
    "five_qubit_code",
]


def _require_odd_d(d: int) -> None:
    if d < 3 or d % 2 == 0:
        raise ValueError(f"d must be odd and >= 3, got {d}")


def rotated_toric_offsets(d: int) -> tuple[int, list[int]]:
    """``(n, S)`` with ``n = d^2 + 1`` and ``S = {+-(d + i(d-1))}``, ``0 <= i <= (d-1)/2``.

    The last element equals ``n/2`` and is its own negative. Offsets are returned
    signed, in the order ``-d, +d, -(2d-1), +(2d-1), ..., n/2``.
    """
    _require_odd_d(d)
    n = d * d + 1
    out: list[int] = []
    for i in range((d - 1) // 2):
        v = d + i * (d - 1)
        out.extend([-v, v])
    out.append(n // 2)
    return n, out


def rotated_toric_code(d: int) -> CssCode:
    n, S = rotated_toric_offsets(d)
    return from_offsets(n, S)


def plaquette(n: int, m: int, d: int) -> PauliOperator:
    """``Z_m Z_{m+1} Z_{m+d} Z_{m+d+1}``."""
    return PauliOperator.z_type(n, [(m + t) % n for t in (0, 1, d, d + 1)])


def plaquettes_in_stabilizer(code: CssCode, d: int) -> bool:
    """Whether every even-``m`` plaquette lies in the Z-check rowspace."""
    return all(in_rowspace(plaquette(code.n, m, d).z, code.hz) for m in range(0, code.n, 2))


def multiplier_hadamard_holds(code: CssCode, d: int) -> bool:
    """Whether ``m -> m d`` followed by transversal H is a code automorphism."""
    return is_automorphism(code, multiplier_permutation(code.n, d), then_transversal_h=True)


def complement_offsets(n: int, offsets: Iterable[int]) -> list[int]:
    """Odd residues ``{1, 3, ..., n-1}`` not in ``S``.

    Raises:
        InvalidSpecError: if ``S`` already contains every odd residue.
    """
    spec = BccSpec(n, tuple(offsets))
    rest = sorted(set(range(1, n, 2)) - set(spec.offsets))
    if not rest:
        raise InvalidSpecError("complement is empty: S holds every odd residue")
    return rest


def cyclic_cluster_transform(n: int, offsets: Iterable[int]) -> tuple[int, list[int]]:
    """Map a BCC offset set to the offsets ``T`` of a cyclic cluster code on ``n/2`` qubits.

    Each ``s`` goes to ``(s + n/2) / 2`` (the even root mod ``n``), reduced mod
    ``n/2``; a resulting 0 is dropped.
    """
    if n % 2 or (n // 2) % 2 == 0:
        raise ValueError(f"n/2 must be odd, got n={n}")
    half = n // 2
    out = set()
    for s in offsets:
        x = (int(s) + half) % n
        root = x // 2 if (x // 2) % 2 == 0 else (x // 2 + half) % n
        out.add(root % half)
    out.discard(0)
    return half, sorted(out)


@dataclass(frozen=True, eq=False)
class CyclicClusterCode:
    """Non-CSS stabilizer code of the ring cluster state with offsets ``T``."""

    n: int
    offsets: tuple[int, ...]
    generators: tuple[PauliOperator, ...]

    def matrix(self) -> BitMatrix:
        return BitMatrix.from_dense(np.array([g.symplectic_bits() for g in self.generators], dtype=np.uint8))

    @property
    def rank(self) -> int:
        return self.matrix().rank

    def logical_count(self) -> int:
        return self.n - self.rank

    def logical_basis(self) -> BitMatrix:
        return normalizer_logicals(self.matrix())

    def distance(self, w_max: int | None = None) -> int | None:
        return stabilizer_distance(list(self.generators), w_max or self.n, shift=1)

    def same_group(self, other_generators: Iterable[PauliOperator]) -> bool:
        """GF(2) rowspace equality of the symplectic generator matrices (signs ignored)."""
        other = BitMatrix.from_dense(np.array([g.symplectic_bits() for g in other_generators], dtype=np.uint8))
        return rowspace_equal(self.matrix(), other)


def cluster_state_stabilizers(n_half: int, offsets: Iterable[int]) -> list[PauliOperator]:
    """Ring cluster-state stabilizers ``X_i prod_{t in T} Z_{i+t}``.

    Raises:
        ValueError: for empty ``T``, ``0 in T``, or ``T`` not closed under negation.
    """
    T = sorted({int(t) % n_half for t in offsets})
    if not T:
        raise ValueError("T must be nonempty")
    if 0 in T:
        raise ValueError("0 may not appear in T")
    if any((-t) % n_half not in T for t in T):
        raise ValueError(f"T must be symmetric under negation mod {n_half}: {T}")
    gens = []
    for i in range(n_half):
        x = BitVector.from_support(n_half, [i])
        z = BitVector.from_support(n_half, [(i + t) % n_half for t in T])
        gens.append(PauliOperator(x, z))
    return gens


def cyclic_cluster_code(n_half: int, offsets: Iterable[int]) -> CyclicClusterCode:
    """Cyclic cluster code: the cluster-state pushes of ``X_i X_{i+1}``.

    All qubits start in ``|+>`` (or all in ``|->``), so the code is spanned by
    ``g_i g_{i+1}`` with ``g_i = X_i prod_{t in T} Z_{i+t}``; their product over
    ``i`` is the identity, leaving one logical qubit when nothing else is redundant.
    """
    cluster = cluster_state_stabilizers(n_half, offsets)
    gens = tuple(cluster[i] * cluster[(i + 1) % n_half] for i in range(n_half))
    T = tuple(sorted({int(t) % n_half for t in offsets}))
    return CyclicClusterCode(n_half, T, gens)


def five_qubit_code() -> list[PauliOperator]:
    """Cyclic shifts of ``XZZXI``."""
    base = "XZZXI"
    return [PauliOperator.from_string(base[-i:] + base[:-i]) for i in range(5)]
