"""Signed n-qubit Pauli operators in symplectic form."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .gf2 import BitVector, popcount

__all__ = ["PauliOperator", "symplectic_product"]


def symplectic_product(x1: BitVector, z1: BitVector, x2: BitVector, z2: BitVector) -> int:
    return (x1.dot(z2) + z1.dot(x2)) & 1


@dataclass(frozen=True)
class PauliOperator:
    """Pauli operator ``sign * i^{x.z} X^x Z^z``; Y is the pair (x=1, z=1).

    The phase convention makes every operator Hermitian: a qubit with both
    bits set contributes ``Y``, not ``XZ``.
    """

    x: BitVector
    z: BitVector
    sign: int = 1

    def __post_init__(self) -> None:
        if self.x.length != self.z.length:
            raise ValueError("x and z supports must have equal length")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    @property
    def num_qubits(self) -> int:
        return self.x.length

    @classmethod
    def identity(cls, n: int) -> PauliOperator:
        return cls(BitVector(n), BitVector(n))

    @classmethod
    def x_type(cls, n: int, support: Iterable[int]) -> PauliOperator:
        return cls(BitVector.from_support(n, support), BitVector(n))

    @classmethod
    def z_type(cls, n: int, support: Iterable[int]) -> PauliOperator:
        return cls(BitVector(n), BitVector.from_support(n, support))

    @classmethod
    def from_string(cls, text: str) -> PauliOperator:
        """Parse e.g. ``"+XIZY"`` or ``"-ZZ"``; a missing sign means ``+``."""
        sign = 1
        if text[:1] in "+-":
            sign = -1 if text[0] == "-" else 1
            text = text[1:]
        text = text.upper()
        bad = set(text) - set("IXYZ_")
        if bad:
            raise ValueError(f"invalid Pauli characters {sorted(bad)}")
        xs = [int(c in "XY") for c in text]
        zs = [int(c in "ZY") for c in text]
        return cls(BitVector.from_bits(xs), BitVector.from_bits(zs), sign)

    def to_string(self, signed: bool = False) -> str:
        xs = self.x.to_bits()
        zs = self.z.to_bits()
        chars = np.array(["I", "X", "Z", "Y"])[xs + 2 * zs]
        body = "".join(chars)
        if signed:
            return ("-" if self.sign < 0 else "+") + body
        return body

    def __str__(self) -> str:
        return self.to_string(signed=True)

    @property
    def support(self) -> list[int]:
        return (self.x | self.z).support()

    @property
    def weight(self) -> int:
        return int(popcount((self.x | self.z).words))

    def weight_on(self, qubits: Iterable[int]) -> int:
        sup = set(self.support)
        return sum(1 for q in qubits if q in sup)

    @property
    def is_x_type(self) -> bool:
        return not self.z.any()

    @property
    def is_z_type(self) -> bool:
        return not self.x.any()

    def commutes_with(self, other: PauliOperator) -> bool:
        return symplectic_product(self.x, self.z, other.x, other.z) == 0

    def __mul__(self, other: PauliOperator) -> PauliOperator:
        """Operator product; raises if the result is anti-Hermitian."""
        if self.num_qubits != other.num_qubits:
            raise ValueError("qubit count mismatch")
        # Per-qubit phase exponent (mod 4) of P1 P2 relative to the Hermitian form.
        x1, z1 = self.x.to_bits().astype(np.int64), self.z.to_bits().astype(np.int64)
        x2, z2 = other.x.to_bits().astype(np.int64), other.z.to_bits().astype(np.int64)
        phase = int(np.sum(_g(x1, z1, x2, z2))) % 4
        if phase % 2:
            raise ValueError("product of anticommuting Paulis is not Hermitian")
        sign = self.sign * other.sign * (-1 if phase == 2 else 1)
        return PauliOperator(self.x ^ other.x, self.z ^ other.z, sign)

    def permuted(self, perm: list[int] | np.ndarray) -> PauliOperator:
        """Move the action on qubit ``i`` to qubit ``perm[i]``."""
        perm = np.asarray(perm)
        xs = np.zeros(self.num_qubits, dtype=np.uint8)
        zs = np.zeros(self.num_qubits, dtype=np.uint8)
        xs[perm] = self.x.to_bits()
        zs[perm] = self.z.to_bits()
        return PauliOperator(BitVector.from_bits(xs), BitVector.from_bits(zs), self.sign)

    def hadamard_transformed(self) -> PauliOperator:
        """Conjugate by transversal H: X<->Z, Y -> -Y."""
        ys = (self.x & self.z).weight
        sign = self.sign * (-1 if ys % 2 else 1)
        return PauliOperator(self.z, self.x, sign)

    def symplectic_bits(self) -> np.ndarray:
        return np.concatenate([self.x.to_bits(), self.z.to_bits()])


def _g(x1, z1, x2, z2):
    """Aaronson-Gottesman phase exponent for multiplying single-qubit Paulis."""
    return np.where(
        (x1 == 0) & (z1 == 0),
        0,
        np.where(
            (x1 == 1) & (z1 == 1),
            z2 - x2,
            np.where(x1 == 1, z2 * (2 * x2 - 1), x2 * (1 - 2 * z2)),
        ),
    )
