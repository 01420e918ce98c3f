"""Exact minimum distance by support enumeration.

Every qubit carries a packed *signature*: its syndrome bits against the opposite
check type and its commutation bits against a logical basis. A support is a
nontrivial logical exactly when the XOR of its signatures has zero syndrome part
and nonzero logical part, so the enumeration inner loop is a running word XOR.

Cyclic codes are searched modulo their shift automorphism: a shift by
``code.shift`` permutes the logicals, so the smallest support index can be
restricted to ``0 .. shift - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .code import CssCode
from .gf2 import BitMatrix, complement_basis, kernel_basis, pack_bits
from .pauli import PauliOperator

__all__ = [
    "distance",
    "distance_xz",
    "has_logical_below",
    "find_logicals",
    "logical_weight_profile",
    "LogicalRecord",
    "stabilizer_distance",
    "normalizer_logicals",
]


def _column_words(rows: np.ndarray, n: int) -> np.ndarray:
    """Dense ``(r, n)`` rows -> per-qubit packed columns, shape ``(n, W)``."""
    if rows.shape[0] == 0:
        return np.zeros((n, 1), dtype=np.uint64)
    return pack_bits(np.ascontiguousarray(rows.T))


def _dense(m: BitMatrix) -> np.ndarray:
    return m.to_dense() if m.rows else np.zeros((0, m.cols), dtype=np.uint8)


def _css_signatures(code: CssCode, kind: str) -> tuple[np.ndarray, np.ndarray]:
    """Signatures for pure ``kind``-type operators (``"X"`` or ``"Z"``)."""
    n = code.n
    if kind == "X":
        checks = _dense(code.hz)
        partners = np.array([lz.z.to_bits() for _, lz in code.logicals], dtype=np.uint8).reshape(-1, n)
    else:
        checks = _dense(code.hx)
        partners = np.array([lx.x.to_bits() for lx, _ in code.logicals], dtype=np.uint8).reshape(-1, n)
    syn = _column_words(checks, n)[:, None, :]
    log = _column_words(partners, n)[:, None, :]
    return np.ascontiguousarray(syn), np.ascontiguousarray(log)


def _starts(n: int, shift: int | None) -> np.ndarray:
    return np.arange(min(shift, n) if shift else n, dtype=np.int64)


def _enumerate(syn, log, starts, w, limit):
    out_pos = np.zeros((limit, w), dtype=np.int64)
    out_ch = np.zeros((limit, w), dtype=np.int64)
    count = _kernels.enumerate_logicals(syn, log, starts, w, limit, out_pos, out_ch)
    return out_pos[:count], out_ch[:count]


def _min_weight(syn, log, starts, w_lo: int, w_hi: int) -> int | None:
    for w in range(w_lo, w_hi + 1):
        pos, _ = _enumerate(syn, log, starts, w, 1)
        if len(pos):
            return w
    return None


def _default_cap(code: CssCode) -> int:
    if code.adjacency:
        return min(len(a) for a in code.adjacency) + 1
    return code.n


def distance_xz(code: CssCode, w_max: int | None = None, use_symmetry: bool = True) -> tuple[int | None, int | None]:
    """Minimum weights of pure-X and pure-Z nontrivial logicals (``None`` if above ``w_max``)."""
    if code.k == 0:
        return None, None
    w_max = _default_cap(code) if w_max is None else w_max
    if w_max < 1:
        raise ValueError("w_max must be >= 1")
    starts = _starts(code.n, code.shift if use_symmetry else None)
    out = []
    for kind in ("X", "Z"):
        syn, log = _css_signatures(code, kind)
        out.append(_min_weight(syn, log, starts, 1, w_max))
    return out[0], out[1]


def distance(code: CssCode, w_max: int | None = None, use_symmetry: bool = True) -> int | None:
    """Exact code distance, or ``None`` when no logical has weight ``<= w_max``.

    ``w_max`` defaults to one more than the minimum vertex degree, which always
    bounds the distance of a BCC code from above.
    """
    if code.k == 0:
        return None
    w_max = _default_cap(code) if w_max is None else w_max
    if w_max < 1:
        raise ValueError("w_max must be >= 1")
    starts = _starts(code.n, code.shift if use_symmetry else None)
    sigs = [_css_signatures(code, kind) for kind in ("X", "Z")]
    for w in range(1, w_max + 1):
        for syn, log in sigs:
            pos, _ = _enumerate(syn, log, starts, w, 1)
            if len(pos):
                return w
    return None


def has_logical_below(code: CssCode, target: int) -> bool:
    """True iff some nontrivial logical has weight ``< target``; scans low weights first."""
    if target <= 1:
        return False
    return distance(code, target - 1) is not None


@dataclass(frozen=True)
class LogicalRecord:
    kind: str
    support: tuple[int, ...]
    w_a: int
    w_b: int

    @property
    def weight(self) -> int:
        return len(self.support)


def _expand_shifts(supports: Iterable[tuple[int, ...]], n: int, shift: int) -> set[tuple[int, ...]]:
    out = set()
    for sup in supports:
        for t in range(0, n, shift):
            out.add(tuple(sorted((q + t) % n for q in sup)))
    return out


def find_logicals(code: CssCode, kind: str, w: int, limit: int = 1 << 20) -> list[tuple[int, ...]]:
    """All supports of weight exactly ``w`` of nontrivial ``kind``-type logicals."""
    syn, log = _css_signatures(code, kind)
    starts = _starts(code.n, code.shift)
    pos, _ = _enumerate(syn, log, starts, w, limit)
    if len(pos) >= limit:
        raise RuntimeError(f"more than {limit} logicals of weight {w}; raise the limit")
    reps = [tuple(int(q) for q in row) for row in pos]
    return sorted(_expand_shifts(reps, code.n, code.shift))


def logical_weight_profile(code: CssCode, w: int) -> list[LogicalRecord]:
    """Every pure-type nontrivial logical of weight ``<= w`` with its A/B weight split."""
    a_set = set(code.a_qubits)
    records = []
    for kind in ("X", "Z"):
        for weight in range(1, w + 1):
            for sup in find_logicals(code, kind, weight):
                w_a = sum(1 for q in sup if q in a_set)
                records.append(LogicalRecord(kind, sup, w_a, len(sup) - w_a))
    return records


def normalizer_logicals(generators: BitMatrix) -> BitMatrix:
    """Rows ``[x|z]`` completing the stabilizer rowspace to its symplectic complement.

    These are logical representatives: a Pauli commuting with all stabilizers is
    a stabilizer iff it commutes with all of them.
    """
    n = generators.cols // 2
    dense = _dense(generators)
    swapped = np.hstack([dense[:, n:], dense[:, :n]]) if dense.shape[0] else dense
    normalizer = kernel_basis(BitMatrix.from_dense(swapped) if dense.shape[0] else BitMatrix(0, 2 * n))
    return complement_basis(generators, normalizer)


def stabilizer_distance(
    generators: Sequence[PauliOperator], w_max: int, shift: int | None = None
) -> int | None:
    """Distance of a general (possibly non-CSS) stabilizer code over all Pauli types."""
    n = generators[0].num_qubits
    g = BitMatrix.from_dense(np.array([p.symplectic_bits() for p in generators], dtype=np.uint8))
    logicals = normalizer_logicals(g)
    if logicals.rows == 0:
        return None
    gd, ld = _dense(g), _dense(logicals)

    def signature(rows: np.ndarray) -> np.ndarray:
        rx, rz = rows[:, :n], rows[:, n:]
        # Single-qubit X anticommutes with rows having z; Z with rows having x; Y with either but not both.
        x_col = _column_words(rz, n)
        z_col = _column_words(rx, n)
        return np.ascontiguousarray(np.stack([x_col, z_col, x_col ^ z_col], axis=1))

    syn, log = signature(gd), signature(ld)
    starts = _starts(n, shift)
    return _min_weight(syn, log, starts, 1, w_max)
