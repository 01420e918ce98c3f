"""Minimum-weight block decoder and Monte-Carlo estimation of Bell-pair failure rates."""

from __future__ import annotations

import csv
import io
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np
from scipy.stats import binomtest

from .circuit import Circuit, ExperimentLayout, Scheme, bell_experiment
from .code import BccSpec, CssCode, code_from_spec
from .distance import distance
from .frames import CHUNK_SHOTS, Fault, NoiseModel, propagate_faults, sample_chunk, unpack_lanes
from .gf2 import BitMatrix, BitVector
from .tableau import simulate_noiseless

logger = logging.getLogger(__name__)

__all__ = [
    "DecodeFailure",
    "SyndromeTable",
    "syndrome_table",
    "decode_block",
    "ExperimentStats",
    "run_experiment",
    "evaluate_faults",
    "scaling_exponent",
    "SweepResult",
    "sweep",
    "log_spaced",
]

_FAIL = 2


class DecodeFailure(Exception):
    """No error of weight ``<= w_max`` explains the observed syndrome."""


def _independent_rows(m: BitMatrix) -> np.ndarray:
    reduced, pivots = m.rref()
    return reduced.to_dense()[: len(pivots)] if pivots else np.zeros((0, m.cols), dtype=np.uint8)


@dataclass(frozen=True, eq=False)
class SyndromeTable:
    """Lookup from a block syndrome to the logical parity of its minimum-weight explanation.

    ``checks`` are independent same-basis generators; ``entries[s]`` is 0 or 1
    (parity of the chosen correction against ``logical``) or 2 when no
    explanation of weight ``<= w_max`` exists.
    """

    checks: np.ndarray
    logical: np.ndarray
    w_max: int
    entries: np.ndarray
    corrections: dict

    def syndrome(self, bits: np.ndarray) -> int:
        syn = (self.checks.astype(np.int64) @ np.asarray(bits, dtype=np.int64)) % 2
        return int(np.dot(syn, 1 << np.arange(len(syn), dtype=np.int64)))

    def syndromes(self, bits: np.ndarray) -> np.ndarray:
        """Row-wise syndromes of a ``(shots, n)`` 0/1 array as integers."""
        syn = (np.asarray(bits, dtype=np.int64) @ self.checks.T.astype(np.int64)) % 2
        return syn @ (1 << np.arange(self.checks.shape[0], dtype=np.int64))

    def correction(self, syndrome: int) -> tuple[int, ...]:
        try:
            return self.corrections[syndrome]
        except KeyError:
            raise DecodeFailure(f"no error of weight <= {self.w_max} has syndrome {syndrome:#x}") from None


def _build_table(checks: np.ndarray, logical: np.ndarray, w_max: int) -> SyndromeTable:
    r, n = checks.shape
    cols = (checks.astype(np.int64) * (1 << np.arange(r, dtype=np.int64))[:, None]).sum(axis=0)
    entries = np.full(1 << r, _FAIL, dtype=np.uint8)
    corrections: dict[int, tuple[int, ...]] = {}
    remaining = 1 << r
    for w in range(w_max + 1):
        for sup in combinations(range(n), w):
            s = 0
            for q in sup:
                s ^= int(cols[q])
            if s not in corrections:
                corrections[s] = sup
                entries[s] = int(logical[list(sup)].sum() % 2) if sup else 0
                remaining -= 1
                if remaining == 0:
                    break
        if remaining == 0:
            break
    return SyndromeTable(checks, logical, w_max, entries, corrections)


@lru_cache(maxsize=64)
def _cached_table(code: CssCode, basis: str, w_max: int) -> SyndromeTable:
    (lx1, lz1) = code.logicals[0]
    if basis == "Z":
        checks, logical = _independent_rows(code.hz), lz1.z.to_bits()
    else:
        checks, logical = _independent_rows(code.hx), lx1.x.to_bits()
    return _build_table(checks, logical.astype(np.uint8), w_max)


def _default_w_max(code: CssCode) -> int:
    d = distance(code)
    if d is None:
        raise ValueError("code distance exceeds the enumeration cap; pass w_max explicitly")
    return max(d - 1, 0)


def syndrome_table(code: CssCode, basis: str, w_max: int | None = None) -> SyndromeTable:
    """Decoder table for ``basis`` readouts of ``code`` (``w_max`` defaults to ``d - 1``)."""
    basis = basis.upper()
    if basis not in ("X", "Z"):
        raise ValueError("basis must be 'X' or 'Z'")
    return _cached_table(code, basis, _default_w_max(code) if w_max is None else w_max)


def decode_block(bits: BitVector | Sequence[int], code: CssCode, basis: str, w_max: int | None = None) -> int:
    """Corrected logical parity of one block's transversal readout.

    The syndrome uses the same-basis generators; the correction is a
    minimum-cardinality flip set with that syndrome (ties go to the
    lexicographically first support), and the result is the parity of the first
    logical (``Z_1`` for a Z readout, ``X_1`` for X) after correction.

    Raises:
        DecodeFailure: if no flip set of weight ``<= w_max`` reproduces the syndrome.
    """
    table = syndrome_table(code, basis, w_max)
    raw = bits.to_bits() if isinstance(bits, BitVector) else np.asarray(bits, dtype=np.uint8)
    if raw.shape != (code.n,):
        raise ValueError(f"expected {code.n} bits, got shape {raw.shape}")
    fix = table.correction(table.syndrome(raw))
    return int((int(table.logical @ raw) + int(table.logical[list(fix)].sum())) % 2)


@dataclass(frozen=True)
class ExperimentStats:
    n: int
    offsets: tuple[int, ...]
    scheme: str
    basis: str
    p: float
    shots: int
    accepted: int
    logical_failures: int
    rate: float | None
    ci_low: float | None
    ci_high: float | None
    seed: int

    def __post_init__(self) -> None:
        if not 0 <= self.accepted <= self.shots or not 0 <= self.logical_failures <= self.accepted:
            raise ValueError("inconsistent counts")

    def to_dict(self) -> dict:
        out = asdict(self)
        out["offsets"] = list(self.offsets)
        return out


def _wilson(failures: int, accepted: int) -> tuple[float | None, float | None, float | None]:
    if accepted == 0:
        return None, None, None
    ci = binomtest(failures, accepted).proportion_ci(0.95, method="wilson")
    rate = failures / accepted
    return rate, min(float(ci.low), rate), max(float(ci.high), rate)


@dataclass(frozen=True, eq=False)
class _Plan:
    circuit: Circuit
    layout: ExperimentLayout
    table: SyndromeTable
    expected_parity: int


@lru_cache(maxsize=32)
def _plan(spec: BccSpec, scheme: str, basis: str, step: int, w_max: int | None) -> _Plan:
    circuit, layout = bell_experiment(spec, scheme, basis, step)
    code = code_from_spec(spec)
    table = syndrome_table(code, basis, w_max)
    ref = simulate_noiseless(circuit)
    for s in layout.ancilla_slots:
        if not ref.measurement_deterministic(s) or ref.outcomes[s, 0]:
            raise AssertionError(f"ancilla slot {s} is not deterministically 0 without noise")
    for slots in (layout.block1_slots, layout.block2_slots):
        for row in table.checks:
            if ref.parity_value([slots[q] for q in np.flatnonzero(row)]):
                raise AssertionError("block syndrome is nonzero without noise")
    both = [layout.block1_slots[q] for q in np.flatnonzero(table.logical)]
    both += [layout.block2_slots[q] for q in np.flatnonzero(table.logical)]
    return _Plan(circuit, layout, table, ref.parity_value(both))


def _judge(plan: _Plan, flips: np.ndarray, shots: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-lane ``(accepted, failed)`` from packed outcome flips relative to the noiseless run."""
    rejected = np.zeros(flips.shape[1], dtype=np.uint64)
    for s in plan.layout.ancilla_slots:
        rejected |= flips[s]
    keep_words = ~rejected
    bad = np.zeros(shots, dtype=bool)
    parity = np.zeros(shots, dtype=np.uint8)

    for slots in (plan.layout.block1_slots, plan.layout.block2_slots):
        bits = unpack_lanes(flips[list(slots)], shots).astype(np.uint8)
        entry = plan.table.entries[plan.table.syndromes(bits)]
        bad |= entry == _FAIL
        parity ^= ((bits.astype(np.int64) @ plan.table.logical.astype(np.int64)) % 2).astype(np.uint8)
        parity ^= np.where(entry == _FAIL, 0, entry).astype(np.uint8)
    accept = unpack_lanes(keep_words[None, :], shots)[:, 0]
    return accept, accept & (bad | (parity == 1))


def _chunk_counts(plan: _Plan, noise: NoiseModel, shots: int, seed: int, index: int) -> tuple[int, int]:
    batch = sample_chunk(plan.circuit, noise, shots, seed, index)
    accept, fail = _judge(plan, batch.flips, shots)
    return int(accept.sum()), int(fail.sum())


def evaluate_faults(
    spec: BccSpec,
    scheme: Scheme | str,
    basis: str,
    fault_sets: Sequence[Iterable[Fault]],
    *,
    step: int = 3,
    w_max: int | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Exact ``(accepted, failed)`` flags for fixed fault sets, judged like sampled shots."""
    plan = _plan(spec, Scheme(scheme).value, basis.upper(), step, w_max)
    batch = propagate_faults(plan.circuit, fault_sets)
    return _judge(plan, batch.flips, len(fault_sets))


def run_experiment(
    spec: BccSpec,
    scheme: Scheme | str,
    basis: str,
    noise: NoiseModel,
    shots: int,
    seed: int,
    *,
    step: int = 3,
    w_max: int | None = None,
    jobs: int = 1,
    chunk_shots: int = CHUNK_SHOTS,
) -> ExperimentStats:
    """Postselected logical failure rate of the two-block Bell-pair experiment.

    A shot is rejected when any ancilla outcome flips. Accepted shots fail when
    either block's decoder gives up or the decoded ``Z_1 Z_1`` (``X_1 X_1``)
    correlation differs from its noiseless value. Chunk ``i`` always uses the
    stream keyed by ``(seed, i)``, so counts do not depend on ``jobs``.
    """
    scheme = Scheme(scheme)
    basis = basis.upper()
    if shots < 0:
        raise ValueError("shots must be non-negative")
    plan = _plan(spec, scheme.value, basis, step, w_max)
    sizes = [min(chunk_shots, shots - start) for start in range(0, shots, chunk_shots)]
    args = [(plan, noise, size, seed, i) for i, size in enumerate(sizes)]
    if jobs > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_chunk_counts, *zip(*args)))
    else:
        results = [_chunk_counts(*a) for a in args]
    accepted = sum(a for a, _ in results)
    failures = sum(f for _, f in results)
    if shots and accepted == 0:
        logger.warning("no shots accepted at p=%g (%s, %s)", noise.p, scheme.value, basis)
    rate, lo, hi = _wilson(failures, accepted)
    return ExperimentStats(
        n=spec.n,
        offsets=spec.offsets,
        scheme=scheme.value,
        basis=basis,
        p=noise.p,
        shots=shots,
        accepted=accepted,
        logical_failures=failures,
        rate=rate,
        ci_low=lo,
        ci_high=hi,
        seed=seed,
    )


def scaling_exponent(points: Iterable[tuple[float, float]]) -> float:
    """Least-squares slope of ``log(rate)`` against ``log(p)``.

    Raises:
        ValueError: with fewer than 3 points, a non-positive value, or a single distinct ``p``.
    """
    pts = [(float(p), float(r)) for p, r in points]
    if len(pts) < 3:
        raise ValueError("need at least 3 points")
    if any(p <= 0 or r <= 0 for p, r in pts):
        raise ValueError("p and rate must be positive")
    if len({p for p, _ in pts}) < 2:
        raise ValueError("all points share the same p")
    x = np.log([p for p, _ in pts])
    y = np.log([r for _, r in pts])
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def log_spaced(lo: float = 1e-3, hi: float = 3e-2, count: int = 6) -> list[float]:
    return [float(v) for v in np.geomspace(lo, hi, count)]


@dataclass(frozen=True)
class SweepResult:
    points: tuple[ExperimentStats, ...]
    exponent: float | None
    fitted: tuple[float, ...]
    min_failures: int

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["p", "shots", "accepted", "failures", "rate", "ci_low", "ci_high", "basis", "scheme"])
        for s in self.points:
            w.writerow([repr(s.p), s.shots, s.accepted, s.logical_failures,
                        "" if s.rate is None else repr(s.rate),
                        "" if s.ci_low is None else repr(s.ci_low),
                        "" if s.ci_high is None else repr(s.ci_high), s.basis, s.scheme])
        w.writerow(["# exponent", "" if self.exponent is None else repr(self.exponent),
                    "fitted_points", len(self.fitted), "min_failures", self.min_failures])
        return buf.getvalue()


def sweep(
    spec: BccSpec,
    scheme: Scheme | str,
    basis: str,
    ps: Sequence[float],
    shots: int | Sequence[int],
    seed: int,
    *,
    min_failures: int = 20,
    noise_template: NoiseModel | None = None,
    **kwargs,
) -> SweepResult:
    """Run each ``p`` and fit the exponent on points with at least ``min_failures`` failures.

    ``shots`` may be one count or one per ``p``. Each point gets its own seed
    derived from ``(seed, index)``.
    """
    if any(p <= 0 for p in ps):
        raise ValueError("every p must be positive (log fit)")
    counts = [shots] * len(ps) if isinstance(shots, int) else list(shots)
    if len(counts) != len(ps):
        raise ValueError("one shot count per p is required")
    template = noise_template or NoiseModel(0.0)
    stats = []
    for i, (p, count) in enumerate(zip(ps, counts)):
        noise = NoiseModel(p, template.gate1, template.gate2, template.init, template.measure)
        point_seed = int(np.random.SeedSequence([seed, i]).generate_state(1)[0])
        stats.append(run_experiment(spec, scheme, basis, noise, count, point_seed, **kwargs))
        logger.info("p=%g failures=%d accepted=%d", p, stats[-1].logical_failures, stats[-1].accepted)
    usable = [s for s in stats if s.logical_failures >= min_failures and s.rate]
    exponent = scaling_exponent([(s.p, s.rate) for s in usable]) if len(usable) >= 3 else None
    return SweepResult(tuple(stats), exponent, tuple(s.p for s in usable), min_failures)
