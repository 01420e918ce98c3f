"""Exhaustive search over offset sets, reduced by relabeling symmetries.

Two offset sets give equivalent codes when related by ``s -> c s + 2t (mod n)``
with ``c`` a unit: multiplying every label by a unit keeps the sublattices and
maps edges to edges, and shifting the B sublattice by an even amount moves
every offset by the same step. Reflection ``s -> -s`` is the unit ``c = -1``.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import combinations
from math import comb, gcd

from .code import (
    BccSpec,
    code_from_spec,
    logical_count,
    low_weight_stabilizers,
    prepared_logical_state,
    self_orthogonal,
)
from .distance import distance, has_logical_below

logger = logging.getLogger(__name__)

__all__ = ["SearchTask", "SearchHit", "canonicalize", "orbit", "run_search", "symmetry_group"]


@dataclass(frozen=True)
class SearchTask:
    n: int
    s_size: int
    target_d: int
    symmetry_reduce: bool = True
    w_cap: int | None = None

    def __post_init__(self) -> None:
        if self.n < 4 or self.n % 2:
            raise ValueError("n must be even and >= 4")
        if not 1 <= self.s_size <= self.n // 2:
            raise ValueError(f"s_size must lie in [1, n/2], got {self.s_size}")
        if self.target_d < 1:
            raise ValueError("target_d must be >= 1")

    @property
    def trivially_empty(self) -> bool:
        """Distance never exceeds ``|S| + 1``."""
        return self.target_d > self.s_size + 1


@dataclass(frozen=True)
class SearchHit:
    n: int
    offsets: tuple[int, ...]
    d: int
    canonical: bool
    orbit_size: int
    self_orthogonal: bool
    prepared_state: str
    min_stabilizer_weight: int
    members_seen: int = field(default=1, compare=False)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["offsets"] = list(self.offsets)
        return out


def symmetry_group(n: int) -> list[tuple[int, int]]:
    """All ``(c, b)`` with ``c`` a unit mod ``n`` and ``b`` even."""
    return [(c, b) for c in range(1, n, 2) if gcd(c, n) == 1 for b in range(0, n, 2)]


def orbit(n: int, offsets) -> set[tuple[int, ...]]:
    base = [int(s) % n for s in offsets]
    return {tuple(sorted((c * s + b) % n for s in base)) for c, b in symmetry_group(n)}


def canonicalize(n: int, offsets) -> tuple[int, ...]:
    """Lexicographically least sorted image of ``S`` under the relabeling group."""
    BccSpec(n, tuple(offsets))
    return min(orbit(n, offsets))


def _min_stabilizer_weight(spec: BccSpec) -> int:
    code = code_from_spec(spec)
    rows = [r.weight for r in code.hx] + [r.weight for r in code.hz]
    best = min(rows)
    low = low_weight_stabilizers(code, best - 1) if best > 1 and code.hx.rows <= 30 else []
    return min([best] + [p.weight for p in low])


def _evaluate(task: SearchTask, offsets: tuple[int, ...]) -> int | None:
    """Exact distance when it reaches the target on a k=2 code, else ``None``."""
    spec = BccSpec(task.n, offsets)
    code = code_from_spec(spec)
    if logical_count(code) != 2:
        return None
    if has_logical_below(code, task.target_d):
        return None
    cap = task.w_cap or (len(offsets) + 1)
    return distance(code, cap)


def _run_shard(task: SearchTask, first: int) -> list[tuple[tuple[int, ...], tuple[int, ...], int]]:
    """Subsets whose smallest offset is ``first``; returns ``(canonical, S, d)`` per hit."""
    odds = list(range(1, task.n, 2))
    rest = [s for s in odds if s > first]
    out = []
    for tail in combinations(rest, task.s_size - 1):
        S = (first,) + tail
        canon = canonicalize(task.n, S)
        if task.symmetry_reduce and canon != S:
            continue
        d = _evaluate(task, S)
        if d is not None:
            out.append((canon, S, d))
    return out


def run_search(task: SearchTask, jobs: int = 1) -> list[SearchHit]:
    """One hit per relabeling class whose codes reach ``target_d``, sorted by canonical form.

    Shards split the subsets by their smallest offset; results do not depend on
    ``jobs``.
    """
    if task.trivially_empty:
        return []
    firsts = list(range(1, task.n, 2))
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            shards = list(pool.map(_run_shard, [task] * len(firsts), firsts))
    else:
        shards = [_run_shard(task, f) for f in firsts]
    by_class: dict[tuple[int, ...], list[tuple[tuple[int, ...], int]]] = {}
    for shard in shards:
        for canon, S, d in shard:
            by_class.setdefault(canon, []).append((S, d))
    hits = []
    for canon in sorted(by_class):
        members = by_class[canon]
        ds = {d for _, d in members}
        if len(ds) != 1:
            raise AssertionError(f"class {canon} has inconsistent distances {ds}")
        spec = BccSpec(task.n, canon)
        code = code_from_spec(spec)
        hits.append(
            SearchHit(
                n=task.n,
                offsets=canon,
                d=ds.pop(),
                canonical=True,
                orbit_size=len(orbit(task.n, canon)),
                self_orthogonal=self_orthogonal(code),
                prepared_state=prepared_logical_state(spec).value,
                min_stabilizer_weight=_min_stabilizer_weight(spec),
                members_seen=len(members),
            )
        )
    logger.info("search n=%d |S|=%d d>=%d: %d of %d subsets -> %d classes",
                task.n, task.s_size, task.target_d,
                sum(len(s) for s in shards), comb(task.n // 2, task.s_size), len(hits))
    return hits


def default_jobs() -> int:
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)
