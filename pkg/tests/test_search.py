from __future__ import annotations

from math import gcd

import pytest

from bcc.code import from_offsets
from bcc.distance import distance
from bcc.search import SearchTask, canonicalize, orbit, run_search, symmetry_group


def test_canonicalize_orbit_oracle_n10():
    n = 10
    group = symmetry_group(n)
    assert len(group) == sum(1 for c in range(1, n, 2) if gcd(c, n) == 1) * (n // 2)
    a, b = (3, 5, 7), (1, 5, 9)
    related = any(tuple(sorted((c * s + t) % n for s in a)) == b for c, t in group)
    assert (canonicalize(n, a) == canonicalize(n, b)) == related


def test_canonicalize_idempotent_and_orbit_size():
    for n, S in [(10, (3, 5, 7)), (18, (5, 11, 15, 17)), (14, (1, 3))]:
        c = canonicalize(n, S)
        assert canonicalize(n, c) == c
        assert len(symmetry_group(n)) % len(orbit(n, S)) == 0
        assert c in orbit(n, S)


def test_reflection_in_group():
    assert canonicalize(18, (5, 11, 15, 17)) == canonicalize(18, tuple(-s for s in (5, 11, 15, 17)))


def test_search_18():
    hits = run_search(SearchTask(18, 4, 5))
    assert hits
    assert canonicalize(18, (5, 11, 15, 17)) in {h.offsets for h in hits}
    for h in hits:
        assert distance(from_offsets(18, h.offsets)) == h.d >= 5
        assert h.self_orthogonal
        assert h.prepared_state == "PlusZero"


def test_search_16_empty():
    assert run_search(SearchTask(16, 4, 5)) == []


def test_trivially_empty():
    task = SearchTask(18, 3, 5)
    assert task.trivially_empty
    assert run_search(task) == []
    with pytest.raises(ValueError):
        SearchTask(18, 10, 5)
    with pytest.raises(ValueError):
        SearchTask(17, 3, 3)


@pytest.mark.parametrize("n, size, d", [(14, 3, 4), (18, 4, 5), (12, 3, 3)])
def test_symmetry_reduction_complete(n, size, d):
    with_sym = {h.offsets for h in run_search(SearchTask(n, size, d))}
    without = {h.offsets for h in run_search(SearchTask(n, size, d, symmetry_reduce=False))}
    assert with_sym == without


def test_orbits_share_distance():
    for n, S in [(12, (1, 3, 7)), (14, (1, 3, 5))]:
        ds = {distance(from_offsets(n, T)) for T in orbit(n, S)}
        assert len(ds) == 1


def test_search_deterministic_across_jobs():
    task = SearchTask(14, 3, 3)
    assert run_search(task, jobs=1) == run_search(task, jobs=2)


def test_search_34_contains_known_class():
    hits = run_search(SearchTask(34, 6, 7))
    assert canonicalize(34, (1, 5, 7, 9, 15, 23)) in {h.offsets for h in hits}
