from __future__ import annotations

import numpy as np
import pytest


def span(rows: np.ndarray) -> set[bytes]:
    """Every GF(2) combination of ``rows`` by brute force."""
    rows = np.asarray(rows, dtype=np.uint8)
    out = set()
    for mask in range(1 << rows.shape[0]):
        acc = np.zeros(rows.shape[1], dtype=np.uint8)
        for i in range(rows.shape[0]):
            if mask >> i & 1:
                acc ^= rows[i]
        out.add(acc.tobytes())
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def criterion():
    """Record one acceptance line; the test still asserts on its own."""

    def record(label: str, ok: bool, detail: str) -> bool:
        ACCEPTANCE[label] = (ok, detail)
        print(f"{label}: {'PASS' if ok else 'FAIL'} ({detail})")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(ACCEPTANCE, key=lambda s: (int("".join(c for c in s.split()[1] if c.isdigit())), s)):
        ok, detail = ACCEPTANCE[label]
        terminalreporter.write_line(f"{label}: {'PASS' if ok else 'FAIL'} ({detail})")
