"""Shared fixtures and independent reference implementations for the tests.

The helpers here deliberately avoid the package's own enumerators and
oracles so that they can serve as ground truth.
"""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from mpcsb import Transport

SECTION_INSTANCE = Transport((1, 4, 5), (4, 6))


def transport_points(u, v):
    """Every integer plan with marginals (u, v), by filtering a cell-wise product."""
    m, n = len(u), len(v)
    ranges = [range(min(u[i], v[j]) + 1) for i in range(m) for j in range(n)]
    out = []
    for cells in itertools.product(*ranges):
        plan = np.array(cells).reshape(m, n)
        if np.array_equal(plan.sum(axis=1), u) and np.array_equal(plan.sum(axis=0), v):
            out.append(tuple(cells))
    return out


def knapsack_points(w, W):
    ranges = [range(W // wi + 1) for wi in w]
    return [cells for cells in itertools.product(*ranges) if np.dot(cells, w) <= W]


def count_transport(u, v):
    """Number of integer plans, by recursion over rows and column compositions."""
    u, v = list(u), tuple(v)
    if not u:
        return int(all(x == 0 for x in v))
    total = 0
    first, rest = u[0], u[1:]

    def rows(k, left, prefix):
        if k == len(v) - 1:
            if left <= v[k]:
                yield prefix + (left,)
            return
        for x in range(min(left, v[k]) + 1):
            yield from rows(k + 1, left - x, prefix + (x,))

    for row in rows(0, first, ()):
        total += count_transport(rest, tuple(a - b for a, b in zip(v, row)))
    return total


def exact_min(points, rho):
    """Smallest objective and the lexicographically first minimiser."""
    rho = np.asarray(rho, dtype=np.float64)
    best = None
    for p in sorted(points):
        val = float(np.dot(p, rho))
        if best is None or val < best[1]:
            best = (p, val)
    return best


def random_transport(rng, max_total=8, max_side=3):
    m = int(rng.integers(1, max_side + 1))
    n = int(rng.integers(1, max_side + 1))
    total = int(rng.integers(max(m, n), max_total + 1))

    def composition(k):
        cuts = np.sort(rng.choice(np.arange(1, total), size=k - 1, replace=False)) if k > 1 else []
        parts = np.diff(np.concatenate([[0], cuts, [total]]))
        return tuple(int(x) for x in parts)

    return Transport(composition(m), composition(n))


@pytest.fixture
def section_instance():
    return SECTION_INSTANCE


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one (criterion, passed, detail) entry per acceptance check, printed at the end
ACCEPTANCE: list[tuple[str, bool, str]] = []


def record(criterion: str, passed: bool, detail: str) -> bool:
    ACCEPTANCE.append((criterion, bool(passed), detail))
    print(f"{'PASS' if passed else 'FAIL'} {criterion}: {detail}", flush=True)
    return passed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, passed, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'} {criterion}: {detail}")
