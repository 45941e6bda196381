"""Exact linear minimisers over combinatorial action sets.

Transport problems are solved with the transportation simplex
(northwest-corner basis, potentials, cycle pivots, Bland's rule). Knapsack
problems use an unbounded-knapsack dynamic program. Ties are always broken
towards the lexicographically smallest action.
"""

from __future__ import annotations

from typing import Iterator, Sequence

import numpy as np

from .core import Explicit, InstanceSpec, Knapsack, Transport, action_objective, lex_key

_RTOL = 1e-12


class EnumerationLimitExceeded(RuntimeError):
    pass


# --------------------------------------------------------------------------
# transportation simplex


def _northwest_corner(u: Sequence[int], v: Sequence[int]):
    m, n = len(u), len(v)
    flow = [[0] * n for _ in range(m)]
    basis = []
    s, r = list(u), list(v)
    i = j = 0
    while True:
        q = min(s[i], r[j])
        flow[i][j] = q
        s[i] -= q
        r[j] -= q
        basis.append((i, j))
        if i == m - 1 and j == n - 1:
            break
        if i == m - 1:
            j += 1
        elif j == n - 1 or s[i] == 0:
            i += 1
        else:
            j += 1
    return flow, basis


def _tree(cost, basis, m, n):
    """Potentials, parents and depths of the basis tree rooted at row 0.

    Nodes 0..m-1 are rows and m..m+n-1 columns; ``pot`` holds u_i then v_j
    with u_0 = 0 and u_i + v_j = c_ij on every basic cell.
    """
    adj = [[] for _ in range(m + n)]
    for i, j in basis:
        adj[i].append(m + j)
        adj[m + j].append(i)
    pot = [None] * (m + n)
    parent = [-1] * (m + n)
    depth = [0] * (m + n)
    pot[0] = 0 * cost[0][0]
    stack = [0]
    while stack:
        node = stack.pop()
        for nb in adj[node]:
            if pot[nb] is None:
                if node < m:
                    pot[nb] = cost[node][nb - m] - pot[node]
                else:
                    pot[nb] = cost[nb][node - m] - pot[node]
                parent[nb] = node
                depth[nb] = depth[node] + 1
                stack.append(nb)
    return pot, parent, depth


def _cycle(parent, depth, m, i0, j0):
    """Basis cells on the tree path from column ``j0`` to row ``i0``, in order."""

    def cell(a, b):
        return (a, b - m) if a < m else (b, a - m)

    head, tail = [], []
    a, b = m + j0, i0
    while a != b:
        if depth[a] >= depth[b]:
            head.append(cell(a, parent[a]))
            a = parent[a]
        else:
            tail.append(cell(b, parent[b]))
            b = parent[b]
    return head + tail[::-1]


def _simplex(cost, flow, basis, m, n, tol, allowed=None, max_iter=100000):
    """Pivot until no allowed nonbasic cell has reduced cost below ``-tol``.

    Works on any exact-or-float number type in ``cost``; ``flow`` and
    ``basis`` are updated in place. Returns the final potentials.
    """
    in_basis = [[False] * n for _ in range(m)]
    for i, j in basis:
        in_basis[i][j] = True
    for _ in range(max_iter):
        pot, parent, depth = _tree(cost, basis, m, n)
        pv = pot[m:]
        entering = None
        for i in range(m):
            ci, ui, bi = cost[i], pot[i], in_basis[i]
            ai = None if allowed is None else allowed[i]
            for j in range(n):
                if bi[j] or (ai is not None and not ai[j]):
                    continue
                if ci[j] - ui - pv[j] < -tol:
                    entering = (i, j)
                    break
            if entering is not None:
                break
        if entering is None:
            return pot[:m], pv
        i0, j0 = entering
        path = _cycle(parent, depth, m, i0, j0)
        minus = path[0::2]
        plus = path[1::2]
        theta = min(flow[i][j] for i, j in minus)
        leaving = min(c for c in minus if flow[c[0]][c[1]] == theta)
        flow[i0][j0] += theta
        for i, j in minus:
            flow[i][j] -= theta
        for i, j in plus:
            flow[i][j] += theta
        in_basis[leaving[0]][leaving[1]] = False
        in_basis[i0][j0] = True
        basis[basis.index(leaving)] = (i0, j0)
    raise RuntimeError("transport simplex did not terminate")


class WarmStart:
    """Basic feasible plan carried between oracle calls on the same marginals."""

    def __init__(self):
        self.key = None
        self.flow = None
        self.basis = None


def ot_oracle(u, v, costs, tie_break: bool = True, warm: WarmStart | None = None) -> np.ndarray:
    """Integer transport plan minimising ``sum(plan * costs)``.

    Returns an ``(len(u), len(v))`` int array. With ``tie_break`` the
    lexicographically smallest optimal plan (row-major) is returned;
    otherwise some optimal vertex. ``warm`` starts the pivots from the
    basis left by a previous call; with ``tie_break`` set the result does
    not depend on it.
    """
    u = [int(x) for x in u]
    v = [int(y) for y in v]
    if sum(u) != sum(v):
        raise ValueError(f"unbalanced marginals: sum(u)={sum(u)} != sum(v)={sum(v)}")
    if min(u + v) < 0:
        raise ValueError("marginals must be nonnegative")
    m, n = len(u), len(v)
    c = np.asarray(costs, dtype=np.float64).reshape(m, n)
    if not np.all(np.isfinite(c)):
        raise ValueError("costs must be finite")
    cost = c.tolist()
    scale = float(np.abs(c).max()) if c.size else 0.0
    tol = _RTOL * scale
    key = (tuple(u), tuple(v))
    if warm is not None and warm.key == key:
        flow = [row[:] for row in warm.flow]
        basis = list(warm.basis)
    else:
        flow, basis = _northwest_corner(u, v)
    pu, pv = _simplex(cost, flow, basis, m, n, tol)
    if tie_break:
        allowed = [[cost[i][j] - pu[i] - pv[j] <= tol for j in range(n)] for i in range(m)]
        basic = set(basis)
        if any(allowed[i][j] and (i, j) not in basic for i in range(m) for j in range(n)):
            # Several optimal plans: minimise a lexicographic weight over the
            # optimal face in exact integer arithmetic. Entries are bounded
            # by B - 1, so base-B weights order plans lexicographically.
            B = max(u + v) + 1
            d = m * n
            lex = [[B ** (d - 1 - (i * n + j)) for j in range(n)] for i in range(m)]
            _simplex(lex, flow, basis, m, n, 0, allowed=allowed)
    if warm is not None:
        warm.key, warm.flow, warm.basis = key, [row[:] for row in flow], list(basis)
    return np.array(flow, dtype=np.int64)


# --------------------------------------------------------------------------
# knapsack


def knapsack_oracle(w, W: int, values) -> np.ndarray:
    """Counts maximising ``a @ values`` subject to ``a @ w <= W``.

    Unbounded-knapsack DP over item suffixes and capacities 0..W; among
    optimal solutions the lexicographically smallest is returned.
    """
    w = [int(x) for x in w]
    W = int(W)
    vals = [float(x) for x in values]
    if len(vals) != len(w):
        raise ValueError("weights and values differ in length")
    if any(x < 1 for x in w) or W < 0:
        raise ValueError("need w_i >= 1 and W >= 0")
    d = len(w)
    # best[i][c]: optimum using items i.. with capacity c
    best = [[0.0] * (W + 1) for _ in range(d + 1)]
    for i in range(d - 1, -1, -1):
        wi, vi, nxt, cur = w[i], vals[i], best[i + 1], best[i]
        for cap in range(W + 1):
            b = nxt[cap]
            k = 1
            while k * wi <= cap:
                cand = k * vi + nxt[cap - k * wi]
                if cand > b:
                    b = cand
                k += 1
            cur[cap] = b
    scale = max([abs(x) for x in vals] + [0.0]) * max(1, W)
    tol = _RTOL * scale
    a = [0] * d
    cap = W
    for i in range(d):
        target = best[i][cap]
        k = 0
        while k * w[i] <= cap:
            if k * vals[i] + best[i + 1][cap - k * w[i]] >= target - tol:
                break
            k += 1
        a[i] = k
        cap -= k * w[i]
    return np.array(a, dtype=np.int64)


# --------------------------------------------------------------------------
# dispatch and enumeration


def _explicit_argmin(actions, rho) -> np.ndarray:
    objs = [action_objective(a, rho) for a in actions]
    lo = min(objs)
    tol = _RTOL * max([abs(x) for x in objs] + [0.0])
    # actions are stored in lexicographic order
    for a, val in zip(actions, objs):
        if val <= lo + tol:
            return np.array(a, dtype=np.int64)
    raise AssertionError("unreachable")


def argmin_action(spec: InstanceSpec, rho, warm: WarmStart | None = None) -> np.ndarray:
    """The action minimising ``sum_i a_i rho_i`` over ``spec``'s action set.

    ``warm`` (transport only) reuses the previous simplex basis.
    """
    rho = np.asarray(rho, dtype=np.float64).ravel()
    if rho.size != spec.d:
        raise ValueError(f"rho has length {rho.size}, instance has d={spec.d}")
    if isinstance(spec, Transport):
        return ot_oracle(spec.supplies, spec.demands, rho.reshape(spec.shape), warm=warm).ravel()
    if isinstance(spec, Knapsack):
        return knapsack_oracle(spec.weights, spec.capacity, -rho)
    if isinstance(spec, Explicit):
        return _explicit_argmin(spec.actions, rho)
    raise TypeError(f"unsupported instance {type(spec).__name__}")


def _iter_transport(u, v) -> Iterator[tuple[int, ...]]:
    m, n = len(u), len(v)
    cells = [0] * (m * n)
    rows = list(u)
    cols = list(v)

    def rec(k):
        if k == m * n:
            yield tuple(cells)
            return
        i, j = divmod(k, n)
        if j == n - 1:
            # last cell of a row takes whatever supply remains
            lo = hi = rows[i]
            if lo > cols[j]:
                return
        else:
            lo, hi = 0, min(rows[i], cols[j])
        if i == m - 1:
            # last row must exactly meet the remaining demand
            if cols[j] < lo or cols[j] > hi:
                return
            lo = hi = cols[j]
        for val in range(lo, hi + 1):
            cells[k] = val
            rows[i] -= val
            cols[j] -= val
            yield from rec(k + 1)
            rows[i] += val
            cols[j] += val
        cells[k] = 0

    yield from rec(0)


def _iter_knapsack(w, W) -> Iterator[tuple[int, ...]]:
    d = len(w)
    cells = [0] * d

    def rec(k, cap):
        if k == d:
            yield tuple(cells)
            return
        for val in range(cap // w[k] + 1):
            cells[k] = val
            yield from rec(k + 1, cap - val * w[k])
        cells[k] = 0

    yield from rec(0, W)


def iter_actions(spec: InstanceSpec) -> Iterator[tuple[int, ...]]:
    """Lazily yield every action in lexicographic order."""
    if isinstance(spec, Transport):
        return _iter_transport(spec.supplies, spec.demands)
    if isinstance(spec, Knapsack):
        return _iter_knapsack(spec.weights, spec.capacity)
    if isinstance(spec, Explicit):
        return iter(spec.actions)
    raise TypeError(f"unsupported instance {type(spec).__name__}")


def enumerate_actions(spec: InstanceSpec, limit: int = 100_000) -> list[np.ndarray]:
    """All integer points of the action set, in lexicographic order.

    Raises EnumerationLimitExceeded rather than truncating.
    """
    out = []
    for a in iter_actions(spec):
        if len(out) >= limit:
            raise EnumerationLimitExceeded(f"action set has more than {limit} actions")
        out.append(np.array(a, dtype=np.int64))
    return out


def brute_force_argmin(spec: InstanceSpec, rho, limit: int = 100_000) -> tuple[np.ndarray, float]:
    """Minimiser and minimum by full enumeration (lexicographic ties)."""
    best, best_val = None, None
    for a in enumerate_actions(spec, limit):
        val = action_objective(a, rho)
        if best_val is None or val < best_val:
            best, best_val = a, val
    return best, best_val


def is_lex_smaller(a, b) -> bool:
    return lex_key(a) < lex_key(b)
