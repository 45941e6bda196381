"""conv(A) as an affine subspace intersected with the box [0, n]."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import null_space

from ..core import Explicit, InstanceSpec, Knapsack, Transport, lex_key


class UnsupportedInstance(ValueError):
    pass


@dataclass(frozen=True)
class Polytope:
    """{x : E x = f, 0 <= x <= n}, with coordinates pinned by E split off.

    ``basis`` is an orthonormal basis of the directions in which the free
    coordinates can move; ``start`` is a point of the relative interior.
    """

    E: np.ndarray
    f: np.ndarray
    caps: np.ndarray
    fixed: np.ndarray  # bool mask
    free: np.ndarray  # int indices
    basis: np.ndarray  # (len(free), k)
    start: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def residual(self, x) -> float:
        return float(np.abs(self.E @ np.asarray(x) - self.f).max(initial=0.0))

    def project(self, x) -> np.ndarray:
        """Nearest point of the affine hull (free coordinates moved only)."""
        x = np.array(x, dtype=np.float64)
        x[self.fixed] = self.start[self.fixed]
        B = self.basis
        dev = x[self.free] - self.start[self.free]
        x[self.free] = self.start[self.free] + B @ (B.T @ dev)
        return x


def _transport_polytope(spec: Transport) -> Polytope:
    u = np.array(spec.supplies, dtype=np.float64)
    v = np.array(spec.demands, dtype=np.float64)
    m, n = spec.shape
    E = np.zeros((m + n, m * n))
    for x in range(m):
        E[x, x * n : (x + 1) * n] = 1.0
    for y in range(n):
        E[m + y, y::n] = 1.0
    f = np.concatenate([u, v])
    S = u.sum()
    lo = np.maximum(0.0, np.add.outer(u, v) - S).ravel()
    hi = np.minimum.outer(u, v).ravel()
    fixed = lo == hi
    start = (np.outer(u, v) / S).ravel()
    return _assemble(E, f, np.asarray(spec.caps, dtype=np.float64), fixed, start)


def _assemble(E, f, caps, fixed, start) -> Polytope:
    free = np.flatnonzero(~fixed)
    if free.size:
        basis = null_space(E[:, free])
    else:
        basis = np.zeros((0, 0))
    start = start.copy()
    start[fixed] = caps[fixed]
    return Polytope(E, f, caps, fixed, free, basis, start)


def _box_vertices(start, free, basis, caps, limit=200_000):
    """Vertices of {start + B y} intersected with the box, restricted to free coords."""
    k = basis.shape[1]
    if k == 0:
        return [start.copy()]
    verts = {}
    count = 0
    for rows in itertools.combinations(range(free.size), k):
        M = basis[list(rows)]
        if abs(np.linalg.det(M)) < 1e-9:
            continue
        for bounds in itertools.product((0, 1), repeat=k):
            count += 1
            if count > limit:
                raise UnsupportedInstance("explicit hull too large to verify")
            target = np.array([caps[free[r]] * b for r, b in zip(rows, bounds)])
            y = np.linalg.solve(M, target - start[free[list(rows)]])
            xf = start[free] + basis @ y
            if np.all(xf >= -1e-9) and np.all(xf <= caps[free] + 1e-9):
                x = start.copy()
                x[free] = xf
                verts[tuple(np.round(x, 9))] = x
    return list(verts.values())


def _explicit_polytope(spec: Explicit) -> Polytope:
    A = np.array(spec.actions, dtype=np.float64)
    caps = np.asarray(spec.caps, dtype=np.float64)
    start = A.mean(axis=0)
    dirs = A - start
    fixed = np.all(dirs == 0.0, axis=0)
    # equality constraints: orthogonal complement of the action differences
    _, s, vt = np.linalg.svd(dirs, full_matrices=True)
    rank = int(np.sum(s > 1e-9 * max(1.0, s.max(initial=0.0))))
    E = vt[rank:]
    f = E @ start
    poly = _assemble(E, f, caps, fixed, start)
    members = {lex_key(a) for a in spec.actions}
    for vert in _box_vertices(poly.start, poly.free, poly.basis, caps):
        key = tuple(int(round(c)) for c in vert)
        if not np.allclose(vert, key, atol=1e-7) or key not in members:
            raise UnsupportedInstance(
                "explicit action set is not the integer points of its affine hull within the "
                f"cap box (box vertex {np.round(vert, 6).tolist()} is not an action)"
            )
    return poly


@lru_cache(maxsize=64)
def polytope(spec: InstanceSpec) -> Polytope:
    """Constraint description of conv(A) for the supported instance kinds."""
    if isinstance(spec, Transport):
        return _transport_polytope(spec)
    if isinstance(spec, Explicit):
        return _explicit_polytope(spec)
    if isinstance(spec, Knapsack):
        raise UnsupportedInstance(
            "knapsack hulls have no compact description; GenLBINFV supports transport and explicit instances"
        )
    raise UnsupportedInstance(f"unsupported instance {type(spec).__name__}")
