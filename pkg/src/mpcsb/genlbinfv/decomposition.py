"""Write a point of conv(A) as a convex combination of at most d + 1 actions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core import Explicit, InstanceSpec, Transport
from ..oracles import WarmStart, _explicit_argmin, ot_oracle
from .polytope import UnsupportedInstance

TIGHT = 1e-12


class DecompositionError(RuntimeError):
    pass


@dataclass(frozen=True)
class Decomposition:
    actions: tuple[np.ndarray, ...]
    weights: np.ndarray

    @property
    def atoms(self) -> list[tuple[np.ndarray, float]]:
        return [(a, float(w)) for a, w in zip(self.actions, self.weights)]

    def mean(self) -> np.ndarray:
        return np.sum([w * a for a, w in zip(self.actions, self.weights)], axis=0)


def _face_action(spec: InstanceSpec, cost: np.ndarray, warm: WarmStart) -> np.ndarray:
    if isinstance(spec, Transport):
        return ot_oracle(spec.supplies, spec.demands, cost.reshape(spec.shape), tie_break=False, warm=warm).ravel()
    if isinstance(spec, Explicit):
        return _explicit_argmin(spec.actions, cost)
    raise UnsupportedInstance(f"cannot decompose over {type(spec).__name__} instances")


def decompose(spec: InstanceSpec, x, tol: float = 1e-9, warm: WarmStart | None = None) -> Decomposition:
    """Greedy vertex peeling.

    The residual ``r`` (with remaining mass ``m``) always satisfies
    ``r / m`` in conv(A). Each step asks the linear oracle for an action on
    the smallest face containing ``r / m`` (cost +1 on coordinates at 0,
    -1 on coordinates at their cap), then removes as much of that action as
    keeps ``r / m`` inside the box. At least one more coordinate becomes
    tight per step, so the loop ends after at most d + 1 atoms.

    ``warm`` carries the simplex basis between the oracle calls (and across
    calls to this function).
    """
    warm = WarmStart() if warm is None else warm
    x = np.asarray(x, dtype=np.float64)
    caps = np.asarray(spec.caps, dtype=np.float64)
    r = x.copy()
    mass = 1.0
    actions, weights = [], []
    for _ in range(spec.d + 1):
        low = r <= TIGHT
        high = r >= caps * mass - TIGHT
        v = _face_action(spec, low.astype(np.float64) - high.astype(np.float64), warm)
        vf = v.astype(np.float64)
        lam = mass
        pos = vf > 0
        if pos.any():
            lam = min(lam, float(np.min(r[pos] / vf[pos])))
        below = vf < caps
        if below.any():
            lam = min(lam, float(np.min((caps[below] * mass - r[below]) / (caps[below] - vf[below]))))
        if lam >= mass - 1e-14:
            lam = mass
        lam = max(lam, 0.0)
        if lam > 0.0:
            actions.append(v)
            weights.append(lam)
        r = r - lam * vf
        mass -= lam
        if mass <= 0.0:
            break
    if mass > 1e-12:
        raise DecompositionError(f"unexplained mass {mass:.3e} after {spec.d + 1} atoms")
    w = np.array(weights)
    w = w / w.sum()
    dec = Decomposition(tuple(actions), w)
    err = float(np.abs(dec.mean() - x).max())
    if err > tol:
        raise DecompositionError(f"reconstruction error {err:.3e} exceeds {tol:.1e}")
    return dec


def sample_action(dec: Decomposition, rng: np.random.Generator) -> np.ndarray:
    """Pick atom k with probability lambda_k."""
    if len(dec.actions) == 1:
        return dec.actions[0]
    cum = np.cumsum(dec.weights)
    k = int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))
    return dec.actions[min(k, len(dec.actions) - 1)]
