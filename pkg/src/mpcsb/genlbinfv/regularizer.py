"""Hybrid log-barrier / entropy regularizer and its adaptive weights."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


def phi(z, n, gamma):
    """Per-arm regularizer on (0, n]; the entropy part uses 0 log 0 = 0 at z = n."""
    z = np.asarray(z, dtype=np.float64)
    n = np.asarray(n, dtype=np.float64)
    r = z / n
    with np.errstate(divide="ignore", invalid="ignore"):
        barrier = r - 1.0 - np.log(r)
        s = 1.0 - r
        ent = np.where(s > 0.0, s * np.log(np.where(s > 0.0, s, 1.0)), 0.0)
    out = n * (barrier + gamma * (r + ent))
    return np.where(r <= 0.0, np.inf, out)


def phi_grad(z, n, gamma):
    z = np.asarray(z, dtype=np.float64)
    return 1.0 - n / z - gamma * np.log1p(-z / n)


def phi_hess(z, n, gamma):
    z = np.asarray(z, dtype=np.float64)
    return n / z**2 + gamma / (n - z)


@dataclass
class RegState:
    """Per-arm regularization weights beta_i(t).

    ``alpha_sum`` accumulates the alpha_i(s) of finished rounds, so
    :meth:`beta` is the weight for the round about to be played.
    """

    caps: np.ndarray
    gamma: float
    eps: np.ndarray = None
    alpha_sum: np.ndarray = field(default=None)

    def __post_init__(self):
        self.caps = np.asarray(self.caps, dtype=np.float64)
        if self.gamma <= 0:
            raise ValueError("gamma = log T must be positive (need T >= 2)")
        if self.eps is None:
            self.eps = self.caps / 2.0
        self.eps = np.broadcast_to(np.asarray(self.eps, dtype=np.float64), self.caps.shape).copy()
        if np.any(self.eps <= 0) or np.any(self.eps > self.caps / 2.0):
            raise ValueError("epsilon_i must lie in (0, n_i / 2]")
        if self.alpha_sum is None:
            self.alpha_sum = np.zeros_like(self.caps)

    @classmethod
    def for_horizon(cls, caps, T: int, eps=None) -> "RegState":
        if T < 2:
            raise ValueError("GenLBINFV needs a horizon T >= 2 (gamma = log T)")
        return cls(np.asarray(caps), math.log(T), eps)

    def beta(self) -> np.ndarray:
        return np.sqrt((1.0 + self.eps / self.caps) ** 2 + self.alpha_sum / self.gamma)


def regularizer_value_grad(x, reg: RegState) -> tuple[float, np.ndarray]:
    """psi(x) = sum_i beta_i phi_i(x_i) and its gradient at a strictly interior x."""
    x = np.asarray(x, dtype=np.float64)
    n = reg.caps
    if np.any(x <= 0.0) or np.any(x >= n):
        raise ValueError("regularizer is only differentiable on the open box (0, n_i)")
    beta = reg.beta()
    value = float(np.sum(beta * phi(x, n, reg.gamma)))
    return value, beta * phi_grad(x, n, reg.gamma)


def alpha_terms(a, x, k, q, caps, gamma) -> np.ndarray:
    """Per-arm increment alpha_i(t) of the beta accumulator."""
    a = np.asarray(a, dtype=np.float64)
    r = np.asarray(x, dtype=np.float64) / caps
    damp = np.minimum(1.0, 2.0 * (1.0 - r) / (r**2 * gamma))
    out = (a / caps) ** 2 * (np.asarray(k) - np.asarray(q)) ** 2 * damp
    return np.where(a > 0, out, 0.0)


def update_reg(reg: RegState, a, x, k, q) -> np.ndarray:
    """Accumulate alpha_i(t) for the finished round; returns the increments."""
    alpha = alpha_terms(a, x, k, q, reg.caps, reg.gamma)
    reg.alpha_sum = reg.alpha_sum + alpha
    return alpha
