"""Optimistic predictions q(t) of next-round arm losses."""

from __future__ import annotations

import numpy as np

from ..core import Observation


class Predictor:
    """``mode="ls"``: regularised running mean (1/2 + sum of losses) / (1 + pulls).

    ``mode="gd"``: q_i <- (1 - eta) q_i + eta k_i for played arms.
    """

    def __init__(self, d: int, mode: str = "ls", eta: float = 0.25):
        mode = mode.lower()
        if mode not in ("ls", "gd"):
            raise ValueError(f"unknown predictor {mode!r}")
        if mode == "gd" and not 0.0 < eta < 0.5:
            raise ValueError("GD step size must lie in (0, 1/2)")
        self.mode = mode
        self.eta = eta
        self.q = np.full(d, 0.5)
        self.loss_sum = np.zeros(d)
        self.pulls = np.zeros(d)

    def update(self, a, obs: Observation) -> None:
        a = np.asarray(a)
        played = a > 0
        sums = obs.sums
        self.loss_sum += sums
        self.pulls += a
        if self.mode == "ls":
            self.q = (0.5 + self.loss_sum) / (1.0 + self.pulls)
        else:
            k = np.where(played, sums / np.maximum(a, 1), self.q)
            self.q = np.where(played, (1.0 - self.eta) * self.q + self.eta * k, self.q)
