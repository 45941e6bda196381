from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core import InstanceSpec, Observation
from ..environments import Environment
from ..gencts import RoundRecord, play_round
from ..oracles import WarmStart
from .decomposition import Decomposition, decompose, sample_action
from .polytope import polytope
from .predictor import Predictor
from .regularizer import RegState, update_reg
from .solver import FractionalPoint, solve_oftrl


@dataclass(frozen=True)
class LossEstimate:
    ell_hat: np.ndarray
    k: np.ndarray  # mean observed loss; q_i for arms not played


def estimate_loss(x, a, obs: Observation, q) -> LossEstimate:
    """ell_hat_i = q_i + (a_i / x_i)(k_i - q_i), unbiased for E[sum_j L_ij | x] / x_i."""
    x = np.asarray(x, dtype=np.float64)
    a = np.asarray(a, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    played = a > 0
    k = np.where(played, obs.sums / np.maximum(a, 1.0), q)
    return LossEstimate(q + (a / x) * (k - q), k)


class GenLBINFV:
    """OFTRL over conv(A) with the hybrid regularizer and optimistic predictions.

    Each round solves for a fractional point x(t), decomposes it into
    actions and samples one so that E[a(t) | x(t)] = x(t).
    """

    name = "genlbinfv"

    def __init__(
        self,
        spec: InstanceSpec,
        T: int,
        predictor: str = "ls",
        eta: float = 0.25,
        eps=None,
        rng=None,
        tol: float = 1e-8,
        max_iter: int = 200,
    ):
        polytope(spec)  # rejects unsupported kinds up front
        self.spec = spec
        self.T = T
        self.rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
        self.reg = RegState.for_horizon(spec.caps, T, eps)
        self.pred = Predictor(spec.d, predictor, eta)
        self.cumulative = np.zeros(spec.d)
        self.tol = tol
        self.max_iter = max_iter
        self._warm = WarmStart()
        self.point: FractionalPoint | None = None
        self.decomposition: Decomposition | None = None
        self.action: np.ndarray | None = None
        self.last_alpha: np.ndarray | None = None
        self.last_estimate: LossEstimate | None = None

    @property
    def q(self) -> np.ndarray:
        return self.pred.q

    def beta(self) -> np.ndarray:
        return self.reg.beta()

    def act(self, t: int) -> np.ndarray:
        x0 = None if self.point is None else self.point.x
        self.point = solve_oftrl(
            self.spec, self.cumulative, self.pred.q, self.reg, x0=x0, tol=self.tol, max_iter=self.max_iter
        )
        self.decomposition = decompose(self.spec, self.point.x, warm=self._warm)
        self.action = sample_action(self.decomposition, self.rng)
        return self.action

    def feed(self, obs: Observation) -> None:
        a = obs.action
        x = self.point.interior
        q = self.pred.q
        est = estimate_loss(x, a, obs, q)
        self.cumulative = self.cumulative + est.ell_hat
        self.last_alpha = update_reg(self.reg, a, x, est.k, q)
        self.last_estimate = est
        self.pred.update(a, obs)

    def record_extras(self) -> dict:
        return {
            "x": self.point.x,
            "info": {
                "iterations": self.point.iterations,
                "residual": self.point.residual,
                "atoms": len(self.decomposition.actions),
            },
        }

    def run_round(self, env: Environment, t: int) -> RoundRecord:
        return play_round(self, env, t)
