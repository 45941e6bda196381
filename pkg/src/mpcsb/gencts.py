"""Generalized combinatorial Thompson sampling with Beta posteriors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import InstanceSpec, LossTable, Observation, linear_loss
from .environments import Environment, observe
from .oracles import WarmStart, argmin_action


@dataclass(frozen=True)
class BetaPosterior:
    p: float
    q: float

    @property
    def n_obs(self) -> int:
        return int(round(self.p + self.q - 2))

    @property
    def mean(self) -> float:
        return self.p / (self.p + self.q)


@dataclass
class RoundRecord:
    t: int
    action: np.ndarray
    loss: float
    table: LossTable | None = None
    clean: LossTable | None = None
    theta: np.ndarray | None = None
    x: np.ndarray | None = None
    info: dict | None = None


def sample_beta(rng: np.random.Generator, p, q) -> np.ndarray:
    """Beta(p, q) draws as X / (X + Y) with X ~ Gamma(p), Y ~ Gamma(q)."""
    x = rng.standard_gamma(p)
    y = rng.standard_gamma(q)
    return x / (x + y)


class GenCTS:
    """Thompson sampling over per-arm Beta posteriors; actions come from the oracle.

    Every observed loss is binarised by a Bernoulli draw before updating the
    posterior, so each sample counts once regardless of which slot it came
    from.
    """

    name = "gencts"

    def __init__(self, spec: InstanceSpec, rng=None):
        self.spec = spec
        self.rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
        self.p = np.ones(spec.d)
        self.q = np.ones(spec.d)
        self.n_obs = np.zeros(spec.d, dtype=np.int64)
        self._warm = WarmStart()
        self.theta: np.ndarray | None = None

    def posterior(self, i: int) -> BetaPosterior:
        return BetaPosterior(float(self.p[i]), float(self.q[i]))

    def select_action(self) -> tuple[np.ndarray, np.ndarray]:
        theta = sample_beta(self.rng, self.p, self.q)
        self.theta = theta
        return argmin_action(self.spec, theta, warm=self._warm), theta

    def update(self, obs: Observation) -> None:
        for i, vals in enumerate(obs.values):
            if vals.size == 0:
                continue
            if np.any(vals < 0.0) or np.any(vals > 1.0):
                raise ValueError(f"losses for arm {i} outside [0, 1]")
            ones = int(np.count_nonzero(self.rng.random(vals.size) < vals))
            self.p[i] += ones
            self.q[i] += vals.size - ones
            self.n_obs[i] += vals.size

    # uniform interface used by the harness
    def act(self, t: int) -> np.ndarray:
        return self.select_action()[0]

    def feed(self, obs: Observation) -> None:
        self.update(obs)

    def record_extras(self) -> dict:
        return {"theta": self.theta}

    def run_round(self, env: Environment, t: int) -> RoundRecord:
        return play_round(self, env, t)


def play_round(algo, env: Environment, t: int) -> RoundRecord:
    """One protocol round: draw losses, act, observe the served table, learn."""
    clean, table = env.draw_round(t)
    a = algo.act(t)
    obs = observe(table, a, t)
    algo.feed(obs)
    extras = algo.record_extras()
    return RoundRecord(
        t=t,
        action=a,
        loss=linear_loss(a, table),
        table=table,
        clean=clean,
        theta=extras.get("theta"),
        x=extras.get("x"),
        info=extras.get("info"),
    )
