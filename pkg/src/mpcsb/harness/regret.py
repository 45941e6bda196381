"""Comparator actions, pseudo-regret and per-instance diagnostics."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from ..core import InstanceSpec, linear_loss, support
from ..environments import Environment
from ..oracles import EnumerationLimitExceeded, argmin_action, brute_force_argmin, enumerate_actions

ENUMERATION_LIMIT = 20_000


class TrialError(RuntimeError):
    def __init__(self, trial: int | None, t: int, cause: BaseException):
        where = f"trial {trial}" if trial is not None else "run"
        super().__init__(f"{where} failed at round {t}: {type(cause).__name__}: {cause}")
        self.trial = trial
        self.round = t


def compute_optimal_action(spec: InstanceSpec, means, verify: bool = True) -> np.ndarray:
    """Oracle minimiser of a . means, cross-checked by enumeration when small."""
    a_star = argmin_action(spec, means)
    if verify:
        try:
            _, best = brute_force_argmin(spec, means, limit=ENUMERATION_LIMIT)
        except EnumerationLimitExceeded:
            return a_star
        got = float(a_star @ np.asarray(means))
        if got > best + 1e-9 * max(1.0, abs(best)):
            raise AssertionError(f"oracle value {got} exceeds enumerated optimum {best}")
    return a_star


def pseudo_regret_increment(means, a, a_star) -> float:
    means = np.asarray(means, dtype=np.float64)
    return float((np.asarray(a) - np.asarray(a_star)) @ means)


@dataclass
class Diagnostics:
    a_star: np.ndarray
    gaps: np.ndarray | None  # Delta_i; None when unavailable
    variances: np.ndarray | None
    suboptimal_arms: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "a_star": self.a_star.tolist(),
            "gaps": None if self.gaps is None else self.gaps.tolist(),
            "gaps_status": "available" if self.gaps is not None else "unavailable",
            "variances": None if self.variances is None else self.variances.tolist(),
            "suboptimal_arms": self.suboptimal_arms,
        }


def arm_gaps(spec: InstanceSpec, means, a_star, limit: int = ENUMERATION_LIMIT) -> np.ndarray | None:
    """Delta_i = min over actions with a_i >= 1 of a . means, minus a* . means."""
    means = np.asarray(means, dtype=np.float64)
    try:
        actions = enumerate_actions(spec, limit)
    except EnumerationLimitExceeded:
        return None
    A = np.array(actions)
    vals = A @ means
    base = float(np.asarray(a_star) @ means)
    gaps = np.empty(spec.d)
    for i in range(spec.d):
        gaps[i] = vals[A[:, i] >= 1].min() - base
    return np.maximum(gaps, 0.0)


def diagnostics(spec: InstanceSpec, env: Environment, T: int) -> Diagnostics:
    a_star = compute_optimal_action(spec, env.horizon_means(T))
    j_star = sorted(set(range(spec.d)) - support(a_star))
    if env.schedule.is_identity:
        return Diagnostics(a_star, arm_gaps(spec, env.means, a_star), env.variances, j_star)
    return Diagnostics(a_star, None, None, j_star)


@dataclass
class TrialRun:
    regret: np.ndarray  # cumulative pseudo-regret
    realized: np.ndarray  # cumulative realized-loss regret against a*
    a_star: np.ndarray
    runtime: float
    corruption: float
    actions: np.ndarray | None = None


def _round_means_table(env: Environment, T: int) -> np.ndarray:
    if env.schedule.is_identity:
        return np.broadcast_to(env.means, (T, env.spec.d))
    return np.array([env.round_means(t) for t in range(1, T + 1)])


def run_algorithm(
    algo,
    env: Environment,
    T: int,
    means=None,
    a_star=None,
    trial: int | None = None,
    keep_actions: bool = False,
    callback=None,
) -> TrialRun:
    """Play ``T`` rounds and account regret against a fixed comparator.

    ``means`` overrides the per-round expected losses used for
    pseudo-regret (default: the environment's, schedule included). The
    comparator defaults to the minimiser of the horizon-averaged means.
    ``callback(record, algo)`` is invoked after every round.
    """
    spec = env.spec
    round_means = _round_means_table(env, T) if means is None else np.broadcast_to(np.asarray(means), (T, spec.d))
    if a_star is None:
        a_star = compute_optimal_action(spec, round_means.mean(axis=0), verify=False)
    a_star = np.asarray(a_star)
    inc = np.empty(T)
    realized = np.empty(T)
    actions = np.empty((T, spec.d), dtype=np.int64) if keep_actions else None
    start = time.perf_counter()
    t = 0
    try:
        for t in range(1, T + 1):
            rec = algo.run_round(env, t)
            a = rec.action
            inc[t - 1] = (a - a_star) @ round_means[t - 1]
            realized[t - 1] = rec.loss - linear_loss(a_star, rec.table)
            if keep_actions:
                actions[t - 1] = a
            if callback is not None:
                callback(rec, algo)
    except Exception as exc:
        raise TrialError(trial, t, exc) from exc
    return TrialRun(
        regret=np.cumsum(inc),
        realized=np.cumsum(realized),
        a_star=a_star,
        runtime=time.perf_counter() - start,
        corruption=env.corruption,
        actions=actions,
    )
