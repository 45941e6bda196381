"""Binary-CSB baselines obtained by giving every truck its own supplier node.

Each duplicated arm (truck, demander) keeps its own statistics even though
all trucks of one supplier share a loss distribution on a given edge.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import InstanceSpec, Observation, Transport
from .environments import Environment
from .gencts import GenCTS, RoundRecord, play_round
from .genlbinfv import GenLBINFV


_EMPTY = np.empty(0)


@dataclass(frozen=True)
class DuplicatedInstance:
    original: Transport
    expanded: Transport
    edge_map: np.ndarray  # expanded arm -> original arm
    truck_owner: np.ndarray  # truck index -> original supplier
    truck_rank: np.ndarray  # truck index -> position among its supplier's trucks

    @property
    def d_expanded(self) -> int:
        return self.expanded.d

    def pullback(self, a_expanded) -> np.ndarray:
        """Original action with a_xy = number of x-trucks sent to y."""
        return np.bincount(self.edge_map, weights=np.asarray(a_expanded), minlength=self.original.d).astype(
            np.int64
        )

    def expand_observation(self, a_expanded, obs: Observation) -> Observation:
        """Hand each dispatched truck its own slot of the original edge.

        Trucks of one supplier take slots of an edge in truck-index order.
        """
        a_expanded = np.asarray(a_expanded)
        used = np.zeros(self.original.d, dtype=np.int64)
        rows = []
        for e in range(self.expanded.d):
            if a_expanded[e] == 0:
                rows.append(_EMPTY)
                continue
            orig = self.edge_map[e]
            slot = used[orig]
            used[orig] += 1
            rows.append(obs.values[orig][slot : slot + 1])
        return Observation(obs.round, a_expanded.astype(np.int64), tuple(rows))


def duplicate_instance(spec: InstanceSpec) -> DuplicatedInstance:
    if not isinstance(spec, Transport):
        raise TypeError("only transport instances can be duplicated")
    owner = np.repeat(np.arange(len(spec.supplies)), spec.supplies)
    rank = np.concatenate([np.arange(u) for u in spec.supplies])
    n_dem = len(spec.demands)
    expanded = Transport((1,) * int(owner.size), spec.demands)
    edge_map = (owner[:, None] * n_dem + np.arange(n_dem)[None, :]).ravel()
    return DuplicatedInstance(spec, expanded, edge_map, owner, rank)


class Duplicated:
    """Run a learner on the expanded instance, presenting original-coordinate actions."""

    def __init__(self, dup: DuplicatedInstance, inner):
        self.dup = dup
        self.inner = inner
        self.spec = dup.original
        self.name = f"dup_{inner.name}"
        self._expanded_action = None

    def act(self, t: int) -> np.ndarray:
        self._expanded_action = self.inner.act(t)
        return self.dup.pullback(self._expanded_action)

    def feed(self, obs: Observation) -> None:
        self.inner.feed(self.dup.expand_observation(self._expanded_action, obs))

    def record_extras(self) -> dict:
        extras = dict(self.inner.record_extras())
        extras["expanded_action"] = self._expanded_action
        return extras

    def run_round(self, env: Environment, t: int) -> RoundRecord:
        return play_round(self, env, t)


def duplicated_cts(spec: Transport, rng=None) -> Duplicated:
    dup = duplicate_instance(spec)
    return Duplicated(dup, GenCTS(dup.expanded, rng))


def duplicated_lbinfv(spec: Transport, T: int, predictor: str = "ls", rng=None, **kwargs) -> Duplicated:
    dup = duplicate_instance(spec)
    return Duplicated(dup, GenLBINFV(dup.expanded, T, predictor=predictor, rng=rng, **kwargs))


def _run(algo, env: Environment, T: int, means) -> np.ndarray:
    from .harness.regret import run_algorithm

    return run_algorithm(algo, env, T, means).regret


def run_duplicated_cts(dup: DuplicatedInstance, env: Environment, T: int, rng=None, means=None) -> np.ndarray:
    """Cumulative pseudo-regret curve of duplicated CTS on ``env``."""
    return _run(Duplicated(dup, GenCTS(dup.expanded, rng)), env, T, means)


def run_duplicated_lbinfv(
    dup: DuplicatedInstance, env: Environment, T: int, predictor: str = "ls", rng=None, means=None, **kwargs
) -> np.ndarray:
    """Cumulative pseudo-regret curve of duplicated LBINFV on ``env``."""
    inner = GenLBINFV(dup.expanded, T, predictor=predictor, rng=rng, **kwargs)
    return _run(Duplicated(dup, inner), env, T, means)
