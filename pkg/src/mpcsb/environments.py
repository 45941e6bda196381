"""Loss generation for the stochastic, corrupted and scheduled-adversarial regimes."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import InstanceSpec, LossTable, Observation, as_action


class NoStationaryMean(RuntimeError):
    """Raised when an expected loss is requested but the means change over time."""


class ArmDistribution:
    """Loss distribution of one arm, supported in [0, 1].

    Every family is sampled by inverse CDF from a shared uniform draw, so
    the clean and corrupted tables of a round are coupled slot by slot.
    """

    mean: float
    variance: float

    def quantile(self, u: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def mirrored(self) -> "ArmDistribution":
        """Distribution of ``1 - X``."""
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Uniform(ArmDistribution):
    lo: float
    hi: float

    def __post_init__(self):
        if not 0.0 <= self.lo <= self.hi <= 1.0:
            raise ValueError(f"Uniform({self.lo}, {self.hi}) must satisfy 0 <= lo <= hi <= 1")

    @property
    def mean(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def variance(self) -> float:
        return (self.hi - self.lo) ** 2 / 12.0

    def quantile(self, u):
        return self.lo + (self.hi - self.lo) * u

    def mirrored(self):
        return Uniform(1.0 - self.hi, 1.0 - self.lo)

    def to_dict(self):
        return {"family": "uniform", "lo": self.lo, "hi": self.hi}


@dataclass(frozen=True)
class Bernoulli(ArmDistribution):
    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"Bernoulli({self.p}) needs p in [0, 1]")

    @property
    def mean(self) -> float:
        return self.p

    @property
    def variance(self) -> float:
        return self.p * (1.0 - self.p)

    def quantile(self, u):
        # u is uniform on [0, 1): P(u >= 1 - p) = p
        return (u >= 1.0 - self.p).astype(np.float64)

    def mirrored(self):
        return Bernoulli(1.0 - self.p)

    def to_dict(self):
        return {"family": "bernoulli", "p": self.p}


@dataclass(frozen=True)
class Constant(ArmDistribution):
    c: float

    def __post_init__(self):
        if not 0.0 <= self.c <= 1.0:
            raise ValueError(f"Constant({self.c}) needs c in [0, 1]")

    @property
    def mean(self) -> float:
        return self.c

    @property
    def variance(self) -> float:
        return 0.0

    def quantile(self, u):
        return np.full(np.shape(u), self.c)

    def mirrored(self):
        return Constant(1.0 - self.c)

    def to_dict(self):
        return {"family": "constant", "c": self.c}


def distribution_from_dict(data: dict) -> ArmDistribution:
    family = data["family"].lower()
    if family == "uniform":
        return Uniform(float(data["lo"]), float(data["hi"]))
    if family == "bernoulli":
        return Bernoulli(float(data["p"]))
    if family == "constant":
        return Constant(float(data["c"]))
    raise ValueError(f"unknown distribution family {family!r}")


def distribution_with_mean(family: str, mean: float) -> ArmDistribution:
    """Build a member of ``family`` with the given mean.

    ``uniform`` gives U(0, 2c), which requires c <= 1/2.
    """
    family = family.lower()
    if family == "uniform":
        if mean > 0.5:
            raise ValueError(f"U(0, 2c) needs c <= 0.5, got {mean}")
        return Uniform(0.0, 2.0 * mean)
    if family == "bernoulli":
        return Bernoulli(mean)
    if family == "constant":
        return Constant(mean)
    raise ValueError(f"unknown distribution family {family!r}")


class CorruptionSchedule:
    """Maps (round, arm) to a replacement distribution; identity by default."""

    def replacement(self, t: int, i: int, dist: ArmDistribution) -> ArmDistribution | None:
        return None

    @property
    def is_identity(self) -> bool:
        return True

    def to_dict(self) -> dict:
        return {"mode": "none"}


IDENTITY = CorruptionSchedule()


@dataclass(frozen=True)
class MirrorAfter(CorruptionSchedule):
    """From round ``after + 1`` on, arm losses are drawn from the mirror ``1 - X``.

    With clean losses U(0, 2c) this replaces them by U(1 - 2c, 1).
    ``arms`` restricts the corruption to a subset of arms (default: all).
    """

    after: int
    arms: tuple[int, ...] | None = None

    def replacement(self, t, i, dist):
        if t > self.after and (self.arms is None or i in self.arms):
            return dist.mirrored()
        return None

    @property
    def is_identity(self) -> bool:
        return False

    def to_dict(self):
        out = {"mode": "mirror", "after": self.after}
        if self.arms is not None:
            out["arms"] = list(self.arms)
        return out


@dataclass(frozen=True)
class ReplaceAfter(CorruptionSchedule):
    """From round ``after + 1`` on, arm ``i`` is drawn from ``dists[i]``."""

    after: int
    dists: tuple[ArmDistribution, ...]

    def replacement(self, t, i, dist):
        if t > self.after:
            return self.dists[i]
        return None

    @property
    def is_identity(self) -> bool:
        return False

    def to_dict(self):
        return {"mode": "replace", "after": self.after, "arms": [d.to_dict() for d in self.dists]}


class Environment:
    """Draws full loss tables round by round for one trial.

    Not thread-safe: the generator state advances with every round.
    """

    def __init__(
        self,
        spec: InstanceSpec,
        dists: Sequence[ArmDistribution],
        schedule: CorruptionSchedule = IDENTITY,
        seed=None,
    ):
        if len(dists) != spec.d:
            raise ValueError(f"need {spec.d} arm distributions, got {len(dists)}")
        self.spec = spec
        self.dists = tuple(dists)
        self.schedule = schedule
        self.rng = np.random.default_rng(seed)
        self.corruption = 0.0
        self._caps = np.asarray(spec.caps)
        self._width = int(self._caps.max())
        self._pad = np.arange(self._width)[None, :] >= self._caps[:, None]

    def _fill(self, dists: Sequence[ArmDistribution], u: np.ndarray) -> np.ndarray:
        out = np.empty_like(u)
        for i, dist in enumerate(dists):
            out[i] = dist.quantile(u[i])
        out[self._pad] = np.nan
        return out

    def round_dists(self, t: int) -> tuple[ArmDistribution, ...]:
        out = []
        for i, dist in enumerate(self.dists):
            rep = self.schedule.replacement(t, i, dist)
            out.append(dist if rep is None else rep)
        return tuple(out)

    def draw_round(self, t: int) -> tuple[LossTable, LossTable]:
        """Return ``(clean, corrupted)`` tables for round ``t`` (1-based)."""
        if t < 1:
            raise ValueError("rounds are numbered from 1")
        u = self.rng.random((self.spec.d, self._width))
        clean_vals = self._fill(self.dists, u)
        clean = LossTable(clean_vals, self._caps)
        if self.schedule.is_identity:
            return clean, clean
        dists = self.round_dists(t)
        if all(a is b for a, b in zip(dists, self.dists)):
            return clean, clean
        corrupt_vals = self._fill(dists, u)
        self.corruption += float(np.nanmax(np.abs(corrupt_vals - clean_vals)))
        return clean, LossTable(corrupt_vals, self._caps)

    @property
    def means(self) -> np.ndarray:
        """Means of the clean distributions."""
        return np.array([dist.mean for dist in self.dists])

    @property
    def variances(self) -> np.ndarray:
        return np.array([dist.variance for dist in self.dists])

    def round_means(self, t: int) -> np.ndarray:
        """Means of the losses actually served in round ``t``."""
        return np.array([dist.mean for dist in self.round_dists(t)])

    def horizon_means(self, T: int) -> np.ndarray:
        """Per-arm mean of the served losses averaged over rounds 1..T."""
        if self.schedule.is_identity:
            return self.means
        total = np.zeros(self.spec.d)
        for t in range(1, T + 1):
            total += self.round_means(t)
        return total / T

    def expected_action_loss(self, a) -> float:
        """a . ell under the stationary means; only defined without corruption."""
        if not self.schedule.is_identity:
            raise NoStationaryMean("losses follow a schedule; no stationary mean")
        return float(as_action(a) @ self.means)


def observe(table: LossTable, a, t: int = 0) -> Observation:
    """Reveal the first ``a_i`` entries of every played row of ``table``."""
    a = as_action(a)
    if a.size != table.d:
        raise ValueError(f"action has length {a.size}, table has {table.d} rows")
    if np.any(a > table.caps):
        raise ValueError("action exceeds a row cap")
    vals = table.values
    rows = tuple(vals[i, : a[i]] for i in range(a.size))
    return Observation(t, a, rows)
