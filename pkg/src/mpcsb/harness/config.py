"""Experiment configuration: TOML files with [instance], [environment], [algorithm]."""

from __future__ import annotations

import copy
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from ..core import InstanceSpec, instance_from_dict
from ..environments import (
    IDENTITY,
    ArmDistribution,
    CorruptionSchedule,
    MirrorAfter,
    ReplaceAfter,
    distribution_from_dict,
    distribution_with_mean,
)

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

ALGORITHMS = ("gencts", "genlbinfv", "dup_cts", "dup_lbinfv")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class EnvironmentConfig:
    """How per-arm loss distributions are chosen for each trial.

    Exactly one of ``arms`` (explicit distributions), ``means`` (fixed means
    of ``family``) or ``mean_range`` (means drawn uniformly per trial) is set.
    """

    family: str = "uniform"
    means: tuple[float, ...] | None = None
    mean_range: tuple[float, float] | None = None
    arms: tuple[ArmDistribution, ...] | None = None
    corruption: dict = field(default_factory=lambda: {"mode": "none"})

    def __post_init__(self):
        given = sum(x is not None for x in (self.means, self.mean_range, self.arms))
        if given != 1:
            raise ConfigError("environment needs exactly one of 'arms', 'means', 'mean_range'")

    def distributions(self, d: int, rng: np.random.Generator) -> tuple[ArmDistribution, ...]:
        if self.arms is not None:
            dists = self.arms
        else:
            if self.means is not None:
                means = np.asarray(self.means, dtype=np.float64)
            else:
                lo, hi = self.mean_range
                means = rng.uniform(lo, hi, size=d)
            dists = tuple(distribution_with_mean(self.family, float(c)) for c in means)
        if len(dists) != d:
            raise ConfigError(f"environment defines {len(dists)} arms, instance has {d}")
        return tuple(dists)

    def schedule(self, d: int) -> CorruptionSchedule:
        c = self.corruption
        mode = c.get("mode", "none")
        if mode == "none":
            return IDENTITY
        if mode == "mirror":
            arms = c.get("arms")
            return MirrorAfter(int(c["after"]), None if arms is None else tuple(int(i) for i in arms))
        if mode == "replace":
            dists = tuple(distribution_from_dict(x) for x in c["arms"])
            if len(dists) != d:
                raise ConfigError("replacement distributions must cover every arm")
            return ReplaceAfter(int(c["after"]), dists)
        raise ConfigError(f"unknown corruption mode {mode!r}")

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"family": self.family}
        if self.means is not None:
            out["means"] = list(self.means)
        if self.mean_range is not None:
            out["mean_range"] = list(self.mean_range)
        if self.arms is not None:
            out["arms"] = [a.to_dict() for a in self.arms]
        out["corruption"] = dict(self.corruption)
        return out


@dataclass(frozen=True)
class AlgorithmConfig:
    name: str = "gencts"
    predictor: str = "ls"
    eta: float = 0.25
    epsilon_ratio: float = 0.5  # epsilon_i = ratio * n_i

    def __post_init__(self):
        if self.name not in ALGORITHMS:
            raise ConfigError(f"algorithm must be one of {ALGORITHMS}, got {self.name!r}")
        if self.predictor not in ("ls", "gd"):
            raise ConfigError("predictor must be 'ls' or 'gd'")
        if not 0.0 < self.epsilon_ratio <= 0.5:
            raise ConfigError("epsilon_ratio must lie in (0, 1/2]")
        if self.predictor == "gd" and not 0.0 < self.eta < 0.5:
            raise ConfigError("eta must lie in (0, 1/2)")

    def to_dict(self) -> dict:
        return {"name": self.name, "predictor": self.predictor, "eta": self.eta, "epsilon_ratio": self.epsilon_ratio}


@dataclass(frozen=True)
class ExperimentConfig:
    instance: InstanceSpec
    environment: EnvironmentConfig
    algorithm: AlgorithmConfig
    horizon: int = 10_000
    trials: int = 30
    seed: int = 0
    output: str | None = None
    workers: int = 1

    def __post_init__(self):
        if self.horizon < 1:
            raise ConfigError("horizon T must be >= 1")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")

    def replace(self, **changes) -> "ExperimentConfig":
        data = {f: getattr(self, f) for f in self.__dataclass_fields__}
        data.update(changes)
        return ExperimentConfig(**data)

    def to_dict(self) -> dict:
        return {
            "horizon": self.horizon,
            "trials": self.trials,
            "seed": self.seed,
            "output": self.output,
            "workers": self.workers,
            "instance": self.instance.to_dict(),
            "environment": self.environment.to_dict(),
            "algorithm": self.algorithm.to_dict(),
        }


def config_from_dict(data: dict) -> ExperimentConfig:
    data = copy.deepcopy(data)
    try:
        instance = instance_from_dict(data.pop("instance"))
        env = data.pop("environment")
        alg = data.pop("algorithm", {})
    except KeyError as exc:
        raise ConfigError(f"missing section {exc}") from None
    arms = env.pop("arms", None)
    means = env.pop("means", None)
    mean_range = env.pop("mean_range", None)
    envcfg = EnvironmentConfig(
        family=env.pop("family", "uniform"),
        means=None if means is None else tuple(float(x) for x in np.ravel(means)),
        mean_range=None if mean_range is None else (float(mean_range[0]), float(mean_range[1])),
        arms=None if arms is None else tuple(distribution_from_dict(a) for a in arms),
        corruption=env.pop("corruption", {"mode": "none"}),
    )
    if env:
        raise ConfigError(f"unknown environment keys: {sorted(env)}")
    algcfg = AlgorithmConfig(**alg)
    known = {"horizon", "trials", "seed", "output", "workers"}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown top-level keys: {sorted(unknown)}")
    return ExperimentConfig(instance=instance, environment=envcfg, algorithm=algcfg, **data)


def load_config(path) -> ExperimentConfig:
    with open(Path(path), "rb") as fh:
        return config_from_dict(tomllib.load(fh))


def loads_config(text: str) -> ExperimentConfig:
    return config_from_dict(tomllib.loads(text))
