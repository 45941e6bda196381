"""Shared domain types: arms, actions, action-set instances, loss tables."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np


@dataclass(frozen=True)
class ArmSpec:
    id: int
    cap: int

    def __post_init__(self):
        if self.cap < 1:
            raise ValueError(f"arm {self.id}: cap must be >= 1, got {self.cap}")


def as_action(a) -> np.ndarray:
    """Return ``a`` as a 1-D int64 array (an ActionVector)."""
    arr = np.asarray(a)
    if arr.dtype.kind == "f":
        rounded = np.rint(arr)
        if not np.array_equal(rounded, arr):
            raise ValueError("action counts must be integers")
        arr = rounded
    return arr.astype(np.int64).ravel()


def support(a) -> frozenset[int]:
    """Indices of the arms played at least once by ``a``."""
    return frozenset(int(i) for i in np.flatnonzero(np.asarray(a) >= 1))


def lex_key(a) -> tuple[int, ...]:
    return tuple(int(v) for v in np.asarray(a).ravel())


class InstanceSpec:
    """Declarative description of an action set A in Z_{>=0}^d.

    Concrete kinds are :class:`Transport`, :class:`Knapsack` and
    :class:`Explicit`. Each exposes the per-arm caps ``n_i`` and a membership
    test.
    """

    kind: str = ""

    @property
    def d(self) -> int:
        return len(self.caps)

    @property
    def caps(self) -> np.ndarray:
        raise NotImplementedError

    @property
    def arms(self) -> tuple[ArmSpec, ...]:
        return tuple(ArmSpec(i, int(n)) for i, n in enumerate(self.caps))

    def _contains(self, a: np.ndarray) -> bool:
        raise NotImplementedError

    def validate_action(self, a) -> bool:
        return validate_action(self, a)

    def to_dict(self) -> dict:
        raise NotImplementedError


def _int_tuple(values, name: str) -> tuple[int, ...]:
    out = []
    for v in np.asarray(values).ravel().tolist():
        if float(v) != int(v):
            raise ValueError(f"{name} must be integers, got {v!r}")
        out.append(int(v))
    return tuple(out)


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Transport(InstanceSpec):
    """Integer transport plans between suppliers ``u`` and demanders ``v``.

    Arms are edges laid out row-major: edge (x, y) has index ``x * len(v) + y``.
    """

    supplies: tuple[int, ...]
    demands: tuple[int, ...]
    kind = "transport"

    def __post_init__(self):
        u = _int_tuple(self.supplies, "supplies")
        v = _int_tuple(self.demands, "demands")
        object.__setattr__(self, "supplies", u)
        object.__setattr__(self, "demands", v)
        if not u or not v:
            raise ValueError("transport instance needs at least one supplier and demander")
        if sum(u) != sum(v):
            raise ValueError(f"unbalanced marginals: sum(u)={sum(u)} != sum(v)={sum(v)}")
        if min(u) < 1 or min(v) < 1:
            # a zero marginal leaves its edges unplayable
            raise ValueError("supplies and demands must be positive")

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.supplies), len(self.demands)

    @cached_property
    def caps(self) -> np.ndarray:
        u = np.array(self.supplies)
        v = np.array(self.demands)
        return _readonly(np.minimum.outer(u, v).ravel().astype(np.int64))

    def edge(self, i: int) -> tuple[int, int]:
        return divmod(i, len(self.demands))

    def _contains(self, a: np.ndarray) -> bool:
        plan = a.reshape(self.shape)
        return bool(
            np.array_equal(plan.sum(axis=1), self.supplies)
            and np.array_equal(plan.sum(axis=0), self.demands)
        )

    def to_dict(self) -> dict:
        return {"kind": "transport", "supplies": list(self.supplies), "demands": list(self.demands)}


@dataclass(frozen=True)
class Knapsack(InstanceSpec):
    """Integer multisets of items with total weight at most ``capacity``."""

    weights: tuple[int, ...]
    capacity: int
    kind = "knapsack"

    def __post_init__(self):
        w = _int_tuple(self.weights, "weights")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "capacity", int(self.capacity))
        if not w or min(w) < 1:
            raise ValueError("knapsack weights must be positive integers")
        if self.capacity < max(w):
            # every item must fit at least once
            raise ValueError(f"capacity {self.capacity} cannot hold item of weight {max(w)}")

    @cached_property
    def caps(self) -> np.ndarray:
        return _readonly(np.array([self.capacity // w for w in self.weights], dtype=np.int64))

    def _contains(self, a: np.ndarray) -> bool:
        return int(a @ np.array(self.weights)) <= self.capacity

    def to_dict(self) -> dict:
        return {"kind": "knapsack", "weights": list(self.weights), "capacity": self.capacity}


@dataclass(frozen=True)
class Explicit(InstanceSpec):
    """An action set given as a literal list of actions."""

    actions: tuple[tuple[int, ...], ...]
    kind = "explicit"

    def __post_init__(self):
        acts = tuple(sorted({_int_tuple(a, "actions") for a in self.actions}))
        if not acts:
            raise ValueError("explicit action set must be nonempty")
        if len({len(a) for a in acts}) != 1:
            raise ValueError("explicit actions must share one dimension")
        if min(min(a) for a in acts) < 0:
            raise ValueError("action counts must be nonnegative")
        object.__setattr__(self, "actions", acts)
        if np.any(self.caps < 1):
            missing = np.flatnonzero(self.caps < 1).tolist()
            raise ValueError(f"arms {missing} are never played by any action")

    @cached_property
    def caps(self) -> np.ndarray:
        return _readonly(np.array(self.actions, dtype=np.int64).max(axis=0))

    def _contains(self, a: np.ndarray) -> bool:
        return lex_key(a) in set(self.actions)

    def to_dict(self) -> dict:
        return {"kind": "explicit", "actions": [list(a) for a in self.actions]}


def instance_from_dict(data: dict) -> InstanceSpec:
    kind = str(data.get("kind", "")).lower()
    if kind == "transport":
        return Transport(tuple(data["supplies"]), tuple(data["demands"]))
    if kind == "knapsack":
        return Knapsack(tuple(data["weights"]), int(data["capacity"]))
    if kind == "explicit":
        return Explicit(tuple(tuple(a) for a in data["actions"]))
    raise ValueError(f"unknown instance kind {kind!r}")


def validate_action(spec: InstanceSpec, a) -> bool:
    """True iff ``a`` belongs to the action set of ``spec``.

    Raises ValueError when ``a`` has the wrong length.
    """
    a = as_action(a)
    if a.shape != (spec.d,):
        raise ValueError(f"action has length {a.size}, instance has d={spec.d}")
    if np.any(a < 0) or np.any(a > spec.caps):
        return False
    return spec._contains(a)


@dataclass(frozen=True)
class LossTable:
    """Per-round losses L_{i,j}(t); row ``i`` holds ``caps[i]`` entries.

    Stored padded as a ``(d, max cap)`` array; entries past a row's cap are NaN.
    """

    values: np.ndarray
    caps: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        caps = np.asarray(self.caps, dtype=np.int64)
        if vals.ndim != 2 or vals.shape[0] != caps.size or vals.shape[1] < caps.max(initial=0):
            raise ValueError("loss table shape does not match caps")
        mask = np.arange(vals.shape[1]) < caps[:, None]
        live = vals[mask]
        if np.any(np.isnan(live)) or np.any(live < 0.0) or np.any(live > 1.0):
            raise ValueError("losses must lie in [0, 1]")
        object.__setattr__(self, "values", _readonly(vals))
        object.__setattr__(self, "caps", caps)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[float]]) -> "LossTable":
        caps = np.array([len(r) for r in rows], dtype=np.int64)
        vals = np.full((len(rows), int(caps.max(initial=0))), np.nan)
        for i, r in enumerate(rows):
            vals[i, : len(r)] = r
        return cls(vals, caps)

    @property
    def d(self) -> int:
        return self.caps.size

    def row(self, i: int) -> np.ndarray:
        return self.values[i, : self.caps[i]]


@dataclass(frozen=True)
class Observation:
    """Semi-bandit feedback: the first ``a_i`` losses of every played arm."""

    round: int
    action: np.ndarray
    values: tuple[np.ndarray, ...] = field(repr=False)

    def triples(self) -> Iterator[tuple[int, int, float]]:
        """Yield ``(arm, slot, loss)`` with 0-based arm and slot indices."""
        for i, vals in enumerate(self.values):
            for j, v in enumerate(vals):
                yield i, j, float(v)

    @property
    def sums(self) -> np.ndarray:
        return np.array([v.sum() for v in self.values])

    @property
    def means(self) -> np.ndarray:
        """Per-arm mean of observed losses; NaN for arms not played."""
        a = self.action
        out = np.full(a.size, np.nan)
        played = a > 0
        out[played] = self.sums[played] / a[played]
        return out


def linear_loss(a, losses: LossTable) -> float:
    """Sum over arms of the first ``a_i`` losses in row ``i``."""
    a = as_action(a)
    total = 0.0
    for i in np.flatnonzero(a):
        total += float(losses.row(i)[: a[i]].sum())
    return total


def action_objective(a, rho) -> float:
    """Linear objective sum_i a_i rho_i, evaluated in a fixed order."""
    return math.fsum(float(x) * float(r) for x, r in zip(np.asarray(a).ravel(), np.asarray(rho).ravel()))
