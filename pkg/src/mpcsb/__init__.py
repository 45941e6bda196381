"""Multi-play combinatorial semi-bandits: GenCTS, GenLBINFV, oracles and experiments."""

from .baselines import DuplicatedInstance, duplicate_instance, run_duplicated_cts, run_duplicated_lbinfv
from .core import (
    ArmSpec,
    Explicit,
    InstanceSpec,
    Knapsack,
    LossTable,
    Observation,
    Transport,
    linear_loss,
    support,
    validate_action,
)
from .environments import Bernoulli, Constant, Environment, MirrorAfter, Uniform, observe
from .gencts import GenCTS
from .genlbinfv import GenLBINFV
from .oracles import argmin_action, enumerate_actions, knapsack_oracle, ot_oracle

__version__ = "0.1.0"

__all__ = [
    "ArmSpec",
    "Bernoulli",
    "Constant",
    "DuplicatedInstance",
    "Environment",
    "Explicit",
    "GenCTS",
    "GenLBINFV",
    "InstanceSpec",
    "Knapsack",
    "LossTable",
    "MirrorAfter",
    "Observation",
    "Transport",
    "Uniform",
    "argmin_action",
    "duplicate_instance",
    "enumerate_actions",
    "knapsack_oracle",
    "linear_loss",
    "observe",
    "ot_oracle",
    "run_duplicated_cts",
    "run_duplicated_lbinfv",
    "support",
    "validate_action",
]
