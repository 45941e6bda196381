from .algorithm import GenLBINFV, LossEstimate, estimate_loss
from .decomposition import Decomposition, DecompositionError, decompose, sample_action
from .polytope import Polytope, UnsupportedInstance, polytope
from .predictor import Predictor
from .regularizer import RegState, alpha_terms, phi, phi_grad, phi_hess, regularizer_value_grad, update_reg
from .solver import FractionalPoint, SolverError, oftrl_objective, reduced_gradient, solve_oftrl

__all__ = [
    "Decomposition",
    "DecompositionError",
    "FractionalPoint",
    "GenLBINFV",
    "LossEstimate",
    "Polytope",
    "Predictor",
    "RegState",
    "SolverError",
    "UnsupportedInstance",
    "alpha_terms",
    "decompose",
    "estimate_loss",
    "oftrl_objective",
    "phi",
    "phi_grad",
    "phi_hess",
    "polytope",
    "reduced_gradient",
    "regularizer_value_grad",
    "sample_action",
    "solve_oftrl",
    "update_reg",
]
