"""Baseline transition-based DAG parser: transitions, oracle, features and perceptron."""

from .features import TEMPLATE_HASH, TEMPLATES, extract_features
from .model import BUDGET_CONSTANT, BUDGET_PER_TOKEN, SparseModel, budget, decode, parse, train
from .oracle import oracle, run_oracle
from .transitions import (ALL_TRANSITIONS, Transition, TransitionState, apply, completion, initial_state,
                          legal_transitions)

__all__ = ["ALL_TRANSITIONS", "BUDGET_CONSTANT", "BUDGET_PER_TOKEN", "SparseModel", "TEMPLATES",
           "TEMPLATE_HASH", "Transition", "TransitionState", "apply", "budget", "completion", "decode", "extract_features",
           "initial_state", "legal_transitions", "oracle", "parse", "run_oracle", "train"]
