"""Fairness-aware feature selection with a REINFORCE policy.

Trains a stochastic policy over a feature-subset MDP, scoring subsets
with validation AUC minus direct/indirect bias penalties and size
penalties, and audits any feature set with a correlation-graph bias
score.
"""

from fairsel._kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = ["KERNEL_BACKEND", "__version__"]
