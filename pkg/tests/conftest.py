import numpy as np
import pytest

from fairsel import data
from fairsel.corrgraph import CorrelationGraph
from fairsel.learner import ForestConfig, TreeConfig
from fairsel.reward import RewardConfig


@pytest.fixture(scope="session")
def tiny_synth():
    """Small planted dataset: 1 sensitive, 1 proxy, 2 informative, 1 noise."""
    spec = data.SyntheticSpec(
        n_rows=400, n_sensitive=1, n_proxies_per_sensitive=1,
        proxy_correlation=0.9, n_informative=2, n_noise=1,
        label_signal_strength=2.0, seed=3,
    )
    return data.generate_synthetic(spec)


@pytest.fixture(scope="session")
def tiny_splits(tiny_synth):
    return data.split(tiny_synth, 0.25, 7)


@pytest.fixture(scope="session")
def small_forest_cfg():
    return ForestConfig(
        n_trees=5, tree=TreeConfig(max_depth=4, min_samples_split=5)
    )


def case1_graph():
    """Four features; education sits at distance 1.5 from age
    (corr -0.125 => sqrt(2 * 1.125) = 1.5); income and gender isolated."""
    names = ("Age", "Gender", "LevelOfEducation", "Income")
    corr = np.eye(4)
    corr[0, 2] = corr[2, 0] = -0.125
    return CorrelationGraph(corr, threshold=0.1, names=names)


def case1_config():
    return RewardConfig(
        direct_cost=8.0, indirect_scale=3.0, min_size=1, max_size=20,
        sensitive=frozenset({"Age", "Gender"}),
    )


def case2_graph():
    """Race and marital status sensitive; income and credit line
    disconnected from both."""
    names = ("Race", "MaritalStatus", "Income", "CreditLine")
    corr = np.eye(4)
    return CorrelationGraph(corr, threshold=0.1, names=names)


def case2_config():
    return RewardConfig(
        direct_cost=8.0, indirect_scale=3.0, min_size=1, max_size=20,
        sensitive=frozenset({"Race", "MaritalStatus"}),
    )
