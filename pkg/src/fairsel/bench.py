"""Baseline models and analysis artifacts: ROC comparison,
bias-accuracy table, trajectory summaries, and the reward-vs-feature
density histogram."""

from dataclasses import dataclass

import numpy as np

from fairsel import learner
from fairsel.errors import DataError
from fairsel.reward import bias_score


@dataclass(frozen=True)
class BaselineResult:
    name: str
    auc: float
    roc: tuple  # ((fpr, tpr), ...)
    bias_total: float
    features: tuple  # names


def score_model(name, model, train, valid, graph, cfg):
    scores = learner.predict_on(model, valid)
    auc = learner.auc(scores, valid.labels)
    roc = tuple(learner.roc_points(scores, valid.labels))
    _, total = bias_score(model.feature_indices, graph, cfg)
    names = tuple(train.names[i] for i in model.feature_indices)
    return BaselineResult(name, auc, roc, total, names)


def run_baselines(train, valid, cfg, graph, forest_cfg, logistic_lr=0.1,
                  logistic_epochs=300):
    """Three baselines: logistic on all features, forest on all
    features, and forest with the sensitive features statically
    excluded (the naive-exclusion strawman)."""
    d = train.n_features
    all_cols = tuple(range(d))
    sensitive_idx = {train.index_of(n) for n in cfg.sensitive}
    kept = tuple(i for i in all_cols if i not in sensitive_idx)
    if not kept:
        raise DataError("every feature is sensitive; nothing to exclude")

    results = [
        score_model(
            "logistic_all",
            learner.fit_logistic(train, all_cols, logistic_lr,
                                 logistic_epochs),
            train, valid, graph, cfg,
        ),
        score_model(
            "forest_all",
            learner.fit_forest(train, all_cols, forest_cfg),
            train, valid, graph, cfg,
        ),
        score_model(
            "forest_excl_sensitive",
            learner.fit_forest(train, kept, forest_cfg),
            train, valid, graph, cfg,
        ),
    ]
    return results


def moving_average(series, window):
    """Trailing mean over min(window, index+1) elements."""
    if window < 1:
        raise ValueError("window must be >= 1")
    series = np.asarray(series, dtype=np.float64)
    if series.size == 0:
        raise ValueError("series must be nonempty")
    out = np.empty_like(series)
    csum = np.cumsum(series)
    for i in range(series.size):
        lo = max(0, i - window + 1)
        out[i] = (csum[i] - (csum[lo - 1] if lo > 0 else 0.0)) / (i - lo + 1)
    return out


def reward_feature_histogram(logs, reward_bins, feature_bins):
    """2-D histogram of (episode total reward, final subset size).

    Equal-width bins over each axis's [min, max]; counts sum to the
    number of episodes.
    """
    if not logs:
        raise ValueError("need at least one episode log")
    rewards = np.array([log.total for log in logs], dtype=np.float64)
    sizes = np.array([len(log.final_subset) for log in logs],
                     dtype=np.float64)

    def edges(vals, bins):
        lo, hi = float(vals.min()), float(vals.max())
        if hi == lo:
            hi = lo + 1.0
        return np.linspace(lo, hi, bins + 1)

    r_edges = edges(rewards, reward_bins)
    f_edges = edges(sizes, feature_bins)
    counts = np.zeros((reward_bins, feature_bins), dtype=np.int64)
    r_idx = np.clip(
        np.searchsorted(r_edges, rewards, side="right") - 1, 0,
        reward_bins - 1,
    )
    f_idx = np.clip(
        np.searchsorted(f_edges, sizes, side="right") - 1, 0,
        feature_bins - 1,
    )
    for ri, fi in zip(r_idx, f_idx):
        counts[ri, fi] += 1
    return counts, r_edges, f_edges


@dataclass(frozen=True)
class PhaseSummary:
    phase: int
    episodes: int
    mean_reward: float
    mean_subset_size: float
    mean_indirect: float


def phase_summary(logs, phases=3):
    """Contiguous equal-split phase means of reward, size, indirect.

    Per-episode indirect is the sum over the episode's steps, matching
    the episode total being a sum of step totals.
    """
    if phases < 1:
        raise ValueError("phases must be >= 1")
    if len(logs) < phases:
        raise ValueError(f"need at least {phases} episodes for {phases} phases")
    chunks = np.array_split(np.arange(len(logs)), phases)
    out = []
    for p, chunk in enumerate(chunks):
        rewards = [logs[i].total for i in chunk]
        sizes = [len(logs[i].final_subset) for i in chunk]
        indirects = [
            sum(b.indirect for b in logs[i].breakdowns) for i in chunk
        ]
        out.append(
            PhaseSummary(
                phase=p,
                episodes=len(chunk),
                mean_reward=float(np.mean(rewards)),
                mean_subset_size=float(np.mean(sizes)),
                mean_indirect=float(np.mean(indirects)),
            )
        )
    return out
