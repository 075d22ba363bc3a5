"""Composite reward for a feature subset: validation AUC minus direct,
indirect, and size penalties plus a shaped bonus, and the
correlation-graph bias score used to audit any feature set."""

from dataclasses import dataclass, replace

from fairsel import corrgraph, learner
from fairsel.errors import ConfigError


@dataclass(frozen=True)
class RewardConfig:
    """All reward hyperparameters.

    direct_cost is charged once per selected sensitive feature;
    indirect_scale scales the per-proxy penalty (divided by graph
    distance); shaped_bonus is granted per selected rewarded feature;
    size_cost is the per-feature cost outside [min_size, max_size].
    """

    direct_cost: float = 8.0
    indirect_scale: float = 3.0
    shaped_bonus: float = 0.05
    size_cost: float = 1.0
    min_size: int = 8
    max_size: int = 20
    sensitive: frozenset = frozenset()
    rewarded: frozenset = frozenset()
    corr_threshold: float = 0.3
    signed_distance: bool = True

    def __post_init__(self):
        for name in ("direct_cost", "indirect_scale", "shaped_bonus",
                     "size_cost"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be >= 0")
        if self.min_size < 1 or self.max_size < 1:
            raise ConfigError("size bounds must be positive")
        if self.min_size > self.max_size:
            raise ConfigError("min_size must be <= max_size")
        if not 0.0 < self.corr_threshold <= 1.0:
            raise ConfigError("corr_threshold must lie in (0, 1]")
        object.__setattr__(self, "sensitive", frozenset(self.sensitive))
        object.__setattr__(self, "rewarded", frozenset(self.rewarded))
        overlap = self.sensitive & self.rewarded
        if overlap:
            raise ConfigError(
                f"sensitive and rewarded sets overlap: {sorted(overlap)}"
            )

    def validate_names(self, names):
        known = set(names)
        unknown = (self.sensitive | self.rewarded) - known
        if unknown:
            raise ConfigError(f"unknown feature names: {sorted(unknown)}")


@dataclass(frozen=True)
class RewardBreakdown:
    """One reward evaluation; total = auc - direct - indirect - size + shaped."""

    auc: float = 0.0
    direct: float = 0.0
    indirect: float = 0.0
    size: float = 0.0
    shaped: float = 0.0
    total: float = 0.0

    @classmethod
    def compose(cls, auc, direct, indirect, size, shaped):
        return cls(auc, direct, indirect, size, shaped,
                   auc - direct - indirect - size + shaped)


ZERO_BREAKDOWN = RewardBreakdown()


def size_penalty(k, cfg):
    """Piecewise-linear cost outside the [min_size, max_size] band."""
    if k < 0:
        raise ValueError("subset size must be >= 0")
    if k < cfg.min_size:
        return (cfg.min_size - k) * cfg.size_cost
    if k > cfg.max_size:
        return (k - cfg.max_size) * cfg.size_cost
    return 0.0


class RewardEngine:
    """Evaluates subsets against one (train, valid, graph, config) tuple.

    Pure per subset: the learner seed is derived from the subset
    itself, so memoized and fresh evaluations agree bitwise.
    """

    def __init__(self, train, valid, graph, reward_cfg, learner_cfg,
                 evaluator="forest"):
        reward_cfg.validate_names(train.names)
        if train.names != graph.names:
            raise ConfigError("graph must cover the training feature universe")
        if evaluator not in ("forest", "tree"):
            raise ConfigError('evaluator must be "forest" or "tree"')
        self.train = train
        self.valid = valid
        self.graph = graph
        self.cfg = reward_cfg
        self.learner_cfg = learner_cfg
        self.evaluator = evaluator
        self.sensitive_idx = frozenset(
            train.index_of(n) for n in reward_cfg.sensitive
        )
        self.rewarded_idx = frozenset(
            train.index_of(n) for n in reward_cfg.rewarded
        )
        self._cache = {}
        self.evaluations = 0  # fits actually performed, not cache hits

    # --- penalty terms -------------------------------------------------

    def direct_penalty(self, subset):
        """direct_cost per selected sensitive feature."""
        hits = len(self.sensitive_idx.intersection(subset))
        return self.cfg.direct_cost * hits

    def indirect_penalty(self, subset):
        """Penalty for selected non-sensitive features reachable from a
        sensitive node: |corr| * indirect_scale / distance per pair,
        summed over all sensitive nodes in the graph."""
        total = 0.0
        g = self.graph
        lam = self.cfg.indirect_scale
        for b in sorted(self.sensitive_idx):
            for s in sorted(set(subset) - self.sensitive_idx):
                if corrgraph.path_exists(g, b, s):
                    w = abs(float(g.corr[b, s]))
                    total += w * lam / corrgraph.euclid_distance(g, b, s)
        return total

    def shaped_bonus(self, subset):
        """shaped_bonus per selected rewarded feature."""
        hits = len(self.rewarded_idx.intersection(subset))
        return self.cfg.shaped_bonus * hits

    def size_penalty(self, k):
        return size_penalty(k, self.cfg)

    # --- composite reward ----------------------------------------------

    def _subset_seed(self, subset):
        seed = self.learner_cfg.seed
        for i in sorted(subset):
            seed = learner.derive_seed(seed, i)
        return seed

    def _fit_and_score(self, subset):
        cols = tuple(sorted(subset))
        cfg = self.learner_cfg
        seed = self._subset_seed(cols)
        if self.evaluator == "tree":
            model = learner.fit_tree(
                self.train, cols, replace(cfg.tree, seed=seed)
            )
        else:
            model = learner.fit_forest(self.train, cols, replace(cfg, seed=seed))
        scores = learner.predict_on(model, self.valid)
        return learner.auc(scores, self.valid.labels)

    def evaluate(self, subset):
        """RewardBreakdown for a subset; the empty subset scores 0."""
        key = tuple(sorted(subset))
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if not key:
            out = ZERO_BREAKDOWN
        else:
            self.evaluations += 1
            auc_w = self._fit_and_score(key)
            out = RewardBreakdown.compose(
                auc_w,
                self.direct_penalty(key),
                self.indirect_penalty(key),
                self.size_penalty(len(key)),
                self.shaped_bonus(key),
            )
        self._cache[key] = out
        return out

    # --- bias audit ------------------------------------------------------

    def bias_score(self, subset):
        """Per-feature bias scores and their sum over the subset.

        Sensitive features score direct_cost; non-sensitive features
        reachable from a sensitive node score indirect_scale divided by
        the distance to the closest reachable one; everything else 0.
        """
        return bias_score(subset, self.graph, self.cfg,
                          sensitive_idx=self.sensitive_idx)


def bias_score(subset, graph, cfg, sensitive_idx=None):
    """Audit any feature index set against a correlation graph."""
    if sensitive_idx is None:
        name_to_idx = {n: i for i, n in enumerate(graph.names)}
        missing = [n for n in cfg.sensitive if n not in name_to_idx]
        if missing:
            raise ConfigError(f"unknown feature names: {sorted(missing)}")
        sensitive_idx = frozenset(name_to_idx[n] for n in cfg.sensitive)
    per_feature = {}
    total = 0.0
    for i in sorted(set(subset)):
        if i in sensitive_idx:
            score = cfg.direct_cost
        elif sensitive_idx:
            dist = corrgraph.distance_to_set(graph, i, sensitive_idx)
            score = 0.0 if dist is None else cfg.indirect_scale / dist
        else:
            score = 0.0
        per_feature[graph.names[i]] = score
        total += score
    return per_feature, total
