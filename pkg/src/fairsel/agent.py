"""REINFORCE training loop: rollouts with per-step composite rewards,
discounted returns, one policy update per episode, and best-episode
tracking alongside a uniform-random baseline."""

from dataclasses import dataclass, field

import numpy as np

from fairsel import corrgraph, env, policy
from fairsel.errors import ConfigError, FairselError
from fairsel.learner import ForestConfig
from fairsel.reward import ZERO_BREAKDOWN, RewardConfig, RewardEngine


@dataclass(frozen=True)
class TrainConfig:
    episodes: int = 1000
    steps: int = 25
    learning_rate: float = 0.01
    discount: float = 0.99
    seed: int = 0
    normalize_returns: bool = True
    hidden_size: int = 64
    optimizer: str = "adam"  # adam | sgd
    terminal_only: bool = False
    random_start: bool = False
    evaluator: str = "forest"  # forest | tree
    reward: RewardConfig = field(default_factory=RewardConfig)
    learner: ForestConfig = field(default_factory=ForestConfig)

    def __post_init__(self):
        if self.episodes < 1 or self.steps < 1:
            raise ConfigError("episodes and steps must be >= 1")
        if not 0.0 <= self.discount <= 1.0:
            raise ConfigError("discount must lie in [0, 1]")
        if self.learning_rate <= 0:
            raise ConfigError("learning_rate must be > 0")
        if self.hidden_size < 1:
            raise ConfigError("hidden_size must be >= 1")
        if self.optimizer not in ("adam", "sgd"):
            raise ConfigError('optimizer must be "adam" or "sgd"')
        if self.evaluator not in ("forest", "tree"):
            raise ConfigError('evaluator must be "forest" or "tree"')


@dataclass
class EpisodeLog:
    index: int
    breakdowns: list  # one RewardBreakdown per step
    subsets: list  # selected index tuple after each step
    total: float
    best_step_auc: float

    @property
    def final_subset(self):
        return self.subsets[-1] if self.subsets else ()

    @property
    def subset_sizes(self):
        return [len(s) for s in self.subsets]


@dataclass
class TrainingReport:
    logs: list
    best_total_reward: float
    best_auc: float
    best_subset: tuple  # feature names
    best_subset_reward: float
    baseline_totals: list
    params: policy.PolicyParams
    opt_steps: int
    names: tuple


def discounted_returns(rewards, gamma):
    """Reward-to-go via the backward recursion G_t = r_t + gamma*G_{t+1}."""
    out = np.zeros(len(rewards), dtype=np.float64)
    acc = 0.0
    for t in range(len(rewards) - 1, -1, -1):
        acc = rewards[t] + gamma * acc
        out[t] = acc
    return out


def run_episode(params, engine, cfg, rng, index=0):
    """Roll out one episode; returns (step caches, EpisodeLog)."""
    d = engine.train.n_features
    state = env.random_state(d, rng) if cfg.random_start else env.reset(d)
    caches = []
    breakdowns = []
    subsets = []
    last = cfg.steps - 1
    for t in range(cfg.steps):
        probs, cache = policy.forward(params, state)
        action, logp = policy.sample_action(probs, rng)
        cache.action = action
        cache.log_prob = logp
        state = env.step(state, action)
        subset = env.subset_of(state)
        try:
            if cfg.terminal_only and t < last:
                bd = ZERO_BREAKDOWN
            else:
                bd = engine.evaluate(subset)
        except FairselError as exc:
            raise type(exc)(
                f"episode {index} step {t}: {exc}"
            ) from exc
        caches.append(cache)
        breakdowns.append(bd)
        subsets.append(subset)
    total = sum(b.total for b in breakdowns)
    best_auc = max(b.auc for b in breakdowns)
    return caches, EpisodeLog(index, breakdowns, subsets, total, best_auc)


def update_policy(params, caches, returns, cfg, opt_state, step_count):
    """One optimizer step from a full episode's gradient."""
    g = np.asarray(returns, dtype=np.float64)
    if cfg.normalize_returns:
        std = max(float(g.std()), 1e-8)
        g = (g - g.mean()) / std
    grads = policy.policy_gradient(params, caches, g)
    if cfg.optimizer == "sgd":
        return policy.sgd_step(params, grads, cfg.learning_rate), opt_state
    return policy.adam_step(params, grads, cfg.learning_rate, step_count,
                            opt_state)


def build_engine(train_ds, valid_ds, cfg):
    """Graph + reward engine over the training feature universe."""
    graph = corrgraph.build_graph(
        train_ds, cfg.reward.corr_threshold, cfg.reward.signed_distance
    )
    return RewardEngine(train_ds, valid_ds, graph, cfg.reward, cfg.learner,
                        cfg.evaluator)


def train(train_ds, valid_ds, cfg, engine=None):
    """Run the full training loop plus the uniform-random baseline.

    Deterministic in cfg.seed: policy init, rollouts, and the baseline
    use independent substreams spawned from it.
    """
    if engine is None:
        engine = build_engine(train_ds, valid_ds, cfg)
    d = train_ds.n_features
    init_ss, rollout_ss, baseline_ss = np.random.SeedSequence(
        cfg.seed
    ).spawn(3)
    params = policy.init_params(d, cfg.hidden_size, init_ss)
    opt_state = policy.AdamState.zeros_like(params)
    rng = np.random.default_rng(rollout_ss)

    logs = []
    best_total = -np.inf
    best_auc = 0.0
    best_subset = ()
    best_subset_reward = -np.inf
    for e in range(cfg.episodes):
        caches, log = run_episode(params, engine, cfg, rng, index=e)
        returns = discounted_returns(
            [b.total for b in log.breakdowns], cfg.discount
        )
        params, opt_state = update_policy(
            params, caches, returns, cfg, opt_state, e + 1
        )
        logs.append(log)
        best_total = max(best_total, log.total)
        best_auc = max(best_auc, log.best_step_auc)
        for subset, bd in zip(log.subsets, log.breakdowns):
            if subset and bd.total > best_subset_reward:
                best_subset_reward = bd.total
                best_subset = subset

    baseline_totals = _random_baseline(engine, cfg, baseline_ss)
    names = tuple(train_ds.names[i] for i in best_subset)
    return TrainingReport(
        logs=logs,
        best_total_reward=float(best_total),
        best_auc=float(best_auc),
        best_subset=names,
        best_subset_reward=float(best_subset_reward),
        baseline_totals=baseline_totals,
        params=params,
        opt_steps=cfg.episodes,
        names=train_ds.names,
    )


def _random_baseline(engine, cfg, seed_seq):
    """Equal-length uniform-random-action run for trajectory comparison."""
    rng = np.random.default_rng(seed_seq)
    d = engine.train.n_features
    totals = []
    last = cfg.steps - 1
    for _ in range(cfg.episodes):
        state = env.random_state(d, rng) if cfg.random_start else env.reset(d)
        total = 0.0
        for t in range(cfg.steps):
            action = int(rng.integers(0, 2 * d))
            state = env.step(state, action)
            if cfg.terminal_only and t < last:
                continue
            total += engine.evaluate(env.subset_of(state)).total
        totals.append(total)
    return totals
