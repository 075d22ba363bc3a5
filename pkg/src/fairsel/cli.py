"""Command-line surface: config parsing, the five subcommands, and
deterministic CSV/JSON/SVG reporting.

Config files are flat `key = value` lines with '#' comments; unknown
keys are rejected so hyperparameter typos fail loudly.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from fairsel import agent, bench, corrgraph, data, policy, svgplot
from fairsel._kernels import BACKEND
from fairsel.errors import (ConfigError, DataError, FairselError,
                            NumericalError)
from fairsel.learner import ForestConfig, TreeConfig, fit_forest
from fairsel.reward import RewardConfig, RewardEngine, bias_score

# key -> (type, default); None defaults resolve at use sites
_SCHEMA = {
    # data
    "csv": ("str", ""),
    "target": ("str", "label"),
    "sentinel": ("float", -999.0),
    "valid_fraction": ("float", 0.25),
    "split_seed": ("int", None),
    # synthetic generator (used when csv is empty)
    "synth_rows": ("int", 4000),
    "synth_sensitive": ("int", 2),
    "synth_proxies_per_sensitive": ("int", 2),
    "synth_proxy_correlation": ("float", 0.9),
    "synth_informative": ("int", 5),
    "synth_noise": ("int", 4),
    "synth_label_signal": ("float", 2.0),
    "synth_seed": ("int", None),
    # reward
    "direct_cost": ("float", 8.0),
    "indirect_scale": ("float", 3.0),
    "shaped_bonus": ("float", 0.05),
    "size_cost": ("float", 1.0),
    "min_size": ("int", 8),
    "max_size": ("int", 20),
    "sensitive": ("str", ""),
    "rewarded": ("str", ""),
    "corr_threshold": ("float", 0.3),
    "signed_distance": ("bool", True),
    # learner
    "trees": ("int", 25),
    "tree_max_depth": ("int", 8),
    "tree_min_samples_split": ("int", 10),
    "max_split_features": ("str", "sqrt"),
    "bootstrap": ("bool", True),
    "evaluator": ("str", "forest"),
    "logistic_lr": ("float", 0.1),
    "logistic_epochs": ("int", 300),
    # training
    "episodes": ("int", 1000),
    "steps": ("int", 25),
    "learning_rate": ("float", 0.01),
    "discount": ("float", 0.99),
    "seed": ("int", 0),
    "normalize_returns": ("bool", True),
    "hidden_size": ("int", 64),
    "optimizer": ("str", "adam"),
    "terminal_only": ("bool", False),
    "random_start": ("bool", False),
    # output
    "out_dir": ("str", "run"),
    "plots": ("bool", False),
}


def _parse_value(key, kind, raw):
    raw = raw.strip()
    try:
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
        if kind == "bool":
            low = raw.lower()
            if low in ("true", "yes", "1"):
                return True
            if low in ("false", "no", "0"):
                return False
            raise ValueError(raw)
        return raw
    except ValueError:
        raise ConfigError(
            f"config key {key!r}: cannot parse {raw!r} as {kind}"
        ) from None


class RunConfig:
    """Resolved configuration for one run."""

    def __init__(self, values):
        self.values = values

    @classmethod
    def from_mapping(cls, mapping, source="<mapping>"):
        values = {}
        for key, (kind, default) in _SCHEMA.items():
            values[key] = default
        for key, raw in mapping.items():
            if key not in _SCHEMA:
                raise ConfigError(f"{source}: unknown config key {key!r}")
            kind, _ = _SCHEMA[key]
            values[key] = _parse_value(key, kind, str(raw))
        return cls(values)

    @classmethod
    def from_file(cls, path):
        p = Path(path)
        if not p.exists():
            raise ConfigError(f"no such config file: {path}")
        mapping = {}
        for lineno, line in enumerate(p.read_text().splitlines(), start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                raise ConfigError(
                    f"{path}:{lineno}: expected 'key = value', got {line!r}"
                )
            key, raw = text.split("=", 1)
            key = key.strip()
            if key in mapping:
                raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
            mapping[key] = raw.strip()
        cfg = cls.from_mapping(mapping, source=str(path))
        if cfg.values["csv"]:
            csv_path = Path(cfg.values["csv"])
            if not csv_path.exists():
                raise ConfigError(f"{path}: csv file not found: {csv_path}")
        return cfg

    def __getitem__(self, key):
        return self.values[key]

    def echo(self):
        """Canonical string form of every key; re-parses to an equal config."""
        out = {}
        for key, value in sorted(self.values.items()):
            if value is None:
                continue
            if isinstance(value, bool):
                out[key] = "true" if value else "false"
            elif isinstance(value, float):
                out[key] = repr(value)
            else:
                out[key] = str(value)
        return out

    def _names(self, key):
        raw = self.values[key]
        return frozenset(n.strip() for n in raw.split(",") if n.strip())

    def synthetic_spec(self):
        v = self.values
        seed = v["synth_seed"] if v["synth_seed"] is not None else v["seed"]
        return data.SyntheticSpec(
            n_rows=v["synth_rows"],
            n_sensitive=v["synth_sensitive"],
            n_proxies_per_sensitive=v["synth_proxies_per_sensitive"],
            proxy_correlation=v["synth_proxy_correlation"],
            n_informative=v["synth_informative"],
            n_noise=v["synth_noise"],
            label_signal_strength=v["synth_label_signal"],
            seed=seed,
        )

    def reward_config(self):
        v = self.values
        return RewardConfig(
            direct_cost=v["direct_cost"],
            indirect_scale=v["indirect_scale"],
            shaped_bonus=v["shaped_bonus"],
            size_cost=v["size_cost"],
            min_size=v["min_size"],
            max_size=v["max_size"],
            sensitive=self._names("sensitive"),
            rewarded=self._names("rewarded"),
            corr_threshold=v["corr_threshold"],
            signed_distance=v["signed_distance"],
        )

    def forest_config(self):
        v = self.values
        mf = v["max_split_features"]
        if mf != "sqrt":
            mf = _parse_value("max_split_features", "int", mf)
        return ForestConfig(
            n_trees=v["trees"],
            max_features=mf,
            bootstrap=v["bootstrap"],
            tree=TreeConfig(
                max_depth=v["tree_max_depth"],
                min_samples_split=v["tree_min_samples_split"],
                seed=v["seed"],
            ),
            seed=v["seed"],
        )

    def train_config(self):
        v = self.values
        return agent.TrainConfig(
            episodes=v["episodes"],
            steps=v["steps"],
            learning_rate=v["learning_rate"],
            discount=v["discount"],
            seed=v["seed"],
            normalize_returns=v["normalize_returns"],
            hidden_size=v["hidden_size"],
            optimizer=v["optimizer"],
            terminal_only=v["terminal_only"],
            random_start=v["random_start"],
            evaluator=v["evaluator"],
            reward=self.reward_config(),
            learner=self.forest_config(),
        )

    def load_dataset(self):
        v = self.values
        if v["csv"]:
            return data.load_csv(v["csv"], v["target"], v["sentinel"])
        return data.generate_synthetic(self.synthetic_spec())

    def load_splits(self):
        ds = self.load_dataset()
        v = self.values
        seed = v["split_seed"] if v["split_seed"] is not None else v["seed"]
        return data.split(ds, v["valid_fraction"], seed)


def _fmt_float(v):
    return repr(float(v))


def _write_csv(path, header, rows):
    with Path(path).open("w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(
                ",".join(
                    _fmt_float(v) if isinstance(v, float) else str(v)
                    for v in row
                )
                + "\n"
            )


def _write_json(path, payload):
    with Path(path).open("w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


# --- subcommands ----------------------------------------------------------


def cmd_synth(args):
    spec = data.SyntheticSpec(
        n_rows=args.rows,
        n_sensitive=args.sensitive,
        n_proxies_per_sensitive=args.proxies_per_sensitive,
        proxy_correlation=args.proxy_correlation,
        n_informative=args.informative,
        n_noise=args.noise,
        label_signal_strength=args.label_signal,
        seed=args.seed,
    )
    ds = data.generate_synthetic(spec)
    data.write_csv(ds, args.out, target=args.target)
    print(f"wrote {ds.n_rows} rows x {ds.n_features + 1} columns to {args.out}")
    return 0


def _episode_rows(logs):
    for log in logs:
        for t, (bd, subset) in enumerate(zip(log.breakdowns, log.subsets)):
            yield (
                log.index, t, float(bd.auc), float(bd.direct),
                float(bd.indirect), float(bd.size), float(bd.shaped),
                float(bd.total), len(subset),
            )


EPISODE_HEADER = ("episode", "step", "auc", "direct", "indirect", "size",
                  "shaped", "total", "subset_size")


def cmd_train(args):
    cfg = RunConfig.from_file(args.config)
    out_dir = Path(args.out_dir or cfg["out_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    train_ds, valid_ds = cfg.load_splits()
    tcfg = cfg.train_config()
    report = agent.train(train_ds, valid_ds, tcfg)

    _write_csv(out_dir / "episodes.csv", EPISODE_HEADER,
               _episode_rows(report.logs))
    payload = {
        "best_total_reward": report.best_total_reward,
        "best_auc": report.best_auc,
        "best_subset": list(report.best_subset),
        "best_subset_reward": report.best_subset_reward,
        "baseline_rewards": [float(v) for v in report.baseline_totals],
        "episodes": tcfg.episodes,
        "steps": tcfg.steps,
        "kernel_backend": BACKEND,
        "config": cfg.echo(),
    }
    _write_json(out_dir / "report.json", payload)
    policy.save_checkpoint(out_dir / "policy.ckpt", report.params,
                           report.opt_steps)
    if cfg["plots"]:
        _render_training_plots(out_dir, report)
    print(
        f"best_total_reward={report.best_total_reward!r} "
        f"best_auc={report.best_auc!r}"
    )
    print(f"best_subset={','.join(report.best_subset)}")
    return 0


def _render_training_plots(out_dir, report):
    totals = [log.total for log in report.logs]
    window = min(50, len(totals))
    avg = list(bench.moving_average(totals, window))
    base_avg = list(bench.moving_average(report.baseline_totals, window))
    (out_dir / "reward_trajectory.svg").write_text(
        svgplot.line_chart(
            [
                ("episode total", totals, False),
                (f"moving avg ({window})", avg, False),
                ("random baseline avg", base_avg, True),
            ],
            "Total reward over episodes", "episode", "total reward",
        )
    )
    indirects = [
        sum(b.indirect for b in log.breakdowns) for log in report.logs
    ]
    (out_dir / "indirect_penalty.svg").write_text(
        svgplot.line_chart(
            [(f"moving avg ({window})",
              list(bench.moving_average(indirects, window)), False)],
            "Indirect penalty over episodes", "episode", "indirect penalty",
        )
    )
    phases = np.array_split(np.arange(len(report.logs)), 3)
    groups = []
    for p, chunk in enumerate(phases):
        if len(chunk) == 0:
            continue
        groups.append(
            (
                f"phase {p + 1}",
                [len(report.logs[i].final_subset) for i in chunk],
                [report.logs[i].total for i in chunk],
            )
        )
    (out_dir / "reward_vs_features.svg").write_text(
        svgplot.scatter_chart(
            groups, "Episode reward vs selected features",
            "selected features", "episode reward",
        )
    )
    counts, r_edges, f_edges = bench.reward_feature_histogram(
        report.logs, 20, 12
    )
    (out_dir / "reward_feature_heatmap.svg").write_text(
        svgplot.heatmap_chart(
            counts.tolist(), r_edges, f_edges,
            "Reward vs feature-count density", "episode reward",
            "selected features",
        )
    )


def _greedy_subset(params, steps, d):
    """Deterministic argmax rollout used to recover a checkpoint's subset."""
    from fairsel import env

    state = env.reset(d)
    for _ in range(steps):
        probs, _ = policy.forward(params, state)
        state = env.step(state, int(np.argmax(probs)))
    return env.subset_of(state)


def cmd_benchmark(args):
    cfg = RunConfig.from_file(args.config)
    out_dir = Path(args.out_dir or cfg["out_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    train_raw, valid_raw = cfg.load_splits()
    train_ds, means, stds = data.standardize(train_raw)
    valid_ds = data.standardize_with(valid_raw, means, stds)
    rcfg = cfg.reward_config()
    rcfg.validate_names(train_ds.names)
    graph = corrgraph.build_graph(train_ds, rcfg.corr_threshold,
                                  rcfg.signed_distance)
    results = bench.run_baselines(
        train_ds, valid_ds, rcfg, graph, cfg.forest_config(),
        logistic_lr=cfg["logistic_lr"],
        logistic_epochs=cfg["logistic_epochs"],
    )

    if args.checkpoint:
        ckpt = Path(args.checkpoint)
        if not ckpt.exists():
            raise ConfigError(f"checkpoint not found: {ckpt}")
        params, _ = policy.load_checkpoint(ckpt)
        if params.n_features != train_ds.n_features:
            raise ConfigError(
                f"checkpoint expects {params.n_features} features, "
                f"dataset has {train_ds.n_features}"
            )
        subset = _greedy_subset(params, cfg["steps"], train_ds.n_features)
        if not subset:
            raise DataError("checkpoint policy selects an empty subset")
        model = fit_forest(train_ds, subset, cfg.forest_config())
        results.append(
            bench.score_model("rl_policy", model, train_ds, valid_ds,
                               graph, rcfg)
        )

    _write_csv(
        out_dir / "roc.csv", ("model", "fpr", "tpr"),
        (
            (r.name, float(fpr), float(tpr))
            for r in results
            for fpr, tpr in r.roc
        ),
    )
    _write_csv(
        out_dir / "bias_accuracy.csv", ("model", "auc", "bias_total"),
        ((r.name, float(r.auc), float(r.bias_total)) for r in results),
    )
    if cfg["plots"]:
        (out_dir / "roc.svg").write_text(_roc_svg(results))
    for r in results:
        print(f"{r.name}: auc={r.auc!r} bias_total={r.bias_total!r}")
    return 0


def _roc_svg(results):
    groups = []
    for r in results:
        xs = [fpr for fpr, _ in r.roc]
        ys = [tpr for _, tpr in r.roc]
        groups.append((r.name, xs, ys))
    cv = svgplot._Canvas("ROC comparison", "false positive rate",
                         "true positive rate", (0.0, 1.0), (0.0, 1.0))
    entries = []
    for k, (label, xs, ys) in enumerate(groups):
        color = svgplot._PALETTE[k % len(svgplot._PALETTE)]
        cv.polyline(xs, ys, color)
        entries.append((label, color))
    cv.legend(entries)
    return cv.render()


def cmd_bias_score(args):
    cfg = RunConfig.from_file(args.config)
    out_dir = Path(args.out_dir or cfg["out_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    ds = cfg.load_dataset()
    rcfg = cfg.reward_config()
    rcfg.validate_names(ds.names)
    graph = corrgraph.build_graph(ds, rcfg.corr_threshold,
                                  rcfg.signed_distance)
    features = [n.strip() for n in args.features.split(",") if n.strip()]
    unknown = [n for n in features if n not in ds.names]
    if unknown:
        raise DataError(f"unknown feature names: {unknown}")
    subset = [ds.index_of(n) for n in features]
    per_feature, total = bias_score(subset, graph, rcfg)
    for name in features:
        print(f"{name}: {per_feature[name]!r}")
    print(f"total: {total!r}")
    _write_json(
        out_dir / "bias.json",
        {"per_feature": per_feature, "total": total,
         "features": features},
    )
    _write_csv(
        out_dir / "graph_edges.csv",
        ("node_a", "node_b", "correlation", "distance"),
        corrgraph.export_edges(graph),
    )
    return 0


def cmd_report(args):
    run_dir = Path(args.run_dir)
    episodes_path = run_dir / "episodes.csv"
    report_path = run_dir / "report.json"
    for p in (episodes_path, report_path):
        if not p.exists():
            raise DataError(f"missing file: {p}")
    with report_path.open() as fh:
        payload = json.load(fh)

    from fairsel.reward import RewardBreakdown

    logs = {}
    with episodes_path.open() as fh:
        header = fh.readline().strip().split(",")
        if tuple(header) != EPISODE_HEADER:
            raise DataError(f"unexpected episodes.csv header: {header}")
        for line in fh:
            parts = line.strip().split(",")
            e = int(parts[0])
            vals = [float(v) for v in parts[2:8]]
            size = int(parts[8])
            bd = RewardBreakdown(*vals)
            log = logs.setdefault(
                e, agent.EpisodeLog(e, [], [], 0.0, 0.0)
            )
            log.breakdowns.append(bd)
            # only sizes survive the CSV round trip, not the indices
            log.subsets.append(tuple(range(size)))
    ordered = [logs[e] for e in sorted(logs)]
    for log in ordered:
        log.total = sum(b.total for b in log.breakdowns)
        log.best_step_auc = max(b.auc for b in log.breakdowns)

    best = max(log.total for log in ordered)
    if abs(best - float(payload["best_total_reward"])) > 1e-9:
        raise DataError(
            "report.json best_total_reward does not match episodes.csv "
            f"({payload['best_total_reward']!r} vs {best!r})"
        )

    phases = bench.phase_summary(ordered, min(3, len(ordered)))
    print(f"{'phase':>5} {'episodes':>9} {'mean_reward':>14} "
          f"{'mean_size':>10} {'mean_indirect':>14}")
    for p in phases:
        print(
            f"{p.phase + 1:>5} {p.episodes:>9} {p.mean_reward:>14.4f} "
            f"{p.mean_subset_size:>10.2f} {p.mean_indirect:>14.4f}"
        )
    best_ep = max(ordered, key=lambda log: log.total)
    print(
        f"best episode {best_ep.index}: total={best_ep.total!r} "
        f"auc={best_ep.best_step_auc!r} "
        f"final_size={len(best_ep.final_subset)}"
    )
    print(f"best_subset={','.join(payload['best_subset'])}")
    return 0


# --- entry point ----------------------------------------------------------


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="fairsel",
        description="Fairness-aware feature selection with a REINFORCE "
                    "policy and correlation-graph bias audits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic CSV dataset")
    p.add_argument("--out", required=True)
    p.add_argument("--rows", type=int, default=4000)
    p.add_argument("--sensitive", type=int, default=2)
    p.add_argument("--proxies-per-sensitive", type=int, default=2)
    p.add_argument("--proxy-correlation", type=float, default=0.9)
    p.add_argument("--informative", type=int, default=5)
    p.add_argument("--noise", type=int, default=4)
    p.add_argument("--label-signal", type=float, default=2.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--target", default="label")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("train", help="train the feature-selection policy")
    p.add_argument("config")
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("benchmark", help="run baseline models")
    p.add_argument("config")
    p.add_argument("--out-dir", default=None)
    p.add_argument("--checkpoint", default=None)
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("bias-score", help="audit a feature list")
    p.add_argument("config")
    p.add_argument("--features", required=True,
                   help="comma-separated feature names")
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=cmd_bias_score)

    p = sub.add_parser("report", help="summarize a training run directory")
    p.add_argument("run_dir")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 4
    except FairselError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
