"""Pipeline stages as composable subcommands over the CSV and model formats.

Exit codes: 0 success, 1 data or validation error, 2 usage error.
Diagnostics go to stderr; results go to files or stdout.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

from .balance import BalanceTargets, resample, smote
from .dataset import (
    ATTRIBUTE_NAMES,
    CsvFormatError,
    Dataset,
    label_from_car,
    load_csv,
    write_csv,
)
from .datagen import GeneratorSpec, generate
from .evaluate import cross_validate, evaluate_on, render_report, summary_lines
from .features import greedy_stepwise
from .tree import LearnerParams, grow, predict
from .tree_io import ModelFormatError, parse, render_text, serialize

SEED_ENV_VAR = "SOLVTREE_SEED"


@dataclass(frozen=True)
class PipelineConfig:
    """File-loadable defaults for the pipeline; flags always win over these."""

    seed: int = 0
    folds: int = 10
    feature_bins: int = 10
    learner: LearnerParams = LearnerParams()
    balance: BalanceTargets | None = None
    paths: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {
            "seed": self.seed,
            "folds": self.folds,
            "feature_bins": self.feature_bins,
            "learner": {
                "confidence_factor": self.learner.confidence_factor,
                "min_leaf": self.learner.min_leaf,
                "max_depth": self.learner.max_depth,
            },
            "balance": None,
            "paths": dict(self.paths),
        }
        if self.balance is not None:
            d["balance"] = {
                "mode": self.balance.mode,
                "bias_to_uniform": self.balance.bias_to_uniform,
                "sample_size_percent": self.balance.sample_size_percent,
                "target_counts": list(self.balance.target_counts)
                if self.balance.target_counts is not None
                else None,
                "k_neighbors": self.balance.k_neighbors,
                "seed": self.balance.seed,
            }
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "PipelineConfig":
        learner = d.get("learner", {})
        balance = d.get("balance")
        targets = None
        if balance is not None:
            raw = balance.get("target_counts")
            targets = tuple(raw) if raw is not None else None
        return cls(
            seed=int(d.get("seed", 0)),
            folds=int(d.get("folds", 10)),
            feature_bins=int(d.get("feature_bins", 10)),
            learner=LearnerParams(
                confidence_factor=float(learner.get("confidence_factor", 0.25)),
                min_leaf=int(learner.get("min_leaf", 2)),
                max_depth=learner.get("max_depth"),
            ),
            balance=None
            if balance is None
            else BalanceTargets(
                mode=balance["mode"],
                bias_to_uniform=float(balance.get("bias_to_uniform", 1.0)),
                sample_size_percent=float(balance.get("sample_size_percent", 100.0)),
                target_counts=targets,
                k_neighbors=int(balance.get("k_neighbors", 5)),
                seed=int(balance.get("seed", 0)),
            ),
            paths=dict(d.get("paths", {})),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "PipelineConfig":
        return cls.from_dict(json.loads(text))

    @classmethod
    def from_file(cls, path) -> "PipelineConfig":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


class CliUsageError(Exception):
    pass


def _counts(text: str) -> tuple[int, int, int, int]:
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("expected four comma-separated integers")
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"non-integer count in {text!r}") from None


def _attr_list(text: str) -> tuple[str, ...]:
    names = tuple(s.strip() for s in text.split(",") if s.strip())
    for name in names:
        if name not in ATTRIBUTE_NAMES:
            raise argparse.ArgumentTypeError(f"unknown attribute {name!r}")
    if not names:
        raise argparse.ArgumentTypeError("attribute list is empty")
    return names


def _input_path(text: str) -> str:
    if not Path(text).is_file():
        raise argparse.ArgumentTypeError(f"input file not found: {text}")
    return text


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _write_dataset(ds: Dataset, path: str | None) -> None:
    if path is None or path == "-":
        write_csv(ds, sys.stdout)
    else:
        write_csv(ds, path)


def _config(args) -> PipelineConfig:
    if getattr(args, "config", None):
        if not Path(args.config).is_file():
            raise CliUsageError(f"config file not found: {args.config}")
        return PipelineConfig.from_file(args.config)
    return PipelineConfig()


def _resolve_seed(args, cfg: PipelineConfig) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    if getattr(args, "config", None):
        return cfg.seed
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise CliUsageError(f"{SEED_ENV_VAR} must be an integer, got {env!r}") from None
    return cfg.seed


def _resolve_input(args, cfg: PipelineConfig, key: str = "input") -> str:
    path = getattr(args, key.replace("-", "_"), None) or cfg.paths.get(key)
    if path is None:
        raise CliUsageError(f"no --{key} given and the config provides no '{key}' path")
    if not Path(path).is_file():
        raise CliUsageError(f"input file not found: {path}")
    return path


def _learner(args, cfg: PipelineConfig) -> LearnerParams:
    return LearnerParams(
        confidence_factor=args.cf if args.cf is not None else cfg.learner.confidence_factor,
        min_leaf=args.min_leaf if args.min_leaf is not None else cfg.learner.min_leaf,
        max_depth=args.max_depth if args.max_depth is not None else cfg.learner.max_depth,
    )


def _cmd_generate(args) -> int:
    cfg = _config(args)
    spec = GeneratorSpec(
        class_counts=args.counts,
        separation=args.separation,
        n_attributes=args.n_attributes,
        seed=_resolve_seed(args, cfg),
    )
    _write_dataset(generate(spec), args.output or cfg.paths.get("output"))
    return 0


def _cmd_label(args) -> int:
    cfg = _config(args)
    ds = load_csv(_resolve_input(args, cfg))
    relabeled = tuple(replace(r, label=label_from_car(r.car)) for r in ds.records)
    _write_dataset(Dataset(relabeled, ds.schema), args.output or cfg.paths.get("output"))
    return 0


def _cmd_select_features(args) -> int:
    cfg = _config(args)
    ds = load_csv(_resolve_input(args, cfg), expect_labels=True)
    bins = args.bins if args.bins is not None else cfg.feature_bins
    result = greedy_stepwise(ds, bins)
    print(",".join(result.selected))
    print(f"merit={result.merit!r}")
    return 0


def _cmd_balance(args) -> int:
    cfg = _config(args)
    mode = args.mode or (cfg.balance.mode if cfg.balance else None)
    if mode is None:
        raise CliUsageError("no --mode given and the config provides no balance mode")
    ds = load_csv(_resolve_input(args, cfg), expect_labels=True)
    seed = _resolve_seed(args, cfg)
    cfg_bal = cfg.balance or BalanceTargets(mode="resample")
    if mode == "resample":
        bias = args.bias if args.bias is not None else cfg_bal.bias_to_uniform
        percent = args.percent if args.percent is not None else cfg_bal.sample_size_percent
        out = resample(ds, bias, percent, seed)
    elif mode == "smote":
        targets = args.targets if args.targets is not None else cfg_bal.target_counts
        if targets is None:
            raise CliUsageError("smote mode needs --targets a,b,c,d")
        k = args.k_neighbors if args.k_neighbors is not None else cfg_bal.k_neighbors
        out = smote(ds, targets, k, seed)
    else:
        raise CliUsageError(f"unknown balance mode {mode!r}")
    _write_dataset(out, args.output or cfg.paths.get("output"))
    return 0


def _cmd_train(args) -> int:
    cfg = _config(args)
    ds = load_csv(_resolve_input(args, cfg), expect_labels=True, allow_duplicates=True)
    if args.attributes:
        ds = ds.with_schema(args.attributes)
    model = grow(ds, _learner(args, cfg))
    _write_text(args.output or cfg.paths.get("model"), serialize(model))
    return 0


def _balance_from_args(args, cfg: PipelineConfig, seed: int) -> BalanceTargets | None:
    if args.balance_mode is None:
        return cfg.balance
    if args.balance_mode == "none":
        return None
    if args.balance_mode == "smote" and args.targets is None:
        raise CliUsageError("smote balancing needs --targets a,b,c,d")
    return BalanceTargets(
        mode=args.balance_mode,
        bias_to_uniform=args.bias if args.bias is not None else 1.0,
        sample_size_percent=args.percent if args.percent is not None else 100.0,
        target_counts=args.targets,
        k_neighbors=args.k_neighbors if args.k_neighbors is not None else 5,
        seed=seed,
    )


def _cmd_cross_validate(args) -> int:
    cfg = _config(args)
    ds = load_csv(_resolve_input(args, cfg), expect_labels=True, allow_duplicates=True)
    if args.attributes:
        ds = ds.with_schema(args.attributes)
    seed = _resolve_seed(args, cfg)
    folds = args.folds if args.folds is not None else cfg.folds
    report = cross_validate(
        ds, folds, _learner(args, cfg), _balance_from_args(args, cfg, seed), seed
    )
    _write_text(args.report or cfg.paths.get("report"), render_report(report))
    summary_path = args.summary or cfg.paths.get("summary")
    if summary_path:
        _write_text(summary_path, summary_lines(report))
    return 0


def _cmd_evaluate(args) -> int:
    cfg = _config(args)
    model = parse(Path(_resolve_input(args, cfg, "model")).read_text(encoding="utf-8"))
    test = load_csv(_resolve_input(args, cfg, "test"), expect_labels=True, allow_duplicates=True)
    report = evaluate_on(model, test)
    _write_text(args.report or cfg.paths.get("report"), render_report(report))
    summary_path = args.summary or cfg.paths.get("summary")
    if summary_path:
        _write_text(summary_path, summary_lines(report))
    return 0


def _cmd_predict(args) -> int:
    cfg = _config(args)
    model = parse(Path(_resolve_input(args, cfg, "model")).read_text(encoding="utf-8"))
    ds = load_csv(_resolve_input(args, cfg), allow_duplicates=True)
    lines = []
    for r in ds.records:
        cls, probs = predict(model, r)
        cid = r.company_id or ""
        year = "" if r.year is None else str(r.year)
        lines.append(
            f"{cid},{year},{cls.csv_name}," + ",".join(repr(float(p)) for p in probs)
        )
    _write_text(args.output or cfg.paths.get("output"), "\n".join(lines) + "\n")
    return 0


def _cmd_render_tree(args) -> int:
    cfg = _config(args)
    model = parse(Path(_resolve_input(args, cfg, "model")).read_text(encoding="utf-8"))
    _write_text(args.output or cfg.paths.get("output"), render_text(model))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="random seed (non-negative)")
    common.add_argument("--config", default=None, help="JSON pipeline config supplying defaults")

    learner = argparse.ArgumentParser(add_help=False)
    learner.add_argument("--cf", type=float, default=None, help="pruning confidence factor")
    learner.add_argument("--min-leaf", type=int, default=None, help="minimum records per split side")
    learner.add_argument("--max-depth", type=int, default=None, help="depth cap, unlimited when absent")
    learner.add_argument(
        "--attributes", type=_attr_list, default=None, help="restrict the schema, e.g. V1,V3,V7"
    )

    balance_flags = argparse.ArgumentParser(add_help=False)
    balance_flags.add_argument("--bias", type=float, default=None, help="bias toward uniform in [0, 1]")
    balance_flags.add_argument("--percent", type=float, default=None, help="output size as percent of input")
    balance_flags.add_argument("--targets", type=_counts, default=None, help="per-class target counts a,b,c,d")
    balance_flags.add_argument(
        "--k", "--k-neighbors", dest="k_neighbors", type=int, default=None,
        help="SMOTE neighbor count",
    )

    parser = argparse.ArgumentParser(
        prog="solvtree",
        description="Solvency-band classification pipeline: generate, label, balance, train, evaluate.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", parents=[common], help="write a seeded synthetic dataset CSV")
    p.add_argument("--counts", type=_counts, required=True, help="per-class record counts a,b,c,d")
    p.add_argument("--separation", type=float, default=6.0, help="class mean spacing in within-class sd")
    p.add_argument("--n-attributes", type=int, default=11, help="number of schema attributes (1..11)")
    p.add_argument("-o", "--output", default=None, help="output CSV path (stdout when absent)")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("label", parents=[common], help="derive class labels from CAR bands")
    p.add_argument("--input", type=_input_path, default=None, help="input CSV")
    p.add_argument("-o", "--output", default=None, help="output CSV path (stdout when absent)")
    p.set_defaults(func=_cmd_label)

    p = sub.add_parser(
        "select-features", parents=[common], help="greedy correlation-based attribute selection"
    )
    p.add_argument("--input", type=_input_path, default=None, help="labeled input CSV")
    p.add_argument("--bins", type=int, default=None, help="equal-frequency bins for correlation")
    p.set_defaults(func=_cmd_select_features)

    p = sub.add_parser(
        "balance", parents=[common, balance_flags], help="rebalance classes by resampling or SMOTE"
    )
    p.add_argument("--input", type=_input_path, default=None, help="labeled input CSV")
    p.add_argument("--mode", choices=["resample", "smote"], default=None)
    p.add_argument("-o", "--output", default=None, help="output CSV path (stdout when absent)")
    p.set_defaults(func=_cmd_balance)

    p = sub.add_parser("train", parents=[common, learner], help="fit and prune a decision tree")
    p.add_argument("--input", type=_input_path, default=None, help="labeled training CSV")
    p.add_argument("-o", "--output", default=None, help="model file path (stdout when absent)")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser(
        "cross-validate", parents=[common, learner, balance_flags],
        help="stratified k-fold evaluation with optional per-fold balancing",
    )
    p.add_argument("--input", type=_input_path, default=None, help="labeled input CSV")
    p.add_argument("--folds", type=int, default=None)
    p.add_argument(
        "--balance-mode", choices=["resample", "smote", "none"], default=None,
        help="balance each fold's training portion",
    )
    p.add_argument("--report", default=None, help="report path (stdout when absent)")
    p.add_argument("--summary", default=None, help="key=value summary path")
    p.set_defaults(func=_cmd_cross_validate)

    p = sub.add_parser("evaluate", parents=[common], help="score a model on a labeled test CSV")
    p.add_argument("--model", type=_input_path, default=None, help="model file")
    p.add_argument("--test", type=_input_path, default=None, help="labeled test CSV")
    p.add_argument("--report", default=None, help="report path (stdout when absent)")
    p.add_argument("--summary", default=None, help="key=value summary path")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("predict", parents=[common], help="classify records with a saved model")
    p.add_argument("--model", type=_input_path, default=None, help="model file")
    p.add_argument("--input", type=_input_path, default=None, help="input CSV")
    p.add_argument("-o", "--output", default=None, help="output path (stdout when absent)")
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("render-tree", parents=[common], help="print a model as indented text")
    p.add_argument("--model", type=_input_path, default=None, help="model file")
    p.add_argument("-o", "--output", default=None, help="output path (stdout when absent)")
    p.set_defaults(func=_cmd_render_tree)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed usage or help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CliUsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(f"run 'solvtree {args.command} --help' for usage", file=sys.stderr)
        return 2
    except (CsvFormatError, ModelFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
