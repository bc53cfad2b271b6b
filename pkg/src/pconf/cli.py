"""Command-line entry points.

Subcommands: synth-overlap, synth-phi-error, train, predict, tune-k, plot.
Configuration for the synthetic drivers comes from an optional JSON file
(see ExperimentConfig.to_dict for the schema); CLI flags override fields,
and the PCONF_SEED environment variable overrides the config's master seed
(an explicit --seed flag wins over both).

Exit codes: 0 success, 1 usage/config error, 2 data error, 3 numeric
failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

from .confidence import DEFAULT_FLOOR
from .data import load_csv, load_feature_csv, LabeledDataset, PconfDataset
from .errors import (
    ContractError,
    DataFormatError,
    DivergedOptimizationError,
    InvalidDataError,
    InvalidSpecError,
    PconfError,
    PlotError,
    TuningError,
)
from .experiments import ExperimentConfig, run_overlap_experiment, run_phi_error_experiment
from .models import ModelKind, load_model, predict, save_model
from .optim import AdamConfig
from .plotting import plot_boundary_svg
from .risk import fit_pconf, fit_supervised
from .tune import TuneConfig, default_k_grid, tune_k

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3


def _add_adam_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--lr", type=float, default=1e-3, help="Adam learning rate")
    parser.add_argument("--epochs", type=int, default=5000, help="full-batch epochs")
    parser.add_argument("--weight-decay", type=float, default=0.0, help="decoupled weight decay")


def _add_kind_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--kind", choices=("linear", "kernel"), default="linear")
    parser.add_argument("--bandwidth", type=float, default=1.0, help="Gaussian kernel bandwidth")


def _adam_from_args(args) -> AdamConfig:
    return AdamConfig(learning_rate=args.lr, epochs=args.epochs, weight_decay=args.weight_decay)


def _kind_from_args(args) -> ModelKind:
    return ModelKind(kind=args.kind, bandwidth=args.bandwidth)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pconf",
        description="Positive-confidence classification: training, tuning, and synthetic sweeps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, helptext in (
        ("synth-overlap", "class-overlap accuracy sweep (skewed confidence)"),
        ("synth-phi-error", "robustness sweep against a misspecified phi"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", help="JSON experiment config file")
        p.add_argument("--out-dir", help="output directory (overrides config)")
        p.add_argument("--seed", type=int, help="master seed (overrides PCONF_SEED and config)")
        p.add_argument("--trials", type=int, help="trials per cell (overrides config)")
        p.add_argument("--jobs", type=int, help="worker processes (overrides config)")
        p.add_argument(
            "--skew-b", type=float, action="append", dest="skew_b",
            help="skew exponent b (repeatable; overrides config list)",
        )
        p.add_argument(
            "--phi-multiplier", type=float, action="append", dest="phi_multiplier",
            help="phi error multiplier c (repeatable; overrides config list)",
        )
        p.add_argument("--adjust-family", choices=("power", "additive"), dest="adjust_family")
        p.add_argument("--floor", type=float, help="confidence clip floor")
        p.add_argument("--k-grid-min", type=float, default=None)
        p.add_argument("--k-grid-max", type=float, default=None)
        p.add_argument("--k-grid-points", type=int, default=None)
        p.add_argument(
            "--fast", action="store_true",
            help="desk preset: half the epochs, 13-point k grid",
        )

    p = sub.add_parser("train", help="train a classifier from a CSV dataset")
    p.add_argument("--data", required=True, help="CSV with confidence (pconf) or label (supervised)")
    p.add_argument("--model-out", required=True, help="output model JSON path")
    p.add_argument("--loss-curve", help="optional CSV dump of (epoch, loss)")
    _add_kind_flags(p)
    _add_adam_flags(p)

    p = sub.add_parser("predict", help="append a prediction column to a feature CSV")
    p.add_argument("--data", required=True)
    p.add_argument("--model", required=True, help="model JSON path")
    p.add_argument("--out", required=True, help="output CSV path")

    p = sub.add_parser("tune-k", help="select the adjustment exponent against phi")
    p.add_argument("--train", required=True, dest="train_csv", help="pconf CSV (confidence column)")
    p.add_argument("--valid", required=True, dest="valid_csv", help="positive validation features CSV")
    p.add_argument("--phi", type=float, required=True, help="positive misclassification rate in [0, 1)")
    p.add_argument("--phi-multiplier", type=float, default=1.0, help="error multiplier c applied to phi")
    p.add_argument("--k-grid-min", type=float, default=0.125)
    p.add_argument("--k-grid-max", type=float, default=8.0)
    p.add_argument("--k-grid-points", type=int, default=25)
    p.add_argument("--adjust-family", choices=("power", "additive"), default="power")
    p.add_argument("--floor", type=float, default=DEFAULT_FLOOR)
    p.add_argument("--result-out", required=True, help="output TuneResult JSON path")
    p.add_argument("--curve-out", help="optional CSV of (k, fn_rate, squared_error)")
    p.add_argument("--model-out", help="optional model JSON for the selected k")
    _add_kind_flags(p)
    _add_adam_flags(p)

    p = sub.add_parser("plot", help="decision-boundary SVG for 2-D data")
    p.add_argument("--test", required=True, dest="test_csv", help="labeled CSV to scatter")
    p.add_argument(
        "--model", action="append", required=True, dest="model_specs",
        metavar="NAME=PATH", help="legend name and model JSON path (repeatable)",
    )
    p.add_argument("--out", required=True, help="output SVG path")

    return parser


# ---------------------------------------------------------------------------
# Subcommand bodies
# ---------------------------------------------------------------------------


def _resolve_experiment_config(args) -> ExperimentConfig:
    cfg = ExperimentConfig.from_json_file(args.config) if args.config else ExperimentConfig()
    updates = {}
    env_seed = os.environ.get("PCONF_SEED")
    if env_seed is not None:
        try:
            updates["master_seed"] = int(env_seed)
        except ValueError:
            raise InvalidSpecError(f"PCONF_SEED must be an integer, got {env_seed!r}") from None
    if args.seed is not None:
        updates["master_seed"] = args.seed
    if args.out_dir is not None:
        updates["output_dir"] = args.out_dir
    if args.trials is not None:
        updates["trials"] = args.trials
    if args.jobs is not None:
        updates["jobs"] = args.jobs
    if args.skew_b:
        updates["b_list"] = tuple(args.skew_b)
    if args.phi_multiplier:
        updates["c_list"] = tuple(args.phi_multiplier)
    if args.adjust_family is not None:
        updates["family"] = args.adjust_family
    if args.floor is not None:
        updates["floor"] = args.floor
    if any(v is not None for v in (args.k_grid_min, args.k_grid_max, args.k_grid_points)):
        updates["k_grid"] = default_k_grid(
            points=args.k_grid_points if args.k_grid_points is not None else 25,
            k_min=args.k_grid_min if args.k_grid_min is not None else 0.125,
            k_max=args.k_grid_max if args.k_grid_max is not None else 8.0,
        )
    if updates:
        cfg = ExperimentConfig.from_dict({**cfg.to_dict(), **_nest_updates(updates)})
    if args.fast:
        cfg = cfg.fast_preset()
    return cfg


def _nest_updates(updates: dict) -> dict:
    doc = dict(updates)
    if "b_list" in doc:
        doc["b_list"] = list(doc["b_list"])
    if "c_list" in doc:
        doc["c_list"] = list(doc["c_list"])
    if "k_grid" in doc:
        doc["k_grid"] = list(doc["k_grid"])
    return doc


def _cmd_synth(args, runner) -> int:
    cfg = _resolve_experiment_config(args)
    paths = runner(cfg)
    for key, value in sorted(paths.items()):
        print(f"{key}: {value}")
    return EXIT_OK


def _cmd_train(args) -> int:
    data = load_csv(args.data)
    cfg = _adam_from_args(args)
    kind = _kind_from_args(args)
    fit = fit_pconf if isinstance(data, PconfDataset) else fit_supervised
    model, result = fit(data, cfg, kind)
    if args.loss_curve:
        with open(args.loss_curve, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["epoch", "loss"])
            for epoch, loss in enumerate(result.losses, start=1):
                writer.writerow([epoch, repr(loss)])
    save_model(model, args.model_out)
    print(f"model: {args.model_out}")
    return EXIT_OK


def _cmd_predict(args) -> int:
    model = load_model(args.model)
    features = load_feature_csv(args.data)
    preds = predict(model, features)
    with open(args.data, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    if len(body) != len(preds):
        raise DataFormatError(f"{args.data} changed size while predicting")
    header = header + ["prediction"]
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row, pred in zip(body, preds):
            writer.writerow(row + [int(pred)])
    print(f"predictions: {args.out}")
    return EXIT_OK


def _cmd_tune_k(args) -> int:
    train = load_csv(args.train_csv)
    if not isinstance(train, PconfDataset):
        raise DataFormatError(f"{args.train_csv} must carry a confidence column")
    valid_pos = load_feature_csv(args.valid_csv)
    grid = default_k_grid(points=args.k_grid_points, k_min=args.k_grid_min, k_max=args.k_grid_max)
    cfg = TuneConfig(
        phi=args.phi * args.phi_multiplier,
        grid=grid,
        model_kind=_kind_from_args(args),
        adam_cfg=_adam_from_args(args),
        family=args.adjust_family,
        floor=args.floor,
    )
    result = tune_k(train, valid_pos, cfg)
    doc = {
        "k_star": result.k_star,
        "phi": cfg.phi,
        "family": cfg.family,
        "objective_values": [
            {"k": o.k, "fn_rate": o.fn_rate, "squared_error": o.squared_error}
            for o in result.objective_values
        ],
    }
    with open(args.result_out, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    if args.curve_out:
        with open(args.curve_out, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["k", "fn_rate", "squared_error"])
            for o in result.objective_values:
                writer.writerow([repr(o.k), repr(o.fn_rate), repr(o.squared_error)])
    if args.model_out:
        save_model(result.model, args.model_out)
    print(f"k_star: {result.k_star}")
    return EXIT_OK


def _cmd_plot(args) -> int:
    data = load_csv(args.test_csv)
    if not isinstance(data, LabeledDataset):
        raise DataFormatError(f"{args.test_csv} must carry a label column")
    models = []
    for spec in args.model_specs:
        name, sep, path = spec.partition("=")
        if not sep or not name or not path:
            raise InvalidSpecError(f"--model expects NAME=PATH, got {spec!r}")
        models.append((name, load_model(path)))
    plot_boundary_svg(models, data, args.out)
    print(f"plot: {args.out}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors; remap
        return EXIT_OK if exc.code == 0 else EXIT_USAGE

    try:
        if args.command == "synth-overlap":
            return _cmd_synth(args, run_overlap_experiment)
        if args.command == "synth-phi-error":
            return _cmd_synth(args, run_phi_error_experiment)
        if args.command == "train":
            return _cmd_train(args)
        if args.command == "predict":
            return _cmd_predict(args)
        if args.command == "tune-k":
            return _cmd_tune_k(args)
        if args.command == "plot":
            return _cmd_plot(args)
        raise InvalidSpecError(f"unknown command {args.command!r}")
    except (DataFormatError, InvalidDataError, ContractError, PlotError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (DivergedOptimizationError, TuningError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except InvalidSpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PconfError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
