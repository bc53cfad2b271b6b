"""Synthetic Gaussian experiment drivers at desk scale.

Protocol per trial: draw four independent splits (train / positive-only
validation / test / confidence-estimation), fit the confidence estimator on
the held-out set, distort its probabilistic output by the b-th power, clip,
then train and evaluate three methods: original positive-confidence
classification (k = 1), the adjusted variant (k tuned against phi), and the
fully-supervised baseline.

phi_hat is computed in a first pass as the mean supervised FN rate across
trials for each negative-mean setting, then reused for every tuning run in
the second pass. The phi-error driver repeats the second pass with phi_hat
scaled by each multiplier c.

Determinism: the split seed for (mu index, trial) is
master_seed + 16 * (mu_index * trials + trial); the four per-split seeds are
fixed offsets of that (see data.make_splits). Workers are pure, results are
aggregated by index, so report files are byte-identical for a fixed config
and seed regardless of worker count.
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .confidence import clip, estimate_confidence, skew, SkewSpec
from .data import GaussianSpec, LabeledDataset, PconfDataset, SplitSpec, make_splits
from .errors import InvalidSpecError
from .metrics import accuracy, fn_rate, paired_t_test, summarize
from .models import LinearModel, ModelKind, sigmoid
from .optim import AdamConfig
from .plotting import plot_boundary_svg
from .risk import train_pconf, train_supervised
from .tune import TuneConfig, default_k_grid, evaluate_k_candidates, select_k

__all__ = ["ExperimentConfig", "run_overlap_experiment", "run_phi_error_experiment"]

SEED_STRIDE = 16  # > the 4 per-split offsets, so trial streams never overlap

PAPER_MU_NEG = ((1.0, 1.0), (1.5, 1.5), (2.0, 2.0), (2.5, 2.5), (3.0, 3.0))
PAPER_B = (0.3, 0.5, 2.0, 4.0)
# paper sweeps c in {0.5, 0.7, 1.3, 1.5}; 1.0 is kept as the no-error reference
PAPER_C = (0.5, 0.7, 1.0, 1.3, 1.5)


@dataclass(frozen=True)
class ExperimentConfig:
    mu_pos: tuple = (0.0, 0.0)
    mu_neg_list: tuple = PAPER_MU_NEG
    b_list: tuple = PAPER_B
    c_list: tuple = PAPER_C
    trials: int = 10
    master_seed: int = 42
    n_train_pos: int = 1000
    n_train_neg: int = 1000
    n_valid_pos: int = 1000
    n_test_pos: int = 1000
    n_test_neg: int = 1000
    n_confest_pos: int = 1000
    n_confest_neg: int = 1000
    adam: AdamConfig = AdamConfig(epochs=5000)
    k_grid: tuple = field(default_factory=default_k_grid)
    family: str = "power"
    floor: float = 0.01
    l2_strength: float = 1e-4
    model_kind: ModelKind = ModelKind()
    jobs: int = 1
    output_dir: str = "results"

    def __post_init__(self):
        if self.trials < 1:
            raise InvalidSpecError(f"trials must be >= 1, got {self.trials}")
        for name in ("mu_neg_list", "b_list", "c_list", "k_grid"):
            if not getattr(self, name):
                raise InvalidSpecError(f"{name} must be non-empty")
        if self.jobs < 1:
            raise InvalidSpecError(f"jobs must be >= 1, got {self.jobs}")
        object.__setattr__(self, "mu_pos", tuple(float(v) for v in self.mu_pos))
        object.__setattr__(
            self, "mu_neg_list", tuple(tuple(float(v) for v in mu) for mu in self.mu_neg_list)
        )
        object.__setattr__(self, "b_list", tuple(float(b) for b in self.b_list))
        object.__setattr__(self, "c_list", tuple(float(c) for c in self.c_list))
        object.__setattr__(self, "k_grid", tuple(float(k) for k in self.k_grid))

    def fast_preset(self) -> "ExperimentConfig":
        """Halved epochs and a 13-point k grid, for CI-scale runs."""
        return replace(
            self,
            adam=replace(self.adam, epochs=max(1, self.adam.epochs // 2)),
            k_grid=default_k_grid(points=13),
        )

    def split_spec(self, mu_idx: int, trial: int) -> SplitSpec:
        seed = self.master_seed + SEED_STRIDE * (mu_idx * self.trials + trial)
        return SplitSpec(
            n_train_pos=self.n_train_pos,
            n_train_neg=self.n_train_neg,
            n_valid_pos=self.n_valid_pos,
            n_test_pos=self.n_test_pos,
            n_test_neg=self.n_test_neg,
            n_confest_pos=self.n_confest_pos,
            n_confest_neg=self.n_confest_neg,
            seed=seed,
        )

    def gaussian_spec(self, mu_idx: int) -> GaussianSpec:
        return GaussianSpec(mu_pos=np.asarray(self.mu_pos), mu_neg=np.asarray(self.mu_neg_list[mu_idx]))

    def to_dict(self) -> dict:
        return {
            "mu_pos": list(self.mu_pos),
            "mu_neg_list": [list(mu) for mu in self.mu_neg_list],
            "b_list": list(self.b_list),
            "c_list": list(self.c_list),
            "trials": self.trials,
            "master_seed": self.master_seed,
            "split": {
                "n_train_pos": self.n_train_pos,
                "n_train_neg": self.n_train_neg,
                "n_valid_pos": self.n_valid_pos,
                "n_test_pos": self.n_test_pos,
                "n_test_neg": self.n_test_neg,
                "n_confest_pos": self.n_confest_pos,
                "n_confest_neg": self.n_confest_neg,
            },
            "adam": {
                "learning_rate": self.adam.learning_rate,
                "beta1": self.adam.beta1,
                "beta2": self.adam.beta2,
                "epsilon": self.adam.epsilon,
                "epochs": self.adam.epochs,
                "weight_decay": self.adam.weight_decay,
            },
            "k_grid": list(self.k_grid),
            "family": self.family,
            "floor": self.floor,
            "l2_strength": self.l2_strength,
            "model_kind": {"kind": self.model_kind.kind, "bandwidth": self.model_kind.bandwidth},
            "jobs": self.jobs,
            "output_dir": self.output_dir,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        kwargs = {}
        simple = (
            "mu_pos",
            "mu_neg_list",
            "b_list",
            "c_list",
            "trials",
            "master_seed",
            "k_grid",
            "family",
            "floor",
            "l2_strength",
            "jobs",
            "output_dir",
        )
        for key in simple:
            if key in doc:
                kwargs[key] = doc[key]
        for key, value in doc.get("split", {}).items():
            kwargs[key] = value
        if "adam" in doc:
            kwargs["adam"] = AdamConfig(**doc["adam"])
        if "model_kind" in doc:
            kwargs["model_kind"] = ModelKind(**doc["model_kind"])
        unknown = set(doc) - set(simple) - {"split", "adam", "model_kind"}
        if unknown:
            raise InvalidSpecError(f"unknown config fields: {sorted(unknown)}")
        return cls(**kwargs)

    @classmethod
    def from_json_file(cls, path) -> "ExperimentConfig":
        with open(path, encoding="utf-8") as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise InvalidSpecError(f"config file {path} is not valid JSON: {exc}") from exc
        return cls.from_dict(doc)


# ---------------------------------------------------------------------------
# Trial workers (top-level so a process pool can pickle them)
# ---------------------------------------------------------------------------


def _base_trial(task) -> dict:
    """Pass 1: supervised baseline metrics plus the fitted confidence model."""
    cfg, mu_idx, trial = task
    spec = cfg.gaussian_spec(mu_idx)
    train, _valid, test, conf_est = make_splits(spec, cfg.split_spec(mu_idx, trial))
    sup_model = train_supervised(train, cfg.adam, cfg.model_kind)
    conf_pred = estimate_confidence(conf_est, cfg.l2_strength, cfg.adam)
    out = {
        "sup_acc": accuracy(sup_model, test),
        "sup_fn": fn_rate(sup_model, test),
        "conf_alpha": conf_pred.model.alpha.tolist(),
        "conf_beta": conf_pred.model.beta,
    }
    if isinstance(sup_model, LinearModel):
        out["sup_alpha"] = sup_model.alpha.tolist()
        out["sup_beta"] = sup_model.beta
    return out


def _skewed_train_set(cfg, spec, split, base, b: float):
    train, valid_pos, test, _conf = make_splits(spec, split)
    pos = train.features[train.labels == 1]
    r = sigmoid(pos @ np.asarray(base["conf_alpha"]) + base["conf_beta"])
    r = clip(r, cfg.floor)
    r = clip(skew(r, SkewSpec(exponent_b=b)), cfg.floor)
    return PconfDataset(pos, r), valid_pos, test


def _overlap_cell(task) -> dict:
    """Pass 2 (class-overlap sweep): original and adjusted classifiers for
    one (mu, b, trial) cell."""
    cfg, mu_idx, b, trial, base, phi_hat = task
    spec = cfg.gaussian_spec(mu_idx)
    pconf_data, valid_pos, test = _skewed_train_set(
        cfg, spec, cfg.split_spec(mu_idx, trial), base, b
    )
    o_model = train_pconf(pconf_data, cfg.adam, cfg.model_kind)
    tune_cfg = TuneConfig(
        phi=phi_hat,
        grid=cfg.k_grid,
        model_kind=cfg.model_kind,
        adam_cfg=cfg.adam,
        family=cfg.family,
        floor=cfg.floor,
    )
    result = select_k(
        evaluate_k_candidates(pconf_data, valid_pos, tune_cfg), phi_hat, cfg.family
    )
    out = {
        "o_acc": accuracy(o_model, test),
        "a_acc": accuracy(result.model, test),
        "k_star": result.k_star,
    }
    if isinstance(o_model, LinearModel):
        out["o_alpha"] = o_model.alpha.tolist()
        out["o_beta"] = o_model.beta
        out["a_alpha"] = result.model.alpha.tolist()
        out["a_beta"] = result.model.beta
    return out


def _phi_error_cell(task) -> dict:
    """Pass 2 (phi-error sweep): candidates are trained once per cell and
    re-selected for every multiplier c."""
    cfg, mu_idx, b, trial, base, phi_hat = task
    spec = cfg.gaussian_spec(mu_idx)
    pconf_data, valid_pos, test = _skewed_train_set(
        cfg, spec, cfg.split_spec(mu_idx, trial), base, b
    )
    tune_cfg = TuneConfig(
        phi=phi_hat,
        grid=cfg.k_grid,
        model_kind=cfg.model_kind,
        adam_cfg=cfg.adam,
        family=cfg.family,
        floor=cfg.floor,
    )
    candidates = evaluate_k_candidates(pconf_data, valid_pos, tune_cfg)
    out = {"a_acc_by_c": [], "k_by_c": [], "a_params_by_c": []}
    for c in cfg.c_list:
        result = select_k(candidates, c * phi_hat, cfg.family)
        out["a_acc_by_c"].append(accuracy(result.model, test))
        out["k_by_c"].append(result.k_star)
        if isinstance(result.model, LinearModel):
            out["a_params_by_c"].append((result.model.alpha.tolist(), result.model.beta))
        else:
            out["a_params_by_c"].append(None)
    return out


def _map_tasks(fn, tasks, jobs: int):
    if jobs == 1:
        return [fn(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks, chunksize=1))


def _run_base_pass(cfg: ExperimentConfig):
    tasks = [
        (cfg, mu_idx, trial)
        for mu_idx in range(len(cfg.mu_neg_list))
        for trial in range(cfg.trials)
    ]
    flat = _map_tasks(_base_trial, tasks, cfg.jobs)
    by_mu = [
        flat[mu_idx * cfg.trials : (mu_idx + 1) * cfg.trials]
        for mu_idx in range(len(cfg.mu_neg_list))
    ]
    phi_hat = [float(np.mean([t["sup_fn"] for t in trials])) for trials in by_mu]
    return by_mu, phi_hat


def _mu_label(mu) -> str:
    return ";".join(repr(float(v)) for v in mu)


def _bool_cell(value: bool) -> str:
    return "true" if value else "false"


def _write_rows(path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _plot_first_cell(cfg, test: LabeledDataset, named_params, path) -> None:
    if cfg.model_kind.kind != "linear" or len(cfg.mu_pos) != 2:
        return
    models = [
        (name, LinearModel(alpha=np.asarray(alpha), beta=beta))
        for name, (alpha, beta) in named_params
    ]
    plot_boundary_svg(models, test, path)


def run_overlap_experiment(cfg: ExperimentConfig) -> dict:
    """Class-overlap sweep (accuracy table plus boundary figure).

    Returns a dict of output paths. Any cell failure would propagate; all
    computation is deterministic in (config, master_seed).
    """
    out_dir = Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    base_by_mu, phi_hat = _run_base_pass(cfg)

    cell_tasks = [
        (cfg, mu_idx, b, trial, base_by_mu[mu_idx][trial], phi_hat[mu_idx])
        for mu_idx in range(len(cfg.mu_neg_list))
        for b in cfg.b_list
        for trial in range(cfg.trials)
    ]
    flat = _map_tasks(_overlap_cell, cell_tasks, cfg.jobs)

    header = [
        "mu_neg",
        "b",
        "trials",
        "o_pconf_mean",
        "o_pconf_std",
        "a_pconf_mean",
        "a_pconf_std",
        "supervised_mean",
        "supervised_std",
        "phi_hat_mean",
        "phi_hat_std",
        "t_statistic",
        "significant_at_5pct",
        "best_methods",
    ]
    rows = []
    idx = 0
    for mu_idx, mu in enumerate(cfg.mu_neg_list):
        sup = summarize([100.0 * t["sup_acc"] for t in base_by_mu[mu_idx]])
        fn_sum = summarize([100.0 * t["sup_fn"] for t in base_by_mu[mu_idx]])
        for b in cfg.b_list:
            cells = flat[idx : idx + cfg.trials]
            idx += cfg.trials
            o = summarize([100.0 * c["o_acc"] for c in cells])
            a = summarize([100.0 * c["a_acc"] for c in cells])
            ttest = paired_t_test(o.values, a.values)
            if ttest.undefined or not ttest.significant_at_5pct:
                best = "o_pconf;a_pconf"
            else:
                best = "a_pconf" if a.mean >= o.mean else "o_pconf"
            rows.append(
                [
                    _mu_label(mu),
                    repr(b),
                    cfg.trials,
                    repr(o.mean),
                    repr(o.std),
                    repr(a.mean),
                    repr(a.std),
                    repr(sup.mean),
                    repr(sup.std),
                    repr(fn_sum.mean),
                    repr(fn_sum.std),
                    repr(ttest.t_statistic),
                    _bool_cell(ttest.significant_at_5pct),
                    best,
                ]
            )

    results_csv = out_dir / "results.csv"
    _write_rows(results_csv, header, rows)

    paths = {"results_csv": str(results_csv)}
    first = flat[0]
    if "o_alpha" in first and "sup_alpha" in base_by_mu[0][0]:
        spec = cfg.gaussian_spec(0)
        _train, _valid, test, _conf = make_splits(spec, cfg.split_spec(0, 0))
        named = [
            ("original pconf", (first["o_alpha"], first["o_beta"])),
            ("adjusted pconf", (first["a_alpha"], first["a_beta"])),
            ("supervised", (base_by_mu[0][0]["sup_alpha"], base_by_mu[0][0]["sup_beta"])),
        ]
        boundary_svg = out_dir / "boundary.svg"
        _plot_first_cell(cfg, test, named, boundary_svg)
        paths["boundary_svg"] = str(boundary_svg)
    return paths


def run_phi_error_experiment(cfg: ExperimentConfig) -> dict:
    """Robustness sweep: tuning against phi_hat scaled by each multiplier c."""
    out_dir = Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    base_by_mu, phi_hat = _run_base_pass(cfg)

    cell_tasks = [
        (cfg, mu_idx, b, trial, base_by_mu[mu_idx][trial], phi_hat[mu_idx])
        for b in cfg.b_list
        for mu_idx in range(len(cfg.mu_neg_list))
        for trial in range(cfg.trials)
    ]
    flat = _map_tasks(_phi_error_cell, cell_tasks, cfg.jobs)

    header = [
        "mu_neg",
        "b",
        "c",
        "trials",
        "a_pconf_mean",
        "a_pconf_std",
        "phi_hat_mean",
        "phi_target",
        "t_statistic_vs_c1",
        "comparable_to_c1",
    ]
    rows = []
    idx = 0
    c_ref = 1.0
    for b in cfg.b_list:
        for mu_idx, mu in enumerate(cfg.mu_neg_list):
            cells = flat[idx : idx + cfg.trials]
            idx += cfg.trials
            acc_by_c = {
                c: [100.0 * cell["a_acc_by_c"][ci] for cell in cells]
                for ci, c in enumerate(cfg.c_list)
            }
            ref = acc_by_c.get(c_ref)
            for c in cfg.c_list:
                summary = summarize(acc_by_c[c])
                if ref is None:
                    t_cell, comparable = "", ""
                elif c == c_ref:
                    t_cell, comparable = "", _bool_cell(True)
                else:
                    ttest = paired_t_test(acc_by_c[c], ref)
                    t_cell = repr(ttest.t_statistic)
                    comparable = _bool_cell(ttest.undefined or not ttest.significant_at_5pct)
                rows.append(
                    [
                        _mu_label(mu),
                        repr(b),
                        repr(c),
                        cfg.trials,
                        repr(summary.mean),
                        repr(summary.std),
                        repr(100.0 * phi_hat[mu_idx]),
                        repr(100.0 * c * phi_hat[mu_idx]),
                        t_cell,
                        comparable,
                    ]
                )

    results_csv = out_dir / "results.csv"
    _write_rows(results_csv, header, rows)

    paths = {"results_csv": str(results_csv)}
    first = flat[0]
    if first["a_params_by_c"][0] is not None and "sup_alpha" in base_by_mu[0][0]:
        spec = cfg.gaussian_spec(0)
        _train, _valid, test, _conf = make_splits(spec, cfg.split_spec(0, 0))
        named = [
            ("adjusted pconf", first["a_params_by_c"][0]),
            ("supervised", (base_by_mu[0][0]["sup_alpha"], base_by_mu[0][0]["sup_beta"])),
        ]
        boundary_svg = out_dir / "boundary.svg"
        _plot_first_cell(cfg, test, named, boundary_svg)
        paths["boundary_svg"] = str(boundary_svg)
    return paths
