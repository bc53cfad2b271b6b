"""Positive-confidence (Pconf) binary classification.

Learning a binary classifier from positive samples and their confidence
r_i = p(y=+1 | x_i) alone, via the reweighted logistic risk; an adjusted
variant corrects skewed confidence by the power family r^k, with k selected
against the assumed misclassification rate of positive samples; plus a
synthetic-Gaussian experiment harness, metrics, and reporting.
"""

from .confidence import (
    AdjustmentSpec,
    ConfidencePredictor,
    SkewSpec,
    adjust,
    clip,
    confidence_from_drowsiness,
    estimate_confidence,
    skew,
)
from .data import (
    GaussianSpec,
    LabeledDataset,
    PconfDataset,
    SplitSpec,
    gen_gaussian_dataset,
    load_csv,
    load_feature_csv,
    make_splits,
    true_gaussian_posterior,
    write_csv,
)
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
from .metrics import (
    TrialSummary,
    TTestResult,
    accuracy,
    f_measure_negative_class,
    fn_rate,
    paired_t_test,
    summarize,
)
from .models import (
    KernelModel,
    LinearModel,
    ModelKind,
    load_model,
    logistic_loss,
    logistic_loss_grad,
    predict,
    save_model,
    score,
    sigmoid,
)
from .optim import AdamConfig, AdamState, MinimizeResult, adam_step, minimize
from .plotting import plot_boundary_svg
from .risk import (
    RiskReport,
    ToyDistribution,
    fit_pconf,
    fit_supervised,
    pconf_empirical_risk,
    pconf_risk_grad,
    population_pconf_risk,
    population_risk,
    supervised_empirical_risk,
    train_pconf,
    train_supervised,
)
from .tune import (
    TuneConfig,
    TuneResult,
    default_k_grid,
    empirical_fn_rate,
    evaluate_k_candidates,
    select_k,
    tune_k,
    zero_one_loss,
)

__version__ = "0.1.0"
