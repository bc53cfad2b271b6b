"""Dataset types, synthetic Gaussian generation, and CSV ingestion.

Determinism contract: every generator here is a pure function of
(spec, seed). Draws come from numpy's Generator over the PCG64 64-bit
PRNG; standard normals use its ziggurat transform, and correlated samples
are produced as mu + L z with L the Cholesky factor of the covariance.
The same seed therefore yields bit-identical output on reruns of the same
build. make_splits derives per-split seeds from the master seed by fixed
offsets (train +0, valid +1, test +2, conf_est +3).

CSV schema (the only ingestion format): header row, feature columns named
f0..f{d-1} in index order, optional ``label`` column in {1, -1}, optional
``confidence`` column in (0, 1]; UTF-8, '.' decimal separator. A file with
both label and confidence columns is rejected as ambiguous.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractError, DataFormatError, InvalidSpecError
from .models import sigmoid

__all__ = [
    "LabeledDataset",
    "PconfDataset",
    "GaussianSpec",
    "SplitSpec",
    "gen_gaussian_dataset",
    "make_splits",
    "true_gaussian_posterior",
    "load_csv",
    "load_feature_csv",
    "write_csv",
]


def _as_feature_matrix(value, name: str = "features") -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.ndim != 2 or arr.shape[1] < 1:
        raise InvalidSpecError(f"{name} must be an n x d matrix with d >= 1, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidSpecError(f"{name} contains non-finite values")
    return arr


@dataclass(frozen=True)
class LabeledDataset:
    """Feature matrix with +/-1 labels (supervised baseline, test sets)."""

    features: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        feats = _as_feature_matrix(self.features)
        labels = np.asarray(self.labels)
        if labels.ndim != 1 or labels.shape[0] != feats.shape[0]:
            raise InvalidSpecError(
                f"labels shape {labels.shape} does not match {feats.shape[0]} rows"
            )
        labels = labels.astype(int)
        if labels.size and not np.all(np.isin(labels, (1, -1))):
            raise InvalidSpecError("labels must all be +1 or -1")
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def dim(self) -> int:
        return self.features.shape[1]


@dataclass(frozen=True)
class PconfDataset:
    """Positive feature vectors paired with confidence values in (0, 1]."""

    features: np.ndarray
    confidence: np.ndarray

    def __post_init__(self):
        feats = _as_feature_matrix(self.features)
        conf = np.asarray(self.confidence, dtype=float)
        if conf.ndim != 1 or conf.shape[0] != feats.shape[0]:
            raise InvalidSpecError(
                f"confidence shape {conf.shape} does not match {feats.shape[0]} rows"
            )
        if conf.size and not (np.all(np.isfinite(conf)) and np.all(conf > 0) and np.all(conf <= 1)):
            raise InvalidSpecError("confidence values must lie in (0, 1]")
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "confidence", conf)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def dim(self) -> int:
        return self.features.shape[1]


@dataclass(frozen=True)
class GaussianSpec:
    """Two Gaussian class conditionals with a shared covariance.

    covariance defaults to the identity; prior_pos defaults to 0.5 (equal
    sample sizes in the synthetic protocol imply equal priors).
    """

    mu_pos: np.ndarray
    mu_neg: np.ndarray
    covariance: np.ndarray | None = None
    prior_pos: float = 0.5

    def __post_init__(self):
        mu_pos = np.asarray(self.mu_pos, dtype=float)
        mu_neg = np.asarray(self.mu_neg, dtype=float)
        if mu_pos.ndim != 1 or mu_pos.shape != mu_neg.shape:
            raise InvalidSpecError(
                f"mean vectors must be 1-D and equal-shaped, got {mu_pos.shape} and {mu_neg.shape}"
            )
        d = mu_pos.shape[0]
        cov = np.eye(d) if self.covariance is None else np.asarray(self.covariance, dtype=float)
        if cov.shape != (d, d):
            raise InvalidSpecError(f"covariance must be {d} x {d}, got shape {cov.shape}")
        if not np.all(np.isfinite(cov)) or np.max(np.abs(cov - cov.T)) > 1e-12:
            raise InvalidSpecError("covariance must be finite and symmetric within 1e-12")
        if not (0.0 < self.prior_pos < 1.0):
            raise InvalidSpecError(f"prior_pos must lie in (0, 1), got {self.prior_pos}")
        object.__setattr__(self, "mu_pos", mu_pos)
        object.__setattr__(self, "mu_neg", mu_neg)
        object.__setattr__(self, "covariance", cov)

    @property
    def dim(self) -> int:
        return self.mu_pos.shape[0]

    def cholesky(self) -> np.ndarray:
        try:
            return np.linalg.cholesky(self.covariance)
        except np.linalg.LinAlgError as exc:
            raise InvalidSpecError("covariance is not positive definite") from exc


# Default split sizes: every set is 1000+1000 except the positives-only
# validation set.
@dataclass(frozen=True)
class SplitSpec:
    n_train_pos: int = 1000
    n_train_neg: int = 1000
    n_valid_pos: int = 1000
    n_test_pos: int = 1000
    n_test_neg: int = 1000
    n_confest_pos: int = 1000
    n_confest_neg: int = 1000
    seed: int = 0

    def __post_init__(self):
        for name in (
            "n_train_pos",
            "n_train_neg",
            "n_valid_pos",
            "n_test_pos",
            "n_test_neg",
            "n_confest_pos",
            "n_confest_neg",
        ):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise InvalidSpecError(f"{name} must be a count >= 1, got {value}")
        if int(self.seed) != self.seed or self.seed < 0:
            raise InvalidSpecError(f"seed must be an unsigned integer, got {self.seed}")


def gen_gaussian_dataset(
    spec: GaussianSpec, n_pos: int, n_neg: int, seed: int
) -> LabeledDataset:
    """Draw n_pos samples from N(mu_pos, cov) and n_neg from N(mu_neg, cov).

    Positive rows come first. Same (spec, counts, seed) gives bit-identical
    output.
    """
    if n_pos < 0 or n_neg < 0:
        raise InvalidSpecError(f"sample counts must be >= 0, got ({n_pos}, {n_neg})")
    chol = spec.cholesky()
    rng = np.random.Generator(np.random.PCG64(seed))
    z = rng.standard_normal((n_pos + n_neg, spec.dim))
    x = z @ chol.T
    x[:n_pos] += spec.mu_pos
    x[n_pos:] += spec.mu_neg
    labels = np.concatenate([np.ones(n_pos, dtype=int), -np.ones(n_neg, dtype=int)])
    return LabeledDataset(features=x, labels=labels)


def make_splits(
    spec: GaussianSpec, split: SplitSpec
) -> tuple[LabeledDataset, np.ndarray, LabeledDataset, LabeledDataset]:
    """Four independent draws: train, positive-only validation features,
    test, and the confidence-estimation set."""
    train = gen_gaussian_dataset(spec, split.n_train_pos, split.n_train_neg, split.seed)
    valid_pos = gen_gaussian_dataset(spec, split.n_valid_pos, 0, split.seed + 1).features
    test = gen_gaussian_dataset(spec, split.n_test_pos, split.n_test_neg, split.seed + 2)
    conf_est = gen_gaussian_dataset(spec, split.n_confest_pos, split.n_confest_neg, split.seed + 3)
    return train, valid_pos, test, conf_est


def true_gaussian_posterior(x, spec: GaussianSpec):
    """Closed-form p(y=+1 | x) for equal-covariance Gaussian classes.

    sigma(w.x + c) with w = cov^-1 (mu_pos - mu_neg),
    c = (mu_neg' cov^-1 mu_neg - mu_pos' cov^-1 mu_pos) / 2 plus the
    log prior ratio when prior_pos != 0.5. Used as the test oracle against
    estimated confidence.
    """
    chol = spec.cholesky()  # also rejects singular covariance

    def solve(vec):
        return np.linalg.solve(chol.T, np.linalg.solve(chol, vec))

    w = solve(spec.mu_pos - spec.mu_neg)
    c = 0.5 * (spec.mu_neg @ solve(spec.mu_neg) - spec.mu_pos @ solve(spec.mu_pos))
    c += np.log(spec.prior_pos / (1.0 - spec.prior_pos))
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != spec.dim:
        raise ContractError(f"x dimension {x.shape[-1]} does not match spec dimension {spec.dim}")
    return sigmoid(x @ w + c)


# ---------------------------------------------------------------------------
# CSV ingestion / export
# ---------------------------------------------------------------------------


def _read_table(path) -> tuple[list[str], list[list[str]]]:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise DataFormatError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise DataFormatError(f"{path} is empty, expected a header row")
    header = [name.strip() for name in rows[0]]
    return header, rows[1:]


def _feature_columns(header: list[str], path) -> list[int]:
    names = {name: i for i, name in enumerate(header)}
    if len(names) != len(header):
        raise DataFormatError(f"{path} has duplicate column names", row=1)
    d = sum(1 for name in header if name.startswith("f") and name[1:].isdigit())
    if d == 0:
        raise DataFormatError(f"{path} has no feature columns (expected f0, f1, ...)", row=1)
    cols = []
    for j in range(d):
        if f"f{j}" not in names:
            raise DataFormatError(f"{path} is missing feature column f{j}", row=1)
        cols.append(names[f"f{j}"])
    return cols


def _parse_cell(raw: str, line: int, column: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise DataFormatError(f"non-numeric cell {raw!r}", row=line, column=column) from None
    if not np.isfinite(value):
        raise DataFormatError(f"non-finite cell {raw!r}", row=line, column=column)
    return value


def _parse_matrix(header, rows, cols: list[int], path) -> np.ndarray:
    out = np.empty((len(rows), len(cols)))
    for i, row in enumerate(rows):
        line = i + 2  # 1-based, after the header
        if len(row) != len(header):
            raise DataFormatError(
                f"expected {len(header)} cells, found {len(row)}", row=line
            )
        for j, col in enumerate(cols):
            out[i, j] = _parse_cell(row[col], line, header[col])
    return out


def load_csv(path):
    """Load a LabeledDataset (label column) or PconfDataset (confidence column)."""
    header, rows = _read_table(path)
    cols = _feature_columns(header, path)
    names = {name: i for i, name in enumerate(header)}
    has_label = "label" in names
    has_conf = "confidence" in names
    if has_label and has_conf:
        raise DataFormatError(f"{path} has both label and confidence columns; schema is ambiguous")
    if not has_label and not has_conf:
        raise DataFormatError(
            f"{path} has neither a label nor a confidence column "
            "(use load_feature_csv for plain feature matrices)"
        )
    features = _parse_matrix(header, rows, cols, path)
    if has_label:
        labels = np.empty(len(rows), dtype=int)
        for i, row in enumerate(rows):
            line = i + 2
            value = _parse_cell(row[names["label"]], line, "label")
            if value not in (1.0, -1.0):
                raise DataFormatError(
                    f"label must be 1 or -1, got {value!r}", row=line, column="label"
                )
            labels[i] = int(value)
        return LabeledDataset(features=features, labels=labels)
    conf = np.empty(len(rows))
    for i, row in enumerate(rows):
        line = i + 2
        value = _parse_cell(row[names["confidence"]], line, "confidence")
        if not (0.0 < value <= 1.0):
            raise DataFormatError(
                f"confidence must lie in (0, 1], got {value!r}", row=line, column="confidence"
            )
        conf[i] = value
    return PconfDataset(features=features, confidence=conf)


def load_feature_csv(path) -> np.ndarray:
    """Load just the f0..f{d-1} columns (extra columns are ignored)."""
    header, rows = _read_table(path)
    cols = _feature_columns(header, path)
    return _parse_matrix(header, rows, cols, path)


def write_csv(data, path) -> None:
    """Write a dataset (or bare feature matrix) using the documented schema.

    Floats are written with shortest round-trip repr, so
    load_csv(write_csv(D)) reproduces D exactly.
    """
    if isinstance(data, LabeledDataset):
        features, extra = data.features, ("label", data.labels)
    elif isinstance(data, PconfDataset):
        features, extra = data.features, ("confidence", data.confidence)
    else:
        features, extra = _as_feature_matrix(data), None
    d = features.shape[1]
    header = [f"f{j}" for j in range(d)]
    if extra is not None:
        header.append(extra[0])
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i in range(features.shape[0]):
            row = [repr(float(v)) for v in features[i]]
            if extra is not None:
                value = extra[1][i]
                row.append(str(int(value)) if extra[0] == "label" else repr(float(value)))
            writer.writerow(row)
