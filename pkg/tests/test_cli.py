import csv
import json

import numpy as np
import pytest

from pconf import (
    GaussianSpec,
    PconfDataset,
    gen_gaussian_dataset,
    load_model,
    predict,
    write_csv,
)
from pconf.cli import EXIT_DATA, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, main


@pytest.fixture
def spec():
    return GaussianSpec(mu_pos=[0, 0], mu_neg=[2, 2])


@pytest.fixture
def pconf_csv(tmp_path, spec):
    data = gen_gaussian_dataset(spec, 40, 0, seed=1)
    conf = np.clip(np.linspace(0.3, 1.0, 40), 0.01, 1.0)
    path = tmp_path / "train.csv"
    write_csv(PconfDataset(data.features, conf), path)
    return path


@pytest.fixture
def labeled_csv(tmp_path, spec):
    path = tmp_path / "labeled.csv"
    write_csv(gen_gaussian_dataset(spec, 30, 30, seed=2), path)
    return path


def test_usage_errors_exit_1():
    assert main([]) == EXIT_USAGE
    assert main(["no-such-command"]) == EXIT_USAGE
    assert main(["train", "--data"]) == EXIT_USAGE


def test_help_exits_0(capsys):
    assert main(["--help"]) == EXIT_OK
    capsys.readouterr()


def test_train_predict_roundtrip(tmp_path, pconf_csv, capsys):
    model_path = tmp_path / "model.json"
    curve_path = tmp_path / "curve.csv"
    rc = main(
        [
            "train",
            "--data", str(pconf_csv),
            "--model-out", str(model_path),
            "--loss-curve", str(curve_path),
            "--epochs", "50",
        ]
    )
    assert rc == EXIT_OK
    model = load_model(model_path)

    out_path = tmp_path / "preds.csv"
    rc = main(["predict", "--data", str(pconf_csv), "--model", str(model_path), "--out", str(out_path)])
    assert rc == EXIT_OK
    capsys.readouterr()

    with open(out_path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0][-1] == "prediction"
    preds_file = np.array([int(row[-1]) for row in rows[1:]])
    assert set(np.unique(preds_file)) <= {1, -1}
    # persisted-model predictions equal in-process predictions
    from pconf import load_csv

    features = load_csv(pconf_csv).features
    np.testing.assert_array_equal(preds_file, predict(model, features))

    with open(curve_path, newline="") as fh:
        curve = list(csv.reader(fh))
    assert curve[0] == ["epoch", "loss"]
    assert len(curve) == 51  # header + one row per epoch


def test_train_supervised_route(tmp_path, labeled_csv, capsys):
    model_path = tmp_path / "sup.json"
    rc = main(["train", "--data", str(labeled_csv), "--model-out", str(model_path), "--epochs", "50"])
    assert rc == EXIT_OK
    assert load_model(model_path).dim == 2
    capsys.readouterr()


def test_data_errors_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("f0,confidence\n0.1,1.5\n")
    rc = main(["train", "--data", str(bad), "--model-out", str(tmp_path / "m.json")])
    assert rc == EXIT_DATA
    missing = tmp_path / "missing.csv"
    missing.write_text("a,b\n1,2\n")
    rc = main(["train", "--data", str(missing), "--model-out", str(tmp_path / "m.json")])
    assert rc == EXIT_DATA
    capsys.readouterr()


def test_numeric_errors_exit_3(monkeypatch, capsys):
    from pconf.errors import TuningError
    import pconf.cli as cli_module

    def boom(cfg):
        raise TuningError("all candidates failed")

    monkeypatch.setattr(cli_module, "run_overlap_experiment", boom)
    rc = main(["synth-overlap", "--trials", "1"])
    assert rc == EXIT_NUMERIC
    capsys.readouterr()


def test_tune_k_singleton_grid(tmp_path, pconf_csv, spec, capsys):
    valid_path = tmp_path / "valid.csv"
    write_csv(gen_gaussian_dataset(spec, 25, 0, seed=9).features, valid_path)
    result_path = tmp_path / "tune.json"
    curve_path = tmp_path / "tune_curve.csv"
    model_path = tmp_path / "tuned.json"
    rc = main(
        [
            "tune-k",
            "--train", str(pconf_csv),
            "--valid", str(valid_path),
            "--phi", "0.1",
            "--k-grid-min", "1.0",
            "--k-grid-max", "1.0",
            "--k-grid-points", "1",
            "--epochs", "50",
            "--result-out", str(result_path),
            "--curve-out", str(curve_path),
            "--model-out", str(model_path),
        ]
    )
    assert rc == EXIT_OK
    doc = json.loads(result_path.read_text())
    assert doc["k_star"] == 1.0
    assert len(doc["objective_values"]) == 1
    with open(curve_path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["k", "fn_rate", "squared_error"]
    assert load_model(model_path).dim == 2
    capsys.readouterr()


def test_tune_k_rejects_labeled_train(tmp_path, labeled_csv, capsys):
    valid_path = tmp_path / "valid.csv"
    write_csv(np.zeros((3, 2)), valid_path)
    rc = main(
        [
            "tune-k",
            "--train", str(labeled_csv),
            "--valid", str(valid_path),
            "--phi", "0.1",
            "--result-out", str(tmp_path / "r.json"),
        ]
    )
    assert rc == EXIT_DATA
    capsys.readouterr()


def test_plot_subcommand(tmp_path, labeled_csv, capsys):
    model_path = tmp_path / "m.json"
    main(["train", "--data", str(labeled_csv), "--model-out", str(model_path), "--epochs", "30"])
    out = tmp_path / "plot.svg"
    rc = main(["plot", "--test", str(labeled_csv), "--model", f"sup={model_path}", "--out", str(out)])
    assert rc == EXIT_OK
    text = out.read_text()
    assert text.startswith("<svg") and ">sup</text>" in text

    rc = main(["plot", "--test", str(labeled_csv), "--model", "nonsense", "--out", str(out)])
    assert rc == EXIT_USAGE
    capsys.readouterr()
