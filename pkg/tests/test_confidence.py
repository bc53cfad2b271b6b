import numpy as np
import pytest

from pconf import (
    AdjustmentSpec,
    GaussianSpec,
    InvalidDataError,
    InvalidSpecError,
    LabeledDataset,
    SkewSpec,
    adjust,
    clip,
    confidence_from_drowsiness,
    estimate_confidence,
    gen_gaussian_dataset,
    skew,
    true_gaussian_posterior,
)
from pconf.optim import AdamConfig


def test_skew_known_values():
    assert skew(0.81, SkewSpec(0.5)) == pytest.approx(0.9, abs=1e-12)
    assert skew(1.0, SkewSpec(3.7)) == 1.0
    r = np.linspace(0.01, 1.0, 25)
    np.testing.assert_array_equal(skew(r, SkewSpec(1.0)), r)


def test_skew_spec_validation():
    with pytest.raises(InvalidSpecError):
        SkewSpec(0.0)
    with pytest.raises(InvalidSpecError):
        SkewSpec(-2.0)


def test_clip_floor_and_idempotence():
    assert clip(0.005, 0.01) == 0.01
    assert clip(0.5, 0.01) == 0.5
    for r in np.linspace(0.0, 1.0, 50):
        assert clip(clip(r, 0.01), 0.01) == clip(r, 0.01)


def test_adjust_power_family():
    spec = AdjustmentSpec(family="power", k=2.0, floor=0.01)
    assert adjust(0.9, spec) == pytest.approx(0.81, abs=1e-12)
    identity = AdjustmentSpec(family="power", k=1.0, floor=0.01)
    r = np.linspace(0.02, 1.0, 40)
    np.testing.assert_array_equal(adjust(r, identity), r)


def test_adjust_additive_family_clamps():
    spec = AdjustmentSpec(family="additive", k=0.2, floor=0.01)
    assert adjust(0.95, spec) == 1.0  # upper clamp
    low = AdjustmentSpec(family="additive", k=-1.0, floor=0.01)
    assert adjust(0.4, low) == 0.01  # lower clamp then floor


def test_adjustment_spec_validation():
    with pytest.raises(InvalidSpecError):
        AdjustmentSpec(family="power", k=0.0)
    with pytest.raises(InvalidSpecError):
        AdjustmentSpec(family="additive", k=1.5)
    with pytest.raises(InvalidSpecError):
        AdjustmentSpec(family="power", k=1.0, floor=0.6)
    with pytest.raises(InvalidSpecError):
        AdjustmentSpec(family="mystery", k=1.0)


def test_adjust_output_range(rng):
    for family, ks in (("power", (0.2, 1.0, 5.0)), ("additive", (-0.9, 0.0, 0.9))):
        for k in ks:
            spec = AdjustmentSpec(family=family, k=k, floor=0.01)
            out = adjust(rng.uniform(1e-6, 1.0, size=200), spec)
            assert np.all(out >= 0.01) and np.all(out <= 1.0)


def test_power_adjustment_preserves_order(rng):
    for k in (0.3, 1.0, 2.5, 6.0):
        r = rng.uniform(1e-4, 1.0, size=100)
        powered = r**k
        order = np.argsort(r)
        assert np.array_equal(np.argsort(powered), order)


def test_skew_then_inverse_power_recovers_clip(rng):
    for _ in range(1000):
        r = float(rng.uniform(1e-6, 1.0))
        b = float(rng.uniform(0.1, 10.0))
        spec = AdjustmentSpec(family="power", k=1.0 / b, floor=0.01)
        assert abs(adjust(skew(r, SkewSpec(b)), spec) - clip(r, 0.01)) <= 1e-12


def test_estimate_confidence_matches_posterior_oracle(overlap_spec):
    cfg = AdamConfig(epochs=2500)
    conf_est = gen_gaussian_dataset(overlap_spec, 1000, 1000, seed=17)
    predictor = estimate_confidence(conf_est, 1e-4, cfg)
    mid = (overlap_spec.mu_pos + overlap_spec.mu_neg) / 2.0
    assert abs(float(predictor(mid)) - 0.5) < 0.05

    test = gen_gaussian_dataset(overlap_spec, 500, 500, seed=18)
    estimated = predictor(test.features)
    oracle = true_gaussian_posterior(test.features, overlap_spec)
    corr = float(np.corrcoef(estimated, oracle)[0, 1])
    assert corr >= 0.95


def test_estimate_confidence_regularization_limit(overlap_spec):
    conf_est = gen_gaussian_dataset(overlap_spec, 200, 200, seed=5)
    predictor = estimate_confidence(conf_est, l2_strength=1e6, cfg=AdamConfig(epochs=1500))
    assert float(np.linalg.norm(predictor.model.alpha)) < 1e-4
    outputs = predictor(conf_est.features)
    assert float(outputs.max() - outputs.min()) < 1e-3


def test_estimate_confidence_rejects_single_class(rng):
    x = rng.normal(size=(10, 2))
    data = LabeledDataset(x, np.ones(10, dtype=int))
    with pytest.raises(InvalidDataError):
        estimate_confidence(data, 1e-4, AdamConfig(epochs=10))


def test_drowsiness_confidence_mapping():
    assert confidence_from_drowsiness(1, 1, 1) == 1.0
    assert confidence_from_drowsiness(3, 3, 3) == pytest.approx(0.5, abs=1e-12)
    assert confidence_from_drowsiness(5, 5, 5) == 0.01  # raw 0 floored
    with pytest.raises(InvalidDataError):
        confidence_from_drowsiness(0, 3, 3)
    with pytest.raises(InvalidDataError):
        confidence_from_drowsiness(1, 6, 1)
