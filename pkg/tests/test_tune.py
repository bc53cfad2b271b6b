import numpy as np
import pytest

from pconf import (
    ContractError,
    InvalidSpecError,
    LabeledDataset,
    PconfDataset,
    TuneConfig,
    default_k_grid,
    empirical_fn_rate,
    predict,
    tune_k,
    zero_one_loss,
)
from pconf.models import LinearModel
from pconf.optim import AdamConfig
from pconf.tune import KCandidate, select_k


def test_zero_one_loss_values():
    assert zero_one_loss(2.5) == 0.0
    assert zero_one_loss(-0.1) == 1.0
    assert zero_one_loss(0.0) == 0.0  # sign(0) = +1
    np.testing.assert_array_equal(zero_one_loss(np.array([1.0, -1.0, 0.0])), [0.0, 1.0, 0.0])


def test_default_k_grid_shape():
    grid = default_k_grid()
    assert len(grid) == 25
    assert grid[0] == pytest.approx(0.125, abs=1e-12)
    assert grid[-1] == pytest.approx(8.0, abs=1e-12)
    assert grid[12] == pytest.approx(1.0, abs=1e-12)
    ratios = np.diff(np.log2(grid))
    np.testing.assert_allclose(ratios, 0.25, atol=1e-12)
    fast = default_k_grid(points=13)
    assert len(fast) == 13 and fast[6] == pytest.approx(1.0, abs=1e-12)


def test_empirical_fn_rate_extremes_and_counting(rng):
    always_pos = LinearModel(alpha=[0.0, 0.0], beta=1.0)
    always_neg = LinearModel(alpha=[0.0, 0.0], beta=-1.0)
    x = rng.normal(size=(40, 2))
    assert empirical_fn_rate(always_pos, x) == 0.0
    assert empirical_fn_rate(always_neg, x) == 1.0

    model = LinearModel(alpha=rng.normal(size=2), beta=0.1)
    manual = float(np.mean([1.0 if predict(model, xi) == -1 else 0.0 for xi in x]))
    assert empirical_fn_rate(model, x) == manual

    with pytest.raises(ContractError):
        empirical_fn_rate(model, np.zeros((0, 2)))


def test_tune_config_validation():
    with pytest.raises(InvalidSpecError):
        TuneConfig(phi=0.1, grid=())
    with pytest.raises(InvalidSpecError):
        TuneConfig(phi=0.1, grid=(1.0, 1.0))
    with pytest.raises(InvalidSpecError):
        TuneConfig(phi=1.0, grid=(1.0,))
    TuneConfig(phi=0.0, grid=(1.0,))  # phi = 0 admitted for exact matches


def _separated_pconf_data(rng, n=60):
    # positives well inside the positive half-plane, moderate confidence
    x = rng.normal(size=(n, 2)) + np.array([2.0, 0.0])
    return PconfDataset(x, rng.uniform(0.6, 1.0, size=n))


def test_tune_singleton_grid_equals_plain_training(rng):
    from pconf import train_pconf
    from pconf.confidence import AdjustmentSpec, adjust

    data = _separated_pconf_data(rng)
    valid = rng.normal(size=(50, 2)) + np.array([2.0, 0.0])
    cfg = TuneConfig(phi=0.1, grid=(1.0,), adam_cfg=AdamConfig(epochs=300))
    result = tune_k(data, valid, cfg)
    assert result.k_star == 1.0
    assert len(result.objective_values) == 1
    # identity adjustment at k=1 (above the floor) trains on identical data
    adjusted = adjust(data.confidence, AdjustmentSpec("power", 1.0, cfg.floor))
    direct = train_pconf(PconfDataset(data.features, adjusted), cfg.adam_cfg)
    assert np.array_equal(result.model.alpha, direct.alpha)
    assert result.model.beta == direct.beta


def test_tune_phi_zero_exact_match(rng):
    data = _separated_pconf_data(rng)
    valid = rng.normal(size=(50, 2)) + np.array([2.0, 0.0])
    cfg = TuneConfig(phi=0.0, grid=(0.5, 1.0, 2.0), adam_cfg=AdamConfig(epochs=300))
    result = tune_k(data, valid, cfg)
    errors = {o.k: o.squared_error for o in result.objective_values}
    assert min(errors.values()) == 0.0
    assert errors[result.k_star] == 0.0


def test_tune_result_kstar_minimizes_objective(rng):
    data = _separated_pconf_data(rng)
    valid = rng.normal(size=(60, 2))
    cfg = TuneConfig(phi=0.3, grid=(0.25, 1.0, 4.0), adam_cfg=AdamConfig(epochs=200))
    result = tune_k(data, valid, cfg)
    best = min(o.squared_error for o in result.objective_values)
    chosen = next(o for o in result.objective_values if o.k == result.k_star)
    assert chosen.squared_error == best


def test_tune_deterministic(rng):
    data = _separated_pconf_data(rng)
    valid = rng.normal(size=(30, 2))
    cfg = TuneConfig(phi=0.2, grid=(0.5, 1.0, 2.0), adam_cfg=AdamConfig(epochs=200))
    r1 = tune_k(data, valid, cfg)
    r2 = tune_k(data, valid, cfg)
    assert r1.k_star == r2.k_star
    assert r1.objective_values == r2.objective_values
    assert np.array_equal(r1.model.alpha, r2.model.alpha)


def test_select_k_tie_breaks_toward_identity():
    # dyadic fn rates make the squared errors tie exactly in float
    dummy = LinearModel(alpha=[1.0], beta=0.0)
    candidates = [
        KCandidate(k=0.25, fn_rate=0.125, model=dummy),
        KCandidate(k=0.5, fn_rate=0.375, model=dummy),
        KCandidate(k=2.0, fn_rate=0.375, model=dummy),
        KCandidate(k=4.0, fn_rate=0.625, model=dummy),
    ]
    result = select_k(candidates, phi=0.25, family="power")
    errors = [o.squared_error for o in result.objective_values]
    assert errors[0] == errors[1] == errors[2]  # three-way tie at 0.015625
    # |ln 0.25| = 1.386 loses to |ln 0.5| = |ln 2| = 0.693; the earlier of the
    # remaining pair wins the deterministic scan
    assert result.k_star == 0.5


def test_select_k_skips_failed_candidates():
    dummy = LinearModel(alpha=[1.0], beta=0.0)
    candidates = [
        KCandidate(k=0.5, fn_rate=float("nan"), model=None),
        KCandidate(k=1.0, fn_rate=0.2, model=dummy),
    ]
    result = select_k(candidates, phi=0.2)
    assert result.k_star == 1.0
    assert result.objective_values[0].squared_error == float("inf")

    from pconf.errors import TuningError

    with pytest.raises(TuningError):
        select_k([KCandidate(k=1.0, fn_rate=float("nan"), model=None)], phi=0.2)
