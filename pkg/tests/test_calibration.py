import math
import random

import numpy as np
import pytest

from cardrank import (
    CalibrationModel,
    RelevanceCalibrator,
    fit_relevance_model,
    logistic_map,
    predict_p_rel,
    z_normalize,
)
from cardrank.calibration import CalibrationError


def _sigmoid(z):
    return 1 / (1 + math.exp(-z)) if z >= 0 else math.exp(z) / (1 + math.exp(z))


def _logistic_pairs(slope, n, seed):
    """Independent simulation oracle: scores standard normal, labels
    Bernoulli under a known logistic curve."""
    rng = random.Random(seed)
    pairs = []
    for _ in range(n):
        z = rng.gauss(0, 1)
        pairs.append((z, 1 if rng.random() < _sigmoid(slope * z) else 0))
    return pairs


def test_z_normalize_hand_case():
    out = z_normalize([1.0, 2.0, 3.0])
    assert out == pytest.approx([-1.2247448713915890, 0.0, 1.2247448713915890], abs=1e-9)


def test_z_normalize_population_moments():
    rng = random.Random(5)
    scores = [rng.uniform(-100, 100) for _ in range(500)]
    out = np.asarray(z_normalize(scores))
    assert float(out.mean()) == pytest.approx(0.0, abs=1e-12)
    assert float(out.std()) == pytest.approx(1.0, abs=1e-12)


def test_z_normalize_idempotent_on_normalized_input():
    normalized = z_normalize([4.0, 8.0, 15.0, 16.0, 23.0, 42.0])
    again = z_normalize(normalized)
    assert again == pytest.approx(normalized, abs=1e-9)


def test_z_normalize_rejects_degenerate_input():
    with pytest.raises(CalibrationError, match="zero variance"):
        z_normalize([5.0, 5.0, 5.0])
    with pytest.raises(CalibrationError, match="at least 2"):
        z_normalize([1.0])


def test_logistic_map_symmetry():
    assert logistic_map(0.0) == 0.5
    assert logistic_map(700.0) == pytest.approx(1.0)
    assert logistic_map(-700.0) == pytest.approx(0.0)
    for z in (-3.0, -0.5, 0.7, 4.2):
        assert logistic_map(z) + logistic_map(-z) == pytest.approx(1.0, abs=1e-12)


def test_logistic_map_is_increasing():
    zs = [-5.0, -1.0, 0.0, 0.3, 2.0, 9.0]
    values = [logistic_map(z) for z in zs]
    assert values == sorted(values)
    assert all(0.0 < v < 1.0 for v in values)


def test_fit_recovers_known_slope():
    model = fit_relevance_model(_logistic_pairs(slope=2.0, n=5000, seed=42))
    assert model.slope == pytest.approx(2.0, abs=0.3)
    assert model.intercept == pytest.approx(0.0, abs=0.3)


def test_fit_on_separated_data():
    rng = random.Random(3)
    pairs = []
    for i in range(200):
        magnitude = abs(rng.gauss(0, 1)) + 0.05
        label = i % 2
        pairs.append((magnitude if label else -magnitude, label))
    model = fit_relevance_model(pairs)
    assert model.slope > 0
    assert model.r_squared >= 0.9


def test_fit_random_labels_has_no_fit():
    rng = random.Random(11)
    pairs = [(rng.gauss(0, 1), rng.randrange(2)) for _ in range(1000)]
    model = fit_relevance_model(pairs)
    assert model.r_squared <= 0.1


def test_fit_rejects_single_class():
    pairs = [(float(i), 0) for i in range(20)]
    with pytest.raises(CalibrationError, match="single class"):
        fit_relevance_model(pairs)


def test_fit_rejects_tiny_input():
    with pytest.raises(CalibrationError, match="at least 10"):
        fit_relevance_model([(0.0, 0), (1.0, 1)])


def test_model_validation():
    with pytest.raises(CalibrationError, match="score_std"):
        CalibrationModel(0.0, 0.0, 1.0, 0.0, 0.5)
    with pytest.raises(CalibrationError, match="r_squared"):
        CalibrationModel(0.0, 1.0, 1.0, 0.0, 1.5)


def test_predict_at_mean_with_zero_intercept():
    model = CalibrationModel(score_mean=7.0, score_std=2.0, slope=3.0, intercept=0.0, r_squared=0.5)
    assert predict_p_rel(model, 7.0) == 0.5


def test_predict_monotone_and_bounded():
    model = CalibrationModel(score_mean=0.0, score_std=1.0, slope=2.0, intercept=0.1, r_squared=0.5)
    rng = random.Random(13)
    scores = sorted(rng.uniform(-1e3, 1e3) for _ in range(1000))
    predictions = [predict_p_rel(model, s) for s in scores]
    assert all(0.0 <= p <= 1.0 for p in predictions)
    assert all(a <= b for a, b in zip(predictions, predictions[1:]))


def test_normalize_then_map_preserves_order():
    rng = random.Random(17)
    scores = [rng.uniform(-50, 50) for _ in range(100)]
    mapped = [logistic_map(z) for z in z_normalize(scores)]
    order = sorted(range(100), key=lambda i: scores[i])
    assert all(0.0 < m < 1.0 for m in mapped)
    for a, b in zip(order, order[1:]):
        assert mapped[a] <= mapped[b]


def test_calibrator_estimator_roundtrip():
    pairs = _logistic_pairs(slope=2.0, n=2000, seed=8)
    scores = [s for s, _ in pairs]
    labels = [y for _, y in pairs]
    calibrator = RelevanceCalibrator().fit(scores, labels)
    assert calibrator.model_.slope == pytest.approx(2.0, abs=0.4)
    probs = calibrator.transform(scores)
    assert probs.shape == (2000,)
    assert float(probs.min()) >= 0.0 and float(probs.max()) <= 1.0
    # sklearn param plumbing
    assert calibrator.get_params()["max_iter"] == 500
    with pytest.raises(CalibrationError, match="not fitted"):
        RelevanceCalibrator().transform([0.0])
