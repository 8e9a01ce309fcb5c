"""Calibration of unbounded retrieval scores into relevance probabilities.

Scores are z-normalized over the pooled score set, squashed through a
logistic curve, and the scale/shift of that curve is fitted to binary
relevance labels by maximum likelihood. The fitted model predicts
P(relevant) for any raw score.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin


class CalibrationError(ValueError):
    """Calibration input is degenerate or a model is invalid."""


def _as_finite_1d(name: str, values: Sequence[float]) -> np.ndarray:
    arr = np.asarray(list(values), dtype=float)
    if arr.ndim != 1:
        raise CalibrationError(f"{name}: expected a 1-d sequence, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise CalibrationError(f"{name}: contains non-finite values")
    return arr


def z_normalize(scores: Sequence[float]) -> list[float]:
    """Shift and scale scores to mean 0 and population standard deviation 1.

    Raises on fewer than two scores or zero variance.
    """
    arr = _as_finite_1d("scores", scores)
    if arr.size < 2:
        raise CalibrationError(f"z_normalize: need at least 2 scores, got {arr.size}")
    std = float(arr.std())
    if std == 0.0:
        raise CalibrationError("z_normalize: zero variance in scores")
    return list((arr - arr.mean()) / std)


def logistic_map(z: float) -> float:
    """Map a real value into (0, 1) with the standard logistic curve."""
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    e = math.exp(z)
    return e / (1.0 + e)


@dataclass(frozen=True)
class CalibrationModel:
    """A fitted score-to-probability mapping.

    Stores the z-normalization of the training scores, the slope/intercept
    of the logistic regression on the z-score, and the squared Pearson
    correlation between fitted probabilities and labels.
    """

    score_mean: float
    score_std: float
    slope: float
    intercept: float
    r_squared: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.score_std) and self.score_std > 0):
            raise CalibrationError(f"score_std: must be > 0, got {self.score_std}")
        if not (0.0 <= self.r_squared <= 1.0):
            raise CalibrationError(f"r_squared: must be in [0, 1], got {self.r_squared}")


def fit_relevance_model(
    pairs: Iterable[tuple[float, int]],
    *,
    learning_rate: float = 1.0,
    max_iter: int = 500,
    tol: float = 1e-8,
) -> CalibrationModel:
    """Fit a logistic relevance model to (score, binary label) pairs.

    Scores are z-normalized, then ``label ~ logistic(slope * z + intercept)``
    is fitted by gradient ascent on the mean log-likelihood until parameter
    updates fall below ``tol`` or ``max_iter`` passes.
    """
    pair_list = list(pairs)
    if len(pair_list) < 10:
        raise CalibrationError(f"fit_relevance_model: need at least 10 pairs, got {len(pair_list)}")
    scores = _as_finite_1d("scores", [score for score, _ in pair_list])
    labels = np.asarray([1.0 if rel else 0.0 for _, rel in pair_list], dtype=float)
    if labels.min() == labels.max():
        raise CalibrationError("fit_relevance_model: single class in labels")

    z = np.asarray(z_normalize(scores))
    slope = 0.0
    intercept = 0.0
    for _ in range(max_iter):
        p = 1.0 / (1.0 + np.exp(-(slope * z + intercept)))
        residual = labels - p
        step_slope = learning_rate * float(np.mean(residual * z))
        step_intercept = learning_rate * float(np.mean(residual))
        slope += step_slope
        intercept += step_intercept
        if max(abs(step_slope), abs(step_intercept)) < tol:
            break

    fitted = 1.0 / (1.0 + np.exp(-(slope * z + intercept)))
    r_squared = _squared_pearson(fitted, labels)
    return CalibrationModel(
        score_mean=float(scores.mean()),
        score_std=float(scores.std()),
        slope=slope,
        intercept=intercept,
        r_squared=r_squared,
    )


def _squared_pearson(predictions: np.ndarray, labels: np.ndarray) -> float:
    if predictions.std() == 0.0 or labels.std() == 0.0:
        return 0.0
    corr = float(np.corrcoef(predictions, labels)[0, 1])
    return min(1.0, max(0.0, corr * corr))


def predict_p_rel(model: CalibrationModel, score: float) -> float:
    """Probability of relevance for a raw retrieval score under the model."""
    z = (score - model.score_mean) / model.score_std
    p = logistic_map(model.slope * z + model.intercept)
    return min(1.0, max(0.0, p))


class RelevanceCalibrator(BaseEstimator, TransformerMixin):
    """Scikit-learn style wrapper around the score calibration fit.

    ``fit(X, y)`` takes raw scores and binary relevance labels;
    ``transform(X)`` returns calibrated relevance probabilities. The fitted
    ``CalibrationModel`` is available as ``model_``.
    """

    def __init__(self, learning_rate: float = 1.0, max_iter: int = 500, tol: float = 1e-8):
        self.learning_rate = learning_rate
        self.max_iter = max_iter
        self.tol = tol

    def fit(self, X, y):
        scores = _as_finite_1d("X", np.ravel(X))
        labels = np.ravel(y)
        if scores.size != labels.size:
            raise CalibrationError(f"X and y length mismatch: {scores.size} vs {labels.size}")
        self.model_ = fit_relevance_model(
            zip(scores, labels),
            learning_rate=self.learning_rate,
            max_iter=self.max_iter,
            tol=self.tol,
        )
        return self

    def transform(self, X) -> np.ndarray:
        if not hasattr(self, "model_"):
            raise CalibrationError("RelevanceCalibrator is not fitted; call fit first")
        scores = _as_finite_1d("X", np.ravel(X))
        return np.asarray([predict_p_rel(self.model_, s) for s in scores])
