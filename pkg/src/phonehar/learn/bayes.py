"""Gaussian naive Bayes."""
from __future__ import annotations

import math

import numpy as np

from ..features import FeatureDataset
from ..ingest import N_ACTIVITIES
from .base import TrainedModel, stopwatch, training_arrays

VAR_EPSILON = 1e-9


class GaussianNB(TrainedModel):
    kind = "nb"

    def __init__(self, feature_names, class_count, means, variances, hyperparams=None, build_time_s=0.0):
        super().__init__(feature_names, hyperparams, build_time_s)
        self.class_count = np.asarray(class_count, dtype=np.int64)  # (7,)
        self.means = np.asarray(means, dtype=np.float64)  # (7, d)
        self.variances = np.asarray(variances, dtype=np.float64)  # (7, d)
        present = self.class_count > 0
        total = self.class_count.sum()
        self.log_prior = np.full(N_ACTIVITIES, -np.inf)
        self.log_prior[present] = np.log(self.class_count[present] / total)

    def log_scores(self, X: np.ndarray) -> np.ndarray:
        """Joint log-likelihood ``log P(c) + sum_f log N(x_f; mu, var)``; ``-inf`` for unseen classes."""
        out = np.full((len(X), N_ACTIVITIES), -np.inf)
        for c in np.flatnonzero(self.class_count):
            var = self.variances[c]
            diff = X - self.means[c]
            ll = -0.5 * (np.log(2.0 * math.pi * var) + diff * diff / var)
            out[:, c] = self.log_prior[c] + ll.sum(axis=1)
        return out

    _scores = log_scores

    def posteriors(self, data) -> np.ndarray:
        s = self.log_scores(self.matrix(data))
        s = s - s.max(axis=1, keepdims=True)
        p = np.exp(s)
        return p / p.sum(axis=1, keepdims=True)

    def params(self):
        return {
            "class_count": self.class_count.tolist(),
            "means": self.means.tolist(),
            "variances": self.variances.tolist(),
        }

    @classmethod
    def from_params(cls, feature_names, hyperparams, build_time_s, params):
        return cls(feature_names, params["class_count"], params["means"], params["variances"],
                   hyperparams, build_time_s)


def train_nb(data: FeatureDataset) -> GaussianNB:
    X, y = training_arrays(data)
    with stopwatch() as elapsed:
        d = X.shape[1]
        counts = np.bincount(y, minlength=N_ACTIVITIES)
        means = np.zeros((N_ACTIVITIES, d))
        variances = np.ones((N_ACTIVITIES, d))
        floor = VAR_EPSILON * np.maximum(1.0, X.var(axis=0))
        for c in np.flatnonzero(counts):
            rows = X[y == c]
            means[c] = rows.mean(axis=0)
            variances[c] = np.maximum(rows.var(axis=0), floor)
    return GaussianNB(data.feature_names, counts, means, variances, {}, elapsed[0])
