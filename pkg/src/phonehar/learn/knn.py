"""k-nearest-neighbour classification with optional z-scoring."""
from __future__ import annotations

import numpy as np
from scipy.spatial.distance import cdist

from ..features import FeatureDataset
from ..ingest import N_ACTIVITIES
from .base import TrainedModel, stopwatch, training_arrays

_CHUNK = 512


class KNearest(TrainedModel):
    kind = "knn"

    def __init__(self, feature_names, X, labels, mean, scale, k=1, hyperparams=None, build_time_s=0.0):
        super().__init__(feature_names, hyperparams, build_time_s)
        self.X = np.asarray(X, dtype=np.float64)  # raw training rows
        self.labels = np.asarray(labels, dtype=np.int64)
        self.mean = np.asarray(mean, dtype=np.float64)
        self.scale = np.asarray(scale, dtype=np.float64)  # 1/std, 0 for constant columns
        self.k = int(k)
        self._Z = self.transform(self.X)

    def transform(self, X: np.ndarray) -> np.ndarray:
        return (X - self.mean) * self.scale

    def neighbors(self, X: np.ndarray) -> np.ndarray:
        """Indices of the k nearest training rows; equal distances favour the lower index."""
        Q = self.transform(X)
        out = np.empty((len(Q), self.k), dtype=np.int64)
        for start in range(0, len(Q), _CHUNK):
            d = cdist(Q[start:start + _CHUNK], self._Z, "sqeuclidean")
            if self.k == 1:
                out[start:start + _CHUNK, 0] = np.argmin(d, axis=1)
            else:
                out[start:start + _CHUNK] = np.argsort(d, axis=1, kind="stable")[:, :self.k]
        return out

    def _scores(self, X):
        nbr = self.labels[self.neighbors(X)]
        counts = np.zeros((len(X), N_ACTIVITIES))
        for j in range(self.k):
            counts[np.arange(len(X)), nbr[:, j]] += 1
        return counts / self.k

    def params(self):
        return {"X": self.X.tolist(), "labels": self.labels.tolist(), "mean": self.mean.tolist(),
                "scale": self.scale.tolist(), "k": self.k}

    @classmethod
    def from_params(cls, feature_names, hyperparams, build_time_s, params):
        return cls(feature_names, np.array(params["X"]).reshape(-1, len(feature_names)),
                   params["labels"], params["mean"], params["scale"], params["k"],
                   hyperparams, build_time_s)


def train_knn(data: FeatureDataset, k: int = 1, standardize: bool = True) -> KNearest:
    X, y = training_arrays(data)
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > len(X):
        raise ValueError(f"k={k} exceeds the {len(X)} training rows")
    with stopwatch() as elapsed:
        d = X.shape[1]
        if standardize:
            mean = X.mean(axis=0)
            std = X.std(axis=0)
            scale = np.divide(1.0, std, out=np.zeros(d), where=std > 0)
        else:
            mean, scale = np.zeros(d), np.ones(d)
        model = KNearest(data.feature_names, X.copy(), y.copy(), mean, scale, k,
                         {"k": k, "standardize": standardize})
    model.build_time_s = elapsed[0]
    return model
