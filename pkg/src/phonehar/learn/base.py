from __future__ import annotations

import time
from contextlib import contextmanager
from typing import Any, ClassVar, Sequence

import numpy as np

from ..features import FEATURE_INDEX, N_FEATURES, FeatureDataset, FeatureVector, canonical_name
from ..ingest import N_ACTIVITIES, Activity


class TrainedModel:
    """Common prediction surface for every classifier kind.

    Subclasses implement ``_scores`` on a matrix already projected onto
    ``feature_names`` and ``params``/``from_params`` for persistence.
    """

    kind: ClassVar[str] = ""

    def __init__(self, feature_names: Sequence[str], hyperparams: dict[str, Any] | None = None,
                 build_time_s: float = 0.0):
        self.feature_names = tuple(canonical_name(n) for n in feature_names)
        self.hyperparams = dict(hyperparams or {})
        self.build_time_s = float(build_time_s)

    @property
    def n_features(self) -> int:
        return len(self.feature_names)

    def matrix(self, data) -> np.ndarray:
        """Project any supported input onto the model's feature columns.

        Accepts a :class:`FeatureDataset` (columns looked up by name), a
        :class:`FeatureVector` or a full 42-wide array (projected by name), or
        an array already in the model's column order.
        """
        if isinstance(data, FeatureDataset):
            return data.columns(self.feature_names)
        if isinstance(data, FeatureVector):
            data = data.values
        X = np.asarray(data, dtype=np.float64)
        if X.ndim == 1:
            X = X[None, :]
        if X.shape[1] == self.n_features:
            return X
        if X.shape[1] == N_FEATURES:
            return X[:, [FEATURE_INDEX[n] for n in self.feature_names]]
        raise ValueError(
            f"input has {X.shape[1]} columns; model expects {self.n_features} or the full {N_FEATURES}"
        )

    def predict_scores(self, data) -> np.ndarray:
        """Per-class scores, shape ``(n, 7)``; higher is more likely."""
        return self._scores(self.matrix(data))

    def predict(self, data) -> np.ndarray:
        scores = self.predict_scores(data)
        # argmax returns the first maximum, i.e. the smallest activity code on ties
        return np.argmax(scores, axis=1).astype(np.int64)

    def predict_one(self, data) -> Activity:
        return Activity(int(self.predict(data)[0]))

    def _scores(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def params(self) -> dict[str, Any]:
        raise NotImplementedError

    @classmethod
    def from_params(cls, feature_names, hyperparams, build_time_s, params):
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}(kind={self.kind!r}, n_features={self.n_features}, hyperparams={self.hyperparams})"


def training_arrays(data: FeatureDataset) -> tuple[np.ndarray, np.ndarray]:
    if len(data) == 0:
        raise ValueError("cannot train on an empty dataset")
    labels = data.require_labels()
    return data.X, labels


def vote_counts(votes: np.ndarray) -> np.ndarray:
    """``(n_voters, n)`` label votes -> ``(n, 7)`` histograms."""
    votes = np.asarray(votes, dtype=np.int64)
    n = votes.shape[1]
    counts = np.zeros((n, N_ACTIVITIES), dtype=np.int64)
    rows = np.broadcast_to(np.arange(n), votes.shape)
    np.add.at(counts, (rows.ravel(), votes.ravel()), 1)
    return counts


@contextmanager
def stopwatch():
    box = [0.0]
    start = time.perf_counter()
    try:
        yield box
    finally:
        box[0] = time.perf_counter() - start
