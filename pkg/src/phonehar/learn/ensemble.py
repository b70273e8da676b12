"""Bootstrap tree ensembles: random forest and bagging."""
from __future__ import annotations

import math

import numpy as np

from ..features import FeatureDataset
from .base import TrainedModel, stopwatch, training_arrays, vote_counts
from .tree import DEFAULT_MAX_DEPTH, DEFAULT_MIN_LEAF, DecisionTree, grow_tree


class TreeEnsemble(TrainedModel):
    """Plurality vote over member trees; vote ties go to the smallest code."""

    def __init__(self, feature_names, trees: list[DecisionTree], hyperparams=None, build_time_s=0.0):
        super().__init__(feature_names, hyperparams, build_time_s)
        self.trees = list(trees)

    def votes(self, X: np.ndarray) -> np.ndarray:
        return np.stack([t.predict_labels(X) for t in self.trees])

    def _scores(self, X):
        return vote_counts(self.votes(X)) / len(self.trees)

    def params(self):
        return {"trees": [t.params() for t in self.trees]}

    @classmethod
    def from_params(cls, feature_names, hyperparams, build_time_s, params):
        trees = [DecisionTree.from_params(feature_names, {}, 0.0, p) for p in params["trees"]]
        return cls(feature_names, trees, hyperparams, build_time_s)


class RandomForest(TreeEnsemble):
    kind = "forest"


class Bagging(TreeEnsemble):
    kind = "bagging"


def _fit_members(X, y, n_members, m_features, seed, bootstrap, max_depth, min_leaf, feature_names):
    if n_members < 1:
        raise ValueError("ensemble needs at least one member")
    n = len(X)
    trees = []
    # one independent stream per member, so member i never depends on member j
    for child in np.random.SeedSequence(seed).spawn(n_members):
        rng = np.random.default_rng(child)
        rows = rng.integers(0, n, size=n) if bootstrap else np.arange(n)
        arrays = grow_tree(X[rows], y[rows], max_depth, min_leaf, m_features, rng)
        trees.append(DecisionTree(feature_names, *arrays))
    return trees


def default_m_features(d: int) -> int:
    return max(1, math.ceil(math.sqrt(d)))


def train_forest(data: FeatureDataset, n_trees: int = 100, m_features: int | None = None,
                 seed: int = 0, bootstrap: bool = True, max_depth: int | None = DEFAULT_MAX_DEPTH,
                 min_leaf: int = DEFAULT_MIN_LEAF) -> RandomForest:
    X, y = training_arrays(data)
    m = default_m_features(X.shape[1]) if m_features is None else int(m_features)
    if not 1 <= m <= X.shape[1]:
        raise ValueError(f"m_features must be in 1..{X.shape[1]}, got {m}")
    with stopwatch() as elapsed:
        trees = _fit_members(X, y, n_trees, m, seed, bootstrap, max_depth, min_leaf, data.feature_names)
    hyper = {"n_trees": n_trees, "m_features": m, "seed": seed, "bootstrap": bootstrap,
             "max_depth": max_depth, "min_leaf": min_leaf}
    return RandomForest(data.feature_names, trees, hyper, elapsed[0])


def train_bagging(data: FeatureDataset, n_bags: int = 10, seed: int = 0, bootstrap: bool = True,
                  max_depth: int | None = DEFAULT_MAX_DEPTH, min_leaf: int = DEFAULT_MIN_LEAF) -> Bagging:
    X, y = training_arrays(data)
    with stopwatch() as elapsed:
        trees = _fit_members(X, y, n_bags, X.shape[1], seed, bootstrap, max_depth, min_leaf, data.feature_names)
    hyper = {"n_bags": n_bags, "seed": seed, "bootstrap": bootstrap, "max_depth": max_depth,
             "min_leaf": min_leaf}
    return Bagging(data.feature_names, trees, hyper, elapsed[0])


__all__ = ["RandomForest", "Bagging", "TreeEnsemble", "train_forest", "train_bagging"]
