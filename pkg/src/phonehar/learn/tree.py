"""Binary information-gain decision trees.

Splits are ``x <= t`` versus ``x > t`` with ``t`` the midpoint between
consecutive distinct sorted values. No pruning. A node becomes a leaf when it
is pure, at the depth limit, or when no admissible split (both sides at least
``min_leaf`` rows) exists; zero-gain splits are taken rather than stopping, so
an unlimited tree fits any training set without contradictory duplicates.
"""
from __future__ import annotations

import numpy as np

from ..features import FeatureDataset
from ..ingest import N_ACTIVITIES
from .base import TrainedModel, stopwatch, training_arrays

DEFAULT_MAX_DEPTH = 20
DEFAULT_MIN_LEAF = 2
_GAIN_TOL = 1e-9
_EYE = np.eye(N_ACTIVITIES, dtype=np.int32)


def entropy(labels) -> float:
    """Shannon entropy of a label sequence in bits."""
    counts = np.bincount(np.asarray(labels, dtype=np.int64))
    counts = counts[counts > 0]
    if counts.size == 0:
        return 0.0
    p = counts / counts.sum()
    return float(-(p * np.log2(p)).sum())


def _xlogx(n: int) -> np.ndarray:
    """Table of ``c log2 c`` for integer counts ``c = 0..n`` (0 log 0 = 0)."""
    c = np.arange(n + 1, dtype=np.float64)
    c[0] = 1.0
    out = c * np.log2(c)
    out[0] = 0.0
    return out


def _mass(counts: np.ndarray, total: np.ndarray, table: np.ndarray) -> np.ndarray:
    """``n*H`` for class-count histograms: ``n log n - sum c log c`` (bits)."""
    return table[total] - table[counts].sum(axis=-1)


def best_splits(X: np.ndarray, y: np.ndarray, min_leaf: int = 1):
    """Best threshold for every column of ``X``.

    Returns ``(gain, threshold)`` arrays of length ``X.shape[1]``; gain is in
    bits and is 0 (threshold NaN) where no admissible split exists.
    """
    n, d = X.shape
    gains = np.zeros(d)
    thresholds = np.full(d, np.nan)
    if n < 2 * max(min_leaf, 1):
        return gains, thresholds
    order = np.argsort(X, axis=0, kind="stable")
    sx = np.take_along_axis(X, order, axis=0)  # (n, d)
    onehot = _EYE[y[order]]  # (n, d, 7)
    left = np.cumsum(onehot, axis=0)[:-1]  # split after row i: (n-1, d, 7)
    total = left[-1] + onehot[-1]  # (d, 7) - identical for all columns
    right = total[None] - left
    n_left = np.arange(1, n)[:, None]
    n_right = n - n_left
    table = _xlogx(n)
    parent = _mass(total[0], np.array(n), table)
    gain_mass = parent - _mass(left, n_left, table) - _mass(right, n_right, table)  # (n-1, d)
    valid = (sx[:-1] < sx[1:]) & (n_left >= min_leaf) & (n_right >= min_leaf)
    gain_mass = np.where(valid, gain_mass, -np.inf)
    best = np.argmax(gain_mass, axis=0)  # first (smallest threshold) on ties
    cols = np.arange(d)
    top = gain_mass[best, cols]
    ok = np.isfinite(top)
    gains[ok] = np.maximum(top[ok], 0.0) / n
    lo, hi = sx[best, cols], sx[np.minimum(best + 1, n - 1), cols]
    mid = 0.5 * (lo + hi)
    # adjacent floats can round the midpoint up onto the right value
    mid = np.where(mid >= hi, lo, mid)
    thresholds[ok] = mid[ok]
    return gains, thresholds


class DecisionTree(TrainedModel):
    kind = "tree"

    def __init__(self, feature_names, feature, threshold, left, right, counts,
                 hyperparams=None, build_time_s=0.0):
        super().__init__(feature_names, hyperparams, build_time_s)
        self.feature = np.asarray(feature, dtype=np.int64)  # -1 marks a leaf
        self.threshold = np.asarray(threshold, dtype=np.float64)
        self.left = np.asarray(left, dtype=np.int64)
        self.right = np.asarray(right, dtype=np.int64)
        self.counts = np.asarray(counts, dtype=np.int64).reshape(-1, N_ACTIVITIES)
        self.value = np.argmax(self.counts, axis=1)

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    @property
    def depth(self) -> int:
        depth = np.zeros(self.n_nodes, dtype=np.int64)
        for i in range(self.n_nodes):  # children always follow their parent
            if self.feature[i] >= 0:
                depth[self.left[i]] = depth[self.right[i]] = depth[i] + 1
        return int(depth.max())

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Leaf index reached by each row."""
        node = np.zeros(len(X), dtype=np.int64)
        active = self.feature[node] >= 0
        while active.any():
            idx = np.flatnonzero(active)
            cur = node[idx]
            go_left = X[idx, self.feature[cur]] <= self.threshold[cur]
            node[idx] = np.where(go_left, self.left[cur], self.right[cur])
            active[idx] = self.feature[node[idx]] >= 0
        return node

    def predict_labels(self, X: np.ndarray) -> np.ndarray:
        return self.value[self.apply(X)]

    def _scores(self, X):
        c = self.counts[self.apply(X)].astype(np.float64)
        return c / c.sum(axis=1, keepdims=True)

    def params(self):
        return {
            "feature": self.feature.tolist(),
            "threshold": [float(t) for t in self.threshold],
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "counts": self.counts.tolist(),
        }

    @classmethod
    def from_params(cls, feature_names, hyperparams, build_time_s, params):
        return cls(feature_names, params["feature"], params["threshold"], params["left"],
                   params["right"], params["counts"], hyperparams, build_time_s)


def grow_tree(X: np.ndarray, y: np.ndarray, max_depth: int | None = DEFAULT_MAX_DEPTH,
              min_leaf: int = DEFAULT_MIN_LEAF, m_features: int | None = None,
              rng: np.random.Generator | None = None):
    """Grow node arrays ``(feature, threshold, left, right, counts)`` depth-first.

    With ``m_features`` set, each node considers a random subset of that many
    columns drawn from ``rng``; candidates are scanned in ascending column
    order so ties go to the lowest column index.
    """
    n, d = X.shape
    if m_features is None or m_features >= d:
        m_features = d
    if m_features < d and rng is None:
        raise ValueError("feature subsampling needs an rng")
    if min_leaf < 1:
        raise ValueError("min_leaf must be >= 1")
    limit = np.inf if max_depth is None else max_depth
    feature, threshold, left, right, counts = [], [], [], [], []

    def new_node(rows):
        feature.append(-1)
        threshold.append(np.nan)
        left.append(-1)
        right.append(-1)
        counts.append(np.bincount(y[rows], minlength=N_ACTIVITIES))
        return len(feature) - 1

    stack = [(new_node(np.arange(n)), np.arange(n), 0)]
    while stack:
        node, rows, depth = stack.pop()
        hist = counts[node]
        if depth >= limit or np.count_nonzero(hist) <= 1 or len(rows) < 2 * min_leaf:
            continue
        if m_features < d:
            cols = np.sort(rng.choice(d, size=m_features, replace=False))
        else:
            cols = np.arange(d)
        gains, thr = best_splits(X[np.ix_(rows, cols)], y[rows], min_leaf)
        admissible = np.isfinite(thr)
        if not admissible.any():
            continue
        k = int(np.argmax(np.where(admissible, gains, -np.inf)))
        if gains[k] <= _GAIN_TOL / len(rows):
            # no split helps on its own (e.g. XOR); take the first admissible one so
            # an impure node with distinguishable rows is never left as a leaf
            k = int(np.flatnonzero(admissible)[0])
        f, t = int(cols[k]), float(thr[k])
        mask = X[rows, f] <= t
        lrows, rrows = rows[mask], rows[~mask]
        feature[node], threshold[node] = f, t
        left[node] = new_node(lrows)
        right[node] = new_node(rrows)
        # right pushed first so the left subtree is numbered first
        stack.append((right[node], rrows, depth + 1))
        stack.append((left[node], lrows, depth + 1))
    return feature, threshold, left, right, counts


def train_tree(data: FeatureDataset, max_depth: int | None = DEFAULT_MAX_DEPTH,
               min_leaf: int = DEFAULT_MIN_LEAF) -> DecisionTree:
    X, y = training_arrays(data)
    with stopwatch() as elapsed:
        arrays = grow_tree(X, y, max_depth, min_leaf)
    hyper = {"max_depth": max_depth, "min_leaf": min_leaf}
    return DecisionTree(data.feature_names, *arrays, hyperparams=hyper, build_time_s=elapsed[0])
