"""Information-gain feature ranking."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..features import FeatureDataset
from .base import training_arrays
from .tree import best_splits, entropy


@dataclass(frozen=True)
class FeatureRanking:
    entries: tuple[tuple[str, float], ...]  # (name, gain in bits), best first
    label_entropy: float

    @property
    def names(self) -> list[str]:
        return [name for name, _ in self.entries]

    def gain(self, name: str) -> float:
        return dict(self.entries)[name]

    def top(self, n: int) -> list[str]:
        return self.names[:n]


def rank_features_info_gain(data: FeatureDataset) -> FeatureRanking:
    """Rank columns by the best single binary split's entropy reduction.

    Ties keep the dataset's column order.
    """
    X, y = training_arrays(data)
    gains, _ = best_splits(X, y, min_leaf=1)
    h = entropy(y)
    gains = np.clip(gains, 0.0, h)
    order = sorted(range(len(gains)), key=lambda i: (-gains[i], i))
    return FeatureRanking(tuple((data.feature_names[i], float(gains[i])) for i in order), h)
