"""From-scratch classifiers and feature ranking."""
from .base import TrainedModel
from .bayes import GaussianNB, train_nb
from .ensemble import Bagging, RandomForest, train_bagging, train_forest
from .infogain import FeatureRanking, rank_features_info_gain
from .knn import KNearest, train_knn
from .persist import MODEL_KINDS, ModelFormatError, dumps_model, load_model, loads_model, save_model
from .tree import DecisionTree, entropy, train_tree

TRAINERS = {
    "nb": train_nb,
    "tree": train_tree,
    "forest": train_forest,
    "bagging": train_bagging,
    "knn": train_knn,
}


def train(kind: str, data, **hyperparams) -> TrainedModel:
    """Dispatch to the trainer for ``kind`` (nb, tree, forest, bagging, knn)."""
    try:
        trainer = TRAINERS[kind]
    except KeyError:
        raise ValueError(f"unknown classifier kind {kind!r}; choose from {sorted(TRAINERS)}") from None
    return trainer(data, **hyperparams)


__all__ = [
    "TrainedModel", "GaussianNB", "DecisionTree", "RandomForest", "Bagging", "KNearest",
    "train_nb", "train_tree", "train_forest", "train_bagging", "train_knn", "train", "TRAINERS",
    "FeatureRanking", "rank_features_info_gain", "entropy",
    "save_model", "load_model", "dumps_model", "loads_model", "ModelFormatError", "MODEL_KINDS",
]
