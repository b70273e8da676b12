"""Model files.

A model file is UTF-8 text: the magic line ``PHONEHAR-MODEL <version>``
followed by one JSON object with ``kind``, ``feature_names``,
``hyperparams``, ``build_time_s`` and the kind-specific ``params``. Floats
are written with shortest round-trip repr, so loading is lossless.
"""
from __future__ import annotations

import json
from pathlib import Path

from .base import TrainedModel
from .bayes import GaussianNB
from .ensemble import Bagging, RandomForest
from .knn import KNearest
from .tree import DecisionTree

MAGIC = "PHONEHAR-MODEL"
FORMAT_VERSION = 1

MODEL_KINDS: dict[str, type[TrainedModel]] = {
    cls.kind: cls for cls in (GaussianNB, DecisionTree, RandomForest, Bagging, KNearest)
}


class ModelFormatError(ValueError):
    pass


def dumps_model(model: TrainedModel) -> str:
    body = {
        "kind": model.kind,
        "feature_names": list(model.feature_names),
        "hyperparams": model.hyperparams,
        "build_time_s": model.build_time_s,
        "params": model.params(),
    }
    return f"{MAGIC} {FORMAT_VERSION}\n" + json.dumps(body, allow_nan=True) + "\n"


def loads_model(text: str) -> TrainedModel:
    first, _, rest = text.partition("\n")
    parts = first.split()
    if len(parts) != 2 or parts[0] != MAGIC:
        raise ModelFormatError("not a model file (bad magic header)")
    if parts[1] != str(FORMAT_VERSION):
        raise ModelFormatError(f"unsupported model format version {parts[1]!r}; expected {FORMAT_VERSION}")
    try:
        body = json.loads(rest)
        cls = MODEL_KINDS[body["kind"]]
        return cls.from_params(body["feature_names"], body["hyperparams"], body["build_time_s"], body["params"])
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as err:
        raise ModelFormatError(f"corrupt model file: {err}") from None


def save_model(model: TrainedModel, path: str | Path) -> None:
    Path(path).write_text(dumps_model(model), encoding="utf-8")


def load_model(path: str | Path) -> TrainedModel:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError:
        raise ModelFormatError("not a model file (not UTF-8 text)") from None
    return loads_model(text)
