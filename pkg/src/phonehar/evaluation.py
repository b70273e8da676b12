"""Randomized train/test evaluation and the multi-classifier benchmark."""
from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .features import FEATURE_NAMES, TABLE3_PRESETS, FeatureDataset, resolve_names, resolve_subset, select_features
from .ingest import N_ACTIVITIES
from .learn import TrainedModel, train

log = logging.getLogger(__name__)

DEFAULT_TRAIN_FRACTION = 0.70


def shuffle_split(data: FeatureDataset, train_fraction: float = DEFAULT_TRAIN_FRACTION,
                  seed: int = 0) -> tuple[FeatureDataset, FeatureDataset]:
    """Seeded shuffle, then the first ``floor(N * fraction)`` rows train and the rest test."""
    if not 0 < train_fraction < 1:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    if len(data) == 0:
        raise ValueError("cannot split an empty dataset")
    perm = np.random.default_rng(seed).permutation(len(data))
    n_train = int(np.floor(len(data) * train_fraction))
    return data.subset(perm[:n_train]), data.subset(perm[n_train:])


@dataclass
class EvaluationReport:
    kind: str
    hyperparams: dict[str, Any]
    feature_names: list[str]
    accuracy_pct: float
    build_time_s: float
    confusion: list[list[int]]  # rows = true code, cols = predicted code
    n_train: int
    n_test: int
    seed: int | None = None
    label: str = ""
    error: str | None = None

    @property
    def n_features(self) -> int:
        return len(self.feature_names)

    @property
    def ok(self) -> bool:
        return self.error is None

    def to_record(self) -> dict[str, Any]:
        rec = asdict(self)
        rec["n_features"] = self.n_features
        return rec

    @classmethod
    def from_record(cls, rec: dict[str, Any]) -> "EvaluationReport":
        rec = dict(rec)
        rec.pop("n_features", None)
        return cls(**rec)


def confusion_matrix(true, pred) -> np.ndarray:
    cm = np.zeros((N_ACTIVITIES, N_ACTIVITIES), dtype=np.int64)
    np.add.at(cm, (np.asarray(true, dtype=np.int64), np.asarray(pred, dtype=np.int64)), 1)
    return cm


def evaluate(model: TrainedModel, test: FeatureDataset, n_train: int = 0, seed: int | None = None,
             label: str = "") -> EvaluationReport:
    truth = test.require_labels()
    if len(test) == 0:
        raise ValueError("empty test set")
    pred = model.predict(test)
    cm = confusion_matrix(truth, pred)
    correct = int(np.trace(cm))
    if correct != int(np.count_nonzero(pred == truth)):
        raise AssertionError("confusion trace disagrees with direct match count")
    return EvaluationReport(
        kind=model.kind,
        hyperparams=dict(model.hyperparams),
        feature_names=list(model.feature_names),
        accuracy_pct=round(100.0 * correct / len(test), 4),
        build_time_s=model.build_time_s,
        confusion=cm.tolist(),
        n_train=n_train,
        n_test=len(test),
        seed=seed,
        label=label,
    )


@dataclass
class PlanRow:
    kind: str
    hyperparams: dict[str, Any] = field(default_factory=dict)
    features: tuple[str, ...] = FEATURE_NAMES
    label: str = ""

    def __post_init__(self):
        self.features = resolve_names(self.features)


def table3_plan(seed: int = 0) -> list[PlanRow]:
    """Reference benchmark rows 1.1 to 5.1 (row 6.x, an SVM, is not provided)."""
    P = TABLE3_PRESETS
    return [
        PlanRow("nb", {}, FEATURE_NAMES, "1.1"),
        PlanRow("nb", {}, P["1.2"], "1.2"),
        PlanRow("tree", {}, FEATURE_NAMES, "2.1"),
        PlanRow("tree", {}, P["2.2"], "2.2"),
        PlanRow("forest", {"seed": seed}, FEATURE_NAMES, "3.1"),
        PlanRow("forest", {"seed": seed}, P["3.2"], "3.2"),
        PlanRow("bagging", {"seed": seed}, FEATURE_NAMES, "4.1"),
        PlanRow("bagging", {"seed": seed}, P["4.2"], "4.2"),
        PlanRow("knn", {"k": 1}, FEATURE_NAMES, "5.1"),
    ]


def parse_plan_row(text: str, seed: int = 0) -> PlanRow:
    """``kind[:key=value,...][/features]``, e.g. ``forest:n_trees=50/@table3:3.2``."""
    head, _, feats = text.partition("/")
    kind, _, hp = head.partition(":")
    hyper: dict[str, Any] = {}
    for item in filter(None, hp.split(",")):
        key, _, value = item.partition("=")
        hyper[key.strip()] = json.loads(value) if value.strip() not in ("", "None") else None
    if kind in ("forest", "bagging"):
        hyper.setdefault("seed", seed)
    return PlanRow(kind.strip(), hyper, resolve_subset(feats or None), text)


def run_benchmark(plan: Sequence[PlanRow], data: FeatureDataset, seed: int = 0,
                  train_fraction: float = DEFAULT_TRAIN_FRACTION,
                  fresh_split: bool = False) -> list[EvaluationReport]:
    """Train and evaluate every plan row on one shared seeded split.

    With ``fresh_split`` each row gets its own split seeded ``seed + row``.
    A row that fails is reported with ``error`` set; the rest still run.
    """
    if not plan:
        raise ValueError("empty benchmark plan")
    shared = shuffle_split(data, train_fraction, seed)
    reports = []
    for i, row in enumerate(plan):
        row_seed = seed + i if fresh_split else seed
        train_set, test_set = shuffle_split(data, train_fraction, row_seed) if fresh_split else shared
        try:
            model = train(row.kind, select_features(train_set, row.features), **row.hyperparams)
            rep = evaluate(model, test_set, len(train_set), row_seed, row.label)
        except Exception as err:  # noqa: BLE001 - failures are reported per row
            log.warning("plan row %s (%s) failed: %s", row.label or i, row.kind, err)
            rep = EvaluationReport(row.kind, dict(row.hyperparams), list(row.features), float("nan"),
                                   float("nan"), [], len(train_set), len(test_set), row_seed,
                                   row.label, f"{type(err).__name__}: {err}")
        reports.append(rep)
    return reports


_ALGO_NAMES = {"nb": "Naive Bayes", "tree": "Decision Tree", "forest": "Random Forest",
               "bagging": "Bagging", "knn": "IBk (k-NN)"}


def render_table(reports: Sequence[EvaluationReport]) -> str:
    header = ("Row", "Algorithm", "#Feat", "Accuracy %", "Build s", "Features")
    lines = []
    for rep in reports:
        feats = "(all)" if tuple(rep.feature_names) == FEATURE_NAMES else " ".join(rep.feature_names)
        acc = f"{rep.accuracy_pct:.4f}" if rep.ok else "FAILED"
        build = f"{rep.build_time_s:.4f}" if rep.ok else (rep.error or "")
        lines.append((rep.label, _ALGO_NAMES.get(rep.kind, rep.kind), str(rep.n_features), acc, build, feats))
    widths = [max(len(r[i]) for r in [header, *lines]) for i in range(len(header) - 1)]
    out = []
    for row in [header, *lines]:
        cells = [row[i].ljust(widths[i]) if i in (1,) else row[i].rjust(widths[i]) for i in range(len(widths))]
        out.append("  ".join(cells + [row[-1]]))
    out.insert(1, "-" * len(out[0]))
    return "\n".join(out)


def write_records(reports: Sequence[EvaluationReport], path: str | Path) -> None:
    """One JSON object per line, one line per report."""
    with open(path, "w", encoding="utf-8") as fh:
        for rep in reports:
            fh.write(json.dumps(rep.to_record()) + "\n")


def read_records(path: str | Path) -> list[EvaluationReport]:
    with open(path, encoding="utf-8") as fh:
        return [EvaluationReport.from_record(json.loads(line)) for line in fh if line.strip()]
