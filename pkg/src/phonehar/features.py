"""Window statistics, the 42-feature vector, and the feature dataset container."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence, TextIO

import numpy as np

from .dsp import DEFAULT_FILTER_WIDTH, DEFAULT_STRIDE, WINDOW, WindowTriple, dft_magnitudes, median_filter, window_blocks, window_labels
from .ingest import N_ACTIVITIES, LabeledSeries, ParseError

AXES = ("x", "y", "z")
STATS = ("mean", "variance", "standarddeviation", "iqr", "kurtosis", "skewness", "energy")

TIME_NAMES = tuple(f"{stat}acc{axis}" for stat in STATS for axis in AXES)
FREQ_NAMES = tuple("f" + name for name in TIME_NAMES)
FEATURE_NAMES: tuple[str, ...] = TIME_NAMES + FREQ_NAMES
FEATURE_INDEX = {name: i for i, name in enumerate(FEATURE_NAMES)}
N_FEATURES = len(FEATURE_NAMES)

# common misspellings accepted in feature-subset configs
ALIASES = {}
for _axis in AXES:
    ALIASES[f"fqracc{_axis}"] = f"fiqracc{_axis}"
    ALIASES[f"igracc{_axis}"] = f"iqracc{_axis}"
    ALIASES[f"figracc{_axis}"] = f"fiqracc{_axis}"

# feature subsets of the reference benchmark table, keyed by row number
TABLE3_PRESETS: dict[str, tuple[str, ...]] = {
    "1.2": ("meanaccx", "meanaccy", "varianceaccy", "standarddeviationaccx", "standarddeviationaccz",
            "kurtosisaccy", "kurtosisaccz", "skewnessaccx", "skewnessaccz", "fkurtosisaccz"),
    "2.2": ("meanaccx", "meanaccy", "meanaccz", "varianceaccz", "skewnessaccx", "energyaccy",
            "energyaccz", "fmeanaccx", "fmeanaccz", "fvarianceaccy", "fkurtosisaccz"),
    "3.2": ("meanaccx", "meanaccy", "varianceaccx", "varianceaccy", "standarddeviationaccx",
            "standarddeviationaccy", "igraccx"),
    "4.2": ("meanaccy", "meanaccz", "varianceaccx", "varianceaccy", "igraccx", "skewnessaccx",
            "energyaccz", "fskewnessaccx"),
    "6.2": ("meanaccx", "meanaccy", "meanaccz", "standarddeviationaccx", "standarddeviationaccy",
            "standarddeviationaccz", "fmeanaccx", "fmeanaccy", "fmeanaccz", "fvarianceaccx", "figraccy",
            "fskewnessaccy", "fskewnessaccz", "fenergyaccy"),
}


def canonical_name(name: str) -> str:
    key = name.strip().lower()
    key = ALIASES.get(key, key)
    if key not in FEATURE_INDEX:
        raise KeyError(f"unknown feature name: {name!r}")
    return key


def resolve_names(names: Iterable[str]) -> tuple[str, ...]:
    """Canonicalize a feature list, rejecting unknown and duplicate names."""
    out = []
    for name in names:
        canon = canonical_name(name)
        if canon in out:
            raise ValueError(f"duplicate feature name: {name!r}")
        out.append(canon)
    if not out:
        raise ValueError("empty feature list")
    return tuple(out)


def resolve_subset(spec: str | Sequence[str] | None) -> tuple[str, ...]:
    """Parse ``all``, ``@table3:<row>`` or comma/space separated names."""
    if spec is None:
        return FEATURE_NAMES
    if isinstance(spec, str):
        text = spec.strip()
        if text.lower() in ("", "all"):
            return FEATURE_NAMES
        if text.lower().startswith("@table3:"):
            row = text.split(":", 1)[1].strip()
            if row not in TABLE3_PRESETS:
                raise KeyError(f"no table3 preset {row!r}; have {sorted(TABLE3_PRESETS)}")
            return resolve_names(TABLE3_PRESETS[row])
        return resolve_names(n for n in text.replace(",", " ").split())
    return resolve_names(spec)


# --------------------------------------------------------------------------
# statistics over the last axis (batched)


def _deviations(x: np.ndarray):
    mean = x.mean(axis=-1, keepdims=True)
    d = x - mean
    # exactly-constant windows get zero deviations regardless of summation rounding
    const = np.ptp(x, axis=-1, keepdims=True) == 0
    return np.where(const, 0.0, d)


def stat_mean(x):
    return x.mean(axis=-1)


def stat_variance(x):
    d = _deviations(x)
    return (d * d).mean(axis=-1)


def stat_std(x):
    return np.sqrt(stat_variance(x))


def stat_iqr(x):
    s = np.sort(x, axis=-1)
    n = s.shape[-1]
    half = n // 2
    lower, upper = s[..., :half], s[..., n - half:]
    return _median_sorted(upper) - _median_sorted(lower)


def _median_sorted(s):
    n = s.shape[-1]
    if n % 2:
        return s[..., n // 2]
    return 0.5 * (s[..., n // 2 - 1] + s[..., n // 2])


def stat_energy(x):
    return (x * x).mean(axis=-1)


def stat_kurtosis(x):
    d = _deviations(x)
    n = x.shape[-1]
    m2 = (d ** 2).sum(axis=-1)
    m4 = (d ** 4).sum(axis=-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = n * m4 / (m2 * m2)
    return np.where(m2 == 0, 0.0, out)


def stat_skewness(x):
    d = _deviations(x)
    n = x.shape[-1]
    m2 = (d ** 2).sum(axis=-1)
    m3 = (d ** 3).sum(axis=-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = math.sqrt(n) * m3 / m2 ** 1.5
    return np.where(m2 == 0, 0.0, out)


STAT_FUNCS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "mean": stat_mean,
    "variance": stat_variance,
    "standarddeviation": stat_std,
    "iqr": stat_iqr,
    "kurtosis": stat_kurtosis,
    "skewness": stat_skewness,
    "energy": stat_energy,
}


@dataclass(frozen=True)
class WindowStats:
    mean: float
    variance: float
    stddev: float
    iqr: float
    energy: float
    kurtosis: float
    skewness: float


def window_statistics(values) -> WindowStats:
    x = np.asarray(values, dtype=np.float64)
    if x.shape != (WINDOW,):
        raise ValueError(f"expected {WINDOW} values, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("window values must be finite")
    return WindowStats(
        mean=float(stat_mean(x)),
        variance=float(stat_variance(x)),
        stddev=float(stat_std(x)),
        iqr=float(stat_iqr(x)),
        energy=float(stat_energy(x)),
        kurtosis=float(stat_kurtosis(x)),
        skewness=float(stat_skewness(x)),
    )


def block_statistics(x: np.ndarray) -> np.ndarray:
    """All seven statistics of ``(..., 8)`` windows, stacked in feature order -> ``(..., 7)``."""
    return np.stack([STAT_FUNCS[s](x) for s in STATS], axis=-1)


def block_features(blocks: np.ndarray) -> np.ndarray:
    """``(n, 8, 3)`` filtered sample blocks -> ``(n, 42)`` feature matrix."""
    blocks = np.asarray(blocks, dtype=np.float64)
    n = len(blocks)
    per_axis = np.swapaxes(blocks, 1, 2)  # (n, 3, 8)
    time = block_statistics(per_axis)  # (n, 3, 7)
    freq = block_statistics(dft_magnitudes(per_axis))
    # stat-major, axis-minor ordering
    return np.concatenate([
        np.swapaxes(time, 1, 2).reshape(n, 21),
        np.swapaxes(freq, 1, 2).reshape(n, 21),
    ], axis=1)


@dataclass(frozen=True)
class FeatureVector:
    values: np.ndarray
    label: int | None = None

    def __getitem__(self, name: str) -> float:
        return float(self.values[FEATURE_INDEX[canonical_name(name)]])

    def as_dict(self) -> dict[str, float]:
        return {name: float(v) for name, v in zip(FEATURE_NAMES, self.values)}


def extract_features(triple: WindowTriple) -> FeatureVector:
    return FeatureVector(block_features(triple.block[None])[0], triple.label)


class FeatureExtractor:
    """Compute only the named features for single ``(8, 3)`` blocks.

    The DFT is skipped entirely when no frequency-domain feature is requested.
    """

    def __init__(self, names: Sequence[str] = FEATURE_NAMES):
        self.names = resolve_names(names)
        self._plan = []
        for name in self.names:
            freq = name.startswith("f") and name[1:] in FEATURE_INDEX
            base = name[1:] if freq else name
            stat, axis = base[:-4], AXES.index(base[-1])
            self._plan.append((freq, STAT_FUNCS[stat], axis))
        self.needs_dft = any(freq for freq, _, _ in self._plan)

    def __call__(self, block: np.ndarray) -> np.ndarray:
        per_axis = np.asarray(block, dtype=np.float64).T
        mags = dft_magnitudes(per_axis) if self.needs_dft else None
        return np.array([float(func((mags if freq else per_axis)[axis])) for freq, func, axis in self._plan])


# --------------------------------------------------------------------------
# datasets


@dataclass(eq=False)
class FeatureDataset:
    """Feature matrix ``X`` (rows in window order) with optional activity labels."""

    X: np.ndarray
    labels: np.ndarray | None = None
    feature_names: tuple[str, ...] = FEATURE_NAMES

    def __post_init__(self):
        self.feature_names = tuple(self.feature_names)
        self.X = np.asarray(self.X, dtype=np.float64).reshape(-1, len(self.feature_names))
        if self.labels is not None:
            self.labels = np.asarray(self.labels, dtype=np.int64).reshape(-1)
            if len(self.labels) != len(self.X):
                raise ValueError("labels and rows differ in length")
            if len(self.labels) and (self.labels.min() < 0 or self.labels.max() >= N_ACTIVITIES):
                raise ValueError("labels must be activity codes 0..6")

    def __len__(self) -> int:
        return len(self.X)

    @property
    def labeled(self) -> bool:
        return self.labels is not None

    def require_labels(self) -> np.ndarray:
        if self.labels is None:
            raise ValueError("dataset has no labels")
        return self.labels

    def subset(self, rows) -> "FeatureDataset":
        rows = np.asarray(rows)
        labels = None if self.labels is None else self.labels[rows]
        return FeatureDataset(self.X[rows], labels, self.feature_names)

    def columns(self, names: Sequence[str]) -> np.ndarray:
        """Matrix of the named columns (aliases accepted), in the given order."""
        index = {n: i for i, n in enumerate(self.feature_names)}
        try:
            cols = [index[canonical_name(n)] for n in names]
        except KeyError as err:
            raise KeyError(f"dataset lacks feature {err.args[0]!r}") from None
        return self.X[:, cols]

    def equals(self, other: "FeatureDataset") -> bool:
        if self.feature_names != other.feature_names or not np.array_equal(self.X, other.X):
            return False
        if (self.labels is None) != (other.labels is None):
            return False
        return self.labels is None or np.array_equal(self.labels, other.labels)


def select_features(data: FeatureDataset, names: Sequence[str]) -> FeatureDataset:
    """Project onto ``names`` (aliases accepted, duplicates rejected), keeping row order."""
    names = resolve_names(names)
    return FeatureDataset(data.columns(names), data.labels, names)


def featurize(series: LabeledSeries, filter_width: int = DEFAULT_FILTER_WIDTH,
              stride: int = DEFAULT_STRIDE) -> FeatureDataset:
    """Median filter each axis, cut windows, and extract 42 features per window."""
    if len(series) < WINDOW:
        raise ValueError(f"series has {len(series)} samples; at least {WINDOW} needed for one window")
    filtered = median_filter(series.samples, filter_width)
    X = block_features(window_blocks(filtered, stride))
    labels = window_labels(series.labels, stride) if series.labeled else None
    return FeatureDataset(X, labels)


def write_dataset(data: FeatureDataset, stream: TextIO | str | Path) -> None:
    if isinstance(stream, (str, Path)):
        with open(stream, "w", newline="", encoding="utf-8") as fh:
            return write_dataset(data, fh)
    header = list(data.feature_names) + (["activity"] if data.labeled else [])
    stream.write(",".join(header) + "\n")
    for i, row in enumerate(data.X):
        cells = [repr(float(v)) for v in row]
        if data.labeled:
            cells.append(str(int(data.labels[i])))
        stream.write(",".join(cells) + "\n")


def read_dataset(stream: TextIO | str | Path) -> FeatureDataset:
    if isinstance(stream, (str, Path)):
        with open(stream, newline="", encoding="utf-8") as fh:
            return read_dataset(fh)
    reader = csv.reader(stream)
    try:
        header = [h.strip().lower() for h in next(reader)]
    except StopIteration:
        raise ParseError("missing header", 1) from None
    labeled = bool(header) and header[-1] == "activity"
    try:
        names = resolve_names(header[:-1] if labeled else header)
    except (KeyError, ValueError) as err:
        raise ParseError(str(err), 1) from None
    width = len(header)
    rows, labels = [], []
    for row in reader:
        line = reader.line_num
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != width:
            raise ParseError(f"expected {width} columns, got {len(row)}", line)
        try:
            values = [float(c) for c in row[:len(names)]]
        except ValueError:
            raise ParseError("non-numeric feature value", line) from None
        if not all(math.isfinite(v) for v in values):
            raise ParseError("non-finite feature value", line)
        rows.append(values)
        if labeled:
            try:
                code = int(row[-1])
            except ValueError:
                raise ParseError(f"non-integer activity {row[-1]!r}", line) from None
            if not 0 <= code < N_ACTIVITIES:
                raise ParseError(f"unknown activity code {code}", line)
            labels.append(code)
    X = np.array(rows, dtype=np.float64).reshape(-1, len(names))
    return FeatureDataset(X, np.array(labels, dtype=np.int64) if labeled else None, names)
