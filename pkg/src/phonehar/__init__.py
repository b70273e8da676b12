"""Smartphone accelerometer activity recognition.

Median-filtered triaxial readings are cut into 8-sample windows, described by
42 time- and frequency-domain statistics, classified, smoothed by majority
vote and turned into MET-based calorie estimates.
"""
__version__ = "0.1.0"

from .dsp import WindowTriple, dft_magnitudes, median_filter, window_triples
from .evaluation import EvaluationReport, evaluate, run_benchmark, shuffle_split, table3_plan
from .features import (
    FEATURE_NAMES, TABLE3_PRESETS, FeatureDataset, FeatureVector, WindowStats, extract_features,
    featurize, select_features, window_statistics,
)
from .ingest import Activity, LabeledSeries, ParseError, SynthParams, parse_csv, synthesize, write_csv
from .learn import (
    TrainedModel, load_model, rank_features_info_gain, save_model, train, train_bagging, train_forest,
    train_knn, train_nb, train_tree,
)
from .stream import MET_TABLE, RecognitionEvent, StreamConfig, calories, majority_vote, replay, run_stream

__all__ = [
    "Activity", "LabeledSeries", "ParseError", "SynthParams", "parse_csv", "synthesize", "write_csv",
    "WindowTriple", "dft_magnitudes", "median_filter", "window_triples",
    "FEATURE_NAMES", "TABLE3_PRESETS", "FeatureDataset", "FeatureVector", "WindowStats", "extract_features",
    "featurize", "select_features", "window_statistics",
    "TrainedModel", "load_model", "rank_features_info_gain", "save_model", "train", "train_bagging",
    "train_forest", "train_knn", "train_nb", "train_tree",
    "EvaluationReport", "evaluate", "run_benchmark", "shuffle_split", "table3_plan",
    "MET_TABLE", "RecognitionEvent", "StreamConfig", "calories", "majority_vote", "replay", "run_stream",
]
