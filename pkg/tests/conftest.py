import numpy as np
import pytest

from phonehar.features import FeatureDataset, featurize
from phonehar.ingest import Activity, SynthParams, synthesize
from phonehar.evaluation import shuffle_split

TABLE1_TEXT = """accx,accy,accz,activity
13.9151,-5.58328,-3.60088,2
10.1993,-2.27928,-0.61292,2
14.05875,-7.40287,4.884171,2
10.4866,-10.2951,4.405331,2
12.58392,-7.89129,-0.67995,2
12.13381,-4.48195,-2.94008,2
12.00932,-8.74362,-0.96726,2
12.08593,-4.11803,-2.15478,2
12.92869,-4.34787,1.704672,2
12.49773,-9.94073,4.309563,2
8.973468,-3.20823,3.65834,0
8.657434,-3.35188,3.476381,0
9.155427,-3.53384,3.409343,0
8.188169,-3.8403,2.920926,0
8.552089,-3.58173,3.284845,0
8.753201,-3.31358,3.093309,0
8.66701,-3.68707,3.275268,0
8.657434,-3.62961,3.102885,0
8.724471,-3.24654,3.303998,0
8.465898,-3.1795,4.118027,0
8.331821,-3.09331,3.878607,0
"""


@pytest.fixture
def table1_text():
    return TABLE1_TEXT


def synthetic_features(seconds: float, seed: int = 0) -> FeatureDataset:
    parts = [featurize(synthesize(a, seconds, SynthParams(seed=seed))) for a in Activity]
    return FeatureDataset(np.vstack([p.X for p in parts]), np.concatenate([p.labels for p in parts]))


@pytest.fixture(scope="session")
def small_benchmark():
    """~1600 windows of all seven activities, split 70/30 with seed 0."""
    data = synthetic_features(8.0)
    return shuffle_split(data, 0.7, seed=0)


@pytest.fixture(scope="session")
def full_corpus():
    """60 s per activity at 250 Hz: 7 x 1875 = 13,125 windows."""
    return synthetic_features(60.0)


@pytest.fixture(scope="session")
def full_benchmark(full_corpus):
    """The full corpus split 70/30 with seed 0."""
    return shuffle_split(full_corpus, 0.7, seed=0)
