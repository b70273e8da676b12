import io
import json
import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import histogram_vote
from phonehar.features import FEATURE_NAMES, featurize
from phonehar.ingest import Activity, LabeledSeries, SynthParams, synthesize, synthesize_session, to_csv_text
from phonehar.learn import train_nb
from phonehar.learn.base import TrainedModel
from phonehar.stream import (
    MET_TABLE, StreamConfig, calories, majority_vote, replay, run_stream, threaded, write_events,
)


class Constant(TrainedModel):
    """Always predicts one code; counts how often it is asked."""
    kind = "const"

    def __init__(self, code, names=("meanaccx",)):
        super().__init__(names)
        self.code, self.calls = code, 0

    def _scores(self, X):
        self.calls += len(X)
        s = np.zeros((len(X), 7))
        s[:, self.code] = 1
        return s


def test_met_table():
    assert MET_TABLE[Activity.RUNNING] == 14.5 and MET_TABLE[Activity.IDLE] == 1.3
    assert len(MET_TABLE) == 7


def test_calorie_example():
    assert abs(calories(Activity.RUNNING, 2.0, 70.0) - 0.5638888888888889) <= 1e-9
    assert calories(Activity.IDLE, 0.0, 70) == 0.0
    with pytest.raises(ValueError):
        calories(Activity.IDLE, 1.0, 0.0)
    with pytest.raises(ValueError):
        calories(Activity.IDLE, -1.0, 70)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 6), min_size=1, max_size=30))
def test_majority_vote_matches_histogram(votes):
    assert majority_vote(votes) == histogram_vote(votes)


def test_majority_vote_examples():
    assert majority_vote([2, 2, 2, 2, 2, 2, 0, 0, 0, 0]) == Activity.NORMAL_WALKING
    assert majority_vote([3] * 5 + [1] * 5) == Activity.SLOW_WALKING
    with pytest.raises(ValueError):
        majority_vote([])


def test_stream_block_arithmetic():
    samples = np.zeros((8 * 25 + 3, 3))
    events = list(run_stream(iter(samples), Constant(5), StreamConfig(weight_kg=70)))
    assert len(events) == 2  # 25 windows -> 2 full blocks, partial dropped
    ev = events[1]
    assert ev.activity == Activity.RUNNING and ev.votes == (0, 0, 0, 0, 0, 10, 0)
    assert ev.elapsed_s == pytest.approx(0.32)
    assert ev.kcal_delta == pytest.approx(0.32 * 70 * 14.5 / 3600)
    assert ev.kcal_total == pytest.approx(2 * ev.kcal_delta)
    assert [e.decision_index for e in events] == [0, 1]


def test_stream_votes_and_config():
    cfg = StreamConfig(votes_per_decision=1, weight_kg=50)
    assert len(list(run_stream(iter(np.zeros((24, 3))), Constant(0), cfg))) == 3
    assert cfg.block_seconds == 8 / 250
    with pytest.raises(ValueError):
        StreamConfig(window=16)
    with pytest.raises(ValueError):
        StreamConfig(weight_kg=-1)
    with pytest.raises(ValueError):
        StreamConfig(met={Activity.IDLE: 1.0})


def test_stream_features_match_batch():
    series = synthesize_session([("idle", 1.0), ("jogging", 1.0)], SynthParams(seed=1))
    data = featurize(series)
    model = train_nb(data)
    cfg = StreamConfig(votes_per_decision=1)
    streamed = [int(e.activity) for e in run_stream(iter(series.samples), model, cfg)]
    assert streamed == list(model.predict(data))


def test_kcal_total_non_decreasing():
    model = train_nb(featurize(synthesize_session([(a, 2.0) for a in Activity])))
    series = synthesize_session([(a, 1.0) for a in reversed(Activity)], SynthParams(seed=9))
    totals = [e.kcal_total for e in run_stream(iter(series.samples), model)]
    assert len(totals) == 21
    assert all(b >= a for a, b in zip(totals, totals[1:]))


def test_wall_clock_mode_uses_time_between_decisions():
    def slow():
        for s in np.zeros((160, 3)):
            time.sleep(0.0005)
            yield s
    ev = list(run_stream(slow(), Constant(0), StreamConfig(wall_clock=True)))
    assert len(ev) == 2 and all(e.elapsed_s > 0 for e in ev)


def test_replay_reads_csv_unpaced():
    text = to_csv_text(LabeledSeries(np.arange(30.0).reshape(10, 3), [1] * 10))
    rows = list(replay(io.StringIO(text)))
    assert len(rows) == 10 and list(rows[3]) == [9.0, 10.0, 11.0]


def test_replay_pacing_short():
    text = to_csv_text(LabeledSeries(np.zeros((50, 3))))
    t0 = time.monotonic()
    rows = list(replay(io.StringIO(text), rate_multiplier=1.0, sample_rate_hz=250))
    assert len(rows) == 50
    assert time.monotonic() - t0 >= 49 / 250 - 0.01


@pytest.mark.slow
def test_replay_ten_seconds_real_time(tmp_path):
    path = tmp_path / "ten.csv"
    path.write_text(to_csv_text(synthesize("normal_walking", 10.0)))
    t0 = time.monotonic()
    n = sum(1 for _ in replay(path, rate_multiplier=1.0))
    elapsed = time.monotonic() - t0
    assert n == 2500
    assert abs(elapsed - 10.0) <= 0.5


def test_threaded_preserves_order_and_errors():
    assert list(threaded(iter(range(5000)), maxsize=8)) == list(range(5000))

    def broken():
        yield 1
        raise RuntimeError("sensor gone")
    with pytest.raises(RuntimeError, match="sensor gone"):
        list(threaded(broken()))


def test_write_events_json_lines():
    buf = io.StringIO()
    events = write_events(run_stream(iter(np.zeros((80, 3))), Constant(2)), buf)
    rec = json.loads(buf.getvalue().splitlines()[0])
    assert len(events) == 1
    assert rec["activity_name"] == "NormalWalking" and rec["activity_code"] == 2
    assert set(rec) == {"decision_index", "activity_code", "activity_name", "elapsed_s", "kcal_delta",
                        "kcal_total", "votes"}


def test_stream_only_computes_model_features():
    # a model using a time-domain subset never needs the DFT
    model = Constant(0, names=("meanaccx", "varianceaccy"))
    events = list(run_stream(iter(np.ones((80, 3))), model))
    assert model.calls == 10 and len(events) == 1
    full = Constant(0, names=FEATURE_NAMES)
    list(run_stream(iter(np.ones((80, 3))), full))
    assert full.calls == 10
