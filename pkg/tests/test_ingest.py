import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from phonehar.ingest import (
    Activity, LabeledSeries, MotionProfile, ParseError, SynthParams, parse_csv, synthesize,
    synthesize_session, to_csv_text, write_csv,
)


def test_activity_codes():
    assert len(Activity) == 7
    assert Activity.IDLE == 0 and Activity.NORMAL_WALKING == 2
    assert [a.label for a in Activity] == [
        "Idle", "SlowWalking", "NormalWalking", "FastWalking", "Jogging", "Running", "Jumping"]
    assert {Activity.parse(a.label) for a in Activity} == set(Activity)
    assert Activity.parse("slow_walking") is Activity.SLOW_WALKING
    assert Activity.parse("5") is Activity.RUNNING
    with pytest.raises(ValueError):
        Activity.parse("swimming")


def test_parse_table1_rows(table1_text):
    series = parse_csv(io.StringIO(table1_text))
    assert len(series) == 21
    np.testing.assert_array_equal(series.samples[0], [13.9151, -5.58328, -3.60088])
    assert series.labels[0] == Activity.NORMAL_WALKING
    np.testing.assert_array_equal(series.samples[10], [8.973468, -3.20823, 3.65834])
    assert series.labels[10] == Activity.IDLE
    assert series.sample_rate_hz == 250.0


def test_header_only_file():
    series = parse_csv(io.StringIO("accx,accy,accz,activity\n"))
    assert len(series) == 0 and series.labeled
    assert not parse_csv(io.StringIO("accx,accy,accz\n")).labeled


def test_sample_rate_comes_from_caller():
    assert parse_csv(io.StringIO("accx,accy,accz\n1,2,3\n"), sample_rate_hz=50).sample_rate_hz == 50


@pytest.mark.parametrize("body, line", [
    ("1,2\n", 2),
    ("1,2,3,0\n", 2),
    ("1,x,3\n", 2),
    ("1,2,3\n4,nan,6\n", 3),
    ("1,2,3\n4,5,inf\n", 3),
])
def test_malformed_rows_report_line(body, line):
    with pytest.raises(ParseError) as info:
        parse_csv(io.StringIO("accx,accy,accz\n" + body))
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


@pytest.mark.parametrize("code", ["7", "-1", "2.5"])
def test_bad_activity_code(code):
    with pytest.raises(ParseError):
        parse_csv(io.StringIO(f"accx,accy,accz,activity\n1,2,3,{code}\n"))


def test_bad_header():
    with pytest.raises(ParseError):
        parse_csv(io.StringIO("x,y,z\n1,2,3\n"))
    with pytest.raises(ParseError):
        parse_csv(io.StringIO(""))


def test_write_empty_and_unlabeled():
    assert to_csv_text(LabeledSeries(np.empty((0, 3)), np.empty(0))) == "accx,accy,accz,activity\n"
    text = to_csv_text(LabeledSeries([[1.0, 2.0, 3.0]]))
    assert text == "accx,accy,accz\n1.0,2.0,3.0\n"
    assert "\r" not in text


def test_table1_round_trip(table1_text):
    series = parse_csv(io.StringIO(table1_text))
    again = parse_csv(io.StringIO(to_csv_text(series)))
    assert again.equals(series)


finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@settings(max_examples=60, deadline=None)
@given(samples=arrays(np.float64, st.tuples(st.integers(0, 30), st.just(3)), elements=finite),
       labeled=st.booleans(), data=st.data())
def test_round_trip_property(samples, labeled, data):
    labels = None
    if labeled:
        labels = np.array(data.draw(st.lists(st.integers(0, 6), min_size=len(samples), max_size=len(samples))))
    series = LabeledSeries(samples, labels)
    buf = io.StringIO()
    write_csv(series, buf)
    buf.seek(0)
    assert parse_csv(buf).equals(series)


def test_series_invariants():
    with pytest.raises(ValueError):
        LabeledSeries(np.zeros((3, 3)), [0, 1])
    with pytest.raises(ValueError):
        LabeledSeries(np.zeros((1, 3)), sample_rate_hz=0)
    with pytest.raises(ValueError):
        LabeledSeries([[0.0, math.nan, 0.0]])


def test_noiseless_idle_is_gravity():
    profiles = dict(SynthParams().profiles)
    profiles[Activity.IDLE] = MotionProfile((0.0, 0.0, 0.0), 0.0, 0.0)
    params = SynthParams(profiles=profiles, gravity=(0.0, 0.0, 9.81))
    s = synthesize(Activity.IDLE, 3.3, params)
    assert len(s) == 825
    assert np.all(s.samples[:, 2] == 9.81)
    assert np.all(s.samples[:, :2] == 0.0)
    assert np.all(s.labels == Activity.IDLE)


def test_synthesize_is_deterministic():
    a = synthesize("running", 2.0, SynthParams(seed=42))
    b = synthesize("running", 2.0, SynthParams(seed=42))
    assert a.samples.tobytes() == b.samples.tobytes()
    c = synthesize("running", 2.0, SynthParams(seed=43))
    assert not np.array_equal(a.samples, c.samples)


def test_sample_count_is_floor():
    assert len(synthesize("idle", 0.0041)) == 1
    assert len(synthesize("idle", 10.0)) == 2500
    with pytest.raises(ValueError):
        synthesize("idle", 0.0)
    with pytest.raises(ValueError):
        synthesize("idle", -1.0)


def test_jogging_variance_matches_closed_form():
    params = SynthParams()
    prof = params.profiles[Activity.JOGGING]
    s = synthesize(Activity.JOGGING, 10.0, params)
    assert len(s) == 2500
    expected = prof.amplitude[0] ** 2 / 2 + prof.noise_std ** 2
    assert abs(s.samples[:, 0].var(ddof=1) / expected - 1) <= 0.20


def test_default_profiles_intensity_ordering():
    profiles = SynthParams().profiles
    chain = [Activity.IDLE, Activity.SLOW_WALKING, Activity.NORMAL_WALKING, Activity.FAST_WALKING,
             Activity.JOGGING, Activity.RUNNING]
    for lo, hi in zip(chain, chain[1:]):
        assert max(profiles[lo].amplitude) <= max(profiles[hi].amplitude)
        assert profiles[lo].frequency <= profiles[hi].frequency
        assert profiles[lo].noise_std <= profiles[hi].noise_std
    jump = profiles[Activity.JUMPING].amplitude
    assert jump[2] > max(jump[0], jump[1])


def test_session_concatenates_segments():
    s = synthesize_session([("idle", 1.0), ("running", 0.5)], SynthParams(seed=3))
    assert len(s) == 375
    assert list(np.unique(s.labels[:250])) == [0] and list(np.unique(s.labels[250:])) == [5]


def test_motion_profile_validation():
    with pytest.raises(ValueError):
        MotionProfile((-1.0, 0.0, 0.0), 1.0, 0.1)
    with pytest.raises(ValueError):
        MotionProfile((1.0, 1.0, 1.0), -1.0, 0.1)
