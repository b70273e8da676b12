import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from oracles import clamped_median_filter, naive_dft, naive_dft_magnitudes
from phonehar.dsp import (
    StreamingMedian, dft_magnitudes, fft, majority_label, median_filter, window_blocks, window_labels,
    window_starts, window_triples,
)
from phonehar.ingest import LabeledSeries

vals = st.floats(-1e6, 1e6, allow_nan=False)


def test_spike_removed():
    np.testing.assert_array_equal(median_filter([0, 10, 0, 10, 0], 3), [0, 0, 10, 0, 0])
    np.testing.assert_array_equal(median_filter([1, 1, 50, 1, 1]), [1, 1, 1, 1, 1])


def test_width_one_is_identity():
    x = np.random.default_rng(0).normal(size=(17, 3))
    np.testing.assert_array_equal(median_filter(x, 1), x)


@pytest.mark.parametrize("width", [0, 2, -3, 4, 2.5, True])
def test_bad_width(width):
    with pytest.raises(ValueError):
        median_filter([1.0, 2.0, 3.0], width)
    with pytest.raises(ValueError):
        StreamingMedian(width)


def test_width_too_large():
    with pytest.raises(ValueError):
        median_filter([1.0, 2.0], 5)


@settings(max_examples=80, deadline=None)
@given(x=st.lists(vals, min_size=1, max_size=40), width=st.sampled_from([1, 3, 5, 7]))
def test_matches_clamped_oracle(x, width):
    if width > 2 * len(x) - 1:
        return
    np.testing.assert_array_equal(median_filter(x, width), clamped_median_filter(x, width))


@settings(max_examples=80, deadline=None)
@given(x=arrays(np.float64, st.tuples(st.integers(1, 40), st.just(3)), elements=vals),
       width=st.sampled_from([1, 3, 5]))
def test_bounded_and_shape_preserving(x, width):
    if width > 2 * len(x) - 1:
        return
    y = median_filter(x, width)
    assert y.shape == x.shape
    assert np.all(y >= x.min(axis=0)) and np.all(y <= x.max(axis=0))


@settings(max_examples=60, deadline=None)
@given(x=arrays(np.float64, st.tuples(st.integers(1, 30), st.just(3)), elements=vals),
       width=st.sampled_from([1, 3, 5]))
def test_streaming_equals_batch(x, width):
    if width > 2 * len(x) - 1:
        return
    filt = StreamingMedian(width)
    out = [o for o in (filt.push(s) for s in x) if o is not None]
    tail = filt.flush()
    got = np.vstack(out + [tail]) if out else tail
    np.testing.assert_array_equal(got, median_filter(x, width))


def test_streaming_lag_and_reuse():
    filt = StreamingMedian(3)
    assert filt.push([1, 1, 1]) is None
    assert filt.push([2, 2, 2]) is not None
    assert len(filt.flush()) == 1
    assert len(filt.flush()) == 0  # reset
    assert filt.push([5, 5, 5]) is None


def test_window_starts():
    assert list(window_starts(7)) == []
    assert list(window_starts(8)) == [0]
    assert list(window_starts(24)) == [0, 8, 16]
    assert list(window_starts(20, stride=4)) == [0, 4, 8, 12]
    with pytest.raises(ValueError):
        window_starts(20, stride=0)


def test_windows_drop_partial_tail():
    s = np.arange(60, dtype=float).reshape(20, 3)
    blocks = window_blocks(s)
    assert blocks.shape == (2, 8, 3)
    np.testing.assert_array_equal(blocks[1], s[8:16])


def test_window_label_majority_ties_low():
    assert majority_label([2, 2, 2, 2, 0, 0, 0, 0]) == 0
    assert majority_label([5, 5, 5, 3, 3, 1, 1, 1]) == 1
    labels = np.array([2] * 5 + [4] * 3 + [4] * 8)
    np.testing.assert_array_equal(window_labels(labels), [2, 4])


def test_triples_are_aligned():
    s = np.random.default_rng(1).normal(size=(16, 3))
    series = LabeledSeries(s, [3] * 16)
    tr = window_triples(series)
    assert len(tr) == 2 and tr[1].start == 8 and tr[1].label == 3
    np.testing.assert_array_equal(tr[1].wx, s[8:, 0])
    np.testing.assert_array_equal(tr[1].wz, s[8:, 2])
    assert window_triples(LabeledSeries(s))[0].label is None


def test_cosine_window():
    x = [math.cos(2 * math.pi * t / 8) for t in range(8)]
    mags = dft_magnitudes(x)
    np.testing.assert_allclose(mags[[1, 7]], [4.0, 4.0], atol=1e-12)
    np.testing.assert_allclose(np.delete(mags, [1, 7]), 0.0, atol=1e-12)


def test_constant_and_impulse():
    np.testing.assert_allclose(dft_magnitudes(np.full(8, 3.0)), [24, 0, 0, 0, 0, 0, 0, 0], atol=1e-12)
    np.testing.assert_allclose(dft_magnitudes(np.eye(8)[0]), np.ones(8), atol=1e-15)


@settings(max_examples=100, deadline=None)
@given(arrays(np.float64, 8, elements=st.floats(-1e3, 1e3)))
def test_fft_matches_naive(x):
    np.testing.assert_allclose(fft(x), naive_dft(list(x)), atol=1e-9)
    np.testing.assert_allclose(dft_magnitudes(x), naive_dft_magnitudes(list(x)), atol=1e-9)


@pytest.mark.parametrize("n", [1, 2, 4, 16, 32])
def test_fft_other_powers_of_two(n):
    x = np.random.default_rng(n).normal(size=n)
    np.testing.assert_allclose(fft(x), naive_dft(list(x)), atol=1e-9)


def test_fft_batched_and_length_checks():
    x = np.random.default_rng(2).normal(size=(5, 3, 8))
    np.testing.assert_allclose(dft_magnitudes(x)[4, 2], naive_dft_magnitudes(list(x[4, 2])), atol=1e-12)
    with pytest.raises(ValueError):
        fft(np.zeros(6))
    with pytest.raises(ValueError):
        dft_magnitudes(np.zeros(16))


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, 8, elements=st.floats(-1e3, 1e3)))
def test_real_input_symmetry(x):
    m = dft_magnitudes(x)
    np.testing.assert_allclose(m[1:], m[1:][::-1], atol=1e-9)
