"""Median filtering, fixed-size windowing and the 8-point DFT."""
from __future__ import annotations

import cmath
from collections import deque
from dataclasses import dataclass

import numpy as np

from .ingest import N_ACTIVITIES, LabeledSeries

WINDOW = 8
DEFAULT_FILTER_WIDTH = 3
DEFAULT_STRIDE = WINDOW


def median_filter(values, width: int = DEFAULT_FILTER_WIDTH) -> np.ndarray:
    """Centered running median with edge replication.

    Works along axis 0, so an ``(n, 3)`` sample array is filtered per axis.
    """
    x = np.asarray(values, dtype=np.float64)
    if isinstance(width, bool) or int(width) != width or width < 1 or width % 2 == 0:
        raise ValueError(f"filter width must be an odd positive integer, got {width}")
    width = int(width)
    n = len(x)
    if n == 0 or width == 1:
        return x.copy()
    if width > 2 * n - 1:
        raise ValueError(f"filter width {width} too large for {n} samples")
    half = width // 2
    pad = [(half, half)] + [(0, 0)] * (x.ndim - 1)
    padded = np.pad(x, pad, mode="edge")
    windows = np.lib.stride_tricks.sliding_window_view(padded, width, axis=0)
    return np.median(windows, axis=-1)


class StreamingMedian:
    """Incremental counterpart of :func:`median_filter` for multichannel samples.

    Output lags input by ``width // 2`` samples. The stream head replicates the
    first sample and :meth:`flush` replicates the last one, so push-all then
    flush reproduces the batch filter exactly.
    """

    def __init__(self, width: int = DEFAULT_FILTER_WIDTH, channels: int = 3):
        if isinstance(width, bool) or int(width) != width or width < 1 or width % 2 == 0:
            raise ValueError(f"filter width must be an odd positive integer, got {width}")
        self.width = int(width)
        self.channels = channels
        self._buf: deque = deque(maxlen=self.width)
        self._received = 0
        self._emitted = 0

    def _emit(self) -> np.ndarray:
        self._emitted += 1
        return np.median(np.array(self._buf), axis=0)

    def push(self, sample) -> np.ndarray | None:
        """Add one sample; return the next filtered sample once one is available."""
        sample = np.asarray(sample, dtype=np.float64).reshape(self.channels)
        if self._received == 0:
            for _ in range(self.width // 2):
                self._buf.append(sample)
        self._buf.append(sample)
        self._received += 1
        if len(self._buf) == self.width:
            return self._emit()
        return None

    def flush(self) -> np.ndarray:
        """Emit the outputs still owed for received samples; resets the filter."""
        out = []
        if self._received:
            last = self._buf[-1]
            while self._emitted < self._received:
                self._buf.append(last)
                if len(self._buf) == self.width:
                    out.append(self._emit())
        self._buf.clear()
        self._received = self._emitted = 0
        return np.array(out, dtype=np.float64).reshape(-1, self.channels)


@dataclass(frozen=True)
class WindowTriple:
    """Time-aligned 8-sample windows for x, y, z starting at ``start``."""

    block: np.ndarray  # (8, 3)
    start: int
    label: int | None = None

    @property
    def wx(self) -> np.ndarray:
        return self.block[:, 0]

    @property
    def wy(self) -> np.ndarray:
        return self.block[:, 1]

    @property
    def wz(self) -> np.ndarray:
        return self.block[:, 2]


def majority_label(labels) -> int:
    """Most frequent code; ties go to the smallest code."""
    counts = np.bincount(np.asarray(labels, dtype=np.int64), minlength=N_ACTIVITIES)
    return int(np.argmax(counts))


def window_starts(n: int, stride: int = DEFAULT_STRIDE, size: int = WINDOW) -> np.ndarray:
    if stride < 1:
        raise ValueError(f"stride must be >= 1, got {stride}")
    if n < size:
        return np.empty(0, dtype=np.int64)
    return np.arange(0, n - size + 1, stride, dtype=np.int64)


def window_blocks(samples: np.ndarray, stride: int = DEFAULT_STRIDE) -> np.ndarray:
    """Stack of ``(n_windows, 8, 3)`` blocks; trailing partial window dropped."""
    samples = np.asarray(samples, dtype=np.float64).reshape(-1, 3)
    starts = window_starts(len(samples), stride)
    if len(starts) == 0:
        return np.empty((0, WINDOW, 3))
    idx = starts[:, None] + np.arange(WINDOW)
    return samples[idx]


def window_labels(labels: np.ndarray, stride: int = DEFAULT_STRIDE) -> np.ndarray:
    starts = window_starts(len(labels), stride)
    return np.array([majority_label(labels[s:s + WINDOW]) for s in starts], dtype=np.int64)


def window_triples(series: LabeledSeries, stride: int = DEFAULT_STRIDE) -> list[WindowTriple]:
    starts = window_starts(len(series), stride)
    blocks = window_blocks(series.samples, stride)
    out = []
    for start, block in zip(starts, blocks):
        label = majority_label(series.labels[start:start + WINDOW]) if series.labeled else None
        out.append(WindowTriple(block, int(start), label))
    return out


def _twiddles(n: int) -> np.ndarray:
    return np.array([cmath.exp(-2j * cmath.pi * k / n) for k in range(n // 2)])


_TW8 = _twiddles(WINDOW)


def fft(x) -> np.ndarray:
    """Iterative radix-2 decimation-in-time FFT over the last axis.

    The length must be a power of two. Batched input ``(..., n)`` is supported.
    """
    a = np.asarray(x, dtype=np.complex128)
    n = a.shape[-1]
    if n == 0 or n & (n - 1):
        raise ValueError(f"length must be a power of two, got {n}")
    bits = n.bit_length() - 1
    rev = np.array([int(format(i, f"0{bits}b")[::-1], 2) if bits else 0 for i in range(n)])
    a = a[..., rev].copy()
    tw = _TW8 if n == WINDOW else _twiddles(n)
    size = 2
    while size <= n:
        half = size // 2
        w = tw[:: n // size][:half]
        a = a.reshape(a.shape[:-1] + (n // size, size))
        even = a[..., :half].copy()
        odd = a[..., half:] * w
        a[..., :half] = even + odd
        a[..., half:] = even - odd
        a = a.reshape(a.shape[:-2] + (n,))
        size *= 2
    return a


def dft_magnitudes(window) -> np.ndarray:
    """|X_k| of the unnormalized forward DFT, k = 0..n-1 (last axis)."""
    w = np.asarray(window, dtype=np.float64)
    if w.shape[-1] != WINDOW:
        raise ValueError(f"window must have {WINDOW} values, got {w.shape[-1]}")
    return np.abs(fft(w))
