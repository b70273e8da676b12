"""Labeled accelerometer CSV I/O and a seeded synthetic signal generator.

The CSV layout is ``accx,accy,accz[,activity]`` with one reading per row and
no timestamp column; time is implied by the row index and the sample rate.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from enum import IntEnum
from pathlib import Path
from typing import Iterable, Iterator, Mapping, TextIO

import numpy as np

DEFAULT_SAMPLE_RATE_HZ = 250.0

HEADER_UNLABELED = ("accx", "accy", "accz")
HEADER_LABELED = ("accx", "accy", "accz", "activity")


class Activity(IntEnum):
    IDLE = 0
    SLOW_WALKING = 1
    NORMAL_WALKING = 2
    FAST_WALKING = 3
    JOGGING = 4
    RUNNING = 5
    JUMPING = 6

    @property
    def label(self) -> str:
        """CamelCase display name, e.g. ``SlowWalking``."""
        return "".join(part.capitalize() for part in self.name.split("_"))

    @classmethod
    def parse(cls, value: str | int) -> "Activity":
        """Resolve a code, member name or display name (case and separator insensitive)."""
        if isinstance(value, (int, np.integer)):
            return cls(int(value))
        text = str(value).strip()
        if text.lstrip("-").isdigit():
            return cls(int(text))
        key = text.replace("-", "").replace("_", "").replace(" ", "").lower()
        for member in cls:
            if member.name.replace("_", "").lower() == key:
                return member
        raise ValueError(f"unknown activity: {value!r}")


N_ACTIVITIES = len(Activity)


class ParseError(ValueError):
    """Raised for malformed accelerometer or feature CSV input."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(eq=False)
class LabeledSeries:
    """Time-ordered triaxial samples, shape ``(n, 3)``, with optional per-sample labels."""

    samples: np.ndarray
    labels: np.ndarray | None = None
    sample_rate_hz: float = DEFAULT_SAMPLE_RATE_HZ

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.float64).reshape(-1, 3)
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("samples must be finite")
        if self.labels is not None:
            self.labels = np.asarray(self.labels, dtype=np.int64).reshape(-1)
            if len(self.labels) != len(self.samples):
                raise ValueError(
                    f"labels length {len(self.labels)} != samples length {len(self.samples)}"
                )
            if len(self.labels) and (self.labels.min() < 0 or self.labels.max() >= N_ACTIVITIES):
                raise ValueError("labels must be activity codes 0..6")
        if not self.sample_rate_hz > 0:
            raise ValueError("sample_rate_hz must be positive")

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def labeled(self) -> bool:
        return self.labels is not None

    @property
    def duration_s(self) -> float:
        return len(self) / self.sample_rate_hz

    def equals(self, other: "LabeledSeries") -> bool:
        """Value equality of samples, labels and sample rate."""
        if self.sample_rate_hz != other.sample_rate_hz:
            return False
        if not np.array_equal(self.samples, other.samples):
            return False
        if (self.labels is None) != (other.labels is None):
            return False
        return self.labels is None or np.array_equal(self.labels, other.labels)

    @classmethod
    def concat(cls, parts: Iterable["LabeledSeries"]) -> "LabeledSeries":
        parts = list(parts)
        if not parts:
            raise ValueError("nothing to concatenate")
        rates = {p.sample_rate_hz for p in parts}
        if len(rates) != 1:
            raise ValueError(f"mixed sample rates: {sorted(rates)}")
        labeled = {p.labeled for p in parts}
        if len(labeled) != 1:
            raise ValueError("cannot mix labeled and unlabeled series")
        labels = np.concatenate([p.labels for p in parts]) if parts[0].labeled else None
        return cls(np.concatenate([p.samples for p in parts]), labels, rates.pop())


def _format(x: float) -> str:
    # repr gives the shortest string that round-trips exactly (17 sig. digits max)
    return repr(float(x))


def _parse_float(text: str, line: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"non-numeric value {text!r}", line) from None
    if not math.isfinite(value):
        raise ParseError(f"non-finite value {text!r}", line)
    return value


def read_rows(stream: TextIO) -> tuple[bool, Iterator[tuple[float, float, float, int | None]]]:
    """Validate the header eagerly; return ``(labeled, rows)`` with rows parsed lazily.

    Each row is ``(ax, ay, az, code_or_None)``.
    """
    reader = csv.reader(stream)
    try:
        first = next(reader)
    except StopIteration:
        raise ParseError("missing header", 1) from None
    header = tuple(cell.strip().lower() for cell in first)
    if header not in (HEADER_UNLABELED, HEADER_LABELED):
        raise ParseError(f"unexpected header {','.join(first)!r}", reader.line_num)
    width = len(header)

    def rows():
        for row in reader:
            line = reader.line_num
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != width:
                raise ParseError(f"expected {width} columns, got {len(row)}", line)
            ax, ay, az = (_parse_float(cell, line) for cell in row[:3])
            code = None
            if width == 4:
                text = row[3].strip()
                try:
                    code = int(text)
                except ValueError:
                    raise ParseError(f"non-integer activity {text!r}", line) from None
                if not 0 <= code < N_ACTIVITIES:
                    raise ParseError(f"unknown activity code {code}", line)
            yield ax, ay, az, code

    return width == 4, rows()


def parse_csv(stream: TextIO | str | Path, sample_rate_hz: float = DEFAULT_SAMPLE_RATE_HZ) -> LabeledSeries:
    """Read a labeled or unlabeled accelerometer CSV.

    ``stream`` may be an open text stream or a path. Labels are present iff
    the file has the fourth ``activity`` column.
    """
    if isinstance(stream, (str, Path)):
        with open(stream, newline="", encoding="utf-8") as fh:
            return parse_csv(fh, sample_rate_hz)
    labeled, rows = read_rows(stream)
    rows = list(rows)
    samples = np.array([r[:3] for r in rows], dtype=np.float64).reshape(-1, 3)
    labels = np.array([r[3] for r in rows], dtype=np.int64) if labeled else None
    return LabeledSeries(samples, labels, sample_rate_hz)


def write_csv(series: LabeledSeries, stream: TextIO | str | Path) -> None:
    """Write ``series`` in the accelerometer CSV layout (LF line endings)."""
    if isinstance(stream, (str, Path)):
        with open(stream, "w", newline="", encoding="utf-8") as fh:
            write_csv(series, fh)
        return
    labeled = series.labeled
    stream.write(",".join(HEADER_LABELED if labeled else HEADER_UNLABELED) + "\n")
    for i, (ax, ay, az) in enumerate(series.samples):
        cells = [_format(ax), _format(ay), _format(az)]
        if labeled:
            cells.append(str(int(series.labels[i])))
        stream.write(",".join(cells) + "\n")


def to_csv_text(series: LabeledSeries) -> str:
    buf = io.StringIO()
    write_csv(series, buf)
    return buf.getvalue()


# --------------------------------------------------------------------------
# synthetic signals


@dataclass(frozen=True)
class MotionProfile:
    """Per-activity sinusoid + noise model.

    ``amplitude`` is per axis (m/s^2) so that e.g. jumping can carry most of
    its energy on z. ``frequency`` is in Hz and ``noise_std`` in m/s^2.
    """

    amplitude: tuple[float, float, float]
    frequency: float
    noise_std: float

    def __post_init__(self):
        if len(self.amplitude) != 3 or min(self.amplitude) < 0:
            raise ValueError("amplitude must be three non-negative values")
        if self.frequency < 0 or self.noise_std < 0:
            raise ValueError("frequency and noise_std must be non-negative")


def _iso(a: float, f: float, s: float) -> MotionProfile:
    return MotionProfile((a, a, a), f, s)


# Motion intensity (amplitude, frequency, noise) rises from idle to running;
# jumping puts most of its amplitude on z. Noise doubles per intensity level so
# that, inside an 8-sample window (32 ms), spread is noise-dominated while the
# window means carry the slow sinusoid.
DEFAULT_PROFILES: Mapping[Activity, MotionProfile] = {
    Activity.IDLE: _iso(0.0, 0.0, 0.2),
    Activity.SLOW_WALKING: _iso(2.0, 1.0, 0.4),
    Activity.NORMAL_WALKING: _iso(5.0, 1.6, 0.8),
    Activity.FAST_WALKING: _iso(8.0, 2.0, 1.6),
    Activity.JOGGING: _iso(12.0, 2.5, 3.2),
    Activity.RUNNING: _iso(16.0, 3.0, 6.4),
    Activity.JUMPING: MotionProfile((2.5, 2.5, 16.0), 2.2, 1.6),
}

# phone held upright: gravity on y; axes in quadrature-ish phase
DEFAULT_GRAVITY = (0.0, 9.81, 0.0)
DEFAULT_AXIS_PHASE = (0.0, math.pi / 2.0, math.pi / 4.0)


@dataclass(frozen=True)
class SynthParams:
    profiles: Mapping[Activity, MotionProfile] = field(default_factory=lambda: dict(DEFAULT_PROFILES))
    gravity: tuple[float, float, float] = DEFAULT_GRAVITY
    axis_phase: tuple[float, float, float] = DEFAULT_AXIS_PHASE
    sample_rate_hz: float = DEFAULT_SAMPLE_RATE_HZ
    seed: int = 0

    def __post_init__(self):
        missing = set(Activity) - set(self.profiles)
        if missing:
            raise ValueError(f"profiles missing for {sorted(a.label for a in missing)}")
        if not self.sample_rate_hz > 0:
            raise ValueError("sample_rate_hz must be positive")


def synthesize(activity: Activity | int | str, duration_s: float, params: SynthParams | None = None) -> LabeledSeries:
    """Generate ``floor(duration_s * rate)`` labeled samples for one activity.

    Each axis is ``gravity + A*sin(2*pi*f*t + phase) + N(0, sigma)``. The noise
    generator is seeded from ``(params.seed, activity code)`` so the output is a
    pure function of the arguments.
    """
    activity = Activity.parse(activity)
    params = params or SynthParams()
    if not duration_s > 0:
        raise ValueError(f"duration must be positive, got {duration_s}")
    n = int(math.floor(duration_s * params.sample_rate_hz))
    profile = params.profiles[activity]
    t = np.arange(n, dtype=np.float64) / params.sample_rate_hz
    rng = np.random.default_rng([int(params.seed) & 0xFFFFFFFFFFFFFFFF, int(activity)])
    amp = np.asarray(profile.amplitude, dtype=np.float64)
    phase = np.asarray(params.axis_phase, dtype=np.float64)
    signal = amp * np.sin(2.0 * math.pi * profile.frequency * t[:, None] + phase)
    noise = rng.normal(0.0, 1.0, size=(n, 3)) * profile.noise_std
    samples = np.asarray(params.gravity, dtype=np.float64) + signal + noise
    labels = np.full(n, int(activity), dtype=np.int64)
    return LabeledSeries(samples, labels, params.sample_rate_hz)


def synthesize_session(
    plan: Iterable[tuple[Activity | int | str, float]], params: SynthParams | None = None
) -> LabeledSeries:
    """Concatenate segments ``[(activity, seconds), ...]`` into one series.

    Segment ``i`` is seeded with ``params.seed + i`` so repeated activities differ.
    """
    params = params or SynthParams()
    parts = []
    for i, (activity, seconds) in enumerate(plan):
        seg_params = SynthParams(params.profiles, params.gravity, params.axis_phase,
                                 params.sample_rate_hz, params.seed + i)
        parts.append(synthesize(activity, seconds, seg_params))
    return LabeledSeries.concat(parts)
