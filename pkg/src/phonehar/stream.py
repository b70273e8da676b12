"""Streaming recognition with vote smoothing and MET calorie accounting."""
from __future__ import annotations

import json
import queue
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Mapping, TextIO

import numpy as np

from .dsp import DEFAULT_FILTER_WIDTH, WINDOW, StreamingMedian
from .features import FeatureExtractor
from .ingest import DEFAULT_SAMPLE_RATE_HZ, N_ACTIVITIES, Activity, read_rows
from .learn import TrainedModel

MET_TABLE: Mapping[Activity, float] = {
    Activity.IDLE: 1.3,
    Activity.SLOW_WALKING: 2.0,
    Activity.NORMAL_WALKING: 3.5,
    Activity.FAST_WALKING: 4.3,
    Activity.JOGGING: 7.0,
    Activity.RUNNING: 14.5,
    Activity.JUMPING: 11.8,
}

DEFAULT_VOTES = 10
SECONDS_PER_HOUR = 60 * 60


def majority_vote(votes) -> Activity:
    """Mode of the vote buffer; ties go to the smallest activity code."""
    votes = np.asarray(votes, dtype=np.int64).reshape(-1)
    if votes.size == 0:
        raise ValueError("empty vote buffer")
    return Activity(int(np.argmax(np.bincount(votes, minlength=N_ACTIVITIES))))


def calories(activity: Activity | int, elapsed_s: float, weight_kg: float,
             met: Mapping[Activity, float] = MET_TABLE) -> float:
    """kcal burnt over ``elapsed_s`` seconds: ``y * w * MET / 3600``."""
    if not weight_kg > 0:
        raise ValueError(f"weight must be positive, got {weight_kg}")
    if elapsed_s < 0:
        raise ValueError(f"elapsed time must be non-negative, got {elapsed_s}")
    return elapsed_s * weight_kg * met[Activity(activity)] / SECONDS_PER_HOUR


@dataclass(frozen=True)
class StreamConfig:
    weight_kg: float = 70.0
    votes_per_decision: int = DEFAULT_VOTES
    window: int = WINDOW
    filter_width: int = DEFAULT_FILTER_WIDTH
    sample_rate_hz: float = DEFAULT_SAMPLE_RATE_HZ
    rate_multiplier: float = 0.0
    wall_clock: bool = False  # y from wall time between decisions instead of stream time
    met: Mapping[Activity, float] = field(default_factory=lambda: dict(MET_TABLE))

    def __post_init__(self):
        if not self.weight_kg > 0:
            raise ValueError("weight_kg must be positive")
        if self.votes_per_decision < 1:
            raise ValueError("votes_per_decision must be >= 1")
        if self.window != WINDOW:
            raise ValueError(f"features are defined for {WINDOW}-sample windows")
        if not self.sample_rate_hz > 0:
            raise ValueError("sample_rate_hz must be positive")
        if self.rate_multiplier < 0:
            raise ValueError("rate_multiplier must be >= 0")
        missing = set(Activity) - set(self.met)
        if missing or min(self.met.values()) <= 0:
            raise ValueError("MET table must give a positive value for every activity")

    @property
    def block_seconds(self) -> float:
        return self.votes_per_decision * self.window / self.sample_rate_hz


@dataclass(frozen=True)
class RecognitionEvent:
    decision_index: int
    activity: Activity
    elapsed_s: float
    kcal_delta: float
    kcal_total: float
    votes: tuple[int, ...]  # histogram over the 7 codes

    def to_record(self) -> dict:
        return {
            "decision_index": self.decision_index,
            "activity_code": int(self.activity),
            "activity_name": self.activity.label,
            "elapsed_s": self.elapsed_s,
            "kcal_delta": self.kcal_delta,
            "kcal_total": self.kcal_total,
            "votes": list(self.votes),
        }

    def values(self) -> tuple:
        """Everything except wall-clock dependent quantities."""
        return (self.decision_index, int(self.activity), self.elapsed_s, self.kcal_delta,
                self.kcal_total, self.votes)


def run_stream(source: Iterable, model: TrainedModel, cfg: StreamConfig | None = None) -> Iterator[RecognitionEvent]:
    """Classify a sample stream window by window and emit one event per vote block.

    ``source`` yields ``(ax, ay, az)`` samples in time order. Only the
    model's features are computed. An incomplete final vote block is dropped.
    """
    cfg = cfg or StreamConfig()
    extract = FeatureExtractor(model.feature_names)
    filt = StreamingMedian(cfg.filter_width)
    window: list[np.ndarray] = []
    votes: list[int] = []
    state = {"index": 0, "total": 0.0, "last": time.monotonic()}

    def on_filtered(sample) -> RecognitionEvent | None:
        window.append(sample)
        if len(window) < cfg.window:
            return None
        feats = extract(np.array(window))
        window.clear()
        votes.append(int(model.predict(feats[None, :])[0]))
        if len(votes) < cfg.votes_per_decision:
            return None
        hist = np.bincount(votes, minlength=N_ACTIVITIES)
        activity = majority_vote(votes)
        votes.clear()
        now = time.monotonic()
        y = now - state["last"] if cfg.wall_clock else cfg.block_seconds
        state["last"] = now
        delta = calories(activity, y, cfg.weight_kg, cfg.met)
        state["total"] += delta
        event = RecognitionEvent(state["index"], activity, y, delta, state["total"], tuple(int(c) for c in hist))
        state["index"] += 1
        return event

    for sample in source:
        out = filt.push(sample)
        if out is not None:
            event = on_filtered(out)
            if event is not None:
                yield event
    for out in filt.flush():
        event = on_filtered(out)
        if event is not None:
            yield event


def replay(path: str | Path | TextIO, rate_multiplier: float = 0.0,
           sample_rate_hz: float = DEFAULT_SAMPLE_RATE_HZ) -> Iterator[np.ndarray]:
    """Yield CSV samples paced at ``sample_rate_hz * rate_multiplier`` (0 = unpaced)."""
    if rate_multiplier < 0:
        raise ValueError("rate_multiplier must be >= 0")
    if not isinstance(path, (str, Path)):
        yield from _paced(path, rate_multiplier, sample_rate_hz)
        return
    with open(path, newline="", encoding="utf-8") as fh:
        yield from _paced(fh, rate_multiplier, sample_rate_hz)


def _paced(fh: TextIO, rate_multiplier: float, sample_rate_hz: float) -> Iterator[np.ndarray]:
    _, rows = read_rows(fh)
    period = 1.0 / (sample_rate_hz * rate_multiplier) if rate_multiplier > 0 else 0.0
    start = time.monotonic()
    for i, (ax, ay, az, _) in enumerate(rows):
        if period:
            # sample i is due at start + i * period
            ahead = start + i * period - time.monotonic()
            if ahead > 0.002:
                time.sleep(ahead)
        yield np.array((ax, ay, az))


_DONE = object()


def threaded(source: Iterable, maxsize: int = 1024) -> Iterator:
    """Run ``source`` in a producer thread connected by a bounded, ordered queue."""
    q: queue.Queue = queue.Queue(maxsize=maxsize)

    def produce():
        try:
            for item in source:
                q.put(item)
        except BaseException as err:  # noqa: BLE001 - re-raised in the consumer
            q.put(err)
        else:
            q.put(_DONE)

    thread = threading.Thread(target=produce, daemon=True)
    thread.start()
    while True:
        item = q.get()
        if item is _DONE:
            break
        if isinstance(item, BaseException):
            raise item
        yield item
    thread.join()


def write_events(events: Iterable[RecognitionEvent], stream: TextIO) -> list[RecognitionEvent]:
    """Write JSON lines as events arrive; return the events written."""
    out = []
    for ev in events:
        stream.write(json.dumps(ev.to_record()) + "\n")
        stream.flush()
        out.append(ev)
    return out
