"""Streaming fall-detection rule engine.

The per-frame decision runs in four stages:

1. Confidence gate: only keypoints with confidence strictly above the
   threshold participate.
2. Bed suppression (optional): when a bed line is configured and every
   confident upper-body keypoint sits strictly below it (greater y),
   the frame is treated as on-bed activity and can never be a candidate.
3. Geometric test: the frame is a fall candidate when upper-body and
   lower-body keypoints sit at the same height (|dy| <= threshold_y)
   but far apart horizontally (|dx| > threshold_x) -- a horizontal body.
4. Debounce: a run of consecutive candidate frames increments a counter;
   the counter resets to zero on any non-candidate frame. An alert fires
   exactly when the counter reaches min_counter, once per unbroken run.

Everything here is a pure function of (state, frame, config); state is a
small immutable value, so independent streams can run concurrently with
no shared mutable data.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator

from .keypoints import Keypoint, PoseFrame

# Upper body occupies indices 0..10, lower body 11..16; frames keep
# keypoints in index order, so slicing is equivalent to set membership.
_UPPER_SLICE = slice(0, 11)
_LOWER_SLICE = slice(11, 17)

# Absorbs float64 subtraction artifacts (about 1 ulp near 1.0) without
# touching the data's resolution: stream values carry at most 9
# significant digits, so 1e-12 cannot flip a genuine comparison.
# |0.55 - 0.5| <= 0.05 must hold even though the float difference is
# 0.050000000000000044, and |0.9 - 0.4| > 0.5 must NOT hold even though
# the float difference is 0.5000000000000001.
_EPS = 1e-12


class OutOfOrderFrame(ValueError):
    """A frame arrived whose index did not increase past the last one."""


class PairPolicy(Enum):
    """How upper/lower keypoint pairs are aggregated by the geometric test.

    ANY_PAIR is the default and most sensitive reading: one qualifying
    pair makes the frame a candidate. ALL_PAIRS requires every pair to
    qualify; CENTROID tests the mean upper point against the mean lower
    point. The alternatives exist for threshold sweeps.
    """

    ANY_PAIR = "any_pair"
    ALL_PAIRS = "all_pairs"
    CENTROID = "centroid"


@dataclass(frozen=True, slots=True)
class DetectorConfig:
    """Detection thresholds. Defaults are the tuned operating point."""

    confidence_threshold: float = 0.5
    threshold_y: float = 0.05
    threshold_x: float = 0.5
    min_counter: int = 2
    bed_top_y: float | None = None  # None disables bed suppression
    pair_policy: PairPolicy = PairPolicy.ANY_PAIR

    def __post_init__(self) -> None:
        for name in ("confidence_threshold", "threshold_y", "threshold_x"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValueError(f"{name} must be a number, got {value!r}")
            value = float(value)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be within [0, 1], got {value!r}")
            object.__setattr__(self, name, value)
        if (isinstance(self.min_counter, bool)
                or not isinstance(self.min_counter, int)
                or self.min_counter < 1):
            raise ValueError(
                f"min_counter must be a positive integer, got {self.min_counter!r}")
        if self.bed_top_y is not None:
            value = self.bed_top_y
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValueError(f"bed_top_y must be a number, got {value!r}")
            value = float(value)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"bed_top_y must be within [0, 1], got {value!r}")
            object.__setattr__(self, "bed_top_y", value)
        object.__setattr__(self, "pair_policy", PairPolicy(self.pair_policy))

    def to_json_dict(self) -> dict:
        return {
            "confidence_threshold": self.confidence_threshold,
            "threshold_y": self.threshold_y,
            "threshold_x": self.threshold_x,
            "min_counter": self.min_counter,
            "bed_top_y": self.bed_top_y,
            "pair_policy": self.pair_policy.value,
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "DetectorConfig":
        """Build a config from a JSON object; absent keys take defaults."""
        if not isinstance(payload, dict):
            raise ValueError(f"config must be a JSON object, got {type(payload).__name__}")
        known = set(cls.__dataclass_fields__)
        unknown = sorted(set(payload) - known)
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(unknown)}")
        kwargs = dict(payload)
        if "pair_policy" in kwargs:
            kwargs["pair_policy"] = PairPolicy(kwargs["pair_policy"])
        return cls(**kwargs)


@dataclass(frozen=True, slots=True)
class DetectorState:
    """Debounce counter and alert latch; the only runtime state."""

    counter: int = 0
    alert_latched: bool = False
    last_frame_index: int | None = None


@dataclass(frozen=True, slots=True)
class FrameVerdict:
    """The detector's full per-frame decision record."""

    frame_index: int
    bed_filtered: bool
    candidate: bool
    counter_after: int
    alert_fired: bool

    def to_json_dict(self) -> dict:
        return {
            "frame_index": self.frame_index,
            "bed_filtered": self.bed_filtered,
            "candidate": self.candidate,
            "counter": self.counter_after,
            "alert": self.alert_fired,
        }


def _gated(keypoints: Iterable[Keypoint], threshold: float) -> list[Keypoint]:
    return [kp for kp in keypoints if kp.confidence > threshold]


def bed_filter(frame: PoseFrame, config: DetectorConfig) -> bool:
    """True when the frame should be suppressed as on-bed activity.

    Requires every confident upper-body keypoint strictly past the bed
    line (y greater), and at least one such keypoint: a single noisy
    keypoint must not suppress a genuine fall frame, so the reading is
    collective, and an upper body that is entirely below the gate gives
    the filter nothing to decide on.
    """
    if config.bed_top_y is None:
        return False
    upper = _gated(frame.keypoints[_UPPER_SLICE], config.confidence_threshold)
    if not upper:
        return False
    return all(kp.y > config.bed_top_y for kp in upper)


def _pair_qualifies(upper_y: float, upper_x: float, lower_y: float,
                    lower_x: float, config: DetectorConfig) -> bool:
    # y-test inclusive, x-test strict, matching the rule's boundary
    # semantics ("less than or equal" vs "greater than").
    return (abs(upper_y - lower_y) <= config.threshold_y + _EPS
            and abs(upper_x - lower_x) > config.threshold_x + _EPS)


def fall_candidate(frame: PoseFrame, config: DetectorConfig) -> bool:
    """Geometric test: do upper and lower body form a horizontal line?

    Uses the absolute y difference: the test means "upper and lower body
    at the same height", which a signed difference would trivially
    satisfy for every standing pose. Returns False whenever either
    confident set is empty -- an unevaluable condition counts as false.
    """
    upper = _gated(frame.keypoints[_UPPER_SLICE], config.confidence_threshold)
    lower = _gated(frame.keypoints[_LOWER_SLICE], config.confidence_threshold)
    if not upper or not lower:
        return False
    policy = config.pair_policy
    if policy is PairPolicy.ANY_PAIR:
        return any(_pair_qualifies(u.y, u.x, l.y, l.x, config)
                   for u in upper for l in lower)
    if policy is PairPolicy.ALL_PAIRS:
        return all(_pair_qualifies(u.y, u.x, l.y, l.x, config)
                   for u in upper for l in lower)
    upper_y = sum(kp.y for kp in upper) / len(upper)
    upper_x = sum(kp.x for kp in upper) / len(upper)
    lower_y = sum(kp.y for kp in lower) / len(lower)
    lower_x = sum(kp.x for kp in lower) / len(lower)
    return _pair_qualifies(upper_y, upper_x, lower_y, lower_x, config)


def step(state: DetectorState, frame: PoseFrame,
         config: DetectorConfig) -> tuple[DetectorState, FrameVerdict]:
    """Advance the detector by one frame.

    The alert latches per candidate run: it fires exactly when the
    counter reaches min_counter and stays silent for the rest of that
    unbroken run, so one fall produces one alert.
    """
    if (state.last_frame_index is not None
            and frame.frame_index <= state.last_frame_index):
        raise OutOfOrderFrame(
            f"frame_index {frame.frame_index} after {state.last_frame_index}; "
            "frames must arrive in strictly increasing order")

    suppressed = bed_filter(frame, config)
    candidate = not suppressed and fall_candidate(frame, config)
    if candidate:
        counter = state.counter + 1
        fired = counter == config.min_counter and not state.alert_latched
        latched = state.alert_latched or fired
    else:
        counter = 0
        fired = False
        latched = False

    new_state = DetectorState(counter=counter, alert_latched=latched,
                              last_frame_index=frame.frame_index)
    verdict = FrameVerdict(frame_index=frame.frame_index, bed_filtered=suppressed,
                           candidate=candidate, counter_after=counter,
                           alert_fired=fired)
    return new_state, verdict


def iter_verdicts(frames: Iterable[PoseFrame],
                  config: DetectorConfig) -> Iterator[FrameVerdict]:
    """Stream verdicts one frame at a time; memory stays bounded."""
    state = DetectorState()
    for frame in frames:
        state, verdict = step(state, frame, config)
        yield verdict


def run_stream(frames: Iterable[PoseFrame],
               config: DetectorConfig) -> list[FrameVerdict]:
    """Fold step over a whole stream from the fresh state."""
    return list(iter_verdicts(frames, config))
