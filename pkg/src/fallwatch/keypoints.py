"""Pose keypoint domain types and the JSONL stream codec.

A frame holds one person's 17 pose keypoints in normalized image
coordinates: origin at the top-left corner, (1, 1) at the bottom-right,
y growing downward. The detection engine consumes frames only through
this module, which keeps it independent of whichever pose estimator
produced them.

Stream grammar (UTF-8 JSONL, one frame per line, LF terminators):

    {"frame_index": <uint>, "timestamp_ms": <uint|null>,
     "keypoints": [[<y>, <x>, <confidence>], ...]}

The keypoints array has exactly 17 triples in index order 0..16; every
value lies in [0, 1]. Out-of-range values are a hard parse error, never
clamped: the normalized contract is the only coupling to the extractor,
and silent clamping would hide extractor bugs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable, Iterator


class KeypointIndex(IntEnum):
    """Canonical names for the 17 single-person pose keypoints."""

    NOSE = 0
    LEFT_EYE = 1
    RIGHT_EYE = 2
    LEFT_EAR = 3
    RIGHT_EAR = 4
    LEFT_SHOULDER = 5
    RIGHT_SHOULDER = 6
    LEFT_ELBOW = 7
    RIGHT_ELBOW = 8
    LEFT_WRIST = 9
    RIGHT_WRIST = 10
    LEFT_HIP = 11
    RIGHT_HIP = 12
    LEFT_KNEE = 13
    RIGHT_KNEE = 14
    LEFT_ANKLE = 15
    RIGHT_ANKLE = 16


KEYPOINT_COUNT = len(KeypointIndex)

# Head, arms and shoulders vs. hips, knees and ankles. The two sets
# partition all 17 indices; the geometric fall test compares them.
UPPER_BODY = frozenset(KeypointIndex(i) for i in range(0, 11))
LOWER_BODY = frozenset(KeypointIndex(i) for i in range(11, 17))

_FRAME_FIELDS = ("frame_index", "timestamp_ms", "keypoints")
_COORD_NAMES = ("y", "x", "confidence")


class StreamFormatError(ValueError):
    """A keypoint stream violated its grammar or ordering contract."""

    def __init__(self, message: str, *, line_number: int | None = None,
                 field: str | None = None) -> None:
        prefix = f"line {line_number}: " if line_number is not None else ""
        suffix = f" (field: {field})" if field is not None else ""
        super().__init__(f"{prefix}{message}{suffix}")
        self.line_number = line_number
        self.field = field


class MalformedLine(StreamFormatError):
    """The line is not a JSON object at all."""


class SchemaError(StreamFormatError):
    """The line is JSON but does not match the frame schema."""


class DecreasingIndex(StreamFormatError):
    """A frame arrived with a frame_index that did not increase."""


def _require_unit_interval(name: str, value: object) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"{name} must be a number, got {value!r}")
    value = float(value)
    if not 0.0 <= value <= 1.0:  # also rejects NaN
        raise ValueError(f"{name} must be within [0, 1], got {value!r}")
    return value


@dataclass(frozen=True, slots=True)
class Keypoint:
    """One named keypoint with normalized position and confidence."""

    index: KeypointIndex
    y: float
    x: float
    confidence: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "index", KeypointIndex(self.index))
        for name in _COORD_NAMES:
            object.__setattr__(self, name,
                               _require_unit_interval(name, getattr(self, name)))


@dataclass(frozen=True, slots=True)
class PoseFrame:
    """One video frame: 17 keypoints, ordered by index.

    Immutable after construction; safe to share between threads.
    """

    frame_index: int
    keypoints: tuple[Keypoint, ...]
    timestamp_ms: int | None = None

    def __post_init__(self) -> None:
        if (isinstance(self.frame_index, bool)
                or not isinstance(self.frame_index, int)
                or self.frame_index < 0):
            raise ValueError(
                f"frame_index must be a nonnegative integer, got {self.frame_index!r}")
        if self.timestamp_ms is not None:
            if (isinstance(self.timestamp_ms, bool)
                    or not isinstance(self.timestamp_ms, int)
                    or self.timestamp_ms < 0):
                raise ValueError(
                    f"timestamp_ms must be a nonnegative integer or None, "
                    f"got {self.timestamp_ms!r}")
        keypoints = tuple(self.keypoints)
        if len(keypoints) != KEYPOINT_COUNT:
            raise ValueError(
                f"expected {KEYPOINT_COUNT} keypoints, got {len(keypoints)}")
        for expected, keypoint in zip(KeypointIndex, keypoints):
            if keypoint.index != expected:
                raise ValueError(
                    f"keypoint at position {expected} has index {keypoint.index}; "
                    "keypoints must be sorted by index with no duplicates")
        object.__setattr__(self, "keypoints", keypoints)

    def keypoint(self, index: KeypointIndex | int) -> Keypoint:
        return self.keypoints[KeypointIndex(index)]


def parse_frame(line: str, line_number: int | None = None) -> PoseFrame:
    """Parse one JSONL line into a validated PoseFrame.

    Raises MalformedLine when the line is not a JSON object, SchemaError
    when it is JSON but violates the frame schema. Both errors name the
    line number (when given) and the offending field.
    """
    try:
        payload = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MalformedLine(f"invalid JSON: {exc.msg}",
                            line_number=line_number) from None
    if not isinstance(payload, dict):
        raise MalformedLine(
            f"expected a JSON object, got {type(payload).__name__}",
            line_number=line_number)

    for name in _FRAME_FIELDS:
        if name not in payload:
            raise SchemaError("missing field", line_number=line_number, field=name)
    for name in payload:
        if name not in _FRAME_FIELDS:
            raise SchemaError("unexpected field", line_number=line_number, field=name)

    frame_index = payload["frame_index"]
    if (isinstance(frame_index, bool) or not isinstance(frame_index, int)
            or frame_index < 0):
        raise SchemaError(f"frame_index must be a nonnegative integer, "
                          f"got {frame_index!r}",
                          line_number=line_number, field="frame_index")

    timestamp_ms = payload["timestamp_ms"]
    if timestamp_ms is not None:
        if (isinstance(timestamp_ms, bool) or not isinstance(timestamp_ms, int)
                or timestamp_ms < 0):
            raise SchemaError(f"timestamp_ms must be a nonnegative integer or "
                              f"null, got {timestamp_ms!r}",
                              line_number=line_number, field="timestamp_ms")

    entries = payload["keypoints"]
    if not isinstance(entries, list):
        raise SchemaError("keypoints must be an array",
                          line_number=line_number, field="keypoints")
    if len(entries) != KEYPOINT_COUNT:
        detail = (f"missing index {len(entries)}" if len(entries) < KEYPOINT_COUNT
                  else f"unexpected index {KEYPOINT_COUNT}")
        raise SchemaError(
            f"expected {KEYPOINT_COUNT} keypoints, got {len(entries)} ({detail})",
            line_number=line_number, field="keypoints")

    keypoints = []
    for index, entry in enumerate(entries):
        if not isinstance(entry, list) or len(entry) != 3:
            raise SchemaError(
                "each keypoint must be a [y, x, confidence] triple",
                line_number=line_number, field=f"keypoints[{index}]")
        values = {}
        for name, value in zip(_COORD_NAMES, entry):
            try:
                values[name] = _require_unit_interval(name, value)
            except ValueError as exc:
                raise SchemaError(str(exc), line_number=line_number,
                                  field=f"keypoints[{index}].{name}") from None
        keypoints.append(Keypoint(index=KeypointIndex(index), **values))

    return PoseFrame(frame_index=frame_index, keypoints=tuple(keypoints),
                     timestamp_ms=timestamp_ms)


def serialize_frame(frame: PoseFrame) -> str:
    """Emit one canonical JSONL line (no trailing newline).

    parse_frame(serialize_frame(f)) reproduces f exactly: floats are
    written with shortest round-tripping repr.
    """
    payload = {
        "frame_index": frame.frame_index,
        "timestamp_ms": frame.timestamp_ms,
        "keypoints": [[kp.y, kp.x, kp.confidence] for kp in frame.keypoints],
    }
    return json.dumps(payload, separators=(",", ":"), allow_nan=False)


def confident_keypoints(frame: PoseFrame, threshold: float) -> set[Keypoint]:
    """Keypoints whose confidence is strictly greater than threshold.

    Keypoints at exactly the threshold are excluded.
    """
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold must be within [0, 1], got {threshold!r}")
    return {kp for kp in frame.keypoints if kp.confidence > threshold}


def read_frames(lines: Iterable[str], *, first_line_number: int = 1) -> Iterator[PoseFrame]:
    """Yield validated frames from JSONL lines, enforcing stream order.

    Blank lines are skipped. Raises DecreasingIndex when frame_index
    fails to strictly increase: the debounce counter's meaning depends
    on frame order, so out-of-order input is rejected, not reordered.
    """
    previous_index: int | None = None
    for line_number, line in enumerate(lines, start=first_line_number):
        if not line.strip():
            continue
        frame = parse_frame(line, line_number=line_number)
        if previous_index is not None and frame.frame_index <= previous_index:
            raise DecreasingIndex(
                f"frame_index {frame.frame_index} after {previous_index}; "
                "indices must strictly increase",
                line_number=line_number, field="frame_index")
        previous_index = frame.frame_index
        yield frame
