"""Decode-infer-emit loop: video in, keypoint JSONL out.

Emits the engine's stream grammar bit-exactly, one line per decoded
frame: ``{"frame_index": <uint>, "timestamp_ms": <uint|null>,
"keypoints": [[y, x, confidence], ... 17 triples]}``. The extractor
owns normalization, so marginally out-of-range model outputs are
clamped here; the engine stays strict. Frames never leave this
process and no video is recorded.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import IO, Iterator

import cv2
import numpy as np

from .model import INPUT_SIZE, KEYPOINT_COUNT


class SourceError(RuntimeError):
    """The video source could not be opened or decoded."""


@dataclass(frozen=True)
class ExtractionJob:
    """One extraction run: a video source and an output destination."""

    source: str  # file path or "cam:<N>"
    output: str  # file path or "-" for stdout
    model_variant: str = "movenet-thunder"


def open_capture(source: str) -> "cv2.VideoCapture":
    if source.startswith("cam:"):
        try:
            camera_index = int(source[len("cam:"):])
        except ValueError:
            raise SourceError(f"camera source must be cam:<index>, got {source!r}")
        capture = cv2.VideoCapture(camera_index)
    else:
        capture = cv2.VideoCapture(source)
    if not capture.isOpened():
        capture.release()
        raise SourceError(f"cannot open video source {source!r}")
    return capture


def preprocess(frame_bgr: np.ndarray) -> np.ndarray:
    """Straight resize to the model's 256x256 RGB input, no letterboxing."""
    resized = cv2.resize(frame_bgr, (INPUT_SIZE, INPUT_SIZE),
                         interpolation=cv2.INTER_LINEAR)
    return cv2.cvtColor(resized, cv2.COLOR_BGR2RGB)


def frame_line(frame_index: int, timestamp_ms: int | None,
               keypoints: np.ndarray) -> str:
    if keypoints.shape != (KEYPOINT_COUNT, 3):
        raise ValueError(f"backend returned shape {keypoints.shape}; "
                         f"expected ({KEYPOINT_COUNT}, 3)")
    clipped = np.clip(keypoints.astype(np.float64), 0.0, 1.0)
    payload = {
        "frame_index": frame_index,
        "timestamp_ms": timestamp_ms,
        "keypoints": [[float(y), float(x), float(score)]
                      for y, x, score in clipped],
    }
    return json.dumps(payload, separators=(",", ":"), allow_nan=False)


def _container_timestamp(capture: "cv2.VideoCapture") -> int | None:
    value = capture.get(cv2.CAP_PROP_POS_MSEC)
    if value is None or math.isnan(value) or value < 0:
        return None
    return int(round(value))


def iter_stream_lines(capture: "cv2.VideoCapture", backend) -> Iterator[str]:
    """Sequential decode-infer-emit; stops at end of stream."""
    frame_index = 0
    while True:
        timestamp_ms = _container_timestamp(capture)
        ok, frame_bgr = capture.read()
        if not ok:
            return
        keypoints = backend.infer(preprocess(frame_bgr))
        yield frame_line(frame_index, timestamp_ms, keypoints)
        frame_index += 1


def extract(job: ExtractionJob, backend, out: IO[str]) -> int:
    """Run the job, writing one line per frame; returns the frame count."""
    capture = open_capture(job.source)
    frames = 0
    try:
        for line in iter_stream_lines(capture, backend):
            out.write(line + "\n")
            out.flush()
            frames += 1
    finally:
        capture.release()
    return frames
