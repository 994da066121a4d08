"""Per-video evaluation against ground truth and the derived metrics.

A video is predicted "fall" when its stream produces at least one alert
anywhere; whole sequences carry one label each, so any-alert is the only
aggregation that counts a short fall clip as a single true positive.

Manifest file (UTF-8 JSON):

    {"videos": [{"id": "...", "label": "fall"|"adl", "stream": "<path>"}, ...]}

Stream paths may be relative; they resolve against the manifest's own
directory so a dataset folder can be moved as a unit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Sequence

from .detector import DetectorConfig, run_stream
from .keypoints import StreamFormatError, read_frames

METRIC_NAMES = ("sensitivity", "specificity", "precision",
                "false_positive_rate", "false_negative_rate",
                "accuracy", "f1")


class Label(Enum):
    FALL = "fall"
    ADL = "adl"


class StreamError(Exception):
    """A video's keypoint stream could not be read or parsed."""

    def __init__(self, video_id: str, reason: str) -> None:
        super().__init__(f"video {video_id!r}: {reason}")
        self.video_id = video_id


@dataclass(frozen=True, slots=True)
class VideoRecord:
    """One manifest entry: a labeled keypoint stream on disk."""

    id: str
    label: Label
    stream_path: Path


@dataclass(frozen=True, slots=True)
class ConfusionMatrix:
    """Video-level counts; fall is the positive class."""

    tp: int = 0
    tn: int = 0
    fp: int = 0
    fn: int = 0

    def __post_init__(self) -> None:
        for name in ("tp", "tn", "fp", "fn"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 0:
                raise ValueError(f"{name} must be a nonnegative integer, got {value!r}")

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn

    def to_json_dict(self) -> dict:
        return {"tp": self.tp, "tn": self.tn, "fp": self.fp, "fn": self.fn}


@dataclass(frozen=True, slots=True)
class MetricsReport:
    """The seven derived ratios; None marks an undefined metric.

    A metric whose denominator is zero is reported as an explicit null,
    never silently as 0 or 1 -- substituted values corrupt sweeps.
    """

    sensitivity: float | None
    specificity: float | None
    precision: float | None
    false_positive_rate: float | None
    false_negative_rate: float | None
    accuracy: float | None
    f1: float | None

    @property
    def undefined(self) -> tuple[str, ...]:
        return tuple(name for name in METRIC_NAMES if getattr(self, name) is None)

    def rounded(self, digits: int = 4) -> dict[str, float | None]:
        return {name: None if getattr(self, name) is None
                else round(getattr(self, name), digits)
                for name in METRIC_NAMES}

    def to_json_dict(self) -> dict:
        return {name: getattr(self, name) for name in METRIC_NAMES}


def metrics_from_counts(cm: ConfusionMatrix) -> MetricsReport:
    """Compute all seven metrics from raw counts.

    sensitivity = TP/(TP+FN)      specificity = TN/(FP+TN)
    precision   = TP/(TP+FP)      FPR         = FP/(FP+TN)
    FNR         = FN/(FN+TP)      accuracy    = (TP+TN)/total
    F1          = 2TP/(2TP+FP+FN)
    """
    def ratio(numerator: int, denominator: int) -> float | None:
        return numerator / denominator if denominator else None

    return MetricsReport(
        sensitivity=ratio(cm.tp, cm.tp + cm.fn),
        specificity=ratio(cm.tn, cm.fp + cm.tn),
        precision=ratio(cm.tp, cm.tp + cm.fp),
        false_positive_rate=ratio(cm.fp, cm.fp + cm.tn),
        false_negative_rate=ratio(cm.fn, cm.fn + cm.tp),
        accuracy=ratio(cm.tp + cm.tn, cm.total),
        f1=ratio(2 * cm.tp, 2 * cm.tp + cm.fp + cm.fn),
    )


def classify_video(record: VideoRecord, config: DetectorConfig) -> Label:
    """Fall iff the stream fires at least one alert; ADL otherwise."""
    try:
        with open(record.stream_path, "r", encoding="utf-8") as stream:
            verdicts = run_stream(read_frames(stream), config)
    except OSError as exc:
        raise StreamError(record.id, f"cannot read {record.stream_path}: {exc}") from exc
    except StreamFormatError as exc:
        raise StreamError(record.id, str(exc)) from exc
    return Label.FALL if any(v.alert_fired for v in verdicts) else Label.ADL


def evaluate(manifest: Sequence[VideoRecord],
             config: DetectorConfig) -> ConfusionMatrix:
    """Classify every video and accumulate video-level counts."""
    tp = tn = fp = fn = 0
    for record in manifest:
        predicted = classify_video(record, config)
        if record.label is Label.FALL:
            if predicted is Label.FALL:
                tp += 1
            else:
                fn += 1
        else:
            if predicted is Label.FALL:
                fp += 1
            else:
                tn += 1
    return ConfusionMatrix(tp=tp, tn=tn, fp=fp, fn=fn)


def load_manifest(path: str | Path) -> list[VideoRecord]:
    """Read and validate a manifest file; see the module docstring."""
    path = Path(path)
    payload = json.loads(path.read_text(encoding="utf-8"))
    if not isinstance(payload, dict) or not isinstance(payload.get("videos"), list):
        raise ValueError(f"{path}: manifest must be an object with a 'videos' array")
    records = []
    seen_ids = set()
    for position, entry in enumerate(payload["videos"]):
        if not isinstance(entry, dict):
            raise ValueError(f"{path}: videos[{position}] must be an object")
        try:
            video_id = entry["id"]
            label = entry["label"]
            stream = entry["stream"]
        except KeyError as exc:
            raise ValueError(f"{path}: videos[{position}] missing key {exc}") from None
        if not isinstance(video_id, str) or not video_id:
            raise ValueError(f"{path}: videos[{position}].id must be a nonempty string")
        if video_id in seen_ids:
            raise ValueError(f"{path}: duplicate video id {video_id!r}")
        seen_ids.add(video_id)
        if label not in (Label.FALL.value, Label.ADL.value):
            raise ValueError(f"{path}: videos[{position}].label must be "
                             f"'fall' or 'adl', got {label!r}")
        if not isinstance(stream, str) or not stream:
            raise ValueError(f"{path}: videos[{position}].stream must be a path")
        stream_path = Path(stream)
        if not stream_path.is_absolute():
            stream_path = path.parent / stream_path
        records.append(VideoRecord(id=video_id, label=Label(label),
                                   stream_path=stream_path))
    return records


def build_report(config: DetectorConfig, counts: ConfusionMatrix) -> dict:
    """Assemble the JSON report: counts, metrics (with nulls), config."""
    return {
        "config": config.to_json_dict(),
        "counts": counts.to_json_dict(),
        "metrics": metrics_from_counts(counts).to_json_dict(),
    }
