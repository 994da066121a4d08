"""Rule-based real-time fall detection over normalized pose keypoint streams.

The package is organized around a small pipeline:

* :mod:`fallwatch.keypoints` -- domain types and the JSONL stream codec;
* :mod:`fallwatch.detector` -- the per-frame rules and debounce state machine;
* :mod:`fallwatch.evaluation` -- video-level scoring and metrics;
* :mod:`fallwatch.synth` -- deterministic labeled scenario generator;
* :mod:`fallwatch.oracle` -- brute-force reference detector for cross-checks;
* :mod:`fallwatch.alerts` / :mod:`fallwatch.cli` -- delivery and the
  ``fallwatch`` command.
"""

from .alerts import AlertEvent, config_digest
from .detector import (DetectorConfig, DetectorState, FrameVerdict,
                       OutOfOrderFrame, PairPolicy, bed_filter, fall_candidate,
                       iter_verdicts, run_stream, step)
from .evaluation import (ConfusionMatrix, Label, MetricsReport, StreamError,
                         VideoRecord, build_report, classify_video, evaluate,
                         load_manifest, metrics_from_counts)
from .keypoints import (LOWER_BODY, UPPER_BODY, DecreasingIndex, Keypoint,
                        KeypointIndex, MalformedLine, PoseFrame, SchemaError,
                        StreamFormatError, confident_keypoints, parse_frame,
                        read_frames, serialize_frame)
from .oracle import oracle_verdicts
from .synth import (REFERENCE_STANDING_POSE, Lcg64, Scenario, ScenarioKind,
                    generate, intended_label)

__version__ = "0.1.0"

__all__ = [
    "AlertEvent",
    "ConfusionMatrix",
    "DecreasingIndex",
    "DetectorConfig",
    "DetectorState",
    "FrameVerdict",
    "Keypoint",
    "KeypointIndex",
    "Label",
    "Lcg64",
    "LOWER_BODY",
    "MalformedLine",
    "MetricsReport",
    "OutOfOrderFrame",
    "PairPolicy",
    "PoseFrame",
    "REFERENCE_STANDING_POSE",
    "Scenario",
    "ScenarioKind",
    "SchemaError",
    "StreamError",
    "StreamFormatError",
    "UPPER_BODY",
    "VideoRecord",
    "bed_filter",
    "build_report",
    "classify_video",
    "config_digest",
    "confident_keypoints",
    "evaluate",
    "fall_candidate",
    "generate",
    "intended_label",
    "iter_verdicts",
    "load_manifest",
    "metrics_from_counts",
    "oracle_verdicts",
    "parse_frame",
    "read_frames",
    "run_stream",
    "serialize_frame",
    "step",
]
