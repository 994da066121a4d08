"""Shared fixtures: the golden reference frame and pose builders."""

from __future__ import annotations

import json
import random

import pytest

from fallwatch import Keypoint, KeypointIndex, PoseFrame

# Frozen copy of the reference standing pose, (y, x, confidence) per
# index 0..16. Kept as a test-side literal, independent of the
# generator's own constant.
GOLDEN_TRIPLES = (
    (0.22416662, 0.579579, 0.7201656),
    (0.20926172, 0.5974146, 0.8043867),
    (0.20485064, 0.5642889, 0.5905826),
    (0.22323, 0.6126661, 0.7964257),
    (0.21771489, 0.5370738, 0.7529471),
    (0.3235461, 0.6375601, 0.8950565),
    (0.2964768, 0.48282918, 0.65825576),
    (0.43468294, 0.63684213, 0.7667525),
    (0.42770475, 0.4406372, 0.8829603),
    (0.54110587, 0.6462866, 0.6282949),
    (0.5392799, 0.42464092, 0.8215329),
    (0.54277164, 0.57565194, 0.85804665),
    (0.53679305, 0.48321638, 0.88962007),
    (0.69595444, 0.609515, 0.8796475),
    (0.7019378, 0.46842176, 0.6786141),
    (0.85588527, 0.56420994, 0.7951814),
    (0.8588409, 0.47616798, 0.82729894),
)


def make_frame(triples, frame_index=0, timestamp_ms=None) -> PoseFrame:
    keypoints = tuple(Keypoint(index=KeypointIndex(i), y=y, x=x, confidence=c)
                      for i, (y, x, c) in enumerate(triples))
    return PoseFrame(frame_index=frame_index, keypoints=keypoints,
                     timestamp_ms=timestamp_ms)


def golden_line(frame_index=0, timestamp_ms=None) -> str:
    payload = {
        "frame_index": frame_index,
        "timestamp_ms": timestamp_ms,
        "keypoints": [list(triple) for triple in GOLDEN_TRIPLES],
    }
    return json.dumps(payload, separators=(",", ":"))


def uniform_pose(upper_y, upper_x, lower_y, lower_x, confidence=0.9,
                 frame_index=0) -> PoseFrame:
    """All upper-body keypoints at one point, all lower-body at another."""
    triples = [(upper_y, upper_x, confidence)] * 11 + [(lower_y, lower_x, confidence)] * 6
    return make_frame(triples, frame_index=frame_index)


def random_valid_frame(rnd: random.Random, frame_index=0) -> PoseFrame:
    triples = [(rnd.random(), rnd.random(), rnd.random()) for _ in range(17)]
    timestamp = rnd.choice([None, rnd.randrange(10 ** 9)])
    return make_frame(triples, frame_index=frame_index, timestamp_ms=timestamp)


def random_mixed_frame(rnd: random.Random, frame_index=0) -> PoseFrame:
    """Frames spanning the decision space: lying, standing, on-bed,
    low-confidence blackouts and unstructured noise."""
    shape = rnd.randrange(5)
    jitter = lambda v: min(1.0, max(0.0, v + rnd.uniform(-0.03, 0.03)))
    if shape == 0:  # horizontal body mid-frame
        frame = uniform_pose(jitter(0.45), jitter(0.12), jitter(0.47), jitter(0.75))
    elif shape == 1:  # horizontal body low in the image
        frame = uniform_pose(jitter(0.62), jitter(0.8), jitter(0.64), jitter(0.15))
    elif shape == 2:  # upright body
        frame = uniform_pose(jitter(0.25), jitter(0.5), jitter(0.75), jitter(0.52))
    elif shape == 3:  # subject lost: nothing passes the confidence gate
        frame = uniform_pose(rnd.random(), rnd.random(), rnd.random(), rnd.random(),
                             confidence=0.2)
    else:  # unstructured
        frame = random_valid_frame(rnd)
    return make_frame([(kp.y, kp.x, kp.confidence) for kp in frame.keypoints],
                      frame_index=frame_index)


@pytest.fixture
def standing_frame() -> PoseFrame:
    return make_frame(GOLDEN_TRIPLES)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Print one pass/fail line per acceptance criterion."""
    entries = []
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            if "test_acceptance" in report.nodeid and report.when == "call":
                name = report.nodeid.split("::")[-1]
                entries.append((name, "PASS" if outcome == "passed" else "FAIL"))
    if entries:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, status in entries:
            terminalreporter.write_line(f"{status}  {name}")
