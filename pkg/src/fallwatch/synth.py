"""Deterministic generator of labeled synthetic keypoint streams.

Each scenario kind is a piecewise-linear keyframe template (upright,
horizontal, or an interpolation between them) plus seeded per-coordinate
jitter. The generator guarantees the properties the detector tests rely
on at the default thresholds:

* fall kinds end with at least two frames whose upper and lower body
  keypoints are all within threshold_y vertically and all beyond
  threshold_x horizontally (candidate frames under every pair policy);
* standing and walking never produce a candidate frame;
* lying-on-bed keeps every upper-body keypoint strictly past the 0.5
  bed line, so a configured bed filter suppresses it;
* noisy-glitch alternates candidate and non-candidate frames, which the
  debounce counter must never turn into an alert.

Randomness comes from a pinned 64-bit linear congruential generator so
fixtures regenerate bit-exactly on any platform.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .evaluation import Label
from .keypoints import Keypoint, KeypointIndex, PoseFrame

_MS_PER_FRAME_NUM = 1000
_FPS = 30


class Lcg64:
    """64-bit linear congruential generator, explicitly pinned.

    Recurrence: state' = (6364136223846793005 * state
                          + 1442695040888963407) mod 2**64,
    seeded with seed mod 2**64. uniform() maps the top 53 bits of each
    state onto [0, 1). Do not swap in a library RNG: recorded fixtures
    depend on this exact sequence.
    """

    _MULTIPLIER = 6364136223846793005
    _INCREMENT = 1442695040888963407
    _MASK = (1 << 64) - 1

    def __init__(self, seed: int) -> None:
        self._state = seed & self._MASK

    def next_uint64(self) -> int:
        self._state = (self._MULTIPLIER * self._state + self._INCREMENT) & self._MASK
        return self._state

    def uniform(self) -> float:
        return (self.next_uint64() >> 11) * 2.0 ** -53

    def uniform_signed(self, amplitude: float) -> float:
        return amplitude * (2.0 * self.uniform() - 1.0)


class ScenarioKind(Enum):
    STANDING = "standing"
    WALKING = "walking"
    LYING_FLOOR = "lying-floor"
    LYING_BED = "lying-bed"
    FALL_FORWARD = "fall-forward"
    FALL_BACKWARD = "fall-backward"
    FALL_SIDE = "fall-side"
    NOISY_GLITCH = "noisy-glitch"


# A motionless horizontal body on the floor is exactly what the engine
# must flag, so lying-floor counts as a fall; lying-bed is the activity
# the bed filter exists to excuse.
_FALL_KINDS = frozenset({
    ScenarioKind.FALL_FORWARD,
    ScenarioKind.FALL_BACKWARD,
    ScenarioKind.FALL_SIDE,
    ScenarioKind.LYING_FLOOR,
})


def intended_label(kind: ScenarioKind) -> Label:
    """Ground-truth label a generated stream should evaluate to."""
    return Label.FALL if kind in _FALL_KINDS else Label.ADL


@dataclass(frozen=True, slots=True)
class Scenario:
    """A reproducible synthetic stream recipe."""

    kind: ScenarioKind
    frames: int
    seed: int
    noise_amplitude: float = 0.01

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", ScenarioKind(self.kind))
        if (isinstance(self.frames, bool) or not isinstance(self.frames, int)
                or self.frames < 1):
            raise ValueError(f"frames must be a positive integer, got {self.frames!r}")
        if isinstance(self.seed, bool) or not isinstance(self.seed, int):
            raise ValueError(f"seed must be an integer, got {self.seed!r}")
        amp = self.noise_amplitude
        if isinstance(amp, bool) or not isinstance(amp, (int, float)):
            raise ValueError(f"noise_amplitude must be a number, got {amp!r}")
        amp = float(amp)
        if not 0.0 <= amp <= 0.05:
            raise ValueError(
                f"noise_amplitude must be within [0, 0.05], got {amp!r}")
        object.__setattr__(self, "noise_amplitude", amp)


# Upright reference pose: keypoints captured by a single-person pose
# model on a standing subject, (y, x, confidence) per index 0..16.
# Reused as the per-keypoint confidence profile of every template.
REFERENCE_STANDING_POSE: tuple[tuple[float, float, float], ...] = (
    (0.22416662, 0.579579, 0.7201656),     # nose
    (0.20926172, 0.5974146, 0.8043867),    # left eye
    (0.20485064, 0.5642889, 0.5905826),    # right eye
    (0.22323, 0.6126661, 0.7964257),       # left ear
    (0.21771489, 0.5370738, 0.7529471),    # right ear
    (0.3235461, 0.6375601, 0.8950565),     # left shoulder
    (0.2964768, 0.48282918, 0.65825576),   # right shoulder
    (0.43468294, 0.63684213, 0.7667525),   # left elbow
    (0.42770475, 0.4406372, 0.8829603),    # right elbow
    (0.54110587, 0.6462866, 0.6282949),    # left wrist
    (0.5392799, 0.42464092, 0.8215329),    # right wrist
    (0.54277164, 0.57565194, 0.85804665),  # left hip
    (0.53679305, 0.48321638, 0.88962007),  # right hip
    (0.69595444, 0.609515, 0.8796475),     # left knee
    (0.7019378, 0.46842176, 0.6786141),    # right knee
    (0.85588527, 0.56420994, 0.7951814),   # left ankle
    (0.8588409, 0.47616798, 0.82729894),   # right ankle
)

_CONFIDENCES = tuple(conf for _, _, conf in REFERENCE_STANDING_POSE)
_UPRIGHT = tuple((y, x) for y, x, _ in REFERENCE_STANDING_POSE)

# Horizontal body template in body-relative terms: (lateral offset from
# the body axis, distance along the head-to-feet axis). The upper-body
# cluster ends at 0.17 along the axis and the lower-body cluster starts
# at 0.73, so every upper/lower pair is at least 0.56 apart in x and at
# most 0.02 apart in y before jitter.
_LYING_LAYOUT: tuple[tuple[float, float], ...] = (
    (0.000, 0.060),   # nose
    (-0.008, 0.075),  # left eye
    (0.008, 0.075),   # right eye
    (-0.010, 0.090),  # left ear
    (0.010, 0.090),   # right ear
    (-0.010, 0.120),  # left shoulder
    (0.010, 0.120),   # right shoulder
    (-0.010, 0.150),  # left elbow
    (0.010, 0.150),   # right elbow
    (-0.008, 0.170),  # left wrist
    (0.008, 0.170),   # right wrist
    (-0.008, 0.730),  # left hip
    (0.008, 0.730),   # right hip
    (-0.008, 0.830),  # left knee
    (0.008, 0.830),   # right knee
    (-0.006, 0.930),  # left ankle
    (0.006, 0.930),   # right ankle
)

# Jitter caps on frames whose candidate geometry is guaranteed: with
# per-keypoint lateral spread 0.02 the worst-case |dy| stays at
# 0.02 + 2 * 0.008 = 0.036 <= threshold_y, and the worst-case upper/lower
# x gap stays at 0.56 - 2 * 0.02 = 0.52 > threshold_x.
_GUARD_AMPLITUDE_Y = 0.008
_GUARD_AMPLITUDE_X = 0.02

_BED_LINE = 0.5
_BED_BODY_Y = 0.62
_FLOOR_BODY_Y = 0.46


def _lying_pose(body_y: float, mirrored: bool = False) -> tuple[tuple[float, float], ...]:
    coords = []
    for lateral, along in _LYING_LAYOUT:
        x = 1.0 - along if mirrored else along
        coords.append((body_y + lateral, x))
    return tuple(coords)


_LYING_FLOOR = _lying_pose(_FLOOR_BODY_Y)
_LYING_BED = _lying_pose(_BED_BODY_Y)
_FALL_END = {
    ScenarioKind.FALL_SIDE: _lying_pose(0.46),
    ScenarioKind.FALL_FORWARD: _lying_pose(0.48, mirrored=True),
    ScenarioKind.FALL_BACKWARD: _lying_pose(0.44, mirrored=True),
}


def _drop(start: tuple[tuple[float, float], ...],
          end: tuple[tuple[float, float], ...],
          t: float) -> tuple[tuple[float, float], ...]:
    """First fall segment: the body sinks toward its final height while
    keeping the upright horizontal layout; the sprawl to the lying
    layout happens between the last blend frame and the first lying
    frame. A straight upright-to-lying interpolation would sweep some
    upper/lower pair right across the x threshold mid-blend, where
    jitter could flip single frames; with the upright x layout the
    horizontal test can never pass, so blend frames are non-candidates
    at any allowed noise amplitude.
    """
    return tuple(((1.0 - t) * sy + t * ey, sx)
                 for (sy, sx), (ey, _) in zip(start, end))


def _triangle(phase: float) -> float:
    """Piecewise-linear stand-in for a sine wave; exact float arithmetic."""
    p = phase - int(phase)
    if p < 0.25:
        return 4.0 * p
    if p < 0.75:
        return 2.0 - 4.0 * p
    return 4.0 * p - 4.0


def _walking_pose(i: int) -> tuple[tuple[float, float], ...]:
    shift = 0.15 * _triangle(i / 16.0)
    swing = 0.02 * _triangle(i / 8.0)
    coords = []
    for index, (y, x) in enumerate(_UPRIGHT):
        dx = shift
        if index == KeypointIndex.LEFT_ANKLE:
            dx += swing
        elif index == KeypointIndex.RIGHT_ANKLE:
            dx -= swing
        elif index == KeypointIndex.LEFT_WRIST:
            dx -= 0.75 * swing
        elif index == KeypointIndex.RIGHT_WRIST:
            dx += 0.75 * swing
        coords.append((y, x + dx))
    return tuple(coords)


def _template_frames(scenario: Scenario) -> list[tuple[tuple[tuple[float, float], ...], bool]]:
    """Per-frame (coords, guaranteed-candidate) pairs, before jitter."""
    kind = scenario.kind
    n = scenario.frames
    if kind is ScenarioKind.STANDING:
        return [(_UPRIGHT, False)] * n
    if kind is ScenarioKind.WALKING:
        return [(_walking_pose(i), False) for i in range(n)]
    if kind is ScenarioKind.LYING_FLOOR:
        return [(_LYING_FLOOR, True)] * n
    if kind is ScenarioKind.LYING_BED:
        return [(_LYING_BED, True)] * n
    if kind is ScenarioKind.NOISY_GLITCH:
        return [(_LYING_FLOOR, True) if i % 2 == 0 else (_UPRIGHT, False)
                for i in range(n)]

    # Fall kinds: upright hold, a short blend, then a horizontal hold
    # long enough to trip the default two-frame debounce.
    end = _FALL_END[kind]
    n_lying = min(n, max(2, round(0.4 * n)))
    n_blend = min(2, n - n_lying)
    n_upright = n - n_lying - n_blend
    frames: list[tuple[tuple[tuple[float, float], ...], bool]] = []
    frames.extend([(_UPRIGHT, False)] * n_upright)
    for i in range(1, n_blend + 1):
        frames.append((_drop(_UPRIGHT, end, i / (n_blend + 1)), False))
    frames.extend([(end, True)] * n_lying)
    return frames


def _clamp(value: float) -> float:
    return 0.0 if value < 0.0 else 1.0 if value > 1.0 else value


def generate(scenario: Scenario) -> list[PoseFrame]:
    """Produce the scenario's frames; bitwise-reproducible per seed.

    Jitter is drawn per keypoint in index order, y before x, one frame
    at a time, then clamped to [0, 1]. Frames whose candidate geometry
    is guaranteed use the capped amplitudes so jitter can never push
    them back across a threshold.
    """
    rng = Lcg64(scenario.seed)
    amp = scenario.noise_amplitude
    frames: list[PoseFrame] = []
    for i, (coords, guarded) in enumerate(_template_frames(scenario)):
        amp_y = min(amp, _GUARD_AMPLITUDE_Y) if guarded else amp
        amp_x = min(amp, _GUARD_AMPLITUDE_X) if guarded else amp
        keypoints = []
        for index, (y, x) in enumerate(coords):
            jy = rng.uniform_signed(amp_y)
            jx = rng.uniform_signed(amp_x)
            keypoints.append(Keypoint(index=KeypointIndex(index),
                                      y=_clamp(y + jy), x=_clamp(x + jx),
                                      confidence=_CONFIDENCES[index]))
        frames.append(PoseFrame(frame_index=i, keypoints=tuple(keypoints),
                                timestamp_ms=i * _MS_PER_FRAME_NUM // _FPS))
    return frames
