"""Brute-force reference detector for equivalence testing.

This module re-derives every per-frame verdict from scratch: it walks
all 11 x 6 upper/lower index pairs with no early exit and shares no
decision code with the detector module (only the data types). Any
divergence between oracle_verdicts and run_stream is a bug in one of
the two.
"""

from __future__ import annotations

from typing import Iterable

from .detector import DetectorConfig, FrameVerdict, OutOfOrderFrame, PairPolicy
from .keypoints import PoseFrame

# Deliberately a separate literal from the detector's tolerance so the
# two modules stay textually independent; the value must match.
_TOLERANCE = 1e-12


def _frame_is_candidate(frame: PoseFrame, config: DetectorConfig) -> bool:
    gate = config.confidence_threshold
    upper = [frame.keypoints[i] for i in range(0, 11)
             if frame.keypoints[i].confidence > gate]
    lower = [frame.keypoints[i] for i in range(11, 17)
             if frame.keypoints[i].confidence > gate]
    if len(upper) == 0 or len(lower) == 0:
        return False

    if config.pair_policy is PairPolicy.CENTROID:
        mean_upper_y = sum(kp.y for kp in upper) / len(upper)
        mean_upper_x = sum(kp.x for kp in upper) / len(upper)
        mean_lower_y = sum(kp.y for kp in lower) / len(lower)
        mean_lower_x = sum(kp.x for kp in lower) / len(lower)
        close_y = abs(mean_upper_y - mean_lower_y) <= config.threshold_y + _TOLERANCE
        far_x = abs(mean_upper_x - mean_lower_x) > config.threshold_x + _TOLERANCE
        return close_y and far_x

    # Exhaustive pair enumeration; every outcome is recorded before the
    # policy is applied, so there is no early exit to mask an ordering bug.
    outcomes = []
    for up in upper:
        for low in lower:
            close_y = abs(up.y - low.y) <= config.threshold_y + _TOLERANCE
            far_x = abs(up.x - low.x) > config.threshold_x + _TOLERANCE
            outcomes.append(close_y and far_x)
    if config.pair_policy is PairPolicy.ANY_PAIR:
        return True in outcomes
    return False not in outcomes  # ALL_PAIRS; outcomes is nonempty here


def _frame_is_bed_suppressed(frame: PoseFrame, config: DetectorConfig) -> bool:
    if config.bed_top_y is None:
        return False
    gated_upper_y = [frame.keypoints[i].y for i in range(0, 11)
                     if frame.keypoints[i].confidence > config.confidence_threshold]
    if len(gated_upper_y) == 0:
        return False
    below_line = [y > config.bed_top_y for y in gated_upper_y]
    return False not in below_line


def oracle_verdicts(frames: Iterable[PoseFrame],
                    config: DetectorConfig) -> list[FrameVerdict]:
    """Replay the full decision procedure by exhaustive enumeration."""
    verdicts: list[FrameVerdict] = []
    counter = 0
    latched = False
    previous_index: int | None = None
    for frame in frames:
        if previous_index is not None and frame.frame_index <= previous_index:
            raise OutOfOrderFrame(
                f"frame_index {frame.frame_index} after {previous_index}; "
                "frames must arrive in strictly increasing order")
        previous_index = frame.frame_index

        suppressed = _frame_is_bed_suppressed(frame, config)
        if suppressed:
            candidate = False
        else:
            candidate = _frame_is_candidate(frame, config)

        if candidate:
            counter = counter + 1
            if counter == config.min_counter and not latched:
                fired = True
                latched = True
            else:
                fired = False
        else:
            counter = 0
            latched = False
            fired = False

        verdicts.append(FrameVerdict(frame_index=frame.frame_index,
                                     bed_filtered=suppressed,
                                     candidate=candidate,
                                     counter_after=counter,
                                     alert_fired=fired))
    return verdicts
