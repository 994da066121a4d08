"""Rule-engine tests: gating, bed suppression, geometry, debounce."""

from __future__ import annotations

import random

import pytest

from fallwatch import (DetectorConfig, DetectorState, OutOfOrderFrame,
                       PairPolicy, bed_filter, fall_candidate, run_stream,
                       step)

from conftest import (GOLDEN_TRIPLES, make_frame, random_mixed_frame,
                      uniform_pose)

DEFAULT = DetectorConfig()
BED = DetectorConfig(bed_top_y=0.5)


def lying_frame(frame_index=0):
    # spec of the shape: whole upper body at one point, lower at another,
    # same height, far apart horizontally
    return uniform_pose(0.80, 0.10, 0.80, 0.70, confidence=0.9,
                        frame_index=frame_index)


class TestConfigValidation:
    def test_defaults(self):
        assert DEFAULT.confidence_threshold == 0.5
        assert DEFAULT.threshold_y == 0.05
        assert DEFAULT.threshold_x == 0.5
        assert DEFAULT.min_counter == 2
        assert DEFAULT.bed_top_y is None
        assert DEFAULT.pair_policy is PairPolicy.ANY_PAIR

    @pytest.mark.parametrize("kwargs", [
        {"confidence_threshold": 1.5}, {"threshold_y": -0.1},
        {"threshold_x": 2}, {"min_counter": 0}, {"min_counter": 1.5},
        {"bed_top_y": -0.2}, {"pair_policy": "sometimes"},
    ])
    def test_rejects_invalid_fields(self, kwargs):
        with pytest.raises(ValueError):
            DetectorConfig(**kwargs)

    def test_json_round_trip(self):
        config = DetectorConfig(threshold_y=0.03, bed_top_y=0.5,
                                pair_policy=PairPolicy.CENTROID)
        assert DetectorConfig.from_json_dict(config.to_json_dict()) == config

    def test_from_json_rejects_unknown_keys(self):
        with pytest.raises(ValueError, match="unknown config keys"):
            DetectorConfig.from_json_dict({"threshold_z": 0.1})


class TestBedFilter:
    def test_all_upper_body_past_line_suppresses(self):
        frame = uniform_pose(0.6, 0.1, 0.8, 0.7)
        assert bed_filter(frame, BED) is True

    def test_disabled_without_bed_line(self):
        frame = uniform_pose(0.6, 0.1, 0.8, 0.7)
        assert bed_filter(frame, DEFAULT) is False

    def test_standing_pose_not_suppressed(self, standing_frame):
        # nose is high in the image (y 0.224 < 0.5)
        assert bed_filter(standing_frame, BED) is False

    def test_single_keypoint_above_line_blocks_suppression(self):
        triples = [(0.6, 0.5, 0.9)] * 17
        triples[0] = (0.3, 0.5, 0.9)  # nose above the line
        assert bed_filter(make_frame(triples), BED) is False

    def test_noisy_keypoint_below_gate_ignored(self):
        triples = [(0.6, 0.5, 0.9)] * 17
        triples[0] = (0.3, 0.5, 0.2)  # nose above the line but not confident
        assert bed_filter(make_frame(triples), BED) is True

    def test_no_confident_upper_body_means_no_suppression(self):
        triples = [(0.6, 0.5, 0.2)] * 11 + [(0.8, 0.5, 0.9)] * 6
        assert bed_filter(make_frame(triples), BED) is False

    def test_exactly_on_the_line_is_not_past_it(self):
        frame = uniform_pose(0.5, 0.1, 0.8, 0.7)
        assert bed_filter(frame, BED) is False


class TestFallCandidate:
    def test_standing_reference_is_never_a_candidate(self, standing_frame):
        assert fall_candidate(standing_frame, DEFAULT) is False
        # the widest upper/lower horizontal separation stays under the
        # x threshold, which is what keeps an upright pose out
        widest = max(abs(u[1] - l[1])
                     for u in GOLDEN_TRIPLES[:11] for l in GOLDEN_TRIPLES[11:])
        assert widest < 0.5

    def test_horizontal_body_is_a_candidate(self):
        assert fall_candidate(lying_frame(), DEFAULT) is True

    def test_no_confident_keypoints_is_not_a_candidate(self):
        frame = uniform_pose(0.8, 0.1, 0.8, 0.7, confidence=0.0)
        assert fall_candidate(frame, DEFAULT) is False

    def test_empty_lower_body_is_not_a_candidate(self):
        triples = [(0.8, 0.1, 0.9)] * 11 + [(0.8, 0.7, 0.3)] * 6
        assert fall_candidate(make_frame(triples), DEFAULT) is False

    def test_boundary_y_inclusive_x_strict(self):
        # dy exactly at the threshold counts, dx just past it counts
        frame = uniform_pose(0.5, 0.0, 0.55, 0.51, confidence=1.0)
        assert fall_candidate(frame, DEFAULT) is True

    def test_dx_exactly_at_threshold_is_excluded(self):
        frame = uniform_pose(0.5, 0.0, 0.5, 0.5, confidence=1.0)
        assert fall_candidate(frame, DEFAULT) is False

    def test_dx_float_artifact_of_exact_threshold_is_excluded(self):
        # 0.9 - 0.4 evaluates to 0.5000000000000001 in binary floats;
        # the comparison must still read it as "exactly 0.5"
        frame = uniform_pose(0.5, 0.4, 0.5, 0.9, confidence=1.0)
        assert fall_candidate(frame, DEFAULT) is False

    def test_dy_just_past_threshold_is_excluded(self):
        frame = uniform_pose(0.5, 0.0, 0.5501, 0.51, confidence=1.0)
        assert fall_candidate(frame, DEFAULT) is False

    def test_confidence_gate_is_strict(self):
        frame = uniform_pose(0.8, 0.1, 0.8, 0.7, confidence=0.5)
        assert fall_candidate(frame, DEFAULT) is False

    def test_all_pairs_requires_every_pair(self):
        triples = [(0.5, 0.10, 0.9)] * 11 + [(0.52, 0.75, 0.9)] * 6
        triples[0] = (0.5, 0.45, 0.9)  # nose too close to the hips in x
        frame = make_frame(triples)
        assert fall_candidate(frame, DEFAULT) is True
        assert fall_candidate(
            frame, DetectorConfig(pair_policy=PairPolicy.ALL_PAIRS)) is False

    def test_centroid_uses_mean_points(self):
        # upper split across the image: one far pair exists but the
        # upper centroid lands close to the lower centroid
        triples = ([(0.5, 0.95, 0.9)] * 6 + [(0.5, 0.05, 0.9)] * 5
                   + [(0.5, 0.40, 0.9)] * 6)
        frame = make_frame(triples)
        assert fall_candidate(frame, DEFAULT) is True
        assert fall_candidate(
            frame, DetectorConfig(pair_policy=PairPolicy.CENTROID)) is False

    def test_centroid_qualifies_on_plain_horizontal_body(self):
        assert fall_candidate(
            lying_frame(), DetectorConfig(pair_policy=PairPolicy.CENTROID)) is True


class TestStep:
    def test_two_candidate_frames_fire_on_the_second(self):
        state = DetectorState()
        state, first = step(state, lying_frame(0), DEFAULT)
        state, second = step(state, lying_frame(1), DEFAULT)
        assert (first.candidate, first.counter_after, first.alert_fired) == (True, 1, False)
        assert (second.candidate, second.counter_after, second.alert_fired) == (True, 2, True)

    def test_interruption_resets_the_counter(self, standing_frame):
        frames = [lying_frame(0),
                  make_frame(GOLDEN_TRIPLES, frame_index=1),
                  lying_frame(2)]
        verdicts = run_stream(frames, DEFAULT)
        assert [v.counter_after for v in verdicts] == [1, 0, 1]
        assert not any(v.alert_fired for v in verdicts)

    def test_alert_fires_once_per_run(self):
        frames = [lying_frame(i) for i in range(4)]
        verdicts = run_stream(frames, DEFAULT)
        assert [v.counter_after for v in verdicts] == [1, 2, 3, 4]
        assert [v.alert_fired for v in verdicts] == [False, True, False, False]

    def test_new_run_can_fire_again(self, standing_frame):
        frames = [lying_frame(0), lying_frame(1),
                  make_frame(GOLDEN_TRIPLES, frame_index=2),
                  lying_frame(3), lying_frame(4)]
        verdicts = run_stream(frames, DEFAULT)
        assert [v.alert_fired for v in verdicts] == [False, True, False, False, True]

    def test_min_counter_one_fires_immediately(self):
        config = DetectorConfig(min_counter=1)
        verdicts = run_stream([lying_frame(0), lying_frame(1)], config)
        assert [v.alert_fired for v in verdicts] == [True, False]

    def test_bed_suppression_dominates(self):
        frame = uniform_pose(0.62, 0.1, 0.64, 0.75)
        state, verdict = step(DetectorState(counter=1), frame, BED)
        assert verdict.bed_filtered is True
        assert verdict.candidate is False
        assert verdict.counter_after == 0
        assert state.alert_latched is False

    def test_out_of_order_frame_rejected(self):
        state, _ = step(DetectorState(), lying_frame(5), DEFAULT)
        with pytest.raises(OutOfOrderFrame):
            step(state, lying_frame(5), DEFAULT)
        with pytest.raises(OutOfOrderFrame):
            step(state, lying_frame(4), DEFAULT)

    def test_step_is_pure(self):
        state = DetectorState(counter=1)
        frame = lying_frame(7)
        assert step(state, frame, DEFAULT) == step(state, frame, DEFAULT)
        assert state.counter == 1


class TestRunStream:
    def test_empty_stream_gives_empty_verdicts(self):
        assert run_stream([], DEFAULT) == []

    def test_single_frame_cannot_alert_at_default_debounce(self):
        verdicts = run_stream([lying_frame(0)], DEFAULT)
        assert len(verdicts) == 1
        assert verdicts[0].counter_after == 1
        assert verdicts[0].alert_fired is False

    def test_streaming_equals_batch(self):
        rnd = random.Random(31337)
        frames = [random_mixed_frame(rnd, frame_index=i) for i in range(200)]
        batch = run_stream(frames, DEFAULT)
        state = DetectorState()
        streamed = []
        for frame in frames:
            state, verdict = step(state, frame, DEFAULT)
            streamed.append(verdict)
        assert streamed == batch

    def test_repeated_runs_are_identical(self):
        rnd = random.Random(2025)
        frames = [random_mixed_frame(rnd, frame_index=i) for i in range(100)]
        assert run_stream(frames, BED) == run_stream(frames, BED)

    def test_verdict_json_uses_wire_keys(self):
        verdict = run_stream([lying_frame(3)], DEFAULT)[0]
        assert verdict.to_json_dict() == {
            "frame_index": 3, "bed_filtered": False, "candidate": True,
            "counter": 1, "alert": False,
        }


class TestRuleProperties:
    def test_counter_moves_by_one_or_resets(self):
        rnd = random.Random(4242)
        for _ in range(100):
            frames = [random_mixed_frame(rnd, frame_index=i)
                      for i in range(rnd.randrange(1, 40))]
            config = rnd.choice([DEFAULT, BED, DetectorConfig(min_counter=3)])
            previous = 0
            for verdict in run_stream(frames, config):
                assert verdict.counter_after in (0, previous + 1)
                if verdict.bed_filtered:
                    assert verdict.counter_after == 0
                previous = verdict.counter_after

    def test_horizontal_mirror_invariance(self):
        rnd = random.Random(555)
        policies = [DetectorConfig(pair_policy=policy) for policy in PairPolicy]
        for _ in range(200):
            triples = [(round(rnd.random(), 6), round(rnd.random(), 6),
                        round(rnd.random(), 6)) for _ in range(17)]
            frame = make_frame(triples)
            mirrored = make_frame([(y, 1.0 - x, c) for y, x, c in triples])
            for config in policies:
                assert fall_candidate(frame, config) == fall_candidate(mirrored, config)

    def test_loosening_thresholds_never_unmakes_a_candidate(self):
        rnd = random.Random(777)
        looser = [DetectorConfig(threshold_y=0.08),
                  DetectorConfig(threshold_x=0.4),
                  DetectorConfig(threshold_y=0.08, threshold_x=0.4)]
        for _ in range(300):
            frame = random_mixed_frame(rnd)
            if fall_candidate(frame, DEFAULT):
                for config in looser:
                    assert fall_candidate(frame, config) is True

    def test_adding_a_confident_keypoint_never_unmakes_a_candidate(self):
        rnd = random.Random(888)
        for _ in range(300):
            triples = [(rnd.random(), rnd.random(),
                        rnd.choice([0.1, 0.3, 0.8, 0.9])) for _ in range(17)]
            frame = make_frame(triples)
            before = fall_candidate(frame, DEFAULT)
            gated_out = [i for i, (_, _, c) in enumerate(triples) if c <= 0.5]
            if not gated_out:
                continue
            target = rnd.choice(gated_out)
            raised = list(triples)
            raised[target] = (triples[target][0], triples[target][1], 0.95)
            after = fall_candidate(make_frame(raised), DEFAULT)
            if before:
                assert after is True
