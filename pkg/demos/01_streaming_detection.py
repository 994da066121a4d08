"""
Streaming fall detection, frame by frame
========================================

A detector is a pure state machine: feed it one pose frame at a time
and it hands back a fresh state plus a verdict for that frame. This
demo generates a short sideways fall and walks through the stream the
same way a live pipeline would.
"""

from fallwatch import (DetectorConfig, DetectorState, Scenario, ScenarioKind,
                       generate, step)

# Eight frames: the subject stands, drops, and ends up horizontal.
frames = generate(Scenario(kind=ScenarioKind.FALL_SIDE, frames=8, seed=7))

# Default thresholds: confidence gate 0.5, dy <= 0.05, |dx| > 0.5,
# alert after 2 consecutive candidate frames.
config = DetectorConfig()

state = DetectorState()
print(f"{'frame':>5} {'candidate':>9} {'counter':>7} {'alert':>5}")
for frame in frames:
    state, verdict = step(state, frame, config)
    print(f"{verdict.frame_index:>5} {str(verdict.candidate):>9} "
          f"{verdict.counter_after:>7} {str(verdict.alert_fired):>5}")

# The counter only starts moving once the body is horizontal, and the
# alert fires exactly when it reaches 2 -- then stays quiet for the
# rest of the run, so one fall means one alert.
