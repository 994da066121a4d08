"""
Sweeping the geometric thresholds
=================================

The two geometric thresholds trade sensitivity against false alarms:
a looser x threshold turns more frames into candidates, a tighter y
threshold demands a flatter body. This demo scores a small synthetic
dataset over a grid and prints one row per operating point.
"""

import json
import tempfile
from pathlib import Path

from fallwatch import (DetectorConfig, Scenario, ScenarioKind, evaluate,
                       generate, intended_label, load_manifest,
                       metrics_from_counts, serialize_frame)

# A compact dataset: four falls, four daily activities.
KINDS = (ScenarioKind.FALL_SIDE, ScenarioKind.FALL_FORWARD,
         ScenarioKind.LYING_FLOOR, ScenarioKind.FALL_BACKWARD,
         ScenarioKind.STANDING, ScenarioKind.WALKING,
         ScenarioKind.LYING_BED, ScenarioKind.NOISY_GLITCH)

workdir = Path(tempfile.mkdtemp(prefix="fallwatch-sweep-"))
videos = []
for i, kind in enumerate(KINDS):
    name = f"{kind.value}.jsonl"
    frames = generate(Scenario(kind=kind, frames=12, seed=40 + i))
    (workdir / name).write_text("".join(serialize_frame(f) + "\n" for f in frames))
    videos.append({"id": kind.value, "label": intended_label(kind).value,
                   "stream": name})
manifest_path = workdir / "manifest.json"
manifest_path.write_text(json.dumps({"videos": videos}))
records = load_manifest(manifest_path)

# Push the thresholds well past the defaults: with dy pinned to zero a
# jittery horizontal body stops qualifying, and once the dx bar exceeds
# the widest head-to-ankle separation no fall can ever qualify.
print(f"{'thr_y':>6} {'thr_x':>6} {'sens':>6} {'spec':>6} {'acc':>6}")
for threshold_y in (0.0, 0.05, 0.1):
    for threshold_x in (0.5, 0.7, 0.9):
        config = DetectorConfig(threshold_y=threshold_y,
                                threshold_x=threshold_x, bed_top_y=0.5)
        metrics = metrics_from_counts(evaluate(records, config)).rounded(4)
        print(f"{threshold_y:>6} {threshold_x:>6} "
              f"{metrics['sensitivity']:>6} {metrics['specificity']:>6} "
              f"{metrics['accuracy']:>6}")

# The packaged CLI does the same from a grid file:
#   fallwatch sweep --manifest manifest.json --grid grid.json
