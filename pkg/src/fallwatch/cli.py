"""Command-line entry point: detect, eval, sweep, simulate.

Exit codes are a stable contract: 0 success, 1 usage or validation
error, 2 runtime or data error. Configuration precedence is CLI flags
over config-file values over built-in defaults.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from pathlib import Path

from .alerts import AlertEvent, config_digest, dispatch, parse_sink_spec
from .detector import DetectorConfig, DetectorState, step
from .evaluation import (StreamError, build_report, evaluate, load_manifest,
                         metrics_from_counts)
from .keypoints import StreamFormatError, read_frames
from .synth import Scenario, ScenarioKind, generate, intended_label
from .keypoints import serialize_frame

_SWEEP_AXES = ("confidence_threshold", "threshold_y", "threshold_x", "min_counter")
_FIXED_KEYS = ("bed_top_y", "pair_policy")


class UsageError(Exception):
    """Bad flags or invalid parameter values; exits 1."""


class DataError(Exception):
    """Unreadable or malformed input data; exits 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit 2; we want 1
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="fallwatch",
                     description="Rule-based fall detection over pose keypoint streams.")
    sub = parser.add_subparsers(dest="command", required=True)

    detect = sub.add_parser("detect", help="run the detector over a JSONL stream")
    detect.add_argument("--input", required=True,
                        help="stream path, or - for standard input")
    detect.add_argument("--config", help="JSON config file")
    detect.add_argument("--bed-top-y", type=float, default=None,
                        help="bed line override; enables bed suppression")
    detect.add_argument("--sink", action="append", default=None,
                        help="alert sink: stdout, file:<path> or webhook:<url>; "
                             "repeatable (default: stdout)")

    evaluate_cmd = sub.add_parser("eval", help="evaluate a labeled manifest")
    evaluate_cmd.add_argument("--manifest", required=True)
    evaluate_cmd.add_argument("--report", required=True,
                              help="where to write the JSON report")
    evaluate_cmd.add_argument("--config", help="JSON config file")

    sweep = sub.add_parser("sweep", help="evaluate a manifest over a threshold grid")
    sweep.add_argument("--manifest", required=True)
    sweep.add_argument("--grid", required=True, help="JSON grid file")

    simulate = sub.add_parser("simulate", help="generate a synthetic stream")
    simulate.add_argument("--kind", required=True,
                          choices=[kind.value for kind in ScenarioKind])
    simulate.add_argument("--frames", required=True, type=int)
    simulate.add_argument("--seed", required=True, type=int)
    simulate.add_argument("--out", required=True, help="output stream path")
    simulate.add_argument("--noise-amplitude", type=float, default=0.01)

    return parser


def _read_json_file(path: str, what: str) -> dict:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise DataError(f"cannot read {what} {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"{what} {path} is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise DataError(f"{what} {path} must contain a JSON object")
    return payload


def _load_config(path: str | None, **overrides) -> DetectorConfig:
    payload = _read_json_file(path, "config file") if path else {}
    for key, value in overrides.items():
        if value is not None:
            payload[key] = value
    try:
        return DetectorConfig.from_json_dict(payload)
    except ValueError as exc:
        raise UsageError(f"invalid config: {exc}") from exc


def cmd_detect(args: argparse.Namespace) -> int:
    config = _load_config(args.config, bed_top_y=args.bed_top_y)
    try:
        sinks = [parse_sink_spec(spec) for spec in (args.sink or ["stdout"])]
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    digest = config_digest(config)
    source_id = "stdin" if args.input == "-" else args.input

    if args.input == "-":
        handle = sys.stdin
        close = False
    else:
        try:
            handle = open(args.input, "r", encoding="utf-8")
        except OSError as exc:
            raise DataError(f"cannot read input {args.input}: {exc}") from exc
        close = True

    state = DetectorState()
    try:
        for frame in read_frames(handle):
            state, verdict = step(state, frame, config)
            print(json.dumps(verdict.to_json_dict(), separators=(",", ":")),
                  flush=True)
            if verdict.alert_fired:
                event = AlertEvent(source_id=source_id,
                                   frame_index=frame.frame_index,
                                   timestamp_ms=frame.timestamp_ms,
                                   config_digest=digest)
                dispatch(event, sinks)
    except StreamFormatError as exc:
        raise DataError(str(exc)) from exc
    finally:
        if close:
            handle.close()
    return 0


def _print_report(counts, metrics) -> None:
    print("confusion matrix (videos):")
    print(f"  tp={counts.tp}  fn={counts.fn}")
    print(f"  fp={counts.fp}  tn={counts.tn}")
    for name, value in metrics.rounded(4).items():
        shown = "undefined" if value is None else f"{value:.4f}"
        print(f"{name:<22} {shown}")


def cmd_eval(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    try:
        manifest = load_manifest(args.manifest)
    except OSError as exc:
        raise DataError(f"cannot read manifest {args.manifest}: {exc}") from exc
    except (ValueError, json.JSONDecodeError) as exc:
        raise DataError(str(exc)) from exc
    try:
        counts = evaluate(manifest, config)
    except StreamError as exc:
        raise DataError(str(exc)) from exc
    report = build_report(config, counts)
    try:
        Path(args.report).write_text(json.dumps(report, indent=2) + "\n",
                                     encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot write report {args.report}: {exc}") from exc
    _print_report(counts, metrics_from_counts(counts))
    return 0


def _grid_configs(grid: dict) -> list[DetectorConfig]:
    unknown = sorted(set(grid) - set(_SWEEP_AXES) - set(_FIXED_KEYS))
    if unknown:
        raise UsageError(f"unknown grid keys: {', '.join(unknown)}")
    if not grid:
        raise UsageError("grid must define at least one axis")
    axes = []
    for name in _SWEEP_AXES:
        values = grid.get(name)
        if values is None:
            axes.append([None])
            continue
        if not isinstance(values, list) or not values:
            raise UsageError(f"grid axis {name} must be a nonempty array")
        axes.append(sorted(values))
    fixed = {}
    for name in _FIXED_KEYS:
        if name in grid:
            if isinstance(grid[name], list):
                raise UsageError(f"{name} cannot be swept; give a single value")
            fixed[name] = grid[name]

    configs = []
    for combo in itertools.product(*axes):
        payload = dict(fixed)
        for name, value in zip(_SWEEP_AXES, combo):
            if value is not None:
                payload[name] = value
        try:
            configs.append(DetectorConfig.from_json_dict(payload))
        except ValueError as exc:
            raise UsageError(f"invalid grid point: {exc}") from exc
    return configs


def cmd_sweep(args: argparse.Namespace) -> int:
    grid = _read_json_file(args.grid, "grid file")
    configs = _grid_configs(grid)
    try:
        manifest = load_manifest(args.manifest)
    except OSError as exc:
        raise DataError(f"cannot read manifest {args.manifest}: {exc}") from exc
    except (ValueError, json.JSONDecodeError) as exc:
        raise DataError(str(exc)) from exc
    for config in configs:
        try:
            counts = evaluate(manifest, config)
        except StreamError as exc:
            raise DataError(str(exc)) from exc
        print(json.dumps(build_report(config, counts), separators=(",", ":")),
              flush=True)
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    try:
        scenario = Scenario(kind=ScenarioKind(args.kind), frames=args.frames,
                            seed=args.seed, noise_amplitude=args.noise_amplitude)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    frames = generate(scenario)
    out_path = Path(args.out)
    lines = "".join(serialize_frame(frame) + "\n" for frame in frames)
    sidecar = {
        "videos": [{
            "id": f"{scenario.kind.value}-{scenario.seed}",
            "label": intended_label(scenario.kind).value,
            "stream": out_path.name,
        }],
    }
    try:
        out_path.write_text(lines, encoding="utf-8")
        sidecar_path = out_path.with_name(out_path.name + ".manifest.json")
        sidecar_path.write_text(json.dumps(sidecar, indent=2) + "\n",
                                encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot write {args.out}: {exc}") from exc
    return 0


_COMMANDS = {
    "detect": cmd_detect,
    "eval": cmd_eval,
    "sweep": cmd_sweep,
    "simulate": cmd_simulate,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
