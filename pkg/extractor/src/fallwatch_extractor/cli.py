"""Command line: extract --source <path|cam:N> --out <path|-> [--model ...]."""

from __future__ import annotations

import argparse
import sys

from .extract import ExtractionJob, SourceError, extract
from .model import BLOB_BACKEND_SPEC, ModelLoadError, resolve_backend


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="pose-extract",
        description="Run single-person pose estimation on a video or webcam "
                    "and emit the normalized 17-keypoint JSONL stream.")
    parser.add_argument("--source", required=True,
                        help="video file path, or cam:<index> for a webcam")
    parser.add_argument("--out", required=True,
                        help="output stream path, or - for standard output")
    parser.add_argument("--model", default=None,
                        help="Movenet Thunder .tflite path (default: "
                             f"cached weights), or {BLOB_BACKEND_SPEC} for the "
                             "deterministic contract-testing backend")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        backend = resolve_backend(args.model)
    except ModelLoadError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    job = ExtractionJob(source=args.source, output=args.out)
    try:
        if args.out == "-":
            extract(job, backend, sys.stdout)
        else:
            try:
                with open(args.out, "w", encoding="utf-8") as handle:
                    extract(job, backend, handle)
            except OSError as exc:
                print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
                return 2
    except SourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
