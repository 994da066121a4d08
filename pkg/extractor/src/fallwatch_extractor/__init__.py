"""Pose extraction adapter: video in, normalized keypoint JSONL out."""

from .extract import ExtractionJob, SourceError, extract, frame_line, preprocess
from .model import (BLOB_BACKEND_SPEC, DEFAULT_MODEL_PATH,
                    LuminanceBlobBackend, ModelLoadError, MovenetThunder,
                    resolve_backend)

__version__ = "0.1.0"

__all__ = [
    "BLOB_BACKEND_SPEC",
    "DEFAULT_MODEL_PATH",
    "ExtractionJob",
    "LuminanceBlobBackend",
    "ModelLoadError",
    "MovenetThunder",
    "SourceError",
    "extract",
    "frame_line",
    "preprocess",
    "resolve_backend",
]
