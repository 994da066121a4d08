"""Pose inference backends.

The production backend runs the Movenet Thunder single-pose model from
a local TFLite file. A deterministic luminance-blob backend exists so
the stream contract can be exercised end to end on machines without
the model weights; it must be requested explicitly (``builtin:blob``)
and is not a substitute for real pose estimation.

Every backend maps one RGB uint8 image of shape (256, 256, 3) to a
(17, 3) float array of (y, x, score) rows in [0, 1].
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np

INPUT_SIZE = 256
KEYPOINT_COUNT = 17

# Default weights location, checked when --model is not given.
DEFAULT_MODEL_PATH = Path.home() / ".cache" / "fallwatch" / "movenet-thunder.tflite"

BLOB_BACKEND_SPEC = "builtin:blob"


class ModelLoadError(RuntimeError):
    """The requested inference backend could not be constructed."""


class MovenetThunder:
    """Movenet Thunder via the TFLite interpreter.

    The interpreter's declared input dtype drives the cast: integer
    inputs receive the raw 0..255 image, float inputs receive it cast
    to float32 (Movenet consumes pixel values, not unit-scaled ones).
    Output is (1, 1, 17, 3) with normalized (y, x, score) rows.
    """

    name = "movenet-thunder"

    def __init__(self, model_path: str | os.PathLike) -> None:
        path = Path(model_path)
        if not path.is_file():
            raise ModelLoadError(
                f"model file not found: {path}. Download the Movenet Thunder "
                f"TFLite model and pass it via --model (or place it at "
                f"{DEFAULT_MODEL_PATH}).")
        try:
            from tensorflow import lite as tflite
        except ImportError as exc:
            raise ModelLoadError(
                "tensorflow is required for the movenet-thunder backend; "
                "install the 'movenet' extra") from exc
        try:
            self._interpreter = tflite.Interpreter(model_path=str(path))
            self._interpreter.allocate_tensors()
        except Exception as exc:
            raise ModelLoadError(f"cannot load TFLite model {path}: {exc}") from exc
        self._input = self._interpreter.get_input_details()[0]
        self._output = self._interpreter.get_output_details()[0]
        shape = tuple(self._input["shape"])
        if shape not in ((1, INPUT_SIZE, INPUT_SIZE, 3),):
            raise ModelLoadError(
                f"unexpected model input shape {shape}; expected "
                f"(1, {INPUT_SIZE}, {INPUT_SIZE}, 3)")

    def infer(self, rgb: np.ndarray) -> np.ndarray:
        batch = rgb[np.newaxis, ...]
        dtype = self._input["dtype"]
        if np.issubdtype(dtype, np.floating):
            batch = batch.astype(dtype)
        else:
            batch = batch.astype(dtype)
        self._interpreter.set_tensor(self._input["index"], batch)
        self._interpreter.invoke()
        raw = self._interpreter.get_tensor(self._output["index"])
        keypoints = np.asarray(raw, dtype=np.float64).reshape(KEYPOINT_COUNT, 3)
        return np.clip(keypoints, 0.0, 1.0)


class LuminanceBlobBackend:
    """Deterministic stand-in: a coarse body layout over the brightest blob.

    Thresholds luminance, takes the bounding box of the bright region
    and lays 17 keypoints out in a fixed head-to-ankle arrangement
    inside it. Scores reflect how much of the box is lit. Purely a
    contract-testing device: the emitted stream is shaped exactly like
    real pose output without requiring model weights.
    """

    name = "luminance-blob"

    # (vertical fraction within the box, horizontal fraction) per index
    _LAYOUT = (
        (0.05, 0.50), (0.03, 0.55), (0.03, 0.45), (0.06, 0.60), (0.06, 0.40),
        (0.20, 0.65), (0.20, 0.35), (0.35, 0.70), (0.35, 0.30),
        (0.48, 0.72), (0.48, 0.28), (0.52, 0.58), (0.52, 0.42),
        (0.72, 0.60), (0.72, 0.40), (0.95, 0.62), (0.95, 0.38),
    )

    def infer(self, rgb: np.ndarray) -> np.ndarray:
        luminance = rgb.astype(np.float64).mean(axis=2)
        mask = luminance > 127.0
        if mask.any():
            rows = np.flatnonzero(mask.any(axis=1))
            cols = np.flatnonzero(mask.any(axis=0))
            top, bottom = rows[0], rows[-1] + 1
            left, right = cols[0], cols[-1] + 1
            fill = mask[top:bottom, left:right].mean()
            score = 0.5 + 0.5 * float(fill)
        else:  # nothing bright: centered layout, low confidence
            top, bottom, left, right = 0, rgb.shape[0], 0, rgb.shape[1]
            score = 0.1
        height = rgb.shape[0]
        width = rgb.shape[1]
        keypoints = np.empty((KEYPOINT_COUNT, 3), dtype=np.float64)
        for index, (fy, fx) in enumerate(self._LAYOUT):
            keypoints[index, 0] = (top + fy * (bottom - top)) / height
            keypoints[index, 1] = (left + fx * (right - left)) / width
            keypoints[index, 2] = score
        return np.clip(keypoints, 0.0, 1.0)


def resolve_backend(model_spec: str | None):
    """Build the backend for a --model value.

    None checks the default weights location; ``builtin:blob`` selects
    the contract-testing backend; anything else is a TFLite file path.
    """
    if model_spec == BLOB_BACKEND_SPEC:
        return LuminanceBlobBackend()
    if model_spec is None:
        if DEFAULT_MODEL_PATH.is_file():
            return MovenetThunder(DEFAULT_MODEL_PATH)
        raise ModelLoadError(
            f"no model weights at {DEFAULT_MODEL_PATH}; pass --model "
            f"<path-to-movenet-thunder.tflite> (or {BLOB_BACKEND_SPEC} for "
            "a deterministic contract-testing backend)")
    return MovenetThunder(model_spec)
