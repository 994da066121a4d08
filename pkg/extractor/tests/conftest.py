"""Fixtures: synthetic sample clips written with OpenCV."""

from __future__ import annotations

import numpy as np
import pytest

try:
    import cv2
except ImportError:  # pragma: no cover
    cv2 = None

CLIP_FRAMES = 36
CLIP_SIZE = (96, 72)  # (width, height)


def write_clip(path, frames=CLIP_FRAMES, size=CLIP_SIZE) -> int:
    """A moving bright figure on a dark background; MJPG avi for
    codec availability in headless builds."""
    width, height = size
    writer = cv2.VideoWriter(str(path), cv2.VideoWriter_fourcc(*"MJPG"),
                             30.0, (width, height))
    if not writer.isOpened():
        pytest.skip("OpenCV build cannot encode MJPG avi")
    for i in range(frames):
        frame = np.zeros((height, width, 3), dtype=np.uint8)
        x = 10 + (i * 2) % (width - 30)
        y = 8 + (i % 12)
        cv2.rectangle(frame, (x, y), (x + 18, y + 40), (240, 240, 240), -1)
        writer.write(frame)
    writer.release()
    return frames


@pytest.fixture
def sample_clip(tmp_path):
    path = tmp_path / "clip.avi"
    frames = write_clip(path)
    return path, frames
