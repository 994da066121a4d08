"""Alert events and the sinks that deliver them.

A sink failure is logged and swallowed: an alert must never be lost to
one dead webhook, so dispatch always tries every remaining sink and
detection itself never aborts.
"""

from __future__ import annotations

import hashlib
import json
import logging
import urllib.error
import urllib.request
from dataclasses import dataclass
from typing import Sequence

from .detector import DetectorConfig

logger = logging.getLogger("fallwatch.alerts")

_WEBHOOK_TIMEOUT_S = 2.0
_WEBHOOK_RETRIES = 1


def config_digest(config: DetectorConfig) -> str:
    """Stable hash identifying the exact thresholds behind an alert."""
    canonical = json.dumps(config.to_json_dict(), sort_keys=True,
                           separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


@dataclass(frozen=True, slots=True)
class AlertEvent:
    """One fired fall alert, ready for delivery."""

    source_id: str
    frame_index: int
    timestamp_ms: int | None
    config_digest: str

    def to_json_dict(self) -> dict:
        return {
            "source_id": self.source_id,
            "frame_index": self.frame_index,
            "timestamp_ms": self.timestamp_ms,
            "config_digest": self.config_digest,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), separators=(",", ":"))


class StdoutSink:
    """Write each alert as one JSON line on standard output."""

    name = "stdout"

    def __init__(self, stream=None) -> None:
        self._stream = stream

    def send(self, event: AlertEvent) -> None:
        import sys
        # late binding: honor redirections of sys.stdout made after
        # the sink was constructed
        stream = self._stream if self._stream is not None else sys.stdout
        print(event.to_json(), file=stream, flush=True)


class FileSink:
    """Append each alert as one JSON line to a file."""

    name = "file"

    def __init__(self, path: str) -> None:
        self.path = path

    def send(self, event: AlertEvent) -> None:
        with open(self.path, "a", encoding="utf-8") as handle:
            handle.write(event.to_json() + "\n")


class WebhookSink:
    """POST each alert to an HTTP endpoint, with one retry."""

    name = "webhook"

    def __init__(self, url: str, timeout_s: float = _WEBHOOK_TIMEOUT_S,
                 retries: int = _WEBHOOK_RETRIES) -> None:
        self.url = url
        self.timeout_s = timeout_s
        self.retries = retries

    def send(self, event: AlertEvent) -> None:
        body = event.to_json().encode("utf-8")
        request = urllib.request.Request(
            self.url, data=body, method="POST",
            headers={"Content-Type": "application/json"})
        last_error: Exception | None = None
        for _ in range(1 + self.retries):
            try:
                with urllib.request.urlopen(request, timeout=self.timeout_s):
                    return
            except (urllib.error.URLError, OSError) as exc:
                last_error = exc
        raise last_error  # type: ignore[misc]


def parse_sink_spec(spec: str):
    """Build a sink from its CLI spec: stdout | file:<path> | webhook:<url>."""
    if spec == "stdout":
        return StdoutSink()
    if spec.startswith("file:"):
        path = spec[len("file:"):]
        if not path:
            raise ValueError("file sink needs a path: file:<path>")
        return FileSink(path)
    if spec.startswith("webhook:"):
        url = spec[len("webhook:"):]
        if not url:
            raise ValueError("webhook sink needs a URL: webhook:<url>")
        return WebhookSink(url)
    raise ValueError(f"unknown sink {spec!r}; expected stdout, "
                     "file:<path> or webhook:<url>")


def dispatch(event: AlertEvent, sinks: Sequence) -> None:
    """Deliver one event to every sink; log failures, never raise."""
    for sink in sinks:
        try:
            sink.send(event)
        except Exception as exc:
            logger.warning("alert delivery via %s failed: %s",
                           getattr(sink, "name", type(sink).__name__), exc)
