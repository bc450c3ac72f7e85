"""Run manifests and the JSON report document emitted by the CLI."""

from __future__ import annotations

import hashlib
import json
from datetime import datetime, timezone
from typing import Optional, Sequence

from monochrom import __version__

# flags that change scheduling only; left out of the manifest so reports stay comparable
_UNRECORDED_FLAGS = ("--threads", "--timing")


def file_digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return "sha256:" + h.hexdigest()


def recorded_argv(argv: Sequence[str]) -> list[str]:
    out: list[str] = []
    skip = False
    for arg in argv:
        if skip:
            skip = False
            continue
        name = arg.split("=", 1)[0]
        if name in _UNRECORDED_FLAGS:
            skip = name == "--threads" and "=" not in arg
            continue
        out.append(arg)
    return out


def manifest(command: str, argv: Sequence[str], seed: Optional[int], inputs: Sequence[str] = ()) -> dict:
    return {
        "command": command,
        "argv": recorded_argv(argv),
        "seed": seed,
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "inputs": {str(p): file_digest(p) for p in inputs},
    }


def render(doc: dict) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def strip_timestamp(text: str) -> dict:
    """Parse a report and drop its manifest timestamp, for comparisons."""
    doc = json.loads(text)
    doc.get("manifest", {}).pop("timestamp", None)
    return doc
