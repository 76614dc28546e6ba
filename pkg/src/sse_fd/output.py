"""Plot-ready CSV, key-value reports and run manifests.

Floats are written with 17 significant digits so values round-trip exactly.
All files are written to a temporary sibling and renamed into place.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def atomic_write(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def csv_text(header, columns) -> str:
    columns = [np.asarray(c) for c in columns]
    lines = [",".join(header)]
    for row in zip(*columns):
        lines.append(",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def write_csv(path, header, columns) -> Path:
    return atomic_write(path, csv_text(header, columns))


def write_rows(path, header, rows) -> Path:
    lines = [",".join(header)] + [",".join(fmt(v) for v in row) for row in rows]
    return atomic_write(path, "\n".join(lines) + "\n")


def report_text(items: dict) -> str:
    return "".join(f"{k} = {fmt(v)}\n" for k, v in items.items())


def write_report(path, items: dict) -> Path:
    return atomic_write(path, report_text(items))


def write_manifest(out_dir, command: str, config, derived, outputs, wall_clock: float) -> Path:
    """``manifest.json`` with everything needed to repeat the run."""
    out_dir = Path(out_dir)
    if derived is not None and not isinstance(derived, dict):
        derived = asdict(derived)
    manifest = {
        "tool": "sse_fd",
        "version": __version__,
        "command": command,
        "config": config.snapshot(),
        "derived": derived,
        "outputs": sorted(Path(p).name for p in outputs),
        "wall_clock_s": wall_clock,
    }
    return atomic_write(out_dir / "manifest.json", json.dumps(manifest, indent=2, sort_keys=True))
