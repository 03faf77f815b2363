"""Deterministic CSV/JSON writers shared by the CLI and tests.

Every file carries a schema-version field.  CSV files open with '# key = value'
metadata lines (sorted by key) followed by a header row; JSON payloads are
serialized with sorted keys.  No timestamps are written, so identical inputs
produce byte-identical outputs.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .interference import IntensityTable

SCHEMA_VERSION = "1"


def _format_value(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, np.integer):
        return repr(int(value))
    return str(value)


def _metadata_lines(metadata: Mapping[str, object]) -> list[str]:
    meta = {"schema_version": SCHEMA_VERSION, **metadata}
    return [f"# {key} = {_format_value(meta[key])}" for key in sorted(meta)]


def write_csv(
    path: str | Path,
    header: Sequence[str],
    rows: Iterable[Sequence[object]],
    metadata: Mapping[str, object] | None = None,
) -> Path:
    path = Path(path)
    lines = _metadata_lines(metadata or {})
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_format_value(v) for v in row))
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text("\n".join(lines) + "\n")
    tmp.replace(path)
    return path


def read_csv(path: str | Path) -> tuple[dict[str, str], list[str], list[list[str]]]:
    """Parse a file written by `write_csv`: (metadata, header, rows)."""
    metadata: dict[str, str] = {}
    header: list[str] = []
    rows: list[list[str]] = []
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            key, _, value = line[1:].partition("=")
            metadata[key.strip()] = value.strip()
        elif not header:
            header = [c.strip() for c in line.split(",")]
        else:
            rows.append([c.strip() for c in line.split(",")])
    return metadata, header, rows


def write_json(path: str | Path, payload: Mapping[str, object]) -> Path:
    path = Path(path)
    full = {"schema_version": SCHEMA_VERSION, **payload}
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(json.dumps(full, sort_keys=True, indent=2) + "\n")
    tmp.replace(path)
    return path


def write_intensity_table_csv(
    table: IntensityTable,
    path: str | Path,
    metadata: Mapping[str, object] | None = None,
) -> Path:
    rows = [[pattern.label(), value] for pattern, value in table.rows()]
    return write_csv(path, ["pattern", "intensity"], rows, metadata)
