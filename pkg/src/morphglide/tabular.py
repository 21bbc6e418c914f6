"""Plain CSV/JSON table I/O shared by every module.

CSV files carry optional ``# key=value`` comment lines, then one header row,
then numeric (or, for labelled columns, text) rows. Floats are written with
``repr`` so a write/read round trip is exact and reruns are byte-identical.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

__all__ = ["read_table", "write_table", "write_json", "format_value"]


def format_value(v):
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def write_table(path, header, rows, meta=None):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        for key, value in (meta or {}).items():
            fh.write(f"# {key}={value}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(v) for v in row])
    return path


def read_table(path, header, text_columns=()):
    """Return (rows, meta). Numeric tables come back as a float array, mixed ones as lists."""
    meta = {}
    rows = []
    text_idx = {list(header).index(c) for c in text_columns}
    with open(path, newline="") as fh:
        seen_header = False
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text:
                continue
            if text.startswith("#"):
                body = text[1:].strip()
                if "=" in body:
                    key, _, value = body.partition("=")
                    meta[key.strip()] = value.strip()
                continue
            if not seen_header:
                cols = [c.strip() for c in text.split(",")]
                if cols != list(header):
                    raise ValueError(f"{path}:{lineno}: expected header {','.join(header)!r}, got {text!r}")
                seen_header = True
                continue
            fields = text.split(",")
            if len(fields) != len(header):
                raise ValueError(f"{path}:{lineno}: expected {len(header)} fields, got {len(fields)}")
            try:
                rows.append([f if k in text_idx else float(f) for k, f in enumerate(fields)])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: malformed row {text!r}") from None
    if not seen_header:
        raise ValueError(f"{path}: missing header row")
    if text_idx:
        return rows, meta
    return np.array(rows, dtype=float).reshape(-1, len(header)), meta


def write_json(path, payload):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path
