"""Deterministic CSV/JSON emission for run artifacts.

Every statistics table uses one schema:
    observable, L, key, estimate, stderr, n_samples
with RFC-4180 quoting (keys contain commas), rows sorted, and floats
rendered by repr so identical runs produce identical bytes.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
from pathlib import Path
from typing import Iterable

CSV_HEADER = ("observable", "L", "key", "estimate", "stderr", "n_samples")


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isnan(value):
            return ""
        return repr(value)
    return str(value)


def write_rows(path: Path, rows: Iterable[tuple]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def read_rows(path: Path) -> list[dict[str, str]]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = set(CSV_HEADER) - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"{path}: missing columns {sorted(missing)}")
        return list(reader)


def site_key(z: tuple[int, ...]) -> str:
    return ",".join(str(c) for c in z)


def parse_site_key(key: str) -> tuple[int, ...]:
    return tuple(int(tok) for tok in key.split(","))


def write_summary(path: Path, summary: dict) -> None:
    with open(path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")


def build_id() -> str:
    """Content hash of the installed package sources."""
    pkg_dir = Path(__file__).parent
    h = hashlib.sha256()
    for py in sorted(pkg_dir.rglob("*.py")):
        h.update(py.name.encode())
        h.update(py.read_bytes())
    return h.hexdigest()[:12]
