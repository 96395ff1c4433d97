"""CSV and JSON readers/writers for measurements, tables, matrices and samples."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from ..criteria import COMBO_IDS, MeasurementRecord
from ..errors import InvalidArgument

MEASUREMENT_HEADER = ["combo_id", "db_below_snl", "uncertainty_db"]
TABLE_HEADER = ["quantity", "paper_value", "computed_value", "unit"]
BATCH_HEADER = ["combo_id", "sample_index", "value"]


class ParseError(InvalidArgument):
    """Malformed input file; the message carries the file position."""


def _number(text, where):
    try:
        x = float(text)
    except ValueError:
        raise ParseError(f"{where}: {text!r} is not a number") from None
    if not math.isfinite(x):
        raise ParseError(f"{where}: value must be finite, got {text!r}")
    return x


def read_measurements_csv(path) -> list[MeasurementRecord]:
    """Read ``combo_id,db_below_snl,uncertainty_db`` rows.

    Requires exactly the six ids I1..III2, each once. Errors name the
    offending row (1-based, header is row 1).
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: cannot read ({exc.strerror})") from None
    rows = list(csv.reader(text.splitlines()))
    if not rows or [h.strip() for h in rows[0]] != MEASUREMENT_HEADER:
        raise ParseError(f"{path}: row 1: header must be {','.join(MEASUREMENT_HEADER)}")
    records, seen = [], {}
    for i, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        where = f"{path}: row {i}"
        if len(row) != 3:
            raise ParseError(f"{where}: expected 3 fields, got {len(row)}")
        cid = row[0].strip()
        if cid not in COMBO_IDS:
            raise ParseError(f"{where}: unknown combo_id {cid!r}")
        if cid in seen:
            raise ParseError(f"{where}: duplicate combo_id {cid} (first on row {seen[cid]})")
        seen[cid] = i
        db = _number(row[1].strip(), where)
        unc = _number(row[2].strip(), where)
        if unc < 0:
            raise ParseError(f"{where}: uncertainty_db must be >= 0")
        records.append(MeasurementRecord(cid, db, unc))
    missing = [c for c in COMBO_IDS if c not in seen]
    if missing:
        raise ParseError(f"{path}: missing combo_id {', '.join(missing)}")
    return records


def write_measurements_csv(path, records) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(MEASUREMENT_HEADER)
        for rec in records:
            w.writerow([rec.combo_id, repr(float(rec.db_below_snl)), repr(float(rec.uncertainty_db))])


def write_table_csv(path, rows) -> None:
    """Plot-ready table with columns ``quantity,paper_value,computed_value,unit``."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(TABLE_HEADER)
        for row in rows:
            w.writerow(["" if row.get(k) is None else row.get(k) for k in TABLE_HEADER])


def write_matrix_csv(path, matrix) -> None:
    """Row-major dump with 17 significant digits (round-trips doubles exactly)."""
    np.savetxt(path, np.asarray(matrix, dtype=float), delimiter=",", fmt="%.17g")


def read_matrix_csv(path) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", ndmin=2)


def write_batches_csv(path, batches) -> None:
    """Sample export, header ``combo_id,sample_index,value``."""
    if isinstance(batches, dict):
        batches = list(batches.values())
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(",".join(BATCH_HEADER) + "\n")
        for b in batches:
            for i, v in enumerate(b.values):
                fh.write(f"{b.combo_id},{i},{v:.17g}\n")


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(report) -> str:
    return json.dumps(report, indent=2, default=_json_default, allow_nan=True)


def write_json(path, report) -> None:
    Path(path).write_text(dumps(report) + "\n", encoding="utf-8")
