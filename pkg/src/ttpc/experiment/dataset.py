"""Bundled measured correlation variances of the four-mode experiment."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from importlib import resources

from ..criteria import MeasurementRecord

_JSON = "paper_dataset.json"
_CSV = "paper_dataset.csv"


@dataclass(frozen=True)
class PaperDataset:
    version: str
    records: tuple
    gain: float
    squeezing_db: float
    squeezing_db_uncertainty: float
    reported: dict
    sha256: str


def _data(name):
    return resources.files(__package__).joinpath("data").joinpath(name)


def dataset_csv_path():
    """Filesystem path of the bundled CSV (for the command line)."""
    return _data(_CSV)


def load_paper_dataset() -> PaperDataset:
    raw = _data(_JSON).read_bytes()
    doc = json.loads(raw.decode("utf-8"))
    records = tuple(MeasurementRecord(**r) for r in doc["records"])
    return PaperDataset(
        version=doc["version"],
        records=records,
        gain=float(doc["gain"]),
        squeezing_db=float(doc["squeezing_db"]),
        squeezing_db_uncertainty=float(doc["squeezing_db_uncertainty"]),
        reported=dict(doc["reported"]),
        sha256=hashlib.sha256(raw).hexdigest(),
    )
