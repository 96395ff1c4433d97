"""Configuration, bundled data, measurement ingestion, fitting and the command line."""

from .config import ConfigError, ExperimentConfig, load_config, parse_config
from .dataset import PaperDataset, dataset_csv_path, load_paper_dataset
from .fit import FitResult, fit_measurements, predicted_db
from .io import ParseError, read_measurements_csv, write_measurements_csv

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "FitResult",
    "PaperDataset",
    "ParseError",
    "dataset_csv_path",
    "fit_measurements",
    "load_config",
    "load_paper_dataset",
    "parse_config",
    "predicted_db",
    "read_measurements_csv",
    "write_measurements_csv",
]
