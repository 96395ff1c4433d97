"""Strict JSON experiment configuration.

Example::

    {
      "squeezing": {"db": 2.6},
      "r2": null,
      "bs_phase": 1.5707963267948966,
      "losses": [1, 1, 1, 1],
      "escape": [1, 1],
      "gains": "auto",
      "tie_gains": false,
      "mc": {"enabled": true, "n": 1000000, "seed": 42},
      "v0": 0.25,
      "outputs": {"json": "report.json", "csv": "table.csv", "cov_csv": "cov.csv"}
    }

Only ``squeezing`` is required. Unknown fields are rejected.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from ..circuit import CircuitParams, db_to_r
from ..criteria import GAIN_SLOTS, resolve_gains
from ..errors import InvalidArgument
from ..gaussian import Convention

_TOP = {"squeezing", "r2", "bs_phase", "losses", "escape", "gains", "tie_gains", "mc", "v0", "outputs"}
_MC = {"enabled", "n", "seed"}
_OUTPUTS = {"json", "csv", "cov_csv", "samples_csv"}


class ConfigError(InvalidArgument):
    pass


@dataclass(frozen=True)
class MCSettings:
    enabled: bool = False
    n: int = 1_000_000
    seed: int | None = None


@dataclass(frozen=True)
class ExperimentConfig:
    r: float
    squeezing_db: float | None = None
    r2: float | None = None
    bs_phase: float = math.pi / 2
    losses: tuple = (1.0, 1.0, 1.0, 1.0)
    escape: tuple = (1.0, 1.0)
    gains: object = "auto"
    tie_gains: bool = False
    mc: MCSettings = field(default_factory=MCSettings)
    v0: float = 0.25
    outputs: dict = field(default_factory=dict)

    def circuit_params(self) -> CircuitParams:
        return CircuitParams(self.r, self.r2, self.bs_phase, self.losses, self.escape, Convention(self.v0))

    def to_dict(self) -> dict:
        return {
            "squeezing": {"r": self.r, "db": self.squeezing_db},
            "r2": self.r if self.r2 is None else self.r2,
            "bs_phase": self.bs_phase,
            "losses": list(self.losses),
            "escape": list(self.escape),
            "gains": self.gains,
            "tie_gains": self.tie_gains,
            "mc": {"enabled": self.mc.enabled, "n": self.mc.n, "seed": self.mc.seed},
            "v0": self.v0,
            "outputs": dict(self.outputs),
        }


def _real(value, name, lo=None, lo_open=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"field '{name}': expected a number, got {value!r}")
    x = float(value)
    if not math.isfinite(x):
        raise ConfigError(f"field '{name}': must be finite")
    if lo is not None and (x <= lo if lo_open else x < lo):
        raise ConfigError(f"field '{name}': must be {'>' if lo_open else '>='} {lo}, got {x}")
    return x


def _etas(value, n, name):
    if not isinstance(value, list) or len(value) != n:
        raise ConfigError(f"field '{name}': expected a list of {n} numbers")
    out = []
    for i, v in enumerate(value):
        e = _real(v, f"{name}[{i}]", 0.0)
        if e > 1.0:
            raise ConfigError(f"field '{name}[{i}]': must be <= 1, got {e}")
        out.append(e)
    return tuple(out)


def _unknown(obj, allowed, where):
    extra = sorted(set(obj) - allowed)
    if extra:
        raise ConfigError(f"{where}: unknown field(s) {', '.join(repr(e) for e in extra)}")


def parse_config(doc) -> ExperimentConfig:
    """Validate a decoded JSON document and resolve derived values."""
    if not isinstance(doc, dict):
        raise ConfigError("config: top level must be a JSON object")
    _unknown(doc, _TOP, "config")

    sq = doc.get("squeezing")
    if not isinstance(sq, dict):
        raise ConfigError("field 'squeezing': required object with exactly one of 'r' or 'db'")
    _unknown(sq, {"r", "db"}, "field 'squeezing'")
    if len(sq) != 1:
        raise ConfigError("field 'squeezing': give exactly one of 'r' or 'db'")
    if "r" in sq:
        r, db = _real(sq["r"], "squeezing.r", 0.0), None
    else:
        db = _real(sq["db"], "squeezing.db", 0.0, lo_open=True)
        r = db_to_r(db)

    kw = {"r": r, "squeezing_db": db}
    if doc.get("r2") is not None:
        kw["r2"] = _real(doc["r2"], "r2", 0.0)
    if "bs_phase" in doc:
        kw["bs_phase"] = _real(doc["bs_phase"], "bs_phase")
    if "losses" in doc:
        kw["losses"] = _etas(doc["losses"], 4, "losses")
    if "escape" in doc:
        kw["escape"] = _etas(doc["escape"], 2, "escape")
    if "gains" in doc:
        g = doc["gains"]
        if g != "auto":
            if isinstance(g, dict):
                _unknown(g, set(GAIN_SLOTS) | {"I", "II", "III"}, "field 'gains'")
            try:
                resolve_gains(g)
            except InvalidArgument as exc:
                raise ConfigError(f"field 'gains': {exc}") from None
        kw["gains"] = g
    if "tie_gains" in doc:
        if not isinstance(doc["tie_gains"], bool):
            raise ConfigError("field 'tie_gains': expected true or false")
        kw["tie_gains"] = doc["tie_gains"]
    if "mc" in doc:
        mc = doc["mc"]
        if not isinstance(mc, dict):
            raise ConfigError("field 'mc': expected an object")
        _unknown(mc, _MC, "field 'mc'")
        enabled = mc.get("enabled", False)
        if not isinstance(enabled, bool):
            raise ConfigError("field 'mc.enabled': expected true or false")
        n = mc.get("n", MCSettings.n)
        if isinstance(n, bool) or not isinstance(n, int) or n < 2:
            raise ConfigError("field 'mc.n': expected an integer >= 2")
        seed = mc.get("seed")
        if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < 2 ** 64):
            raise ConfigError("field 'mc.seed': expected an integer in [0, 2**64)")
        kw["mc"] = MCSettings(enabled, n, seed)
    if "v0" in doc:
        kw["v0"] = _real(doc["v0"], "v0", 0.0, lo_open=True)
    if "outputs" in doc:
        out = doc["outputs"]
        if not isinstance(out, dict):
            raise ConfigError("field 'outputs': expected an object")
        _unknown(out, _OUTPUTS, "field 'outputs'")
        for k, v in out.items():
            if not isinstance(v, str) or not v:
                raise ConfigError(f"field 'outputs.{k}': expected a path string")
        kw["outputs"] = dict(out)
    return ExperimentConfig(**kw)


def load_config(path) -> ExperimentConfig:
    """Read and validate a JSON config file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read ({exc.strerror})") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    try:
        return parse_config(doc)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None
