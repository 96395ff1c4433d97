"""Monte Carlo emulation of balanced-homodyne detection and the power-combiner chain.

Joint quadrature samples are drawn from the state's multivariate Gaussian.
Each weighted combination (the electronically combined photocurrent) is
formed from the same joint samples, so correlations between combinations
are preserved.

Random numbers come from the counter-based Philox generator keyed by
``SeedSequence(seed, spawn_key=(stream, chunk))``. Samples are produced in
fixed-size chunks and concatenated in chunk order, so a batch depends on
``(seed, stream, n, chunk_size)`` only and not on the number of workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .criteria import (
    CRITERIA,
    DB_CAP,
    MeasurementRecord,
    criteria_from_measurements,
    db_below,
    optimal_gains,
    resolve_gains,
    snl_of_combination,
)
from .errors import InvalidArgument, NumericalFailure
from .gaussian import GaussianState, QuadCombination

CHUNK_SIZE = 1 << 17
JITTER = 1e-12


@dataclass(frozen=True, eq=False)
class SampleBatch:
    combo_id: str
    values: np.ndarray
    seed: int
    stream: int

    @property
    def n(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class VarianceEstimate:
    variance: float
    standard_error: float
    n: int
    db_below_snl: float
    mean: float = 0.0


def make_rng(seed: int, stream: int = 0, chunk: int = 0) -> np.random.Generator:
    """Philox generator for one chunk of one stream."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(stream, chunk))))


def _check_seed(seed) -> int:
    if seed is None:
        raise InvalidArgument("an explicit integer seed is required")
    if isinstance(seed, bool) or int(seed) != seed or not 0 <= int(seed) < 2 ** 64:
        raise InvalidArgument(f"seed must be an integer in [0, 2**64), got {seed!r}")
    return int(seed)


def sampling_factor(cov: np.ndarray) -> np.ndarray:
    """Lower-triangular ``L`` with ``L L^T = cov``, adding ``JITTER`` to the diagonal if needed."""
    for jitter in (0.0, JITTER):
        try:
            return np.linalg.cholesky(cov + jitter * np.eye(len(cov)))
        except np.linalg.LinAlgError:
            continue
    raise NumericalFailure("covariance is not positive semidefinite within jitter tolerance")


def _normalise_combos(combos) -> list[tuple[str, QuadCombination]]:
    if isinstance(combos, QuadCombination):
        combos = [combos]
    if isinstance(combos, Mapping):
        items = list(combos.items())
    else:
        items = []
        for i, c in enumerate(combos):
            items.append(c if isinstance(c, tuple) else (f"c{i}", c))
    if not items:
        raise InvalidArgument("no combinations to sample")
    return [(str(k), c) for k, c in items]


def sample_combinations(state: GaussianState, combos, n: int, seed: int, *, stream: int = 0,
                        workers: int | None = None, chunk_size: int = CHUNK_SIZE) -> dict:
    """Draw ``n`` joint homodyne records and return one :class:`SampleBatch` per combination.

    ``combos`` may be a mapping ``{id: QuadCombination}``, a list of
    ``(id, combination)`` pairs or a list of bare combinations (ids
    ``c0, c1, ...``). The result preserves the given order.
    """
    if isinstance(n, bool) or int(n) != n or n < 2:
        raise InvalidArgument(f"need at least 2 samples, got {n!r}")
    n, seed = int(n), _check_seed(seed)
    items = _normalise_combos(combos)
    weights = np.column_stack([c.vector(state.n_modes) for _, c in items])
    lower = sampling_factor(state.cov)
    # project the factor once: combination samples = mean.w + z @ (L^T w)
    proj = lower.T @ weights
    offset = state.mean @ weights

    starts = list(range(0, n, chunk_size))

    def draw(k):
        m = min(chunk_size, n - starts[k])
        z = make_rng(seed, stream, k).standard_normal((m, len(state.cov)))
        return z @ proj

    if workers and workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(draw, range(len(starts))))
    else:
        chunks = [draw(k) for k in range(len(starts))]
    samples = np.concatenate(chunks, axis=0) + offset

    out = {}
    for j, (cid, _) in enumerate(items):
        values = np.ascontiguousarray(samples[:, j])
        values.setflags(write=False)
        out[cid] = SampleBatch(cid, values, seed, stream)
    return out


def estimate(batch: SampleBatch, snl: float) -> VarianceEstimate:
    """Unbiased sample variance with its Gaussian-theory standard error."""
    if not snl > 0:
        raise InvalidArgument(f"shot-noise level must be positive, got {snl!r}")
    if batch.n < 2:
        raise InvalidArgument("need at least 2 samples")
    var = float(np.var(batch.values, ddof=1))
    se = var * math.sqrt(2.0 / (batch.n - 1))
    return VarianceEstimate(var, se, batch.n, db_below(var, snl, DB_CAP), float(np.mean(batch.values)))


@dataclass(frozen=True)
class MCCriteria:
    """Monte Carlo criterion values.

    ``results`` come from the measurement pipeline (with first-order dB
    uncertainties). ``lhs_standard_error`` additionally accounts for the
    correlation between the two variances of each criterion.
    """

    results: list
    estimates: dict
    lhs_standard_error: dict
    gains: dict
    n: int
    seed: int


def mc_criteria(state: GaussianState, gains="auto", n: int = 1_000_000, seed: int | None = None, *,
                workers: int | None = None, tie_gains: bool = False) -> MCCriteria:
    """Sample, estimate and evaluate criteria I, II, III like the spectrum-analyser chain."""
    seed = _check_seed(seed)
    resolved = optimal_gains(state, tie=tie_gains) if isinstance(gains, str) and gains == "auto" else resolve_gains(gains)
    combos = {}
    for crit in CRITERIA:
        for t in crit.terms:
            combos[t.combo_id] = t.combination(resolved[crit.id][t.slot])
    batches = sample_combinations(state, combos, n, seed, workers=workers)

    estimates, records = {}, []
    for cid, batch in batches.items():
        est = estimate(batch, snl_of_combination(combos[cid], state.convention))
        estimates[cid] = est
        unc = 10.0 / math.log(10.0) * est.standard_error / est.variance if est.variance > 0 else 0.0
        records.append(MeasurementRecord(cid, est.db_below_snl, unc))
    results = criteria_from_measurements(records, resolved, state.convention)

    lhs_se = {}
    for crit in CRITERIA:
        a, b = (batches[t.combo_id].values for t in crit.terms)
        c = np.cov(a, b)
        # Var(s1^2 + s2^2) = 2/(n-1) (s1^4 + s2^4 + 2 s12^2) for Gaussian data
        lhs_se[crit.id] = math.sqrt(2.0 / (n - 1) * (c[0, 0] ** 2 + c[1, 1] ** 2 + 2 * c[0, 1] ** 2))
    return MCCriteria(results, estimates, lhs_se, resolved, int(n), seed)
