"""Full-inseparability criteria for the four-mode TTPC state.

Three inequalities, each a sum of two correlation variances with one
electronic gain per variance:

    I    V(sqrt2 X_b2 + Y_b3 + g_x1 X_b1) + V(Y_b2 + sqrt2 X_b3 - g_y4 Y_b4)       < sqrt2
    II   V(X_b1 + Y_b3 + sqrt2 g_x2 X_b2) + V(Y_b1 + X_b3 - sqrt2 g_y4 Y_b4)       < 1
    III  V(X_b2 + X_b4 + sqrt2 g_x1 X_b1) + V(Y_b2 - Y_b4 + sqrt2 g_x3 X_b3)       < 1

The bounds hold for a vacuum variance of 1/4 per quadrature. Verdicts are
always computed from the covariance matrix; :func:`paper_eq6_variance`
keeps the closed forms printed alongside the criteria for auditing only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable, Mapping

import numpy as np

from .circuit import SQRT2, CircuitParams, build_ttpc
from .errors import ConventionMismatch, InvalidArgument, SingularInput
from .gaussian import (
    DEFAULT_CONVENTION,
    Convention,
    GaussianState,
    QuadCombination,
    combination_variance,
    rescale_convention,
)

GAIN_SLOTS = ("g_x1", "g_x2", "g_x3", "g_y4")
CRITERION_IDS = ("I", "II", "III")
COMBO_IDS = ("I1", "I2", "II1", "II2", "III1", "III2")
PAPER_V0 = 0.25
DB_CAP = 99.0


@dataclass(frozen=True)
class TermTemplate:
    """One correlation variance of a criterion: fixed part plus ``multiplier * g * Q``."""

    combo_id: str
    fixed: tuple
    slot: str
    gain_mode: int
    gain_quad: str
    multiplier: float

    def combination(self, g: float) -> QuadCombination:
        return QuadCombination(self.fixed + ((self.gain_mode, self.gain_quad, self.multiplier * float(g)),))

    def fixed_combination(self) -> QuadCombination:
        return QuadCombination(self.fixed)

    def gain_combination(self) -> QuadCombination:
        return QuadCombination.of((self.gain_mode, self.gain_quad, self.multiplier))


@dataclass(frozen=True)
class Criterion:
    id: str
    terms: tuple
    bound: float

    @property
    def gain_slots(self) -> tuple:
        return tuple(t.slot for t in self.terms)


CRITERIA = (
    Criterion(
        "I",
        (
            TermTemplate("I1", ((1, "X", SQRT2), (2, "Y", 1.0)), "g_x1", 0, "X", 1.0),
            TermTemplate("I2", ((1, "Y", 1.0), (2, "X", SQRT2)), "g_y4", 3, "Y", -1.0),
        ),
        SQRT2,
    ),
    Criterion(
        "II",
        (
            TermTemplate("II1", ((0, "X", 1.0), (2, "Y", 1.0)), "g_x2", 1, "X", SQRT2),
            TermTemplate("II2", ((0, "Y", 1.0), (2, "X", 1.0)), "g_y4", 3, "Y", -SQRT2),
        ),
        1.0,
    ),
    Criterion(
        "III",
        (
            TermTemplate("III1", ((1, "X", 1.0), (3, "X", 1.0)), "g_x1", 0, "X", SQRT2),
            TermTemplate("III2", ((1, "Y", 1.0), (3, "Y", -1.0)), "g_x3", 2, "X", SQRT2),
        ),
        1.0,
    ),
)
CRITERIA_BY_ID = {c.id: c for c in CRITERIA}
TERMS = {t.combo_id: t for c in CRITERIA for t in c.terms}


@dataclass(frozen=True)
class CriterionResult:
    id: str
    term1_variance: float
    term2_variance: float
    lhs: float
    bound: float
    satisfied: bool
    gains_used: dict
    lhs_uncertainty: float | None = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "term1_variance": self.term1_variance,
            "term2_variance": self.term2_variance,
            "lhs": self.lhs,
            "bound": self.bound,
            "satisfied": self.satisfied,
            "gains_used": dict(self.gains_used),
            "lhs_uncertainty": self.lhs_uncertainty,
        }


@dataclass(frozen=True)
class MeasurementRecord:
    """A measured correlation variance, in dB below its shot-noise limit."""

    combo_id: str
    db_below_snl: float
    uncertainty_db: float = 0.0

    def __post_init__(self):
        if self.combo_id not in COMBO_IDS:
            raise InvalidArgument(f"unknown combination id {self.combo_id!r}; expected one of {COMBO_IDS}")
        db, unc = float(self.db_below_snl), float(self.uncertainty_db)
        if not np.isfinite(db):
            raise InvalidArgument(f"{self.combo_id}: dB value must be finite")
        if not np.isfinite(unc) or unc < 0:
            raise InvalidArgument(f"{self.combo_id}: uncertainty must be finite and >= 0")
        object.__setattr__(self, "db_below_snl", db)
        object.__setattr__(self, "uncertainty_db", unc)


def _gain_value(value, where):
    try:
        g = float(value)
    except (TypeError, ValueError):
        raise InvalidArgument(f"gain {where} must be a real number, got {value!r}") from None
    if not np.isfinite(g):
        raise InvalidArgument(f"gain {where} must be finite")
    return g


def resolve_gains(gains) -> dict:
    """Normalise a gain specification to ``{criterion_id: {slot: value}}``.

    Accepts a single number (every slot), a flat ``{slot: value}`` mapping
    shared by all criteria, or a nested ``{criterion_id: {slot: value}}``.
    """
    if isinstance(gains, Mapping) and gains and set(gains) <= set(CRITERION_IDS):
        missing = set(CRITERION_IDS) - set(gains)
        if missing:
            raise InvalidArgument(f"per-criterion gains missing {sorted(missing)}")
        out = {}
        for c in CRITERIA:
            per = gains[c.id]
            if not isinstance(per, Mapping):
                raise InvalidArgument(f"gains for criterion {c.id} must be a mapping")
            out[c.id] = {s: _gain_value(per.get(s), f"{c.id}.{s}") for s in c.gain_slots}
        return out
    if isinstance(gains, Mapping):
        unknown = set(gains) - set(GAIN_SLOTS)
        if unknown:
            raise InvalidArgument(f"unknown gain slots {sorted(unknown)}; expected {GAIN_SLOTS}")
        out = {}
        for c in CRITERIA:
            for s in c.gain_slots:
                if s not in gains:
                    raise InvalidArgument(f"criterion {c.id} needs gain {s}")
            out[c.id] = {s: _gain_value(gains[s], s) for s in c.gain_slots}
        return out
    g = _gain_value(gains, "value")
    return {c.id: {s: g for s in c.gain_slots} for c in CRITERIA}


def _check_state(state: GaussianState, rescale_bounds: bool) -> float:
    if state.n_modes != 4:
        raise InvalidArgument(f"criteria need a 4-mode state, got {state.n_modes} modes")
    if not math.isclose(state.v0, PAPER_V0, rel_tol=1e-15) and not rescale_bounds:
        raise ConventionMismatch(
            f"criterion bounds assume v0 = {PAPER_V0}; state has v0 = {state.v0}. "
            "Rescale the state or pass rescale_bounds=True."
        )
    return state.v0 / PAPER_V0


def _term_quadratic(state: GaussianState, term: TermTemplate) -> tuple[float, float, float]:
    """Coefficients of ``V(g) = a + 2 b g + c g**2``."""
    u = term.fixed_combination().vector(state.n_modes)
    w = term.gain_combination().vector(state.n_modes)
    return float(u @ state.cov @ u), float(u @ state.cov @ w), float(w @ state.cov @ w)


def _minimiser(b: float, c: float, what: str) -> float:
    if not c > 0:
        raise SingularInput(f"zero curvature when optimising {what}")
    return -b / c


def optimal_gains_exact(state: GaussianState, criterion: Criterion | str) -> dict:
    """Gains that minimise each variance of ``criterion`` on ``state``.

    Each variance is quadratic in its single gain, so the minimiser is
    ``-Cov(fixed, gain_quad) / Var(gain_quad)`` with the multiplier folded in.
    """
    if isinstance(criterion, str):
        criterion = CRITERIA_BY_ID[criterion]
    if state.n_modes != 4:
        raise InvalidArgument(f"criteria need a 4-mode state, got {state.n_modes} modes")
    gains = {}
    for term in criterion.terms:
        _, b, c = _term_quadratic(state, term)
        gains[term.slot] = _minimiser(b, c, f"{term.combo_id}/{term.slot}")
    return gains


def optimal_gains(state: GaussianState, tie: bool = False) -> dict:
    """Optimal gains for all three criteria as ``{criterion_id: {slot: g}}``.

    With ``tie=True`` each named slot takes one value shared by every
    variance it appears in (g_x1 in I and III, g_y4 in I and II), chosen
    to minimise the sum of those variances.
    """
    if not tie:
        return {c.id: optimal_gains_exact(state, c) for c in CRITERIA}
    if state.n_modes != 4:
        raise InvalidArgument(f"criteria need a 4-mode state, got {state.n_modes} modes")
    bs, cs = dict.fromkeys(GAIN_SLOTS, 0.0), dict.fromkeys(GAIN_SLOTS, 0.0)
    for term in TERMS.values():
        _, b, c = _term_quadratic(state, term)
        bs[term.slot] += b
        cs[term.slot] += c
    shared = {s: _minimiser(bs[s], cs[s], s) for s in GAIN_SLOTS}
    return resolve_gains(shared)


def evaluate_criteria(state: GaussianState, gains="auto", *, rescale_bounds: bool = False,
                      tie_gains: bool = False) -> list[CriterionResult]:
    """Evaluate criteria I, II, III on a 4-mode state in b-mode order.

    ``gains`` is ``"auto"`` (exact optimum per criterion) or anything
    :func:`resolve_gains` accepts. States in another convention are
    rejected unless ``rescale_bounds`` is set, in which case the bounds are
    scaled by ``v0 / 0.25`` together with the variances.
    """
    scale = _check_state(state, rescale_bounds)
    if isinstance(gains, str):
        if gains != "auto":
            raise InvalidArgument(f"gains must be 'auto' or numeric, got {gains!r}")
        resolved = optimal_gains(state, tie=tie_gains)
    else:
        resolved = resolve_gains(gains)
    results = []
    for crit in CRITERIA:
        g = resolved[crit.id]
        v1, v2 = (combination_variance(state, t.combination(g[t.slot])) for t in crit.terms)
        lhs = v1 + v2
        bound = float(crit.bound * scale)
        results.append(CriterionResult(crit.id, v1, v2, lhs, bound, bool(lhs < bound), dict(g)))
    return results


def optimal_gain_formula(r: float) -> float:
    """``(e^{4r} - 1) / (e^{4r} + 1)``, evaluated as ``tanh(2r)``."""
    r = float(r)
    if not np.isfinite(r) or r < 0:
        raise InvalidArgument(f"squeezing factor must be finite and >= 0, got {r!r}")
    return math.tanh(2.0 * r)


def snl_of_combination(combo: QuadCombination, convention: Convention = DEFAULT_CONVENTION) -> float:
    """Shot-noise level of a combination: ``v0 * sum(coeff**2)``."""
    return convention.v0 * combo.sum_of_squares()


def db_below(variance: float, snl: float, cap: float = DB_CAP) -> float:
    """``-10 log10(variance / snl)``, with zero variance reported as ``cap``."""
    if not snl > 0:
        raise InvalidArgument(f"shot-noise level must be positive, got {snl!r}")
    if variance <= 0:
        return cap
    return min(-10.0 * math.log10(variance / snl), cap)


def variance_from_db(combo: QuadCombination, db_below_snl: float,
                     convention: Convention = DEFAULT_CONVENTION) -> float:
    return snl_of_combination(combo, convention) * 10.0 ** (-float(db_below_snl) / 10.0)


def term_db_values(state: GaussianState, results: Iterable[CriterionResult]) -> dict:
    """Exact dB-below-SNL of the six variances behind ``results``."""
    out = {}
    for res in results:
        crit = CRITERIA_BY_ID[res.id]
        for t, v in zip(crit.terms, (res.term1_variance, res.term2_variance)):
            snl = snl_of_combination(t.combination(res.gains_used[t.slot]), state.convention)
            out[t.combo_id] = db_below(v, snl)
    return out


def _records_by_id(records) -> dict:
    by_id = {}
    for rec in records:
        if rec.combo_id in by_id:
            raise InvalidArgument(f"duplicate measurement for {rec.combo_id}")
        by_id[rec.combo_id] = rec
    missing = [c for c in COMBO_IDS if c not in by_id]
    if missing:
        raise InvalidArgument(f"missing measurements for {', '.join(missing)}")
    return by_id


def criteria_from_measurements(records: Iterable[MeasurementRecord], gains,
                               convention: Convention = DEFAULT_CONVENTION) -> list[CriterionResult]:
    """Rebuild I, II, III from six measured dB-below-SNL values.

    Each dB value becomes a variance through the gain-dependent shot-noise
    level of its combination. ``lhs_uncertainty`` propagates the dB
    uncertainties to first order, treating them as independent.
    """
    by_id = _records_by_id(records)
    resolved = resolve_gains(gains)
    scale = convention.v0 / PAPER_V0
    results = []
    for crit in CRITERIA:
        g = resolved[crit.id]
        variances, var_unc = [], 0.0
        for t in crit.terms:
            rec = by_id[t.combo_id]
            v = variance_from_db(t.combination(g[t.slot]), rec.db_below_snl, convention)
            variances.append(v)
            # dV/d(dB) = -V ln(10) / 10
            var_unc += (v * math.log(10.0) / 10.0 * rec.uncertainty_db) ** 2
        lhs = variances[0] + variances[1]
        bound = float(crit.bound * scale)
        results.append(
            CriterionResult(crit.id, variances[0], variances[1], lhs, bound, bool(lhs < bound),
                            dict(g), math.sqrt(var_unc))
        )
    return results


def round_half_away(x: float, decimals: int) -> float:
    """Round half away from zero (display rounding for comparisons with reported values)."""
    q = Decimal(1).scaleb(-decimals)
    return float(Decimal(repr(float(x))).quantize(q, rounding=ROUND_HALF_UP))


# --- closed forms printed with the criteria (normalisation v0 = 1) -------------

EQ6_LINES = {1: "I1", 2: "I2", 3: "II1", 4: "II2", 5: "III1", 6: "III2"}


def paper_eq6_variance(line: int, r: float, g: float) -> float:
    """Closed-form correlation variance as printed, for ``line`` 1..6.

    Audit use only. Line 1 is inconsistent with the network algebra; see
    :func:`audit_eq6`.
    """
    if line not in EQ6_LINES:
        raise InvalidArgument(f"line must be 1..6, got {line!r}")
    r, g = float(r), float(g)
    if not np.isfinite(r) or r < 0:
        raise InvalidArgument(f"squeezing factor must be finite and >= 0, got {r!r}")
    ep, em = math.exp(2 * r), math.exp(-2 * r)
    if line == 1:
        return 0.5 * ((g - 1) ** 2 * ep + (g + 1) ** 2 * em + em)
    if line == 2:
        return 0.5 * ((g - 1) ** 2 * ep + (g * g + 2 * g + 5) * em)
    return (g - 1) ** 2 * ep + (g + 1) ** 2 * em


def line1_gap(r: float) -> float:
    """Oracle minus printed line 1: ``1.5 exp(-2r)``, independent of the gain."""
    return 1.5 * math.exp(-2.0 * float(r))


@dataclass(frozen=True)
class AuditLine:
    line: int
    combo_id: str
    status: str
    max_rel_deviation: float
    gap_model: str | None = None
    gap_model_max_rel_error: float | None = None
    points: list = field(default_factory=list)


def audit_eq6(r_grid=(0.0, 0.3, 0.6, 1.0), g_grid=(0.0, 0.41, 0.537, 1.0),
              rtol: float = 1e-12) -> list[AuditLine]:
    """Compare the printed closed forms with the covariance oracle.

    The oracle is :func:`combination_variance` on :func:`build_ttpc`
    rescaled to ``v0 = 1``. A line is CONFIRMED when every grid point
    agrees to ``rtol``, DISCREPANT otherwise. For line 1 the gap
    ``oracle - printed`` is also checked against ``1.5 exp(-2r)``.
    """
    r_grid = [float(r) for r in r_grid]
    g_grid = [float(g) for g in g_grid]
    if not all(np.isfinite(r) and r >= 0 for r in r_grid) or not all(np.isfinite(g_grid)):
        raise InvalidArgument("audit grids must be finite with r >= 0")
    states = {r: rescale_convention(build_ttpc(CircuitParams(r)), 1.0) for r in r_grid}
    report = []
    for line, cid in EQ6_LINES.items():
        term = TERMS[cid]
        max_rel, gap_err, points = 0.0, 0.0, []
        for r in r_grid:
            for g in g_grid:
                oracle = combination_variance(states[r], term.combination(g))
                printed = paper_eq6_variance(line, r, g)
                rel = abs(printed - oracle) / oracle
                max_rel = max(max_rel, rel)
                points.append({"r": r, "g": g, "oracle": oracle, "printed": printed})
                if line == 1:
                    gap = oracle - printed
                    gap_err = max(gap_err, abs(gap - line1_gap(r)) / line1_gap(r))
        status = "CONFIRMED" if max_rel < rtol else "DISCREPANT"
        if line == 1:
            report.append(AuditLine(line, cid, status, max_rel, "1.5*exp(-2r)", gap_err, points))
        else:
            report.append(AuditLine(line, cid, status, max_rel, points=points))
    return report
