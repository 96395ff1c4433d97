"""Least-squares fit of squeezing and uniform loss to measured dB values.

The forward model builds the lossy four-mode state, sets every gain to its
exact optimum for that state and predicts the six dB-below-SNL values. A
coarse grid picks the starting point; ``scipy.optimize.least_squares``
refines it inside the grid box.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from ..circuit import CircuitParams, build_ttpc
from ..criteria import COMBO_IDS, TERMS, evaluate_criteria, term_db_values
from ..errors import InvalidArgument

R_GRID = np.round(np.arange(0.0, 1.0 + 1e-9, 0.01), 10)
ETA_GRID = np.round(np.arange(0.30, 1.0 + 1e-9, 0.01), 10)


@dataclass(frozen=True)
class FitResult:
    r: float
    eta: float
    residuals: dict
    rss: float
    gains: dict
    converged: bool
    warning: str | None
    grid_r: float
    grid_eta: float

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "eta": self.eta,
            "residuals_db": dict(self.residuals),
            "rss": self.rss,
            "gains": self.gains,
            "converged": self.converged,
            "warning": self.warning,
            "grid_optimum": {"r": self.grid_r, "eta": self.grid_eta},
        }


def predicted_db(r: float, eta: float) -> tuple[np.ndarray, dict]:
    """dB below SNL of the six variances at optimal gains, in ``COMBO_IDS`` order."""
    state = build_ttpc(CircuitParams.uniform_loss(r, eta))
    results = evaluate_criteria(state, "auto")
    db = term_db_values(state, results)
    gains = {res.id: dict(res.gains_used) for res in results}
    return np.array([db[c] for c in COMBO_IDS]), gains


def grid_predicted_db(r: float, etas) -> np.ndarray:
    """``predicted_db(r, eta)`` for many ``eta`` at once, shape ``(len(etas), 6)``.

    Under uniform loss the covariance is ``eta * cov + (1 - eta) * v0 * I``,
    so each variance's quadratic coefficients in its gain are affine in eta.
    """
    etas = np.asarray(etas, dtype=float)[:, None]
    state = build_ttpc(CircuitParams(r))
    v0 = state.v0
    out = []
    for cid in COMBO_IDS:
        t = TERMS[cid]
        u = t.fixed_combination().vector(4)
        w = t.gain_combination().vector(4)
        a = etas * (u @ state.cov @ u) + (1 - etas) * v0 * (u @ u)
        b = etas * (u @ state.cov @ w) + (1 - etas) * v0 * (u @ w)
        c = etas * (w @ state.cov @ w) + (1 - etas) * v0 * (w @ w)
        g = -b / c
        var = a - b * b / c
        snl = v0 * (u @ u + 2 * g * (u @ w) + g * g * (w @ w))
        out.append(-10.0 * np.log10(var / snl))
    return np.hstack(out)


def _measured(records) -> np.ndarray:
    by_id = {}
    for rec in records:
        if rec.combo_id in by_id:
            raise InvalidArgument(f"duplicate measurement for {rec.combo_id}")
        by_id[rec.combo_id] = rec.db_below_snl
    missing = [c for c in COMBO_IDS if c not in by_id]
    if missing:
        raise InvalidArgument(f"missing measurements for {', '.join(missing)}")
    return np.array([by_id[c] for c in COMBO_IDS])


def fit_measurements(records, fix_eta: float | None = None, r_grid=R_GRID, eta_grid=ETA_GRID) -> FitResult:
    """Fit ``(r, eta)`` minimising the summed squared dB residuals.

    With ``fix_eta`` the loss is held fixed and only ``r`` is fitted. If
    the refinement fails the grid optimum is returned with ``converged``
    false and a warning message.
    """
    meas = _measured(records)
    r_grid = np.asarray(r_grid, dtype=float)
    if fix_eta is not None:
        fix_eta = float(fix_eta)
        if not 0.0 < fix_eta <= 1.0:
            raise InvalidArgument(f"fixed eta must lie in (0, 1], got {fix_eta}")
        eta_grid = np.array([fix_eta])
    else:
        eta_grid = np.asarray(eta_grid, dtype=float)

    def resid(r, eta):
        return predicted_db(r, eta)[0] - meas

    best = (np.inf, None, None)
    for r in r_grid:
        costs = np.sum((grid_predicted_db(r, eta_grid) - meas) ** 2, axis=1)
        k = int(np.argmin(costs))
        if costs[k] < best[0]:
            best = (float(costs[k]), float(r), float(eta_grid[k]))
    _, r0, eta0 = best

    warning = None
    try:
        if fix_eta is None:
            sol = least_squares(lambda p: resid(p[0], p[1]), [r0, eta0],
                                bounds=([r_grid.min(), eta_grid.min()], [r_grid.max(), eta_grid.max()]),
                                xtol=1e-10, ftol=1e-12, gtol=1e-12)
            r_fit, eta_fit = (float(v) for v in sol.x)
        else:
            sol = least_squares(lambda p: resid(p[0], fix_eta), [r0],
                                bounds=([r_grid.min()], [r_grid.max()]),
                                xtol=1e-10, ftol=1e-12, gtol=1e-12)
            r_fit, eta_fit = float(sol.x[0]), fix_eta
        # refinement may slide along a flat valley; accept it if it did not get worse
        converged = bool(sol.success) and float(np.sum(resid(r_fit, eta_fit) ** 2)) <= best[0]
        if not converged:
            warning = "refinement did not improve on the grid optimum; returning grid optimum"
    except (ValueError, ArithmeticError) as exc:
        converged, warning = False, f"refinement failed ({exc}); returning grid optimum"
    if not converged:
        warnings.warn(warning, RuntimeWarning, stacklevel=2)
        r_fit, eta_fit = r0, eta0

    res, gains = predicted_db(r_fit, eta_fit)
    res = res - meas
    return FitResult(
        r=r_fit, eta=eta_fit,
        residuals=dict(zip(COMBO_IDS, res.tolist())),
        rss=float(res @ res), gains=gains, converged=converged, warning=warning,
        grid_r=r0, grid_eta=eta0,
    )
