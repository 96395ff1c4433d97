"""Simulation and verification of four-mode continuous-variable entangled states
with total three-party correlation (TTPC)."""

from .circuit import CircuitParams, build_ttpc, db_to_r, epr_pair, epr_variances, nullifier_variances, nullifiers
from .criteria import (
    CRITERIA,
    COMBO_IDS,
    CriterionResult,
    MeasurementRecord,
    audit_eq6,
    criteria_from_measurements,
    evaluate_criteria,
    optimal_gain_formula,
    optimal_gains,
    optimal_gains_exact,
    paper_eq6_variance,
    snl_of_combination,
    variance_from_db,
)
from .errors import ConventionMismatch, InvalidArgument, NumericalFailure, SingularInput
from .gaussian import (
    Convention,
    GaussianState,
    QuadCombination,
    SymplecticOp,
    apply_symplectic,
    beam_splitter,
    combination_variance,
    loss_channel,
    rescale_convention,
    squeeze_deamp_pair,
    vacuum_state,
    validate,
)
from .homodyne import estimate, mc_criteria, sample_combinations

__version__ = "0.1.0"
