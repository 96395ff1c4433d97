"""Acceptance gate: one pass/fail line per criterion, printed in the terminal summary."""

import math
import time

import numpy as np
import pytest

import oracles
from ttpc.circuit import CircuitParams, build_ttpc, db_to_r, epr_pair, epr_variances, nullifier_variances, nullifiers
from ttpc.criteria import (
    COMBO_IDS,
    CRITERIA,
    TERMS,
    MeasurementRecord,
    audit_eq6,
    criteria_from_measurements,
    db_below,
    evaluate_criteria,
    optimal_gains_exact,
    round_half_away,
    snl_of_combination,
)
from ttpc.experiment.dataset import load_paper_dataset
from ttpc.experiment.fit import fit_measurements, predicted_db
from ttpc.gaussian import combination_variance
from ttpc.homodyne import mc_criteria


def check(log, n, ok, msg):
    log.append(f"[{'PASS' if ok else 'FAIL'}] {n}: {msg}")
    assert ok, msg


def test_c01_epr_correlation(acceptance_log):
    xs, yd = epr_variances(epr_pair(0.30))
    exact = 0.5 * math.exp(-0.6)
    r = db_to_r(2.6)
    xs26, _ = epr_variances(epr_pair(r))
    db = db_below(xs26, 0.5)
    ok = (abs(xs - exact) < 1e-9 and abs(yd - exact) < 1e-9
          and round_half_away(xs, 6) == 0.274406 and round_half_away(yd, 6) == 0.274406
          and abs(db - 2.6) < 1e-9)
    check(acceptance_log, 1, ok,
          f"EPR Var(X1+X2)={xs:.10f}, Var(Y1-Y2)={yd:.10f} at r=0.30 (6 d.p. 0.274406); "
          f"dB at 2.6 dB input = {db:.12f}")


def test_c02_nullifiers(acceptance_log):
    vac = [snl_of_combination(c) for c in nullifiers()]
    worst = 0.0
    for r in (0.0, 0.3, 1.0, 3.0):
        got = nullifier_variances(build_ttpc(CircuitParams(r)))
        for v, v_vac in zip(got, vac):
            worst = max(worst, abs(v - math.exp(-2 * r) * v_vac) / (math.exp(-2 * r) * v_vac))
    at3 = max(v / v_vac for v, v_vac in zip(nullifier_variances(build_ttpc(CircuitParams(3.0))), vac))
    check(acceptance_log, 2, worst < 1e-10 and at3 < 2.5e-3,
          f"nullifiers max rel. error {worst:.1e} vs e^-2r; at r=3 ratio to vacuum {at3:.3e}")


def test_c03_optimal_gains(acceptance_log):
    rs = np.random.default_rng(20240601).uniform(0.0, 2.0, 50)
    worst = 0.0
    for r in rs:
        state = build_ttpc(CircuitParams(r))
        want = (math.exp(4 * r) - 1) / (math.exp(4 * r) + 1)
        for crit in CRITERIA:
            for g in optimal_gains_exact(state, crit).values():
                worst = max(worst, abs(g - want))
    check(acceptance_log, 3, worst < 1e-10, f"optimal gains vs (e^4r-1)/(e^4r+1) over 50 r: max |diff| {worst:.1e}")


def test_c04_measured_reconstruction(acceptance_log):
    ds = load_paper_dataset()
    res = {r.id: r for r in criteria_from_measurements(ds.records, ds.gain)}
    oracle = oracles.recipe_lhs({r.combo_id: r.db_below_snl for r in ds.records}, ds.gain)
    raw_ok = all(abs(res[c].lhs - oracle[c]) <= 0.005 for c in oracle)
    rounded = [round_half_away(res[c].lhs, 2) for c in ("I", "II", "III")]
    ok = raw_ok and rounded == [1.11, 0.94, 0.97] and all(r.satisfied for r in res.values())
    check(acceptance_log, 4, ok,
          "reconstructed I, II, III = " + ", ".join(f"{res[c].lhs:.4f}" for c in ("I", "II", "III"))
          + f" -> {rounded}")


def test_c05_lossless_theory_point(acceptance_log):
    res = {r.id: r for r in evaluate_criteria(build_ttpc(CircuitParams(0.30)), "auto")}
    want = {"I": 0.970591, "II": 0.843551, "III": 0.843551}
    errs = {c: abs(res[c].lhs - want[c]) for c in want}
    ok = all(e <= 1e-6 for e in errs.values()) and all(r.satisfied for r in res.values())
    check(acceptance_log, 5, ok,
          "r=0.30 auto gains: " + ", ".join(f"{c}={res[c].lhs:.7f} (target {want[c]}, |diff| {errs[c]:.1e})"
                                            for c in want)
          + f"; verdicts {[res[c].satisfied for c in want]}")


def test_c05_oracle_value(acceptance_log):
    # companion check against the independent oracle: brute-force gain search on hand-written relations
    res = {r.id: r.lhs for r in evaluate_criteria(build_ttpc(CircuitParams(0.30)), "auto")}
    for cid, (a, b) in oracles.CRITERION_TERMS.items():
        bf = sum(oracles.brute_force_min(lambda g, t=t: oracles.variance(oracles.TERM_TEMPLATES[t](g), 0.30))[1]
                 for t in (a, b))
        assert res[cid] == pytest.approx(bf, rel=1e-10)


def test_c06_closed_form_audit(acceptance_log):
    lines = {a.line: a for a in audit_eq6(r_grid=(0.0, 0.3, 0.6, 1.0), g_grid=(0.0, 0.41, 0.537, 1.0))}
    worst = max(lines[k].max_rel_deviation for k in range(2, 7))
    ok = (worst < 1e-12 and all(lines[k].status == "CONFIRMED" for k in range(2, 7))
          and lines[1].status == "DISCREPANT" and lines[1].gap_model_max_rel_error < 1e-10)
    check(acceptance_log, 6, ok,
          f"closed forms: lines 2-6 max rel. dev. {worst:.1e}; line 1 DISCREPANT, "
          f"gap = 1.5 e^-2r to rel. {lines[1].gap_model_max_rel_error:.1e}")


def test_c07_monte_carlo(acceptance_log):
    state = build_ttpc(CircuitParams(0.30))
    t0 = time.perf_counter()
    a = mc_criteria(state, 0.41, n=1_000_000, seed=2024)
    elapsed = time.perf_counter() - t0
    b = mc_criteria(state, 0.41, n=1_000_000, seed=2024)
    devs = []
    for cid in COMBO_IDS:
        exact = combination_variance(state, TERMS[cid].combination(0.41))
        e = a.estimates[cid]
        devs.append(abs(e.variance - exact) / e.standard_error)
    same = all(a.estimates[c] == b.estimates[c] for c in COMBO_IDS) and \
        [r.lhs for r in a.results] == [r.lhs for r in b.results]
    ok = max(devs) < 4 and elapsed < 10 and same
    check(acceptance_log, 7, ok,
          f"MC n=1e6: max deviation {max(devs):.2f} SE, {elapsed:.2f} s, bit-identical rerun {same}")


def test_c08_loss_interpolation(acceptance_log):
    pure = build_ttpc(CircuitParams(0.30))
    combos = [TERMS[c].combination(0.41) for c in COMBO_IDS] + list(nullifiers())
    worst = 0.0
    for eta in (0.0, 0.25, 0.5, 0.75, 1.0):
        lossy = build_ttpc(CircuitParams.uniform_loss(0.30, eta))
        for c in combos:
            want = eta * combination_variance(pure, c) + (1 - eta) * snl_of_combination(c)
            worst = max(worst, abs(combination_variance(lossy, c) - want) / want)
    check(acceptance_log, 8, worst < 1e-10, f"uniform loss interpolation: max rel. error {worst:.1e}")


def test_c09_fit_round_trip(acceptance_log):
    db, _ = predicted_db(0.30, 0.8)
    res = fit_measurements([MeasurementRecord(c, v) for c, v in zip(COMBO_IDS, db)])
    ok = abs(res.r - 0.30) <= 0.01 and abs(res.eta - 0.8) <= 0.01
    check(acceptance_log, 9, ok, f"fit recovered r={res.r:.6f}, eta={res.eta:.6f} from (0.30, 0.8)")


def test_c10_excluded(acceptance_log):
    acceptance_log.append("[EXCLUDED] 10: squeezed-light generation hardware and the reported "
                          "+/-0.01 error bars are out of scope; covered by the property suites")
    pytest.skip("excluded: not reproducible at desk scale")
