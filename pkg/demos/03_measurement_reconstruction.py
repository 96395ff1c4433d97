"""
From measured dB values to verdicts
===================================

Six noise levels, each quoted in dB below its own shot-noise level,
are turned back into variances and summed.
"""

from ttpc.criteria import TERMS, criteria_from_measurements, round_half_away, snl_of_combination
from ttpc.experiment import load_paper_dataset

ds = load_paper_dataset()
print("dataset", ds.version, ds.sha256[:12])

# the shot-noise level depends on the gain through sum(coeff**2)
for rec in ds.records:
    combo = TERMS[rec.combo_id].combination(ds.gain)
    print(f"{rec.combo_id:>4}: {rec.db_below_snl} dB  SNL={snl_of_combination(combo):.6f}  {combo}")

for res in criteria_from_measurements(ds.records, ds.gain):
    print(f"{res.id:>3} = {res.lhs:.4f} +/- {res.lhs_uncertainty:.4f}"
          f"  -> {round_half_away(res.lhs, 2)}  (reported {ds.reported[res.id]})")

# first-order propagation of 0.1 dB gives wider error bars than the reported 0.01
