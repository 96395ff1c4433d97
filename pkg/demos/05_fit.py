"""
Fitting squeezing and loss
==========================

Grid search over (r, eta) then a bounded least-squares polish.
"""

from ttpc import COMBO_IDS, MeasurementRecord
from ttpc.experiment import fit_measurements, load_paper_dataset, predicted_db

# synthetic data first: the fit should land on the generating point
db, _ = predicted_db(0.3, 0.8)
fake = [MeasurementRecord(c, v) for c, v in zip(COMBO_IDS, db)]
res = fit_measurements(fake)
print(f"synthetic: r={res.r:.5f} eta={res.eta:.5f} rss={res.rss:.2e}")

# the bundled measurements do not sit on the uniform-loss model
res = fit_measurements(load_paper_dataset().records)
print(f"measured:  r={res.r:.4f} eta={res.eta:.4f} rss={res.rss:.4f} dB^2")
for cid, v in res.residuals.items():
    print(f"  {cid:>4}: {v:+.3f} dB")

res = fit_measurements(load_paper_dataset().records, fix_eta=1.0)
print(f"eta fixed at 1: r={res.r:.4f} rss={res.rss:.4f}")
