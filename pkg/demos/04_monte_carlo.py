"""
Monte Carlo homodyne records
============================

Draw joint quadrature samples, combine them with the gains, and
estimate the variances the way a spectrum analyser would.
"""

import time

from ttpc import CircuitParams, build_ttpc, evaluate_criteria, mc_criteria

state = build_ttpc(CircuitParams.uniform_loss(0.3, 0.9))
exact = {r.id: r.lhs for r in evaluate_criteria(state, 0.41)}

t0 = time.perf_counter()
mc = mc_criteria(state, 0.41, n=1_000_000, seed=7)
print(f"1e6 samples in {time.perf_counter() - t0:.2f} s")

for cid, est in mc.estimates.items():
    print(f"{cid:>4}: {est.variance:.5f} +/- {est.standard_error:.5f}  ({est.db_below_snl:.3f} dB)")
for res in mc.results:
    se = mc.lhs_standard_error[res.id]
    print(f"{res.id:>3}: {res.lhs:.5f} +/- {se:.5f}  exact {exact[res.id]:.5f}  "
          f"({(res.lhs - exact[res.id]) / se:+.2f} SE)")

# same seed, more threads: identical numbers
again = mc_criteria(state, 0.41, n=1_000_000, seed=7, workers=4)
print("bit-identical:", [r.lhs for r in again.results] == [r.lhs for r in mc.results])
