"""
Inseparability criteria and electronic gains
============================================

The three criteria need one gain per correlation variance. The
optimum is a one-line quadratic minimisation.
"""

import numpy as np

from ttpc import CircuitParams, build_ttpc, evaluate_criteria, optimal_gain_formula

state = build_ttpc(CircuitParams(0.3))

for res in evaluate_criteria(state, "auto"):
    print(res.id, f"{res.lhs:.6f} < {res.bound:.4f}?", res.satisfied, res.gains_used)

# lossless and symmetric: every optimal gain is tanh(2r)
print("tanh(0.6) =", optimal_gain_formula(0.3))

# scanning a single common gain shows how flat the minimum is
for g in np.linspace(0, 1, 6):
    lhs = [r.lhs for r in evaluate_criteria(state, g)]
    print(f"g={g:.1f}  I={lhs[0]:.4f}  II={lhs[1]:.4f}  III={lhs[2]:.4f}")

# uniform detection loss: II and III reach the bound at eta = 1/2
for eta in (1.0, 0.8, 0.6, 0.5, 0.4):
    res = evaluate_criteria(build_ttpc(CircuitParams.uniform_loss(0.3, eta)))
    print(f"eta={eta:.1f}", [(r.id, round(r.lhs, 4), r.satisfied) for r in res])
