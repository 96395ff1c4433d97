"""
Checking closed-form variances
==============================

Closed forms for the six variances (vacuum variance 1) compared with
the covariance-matrix result.
"""

import math

from ttpc.criteria import audit_eq6, line1_gap, paper_eq6_variance

for a in audit_eq6():
    print(f"line {a.line} ({a.combo_id}): {a.status}  max rel. dev. {a.max_rel_deviation:.2e}")

# line 1 is short by a gain-independent 1.5 exp(-2r)
r, g = 0.3, math.tanh(0.6)
print("printed line 1:", paper_eq6_variance(1, r, g), " missing:", line1_gap(r))
