"""Independent reference computations for the test suite.

Everything here is written out by hand from the input-output relations of
the network and shares no code with the package's covariance engine.
"""

import math

import numpy as np

# input quadratures, in order X01, Y01, X02, Y02, X03, Y03, X04, Y04
_IN = {name: np.eye(8)[i] for i, name in enumerate(
    ["X01", "Y01", "X02", "Y02", "X03", "Y03", "X04", "Y04"])}


def output_quadratures(r1, r2=None):
    """b-mode quadratures as coefficient vectors over vacuum inputs."""
    r2 = r1 if r2 is None else r2
    c1, s1 = math.cosh(r1), math.sinh(r1)
    c2, s2 = math.cosh(r2), math.sinh(r2)
    i = _IN
    xa1 = c1 * i["X01"] - s1 * i["X02"]
    ya1 = c1 * i["Y01"] + s1 * i["Y02"]
    xa2 = c1 * i["X02"] - s1 * i["X01"]
    ya2 = c1 * i["Y02"] + s1 * i["Y01"]
    xa3 = c2 * i["X03"] - s2 * i["X04"]
    ya3 = c2 * i["Y03"] + s2 * i["Y04"]
    xa4 = c2 * i["X04"] - s2 * i["X03"]
    ya4 = c2 * i["Y04"] + s2 * i["Y03"]
    h = 1 / math.sqrt(2)
    return {
        "X1": xa1, "Y1": ya1,
        "X2": h * (xa2 - ya3), "Y2": h * (ya2 + xa3),
        "X3": xa4, "Y3": ya4,
        "X4": h * (xa2 + ya3), "Y4": h * (ya2 - xa3),
    }


def variance(terms, r1, r2=None, v0=0.25):
    """Variance of ``sum(coeff * Q_b)`` with ``terms`` like ``[("X2", sqrt2), ...]``."""
    q = output_quadratures(r1, r2)
    vec = sum(coeff * q[name] for name, coeff in terms)
    return v0 * float(vec @ vec)


S2 = math.sqrt(2.0)

# the six correlation variances, as functions of the gain
TERM_TEMPLATES = {
    "I1": lambda g: [("X2", S2), ("Y3", 1.0), ("X1", g)],
    "I2": lambda g: [("Y2", 1.0), ("X3", S2), ("Y4", -g)],
    "II1": lambda g: [("X1", 1.0), ("Y3", 1.0), ("X2", S2 * g)],
    "II2": lambda g: [("Y1", 1.0), ("X3", 1.0), ("Y4", -S2 * g)],
    "III1": lambda g: [("X2", 1.0), ("X4", 1.0), ("X1", S2 * g)],
    "III2": lambda g: [("Y2", 1.0), ("Y4", -1.0), ("X3", S2 * g)],
}
CRITERION_TERMS = {"I": ("I1", "I2"), "II": ("II1", "II2"), "III": ("III1", "III2")}

NULLIFIER_TEMPLATES = [
    [("X1", S2), ("X4", 1.0), ("X2", 1.0)],
    [("Y2", S2), ("Y1", -1.0), ("X3", 1.0)],
    [("Y3", S2), ("X2", 1.0), ("X4", -1.0)],
    [("Y4", -S2), ("X3", 1.0), ("Y1", 1.0)],
]


def brute_force_min(f, lo=-2.0, hi=2.0, levels=6, points=2001):
    """Nested grid search for the minimiser of a smooth 1-D function."""
    for _ in range(levels):
        xs = np.linspace(lo, hi, points)
        vals = np.array([f(x) for x in xs])
        k = int(np.argmin(vals))
        lo, hi = xs[max(k - 2, 0)], xs[min(k + 2, points - 1)]
    return xs[k], vals[k]


def recipe_lhs(db_values, g, v0=0.25):
    """Criterion sums from six dB values, using the gain-dependent shot-noise level."""
    snl = {cid: v0 * sum(c * c for _, c in tpl(g)) for cid, tpl in TERM_TEMPLATES.items()}
    var = {cid: snl[cid] * 10 ** (-db / 10) for cid, db in db_values.items()}
    return {k: var[a] + var[b] for k, (a, b) in CRITERION_TERMS.items()}
