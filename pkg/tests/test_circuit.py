import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from ttpc.circuit import (
    CircuitParams,
    build_ttpc,
    db_to_r,
    epr_pair,
    epr_variances,
    nullifier_variances,
    nullifiers,
    r_to_db,
)
from ttpc.criteria import snl_of_combination
from ttpc.errors import InvalidArgument
from ttpc.gaussian import (
    apply_symplectic,
    beam_splitter,
    loss_channel,
    permute_modes,
    phase_rotation,
    squeeze_deamp_pair,
    vacuum_state,
    validate,
)


def quad_cov_oracle(r1, r2=None):
    """Covariance of (X_b1, Y_b1, ..., Y_b4) from the hand-written Heisenberg relations."""
    q = oracles.output_quadratures(r1, r2)
    rows = np.array([q[f"{p}{m}"] for m in range(1, 5) for p in "XY"])
    return 0.25 * rows @ rows.T


class TestEPR:
    def test_vacuum_inputs(self):
        assert epr_variances(epr_pair(0.0)) == (0.5, 0.5)

    def test_r_030(self):
        xs, yd = epr_variances(epr_pair(0.30))
        assert xs == pytest.approx(0.274406, abs=1e-6)
        assert yd == pytest.approx(xs, rel=1e-14)

    def test_measured_squeezing(self):
        r = db_to_r(2.6)
        xs, _ = epr_variances(epr_pair(r))
        assert r == pytest.approx(0.299336062089226, rel=1e-14)
        assert xs == pytest.approx(0.5 * 10 ** -0.26, rel=1e-13)
        assert -10 * math.log10(xs / 0.5) == pytest.approx(2.6, abs=1e-9)

    def test_db_round_trip(self):
        assert r_to_db(db_to_r(3.7)) == pytest.approx(3.7, rel=1e-15)

    def test_rejects_negative_db(self):
        with pytest.raises(InvalidArgument):
            db_to_r(-1.0)


class TestBuild:
    def test_zero_squeezing_is_vacuum(self):
        np.testing.assert_allclose(build_ttpc(CircuitParams(0.0)).cov, 0.25 * np.eye(8), atol=1e-16)

    @pytest.mark.parametrize("r1,r2", [(0.3, None), (1.1, 0.2), (0.0, 0.7)])
    def test_matches_heisenberg_oracle(self, r1, r2):
        s = build_ttpc(CircuitParams(r1, r2))
        np.testing.assert_allclose(s.cov, quad_cov_oracle(r1, r2), atol=1e-13)

    @given(st.floats(0, 2), st.floats(0, 2))
    def test_valid_state(self, r1, r2):
        assert validate(build_ttpc(CircuitParams(r1, r2))).ok

    def test_losses_applied_last(self):
        p = CircuitParams(0.5, losses=(0.9, 0.8, 0.7, 0.6))
        s = build_ttpc(CircuitParams(0.5))
        for m, eta in enumerate(p.losses):
            s = loss_channel(s, m, eta)
        np.testing.assert_allclose(build_ttpc(p).cov, s.cov, atol=1e-15)

    def test_escape_before_splitter(self):
        p = CircuitParams(0.5, escape=(0.8, 0.9))
        s = vacuum_state(4)
        s = apply_symplectic(s, squeeze_deamp_pair(0.5), [0, 1])
        s = apply_symplectic(s, squeeze_deamp_pair(0.5), [2, 3])
        for m, eta in enumerate((0.8, 0.8, 0.9, 0.9)):
            s = loss_channel(s, m, eta)
        s = apply_symplectic(s, beam_splitter(math.pi / 4, math.pi / 2), [1, 2])
        s = permute_modes(s, [0, 1, 3, 2])
        np.testing.assert_allclose(build_ttpc(p).cov, s.cov, atol=1e-15)

    @pytest.mark.parametrize("kw", [
        {"r1": -0.1}, {"r1": 0.1, "r2": float("nan")}, {"r1": 0.1, "losses": (1, 1, 1)},
        {"r1": 0.1, "losses": (1, 1, 1, 1.2)}, {"r1": 0.1, "escape": (0.5,)}, {"r1": 0.1, "bs_phase": float("inf")},
    ])
    def test_invalid_params(self, kw):
        with pytest.raises(InvalidArgument):
            CircuitParams(**kw)


class TestNullifiers:
    def test_vacuum_values(self):
        np.testing.assert_allclose(nullifier_variances(vacuum_state(4)), [1.0] * 4)
        assert [snl_of_combination(c) for c in nullifiers()] == pytest.approx([1.0] * 4)

    def test_r_030(self):
        got = nullifier_variances(build_ttpc(CircuitParams(0.30)))
        np.testing.assert_allclose(got, [0.548812] * 4, atol=1e-6)
        want = [oracles.variance(t, 0.30) for t in oracles.NULLIFIER_TEMPLATES]
        np.testing.assert_allclose(got, want, rtol=1e-13)

    def test_large_squeezing_limit(self):
        # cancellation between cosh^2 ~ e^10 terms costs about 8 digits here
        got = nullifier_variances(build_ttpc(CircuitParams(5.0)))
        np.testing.assert_allclose(got, [math.exp(-10)] * 4, rtol=1e-6)

    def test_uniform_half_loss(self):
        got = nullifier_variances(build_ttpc(CircuitParams.uniform_loss(0.30, 0.5)))
        np.testing.assert_allclose(got, [0.5 * math.exp(-0.6) + 0.5] * 4, rtol=1e-13)
        np.testing.assert_allclose(got, [0.774406] * 4, atol=1e-6)

    def test_needs_four_modes(self):
        with pytest.raises(InvalidArgument):
            nullifier_variances(vacuum_state(3))

    @given(st.floats(0, 3))
    def test_decay(self, r):
        got = nullifier_variances(build_ttpc(CircuitParams(r)))
        np.testing.assert_allclose(got, [math.exp(-2 * r)] * 4, rtol=1e-10)

    @given(st.floats(0, 3))
    def test_symmetric_equal(self, r):
        got = nullifier_variances(build_ttpc(CircuitParams(r)))
        assert max(got) - min(got) < 1e-12

    @given(st.floats(0.01, 2))
    def test_phase_lock_matters(self, r):
        got = nullifier_variances(build_ttpc(CircuitParams(r, bs_phase=0.0)))
        assert max(got) > 1.0


def test_swapped_splitter_inputs_permute_outputs():
    # feeding (a3, a2) instead of (a2, a3) at phase pi/2 yields b = i b4 and b' = -i b2
    r = 0.45
    s = vacuum_state(4)
    s = apply_symplectic(s, squeeze_deamp_pair(r), [0, 1])
    s = apply_symplectic(s, squeeze_deamp_pair(r), [2, 3])
    s = apply_symplectic(s, beam_splitter(math.pi / 4, math.pi / 2), [2, 1])
    # mode 2 now holds i*b4 and mode 1 holds -i*b2; undo the phases, then reorder
    s = apply_symplectic(s, phase_rotation(-math.pi / 2), [2])
    s = apply_symplectic(s, phase_rotation(math.pi / 2), [1])
    s = permute_modes(s, [0, 1, 3, 2])
    np.testing.assert_allclose(s.cov, build_ttpc(CircuitParams(r)).cov, atol=1e-14)
