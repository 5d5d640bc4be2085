import math

import numpy as np
import pytest

from spinbath.oracle import (BRANCH_DOWNUP, BRANCH_UPDOWN, KrausPair,
                             SmallBathSpec, conditional_propagator,
                             entanglement_witness, exact_covariance,
                             exact_echo_probability, iem_kraus,
                             intermediate_channel, maximally_mixed,
                             validate_density_matrix, zeeman_propagator)


def one_spin(lam=0.1, a=0.4, w=1.0):
    return SmallBathSpec(n_left=1, n_right=0, couplings=(a,), zeemans=(w,),
                         transverse_ratio=lam)


def symmetric_spec(lam=0.1):
    return SmallBathSpec(n_left=2, n_right=2, couplings=(0.3, 0.5, 0.3, 0.5),
                         zeemans=(1.0, 1.4, 1.0, 1.4), transverse_ratio=lam)


def random_rho(dim, seed):
    """Random full-rank density matrix (Ginibre ensemble)."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


class TestSpecValidation:
    def test_dimension_cap(self):
        with pytest.raises(ValueError):
            SmallBathSpec(n_left=7, n_right=6, couplings=(0.1,) * 13,
                          zeemans=(1.0,) * 13)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            SmallBathSpec(n_left=1, n_right=1, couplings=(0.1,),
                          zeemans=(1.0, 1.0))

    def test_negative_counts(self):
        with pytest.raises(ValueError):
            SmallBathSpec(n_left=-1, n_right=2, couplings=(0.1,),
                          zeemans=(1.0,))

    def test_dims(self):
        spec = symmetric_spec()
        assert spec.n_spins == 4
        assert spec.dim == 16


class TestConditionalPropagator:
    def test_single_spin_closed_form(self):
        # one left spin: H_q = (w + s*a) I_z + s*a*lam I_x, a rotation about
        # the axis n = (s*a*lam, 0, w + s*a) by angle t*|n|
        lam, a, w, t = 0.13, 0.45, 1.2, 0.8
        spec = one_spin(lam, a, w)
        for branch, s in ((BRANCH_UPDOWN, 0.5), (BRANCH_DOWNUP, -0.5)):
            nx, nz = s * a * lam, w + s * a
            norm = math.hypot(nx, nz)
            half = t * norm / 2.0
            sx = np.array([[0, 1], [1, 0]])
            sz = np.array([[1, 0], [0, -1]])
            expect = (math.cos(half) * np.eye(2)
                      - 1j * math.sin(half) * (nx * sx + nz * sz) / norm)
            got = conditional_propagator(spec, branch, t)
            assert np.allclose(got, expect, atol=1e-12)

    def test_t_zero_is_identity(self):
        u = conditional_propagator(symmetric_spec(), BRANCH_UPDOWN, 0.0)
        assert np.allclose(u, np.eye(16), atol=1e-14)

    def test_unitarity(self):
        spec = symmetric_spec(lam=0.3)
        for t in (0.4, 2.0, 9.7):
            u = conditional_propagator(spec, BRANCH_UPDOWN, t)
            assert np.max(np.abs(u.conj().T @ u - np.eye(16))) < 1e-12

    def test_lambda_zero_diagonal(self):
        spec = symmetric_spec(lam=0.0)
        u = conditional_propagator(spec, BRANCH_DOWNUP, 1.3)
        assert np.max(np.abs(u - np.diag(np.diag(u)))) < 1e-14

    def test_branch_validation(self):
        with pytest.raises(ValueError):
            conditional_propagator(symmetric_spec(), "sideways", 1.0)
        with pytest.raises(ValueError):
            conditional_propagator(symmetric_spec(), BRANCH_UPDOWN, -1.0)


class TestIemKraus:
    def test_completeness(self):
        kraus = iem_kraus(symmetric_spec(lam=0.2), 4.0)
        assert kraus.completeness_defect() < 1e-10

    def test_lambda_zero_refocuses_exactly(self):
        # commuting branches: the echo cancels all conditional phase, so the
        # triplet operator vanishes identically
        kraus = iem_kraus(symmetric_spec(lam=0.0), 3.0)
        assert np.max(np.abs(kraus.m_triplet)) < 1e-12
        assert exact_echo_probability(symmetric_spec(lam=0.0), 3.0) == \
            pytest.approx(1.0, abs=1e-12)

    def test_decoupled_bath(self):
        # zero couplings: both branches evolve with H_Z alone
        spec = SmallBathSpec(n_left=1, n_right=1, couplings=(0.0, 0.0),
                             zeemans=(1.0, 1.7))
        kraus = iem_kraus(spec, 2.0)
        assert np.allclose(kraus.m_singlet, zeeman_propagator(spec, 2.0),
                           atol=1e-12)
        assert np.max(np.abs(kraus.m_triplet)) < 1e-14

    def test_tau_validation(self):
        with pytest.raises(ValueError):
            iem_kraus(symmetric_spec(), 0.0)

    def test_kraus_pair_defect_reports_violation(self):
        bad = KrausPair(m_singlet=np.eye(2), m_triplet=np.eye(2))
        assert bad.completeness_defect() == pytest.approx(1.0)


class TestIntermediateChannel:
    @pytest.mark.parametrize("mode", ["lock_singlet", "updown", "updown_pi"])
    def test_trace_preserving(self, mode):
        spec = symmetric_spec(lam=0.2)
        rho = random_rho(spec.dim, 5)
        out = intermediate_channel(spec, mode, 3.0)(rho)
        assert abs(np.trace(out).real - 1.0) < 1e-12
        validate_density_matrix(out, tol=1e-10)

    def test_pi_at_lambda_zero_equals_lock(self):
        # with commuting Knight term the mid-gap pi swap refocuses the
        # conditional phase exactly, leaving pure Zeeman evolution
        spec = symmetric_spec(lam=0.0)
        rho = random_rho(spec.dim, 7)
        out_pi = intermediate_channel(spec, "updown_pi", 5.0)(rho)
        out_lock = intermediate_channel(spec, "lock_singlet", 5.0)(rho)
        assert np.max(np.abs(out_pi - out_lock)) < 1e-12

    def test_theta_zero_equals_updown(self):
        spec = symmetric_spec(lam=0.15)
        rho = random_rho(spec.dim, 9)
        out_theta = intermediate_channel(spec, "updown_theta", 4.0,
                                         pulse_angle=0.0)(rho)
        out_ud = intermediate_channel(spec, "updown", 4.0)(rho)
        assert np.max(np.abs(out_theta - out_ud)) < 1e-12

    def test_theta_pi_equals_updown_pi(self):
        spec = symmetric_spec(lam=0.15)
        rho = random_rho(spec.dim, 11)
        a = intermediate_channel(spec, "updown_theta", 4.0,
                                 pulse_angle=math.pi)(rho)
        b = intermediate_channel(spec, "updown_pi", 4.0)(rho)
        assert np.max(np.abs(a - b)) < 1e-14

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            intermediate_channel(symmetric_spec(), "sideways", 1.0)
        with pytest.raises(ValueError):
            intermediate_channel(symmetric_spec(), "updown", -1.0)


class TestExactCovariance:
    def test_bounded(self):
        spec = symmetric_spec(lam=0.3)
        for gap in (0.5, 3.0, 8.0):
            c = exact_covariance(spec, 2.0, gap, "updown")
            assert -0.25 <= c <= 0.25

    def test_lambda_zero_vanishes(self):
        spec = symmetric_spec(lam=0.0)
        for mode in ("lock_singlet", "updown", "updown_pi"):
            assert abs(exact_covariance(spec, 2.0, 4.0, mode)) < 1e-12

    def test_backaction_ordering(self):
        # the central inequality: conditioning the bath on the qubit state
        # during the gap destroys outcome covariance, and the pi swap
        # restores it
        spec = SmallBathSpec(n_left=2, n_right=2,
                             couplings=(0.5, 0.8, 0.5, 0.8),
                             zeemans=(1.0, 1.6, 1.0, 1.6),
                             transverse_ratio=0.05)
        tau = 2.0 * math.pi
        for gap in (2.0, 5.0, 9.0, 13.0):
            c_lock = exact_covariance(spec, tau, gap, "lock_singlet")
            c_ud = exact_covariance(spec, tau, gap, "updown")
            c_pi = exact_covariance(spec, tau, gap, "updown_pi")
            assert c_lock >= c_ud - 1e-12
            assert c_pi >= c_ud - 1e-12

    def test_echo_probability_range(self):
        spec = symmetric_spec(lam=0.4)
        p = exact_echo_probability(spec, 3.0)
        assert 0.5 <= p <= 1.0


class TestDensityMatrixValidation:
    def test_accepts_mixed(self):
        validate_density_matrix(maximally_mixed(symmetric_spec()))

    def test_rejects_traceless(self):
        with pytest.raises(ValueError):
            validate_density_matrix(np.eye(4))

    def test_rejects_non_hermitian(self):
        rho = np.array([[0.5, 0.5], [-0.5, 0.5]])
        with pytest.raises(ValueError):
            validate_density_matrix(rho)

    def test_rejects_negative_eigenvalue(self):
        rho = np.diag([1.5, -0.5])
        with pytest.raises(ValueError):
            validate_density_matrix(rho)


class TestEntanglementWitness:
    def test_zero_on_maximally_mixed(self):
        spec = symmetric_spec(lam=0.3)
        assert entanglement_witness(spec, 4.0, maximally_mixed(spec)) < 1e-12

    def test_positive_after_projection(self):
        # a first IEM projection biases the bath, so the conditional
        # evolutions become distinguishable
        spec = symmetric_spec(lam=0.3)
        kraus = iem_kraus(spec, 2.0)
        rho = kraus.m_singlet @ maximally_mixed(spec) @ kraus.m_singlet.conj().T
        rho /= np.trace(rho).real
        assert entanglement_witness(spec, 4.0, rho) > 1e-6

    def test_zero_at_lambda_zero(self):
        # commuting case: conditional unitaries are diagonal phases, which
        # cancel on any diagonal state
        spec = symmetric_spec(lam=0.0)
        rho = np.diag(np.linspace(1.0, 2.0, spec.dim))
        rho /= np.trace(rho)
        assert entanglement_witness(spec, 4.0, rho) < 1e-12

    def test_validates_input(self):
        with pytest.raises(ValueError):
            entanglement_witness(symmetric_spec(), 1.0, np.eye(16))
