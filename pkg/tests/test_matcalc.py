"""Tests for the Hermitian functional-calculus layer."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qexp import matcalc as mc

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]])
PLUS = 0.5 * np.array([[1.0, 1.0], [1.0, 1.0]])


def rand_psd(dim, seed, scale=1.0):
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return scale * (g @ g.conj().T) / dim


class TestEig:
    def test_identity(self):
        dec = mc.eig(np.eye(2))
        np.testing.assert_allclose(dec.eigenvalues, [1.0, 1.0])

    def test_pauli_x(self):
        dec = mc.eig(PAULI_X)
        np.testing.assert_allclose(dec.eigenvalues, [-1.0, 1.0], atol=1e-14)

    def test_diagonal_sorted_ascending(self):
        dec = mc.eig(np.diag([0.7, 0.3]))
        np.testing.assert_allclose(dec.eigenvalues, [0.3, 0.7])
        np.testing.assert_allclose(np.abs(dec.eigenvectors), [[0, 1], [1, 0]], atol=1e-14)

    def test_reconstruction_and_unitarity(self):
        a = rand_psd(5, 11)
        dec = mc.eig(a)
        np.testing.assert_allclose(dec.reconstruct(), a, atol=1e-10)
        u = dec.eigenvectors
        np.testing.assert_allclose(u.conj().T @ u, np.eye(5), atol=1e-10)

    def test_non_hermitian_rejected(self):
        with pytest.raises(mc.NonHermitian):
            mc.eig(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestMpow:
    def test_identity(self):
        np.testing.assert_allclose(mc.mpow(np.eye(3), 0.7), np.eye(3), atol=1e-14)

    def test_support_convention_positive_power(self):
        np.testing.assert_allclose(mc.mpow(np.diag([4.0, 0.0]), 0.5),
                                   np.diag([2.0, 0.0]), atol=1e-14)

    def test_pseudo_inverse_on_support(self):
        np.testing.assert_allclose(mc.mpow(np.diag([4.0, 0.0]), -1.0),
                                   np.diag([0.25, 0.0]), atol=1e-14)

    def test_negative_spectrum_rejected(self):
        with pytest.raises(mc.NegativeSpectrum):
            mc.mpow(np.diag([1.0, -0.5]), 0.5)

    @given(st.integers(0, 10_000), st.sampled_from([0.5, 2.0, -1.0, 0.3]),
           st.sampled_from([2.0, 0.5, 3.0]))
    @settings(max_examples=40, deadline=None)
    def test_power_composition(self, seed, p, q):
        a = rand_psd(3, seed)
        left = mc.mpow(mc.mpow(a, p), q)
        right = mc.mpow(a, p * q)
        np.testing.assert_allclose(left, right, atol=1e-9)


class TestMlogMexp:
    def test_mlog_identity(self):
        np.testing.assert_allclose(mc.mlog(np.eye(2)), np.zeros((2, 2)), atol=1e-14)

    def test_mlog_diag(self):
        np.testing.assert_allclose(mc.mlog(np.diag([np.e, 1.0])),
                                   np.diag([1.0, 0.0]), atol=1e-14)

    def test_mlog_support_convention(self):
        np.testing.assert_allclose(mc.mlog(np.diag([0.5, 0.0])),
                                   np.diag([np.log(0.5), 0.0]), atol=1e-14)

    def test_mexp_zero(self):
        np.testing.assert_allclose(mc.mexp(np.zeros((2, 2))), np.eye(2), atol=1e-14)

    def test_mexp_diag(self):
        np.testing.assert_allclose(mc.mexp(np.diag([1.0, 0.0])),
                                   np.diag([np.e, 1.0]), atol=1e-14)

    def test_exp_log_inverse_pair(self):
        rho = mc.random_density(3, 3, seed=5)
        np.testing.assert_allclose(mc.mexp(mc.mlog(rho)), rho, atol=1e-9)


class TestSupport:
    def test_support_proj_diag(self):
        np.testing.assert_allclose(mc.support_proj(np.diag([0.3, 0.0])),
                                   np.diag([1.0, 0.0]), atol=1e-14)

    def test_support_proj_identity(self):
        np.testing.assert_allclose(mc.support_proj(np.eye(3)), np.eye(3), atol=1e-14)

    def test_support_proj_projector_fixed_point(self):
        np.testing.assert_allclose(mc.support_proj(PLUS), PLUS, atol=1e-12)

    def test_support_proj_idempotent(self):
        p = mc.support_proj(rand_psd(4, 3))
        np.testing.assert_allclose(p @ p, p, atol=1e-10)

    def test_absolutely_continuous(self):
        assert mc.absolutely_continuous(np.diag([1.0, 0.0]), np.diag([0.5, 0.5]))
        assert not mc.absolutely_continuous(np.diag([0.5, 0.5]), np.diag([1.0, 0.0]))
        rho = mc.random_density(3, 2, seed=9)
        assert mc.absolutely_continuous(rho, rho)

    def test_supports_orthogonal(self):
        assert mc.supports_orthogonal(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))
        assert not mc.supports_orthogonal(np.diag([1.0, 0.0]), PLUS)


class TestSchatten:
    def test_trace_norm(self):
        assert mc.schatten_norm(np.diag([3.0, -4.0]), 1) == pytest.approx(7.0)

    def test_operator_norm(self):
        assert mc.schatten_norm(np.diag([3.0, -4.0]), np.inf) == pytest.approx(4.0)

    def test_identity_norm(self):
        for d, p in [(3, 2.0), (4, 1.5)]:
            assert mc.schatten_norm(np.eye(d), p) == pytest.approx(d ** (1 / p))

    def test_invalid_order(self):
        with pytest.raises(mc.InvalidOrder):
            mc.schatten_norm(np.eye(2), 0.5)

    @given(st.integers(0, 10_000), st.floats(1.2, 5.0), st.floats(1.2, 5.0),
           st.floats(0.05, 0.95))
    @settings(max_examples=40, deadline=None)
    def test_log_convexity_in_inverse_order(self, seed, p0, p1, theta):
        a = rand_psd(4, seed) - 0.5 * np.eye(4)
        p = 1.0 / ((1 - theta) / p0 + theta / p1)
        lhs = mc.schatten_norm(a, p)
        rhs = mc.schatten_norm(a, p0) ** (1 - theta) * mc.schatten_norm(a, p1) ** theta
        assert lhs <= rhs + 1e-10

    def test_trace_distance(self):
        assert mc.trace_distance(np.diag([1.0, 0.0]), np.diag([0.0, 1.0])) == pytest.approx(1.0)


class TestTensor:
    def test_identities(self):
        np.testing.assert_allclose(mc.tensor(np.eye(2), np.eye(2)), np.eye(4))

    def test_diag_embedding(self):
        out = mc.tensor(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))
        np.testing.assert_allclose(out, np.diag([0.0, 1.0, 0.0, 0.0]))

    def test_trace_multiplicative(self):
        a, b = rand_psd(2, 1), rand_psd(3, 2)
        assert np.trace(mc.tensor(a, b)) == pytest.approx(np.trace(a) * np.trace(b))


class TestPinch:
    def test_block_fixed_point(self):
        a = np.diag([1.0, 2.0, 3.0]).astype(complex)
        e = mc.PinchingMap(blocks=((0, 1), (2,)))
        a[0, 1] = a[1, 0] = 0.5
        np.testing.assert_allclose(mc.pinch(e, a), a)

    def test_block_diagonal_restriction(self):
        e = mc.PinchingMap(blocks=((0,), (1,)))
        a = np.array([[1.0, 5.0], [5.0, 2.0]])
        np.testing.assert_allclose(mc.pinch(e, a), np.diag([1.0, 2.0]))

    def test_idempotence(self):
        e = mc.PinchingMap(blocks=((0, 2), (1, 3)))
        a = rand_psd(4, 7)
        once = mc.pinch(e, a)
        np.testing.assert_allclose(mc.pinch(e, once), once, atol=1e-14)

    def test_factor_form(self):
        e = mc.PinchingMap(factors=(2, 2))
        a = rand_psd(4, 8)
        out = mc.pinch(e, a)
        assert np.trace(out) == pytest.approx(np.trace(a).real)
        np.testing.assert_allclose(mc.pinch(e, out), out, atol=1e-12)

    def test_trace_and_positivity_preserved(self):
        e = mc.PinchingMap(blocks=((0, 1), (2, 3)))
        a = rand_psd(4, 13)
        out = mc.pinch(e, a)
        assert np.trace(out) == pytest.approx(np.trace(a).real, abs=1e-10)
        assert np.linalg.eigvalsh(out)[0] >= -1e-12

    def test_dimension_mismatch(self):
        e = mc.PinchingMap(factors=(2, 3))
        with pytest.raises(mc.DimensionMismatch):
            mc.pinch(e, np.eye(4))

    def test_bad_partition_rejected(self):
        with pytest.raises(mc.DimensionMismatch):
            mc.PinchingMap(blocks=((0, 1), (1, 2)))


class TestRandom:
    def test_pure_state(self):
        rho = mc.random_density(2, 1, seed=3)
        rho = mc.check_density(rho)
        w = np.linalg.eigvalsh(rho)
        np.testing.assert_allclose(w, [0.0, 1.0], atol=1e-12)

    def test_deterministic(self):
        a = mc.random_density(3, 2, seed=42)
        b = mc.random_density(3, 2, seed=42)
        np.testing.assert_array_equal(a, b)
        np.testing.assert_array_equal(mc.random_prior(4, 7), mc.random_prior(4, 7))

    def test_full_rank(self):
        rho = mc.random_density(3, 3, seed=1)
        assert np.linalg.eigvalsh(rho)[0] > 0

    def test_exact_rank(self):
        rho = mc.random_density(4, 2, seed=6)
        w = np.linalg.eigvalsh(rho)
        assert np.sum(w > 1e-12) == 2
        assert np.all(np.abs(w[w <= 1e-12]) < 1e-14)

    def test_invalid_rank(self):
        with pytest.raises(mc.InvalidRank):
            mc.random_density(2, 3, seed=0)
        with pytest.raises(mc.InvalidRank):
            mc.random_density(2, 0, seed=0)

    def test_prior_valid(self):
        p = mc.random_prior(5, seed=2)
        assert p.sum() == pytest.approx(1.0, abs=1e-12)
        assert np.all(p >= 0)


class TestJson:
    def test_round_trip(self):
        a = rand_psd(3, 21) - 0.2 * np.eye(3)
        back = mc.matrix_from_json(mc.matrix_to_json(a))
        np.testing.assert_allclose(back, a, atol=1e-15)

    def test_malformed(self):
        with pytest.raises(mc.DimensionMismatch):
            mc.matrix_from_json({"dim": 2, "re": [[1.0]], "im": [[0.0]]})
        with pytest.raises(mc.DimensionMismatch):
            mc.matrix_from_json({"re": [[1.0]]})


@given(st.integers(0, 10_000), st.integers(2, 4), st.floats(0.1, 1.0))
@settings(max_examples=40, deadline=None)
def test_trace_power_subadditivity(seed, m, r):
    """Tr[(sum A_i)^r] <= sum Tr[A_i^r] for PSD A_i and r in [0, 1]."""
    mats = [rand_psd(3, seed + i) for i in range(m)]
    total = sum(mats)
    lhs = np.trace(mc.mpow(total, r)).real
    rhs = sum(np.trace(mc.mpow(a, r)).real for a in mats)
    assert lhs <= rhs + 1e-10
