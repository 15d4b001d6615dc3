"""q-Pochhammer, q-Gamma and q-digamma series."""
import cmath
import math

import numpy as np
import pytest

from qtasep.qfun import (QParams, SeriesTolerance, qpoch_finite, qpoch_inf, log_qpoch_inf, log_abs_qpoch_inf,
						 qgamma, qdigamma, qdigamma_prime, qdigamma_second, digamma_series)
from qtasep.utils.errors import DomainError, NonConvergence

Q_GRID = (0.3, 0.6, 0.9)
THETA_GRID = (0.25, 0.5, 1.0, 2.0, 4.0)


def fd4(fn, x, h):
	"""Fourth-order central first derivative."""
	return (-fn(x + 2 * h) + 8 * fn(x + h) - 8 * fn(x - h) + fn(x - 2 * h)) / (12 * h)


def direct_digamma(theta, q, n=10 ** 4):
	lq = math.log(q)
	return -math.log1p(-q) + lq * math.fsum(q ** (theta + k) / (1 - q ** (theta + k)) for k in range(n))


class TestQParams:
	"""Domain of q."""

	@pytest.mark.parametrize('q', [0.0, 1.0, -0.1, 1.5, 0.9995])
	def test_rejects(self, q):
		with pytest.raises(DomainError):
			QParams(q)

	def test_log_q(self):
		assert QParams(0.5).log_q == math.log(0.5)

	def test_tolerance_validation(self):
		with pytest.raises(DomainError):
			SeriesTolerance(rel_tol=0)
		with pytest.raises(DomainError):
			SeriesTolerance(max_terms=0)

	def test_term_budget(self):
		with pytest.raises(NonConvergence):
			qpoch_inf(0.5, 0.99, SeriesTolerance(max_terms=10))


class TestPochhammer:
	"""Finite and infinite q-Pochhammer symbols."""

	def test_empty_product(self):
		assert qpoch_finite(0.7, 0.5, 0) == 1

	def test_vanishing_factor(self):
		assert qpoch_finite(1.0, 0.5, 3) == 0

	def test_two_factors(self):
		assert abs(qpoch_finite(0.5, 0.5, 2) - 0.375) < 1e-15

	def test_complex_finite(self):
		z = 0.3 + 0.2j
		assert abs(qpoch_finite(z, 0.5, 2) - (1 - z) * (1 - 0.5 * z)) < 1e-15

	def test_negative_n(self):
		with pytest.raises(DomainError):
			qpoch_finite(0.5, 0.5, -1)

	def test_inf_at_zero(self):
		assert qpoch_inf(0.0, 0.5) == 1

	def test_inf_vs_long_product(self):
		brute = np.prod([1 - 0.5 * 0.5 ** k for k in range(200)])
		assert abs(qpoch_inf(0.5, 0.5) - brute) < 1e-14

	def test_inf_near_one(self):
		brute = np.prod([1 - 0.9 * 0.9 ** k for k in range(2000)])
		value = qpoch_inf(0.9, 0.9)
		assert value > 0
		assert abs(value - brute) < 1e-12 * abs(brute)

	def test_inf_guard(self):
		with pytest.raises(DomainError):
			qpoch_inf(10.0, 0.5)

	def test_tail_correction_is_tiny(self):
		a = qpoch_inf(0.5, 0.6)
		b = qpoch_inf(0.5, 0.6, tail_correction=True)
		assert abs(a - b) < 1e-14


class TestLogPochhammer:
	"""Principal-branch logarithm of (z;q)_inf."""

	def test_zero(self):
		assert log_qpoch_inf(0.0, 0.5) == 0

	def test_complex_consistency(self):
		z = 0.3 + 0.1j
		assert abs(cmath.exp(log_qpoch_inf(z, 0.6)) - qpoch_inf(z, 0.6)) < 1e-12

	def test_near_unit_circle(self):
		z = 0.99 * cmath.exp(1j * math.pi / 4)
		value = log_qpoch_inf(z, 0.6)
		oracle = sum(cmath.log(1 - z * 0.6 ** k) for k in range(200))
		assert abs(value - oracle) < 1e-12
		assert abs(value.imag) < math.pi / 2 * 200

	def test_domain(self):
		with pytest.raises(DomainError):
			log_qpoch_inf(1.0, 0.5)

	@pytest.mark.parametrize('q', Q_GRID)
	@pytest.mark.parametrize('theta', THETA_GRID)
	def test_exp_log_grid(self, q, theta):
		z = q ** theta
		assert abs(math.exp(log_qpoch_inf(z, q)) / qpoch_inf(z, q) - 1) < 1e-12

	def test_log_abs_matches_real_part(self):
		z = 0.4 - 0.7j
		assert abs(log_abs_qpoch_inf(z, 0.6) - log_qpoch_inf(z, 0.6).real) < 1e-13

	def test_log_abs_beyond_unit_disk(self):
		z = 2.5 + 1j
		oracle = sum(math.log(abs(1 - z * 0.5 ** k)) for k in range(200))
		assert abs(log_abs_qpoch_inf(z, 0.5) - oracle) < 1e-12


class TestQGamma:
	"""Gamma_q at integers."""

	@pytest.mark.parametrize('z,expected', [(1, 1.0), (2, 1.0), (3, 1.5)])
	def test_integers(self, z, expected):
		assert abs(qgamma(z, 0.5) - expected) < 1e-13

	def test_functional_equation(self):
		q, z = 0.6, 1.7
		assert abs(qgamma(z + 1, q) / qgamma(z, q) - (1 - q ** z) / (1 - q)) < 1e-12

	def test_domain(self):
		with pytest.raises(DomainError):
			qgamma(0, 0.5)


class TestQDigamma:
	"""Psi_q and its derivatives."""

	def test_large_theta(self):
		assert abs(qdigamma(50, 0.5) - math.log(2)) < 1e-12

	@pytest.mark.parametrize('q', Q_GRID)
	@pytest.mark.parametrize('theta', THETA_GRID)
	def test_telescoping(self, q, theta):
		lhs = qdigamma(theta + 1, q) - qdigamma(theta, q)
		assert abs(lhs + math.log(q) * q ** theta / (1 - q ** theta)) < 1e-12

	def test_long_summation(self):
		assert abs(qdigamma(1, 0.6) - direct_digamma(1, 0.6)) < 1e-13

	def test_increasing(self):
		values = [qdigamma(t, 0.6) for t in np.linspace(0.1, 5, 50)]
		assert np.all(np.diff(values) > 0)

	def test_prime_tail(self):
		assert 0 <= qdigamma_prime(60, 0.5) <= 1e-15

	def test_prime_positive(self):
		assert qdigamma_prime(0.1, 0.9) > 0

	@pytest.mark.parametrize('q', Q_GRID)
	@pytest.mark.parametrize('theta', THETA_GRID)
	def test_prime_vs_finite_difference(self, q, theta):
		h = 1e-3 * theta
		fd = fd4(lambda t: qdigamma(t, q), theta, h)
		assert abs(qdigamma_prime(theta, q) - fd) < 1e-7 * abs(fd)

	@pytest.mark.parametrize('q', Q_GRID)
	@pytest.mark.parametrize('theta', THETA_GRID)
	def test_second_vs_finite_difference(self, q, theta):
		h = 1e-3 * theta
		fd = fd4(lambda t: qdigamma_prime(t, q), theta, h)
		assert abs(qdigamma_second(theta, q) - fd) < 1e-7 * abs(fd)

	def test_second_sign_and_tail(self):
		assert qdigamma_second(1, 0.6) < 0
		assert abs(qdigamma_second(60, 0.5)) < 1e-15

	def test_limits(self):
		assert abs(qdigamma(60, 0.5) + math.log1p(-0.5)) < 1e-14
		assert abs(qdigamma_prime(60, 0.5)) < 1e-14

	def test_complex_argument(self):
		z = 1.0 + 0.3j
		assert isinstance(digamma_series(z, 0.6), complex)
		assert abs(digamma_series(z.conjugate(), 0.6) - digamma_series(z, 0.6).conjugate()) < 1e-14

	@pytest.mark.parametrize('bad', [0, -1.0, 1j])
	def test_domain(self, bad):
		with pytest.raises(DomainError):
			qdigamma(bad, 0.6)

	def test_order_domain(self):
		with pytest.raises(DomainError):
			digamma_series(1.0, 0.6, order=3)
