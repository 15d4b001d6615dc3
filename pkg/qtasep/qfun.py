"""q-series special functions: q-Pochhammer symbols, q-Gamma, and the q-digamma
function with its first two derivatives.

All functions are pure and accept either a :class:`QParams` or a bare float for ``q``."""
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .utils.errors import DomainError, NonConvergence
from .utils.types import ComplexLike, RealLike

Q_MAX = 0.999
"""Largest q for which the default term budget is guaranteed to reach tolerance"""


@dataclass(frozen=True)
class QParams:
	"""The repulsion parameter q, strictly inside (0, 1) and at most :data:`Q_MAX`."""
	q: float

	def __post_init__(self):
		q = float(self.q)
		if not 0.0 < q < 1.0:
			raise DomainError(f"q must lie strictly inside (0, 1), got {q}")
		if q > Q_MAX:
			raise DomainError(f"q={q} exceeds q_max={Q_MAX}; series truncation is not guaranteed there")
		object.__setattr__(self, 'q', q)

	@property
	def log_q(self) -> float:
		return math.log(self.q)


@dataclass(frozen=True)
class SeriesTolerance:
	"""Truncation control for the infinite series and products."""
	rel_tol: float = 1e-15
	max_terms: int = 10 ** 6

	def __post_init__(self):
		if not self.rel_tol > 0:
			raise DomainError(f"rel_tol must be positive, got {self.rel_tol}")
		if self.max_terms < 1:
			raise DomainError(f"max_terms must be at least 1, got {self.max_terms}")


DEFAULT_TOL = SeriesTolerance()

QLike = Union[QParams, RealLike]


def as_qparams(q: QLike) -> QParams:
	"""Accept a :class:`QParams` or a float."""
	return q if isinstance(q, QParams) else QParams(q)


def _n_terms(q: float, scale: float, tol: SeriesTolerance) -> int:
	"""Smallest K with scale * q^K < rel_tol (at least 1)."""
	if scale <= 0:
		return 1
	n = math.ceil(math.log(tol.rel_tol / scale) / math.log(q)) + 1
	n = max(n, 1)
	if n > tol.max_terms:
		raise NonConvergence(f"series needs {n} terms, more than max_terms={tol.max_terms}")
	return n


def qpoch_finite(z: ComplexLike, q: QLike, n: int) -> ComplexLike:
	"""Finite q-Pochhammer symbol :math:`(z;q)_n = \\prod_{j=0}^{n-1}(1 - z q^j)`.

	:param z: real or complex argument
	:param q: q parameter
	:param n: number of factors (n = 0 gives the empty product 1)"""
	q = as_qparams(q).q
	if n < 0:
		raise DomainError(f"n must be nonnegative, got {n}")

	factors = 1 - z * q ** np.arange(n)
	value = np.prod(factors) if n else 1.0
	return complex(value) if np.iscomplexobj(factors) else float(value)


def qpoch_inf(z: ComplexLike, q: QLike, tol: SeriesTolerance = DEFAULT_TOL,
			  tail_correction: bool = False) -> ComplexLike:
	"""Infinite q-Pochhammer symbol :math:`(z;q)_\\infty`, truncated once :math:`|z q^K| <` rel_tol.

	:param z: argument, |z| < 10
	:param q: q parameter
	:param tol: truncation control
	:param tail_correction: multiply by exp(-z q^K / (1-q)), the first-order estimate of the dropped factors"""
	q = as_qparams(q).q
	if abs(z) >= 10:
		raise DomainError(f"qpoch_inf requires |z| < 10, got |z|={abs(z)}")

	n = _n_terms(q, abs(z), tol)
	factors = 1 - z * q ** np.arange(n)
	value = np.prod(factors)
	if tail_correction:
		value = value * np.exp(-z * q ** n / (1 - q))

	return complex(value) if np.iscomplexobj(factors) else float(value)


def log_qpoch_inf(z: ComplexLike, q: QLike, tol: SeriesTolerance = DEFAULT_TOL) -> ComplexLike:
	"""Logarithm of :math:`(z;q)_\\infty` as the sum of principal logarithms of its factors.

	For |z| < 1 every factor has positive real part, so each term is on its principal branch.

	:param z: argument, |z| < 1
	:param q: q parameter
	:param tol: truncation control"""
	q = as_qparams(q).q
	if abs(z) >= 1:
		raise DomainError(f"log_qpoch_inf requires |z| < 1, got |z|={abs(z)}")

	n = _n_terms(q, abs(z), tol)
	terms = np.log1p(-z * q ** np.arange(n))
	value = terms[::-1].sum()  # smallest terms first
	return complex(value) if np.iscomplexobj(terms) else float(value)


def log_abs_qpoch_inf(z: ComplexLike, q: QLike, tol: SeriesTolerance = DEFAULT_TOL) -> float:
	"""Real part of the logarithm of :math:`(z;q)_\\infty`, i.e. :math:`\\sum_k \\log|1 - z q^k|`.

	Branch free, so any |z| < 10 off the zeros of the product is allowed."""
	q = as_qparams(q).q
	if abs(z) >= 10:
		raise DomainError(f"log_abs_qpoch_inf requires |z| < 10, got |z|={abs(z)}")

	n = _n_terms(q, abs(z), tol)
	factors = np.abs(1 - z * q ** np.arange(n))
	if np.any(factors == 0):
		raise DomainError(f"(z;q)_inf vanishes at z={z}")
	return float(np.log(factors)[::-1].sum())


def qgamma(z: RealLike, q: QLike, tol: SeriesTolerance = DEFAULT_TOL) -> float:
	"""q-Gamma function :math:`\\Gamma_q(z) = (1-q)^{1-z} (q;q)_\\infty / (q^z;q)_\\infty`.

	:param z: positive real argument"""
	q = as_qparams(q).q
	if not z > 0:
		raise DomainError(f"qgamma requires z > 0, got {z}")

	return (1 - q) ** (1 - z) * qpoch_inf(q, q, tol) / qpoch_inf(q ** z, q, tol)


def digamma_series(z: ComplexLike, q: QLike, order: int = 0, tol: SeriesTolerance = DEFAULT_TOL) -> ComplexLike:
	"""Series for :math:`\\Psi_q` and its first two derivatives, valid for complex z with Re z > 0.

	- order 0: :math:`-\\log(1-q) + \\log q \\sum_k q^{z+k}/(1-q^{z+k})`
	- order 1: :math:`(\\log q)^2 \\sum_k q^{z+k}/(1-q^{z+k})^2`
	- order 2: :math:`(\\log q)^3 \\sum_k q^{z+k}(1+q^{z+k})/(1-q^{z+k})^3`

	:param z: argument with positive real part
	:param order: derivative order, 0, 1 or 2"""
	qp = as_qparams(q)
	q, log_q = qp.q, qp.log_q
	if not np.real(z) > 0:
		raise DomainError(f"q-digamma series requires Re z > 0, got z={z}")
	if order not in (0, 1, 2):
		raise DomainError(f"order must be 0, 1 or 2, got {order}")

	# term k is bounded by q^k / (1-q)^3 times the k = 0 term, up to the (1 - q^z) denominators
	n = _n_terms(q, 1.0 / (1 - q) ** 3, tol)
	x = (z + np.arange(n)) * log_q
	t = np.exp(x)
	one_minus_t = -np.expm1(x)

	if order == 0:
		terms = t / one_minus_t
		value = -math.log1p(-q) + log_q * terms[::-1].sum()
	elif order == 1:
		terms = t / one_minus_t ** 2
		value = log_q ** 2 * terms[::-1].sum()
	else:
		terms = t * (1 + t) / one_minus_t ** 3
		value = log_q ** 3 * terms[::-1].sum()

	return complex(value) if np.iscomplexobj(x) else float(value)


def _check_theta(theta):
	if isinstance(theta, complex) or not theta > 0:
		raise DomainError(f"theta must be real and positive, got {theta}")


def qdigamma(theta: RealLike, q: QLike, tol: SeriesTolerance = DEFAULT_TOL) -> float:
	"""q-digamma function :math:`\\Psi_q(\\theta)`, logarithmic derivative of :func:`qgamma`."""
	_check_theta(theta)
	return digamma_series(float(theta), q, 0, tol)


def qdigamma_prime(theta: RealLike, q: QLike, tol: SeriesTolerance = DEFAULT_TOL) -> float:
	"""First derivative :math:`\\Psi_q'(\\theta)`, strictly positive."""
	_check_theta(theta)
	return digamma_series(float(theta), q, 1, tol)


def qdigamma_second(theta: RealLike, q: QLike, tol: SeriesTolerance = DEFAULT_TOL) -> float:
	"""Second derivative :math:`\\Psi_q''(\\theta)`, strictly negative."""
	_check_theta(theta)
	return digamma_series(float(theta), q, 2, tol)
