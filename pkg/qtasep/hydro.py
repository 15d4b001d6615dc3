"""Hydrodynamic constants, phase classification and scalings of q-TASEP with slower particles.

Everything here is a closed-form consequence of the q-digamma series in :mod:`qtasep.qfun`."""
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import List, Sequence, Tuple, Optional

import numpy as np

from . import qfun
from .qfun import QLike, as_qparams
from .utils.errors import DomainError, ProfileError, ToleranceError
from .utils.types import RatePairs

DEFAULT_BOUNDARY_TOL = 1e-12
QGEOM_TAIL = 1e-14
"""Tail mass left out of the cached q-Geometric inverse-CDF tables"""


@dataclass(frozen=True)
class RateProfile:
	"""Finitely many perturbed jump rates; every unlisted particle has rate 1.

	:param perturbations: ``(particle_index, rate)`` pairs, indices start at 1"""
	perturbations: Tuple[Tuple[int, float], ...] = ()

	def __post_init__(self):
		pairs = tuple(sorted((int(i), float(a)) for i, a in self.perturbations))
		indices = [i for i, _ in pairs]
		if len(set(indices)) != len(indices):
			raise ProfileError(f"duplicate particle indices in {pairs}")
		for i, a in pairs:
			if i < 1:
				raise ProfileError(f"particle indices start at 1, got {i}")
			if not a > 0 or not math.isfinite(a):
				raise ProfileError(f"rates must be positive and finite, got {a} for particle {i}")
		object.__setattr__(self, 'perturbations', pairs)

	@classmethod
	def from_pairs(cls, pairs: RatePairs) -> 'RateProfile':
		return cls(tuple(pairs))

	@classmethod
	def slow_block(cls, k: int, rate: float, first: int = 1) -> 'RateProfile':
		"""k consecutive particles ``first .. first+k-1`` all with the same rate."""
		return cls(tuple((first + j, rate) for j in range(k)))

	@classmethod
	def parse(cls, text: str) -> 'RateProfile':
		"""Parse ``"1:0.4,3:0.5"`` style strings (empty string gives no perturbation)."""
		pairs = []
		for item in filter(None, (s.strip() for s in text.split(','))):
			try:
				i, a = item.split(':')
				pairs.append((int(i), float(a)))
			except ValueError:
				raise ProfileError(f"cannot parse rate perturbation '{item}', expected index:rate")
		return cls(tuple(pairs))

	@property
	def alpha(self) -> float:
		"""Rate of the slowest particle (1 when no particle is slower than 1)"""
		return min([1.0] + [a for _, a in self.perturbations])

	@property
	def k(self) -> int:
		"""Number of particles with rate alpha (0 when alpha = 1)"""
		alpha = self.alpha
		if alpha == 1.0:
			return 0
		return sum(a == alpha for _, a in self.perturbations)

	@property
	def slow_rates(self) -> List[float]:
		"""Rates of the slower particles (rate < 1), in particle order"""
		return [a for _, a in self.perturbations if a < 1]

	@property
	def max_index(self) -> int:
		return max([0] + [i for i, _ in self.perturbations])

	def A(self, q: QLike) -> float:
		"""log_q(alpha), nonnegative"""
		return math.log(self.alpha) / as_qparams(q).log_q

	def rates(self, M: int) -> np.ndarray:
		"""Rate array of the first M particles (0-based)."""
		if self.max_index > M:
			raise ProfileError(f"perturbed particle {self.max_index} does not exist in a system of {M} particles")
		a = np.ones(M)
		for i, rate in self.perturbations:
			a[i - 1] = rate
		return a

	def to_list(self) -> List[List[float]]:
		return [[i, a] for i, a in self.perturbations]

	def __str__(self):
		return ','.join(f"{i}:{a!r}" for i, a in self.perturbations)


class Phase(Enum):
	"""Fluctuation regimes of X_N."""
	GUE = 'GUE'
	CRITICAL = 'Critical'
	GAUSSIAN = 'Gaussian'

	def __str__(self):
		return self.value


def _check_theta(theta):
	if not theta > 0:
		raise DomainError(f"theta must be positive, got {theta}")


def _check_alpha(alpha):
	if not 0 < alpha <= 1:
		raise DomainError(f"alpha must lie in (0, 1], got {alpha}")


def kappa(q: QLike, theta: float) -> float:
	"""Time scale :math:`\\kappa = \\Psi_q'(\\theta) / ((\\log q)^2 q^\\theta)`."""
	qp = as_qparams(q)
	_check_theta(theta)
	return qfun.qdigamma_prime(theta, qp) / (qp.log_q ** 2 * qp.q ** theta)


def f(q: QLike, theta: float) -> float:
	"""Law-of-large-numbers position :math:`f` (X_N(kappa N)/N -> f - 1 in the GUE phase)."""
	qp = as_qparams(q)
	_check_theta(theta)
	lq = qp.log_q
	return (qfun.qdigamma_prime(theta, qp) / lq ** 2 - qfun.qdigamma(theta, qp) / lq
			- math.log1p(-qp.q) / lq)


def chi(q: QLike, theta: float) -> float:
	"""Fluctuation constant :math:`\\chi = (\\Psi_q'(\\theta)\\log q - \\Psi_q''(\\theta))/2`."""
	qp = as_qparams(q)
	_check_theta(theta)
	return (qfun.qdigamma_prime(theta, qp) * qp.log_q - qfun.qdigamma_second(theta, qp)) / 2


def g(q: QLike, theta: float, alpha: float) -> float:
	"""Shock-phase position :math:`g`, with :math:`A = \\log_q \\alpha`. -inf at alpha = 1."""
	qp = as_qparams(q)
	_check_theta(theta)
	_check_alpha(alpha)
	if alpha == 1:
		return -math.inf
	lq = qp.log_q
	A = math.log(alpha) / lq
	return (qfun.qdigamma_prime(theta, qp) / lq ** 2 * alpha / qp.q ** theta
			- qfun.qdigamma(A, qp) / lq - math.log1p(-qp.q) / lq)


def sigma(q: QLike, theta: float, alpha: float) -> float:
	"""Shock-phase variance :math:`\\sigma = \\Psi_q'(\\theta)\\alpha/q^\\theta - \\Psi_q'(A)`. -inf at alpha = 1."""
	qp = as_qparams(q)
	_check_theta(theta)
	_check_alpha(alpha)
	if alpha == 1:
		return -math.inf
	A = math.log(alpha) / qp.log_q
	return qfun.qdigamma_prime(theta, qp) * alpha / qp.q ** theta - qfun.qdigamma_prime(A, qp)


@dataclass(frozen=True)
class HydroConstants:
	kappa: float
	f: float
	chi: float
	g: float
	sigma: float

	@classmethod
	def compute(cls, q: QLike, theta: float, alpha: float = 1.0) -> 'HydroConstants':
		"""Evaluate all constants, verifying kappa > 0 and chi > 0."""
		consts = cls(kappa(q, theta), f(q, theta), chi(q, theta), g(q, theta, alpha), sigma(q, theta, alpha))
		if not consts.kappa > 0 or not consts.chi > 0:
			raise ToleranceError(f"expected kappa > 0 and chi > 0 at q={q}, theta={theta}, got {consts}")
		return consts

	def to_dict(self) -> dict:
		return {'kappa': self.kappa, 'f': self.f, 'chi': self.chi, 'g': self.g, 'sigma': self.sigma}


def classify_phase(q: QLike, theta: float, profile: RateProfile,
				   boundary_tol: float = DEFAULT_BOUNDARY_TOL) -> Phase:
	"""Compare the slowest rate alpha with q^theta.

	:param boundary_tol: relative tolerance for the critical case alpha = q^theta"""
	qp = as_qparams(q)
	_check_theta(theta)
	q_theta = qp.q ** theta
	alpha = profile.alpha
	if abs(q_theta - alpha) <= boundary_tol * max(q_theta, alpha):
		return Phase.CRITICAL
	if q_theta < alpha:
		return Phase.GUE
	return Phase.GAUSSIAN


def lln_position(q: QLike, theta: float, alpha: float) -> float:
	"""Limit of X_N(kappa N)/N: f - 1 when alpha > q^theta, otherwise g - 1."""
	qp = as_qparams(q)
	_check_theta(theta)
	_check_alpha(alpha)
	if alpha > qp.q ** theta:
		return f(qp, theta) - 1
	return g(qp, theta, alpha) - 1


@dataclass(frozen=True)
class ScalingPlan:
	"""Time, centring and fluctuation scale at which xi_N is read off X_N."""
	N: int
	c: float
	phase: Phase
	tau: float
	p: float
	fluct_scale: float
	constants: HydroConstants = field(repr=False, default=None)

	def xi_of_position(self, X):
		"""Rescaled fluctuation (X - p) / fluct_scale."""
		return (X - self.p) / self.fluct_scale

	def position_of_xi(self, xi):
		return self.p + self.fluct_scale * xi


def scaling_plan(q: QLike, theta: float, c: float, N: int, profile: RateProfile,
				 phase: Optional[Phase] = None) -> ScalingPlan:
	"""Time, centering and fluctuation scale of X_N for the phase of ``profile``.

	:param phase: force a phase (used when rates depend on N and the finite-N classification is not the one of interest)"""
	qp = as_qparams(q)
	_check_theta(theta)
	if N < 1:
		raise DomainError(f"N must be at least 1, got {N}")

	if phase is None:
		phase = classify_phase(qp, theta, profile)

	alpha = profile.alpha
	consts = HydroConstants.compute(qp, theta, alpha)
	lq = qp.log_q

	if phase in (Phase.GUE, Phase.CRITICAL):
		tau = consts.kappa * N + c * qp.q ** (-theta) * N ** (2 / 3)
		p = (consts.f - 1) * N + c * N ** (2 / 3) - c ** 2 * lq ** 3 / (4 * consts.chi) * N ** (1 / 3)
		fluct_scale = consts.chi ** (1 / 3) / lq * N ** (1 / 3)
	else:
		tau = consts.kappa * N + c * N ** 0.5 / alpha
		p = (consts.g - 1) * N + c * N ** 0.5
		fluct_scale = consts.sigma ** 0.5 / lq * N ** 0.5

	return ScalingPlan(N=N, c=c, phase=phase, tau=tau, p=p, fluct_scale=fluct_scale, constants=consts)


def critical_b(q: QLike, theta: float, c: float) -> float:
	"""BBP parameter :math:`b = c (\\log q)^2 / (2\\chi^{2/3})`."""
	qp = as_qparams(q)
	return c * qp.log_q ** 2 / (2 * chi(qp, theta) ** (2 / 3))


def bbp_vector(q: QLike, theta: float, c: float, k: int = None, b_tilde: Sequence[float] = None) -> Tuple[float, ...]:
	"""b vector of the limiting BBP law: ``(b, ..., b)`` (k times), or ``b + b_tilde_i`` for N^{-1/3} rate shifts."""
	b = critical_b(q, theta, c)
	if b_tilde is not None:
		return tuple(b + bt for bt in b_tilde)
	return (b,) * k


def full_bbp_profile(q: QLike, theta: float, N: int, b_tilde: Sequence[float]) -> RateProfile:
	"""Rates a_i = q^{theta + b_tilde_i N^{-1/3}} on particles 1..k, all others 1."""
	qp = as_qparams(q)
	return RateProfile(tuple((i + 1, qp.q ** (theta + bt * N ** (-1 / 3))) for i, bt in enumerate(b_tilde)))


@dataclass(frozen=True)
class ShapePoint:
	theta: float
	x: float
	y: float
	branch: str
	"""'curved' for (f/kappa, 1/kappa), 'straight' for (g/kappa, 1/kappa)"""


def limit_shape(q: QLike, profile: RateProfile, theta_grid: Sequence[float]) -> List[ShapePoint]:
	"""Limit shape of (1/tau)(X_N(tau)+N, N) traced by theta.

	:param theta_grid: strictly positive, sorted"""
	qp = as_qparams(q)
	grid = np.asarray(theta_grid, dtype=float)
	if np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
		raise DomainError("theta_grid must be strictly positive and strictly increasing")

	alpha = profile.alpha
	points = []
	for theta in grid:
		k_ = kappa(qp, theta)
		if alpha > qp.q ** theta:
			points.append(ShapePoint(theta, f(qp, theta) / k_, 1 / k_, 'curved'))
		else:
			points.append(ShapePoint(theta, g(qp, theta, alpha) / k_, 1 / k_, 'straight'))
	return points


def density(q: QLike, theta: float) -> float:
	"""Stationary density at the macroscopic point where the average hop rate is q^theta."""
	qp = as_qparams(q)
	_check_theta(theta)
	lq = qp.log_q
	return lq / (lq + math.log1p(-qp.q) + qfun.qdigamma(theta, qp))


def _check_r(r):
	if not 0 <= r < 1:
		raise DomainError(f"q-Geometric parameter must lie in [0, 1), got {r}")


def qgeom_pmf(r: float, q: QLike, k):
	"""q-Geometric law :math:`\\mu_r(k) = (r;q)_\\infty r^k / (q;q)_k`.

	:param k: nonnegative integer or integer array"""
	qp = as_qparams(q)
	_check_r(r)
	k_arr = np.asarray(k)
	if np.any(k_arr < 0):
		raise DomainError("gap values must be nonnegative")

	table = _qgeom_weights(r, qp.q, int(k_arr.max()) + 1)
	values = table[k_arr]
	return float(values) if np.ndim(values) == 0 else values


def _qgeom_weights(r: float, q: float, n: int) -> np.ndarray:
	"""pmf values for gaps 0..n-1, by the ratio mu(k)/mu(k-1) = r/(1-q^k)."""
	ratios = np.empty(n)
	ratios[0] = qfun.qpoch_inf(r, q)
	ratios[1:] = r / (1 - q ** np.arange(1, n))
	return np.cumprod(ratios)


@lru_cache(maxsize=64)
def _qgeom_cdf_table(r: float, q: float) -> np.ndarray:
	n = 64
	while True:
		weights = _qgeom_weights(r, q, n)
		cdf = np.cumsum(weights)
		if 1 - cdf[-1] < QGEOM_TAIL or n > 10 ** 6:
			cdf = cdf[:np.searchsorted(cdf, 1 - QGEOM_TAIL) + 1]
			cdf.setflags(write=False)
			return cdf
		n *= 2


def qgeom_sample(r: float, q: QLike, rng: np.random.Generator, size=None):
	"""Draw q-Geometric gaps by inverse CDF on a cached table.

	:param rng: caller-owned generator
	:param size: None for a single int, otherwise an output shape"""
	qp = as_qparams(q)
	_check_r(r)
	cdf = _qgeom_cdf_table(float(r), qp.q)
	u = rng.random(size)
	gaps = np.minimum(np.searchsorted(cdf, u, side='right'), len(cdf) - 1)
	return int(gaps) if size is None else gaps
