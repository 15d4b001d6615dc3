"""Numerical checks of the steepest-descent skeleton behind the fluctuation limits.

The actions f0, f1, f2 (GUE and critical phases) and g0, g1 (shock phase), the perturbation factor
phi, contour parametrizations, and report-valued scans of the monotonicity and periodicity
properties of their real parts.

The offset of a vertical line from the vertex is called ``contour_offset`` here to keep it apart
from the variance sigma."""
import cmath
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, List, Sequence, Tuple

import numpy as np

from . import hydro, qfun
from .hydro import RateProfile
from .qfun import QLike, as_qparams
from .utils.errors import DomainError, PoleError, ToleranceError
from .utils.types import ComplexLike

logger = logging.getLogger(__name__)

CONTOUR_KINDS = ('q-plane', 'log-plane')
POLE_TOL = 1e-10


def _check_Z(Z):
	if not np.real(Z) > 0:
		raise DomainError(f"requires Re Z > 0, got Z={Z}")


def f0(Z: ComplexLike, q: QLike, theta: float) -> complex:
	"""Leading action :math:`f_0(Z) = -f \\log q\\, Z + \\kappa q^Z + \\log(q^Z;q)_\\infty`."""
	qp = as_qparams(q)
	_check_Z(Z)
	lq = qp.log_q
	qZ = cmath.exp(Z * lq)
	return -hydro.f(qp, theta) * lq * Z + hydro.kappa(qp, theta) * qZ + qfun.log_qpoch_inf(qZ, qp)


def f1(Z: ComplexLike, q: QLike, theta: float, c: float) -> complex:
	""":math:`f_1(Z) = -c \\log q\\, Z + c q^{Z-\\theta}`."""
	qp = as_qparams(q)
	_check_Z(Z)
	return -c * qp.log_q * Z + c * cmath.exp((Z - theta) * qp.log_q)


def f2(Z: ComplexLike, q: QLike, theta: float, c: float, x: float) -> complex:
	""":math:`f_2(Z) = c^2 (\\log q)^4 Z / (4\\chi) - \\chi^{1/3} x Z`."""
	qp = as_qparams(q)
	_check_Z(Z)
	chi = hydro.chi(qp, theta)
	return c ** 2 * qp.log_q ** 4 / (4 * chi) * Z - chi ** (1 / 3) * x * Z


def f0_prime(Z: ComplexLike, q: QLike, theta: float, representation: str = 'a') -> complex:
	"""Derivative of :func:`f0`, two independent series.

	:param representation: ``'a'``: :math:`\\Psi_q'(\\theta)(q^{Z-\\theta}-1)/\\log q + \\Psi_q(\\theta) - \\Psi_q(Z)`;
		``'b'``: :math:`-\\log q \\sum_k q^{2k}(q^\\theta - q^Z)^2 / ((1-q^{\\theta+k})^2 (1-q^{Z+k}))`"""
	qp = as_qparams(q)
	_check_Z(Z)
	lq = qp.log_q

	if representation == 'a':
		return (qfun.qdigamma_prime(theta, qp) / lq * (cmath.exp((Z - theta) * lq) - 1)
				+ qfun.qdigamma(theta, qp) - qfun.digamma_series(Z, qp))

	if representation == 'b':
		n = qfun._n_terms(qp.q, 1.0 / (1 - qp.q) ** 3, qfun.DEFAULT_TOL)
		k = np.arange(n)
		diff = cmath.exp(theta * lq) - cmath.exp(Z * lq)
		terms = (qp.q ** (2 * k) * diff ** 2
				 / (np.expm1((theta + k) * lq) ** 2 * -np.expm1((Z + k) * lq)))
		return complex(-lq * terms[::-1].sum())

	raise DomainError(f"unknown representation '{representation}', expected 'a' or 'b'")


def g0(Z: ComplexLike, q: QLike, theta: float, alpha: float) -> complex:
	"""Shock-phase action :math:`g_0(Z) = -g \\log q\\, Z + \\kappa q^Z + \\log(q^Z;q)_\\infty`."""
	qp = as_qparams(q)
	_check_Z(Z)
	lq = qp.log_q
	qZ = cmath.exp(Z * lq)
	return -hydro.g(qp, theta, alpha) * lq * Z + hydro.kappa(qp, theta) * qZ + qfun.log_qpoch_inf(qZ, qp)


def g1(Z: ComplexLike, q: QLike, theta: float, alpha: float, c: float, x: float) -> complex:
	""":math:`g_1(Z) = -c \\log q\\, Z - \\sigma^{1/2} x Z + (c/\\alpha) q^Z`."""
	qp = as_qparams(q)
	_check_Z(Z)
	sig = hydro.sigma(qp, theta, alpha)
	return -c * qp.log_q * Z - math.sqrt(sig) * x * Z + c / alpha * cmath.exp(Z * qp.log_q)


def phi(Z: ComplexLike, q: QLike, profile: RateProfile) -> complex:
	"""Perturbation factor :math:`\\prod_j (q^Z/a_j;q)_\\infty / (q^Z;q)_\\infty^m` over the slower particles."""
	qp = as_qparams(q)
	_check_Z(Z)
	slow = profile.slow_rates
	if not slow:
		return 1.0 + 0j

	qZ = cmath.exp(Z * qp.log_q)
	# zeros of (q^Z;q)_inf sit where q^{Z+k} = 1; only small k can come close for Re Z > 0
	k = np.arange(64)
	if np.min(np.abs(1 - qZ * qp.q ** k)) < POLE_TOL:
		raise PoleError(f"phi has a pole near Z={Z}")

	numerator = np.prod([qfun.qpoch_inf(qZ / a, qp) for a in slow])
	return complex(numerator / qfun.qpoch_inf(qZ, qp) ** len(slow))


def central_derivative(fn: Callable[[float], complex], x: float, order: int, h: float) -> complex:
	"""4th-order central difference of order 1, 2 or 3, Richardson-extrapolated over steps h and h/2."""

	def stencil(step):
		fv = {j: fn(x + j * step) for j in range(-3, 4) if j or order == 2}
		if order == 1:
			return (-fv[2] + 8 * fv[1] - 8 * fv[-1] + fv[-2]) / (12 * step)
		if order == 2:
			return (-fv[2] + 16 * fv[1] - 30 * fv[0] + 16 * fv[-1] - fv[-2]) / (12 * step ** 2)
		if order == 3:
			return (-fv[3] + 8 * fv[2] - 13 * fv[1] + 13 * fv[-1] - 8 * fv[-2] + fv[-3]) / (8 * step ** 3)
		raise DomainError(f"order must be 1, 2 or 3, got {order}")

	coarse, fine = stencil(h), stencil(h / 2)
	return (16 * fine - coarse) / 15


@dataclass(frozen=True)
class CriticalConstants:
	d1: float
	d2: float
	d3: float
	chi: float


def critical_constants(q: QLike, theta: float, via: str = 'f0', check: bool = True) -> CriticalConstants:
	"""First three derivatives of f0 at theta, by finite differences.

	Expected: d1 = 0, d2 = 0, d3 = 2 chi.

	:param via: ``'f0'`` differentiates f0 itself; ``'a'`` / ``'b'`` start from that representation of f0'
	:param check: raise :class:`ToleranceError` when the expected values are missed"""
	qp = as_qparams(q)
	h = 1e-2 * theta

	if via == 'f0':
		fn = lambda x: f0(x, qp, theta).real
		d1, d2, d3 = (central_derivative(fn, theta, n, h).real for n in (1, 2, 3))
	elif via in ('a', 'b'):
		fn = lambda x: f0_prime(x, qp, theta, via).real
		d1 = fn(theta)
		d2, d3 = (central_derivative(fn, theta, n, h).real for n in (1, 2))
	else:
		raise DomainError(f"unknown route '{via}', expected 'f0', 'a' or 'b'")

	chi = hydro.chi(qp, theta)
	consts = CriticalConstants(d1, d2, d3, chi)
	if check:
		verify_critical(consts, theta)
	return consts


def verify_critical(consts: CriticalConstants, theta: float):
	""":raises ToleranceError: unless (d1, d2, d3) is (0, 0, 2 chi) within tolerance"""
	d1, d2, d3, chi = consts.d1, consts.d2, consts.d3, consts.chi
	if abs(d1) > 1e-9 or abs(d2) > 1e-8 or abs(d3 - 2 * chi) > 1e-6 * abs(2 * chi):
		logger.error(f"critical-point identities failed at theta={theta}: {consts}")
		raise ToleranceError(f"f0 derivatives at theta={theta} miss (0, 0, 2 chi): {consts}")


def shock_constants(q: QLike, theta: float, alpha: float, check: bool = True) -> Tuple[float, float, float]:
	"""g0'(A) and g0''(A) by finite differences, with the expected sigma. Returns ``(d1, d2, sigma)``."""
	qp = as_qparams(q)
	A = math.log(alpha) / qp.log_q
	fn = lambda x: g0(x, qp, theta, alpha).real
	h = 1e-2 * A
	d1, d2 = (central_derivative(fn, A, n, h).real for n in (1, 2))
	sig = hydro.sigma(qp, theta, alpha)
	if check:
		verify_shock(d1, d2, sig)
	return d1, d2, sig


def verify_shock(d1: float, d2: float, sig: float):
	""":raises ToleranceError: unless g0' vanishes and g0'' equals sigma at the shock point"""
	if abs(d1) > 1e-9 or abs(d2 - sig) > 1e-8 * abs(sig):
		raise ToleranceError(f"g0 derivatives miss (0, sigma={sig}): ({d1}, {d2})")


@dataclass(frozen=True)
class ContourRay:
	"""A two-sided ray contour through ``vertex``.

	``q-plane``: s -> vertex + |s| e^{i sgn(s) angle}.
	``log-plane``: s -> log_q(q^vertex + |s| e^{i sgn(s) angle}), the image of the q-plane wedge at q^vertex."""
	vertex: float
	angle: float = math.pi / 4
	kind: str = 'log-plane'

	def __post_init__(self):
		if not 0 < self.angle <= math.pi / 2:
			raise DomainError(f"angle must lie in (0, pi/2], got {self.angle}")
		if self.kind not in CONTOUR_KINDS:
			raise DomainError(f"unknown contour kind '{self.kind}', expected one of {CONTOUR_KINDS}")

	def points(self, s: Sequence[float], q: QLike) -> np.ndarray:
		s = np.asarray(s, dtype=float)
		ray = np.abs(s) * np.exp(1j * np.sign(s) * self.angle)
		if self.kind == 'q-plane':
			return self.vertex + ray
		lq = as_qparams(q).log_q
		return np.log(np.exp(self.vertex * lq) + ray) / lq


def _re_action(fn: str, q: QLike, theta: float, alpha: float = None) -> Callable[[complex], float]:
	"""Real part of f0 or g0, valid off the positive half-plane too (only |1 - q^{Z+k}| enters)."""
	qp = as_qparams(q)
	lq = qp.log_q
	kap = hydro.kappa(qp, theta)
	if fn == 'f0':
		lin = hydro.f(qp, theta)
	elif fn == 'g0':
		lin = hydro.g(qp, theta, alpha)
	else:
		raise DomainError(f"unknown action '{fn}', expected 'f0' or 'g0'")

	def re_action(Z):
		qZ = cmath.exp(Z * lq)
		return (-lin * lq * Z + kap * qZ).real + qfun.log_abs_qpoch_inf(qZ, qp)

	return re_action


@dataclass
class ScanReport:
	"""Outcome of a monotonicity or periodicity scan."""
	name: str
	n_points: int
	violations: List[Tuple[float, float]] = field(default_factory=list)
	"""``(position, size)`` of each violation"""
	max_deviation: float = 0.0

	@property
	def passed(self) -> bool:
		return not self.violations

	def summary(self) -> str:
		status = 'ok' if self.passed else f'{len(self.violations)} violations'
		return f"{self.name}: {self.n_points} points, {status}, max deviation {self.max_deviation:.3e}"


def steep_descent_scan(fn: str, q: QLike, theta: float, s_grid: Sequence[float], alpha: float = None,
					   contour: ContourRay = None, slack: float = 1e-12) -> ScanReport:
	"""Check that Re[fn(W(s))] increases with |s| along a ray contour through the critical point.

	:param fn: ``'f0'`` (vertex theta) or ``'g0'`` (vertex A = log_q alpha)
	:param s_grid: nonnegative parameter values, increasing; the mirror half is checked by symmetry
	:param contour: defaults to the log-plane ray at angle pi/4 through the relevant vertex
	:param slack: decreases smaller than this are rounding, not violations"""
	qp = as_qparams(q)
	if contour is None:
		vertex = theta if fn == 'f0' else math.log(alpha) / qp.log_q
		contour = ContourRay(vertex)

	s = np.asarray(s_grid, dtype=float)
	re_action = _re_action(fn, qp, theta, alpha)
	report = ScanReport(f"steep-descent {fn} (q={qp.q}, theta={theta}{'' if alpha is None else f', alpha={alpha}'})",
						2 * len(s))

	for half in (1, -1):
		values = np.array([re_action(Z) for Z in contour.points(half * s, qp)])
		drops = values[:-1] - values[1:]
		report.max_deviation = max(report.max_deviation, float(max(drops.max(initial=0), 0)))
		for i in np.flatnonzero(drops > slack * np.maximum(1, np.abs(values[:-1]))):
			report.violations.append((float(half * s[i + 1]), float(drops[i])))

	logger.info(report.summary())
	return report


def vertical_periodicity_check(fn: str, vertex_plus_offset: float, q: QLike, theta: float, alpha: float = None,
							   n_points: int = 200, tol: float = 1e-10) -> ScanReport:
	"""On the line Re Z = vertex_plus_offset, Re fn is 2 pi/|log q|-periodic in Im Z and decreases on [0, pi/|log q|].

	:param vertex_plus_offset: real part of the line, theta (or A) plus the contour offset"""
	qp = as_qparams(q)
	if not vertex_plus_offset > 0:
		raise DomainError(f"the vertical line must lie in Re Z > 0, got {vertex_plus_offset}")

	period = 2 * math.pi / abs(qp.log_q)
	re_action = _re_action(fn, qp, theta, alpha)
	t = np.linspace(0, period, n_points + 1)
	values = np.array([re_action(vertex_plus_offset + 1j * ti) for ti in t])
	shifted = np.array([re_action(vertex_plus_offset + 1j * (ti + period)) for ti in t])

	report = ScanReport(f"periodicity {fn} at Re Z={vertex_plus_offset} (q={qp.q})", len(t))
	gaps = np.abs(values - shifted)
	report.max_deviation = float(gaps.max())
	for i in np.flatnonzero(gaps > tol * np.maximum(1, np.abs(values))):
		report.violations.append((float(t[i]), float(gaps[i])))

	half = t <= period / 2
	rises = np.diff(values[half])
	for i in np.flatnonzero(rises > tol * np.maximum(1, np.abs(values[half][1:]))):
		report.violations.append((float(t[half][i + 1]), float(rises[i])))

	logger.info(report.summary())
	return report
