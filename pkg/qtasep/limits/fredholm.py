"""Fredholm determinants det(I - K) on (x, inf) by the Nystrom method.

The window (x, inf) is cut at x + L_dom, discretized by m Gauss-Legendre nodes, and the
symmetrized matrix I - D K D (D = diag(sqrt(weights))) is factorized with full pivoting."""
import logging
from typing import Sequence, Tuple

import numpy as np
from scipy.linalg.lapack import dgetc2

from .contours import KernelSpec, QuadratureGrid
from .kernels import kernel_matrix
from ..utils.errors import QuadratureError
from ..utils.types import RealLike

logger = logging.getLogger(__name__)

NYSTROM_SELF_TOL = 1e-7


def lu_det(a: np.ndarray) -> float:
	"""Determinant from an LU factorization with complete pivoting (LAPACK getc2)."""
	n = len(a)
	lu, ipiv, jpiv, info = dgetc2(np.array(a, dtype=float, order='F'))
	if info > 0:
		logger.debug(f"getc2 perturbed a tiny pivot at step {info} of {n}; determinant is near zero")
	# pivots may come back 0- or 1-based; the last one always points at itself
	base = ipiv[-1] - (n - 1)
	swaps = np.count_nonzero(ipiv != np.arange(n) + base) + np.count_nonzero(jpiv != np.arange(n) + base)
	return float((-1) ** swaps * np.prod(np.diag(lu)))


def fredholm_det(spec: KernelSpec, x: RealLike, m: int = None) -> float:
	"""Nystrom value of det(I - K)_{L^2(x, inf)} with ``m`` nodes (default spec.m)."""
	grid = QuadratureGrid.on(spec, float(x), m)
	K = kernel_matrix(spec, grid.nodes, grid.lo)
	d = np.sqrt(grid.weights)
	return lu_det(np.eye(len(grid)) - d[:, None] * K * d[None, :])


def fredholm_cdf_with_error(spec: KernelSpec, x: RealLike) -> Tuple[float, float]:
	"""``(F(x), |F_m(x) - F_2m(x)|)``, without raising."""
	value = fredholm_det(spec, x)
	fine = fredholm_det(spec, x, 2 * spec.m)
	return value, abs(fine - value)


def fredholm_cdf(spec: KernelSpec, x: RealLike, check: bool = True) -> float:
	"""CDF of the law of ``spec`` at x.

	:param check: compare with twice the Nystrom nodes, raise :class:`QuadratureError` beyond 1e-7"""
	if not check:
		return fredholm_det(spec, x)

	value, err = fredholm_cdf_with_error(spec, x)
	if err > NYSTROM_SELF_TOL:
		logger.error(f"{spec.label} at x={x}: m={spec.m} and m={2 * spec.m} differ by {err:.3e}")
		raise QuadratureError(f"{spec.label}({x}) failed Nystrom self-convergence: difference {err:.3e}")
	return value


def gue_cdf(x: RealLike, spec: KernelSpec = None) -> float:
	"""GUE Tracy-Widom F_GUE(x)."""
	return fredholm_cdf(spec or KernelSpec.airy(), x)


def bbp_cdf(b: Sequence[float], x: RealLike, spec: KernelSpec = None) -> float:
	"""F_BBP,k,b(x) with k = len(b)."""
	spec = KernelSpec.bbp(b) if spec is None else spec
	return fredholm_cdf(spec, x)


def gk_cdf(k: int, x: RealLike, spec: KernelSpec = None) -> float:
	"""G_k(x), law of the largest eigenvalue of a k x k GUE; G_1 is the standard normal CDF."""
	return fredholm_cdf(spec or KernelSpec.hermite(k), x)
