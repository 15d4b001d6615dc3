"""Empirical distributions and the Kolmogorov-Smirnov distance to a limit CDF."""
from typing import Callable

import numpy as np

from ..utils.errors import DomainError


class EmpiricalDistribution:
	"""Sorted samples of a real random variable.

	:param samples: at least one finite value, in any order"""

	def __init__(self, samples):
		samples = np.sort(np.asarray(samples, dtype=float).ravel())
		if samples.size < 1:
			raise DomainError("an empirical distribution needs at least one sample")
		if not np.all(np.isfinite(samples)):
			raise DomainError("samples must be finite")
		samples.flags.writeable = False
		self.samples = samples

	@property
	def n(self) -> int:
		return len(self.samples)

	def __len__(self):
		return self.n

	def mean(self) -> float:
		return float(self.samples.mean())

	def var(self) -> float:
		return float(self.samples.var(ddof=1)) if self.n > 1 else 0.0

	def __call__(self, x):
		return ecdf(self, x)

	def __repr__(self):
		return f"EmpiricalDistribution(n={self.n}, mean={self.mean():.4g})"


def ecdf(dist: EmpiricalDistribution, x):
	"""Fraction of samples <= x (right-continuous)."""
	counts = np.searchsorted(dist.samples, x, side='right')
	return counts / dist.n


def ks_statistic(dist: EmpiricalDistribution, cdf: Callable) -> float:
	"""sup_x |F_n(x) - F(x)| for a continuous F, evaluated at the sample points.

	:param cdf: vectorised, nondecreasing into [0, 1]"""
	F = np.asarray(cdf(dist.samples), dtype=float)
	i = np.arange(1, dist.n + 1)
	return float(max(np.max(i / dist.n - F), np.max(F - (i - 1) / dist.n)))
