"""Binary indexed sum tree over per-particle jump rates.

The array layout is the classical Fenwick one: ``tree[j]`` (1-based) holds the sum of the
``j & -j`` rates ending at j. The jitted functions are used directly by the event loop;
:class:`RateTree` wraps them for use from Python."""
import numpy as np
from numba import njit


@njit(nogil=True, cache=True)
def tree_build(rates, tree):
	"""Fill ``tree`` (length M + 1) from ``rates`` in O(M)."""
	M = len(rates)
	tree[0] = 0.0
	for j in range(1, M + 1):
		tree[j] = rates[j - 1]
	for j in range(1, M + 1):
		parent = j + (j & -j)
		if parent <= M:
			tree[parent] += tree[j]


@njit(nogil=True, cache=True)
def tree_add(tree, index, delta):
	"""Add delta to the rate at 1-based ``index``."""
	M = len(tree) - 1
	j = index
	while j <= M:
		tree[j] += delta
		j += j & -j


@njit(nogil=True, cache=True)
def tree_prefix(tree, index):
	"""Sum of the rates 1..index."""
	s = 0.0
	j = index
	while j > 0:
		s += tree[j]
		j -= j & -j
	return s


@njit(nogil=True, cache=True)
def tree_find(tree, target):
	"""Smallest 1-based index whose prefix sum exceeds ``target`` (M + 1 if none does)."""
	M = len(tree) - 1
	half = 1
	while half * 2 <= M:
		half *= 2

	j = 0
	s = target
	while half > 0:
		k = j + half
		if k <= M and tree[k] <= s:
			j = k
			s -= tree[k]
		half >>= 1
	return j + 1


class RateTree:
	"""Cumulative rate table over particles 0..M-1 (0-based on the Python side)."""

	def __init__(self, rates):
		rates = np.asarray(rates, dtype=np.float64)
		assert rates.ndim == 1 and len(rates) > 0, "need at least one rate"
		self.tree = np.zeros(len(rates) + 1)
		tree_build(rates, self.tree)

	def __len__(self):
		return len(self.tree) - 1

	def rebuild(self, rates):
		tree_build(np.asarray(rates, dtype=np.float64), self.tree)

	@property
	def total(self) -> float:
		return tree_prefix(self.tree, len(self))

	def increment(self, i: int, delta: float):
		assert 0 <= i < len(self), f"particle {i} out of range"
		tree_add(self.tree, i + 1, delta)

	def set_value(self, i: int, value: float):
		self.increment(i, value - self.get_frequency(i))

	def get_cumulative_frequency(self, i: int) -> float:
		"""Sum of the rates of particles 0..i."""
		assert 0 <= i < len(self), f"particle {i} out of range"
		return tree_prefix(self.tree, i + 1)

	def get_frequency(self, i: int) -> float:
		return self.get_cumulative_frequency(i) - (self.get_cumulative_frequency(i - 1) if i else 0.0)

	def find(self, target: float) -> int:
		"""Particle whose rate interval contains ``target`` in [0, total)."""
		return tree_find(self.tree, target) - 1
