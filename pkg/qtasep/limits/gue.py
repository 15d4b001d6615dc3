"""Monte-Carlo oracle for G_k: largest eigenvalue of small GUE matrices.

Diagonal entries are N(0, 1) and off-diagonal entries (X + iY)/sqrt(2), so the eigenvalue
density is proportional to Delta(lambda)^2 prod exp(-lambda_i^2 / 2), the weight of the Hermite kernel."""
import numpy as np

from ..utils.errors import DomainError

MAX_K = 8
CHUNK = 100_000


def _check_k(k):
	if not 1 <= k <= MAX_K:
		raise DomainError(f"GUE oracle supports 1 <= k <= {MAX_K}, got {k}")


def gue_matrix(k: int, rng: np.random.Generator, size: int = None) -> np.ndarray:
	"""One k x k GUE matrix, or a stack of ``size`` of them."""
	_check_k(k)
	n = 1 if size is None else size
	H = np.zeros((n, k, k), dtype=complex)
	idx = np.arange(k)
	H[:, idx, idx] = rng.standard_normal((n, k))

	upper = np.triu_indices(k, 1)
	n_off = len(upper[0])
	off = (rng.standard_normal((n, n_off)) + 1j * rng.standard_normal((n, n_off))) / np.sqrt(2)
	H[:, upper[0], upper[1]] = off
	H[:, upper[1], upper[0]] = off.conj()
	return H[0] if size is None else H


def gue_largest_eig_sample(k: int, rng: np.random.Generator, size: int = None):
	"""Largest eigenvalue of one GUE matrix (float), or of ``size`` independent ones (array).

	Large batches are drawn in chunks to bound memory."""
	_check_k(k)
	if size is None:
		return float(np.linalg.eigvalsh(gue_matrix(k, rng))[-1])

	out = np.empty(size)
	for start in range(0, size, CHUNK):
		n = min(CHUNK, size - start)
		out[start:start + n] = np.linalg.eigvalsh(gue_matrix(k, rng, n))[:, -1]
	return out
