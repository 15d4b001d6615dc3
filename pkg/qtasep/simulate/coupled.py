"""Particle-keyed simulation in which the first N particles do not depend on the rest.

Every particle carries its own Poisson clock of rate a_k and its own counter-based stream.
When the clock rings the particle jumps with probability 1 - q^gap. Particle k only looks at
particle k - 1, so truncating the system never changes the trajectories it keeps. This is
slower than the global-stream Gillespie loop and is meant for testing."""
import heapq
import math

import numpy as np

from .streams import RngStream
from .system import _as_sim_q
from ..hydro import RateProfile
from ..utils.errors import DomainError


def coupled_positions(M: int, profile: RateProfile, q: float, tau: float, stream: RngStream) -> np.ndarray:
	"""Positions at time tau of M particles from the step initial condition (0-based array)."""
	if M < 1:
		raise DomainError(f"need at least one particle, got M={M}")
	q = _as_sim_q(q)
	a = profile.rates(M)

	positions = -np.arange(1, M + 1, dtype=np.int64)
	rngs = [stream.particle_generator(k) for k in range(M)]
	clocks = [(rngs[k].standard_exponential() / a[k], k) for k in range(M)]
	heapq.heapify(clocks)

	while clocks[0][0] <= tau:
		t, k = heapq.heappop(clocks)
		rng = rngs[k]
		gap = math.inf if k == 0 else positions[k - 1] - positions[k] - 1
		accept = 1.0 if gap == math.inf else 1.0 - q ** gap
		if rng.random() < accept:
			positions[k] += 1
		heapq.heappush(clocks, (t + rng.standard_exponential() / a[k], k))

	return positions
