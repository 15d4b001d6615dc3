"""Reproducible random streams.

A run is identified by ``(master_seed, stream_index)``; the generator is derived from a
:class:`numpy.random.SeedSequence` with that spawn key, so streams are independent and
re-creating one replays it exactly."""
from dataclasses import dataclass

import numpy as np

from ..utils.errors import DomainError


@dataclass(frozen=True)
class RngStream:
	master_seed: int
	stream_index: int = 0

	def __post_init__(self):
		if self.master_seed < 0 or self.stream_index < 0:
			raise DomainError(f"seed and stream index must be nonnegative, got {self}")

	def seed_sequence(self, *extra: int) -> np.random.SeedSequence:
		return np.random.SeedSequence(self.master_seed, spawn_key=(self.stream_index,) + extra)

	def generator(self) -> np.random.Generator:
		"""Global stream of the run (PCG64)."""
		return np.random.Generator(np.random.PCG64(self.seed_sequence()))

	def particle_generator(self, k: int) -> np.random.Generator:
		"""Counter-based stream owned by particle k alone (Philox), for the coupled simulator."""
		return np.random.Generator(np.random.Philox(self.seed_sequence(k)))
