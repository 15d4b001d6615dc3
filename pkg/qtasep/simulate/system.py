"""q-TASEP state with step initial condition, and the single-trajectory drivers."""
import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Union

import numpy as np

from . import kernels
from .kernels import GAP_INF, jump_rate
from .rate_tree import RateTree
from ..hydro import RateProfile
from ..qfun import QParams
from ..utils.config import get_event_budget
from ..utils.errors import BudgetError, DeadlockError, DomainError, ProfileError, ToleranceError

logger = logging.getLogger(__name__)


def _as_sim_q(q: Union[QParams, float]) -> float:
	"""The simulator also takes q = 0 (classical TASEP)."""
	q = q.q if isinstance(q, QParams) else float(q)
	if not 0 <= q < 1:
		raise DomainError(f"q must lie in [0, 1), got {q}")
	return q


class JumpRecord(NamedTuple):
	particle: int
	"""1-based index of the particle that moved"""
	time: float


@dataclass
class SystemState:
	"""Positions x_1 > x_2 > ... > x_M with their gaps, jump rates and rate tree.

	Arrays are 0-based: ``positions[k - 1]`` is x_k. ``gaps[0]`` is the infinite-gap sentinel."""
	positions: np.ndarray
	gaps: np.ndarray
	rates: np.ndarray
	a: np.ndarray = field(repr=False)
	q: float
	tree: RateTree = field(repr=False)
	clock: float = 0.0
	events: int = 0

	@property
	def M(self) -> int:
		return len(self.positions)

	@property
	def total_rate(self) -> float:
		return self.tree.total

	def X(self, k: int) -> int:
		"""Position of particle k (1-based)."""
		return int(self.positions[k - 1])

	def current(self, site: int) -> int:
		"""Number of particles at positions >= site."""
		return int(np.count_nonzero(self.positions >= site))

	def profile_points(self) -> np.ndarray:
		"""Rescaled profile ((x_k + k)/t, k/t), one row per particle, with columns k, x, x_scaled, y_scaled."""
		if not self.clock > 0:
			raise DomainError("the rescaled profile needs a positive clock")
		k = np.arange(1, self.M + 1)
		return np.column_stack([k, self.positions, (self.positions + k) / self.clock, k / self.clock])

	def check_invariants(self):
		"""Exclusion, rate consistency and event accounting; raises :class:`ToleranceError`."""
		if not kernels.exclusion_holds(self.positions):
			raise ToleranceError("positions are not strictly decreasing")
		if not kernels.rates_agree(self.positions, self.gaps, self.rates, self.a, self.q):
			raise ToleranceError("incremental rates disagree with positions")
		moved = int((self.positions + np.arange(1, self.M + 1)).sum())
		if moved != self.events:
			raise ToleranceError(f"event counter {self.events} but particles moved {moved} steps")
		if abs(self.tree.total - self.rates.sum()) > 1e-9 * max(1.0, self.rates.sum()):
			raise ToleranceError(f"rate tree total {self.tree.total} drifted from {self.rates.sum()}")

	def copy(self) -> 'SystemState':
		state = SystemState(self.positions.copy(), self.gaps.copy(), self.rates.copy(), self.a, self.q,
							RateTree(self.rates), self.clock, self.events)
		return state


def new_system(M: int, q: Union[QParams, float], profile: RateProfile = RateProfile()) -> SystemState:
	"""Step initial condition x_k = -k for M particles.

	:raises ProfileError: if the profile perturbs a particle beyond M"""
	if M < 1:
		raise DomainError(f"need at least one particle, got M={M}")
	q = _as_sim_q(q)
	a = profile.rates(M)

	positions = -np.arange(1, M + 1, dtype=np.int64)
	gaps = np.zeros(M, dtype=np.int64)
	gaps[0] = GAP_INF
	rates = np.array([jump_rate(a[i], q, gaps[i]) for i in range(M)])
	return SystemState(positions, gaps, rates, a, q, RateTree(rates))


def _advance(state: SystemState, tau: float, rng: np.random.Generator, max_events: int, stop_after: int):
	clock, events, status, last = kernels.advance(
		state.positions, state.gaps, state.rates, state.a, state.tree.tree, state.q, state.clock, tau, rng,
		state.events, max_events, stop_after, kernels.AUDIT_EVERY, kernels.REBUILD_EVERY)
	state.clock, state.events = clock, events

	if status == kernels.DEADLOCK:
		raise DeadlockError(f"total jump rate is zero at t={clock}")
	if status == kernels.EXCLUSION_VIOLATED:
		raise ToleranceError(f"exclusion violated after {events} events")
	if status == kernels.RATE_AUDIT_FAILED:
		raise ToleranceError(f"rate audit failed after {events} events")
	return status, last


def step(state: SystemState, rng: np.random.Generator) -> JumpRecord:
	"""Perform exactly one jump."""
	_, last = _advance(state, math.inf, rng, state.events + 1, 1)
	return JumpRecord(last + 1, state.clock)


def run_until(state: SystemState, tau: float, rng: np.random.Generator, event_budget: int = None) -> SystemState:
	"""Advance to time tau; the clock ends at tau exactly.

	:param event_budget: cap on the total event count, see :func:`qtasep.utils.config.get_event_budget`
	:raises BudgetError: if the cap is hit before tau"""
	if tau < state.clock:
		raise DomainError(f"cannot run backwards from t={state.clock} to tau={tau}")
	if tau == state.clock:
		return state

	budget = get_event_budget(event_budget)
	status, _ = _advance(state, float(tau), rng, budget, -1)
	if status == kernels.BUDGET_EXCEEDED:
		raise BudgetError(f"event budget {budget} exhausted at t={state.clock} < tau={tau}")
	return state
