"""Fluctuation samples xi_N and the Monte-Carlo sample table."""
import logging
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .streams import RngStream
from .system import new_system, run_until
from .. import hydro
from ..file.outputs import read_csv, write_csv
from ..hydro import Phase, RateProfile
from ..utils.config import get_threads
from ..utils.errors import DomainError

logger = logging.getLogger(__name__)

SAMPLE_HEADER = ('N', 'run', 'seed_index', 'tau', 'X_N', 'xi')


class SampleRecord(NamedTuple):
	N: int
	run: int
	seed_index: int
	tau: float
	X_N: int
	xi: float


def xi_sample(q, theta: float, c: float, N: int, profile: RateProfile, rng: np.random.Generator,
			  phase: Phase = None, event_budget: int = None) -> float:
	"""One fluctuation sample: simulate the first N particles to tau(N) and rescale X_N.

	Particle k only sees particle k - 1, so N particles are exactly the first N of the infinite system.

	:param phase: force the scaling of this phase (for N-dependent rates)"""
	return sample_position(q, theta, c, N, profile, rng, phase, event_budget)[1]


def sample_position(q, theta, c, N, profile, rng, phase=None, event_budget=None) -> Tuple[int, float]:
	"""``(X_N(tau), xi_N)`` for one trajectory."""
	if N < profile.max_index:
		raise DomainError(f"N={N} is smaller than the largest perturbed index {profile.max_index}")
	plan = hydro.scaling_plan(q, theta, c, N, profile, phase)
	state = new_system(N, q, profile)
	run_until(state, plan.tau, rng, event_budget)
	X = state.X(N)
	return X, float(plan.xi_of_position(X))


@dataclass(frozen=True)
class MonteCarloConfig:
	"""Everything that determines a sample table.

	:param b_tilde: if given, rates q^{theta + b_tilde_i N^{-1/3}} on particles 1..k replace ``profile``
		for each N, and the critical scaling is used"""
	q: float
	theta: float
	c: float
	N_list: Tuple[int, ...]
	runs: int
	profile: RateProfile = RateProfile()
	master_seed: int = 0
	threads: Optional[int] = None
	b_tilde: Optional[Tuple[float, ...]] = None
	event_budget: Optional[int] = None

	def __post_init__(self):
		if self.runs < 1:
			raise DomainError(f"runs must be at least 1, got {self.runs}")
		if not self.N_list or min(self.N_list) < 1:
			raise DomainError(f"N_list must hold positive sizes, got {self.N_list}")
		object.__setattr__(self, 'N_list', tuple(int(N) for N in self.N_list))
		if self.b_tilde is not None:
			object.__setattr__(self, 'b_tilde', tuple(float(b) for b in self.b_tilde))

	def profile_for(self, N: int) -> RateProfile:
		if self.b_tilde is None:
			return self.profile
		return hydro.full_bbp_profile(self.q, self.theta, N, self.b_tilde)

	def phase_for(self, N: int) -> Optional[Phase]:
		return Phase.CRITICAL if self.b_tilde is not None else None

	def plan(self, N: int) -> hydro.ScalingPlan:
		return hydro.scaling_plan(self.q, self.theta, self.c, N, self.profile_for(N), self.phase_for(N))


def _sample_job(config: MonteCarloConfig, N: int, run: int) -> SampleRecord:
	rng = RngStream(config.master_seed, run).generator()
	plan = config.plan(N)
	X, xi = sample_position(config.q, config.theta, config.c, N, config.profile_for(N), rng, plan.phase,
							config.event_budget)
	return SampleRecord(N, run, run, float(plan.tau), X, xi)


def monte_carlo(config: MonteCarloConfig, output_directory: str = None, progress: bool = True) -> 'SampleTable':
	"""``runs`` samples for every N; run j uses stream j, so the table does not depend on threads.

	:param output_directory: where the runner writes its progress report"""
	from ..run.runner import SampleRunner

	jobs = [(N, run) for N in config.N_list for run in range(config.runs)]
	threads = get_threads(config.threads)
	for N in config.N_list:
		plan = config.plan(N)
		logger.info(f"N={N}: phase {plan.phase}, tau={plan.tau:.6g}, p={plan.p:.6g}, scale={plan.fluct_scale:.6g}")

	runner = SampleRunner(lambda job: _sample_job(config, *job), jobs, threads, output_directory)
	records = runner.run(progress_bars=progress)
	return SampleTable(sorted(records, key=lambda r: (r.N, r.run)))


@dataclass
class SampleTable:
	"""Samples sorted by (N, run)."""
	records: List[SampleRecord] = field(default_factory=list)

	def __len__(self):
		return len(self.records)

	@property
	def N_list(self) -> List[int]:
		return sorted({r.N for r in self.records})

	def xi(self, N: int) -> np.ndarray:
		return np.array([r.xi for r in self.records if r.N == N])

	def X(self, N: int) -> np.ndarray:
		return np.array([r.X_N for r in self.records if r.N == N])

	def rows(self):
		return (tuple(r) for r in self.records)

	def to_csv(self, pth: str = None, stream=None):
		"""CSV with header ``N,run,seed_index,tau,X_N,xi``, doubles printed with 17 significant digits."""
		write_csv(SAMPLE_HEADER, self.rows(), pth, stream)

	@classmethod
	def from_csv(cls, pth: str) -> 'SampleTable':
		records = [SampleRecord(int(r['N']), int(r['run']), int(r['seed_index']), float(r['tau']), int(r['X_N']),
								float(r['xi'])) for r in read_csv(pth)]
		return cls(records)


def profile_dump(q, theta: float, c: float, N: int, profile: RateProfile, rng: np.random.Generator,
				 phase: Phase = None) -> np.ndarray:
	"""Rescaled empirical profile of one trajectory at tau(N), see :meth:`SystemState.profile_points`."""
	plan = hydro.scaling_plan(q, theta, c, N, profile, phase)
	state = new_system(N, q, profile)
	run_until(state, plan.tau, rng)
	return state.profile_points()
