"""Phase-transition experiments: simulate xi_N for several N and compare with the limit law of the phase.

Presets
- ``gue``: no slow particle, compared with F_GUE
- ``critical``: k particles at rate exactly q^theta, compared with F_BBP,k,(b,...,b)
- ``gaussian``: k particles at rate alpha < q^theta, compared with G_k
- ``full-bbp``: rates q^{theta + b_tilde_i N^{-1/3}}, compared with F_BBP,k,(b + b_tilde)
"""
import logging
import math
import os
import time
from dataclasses import asdict, dataclass, field, fields
from datetime import datetime
from typing import Dict, List, Optional, Tuple

from .stats import EmpiricalDistribution, ks_statistic
from .. import __version__, hydro
from ..file.outputs import load_json, save_json, write_csv
from ..hydro import HydroConstants, Phase, RateProfile
from ..limits import CdfTable, KernelSpec, load_table
from ..simulate.sampling import MonteCarloConfig, SampleTable, monte_carlo
from ..utils.errors import DomainError

logger = logging.getLogger(__name__)

PRESETS = ('gue', 'critical', 'gaussian', 'full-bbp')
SCHEMA_VERSION = 1
B_CONSISTENCY_TOL = 1e-12

KS_THRESHOLDS = {'gue': 0.10, 'critical': 0.10, 'gaussian': 0.06, 'full-bbp': 0.10}
"""KS value at or below which a row of the report passes"""


@dataclass
class ExperimentConfig:
	"""One experiment. Any field may be given in a JSON config file.

	:param alpha: rate of the slow particles (``gaussian`` only; ``critical`` always uses q^theta)
	:param k: number of slow particles, particles 1..k
	:param b_tilde: rate shifts of the ``full-bbp`` preset"""
	preset: str = 'gue'
	q: float = 0.6
	theta: float = 1.0
	c: float = 0.0
	N_list: Tuple[int, ...] = (128, 256, 512, 1024)
	runs: int = 2000
	alpha: Optional[float] = None
	k: int = 1
	b_tilde: Tuple[float, ...] = (0.0,)
	seed: int = 0
	threads: Optional[int] = None
	event_budget: Optional[int] = None

	def __post_init__(self):
		if self.preset not in PRESETS:
			raise DomainError(f"unknown preset '{self.preset}', expected one of {PRESETS}")
		self.N_list = tuple(int(N) for N in self.N_list)
		self.b_tilde = tuple(float(b) for b in self.b_tilde)
		if self.k < 1:
			raise DomainError(f"k must be at least 1, got {self.k}")
		if self.preset == 'gaussian' and self.alpha is None:
			self.alpha = 0.4
		if self.preset == 'critical' and self.alpha is not None and self.alpha != self.q ** self.theta:
			raise DomainError(f"the critical preset needs alpha = q^theta = {self.q ** self.theta!r}, got {self.alpha!r}")

	@classmethod
	def from_dict(cls, data: dict) -> 'ExperimentConfig':
		known = {f.name for f in fields(cls)}
		unknown = set(data) - known
		if unknown:
			raise DomainError(f"unknown experiment config keys {sorted(unknown)}")
		return cls(**data)

	@classmethod
	def from_file(cls, pth: str, **overrides) -> 'ExperimentConfig':
		"""Load a JSON config; overrides that are not None win over file values."""
		data = load_json(pth)
		data.update({k: v for k, v in overrides.items() if v is not None})
		return cls.from_dict(data)

	def to_dict(self) -> dict:
		d = asdict(self)
		d['N_list'], d['b_tilde'] = list(self.N_list), list(self.b_tilde)
		return d

	@property
	def profile(self) -> RateProfile:
		"""Rate profile for every preset but ``full-bbp``, whose rates depend on N."""
		if self.preset == 'gue':
			return RateProfile()
		if self.preset == 'critical':
			return RateProfile.slow_block(self.k, self.q ** self.theta)
		if self.preset == 'gaussian':
			return RateProfile.slow_block(self.k, self.alpha)
		return RateProfile()

	def check(self):
		"""The profile must sit in the phase the preset compares against."""
		if self.preset == 'full-bbp':
			return
		phase = hydro.classify_phase(self.q, self.theta, self.profile)
		expected = {'gue': Phase.GUE, 'critical': Phase.CRITICAL, 'gaussian': Phase.GAUSSIAN}[self.preset]
		if phase != expected:
			raise DomainError(f"preset '{self.preset}' needs the {expected} phase, got {phase} "
							  f"(alpha={self.profile.alpha}, q^theta={self.q ** self.theta})")
		if self.preset == 'critical' and any(a != self.q ** self.theta for a in self.profile.slow_rates):
			raise DomainError("the critical preset needs every slow rate to be exactly q^theta")

	def b_vector(self) -> Tuple[float, ...]:
		if self.preset == 'critical':
			return hydro.bbp_vector(self.q, self.theta, self.c, k=self.k)
		if self.preset == 'full-bbp':
			return hydro.bbp_vector(self.q, self.theta, self.c, b_tilde=self.b_tilde)
		return ()

	def limit_spec(self) -> KernelSpec:
		if self.preset == 'gue':
			return KernelSpec.airy()
		if self.preset == 'gaussian':
			return KernelSpec.hermite(self.k)
		return KernelSpec.bbp(self.b_vector())

	def monte_carlo_config(self) -> MonteCarloConfig:
		b_tilde = self.b_tilde if self.preset == 'full-bbp' else None
		return MonteCarloConfig(self.q, self.theta, self.c, self.N_list, self.runs, self.profile, self.seed,
								self.threads, b_tilde, self.event_budget)


def _finite_or_none(d: dict) -> dict:
	return {k: (v if math.isfinite(v) else None) for k, v in d.items()}


@dataclass
class RunManifest:
	"""Everything needed to regenerate ``samples.csv`` bit for bit."""
	preset: str
	master_seed: int
	q: float
	theta: float
	c: float
	profile: List[List[float]]
	b_tilde: Optional[List[float]]
	N_list: List[int]
	runs: int
	phase: str
	constants: Dict[str, Optional[float]]
	limit_law: dict
	event_budget: Optional[int] = None
	tool_version: str = __version__
	started: str = ''
	wall_clock: float = 0.0
	schema_version: int = SCHEMA_VERSION

	@classmethod
	def from_config(cls, config: ExperimentConfig) -> 'RunManifest':
		profile = config.profile
		if config.preset == 'full-bbp':
			phase, alpha = Phase.CRITICAL, config.q ** config.theta
		else:
			phase, alpha = hydro.classify_phase(config.q, config.theta, profile), profile.alpha
		spec = config.limit_spec()
		return cls(preset=config.preset, master_seed=config.seed, q=config.q, theta=config.theta, c=config.c,
				   profile=profile.to_list(),
				   b_tilde=list(config.b_tilde) if config.preset == 'full-bbp' else None,
				   N_list=list(config.N_list), runs=config.runs, phase=str(phase),
				   constants=_finite_or_none(HydroConstants.compute(config.q, config.theta, alpha).to_dict()),
				   limit_law={'label': spec.label, 'spec': spec.to_dict()}, event_budget=config.event_budget,
				   started=datetime.now().isoformat(timespec='seconds'))

	def to_dict(self) -> dict:
		return asdict(self)

	@classmethod
	def from_dict(cls, data: dict) -> 'RunManifest':
		if data.get('schema_version') != SCHEMA_VERSION:
			raise DomainError(f"unsupported manifest schema {data.get('schema_version')}")
		return cls(**data)

	@classmethod
	def load(cls, pth: str) -> 'RunManifest':
		return cls.from_dict(load_json(pth))

	def monte_carlo_config(self, threads: int = None) -> MonteCarloConfig:
		profile = RateProfile.from_pairs(self.profile)
		b_tilde = tuple(self.b_tilde) if self.b_tilde is not None else None
		return MonteCarloConfig(self.q, self.theta, self.c, tuple(self.N_list), self.runs, profile,
								self.master_seed, threads, b_tilde, self.event_budget)


def replay(manifest: RunManifest, threads: int = None, progress: bool = False) -> SampleTable:
	"""Regenerate the sample table of a manifest; the result does not depend on ``threads``."""
	return monte_carlo(manifest.monte_carlo_config(threads), progress=progress)


def decreasing_steps(values: List[float]) -> int:
	return sum(b < a for a, b in zip(values, values[1:]))


def trend(values: List[float]) -> dict:
	"""KS should decrease in N: at least two thirds of the consecutive steps must go down."""
	steps = max(len(values) - 1, 0)
	down = decreasing_steps(values)
	return {'steps': steps, 'decreasing_steps': down, 'ok': down >= math.ceil(2 * steps / 3)}


@dataclass
class ExperimentReport:
	preset: str
	limit_law: str
	rows: List[dict] = field(default_factory=list)
	trend: dict = field(default_factory=dict)
	alternatives: Dict[str, List[dict]] = field(default_factory=dict)
	checks: Dict[str, dict] = field(default_factory=dict)

	@property
	def passed(self) -> bool:
		return bool(self.rows) and self.rows[-1]['pass'] and all(c.get('ok', True) for c in self.checks.values())

	def to_dict(self) -> dict:
		return asdict(self)


def _ks_rows(preset: str, samples: SampleTable, table: CdfTable, threshold: float) -> List[dict]:
	rows = []
	for N in samples.N_list:
		dist = EmpiricalDistribution(samples.xi(N))
		ks = ks_statistic(dist, table)
		rows.append({'preset': preset, 'N': N, 'ks': ks, 'n_runs': dist.n, 'limit_law': table.label,
					 'pass': bool(ks <= threshold)})
		logger.info(f"{preset} N={N}: KS vs {table.label} = {ks:.4f} ({dist.n} runs)")
	return rows


def compare(config: ExperimentConfig, samples: SampleTable, cache_dir: str = None,
			progress: bool = True) -> Tuple[ExperimentReport, List[CdfTable]]:
	"""KS of every N against the limit law of the preset, plus the extra checks of the critical presets."""
	load = lambda spec: load_table(spec, cache_dir, config.threads, progress=progress)
	threshold = KS_THRESHOLDS[config.preset]

	table = load(config.limit_spec())
	tables = [table]
	rows = _ks_rows(config.preset, samples, table, threshold)
	report = ExperimentReport(config.preset, table.label, rows, trend([r['ks'] for r in rows]))
	if not report.trend['ok']:
		logger.warning(f"{config.preset}: KS does not decrease with N ({[round(r['ks'], 4) for r in rows]})")

	if config.preset in ('critical', 'full-bbp'):
		b = hydro.critical_b(config.q, config.theta, config.c)
		offsets = config.b_tilde if config.preset == 'full-bbp' else (0.0,) * config.k
		drift = max(abs(used - (b + off)) for used, off in zip(table.spec.b, offsets))
		report.checks['b_consistency'] = {'b': b, 'max_deviation': drift, 'ok': drift <= B_CONSISTENCY_TOL}
		if drift > B_CONSISTENCY_TOL:
			logger.error(f"BBP parameters {table.spec.b} deviate from b={b} by {drift:.3e}")

		for spec in (KernelSpec.airy(), KernelSpec.hermite(1)):
			alt = load(spec)
			tables.append(alt)
			report.alternatives[alt.label] = _ks_rows(config.preset, samples, alt, threshold)

		last = rows[-1]['ks']
		others = [alt_rows[-1]['ks'] for alt_rows in report.alternatives.values()]
		report.checks['discriminates'] = {'ks': last, 'others': others, 'ok': all(last < o for o in others)}

	return report, tables


def run_experiment(config: ExperimentConfig, out_dir: str, cache_dir: str = None,
				   progress: bool = True) -> Tuple[RunManifest, SampleTable, ExperimentReport]:
	"""Simulate, compare and write ``manifest.json``, ``samples.csv``, ``report.json`` and ``tables/*.csv``."""
	config.check()
	manifest = RunManifest.from_config(config)
	logger.info(f"Experiment {config.preset}: q={config.q}, theta={config.theta}, c={config.c}, "
				f"phase {manifest.phase}, constants {manifest.constants}")

	t0 = time.perf_counter()
	samples = monte_carlo(config.monte_carlo_config(), output_directory=out_dir, progress=progress)
	manifest.wall_clock = time.perf_counter() - t0

	report, tables = compare(config, samples, cache_dir, progress)

	os.makedirs(out_dir, exist_ok=True)
	save_json(manifest.to_dict(), os.path.join(out_dir, 'manifest.json'))
	samples.to_csv(os.path.join(out_dir, 'samples.csv'))
	save_json(report.to_dict(), os.path.join(out_dir, 'report.json'))
	for table in tables:
		name = f"{table.spec.kind}_{table.fingerprint[:16]}.csv"
		write_csv(('x', 'F', 'err_est'), table.rows(), os.path.join(out_dir, 'tables', name))

	logger.info(f"Experiment {config.preset} written to {out_dir} ({'pass' if report.passed else 'FAIL'})")
	return manifest, samples, report
