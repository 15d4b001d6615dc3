"""Empirical CDFs, KS distances, experiment configs, manifests and the worker pool."""
import json
import math
import os

import numpy as np
import pytest
from scipy.special import ndtr

from qtasep import hydro
from qtasep.run import (SampleRunner, EmpiricalDistribution, ecdf, ks_statistic, ExperimentConfig, RunManifest,
						run_experiment, replay)
from qtasep.run.experiment import KS_THRESHOLDS, trend
from qtasep.utils.errors import DomainError


class TestEmpirical:
	"""ECDF and KS distance."""

	def test_single_atom(self):
		dist = EmpiricalDistribution([0.0])
		assert ecdf(dist, -1.0) == 0
		assert ecdf(dist, 0.0) == 1

	def test_right_continuous(self):
		dist = EmpiricalDistribution([3, 1, 2])
		assert ecdf(dist, 2) == pytest.approx(2 / 3)
		assert np.allclose(dist([0.5, 1, 2.5, 3]), [0, 1 / 3, 2 / 3, 1])

	def test_binomial_bound(self):
		rng = np.random.default_rng(0)
		n = 10_000
		dist = EmpiricalDistribution(rng.standard_normal(n))
		for x in (-1.0, 0.0, 1.5):
			p = ndtr(x)
			assert abs(ecdf(dist, x) - p) <= 4 * math.sqrt(p * (1 - p) / n)

	def test_invalid(self):
		with pytest.raises(DomainError):
			EmpiricalDistribution([])
		with pytest.raises(DomainError):
			EmpiricalDistribution([0.0, math.nan])

	def test_read_only(self):
		dist = EmpiricalDistribution([2.0, 1.0])
		with pytest.raises(ValueError):
			dist.samples[0] = 5.0

	def test_ks_single_atom(self):
		assert ks_statistic(EmpiricalDistribution([0.0]), ndtr) == pytest.approx(0.5)

	def test_ks_exact_samples(self):
		n = 10_000
		dist = EmpiricalDistribution(np.random.default_rng(1).standard_normal(n))
		assert ks_statistic(dist, ndtr) <= 1.95 / math.sqrt(n)

	def test_ks_reparametrization(self):
		x = np.random.default_rng(2).standard_normal(500)
		direct = ks_statistic(EmpiricalDistribution(x), ndtr)
		mapped = ks_statistic(EmpiricalDistribution(np.exp(x)), lambda y: ndtr(np.log(y)))
		assert abs(direct - mapped) < 1e-12

	def test_ks_detects_shift(self):
		dist = EmpiricalDistribution(np.random.default_rng(3).standard_normal(5000) + 0.5)
		assert ks_statistic(dist, ndtr) > 0.15


class TestTrend:
	"""KS decrease over N."""

	@pytest.mark.parametrize('values,ok', [([0.3, 0.2, 0.1], True), ([0.1, 0.2, 0.3], False),
										   ([0.3, 0.2, 0.25, 0.1], True), ([0.3, 0.35, 0.4, 0.1], False),
										   ([0.2], True)])
	def test_rule(self, values, ok):
		assert trend(values)['ok'] is ok


class TestExperimentConfig:
	"""Preset validation and JSON configs."""

	def test_defaults(self):
		config = ExperimentConfig()
		assert config.preset == 'gue' and config.N_list == (128, 256, 512, 1024) and config.runs == 2000
		assert config.limit_spec().label == 'F_GUE'

	def test_gaussian(self):
		config = ExperimentConfig(preset='gaussian')
		assert config.alpha == 0.4
		assert config.limit_spec().label == 'G_1'
		config.check()

	def test_critical(self):
		config = ExperimentConfig(preset='critical', k=2, c=0.5)
		config.check()
		b = hydro.critical_b(0.6, 1.0, 0.5)
		assert config.limit_spec().b == pytest.approx((b, b), abs=1e-12)
		assert config.profile.slow_rates == [0.6, 0.6]

	def test_critical_alpha(self):
		with pytest.raises(DomainError):
			ExperimentConfig(preset='critical', alpha=0.5)
		ExperimentConfig(preset='critical', alpha=0.6 ** 1.0)

	def test_full_bbp(self):
		config = ExperimentConfig(preset='full-bbp', b_tilde=(0.0, 1.0))
		b = hydro.critical_b(0.6, 1.0, 0.0)
		assert config.limit_spec().b == pytest.approx((b, b + 1.0), abs=1e-12)
		assert config.monte_carlo_config().b_tilde == (0.0, 1.0)

	def test_phase_mismatch(self):
		with pytest.raises(DomainError):
			ExperimentConfig(preset='gaussian', alpha=0.9).check()

	@pytest.mark.parametrize('kwargs', [dict(preset='tw'), dict(k=0)])
	def test_invalid(self, kwargs):
		with pytest.raises(DomainError):
			ExperimentConfig(**kwargs)

	def test_unknown_keys(self):
		with pytest.raises(DomainError):
			ExperimentConfig.from_dict({'preset': 'gue', 'temperature': 1})

	def test_dict_round_trip(self):
		config = ExperimentConfig(preset='full-bbp', b_tilde=(0.5,), N_list=(16, 32), runs=10)
		assert ExperimentConfig.from_dict(json.loads(json.dumps(config.to_dict()))) == config

	def test_from_file(self, tmp_path):
		pth = tmp_path / 'experiment.json'
		pth.write_text(json.dumps({'preset': 'gaussian', 'runs': 50, 'seed': 3}))
		config = ExperimentConfig.from_file(str(pth), runs=None, seed=7)
		assert config.preset == 'gaussian' and config.runs == 50 and config.seed == 7


class TestManifest:
	"""Run manifests."""

	def test_contents(self):
		manifest = RunManifest.from_config(ExperimentConfig(preset='gaussian', N_list=(16,), runs=4, seed=11))
		assert manifest.phase == 'Gaussian' and manifest.master_seed == 11
		assert manifest.limit_law['label'] == 'G_1'
		assert manifest.b_tilde is None
		assert all(v is None or math.isfinite(v) for v in manifest.constants.values())

	def test_json_round_trip(self, tmp_path):
		manifest = RunManifest.from_config(ExperimentConfig(preset='full-bbp', b_tilde=(0.0, 0.5), N_list=(16,)))
		data = json.loads(json.dumps(manifest.to_dict()))
		assert RunManifest.from_dict(data).to_dict() == data

	def test_schema(self):
		data = RunManifest.from_config(ExperimentConfig()).to_dict()
		data['schema_version'] = 99
		with pytest.raises(DomainError):
			RunManifest.from_dict(data)


class TestSampleRunner:
	"""Threaded job execution."""

	def test_job_order(self):
		runner = SampleRunner(lambda x: x * x, range(10), threads=3)
		assert runner.run(progress_bars=False, tick=0.01) == [x * x for x in range(10)]
		assert runner.num_done == 10

	def test_more_threads_than_jobs(self):
		runner = SampleRunner(str, [1, 2], threads=8)
		assert runner.num_threads == 2
		assert runner.run(progress_bars=False, tick=0.01) == ['1', '2']

	def test_report(self, tmp_path):
		SampleRunner(abs, [-1, -2], output_directory=str(tmp_path)).run(progress_bars=False, tick=0.01)
		SampleRunner(abs, [-1, -2], output_directory=str(tmp_path)).run(progress_bars=False, tick=0.01)
		assert (tmp_path / 'report_00.txt').is_file() and (tmp_path / 'report_01.txt').is_file()
		assert 'Number of samples drawn: 2' in (tmp_path / 'report_00.txt').read_text()

	def test_error(self):
		def task(x):
			if x == 3:
				raise ValueError("bad job")
			return x

		with pytest.raises(ValueError, match="bad job"):
			SampleRunner(task, range(5), threads=2).run(progress_bars=False, tick=0.01)


class TestExperiment:
	"""Small end-to-end experiments."""

	def test_layout_and_replay(self, tmp_path, coarse_tables):
		out = str(tmp_path / 'out')
		config = ExperimentConfig(preset='gue', N_list=(8, 16), runs=12, seed=5, threads=2)
		manifest, samples, report = run_experiment(config, out, progress=False)

		names = set(os.listdir(out))
		assert {'manifest.json', 'samples.csv', 'report.json', 'tables', 'report_00.txt'} <= names
		assert len(os.listdir(os.path.join(out, 'tables'))) == 1
		assert len(samples) == 24

		rows = json.loads((tmp_path / 'out' / 'report.json').read_text())['rows']
		assert [r['N'] for r in rows] == [8, 16]
		assert all(r['limit_law'] == 'F_GUE' and r['n_runs'] == 12 for r in rows)
		assert all(r['pass'] == (r['ks'] <= KS_THRESHOLDS['gue']) for r in rows)

		loaded = RunManifest.load(os.path.join(out, 'manifest.json'))
		assert replay(loaded, threads=1).records == samples.records
		assert loaded.wall_clock > 0

	def test_critical_checks(self, tmp_path, coarse_tables):
		config = ExperimentConfig(preset='critical', N_list=(8,), runs=10, threads=1)
		_, _, report = run_experiment(config, str(tmp_path / 'out'), progress=False)
		assert report.checks['b_consistency']['ok']
		assert set(report.alternatives) == {'F_GUE', 'G_1'}
		assert 'discriminates' in report.checks
		assert report.limit_law.startswith('F_BBP,1,')
		assert len(os.listdir(tmp_path / 'out' / 'tables')) == 3

	def test_phase_mismatch_before_sampling(self, tmp_path, coarse_tables):
		with pytest.raises(DomainError):
			run_experiment(ExperimentConfig(preset='gaussian', alpha=0.8, N_list=(8,), runs=2), str(tmp_path))
		assert not (tmp_path / 'samples.csv').exists()


@pytest.mark.slow
class TestAcceptance:
	"""Full-scale presets."""

	@pytest.mark.parametrize('preset', ['gue', 'critical', 'gaussian'])
	def test_preset(self, tmp_path, preset):
		config = ExperimentConfig(preset=preset, seed=1)
		_, _, report = run_experiment(config, str(tmp_path), progress=False)
		assert report.rows[-1]['ks'] <= KS_THRESHOLDS[preset]
		assert report.trend['ok']
		if preset == 'critical':
			assert report.checks['discriminates']['ok']

	def test_gaussian_variance(self, tmp_path):
		config = ExperimentConfig(preset='gaussian', N_list=(512,), seed=2)
		_, samples, _ = run_experiment(config, str(tmp_path), progress=False)
		assert abs(np.var(samples.xi(512)) - 1) <= 0.2
