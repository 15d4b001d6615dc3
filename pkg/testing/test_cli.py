"""qtasep command line."""
import csv
import io
import json
import os

from qtasep import __version__, hydro
from qtasep.cli import main
from qtasep.run import experiment
from qtasep.run.experiment import KS_THRESHOLDS
from qtasep.utils import config as user_config


def read_rows(text):
	return list(csv.DictReader(io.StringIO(text)))


class TestGeneral:

	def test_version(self, capsys):
		assert main(['--version']) == 0
		assert __version__ in capsys.readouterr().out

	def test_unknown_flag(self):
		assert main(['phase', '--temperature', '3']) == 2

	def test_missing_command(self):
		assert main([]) == 2

	def test_log_file(self, tmp_path):
		assert main(['--out-dir', str(tmp_path), 'phase']) == 0
		logs = list((tmp_path / 'logs').glob('*/log.txt'))
		assert len(logs) == 1

	def test_config_flag_ignored_outside_compare(self, tmp_path):
		assert main(['--config', str(tmp_path / 'missing.json'), 'phase']) == 0


class TestPhase:

	def test_gaussian(self, capsys):
		assert main(['phase', '--q', '0.6', '--theta', '1', '--slow', '1:0.4']) == 0
		lines = capsys.readouterr().out.splitlines()
		assert lines[0] == 'Gaussian, k=1'
		assert any(line.startswith('sigma = ') for line in lines)

	def test_gue(self, capsys):
		assert main(['phase']) == 0
		assert capsys.readouterr().out.splitlines()[0] == 'GUE'

	def test_critical(self, capsys):
		assert main(['phase', '--alpha', '0.6', '--k', '2', '--c', '1.0']) == 0
		out = capsys.readouterr().out
		assert out.splitlines()[0] == 'Critical, k=2'
		assert 'b = ' in out


class TestShape:

	def test_csv(self, tmp_path):
		pth = tmp_path / 'shape.csv'
		assert main(['shape', '--slow', '1:0.4', '--points', '5', '--output', str(pth)]) == 0
		rows = read_rows(pth.read_text())
		assert len(rows) == 5 and set(rows[0]) == {'theta', 'x', 'y', 'branch'}
		assert {r['branch'] for r in rows} <= {'curved', 'straight'}

	def test_stdout(self, capsys):
		assert main(['shape', '--points', '3']) == 0
		assert len(read_rows(capsys.readouterr().out)) == 3

	def test_bad_range(self):
		assert main(['shape', '--theta-min', '3', '--theta-max', '1']) == 2


class TestLimitCdf:

	def test_normal(self, capsys):
		assert main(['limit-cdf', '--law', 'gk', '--k', '1', '--x', '0', '1.6448536269514722']) == 0
		rows = read_rows(capsys.readouterr().out)
		assert abs(float(rows[0]['F']) - 0.5) < 1e-8
		assert abs(float(rows[1]['F']) - 0.95) < 1e-6
		assert all(float(r['err_est']) <= 1e-7 for r in rows)

	def test_bbp_without_b_is_gue(self, capsys):
		assert main(['limit-cdf', '--law', 'bbp', '--x', '-1']) == 0
		bbp = read_rows(capsys.readouterr().out)[0]['F']
		assert main(['limit-cdf', '--law', 'gue', '--x', '-1']) == 0
		assert read_rows(capsys.readouterr().out)[0]['F'] == bbp

	def test_invalid_k(self):
		assert main(['limit-cdf', '--law', 'gk', '--k', '0', '--x', '0']) == 2


class TestConfig:

	def test_set_show_reset(self, capsys):
		assert main(['config', '--set', 'threads', '3']) == 0
		assert user_config.read_from_config('THREADS') == '3'
		assert user_config.get_threads() == 3
		capsys.readouterr()
		assert main(['config', '--show']) == 0
		assert 'THREADS = 3' in capsys.readouterr().out
		assert main(['config', '--unset', 'THREADS']) == 0
		assert user_config.read_from_config('THREADS') is None
		assert main(['config', '--reset']) == 0
		assert not os.path.exists(user_config.config_file)

	def test_unknown_key(self):
		assert main(['config', '--set', 'COLOUR', 'red']) == 2

	def test_clear_cache(self, tmp_path, capsys):
		cache = tmp_path / 'tables'
		cache.mkdir()
		(cache / 'airy_0.json').write_text('{}')
		assert main(['config', '--clear-cache', '--cache-dir', str(cache)]) == 0
		assert 'removed 1 cached tables' in capsys.readouterr().out
		assert not list(cache.iterdir())


class TestSimulateAndCompare:

	def test_simulate(self, tmp_path):
		out = tmp_path / 'out'
		dump = tmp_path / 'profile.csv'
		argv = ['--out-dir', str(out), '--seed', '4', '--threads', '2', '--quiet', 'simulate', '--slow', '1:0.4',
				'--N', '8', '16', '--runs', '3', '--profile-dump', str(dump)]
		assert main(argv) == 0
		rows = read_rows((out / 'samples.csv').read_text())
		assert len(rows) == 6 and [int(r['N']) for r in rows] == [8, 8, 8, 16, 16, 16]
		assert len(read_rows(dump.read_text())) == 16

	def test_nonpositive_N(self, tmp_path):
		assert main(['--out-dir', str(tmp_path), '--quiet', 'simulate', '--N', '0']) == 2

	def test_compare_and_replay(self, tmp_path, capsys, monkeypatch, coarse_tables):
		monkeypatch.setitem(KS_THRESHOLDS, 'gue', 1.0)
		out = tmp_path / 'out'
		argv = ['--out-dir', str(out), '--seed', '2', '--quiet', 'compare', '--preset', 'gue', '--N', '8', '--runs', '5']
		assert main(argv) == 0
		printed = capsys.readouterr().out
		assert 'gue N=8: KS vs F_GUE' in printed and '[pass]' in printed and 'trend:' in printed

		replayed = tmp_path / 'replay.csv'
		assert main(['--quiet', 'simulate', '--manifest', str(out / 'manifest.json'), '--output', str(replayed)]) == 0
		assert replayed.read_text() == (out / 'samples.csv').read_text()

	def test_compare_failed_ks(self, tmp_path, capsys, monkeypatch, coarse_tables):
		monkeypatch.setitem(KS_THRESHOLDS, 'gue', 0.0)
		out = tmp_path / 'out'
		argv = ['--out-dir', str(out), '--seed', '2', '--quiet', 'compare', '--preset', 'gue', '--N', '8', '--runs', '5']
		assert main(argv) == 3
		assert '[fail]' in capsys.readouterr().out
		assert len(read_rows((out / 'samples.csv').read_text())) == 5
		assert not json.loads((out / 'report.json').read_text())['rows'][0]['pass']

	def test_compare_failed_trend(self, tmp_path, monkeypatch, coarse_tables):
		monkeypatch.setitem(KS_THRESHOLDS, 'gue', 1.0)
		monkeypatch.setattr(experiment, 'trend', lambda values: {'steps': 1, 'decreasing_steps': 0, 'ok': False})
		argv = ['--out-dir', str(tmp_path), '--quiet', 'compare', '--preset', 'gue', '--N', '8', '16', '--runs', '3']
		assert main(argv) == 3

	def test_compare_config_file(self, tmp_path, monkeypatch, coarse_tables):
		monkeypatch.setitem(KS_THRESHOLDS, 'gaussian', 1.0)
		pth = tmp_path / 'experiment.json'
		pth.write_text(json.dumps({'preset': 'gaussian', 'N_list': [8], 'runs': 4}))
		out = tmp_path / 'out'
		assert main(['--out-dir', str(out), '--config', str(pth), '--quiet', 'compare', '--runs', '3']) == 0
		manifest = json.loads((out / 'manifest.json').read_text())
		assert manifest['runs'] == 3 and manifest['preset'] == 'gaussian'
		assert manifest['limit_law']['label'] == 'G_1'

	def test_compare_phase_mismatch(self, tmp_path):
		argv = ['--out-dir', str(tmp_path), '--quiet', 'compare', '--preset', 'gaussian', '--alpha', '0.9', '--N', '8',
				'--runs', '2']
		assert main(argv) == 2


class TestSaddleCheck:

	def test_default(self, capsys):
		assert main(['saddle-check', '--points', '50']) == 0
		assert 'chi' in capsys.readouterr().out

	def test_shock(self, capsys):
		assert main(['saddle-check', '--alpha', '0.4', '--points', '50']) == 0
		assert 'sigma' in capsys.readouterr().out

	def test_identity_failure(self, monkeypatch):
		monkeypatch.setattr(hydro, 'chi', lambda q, theta: 1.0)
		assert main(['saddle-check', '--points', '50']) == 3
