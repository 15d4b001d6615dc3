import numpy as np
import pytest

from qtasep.limits import build_table
from qtasep.run import experiment
from qtasep.utils import config as user_config

COARSE_GRID = np.linspace(-8, 6, 29)


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
	"""Config file and table cache under tmp_path."""
	config_dir = tmp_path / 'config'
	monkeypatch.setattr(user_config, 'config_dir', str(config_dir))
	monkeypatch.setattr(user_config, 'config_file', str(config_dir / 'config.ini'))
	monkeypatch.setenv('QTASEP_CACHE_DIR', str(tmp_path / 'cache'))
	monkeypatch.delenv('QTASEP_THREADS', raising=False)


@pytest.fixture
def coarse_tables(monkeypatch):
	"""Experiments compare against limit tables on a 0.5-spaced grid instead of the cached default grid."""
	built = {}

	def load(spec, cache_dir=None, threads=None, refresh=False, progress=True):
		if spec not in built:
			built[spec] = build_table(spec, COARSE_GRID, threads=2, progress=False)
		return built[spec]

	monkeypatch.setattr(experiment, 'load_table', load)
	return built
