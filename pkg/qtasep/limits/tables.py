"""Tabulated limit CDFs with monotone interpolation and an on-disk JSON cache."""
import hashlib
import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np
from scipy.integrate import trapezoid
from scipy.interpolate import PchipInterpolator
from tqdm import tqdm

from .contours import KernelSpec
from .fredholm import fredholm_cdf, fredholm_cdf_with_error
from ..file.cache import cache_file
from ..file.outputs import load_json, save_json
from ..utils.config import get_threads
from ..utils.errors import ToleranceError

logger = logging.getLogger(__name__)

TABLE_VERSION = 1
GRID_LO, GRID_HI, GRID_STEP = -8.0, 6.0, 0.05
RANGE_SLACK = 1e-9


def default_grid() -> np.ndarray:
	n = int(round((GRID_HI - GRID_LO) / GRID_STEP)) + 1
	return np.linspace(GRID_LO, GRID_HI, n)


def table_fingerprint(spec: KernelSpec, grid: np.ndarray) -> str:
	payload = {'spec': spec.to_dict(), 'grid': [float(grid[0]), float(grid[-1]), len(grid)], 'version': TABLE_VERSION}
	return hashlib.sha1(json.dumps(payload, sort_keys=True).encode()).hexdigest()


@dataclass
class CdfTable:
	"""A limit CDF on a grid, with the Nystrom self-convergence error of each value.

	Calling the table interpolates monotonically inside the grid; outside it the CDF is evaluated directly."""
	spec: KernelSpec
	grid: np.ndarray = field(repr=False)
	values: np.ndarray = field(repr=False)
	errors: np.ndarray = field(repr=False)

	def __post_init__(self):
		self.grid = np.asarray(self.grid, dtype=float)
		self.values = np.asarray(self.values, dtype=float)
		self.errors = np.asarray(self.errors, dtype=float)
		assert self.grid.shape == self.values.shape == self.errors.shape, "grid, values and errors must align"
		self._interp = PchipInterpolator(self.grid, np.clip(self.values, 0, 1), extrapolate=False)

	@property
	def label(self) -> str:
		return self.spec.label

	@property
	def fingerprint(self) -> str:
		return table_fingerprint(self.spec, self.grid)

	def validate(self):
		"""Range and monotonicity within 1e-9."""
		lo, hi = self.values.min(), self.values.max()
		if lo < -RANGE_SLACK or hi > 1 + RANGE_SLACK:
			raise ToleranceError(f"{self.label} table leaves [0, 1]: min {lo:.3e}, max {hi:.3e}")
		drop = -np.diff(self.values).min(initial=0)
		if drop > RANGE_SLACK:
			raise ToleranceError(f"{self.label} table decreases by {drop:.3e}")

	def __call__(self, x):
		scalar = np.ndim(x) == 0
		x = np.atleast_1d(np.asarray(x, dtype=float))
		inside = (x >= self.grid[0]) & (x <= self.grid[-1])
		out = np.empty_like(x)
		out[inside] = self._interp(x[inside])
		for i in np.flatnonzero(~inside.ravel()):
			out.flat[i] = fredholm_cdf(self.spec, float(x.flat[i]), check=False)
		out = np.clip(out, 0, 1)
		return float(out[0]) if scalar else out

	def rows(self):
		return zip(self.grid.tolist(), self.values.tolist(), self.errors.tolist())

	def to_dict(self) -> dict:
		return {'fingerprint': self.fingerprint, 'spec': self.spec.to_dict(), 'grid': self.grid.tolist(),
				'values': self.values.tolist(), 'errors': self.errors.tolist()}

	@classmethod
	def from_dict(cls, data: dict) -> 'CdfTable':
		return cls(KernelSpec.from_dict(data['spec']), data['grid'], data['values'], data['errors'])


def build_table(spec: KernelSpec, grid: np.ndarray = None, threads: int = None, progress: bool = True) -> CdfTable:
	"""Evaluate the CDF on every grid point in a thread pool.

	:param threads: pool size, see :func:`qtasep.utils.config.get_threads`
	:param progress: show a tqdm bar"""
	grid = default_grid() if grid is None else np.asarray(grid, dtype=float)
	threads = get_threads(threads)
	logger.info(f"Building {spec.label} table on {len(grid)} points with {threads} threads")

	bar_format = '{l_bar}{bar:10}{r_bar}{bar:-10b}'
	with ThreadPoolExecutor(max_workers=threads) as pool:
		results = list(tqdm(pool.map(lambda x: fredholm_cdf_with_error(spec, x), grid), total=len(grid),
							desc=f"Tabulating {spec.label}", bar_format=bar_format, disable=not progress))

	values, errors = (np.array(col) for col in zip(*results))
	table = CdfTable(spec, grid, values, errors)
	logger.info(f"{spec.label}: max self-convergence error {errors.max():.3e}")
	return table


def load_table(spec: KernelSpec, cache_dir: str = None, threads: int = None, refresh: bool = False,
			   progress: bool = True) -> CdfTable:
	"""Cached table for ``spec`` on the default grid; rebuilt when missing, stale or ``refresh``."""
	grid = default_grid()
	fingerprint = table_fingerprint(spec, grid)
	pth = cache_file(f"{spec.kind}_{fingerprint[:16]}", cache_dir)

	if not refresh and os.path.isfile(pth):
		data = load_json(pth)
		if data.get('fingerprint') == fingerprint:
			logger.debug(f"Loaded {spec.label} table from {pth}")
			return CdfTable.from_dict(data)
		logger.info(f"Cached table {pth} is stale, rebuilding")

	table = build_table(spec, grid, threads, progress)
	table.validate()
	save_json(table.to_dict(), pth)
	return table


def cdf_moments(table: CdfTable, n_fine: int = 20001) -> Tuple[float, float]:
	"""Mean and variance of the tabulated law, from the derivative of the monotone interpolant."""
	x = np.linspace(table.grid[0], table.grid[-1], n_fine)
	pdf = np.clip(table._interp.derivative()(x), 0, None)
	mass = trapezoid(pdf, x)
	mean = trapezoid(x * pdf, x) / mass
	var = trapezoid((x - mean) ** 2 * pdf, x) / mass
	return float(mean), float(var)
