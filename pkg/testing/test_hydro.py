"""Hydrodynamic constants, phases, scalings, limit shape and the stationary gap law."""
import math

import numpy as np
import pytest

from qtasep import hydro
from qtasep.hydro import Phase, RateProfile, HydroConstants
from qtasep.utils.errors import DomainError, ProfileError

Q_GRID = (0.3, 0.6, 0.9)
THETA_GRID = (0.25, 0.5, 1.0, 2.0, 4.0)


def series(theta, q, order, n=10 ** 4):
	"""Direct summation of Psi_q and its derivatives."""
	lq = math.log(q)
	t = [q ** (theta + k) for k in range(n)]
	if order == 0:
		return -math.log1p(-q) + lq * math.fsum(x / (1 - x) for x in t)
	if order == 1:
		return lq ** 2 * math.fsum(x / (1 - x) ** 2 for x in t)
	return lq ** 3 * math.fsum(x * (1 + x) / (1 - x) ** 3 for x in t)


class TestRateProfile:
	"""Derived alpha, k and validation."""

	def test_empty(self):
		p = RateProfile()
		assert p.alpha == 1 and p.k == 0 and p.max_index == 0

	def test_parse(self):
		p = RateProfile.parse('3:0.5, 1:0.4,2:0.4')
		assert p.perturbations == ((1, 0.4), (2, 0.4), (3, 0.5))
		assert p.alpha == 0.4 and p.k == 2 and p.max_index == 3
		assert RateProfile.parse(str(p)) == p

	def test_faster_particles_ignored(self):
		p = RateProfile.parse('1:2.0,4:0.7')
		assert p.alpha == 0.7 and p.k == 1
		assert p.slow_rates == [0.7]

	@pytest.mark.parametrize('text', ['1:0', '0:0.5', '1:0.5,1:0.4', 'x', '1:-2'])
	def test_invalid(self, text):
		with pytest.raises(ProfileError):
			RateProfile.parse(text)

	def test_rates(self):
		a = RateProfile.slow_block(2, 0.5, first=2).rates(4)
		assert a.tolist() == [1.0, 0.5, 0.5, 1.0]
		with pytest.raises(ProfileError):
			RateProfile.slow_block(2, 0.5, first=4).rates(4)

	def test_A(self):
		assert abs(RateProfile.slow_block(1, 0.36).A(0.6) - 2) < 1e-14


class TestConstants:
	"""kappa, f, chi, g, sigma."""

	def test_large_theta(self):
		q = 0.5
		assert abs(hydro.kappa(q, 60) - 1 / (1 - q)) < 1e-10
		assert abs(hydro.f(q, 60)) < 1e-10

	def test_against_direct_series(self):
		q, theta = 0.6, 1.0
		lq = math.log(q)
		d0, d1, d2 = (series(theta, q, n) for n in range(3))
		assert abs(hydro.kappa(q, theta) - d1 / (lq ** 2 * q ** theta)) < 1e-12
		assert abs(hydro.f(q, theta) - (d1 / lq ** 2 - d0 / lq - math.log1p(-q) / lq)) < 1e-12
		assert abs(hydro.chi(q, theta) - (d1 * lq - d2) / 2) < 1e-12

	def test_shock_against_direct_series(self):
		q, theta, alpha = 0.6, 1.0, 0.4
		lq = math.log(q)
		A = math.log(alpha) / lq
		g = series(theta, q, 1) / lq ** 2 * alpha / q ** theta - series(A, q, 0) / lq - math.log1p(-q) / lq
		sig = series(theta, q, 1) * alpha / q ** theta - series(A, q, 1)
		assert abs(hydro.g(q, theta, alpha) - g) < 1e-12
		assert abs(hydro.sigma(q, theta, alpha) - sig) < 1e-12
		assert sig > 0

	@pytest.mark.parametrize('q', Q_GRID)
	@pytest.mark.parametrize('theta', THETA_GRID)
	def test_positive(self, q, theta):
		assert hydro.kappa(q, theta) > 0
		assert hydro.chi(q, theta) > 0

	def test_boundary_continuity(self):
		rng = np.random.default_rng(3)
		for q, theta in zip(rng.uniform(0.1, 0.95, 20), rng.uniform(0.2, 5, 20)):
			alpha = q ** theta
			assert abs(hydro.g(q, theta, alpha) - hydro.f(q, theta)) <= 1e-12
			assert abs(hydro.sigma(q, theta, alpha)) <= 1e-12

	def test_f_above_g(self):
		assert hydro.f(0.6, 1) > hydro.g(0.6, 1, 0.4)

	def test_no_slow_particle(self):
		assert hydro.g(0.6, 1, 1.0) == -math.inf
		assert hydro.sigma(0.6, 1, 1.0) == -math.inf

	@pytest.mark.parametrize('bad', [dict(theta=0), dict(theta=-1), dict(alpha=0), dict(alpha=1.2)])
	def test_domain(self, bad):
		args = dict(q=0.6, theta=1.0, alpha=0.5)
		args.update(bad)
		with pytest.raises(DomainError):
			hydro.g(**args)

	def test_compute(self):
		c = HydroConstants.compute(0.6, 1.0, 0.4)
		assert c.to_dict()['sigma'] == c.sigma > 0


class TestPhase:
	"""Classification and law of large numbers."""

	@pytest.mark.parametrize('alpha,phase', [(0.4, Phase.GAUSSIAN), (1.0, Phase.GUE), (0.6, Phase.CRITICAL)])
	def test_classify(self, alpha, phase):
		profile = RateProfile.slow_block(1, alpha) if alpha < 1 else RateProfile()
		assert hydro.classify_phase(0.6, 1.0, profile) == phase

	def test_str(self):
		assert str(Phase.GAUSSIAN) == 'Gaussian'

	def test_lln(self):
		f = hydro.f(0.6, 1)
		assert hydro.lln_position(0.6, 1, 1.0) == f - 1
		assert abs(hydro.lln_position(0.6, 1, 0.6) - (f - 1)) < 1e-12
		assert hydro.lln_position(0.6, 1, 0.4) < f - 1


class TestScalingPlan:
	"""tau, p and the fluctuation scale."""

	def test_c_zero(self):
		plan = hydro.scaling_plan(0.6, 1.0, 0.0, 1000, RateProfile())
		assert plan.phase == Phase.GUE
		assert abs(plan.tau - hydro.kappa(0.6, 1) * 1000) < 1e-9
		assert abs(plan.p - (hydro.f(0.6, 1) - 1) * 1000) < 1e-9
		assert plan.fluct_scale < 0

	def test_c_one(self):
		plan = hydro.scaling_plan(0.6, 1.0, 1.0, 1000, RateProfile())
		assert abs(plan.tau - (hydro.kappa(0.6, 1) * 1000 + 100 / 0.6)) < 1e-9

	def test_gaussian_scale(self):
		q, theta, alpha, N = 0.6, 1.0, 0.4, 400
		plan = hydro.scaling_plan(q, theta, 0.5, N, RateProfile.slow_block(1, alpha))
		assert plan.phase == Phase.GAUSSIAN
		assert abs(plan.tau - (hydro.kappa(q, theta) * N + 0.5 * 20 / alpha)) < 1e-9
		assert abs(plan.fluct_scale - hydro.sigma(q, theta, alpha) ** 0.5 / math.log(q) * 20) < 1e-12

	def test_round_trip(self):
		plan = hydro.scaling_plan(0.6, 1.0, 0.3, 256, RateProfile())
		assert plan.xi_of_position(plan.p) == 0
		assert abs(plan.xi_of_position(plan.p + plan.fluct_scale) - 1) < 1e-12
		for x in range(-3, 4):
			assert abs(plan.xi_of_position(plan.position_of_xi(x)) - x) < 1e-12

	def test_forced_phase(self):
		plan = hydro.scaling_plan(0.6, 1.0, 0.0, 100, RateProfile(), phase=Phase.CRITICAL)
		assert plan.phase == Phase.CRITICAL

	def test_bad_N(self):
		with pytest.raises(DomainError):
			hydro.scaling_plan(0.6, 1.0, 0.0, 0, RateProfile())


class TestBBP:
	"""b = c (log q)^2 / (2 chi^{2/3})."""

	def test_critical_b(self):
		b = hydro.critical_b(0.6, 1.0, 2.0)
		assert abs(b - 2.0 * math.log(0.6) ** 2 / (2 * hydro.chi(0.6, 1.0) ** (2 / 3))) < 1e-15
		assert hydro.bbp_vector(0.6, 1.0, 2.0, k=2) == (b, b)
		assert hydro.bbp_vector(0.6, 1.0, 2.0, b_tilde=(0.0, 1.0)) == (b, b + 1.0)

	def test_full_profile(self):
		p = hydro.full_bbp_profile(0.6, 1.0, 1000, (0.0, 1.0))
		assert p.perturbations[0] == (1, 0.6 ** 1.0)
		assert abs(p.perturbations[1][1] - 0.6 ** 1.1) < 1e-15


class TestLimitShape:
	"""Curved and straight branches."""

	def test_no_slow(self):
		points = hydro.limit_shape(0.6, RateProfile(), np.linspace(0.1, 5, 50))
		assert all(p.branch == 'curved' for p in points)

	def test_straight_branch_collinear(self):
		points = hydro.limit_shape(0.6, RateProfile.slow_block(1, 0.4), np.linspace(0.1, 5, 200))
		straight = np.array([(p.x, p.y) for p in points if p.branch == 'straight'])
		assert len(straight) > 3
		d = straight - straight[0]
		cross = d[:, 0] * d[-1, 1] - d[:, 1] * d[-1, 0]
		assert np.max(np.abs(cross)) < 1e-8

	def test_branch_switch(self):
		grid = np.linspace(0.1, 5, 200)
		points = hydro.limit_shape(0.6, RateProfile.slow_block(1, 0.4), grid)
		switch = next(p.theta for p in points if p.branch == 'curved')
		assert abs(switch - math.log(0.4) / math.log(0.6)) <= grid[1] - grid[0]

	def test_curves_agree_outside_shock(self):
		grid = np.linspace(0.1, 5, 100)
		a = hydro.limit_shape(0.6, RateProfile(), grid)
		b = hydro.limit_shape(0.6, RateProfile.slow_block(1, 0.4), grid)
		for pa, pb in zip(a, b):
			if pb.branch == 'curved':
				assert (pa.x, pa.y) == (pb.x, pb.y)

	def test_bad_grid(self):
		with pytest.raises(DomainError):
			hydro.limit_shape(0.6, RateProfile(), [1.0, 0.5])


class TestGapLaw:
	"""q-Geometric stationary gaps and the density."""

	def test_degenerate(self):
		assert hydro.qgeom_pmf(0.0, 0.6, 0) == 1
		assert np.all(hydro.qgeom_pmf(0.0, 0.6, np.arange(1, 10)) == 0)

	def test_normalised(self):
		assert abs(hydro.qgeom_pmf(0.6, 0.6, np.arange(201)).sum() - 1) < 1e-12

	@pytest.mark.parametrize('q', Q_GRID)
	@pytest.mark.parametrize('theta', THETA_GRID)
	def test_hop_rate_and_density(self, q, theta):
		r = q ** theta
		k = np.arange(5000)
		pmf = hydro.qgeom_pmf(r, q, k)
		assert abs((pmf * (1 - q ** k)).sum() - r) < 1e-10
		assert abs(1 / (1 + (k * pmf).sum()) - hydro.density(q, theta)) < 1e-10

	def test_density_limits(self):
		assert abs(hydro.density(0.5, 60) - 1) < 1e-10
		values = [hydro.density(0.6, t) for t in np.linspace(0.2, 5, 30)]
		assert np.all(np.diff(values) > 0)
		assert all(0 < v <= 1 for v in values)

	def test_sampler(self):
		q, theta = 0.6, 1.0
		rng = np.random.default_rng(11)
		gaps = hydro.qgeom_sample(q ** theta, q, rng, size=10 ** 6)
		hop = 1 - q ** gaps
		se = hop.std() / math.sqrt(len(hop))
		assert abs(hop.mean() - q ** theta) < 4 * se
		assert isinstance(hydro.qgeom_sample(0.5, q, rng), int)

	def test_domain(self):
		with pytest.raises(DomainError):
			hydro.qgeom_pmf(1.0, 0.6, 0)
		with pytest.raises(DomainError):
			hydro.qgeom_pmf(0.5, 0.6, -1)
