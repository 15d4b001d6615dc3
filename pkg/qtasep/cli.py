"""Command-line surface: ``qtasep <subcommand> [options]``.

Exit codes: 0 on success, 2 for invalid arguments, 3 when a numerical tolerance check fails."""
import argparse
import logging
import os
import sys
from typing import List, Optional

import numpy as np

from . import __version__, hydro, saddle
from .file.cache import cleanup_cache
from .file.outputs import write_csv
from .hydro import HydroConstants, Phase, RateProfile
from .limits import KernelSpec, load_table
from .limits.fredholm import NYSTROM_SELF_TOL, fredholm_cdf_with_error
from .run.experiment import KS_THRESHOLDS, PRESETS, ExperimentConfig, RunManifest, replay, run_experiment
from .run.logs import setup_logging
from .simulate.sampling import MonteCarloConfig, monte_carlo, profile_dump
from .simulate.streams import RngStream
from .utils import config as user_config
from .utils.config import get_cache_dir
from .utils.errors import DomainError, NonConvergence, QuadratureError, ToleranceError

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_USAGE, EXIT_TOLERANCE = 0, 2, 3
DEFAULT_OUT_DIR = 'qtasep_out'


def _profile(args) -> RateProfile:
	"""``--slow`` wins; otherwise ``--alpha`` on particles 1..k."""
	if getattr(args, 'slow', None):
		return RateProfile.parse(args.slow)
	alpha = getattr(args, 'alpha', None)
	if alpha is None or alpha == 1:
		return RateProfile()
	return RateProfile.slow_block(args.k, alpha)


def _emit_csv(header, rows, output: Optional[str]):
	if output is None:
		write_csv(header, rows, stream=sys.stdout)
	else:
		write_csv(header, rows, output)
		print(f"wrote {output}")


def cmd_phase(args) -> int:
	profile = _profile(args)
	phase = hydro.classify_phase(args.q, args.theta, profile)
	print(f"{phase}, k={profile.k}" if phase != Phase.GUE else str(phase))
	consts = HydroConstants.compute(args.q, args.theta, profile.alpha)
	for name, value in consts.to_dict().items():
		print(f"{name} = {value!r}")
	print(f"q^theta = {args.q ** args.theta!r}, alpha = {profile.alpha!r}")
	if phase == Phase.CRITICAL:
		print(f"b = {hydro.critical_b(args.q, args.theta, args.c)!r}")
	return EXIT_OK


def cmd_shape(args) -> int:
	if not 0 < args.theta_min < args.theta_max:
		raise DomainError(f"need 0 < theta-min < theta-max, got {args.theta_min}, {args.theta_max}")
	grid = np.linspace(args.theta_min, args.theta_max, args.points)
	points = hydro.limit_shape(args.q, _profile(args), grid)
	_emit_csv(('theta', 'x', 'y', 'branch'), ((p.theta, p.x, p.y, p.branch) for p in points), args.output)
	return EXIT_OK


def cmd_simulate(args) -> int:
	out_dir = args.out_dir or DEFAULT_OUT_DIR
	if args.manifest:
		manifest = RunManifest.load(args.manifest)
		samples = replay(manifest, args.threads, progress=not args.quiet)
	else:
		config = MonteCarloConfig(args.q, args.theta, args.c, tuple(args.N), args.runs, _profile(args), args.seed or 0,
								  args.threads, tuple(args.b_tilde) if args.b_tilde else None, args.event_budget)
		samples = monte_carlo(config, output_directory=out_dir, progress=not args.quiet)

		if args.profile_dump:
			N = config.N_list[-1]
			points = profile_dump(args.q, args.theta, args.c, N, config.profile_for(N),
								  RngStream(args.seed or 0, 0).generator(), config.phase_for(N))
			write_csv(('k', 'x', 'x_scaled', 'y_scaled'), points.tolist(), args.profile_dump)
			print(f"wrote {args.profile_dump}")

	output = args.output or os.path.join(out_dir, 'samples.csv')
	samples.to_csv(output)
	print(f"wrote {len(samples)} samples to {output}")
	return EXIT_OK


def _law_spec(args) -> KernelSpec:
	if args.law == 'gue':
		return KernelSpec.airy()
	if args.law == 'bbp':
		return KernelSpec.bbp(args.b or ())
	return KernelSpec.hermite(args.k)


def cmd_limit_cdf(args) -> int:
	spec = _law_spec(args)
	if args.x:
		rows = []
		for x in args.x:
			F, err = fredholm_cdf_with_error(spec, x)
			if err > NYSTROM_SELF_TOL:
				raise QuadratureError(f"{spec.label} at x={x}: self-convergence error {err:.3e}")
			rows.append((x, F, err))
	else:
		rows = load_table(spec, args.cache_dir, args.threads, refresh=args.refresh, progress=not args.quiet).rows()
	_emit_csv(('x', 'F', 'err_est'), rows, args.output)
	return EXIT_OK


def cmd_compare(args) -> int:
	overrides = dict(preset=args.preset, q=args.q, theta=args.theta, c=args.c,
					 N_list=tuple(args.N) if args.N else None, runs=args.runs, alpha=args.alpha, k=args.k,
					 b_tilde=tuple(args.b_tilde) if args.b_tilde else None, seed=args.seed, threads=args.threads,
					 event_budget=args.event_budget)
	if args.config:
		config = ExperimentConfig.from_file(args.config, **overrides)
	else:
		config = ExperimentConfig(**{k: v for k, v in overrides.items() if v is not None})

	out_dir = args.out_dir or DEFAULT_OUT_DIR
	manifest, samples, report = run_experiment(config, out_dir, args.cache_dir, progress=not args.quiet)

	for row in report.rows:
		print(f"{row['preset']} N={row['N']}: KS vs {row['limit_law']} = {row['ks']:.4f} "
			  f"[{'pass' if row['pass'] else 'fail'}]")
	print(f"trend: {report.trend['decreasing_steps']}/{report.trend['steps']} decreasing steps "
		  f"[{'ok' if report.trend['ok'] else 'not ok'}]")
	for label, rows in report.alternatives.items():
		print(f"vs {label}: " + ', '.join(f"N={r['N']} KS={r['ks']:.4f}" for r in rows))

	consistency = report.checks.get('b_consistency')
	if consistency is not None and not consistency['ok']:
		raise ToleranceError(f"b used by the limit law deviates by {consistency['max_deviation']:.3e}")

	failed = []
	last = report.rows[-1]
	if not last['pass']:
		failed.append(f"KS at N={last['N']} is {last['ks']:.4f} > {KS_THRESHOLDS[config.preset]}")
	if not report.trend['ok']:
		failed.append("KS does not decrease with N")
	if not report.checks.get('discriminates', {'ok': True})['ok']:
		failed.append(f"{report.limit_law} is not the closest law")
	if failed:
		raise ToleranceError(f"{config.preset}: " + '; '.join(failed) + f" (samples kept in {out_dir})")
	return EXIT_OK


def cmd_saddle_check(args) -> int:
	s_grid = np.linspace(0, args.s_max, args.points + 1)[1:]
	consts = saddle.critical_constants(args.q, args.theta, check=False)
	print(f"critical point: f0'={consts.d1:.3e}, f0''={consts.d2:.3e}, f0'''={consts.d3!r}, 2 chi={2 * consts.chi!r}")
	saddle.verify_critical(consts, args.theta)

	reports = [saddle.steep_descent_scan('f0', args.q, args.theta, s_grid),
			   saddle.vertical_periodicity_check('f0', args.theta + args.offset, args.q, args.theta)]

	if args.alpha is not None and args.alpha < args.q ** args.theta:
		d1, d2, sig = saddle.shock_constants(args.q, args.theta, args.alpha, check=False)
		print(f"shock point: g0'={d1:.3e}, g0''={d2!r}, sigma={sig!r}")
		saddle.verify_shock(d1, d2, sig)
		reports.append(saddle.steep_descent_scan('g0', args.q, args.theta, s_grid, alpha=args.alpha))

	for report in reports:
		print(report.summary())
	failed = [r.name for r in reports if not r.passed]
	if failed:
		raise ToleranceError(f"scans with violations: {failed}")
	return EXIT_OK


def cmd_config(args) -> int:
	if args.set:
		key, value = args.set
		key = key.upper()
		if key not in user_config.KEYS:
			raise DomainError(f"unknown config key '{key}', expected one of {user_config.KEYS}")
		user_config.write_to_config(key, value)
		print(f"{key} = {value}")
	if args.unset:
		user_config.remove_from_config(args.unset.upper())
	if args.reset:
		user_config.remove_config()
		print("config reset")
	if args.clear_cache:
		print(f"removed {cleanup_cache(get_cache_dir(args.cache_dir))} cached tables")
	if args.show or not (args.set or args.unset or args.reset or args.clear_cache):
		print(f"config file: {user_config.config_file}")
		for key, value in user_config.show_config().items():
			print(f"{key} = {value}")
	return EXIT_OK


def _model_args(p: argparse.ArgumentParser, theta=True):
	p.add_argument('--q', type=float, default=0.6, help='q in (0, 1)')
	if theta:
		p.add_argument('--theta', type=float, default=1.0, help='macroscopic position parameter')
	p.add_argument('--slow', type=str, default=None, help="slower particles as 'index:rate,...'")
	p.add_argument('--alpha', type=float, default=None, help='rate of the slow particles 1..k')
	p.add_argument('--k', type=int, default=1, help='number of slow particles')


def build_parser() -> argparse.ArgumentParser:
	parser = argparse.ArgumentParser(prog='qtasep', description='q-TASEP with slower particles: '
																'constants, simulation and limit laws')
	parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
	parser.add_argument('--seed', type=int, default=None, help='master seed (default 0)')
	parser.add_argument('--threads', type=int, default=None, help='worker threads (default from config or cpu count)')
	parser.add_argument('--out-dir', type=str, default=None, help='output directory (also receives logs)')
	parser.add_argument('--config', type=str, default=None, help='JSON experiment config')
	parser.add_argument('--verbose', action='store_true', help='log INFO to stderr')
	parser.add_argument('--quiet', action='store_true', help='no progress bars')
	sub = parser.add_subparsers(dest='command', required=True)

	p = sub.add_parser('phase', help='phase and hydrodynamic constants')
	_model_args(p)
	p.add_argument('--c', type=float, default=0.0)
	p.set_defaults(func=cmd_phase)

	p = sub.add_parser('shape', help='limit shape CSV')
	_model_args(p, theta=False)
	p.add_argument('--theta-min', type=float, default=0.05)
	p.add_argument('--theta-max', type=float, default=6.0)
	p.add_argument('--points', type=int, default=200)
	p.add_argument('--output', type=str, default=None, help='CSV path (stdout if omitted)')
	p.set_defaults(func=cmd_shape)

	p = sub.add_parser('simulate', help='Monte-Carlo samples of xi_N')
	_model_args(p)
	p.add_argument('--c', type=float, default=0.0)
	p.add_argument('--N', type=int, nargs='+', default=[128])
	p.add_argument('--runs', type=int, default=100)
	p.add_argument('--b-tilde', type=float, nargs='+', default=None, help='N^(-1/3) rate shifts of particles 1..k')
	p.add_argument('--event-budget', type=int, default=None)
	p.add_argument('--manifest', type=str, default=None, help='regenerate the samples of a manifest.json')
	p.add_argument('--profile-dump', type=str, default=None, help='CSV of one rescaled profile at the largest N')
	p.add_argument('--output', type=str, default=None, help='samples CSV (default <out-dir>/samples.csv)')
	p.set_defaults(func=cmd_simulate)

	p = sub.add_parser('limit-cdf', help='Fredholm CDF values or cached tables')
	p.add_argument('--law', choices=('gue', 'bbp', 'gk'), default='gue')
	p.add_argument('--b', type=float, nargs='+', default=None)
	p.add_argument('--k', type=int, default=1)
	p.add_argument('--x', type=float, nargs='+', default=None, help='evaluate here instead of the table grid')
	p.add_argument('--refresh', action='store_true', help='rebuild the cached table')
	p.add_argument('--cache-dir', type=str, default=None)
	p.add_argument('--output', type=str, default=None)
	p.set_defaults(func=cmd_limit_cdf)

	p = sub.add_parser('compare', help='run an experiment preset')
	p.add_argument('--preset', choices=PRESETS, default=None)
	p.add_argument('--q', type=float, default=None)
	p.add_argument('--theta', type=float, default=None)
	p.add_argument('--c', type=float, default=None)
	p.add_argument('--N', type=int, nargs='+', default=None)
	p.add_argument('--runs', type=int, default=None)
	p.add_argument('--alpha', type=float, default=None)
	p.add_argument('--k', type=int, default=None)
	p.add_argument('--b-tilde', type=float, nargs='+', default=None)
	p.add_argument('--event-budget', type=int, default=None)
	p.add_argument('--cache-dir', type=str, default=None)
	p.set_defaults(func=cmd_compare)

	p = sub.add_parser('saddle-check', help='saddle identities and steep-descent scans')
	p.add_argument('--q', type=float, default=0.6)
	p.add_argument('--theta', type=float, default=1.0)
	p.add_argument('--alpha', type=float, default=None)
	p.add_argument('--s-max', type=float, default=5.0)
	p.add_argument('--points', type=int, default=500)
	p.add_argument('--offset', type=float, default=0.1, help='distance of the vertical line from theta')
	p.set_defaults(func=cmd_saddle_check)

	p = sub.add_parser('config', help='user defaults')
	p.add_argument('--set', nargs=2, metavar=('KEY', 'VALUE'))
	p.add_argument('--unset', type=str, metavar='KEY')
	p.add_argument('--show', action='store_true')
	p.add_argument('--reset', action='store_true')
	p.add_argument('--clear-cache', action='store_true')
	p.add_argument('--cache-dir', type=str, default=None)
	p.set_defaults(func=cmd_config)

	return parser


def main(argv: List[str] = None) -> int:
	parser = build_parser()
	try:
		args = parser.parse_args(argv)
	except SystemExit as e:
		return EXIT_USAGE if e.code not in (0, None) else EXIT_OK

	setup_logging(args.out_dir, args.verbose)
	if args.command != 'compare' and args.config:
		logger.warning(f"--config is only used by 'compare', ignoring {args.config}")

	try:
		return args.func(args)
	except DomainError as e:
		print(f"qtasep {args.command}: {e}", file=sys.stderr)
		return EXIT_USAGE
	except (ToleranceError, NonConvergence) as e:
		logger.error(f"{args.command}: {e}")
		print(f"qtasep {args.command}: {e}", file=sys.stderr)
		return EXIT_TOLERANCE


if __name__ == '__main__':
	sys.exit(main())
