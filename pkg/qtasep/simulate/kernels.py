"""Jitted event loop of the q-TASEP simulator.

A NumPy ``Generator`` is passed straight into the jitted functions; they release the GIL so
independent trajectories can run in parallel threads."""
import numpy as np
from numba import njit

from .rate_tree import tree_add, tree_build, tree_find, tree_prefix

GAP_INF = np.iinfo(np.int64).max
"""Gap of the first particle, which has nobody in front of it"""

OK = 0
BUDGET_EXCEEDED = 1
DEADLOCK = 2
EXCLUSION_VIOLATED = 3
RATE_AUDIT_FAILED = 4

AUDIT_EVERY = 2 ** 16
REBUILD_EVERY = 2 ** 20
RATE_AUDIT_TOL = 1e-9


@njit(nogil=True, cache=True)
def jump_rate(a, q, gap):
	if gap == GAP_INF:
		return a
	return a * (1.0 - q ** gap)


@njit(nogil=True, cache=True)
def exclusion_holds(positions):
	for i in range(1, len(positions)):
		if positions[i] >= positions[i - 1]:
			return False
	return True


@njit(nogil=True, cache=True)
def rates_agree(positions, gaps, rates, a, q):
	"""Recompute gaps and rates from positions and compare with the incremental ones."""
	for i in range(len(positions)):
		gap = GAP_INF if i == 0 else positions[i - 1] - positions[i] - 1
		if gap != gaps[i]:
			return False
		r = jump_rate(a[i], q, gap)
		if abs(r - rates[i]) > RATE_AUDIT_TOL * max(1.0, abs(r)):
			return False
	return True


@njit(nogil=True, cache=True)
def _set_rate(i, new, rates, tree, total):
	delta = new - rates[i]
	rates[i] = new
	tree_add(tree, i + 1, delta)
	return total + delta


@njit(nogil=True)
def advance(positions, gaps, rates, a, tree, q, clock, tau, rng, events, max_events, stop_after,
			audit_every, rebuild_every):
	"""Run the Gillespie loop from ``clock`` until ``tau``, ``max_events`` or ``stop_after`` events.

	Mutates positions, gaps, rates and tree in place.
	Returns ``(clock, events, status, last_particle)``; the clock is set to tau when tau is reached."""
	M = len(positions)
	total = tree_prefix(tree, M)
	performed = 0
	last = -1

	while True:
		if total <= 0.0:
			return clock, events, DEADLOCK, last

		dt = rng.standard_exponential() / total
		if clock + dt > tau:
			return tau, events, OK, last
		if events >= max_events:
			return clock, events, BUDGET_EXCEEDED, last

		i = tree_find(tree, rng.random() * total) - 1
		if i >= M or rates[i] <= 0.0:
			# drift in the partial sums selected a blocked particle; rebuild and redraw
			tree_build(rates, tree)
			total = tree_prefix(tree, M)
			continue

		clock += dt
		positions[i] += 1
		events += 1
		performed += 1
		last = i

		if i > 0:
			gaps[i] -= 1
			total = _set_rate(i, jump_rate(a[i], q, gaps[i]), rates, tree, total)
		if i + 1 < M:
			gaps[i + 1] += 1
			total = _set_rate(i + 1, jump_rate(a[i + 1], q, gaps[i + 1]), rates, tree, total)

		if events % audit_every == 0 and not exclusion_holds(positions):
			return clock, events, EXCLUSION_VIOLATED, last
		if events % rebuild_every == 0:
			if not rates_agree(positions, gaps, rates, a, q):
				return clock, events, RATE_AUDIT_FAILED, last
			tree_build(rates, tree)
			total = tree_prefix(tree, M)

		if performed == stop_after:
			return clock, events, OK, last


@njit(nogil=True)
def terminal_positions(a, q, tau, n_runs, rng):
	"""Positions at time tau of ``n_runs`` independent systems started from the step condition.

	Returns an (n_runs, M) int64 array; used for small-M distributional checks."""
	M = len(a)
	out = np.empty((n_runs, M), dtype=np.int64)
	positions = np.empty(M, dtype=np.int64)
	gaps = np.empty(M, dtype=np.int64)
	rates = np.empty(M)
	tree = np.zeros(M + 1)

	for run in range(n_runs):
		for i in range(M):
			positions[i] = -(i + 1)
			gaps[i] = GAP_INF if i == 0 else 0
			rates[i] = jump_rate(a[i], q, gaps[i])
		tree_build(rates, tree)
		advance(positions, gaps, rates, a, tree, q, 0.0, tau, rng, 0, 1 << 62, -1, AUDIT_EVERY, REBUILD_EVERY)
		out[run] = positions
	return out
