"""Airy, BBP and Hermite kernels.

Airy and BBP kernels are double contour integrals discretized by Gauss-Legendre on the truncated
wedge rays and contracted as matrix products,

	K(u_i, v_j) = (2 pi i)^-2 sum_{a,b} A[i, a] / (z_a - w_b) B[b, j].

The BBP kernel is split as K_Ai + sum_j S_j(u) T_j(v), using
prod_i (z - b_i)/(w - b_i) - 1 = (z - w) sum_j prod_{i<j}(z - b_i) / prod_{i<=j}(w - b_i),
so that each factor is a single contour integral and T_j can pass left of the b_i with residue
circles picking up what it leaves behind. The Hermite kernel uses the Christoffel-Darboux form."""
import dataclasses
import logging
from typing import Sequence

import numpy as np

from .contours import (AIRY_W_ANGLE, AIRY_Z_ANGLE, HERMITE_GAMMA, HERMITE_PHI, KernelSpec, Wedge,
					   circle_nodes, circle_size, clear_of_poles, pole_clusters)
from ..utils.errors import ContourError, QuadratureError
from ..utils.types import RealLike

logger = logging.getLogger(__name__)

TWO_PI_I = 2j * np.pi
KERNEL_SELF_TOL = 1e-8
DIAGONAL_TOL = 1e-6


def _contour_vertices(spec: KernelSpec, x_left: float):
	z0, w0 = spec.vertices(x_left)
	if not z0 > w0:
		raise ContourError(f"z vertex {z0} must lie right of the w vertex {w0}")
	return z0, w0


def _z_side(u: np.ndarray, z0: float, spec: KernelSpec):
	"""Contour nodes and the weighted factors e^{z^3/3 - z u} dz, shape (len(u), nodes)."""
	z, dz = Wedge(z0, AIRY_Z_ANGLE).nodes(spec.L_ray, spec.M_ray)
	return z, dz * np.exp(z ** 3 / 3 - np.outer(u, z))


def _w_side(v: np.ndarray, w: np.ndarray, dw: np.ndarray):
	"""Weighted factors e^{-w^3/3 + w v} dw, shape (len(v), nodes)."""
	return dw * np.exp(-w ** 3 / 3 + np.outer(v, w))


def airy_matrix(u, v, spec: KernelSpec = None, x_left: float = None) -> np.ndarray:
	"""K_Ai on the grid u x v.

	:param x_left: left end of the Fredholm window the arguments come from; sets the vertices"""
	spec = spec or KernelSpec.airy()
	u, v = np.atleast_1d(np.asarray(u, dtype=float)), np.atleast_1d(np.asarray(v, dtype=float))
	if x_left is None:
		x_left = min(u.min(), v.min())

	z0, w0 = _contour_vertices(spec, x_left)
	z, A = _z_side(u, z0, spec)
	w, dw = Wedge(w0, AIRY_W_ANGLE).nodes(spec.L_ray, spec.M_ray)
	B = _w_side(v, w, dw)
	C = 1 / (z[:, None] - w[None, :])
	return (A @ (C @ B.T) / TWO_PI_I ** 2).real


def bbp_correction(u, v, b: Sequence[float], spec: KernelSpec = None, x_left: float = None) -> np.ndarray:
	"""K_BBP - K_Ai on the grid u x v, as sum_j S_j(u) T_j(v)."""
	spec = spec or KernelSpec.bbp(b)
	u, v = np.atleast_1d(np.asarray(u, dtype=float)), np.atleast_1d(np.asarray(v, dtype=float))
	b = np.asarray(b, dtype=float)
	if not len(b):
		return np.zeros((len(u), len(v)))
	if x_left is None:
		x_left = min(u.min(), v.min())

	z0, w0 = _contour_vertices(spec, x_left)

	# S_j(u) = (2 pi i)^-1 int e^{z^3/3 - z u} prod_{i<j} (z - b_i) dz
	z, A = _z_side(u, z0, spec)
	poly = np.ones((len(b), len(z)), dtype=complex)
	for j in range(1, len(b)):
		poly[j] = poly[j - 1] * (z - b[j - 1])
	S = A @ poly.T / TWO_PI_I

	# T_j(v) = (2 pi i)^-1 int e^{-w^3/3 + w v} / prod_{i<=j} (w - b_i) dw, contour right of every b_i
	wT = clear_of_poles(w0, b)
	w, dw = Wedge(wT, AIRY_W_ANGLE).nodes(spec.L_ray, spec.M_ray)
	circles = pole_clusters(b[b > wT])
	for center, radius in circles:
		cw, cdw = circle_nodes(center, radius, circle_size(radius))
		w, dw = np.concatenate([w, cw]), np.concatenate([dw, cdw])
	if circles:
		logger.debug(f"w vertex moved to {wT:.3f}, {len(circles)} residue circles for b={tuple(b)}")

	inv = np.empty((len(b), len(w)), dtype=complex)
	inv[0] = 1 / (w - b[0])
	for j in range(1, len(b)):
		inv[j] = inv[j - 1] / (w - b[j])
	B = _w_side(v, w, dw)
	T = B @ inv.T / TWO_PI_I

	return (S @ T.T).real


def bbp_matrix(u, v, b: Sequence[float], spec: KernelSpec = None, x_left: float = None) -> np.ndarray:
	"""K_BBP on the grid u x v (K_Ai when b is empty)."""
	spec = spec or KernelSpec.bbp(b)
	K = airy_matrix(u, v, spec, x_left)
	if len(b):
		K = K + bbp_correction(u, v, b, spec, x_left)
	return K


def _bbp_kernel_double_contour(u: RealLike, v: RealLike, b: Sequence[float], spec: KernelSpec = None) -> float:
	"""K_BBP straight from its double integral, w vertex right of every b_i.

	Repeated b_i enter as powers of (z - b)/(w - b). Loses accuracy once max b is large."""
	spec = spec or KernelSpec.bbp(b)
	w0 = max([0.0] + list(b)) + 1
	z0 = w0 + 1

	u, v = np.atleast_1d(float(u)), np.atleast_1d(float(v))
	z, A = _z_side(u, z0, spec)
	w, dw = Wedge(w0, AIRY_W_ANGLE).nodes(spec.L_ray, spec.M_ray)
	B = _w_side(v, w, dw)

	ratio = np.ones((len(z), len(w)), dtype=complex)
	values, counts = np.unique(np.asarray(b, dtype=float), return_counts=True)
	for value, count in zip(values, counts):
		ratio *= ((z[:, None] - value) / (w[None, :] - value)) ** count
	C = ratio / (z[:, None] - w[None, :])
	return float((A @ C @ B.T / TWO_PI_I ** 2).real[0, 0])


def _self_checked(evaluate, spec: KernelSpec, name: str, check: bool) -> float:
	value = evaluate(spec)
	if check:
		fine = evaluate(spec.with_nodes(M_ray=2 * spec.M_ray))
		if abs(fine - value) > KERNEL_SELF_TOL:
			raise QuadratureError(f"{name}: contour quadrature with {spec.M_ray} and {2 * spec.M_ray} nodes "
								  f"differs by {abs(fine - value):.3e}")
	return value


def airy_kernel(u: RealLike, v: RealLike, spec: KernelSpec = None, check: bool = True) -> float:
	"""Airy kernel K_Ai(u, v) from its double contour integral.

	:param check: repeat with twice the ray nodes and raise :class:`QuadratureError` if they differ by more than 1e-8"""
	spec = spec or KernelSpec.airy()
	return _self_checked(lambda s: float(airy_matrix(u, v, s)[0, 0]), spec, f"K_Ai({u}, {v})", check)


def bbp_kernel(u: RealLike, v: RealLike, b: Sequence[float], spec: KernelSpec = None, check: bool = True) -> float:
	"""BBP kernel with parameter vector b; equals :func:`airy_kernel` for empty b.

	:param spec: discretization; its b is replaced by ``b``
	:raises ContourError: if fixed vertices in ``spec`` violate w > max b_i or z > w"""
	spec = dataclasses.replace(spec, kind='bbp', b=tuple(b)) if spec is not None else KernelSpec.bbp(b)
	return _self_checked(lambda s: float(bbp_matrix(u, v, b, s)[0, 0]), spec, f"K_BBP({u}, {v}; b={tuple(b)})",
						 check)


def hermite_polynomials(k: int, t) -> np.ndarray:
	"""p_0 .. p_k at t, orthonormal for the weight e^{-t^2/2}. Shape (k + 1, *t.shape)."""
	t = np.asarray(t, dtype=float)
	p = np.empty((k + 1,) + t.shape)
	p[0] = (2 * np.pi) ** -0.25
	if k >= 1:
		p[1] = t * p[0]
	for n in range(1, k):
		p[n + 1] = (t * p[n] - np.sqrt(n) * p[n - 1]) / np.sqrt(n + 1)
	return p


def hermite_kernel(u, v, k: int):
	"""Hermite kernel H_k(u, v) in Christoffel-Darboux form, broadcasting over u and v.

	Pairs with |u - v| < 1e-6 (1 + |u|) use the diagonal limit at the midpoint."""
	if k < 1:
		raise ContourError(f"Hermite kernel needs k >= 1, got {k}")
	u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
	pu, pv = hermite_polynomials(k, u), hermite_polynomials(k, v)
	rk = np.sqrt(k)

	near = np.abs(u - v) < DIAGONAL_TOL * (1 + np.abs(u))
	diff = np.where(near, 1.0, u - v)
	off = rk * (pu[k] * pv[k - 1] - pu[k - 1] * pv[k]) / diff * np.exp(-(u ** 2 + v ** 2) / 4)

	mid = (u + v) / 2
	pm = hermite_polynomials(k, mid)
	lower = pm[k - 2] if k >= 2 else np.zeros_like(mid)
	diag = rk * (rk * pm[k - 1] ** 2 - np.sqrt(k - 1) * lower * pm[k]) * np.exp(-mid ** 2 / 2)

	value = np.where(near, diag, off)
	return float(value) if value.ndim == 0 else value


def hermite_kernel_sum(u, v, k: int):
	"""H_k(u, v) as sum_{n<k} p_n(u) p_n(v) e^{-(u^2+v^2)/4}."""
	u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
	value = (hermite_polynomials(k - 1, u) * hermite_polynomials(k - 1, v)).sum(axis=0) * np.exp(-(u ** 2 + v ** 2) / 4)
	return float(value) if value.ndim == 0 else value


def hermite_kernel_contour(u: RealLike, v: RealLike, k: int, spec: KernelSpec = None) -> float:
	"""H_k from its double contour integral (z vertex 3/2, w vertex 1/2, gamma = phi = pi/8).

	The contour form is the Christoffel-Darboux kernel conjugated by e^{-(u^2 - v^2)/4}; Fredholm
	determinants of the two agree."""
	spec = spec or KernelSpec.hermite(k)
	z0, w0 = spec.vertices(0.0)
	z, dz = Wedge(z0, np.pi / 2 - HERMITE_GAMMA).nodes(spec.L_ray, spec.M_ray)
	w, dw = Wedge(w0, np.pi - HERMITE_PHI).nodes(spec.L_ray, spec.M_ray)
	A = dz * np.exp(z ** 2 / 2 - z * u) * z ** k
	B = dw * np.exp(-w ** 2 / 2 + w * v) / w ** k
	C = 1 / (z[:, None] - w[None, :])
	return float((A @ C @ B / TWO_PI_I ** 2).real)


def kernel_matrix(spec: KernelSpec, nodes: np.ndarray, x_left: float) -> np.ndarray:
	"""Kernel of ``spec`` on nodes x nodes."""
	if spec.kind == 'hermite':
		return hermite_kernel(nodes[:, None], nodes[None, :], spec.k)
	if spec.kind == 'bbp':
		return bbp_matrix(nodes, nodes, spec.b, spec, x_left)
	return airy_matrix(nodes, nodes, spec, x_left)
