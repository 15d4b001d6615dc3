"""Contours, quadrature rules and the kernel specification shared by all limit laws.

Every contour is an upward pair of rays leaving a real vertex (a wedge). The z wedges open to the
right, the w wedges to the left; the asymptotic directions are those of the kernel definitions."""
import hashlib
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import roots_legendre

from ..utils.errors import ContourError, DomainError

KINDS = ('airy', 'bbp', 'hermite')

AIRY_Z_ANGLE = math.pi / 3
AIRY_W_ANGLE = 2 * math.pi / 3
HERMITE_GAMMA = math.pi / 8
HERMITE_PHI = math.pi / 8
HERMITE_Z_VERTEX = 1.5
HERMITE_W_VERTEX = 0.5

POLE_CLEARANCE = 0.5
"""Smallest distance kept between a contour vertex and a pole, and between two residue circles"""
CIRCLE_NODES = 64
HERMITE_WINDOW_PAD = 8.0


@lru_cache(maxsize=64)
def gauss_legendre(n: int, a: float, b: float) -> Tuple[np.ndarray, np.ndarray]:
	"""Gauss-Legendre nodes and weights on [a, b] (cached, read-only)."""
	x, w = roots_legendre(n)
	half = (b - a) / 2
	nodes, weights = a + half * (x + 1), half * w
	nodes.setflags(write=False)
	weights.setflags(write=False)
	return nodes, weights


@dataclass(frozen=True)
class Wedge:
	"""Upward contour through ``vertex``: in along :math:`e^{-i\\,angle}\\infty`, out along :math:`e^{i\\,angle}\\infty`."""
	vertex: float
	angle: float

	def nodes(self, L_ray: float, M_ray: int) -> Tuple[np.ndarray, np.ndarray]:
		"""Points and complex weights (dz included) of the two truncated half-rays."""
		s, ws = gauss_legendre(M_ray, 0.0, float(L_ray))
		up, down = np.exp(1j * self.angle), np.exp(-1j * self.angle)
		points = np.concatenate([self.vertex + s * up, self.vertex + s * down])
		weights = np.concatenate([ws * up, -ws * down])
		return points, weights


def circle_nodes(center: float, radius: float, n: int) -> Tuple[np.ndarray, np.ndarray]:
	"""Trapezoid rule on a counter-clockwise circle, weights include dz."""
	phase = np.exp(2j * np.pi * np.arange(n) / n)
	return center + radius * phase, (2 * np.pi / n) * 1j * radius * phase


def pole_clusters(poles: Sequence[float], clearance: float = POLE_CLEARANCE) -> List[Tuple[float, float]]:
	"""Group poles closer than ``clearance`` and return one ``(center, radius)`` circle per group.

	Each circle keeps clearance / 2 from its own poles and from every other group."""
	clusters = []
	for p in sorted(poles):
		if clusters and p - clusters[-1][-1] < clearance:
			clusters[-1].append(p)
		else:
			clusters.append([p])
	return [((c[0] + c[-1]) / 2, (c[-1] - c[0]) / 2 + clearance / 2) for c in clusters]


def circle_size(radius: float, clearance: float = POLE_CLEARANCE) -> int:
	"""Trapezoid nodes for a residue circle; wide clusters converge more slowly."""
	half_span = radius - clearance / 2
	return CIRCLE_NODES * (1 + math.ceil(4 * half_span))


def airy_vertices(x_left: float) -> Tuple[float, float]:
	"""z and w vertices for kernel arguments in [x_left, x_left + L_dom]."""
	z0 = math.sqrt(max(x_left, 0.0)) + 0.5
	return z0, -z0


def clear_of_poles(w0: float, poles: Sequence[float], clearance: float = POLE_CLEARANCE) -> float:
	"""Move a w vertex left until every pole is at least ``clearance`` away from it."""
	w = w0
	while True:
		close = [b for b in poles if abs(b - w) < clearance]
		if not close:
			return w
		w = min(close) - clearance


@dataclass(frozen=True)
class KernelSpec:
	"""Which limit kernel, and how its contour and Fredholm integrals are discretized.

	:param kind: ``'airy'``, ``'bbp'`` or ``'hermite'``
	:param b: BBP parameters (``kind='bbp'``); an empty vector is the Airy kernel
	:param k: GUE size (``kind='hermite'``)
	:param z_vertex: fixed z vertex; None picks it from the Fredholm window
	:param w_vertex: fixed w vertex; None picks it from the Fredholm window"""
	kind: str = 'airy'
	b: Tuple[float, ...] = ()
	k: int = 0
	L_ray: float = 10.0
	M_ray: int = 64
	L_dom: float = 14.0
	m: int = 48
	z_vertex: Optional[float] = None
	w_vertex: Optional[float] = None

	def __post_init__(self):
		if self.kind not in KINDS:
			raise DomainError(f"unknown kernel kind '{self.kind}', expected one of {KINDS}")
		object.__setattr__(self, 'b', tuple(float(b) for b in self.b))
		if not all(math.isfinite(b) for b in self.b):
			raise DomainError(f"BBP parameters must be finite, got {self.b}")
		if self.kind != 'bbp' and self.b:
			raise DomainError(f"only BBP kernels take a b vector, got kind '{self.kind}'")
		if self.kind == 'hermite' and not 1 <= self.k:
			raise DomainError(f"Hermite kernel needs k >= 1, got {self.k}")
		if self.L_ray <= 0 or self.M_ray < 2 or self.L_dom <= 0 or self.m < 2:
			raise DomainError(f"invalid discretization in {self}")

		if self.kind == 'hermite':
			return
		if self.w_vertex is not None and self.b and not self.w_vertex > max(self.b):
			raise ContourError(f"w vertex {self.w_vertex} must lie right of every b_i (max {max(self.b)})")
		if self.z_vertex is not None and self.w_vertex is not None and not self.z_vertex > self.w_vertex:
			raise ContourError(f"z vertex {self.z_vertex} must lie right of the w vertex {self.w_vertex}")

	@classmethod
	def airy(cls, **kwargs) -> 'KernelSpec':
		return cls('airy', **kwargs)

	@classmethod
	def bbp(cls, b: Sequence[float], **kwargs) -> 'KernelSpec':
		return cls('bbp', b=tuple(b), **kwargs)

	@classmethod
	def hermite(cls, k: int, **kwargs) -> 'KernelSpec':
		return cls('hermite', k=k, **kwargs)

	def with_nodes(self, m: int = None, M_ray: int = None) -> 'KernelSpec':
		"""Copy with a different Nystrom or contour resolution."""
		return KernelSpec(self.kind, self.b, self.k, self.L_ray, M_ray or self.M_ray, self.L_dom, m or self.m,
						  self.z_vertex, self.w_vertex)

	@property
	def label(self) -> str:
		if self.kind == 'hermite':
			return f"G_{self.k}"
		if self.kind == 'bbp' and self.b:
			return f"F_BBP,{len(self.b)},({','.join(f'{b:.6g}' for b in self.b)})"
		return 'F_GUE'

	def window(self, x: float) -> Tuple[float, float]:
		"""Truncated Fredholm interval for the CDF at x."""
		hi = x + self.L_dom
		if self.kind == 'hermite':
			hi = max(hi, math.sqrt(4 * self.k) + HERMITE_WINDOW_PAD)
		return x, hi

	def vertices(self, x_left: float) -> Tuple[float, float]:
		"""(z, w) vertices used for kernel arguments at or right of x_left."""
		if self.kind == 'hermite':
			return HERMITE_Z_VERTEX, HERMITE_W_VERTEX
		z0, w0 = airy_vertices(x_left)
		return (z0 if self.z_vertex is None else self.z_vertex,
				w0 if self.w_vertex is None else self.w_vertex)

	def to_dict(self) -> dict:
		return {'kind': self.kind, 'b': list(self.b), 'k': self.k, 'L_ray': self.L_ray, 'M_ray': self.M_ray,
				'L_dom': self.L_dom, 'm': self.m, 'z_vertex': self.z_vertex, 'w_vertex': self.w_vertex}

	@classmethod
	def from_dict(cls, data: dict) -> 'KernelSpec':
		return cls(**{**data, 'b': tuple(data.get('b', ()))})

	def fingerprint(self) -> str:
		return hashlib.sha1(json.dumps(self.to_dict(), sort_keys=True).encode()).hexdigest()


@dataclass(frozen=True)
class QuadratureGrid:
	"""Nystrom nodes and weights on a truncated Fredholm window."""
	nodes: np.ndarray = field(repr=False)
	weights: np.ndarray = field(repr=False)
	lo: float = 0.0
	hi: float = 0.0

	@classmethod
	def on(cls, spec: KernelSpec, x: float, m: int = None) -> 'QuadratureGrid':
		lo, hi = spec.window(x)
		nodes, weights = gauss_legendre(m or spec.m, float(lo), float(hi))
		return cls(nodes, weights, lo, hi)

	def __len__(self):
		return len(self.nodes)
