"""Exception types raised across qtasep.

Everything derives from :class:`QTasepError`; the CLI maps :class:`DomainError`
to exit code 2 and :class:`ToleranceError` / :class:`NonConvergence` to exit code 3."""


class QTasepError(Exception):
	"""Base class for all qtasep errors."""


class DomainError(QTasepError, ValueError):
	"""An argument lies outside the documented domain of an operation."""


class ProfileError(DomainError):
	"""Invalid rate profile, or a perturbed particle index the system does not hold."""


class ContourError(DomainError):
	"""Integration contours violate their ordering constraints."""


class NonConvergence(QTasepError, ArithmeticError):
	"""A series ran out of its term budget before reaching tolerance."""


class PoleError(QTasepError, ArithmeticError):
	"""Evaluation point too close to a pole."""


class ToleranceError(QTasepError, ArithmeticError):
	"""A numerical contract failed (identity check, audit, table range)."""


class QuadratureError(ToleranceError):
	"""A quadrature failed its self-convergence check."""


class DeadlockError(QTasepError, RuntimeError):
	"""Total jump rate is zero, the system cannot move."""


class BudgetError(QTasepError, RuntimeError):
	"""Simulation exceeded its event budget."""
