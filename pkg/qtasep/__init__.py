"""q-TASEP with finitely many slower particles: hydrodynamics, exact simulation and limit laws."""
__version__ = '0.1.0'

from .utils.errors import (QTasepError, DomainError, ProfileError, ContourError, NonConvergence, PoleError,
						   ToleranceError, QuadratureError, DeadlockError, BudgetError)
from .qfun import QParams
from .hydro import RateProfile, Phase, HydroConstants, ScalingPlan, classify_phase, scaling_plan
