from .errors import (QTasepError, DomainError, ProfileError, ContourError, NonConvergence, PoleError,
					 ToleranceError, QuadratureError, DeadlockError, BudgetError)
from .config import read_from_config, write_to_config, get_threads, get_cache_dir, get_event_budget
