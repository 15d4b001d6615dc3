from .rate_tree import RateTree
from .streams import RngStream
from .system import SystemState, JumpRecord, new_system, step, run_until
from .coupled import coupled_positions
from .sampling import (SampleRecord, SampleTable, MonteCarloConfig, xi_sample, sample_position, monte_carlo,
					   profile_dump)
