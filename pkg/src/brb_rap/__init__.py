"""Exact solver for the series-parallel redundancy allocation problem with mixed components."""

from .enumeration import (
    EnumerationOrder,
    ScoredConfig,
    SubsystemTable,
    build_subsystem_table,
    forward_bat,
    prefix_restrict,
    upper_bound_bat,
)
from .errors import (
    CodecError,
    InfeasibleInstanceError,
    InstanceError,
    OracleRefusal,
    RapError,
    ResourceLimitError,
    SolutionParseError,
    StructuralError,
)
from .model import (
    Aggregates,
    ComponentOption,
    RapInstance,
    SolutionVector,
    SubsystemSpec,
    format_solution_string,
    is_feasible,
    load_instance,
    parse_solution_string,
    space_size_component_based,
    space_size_number_based,
    subsystem_aggregates,
    system_aggregates,
)
from .pruning import (
    SuffixBounds,
    admit_partial,
    compute_suffix_bounds,
    dominance_filter,
    filter_by_rlb,
)
from .solver import SolveReport, SolverOptions, reconstruct, solve

__version__ = "0.1.0"
