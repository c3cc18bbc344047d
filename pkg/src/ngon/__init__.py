"""Polygon-theory toolkit: geometry, capacities, polytopes, and protocols.

The package models the family of generalized probabilistic theories whose
normalized state space is a regular polygon at height 1 inside a
3-dimensional cone.  It computes their one-shot classical capacities,
enumerates the vertex structure of the weight-capped channel polytope
behind the even-parity 1-bit bound, and runs the communication protocols
that separate decodable information from capacity.
"""

from .capacity import (
    BA_MAX_ITER,
    BA_TOL,
    BAResult,
    CapacityResult,
    Channel,
    ConvergenceError,
    antipodal_pair_channel,
    antipodal_pair_rate,
    binary_entropy,
    blahut_arimoto,
    capacity_candidates,
    induced_channel,
    measurement_capacity,
    mutual_information,
    mutual_information_bits,
    odd_triple_channel,
    odd_triple_rate,
    theory_capacity,
)
from .decomposition import (
    DecompositionError,
    DecompositionResult,
    InfeasibleChannelError,
    ReductionTrace,
    caratheodory_reduce,
    decompose_into_binary_channels,
    trace_information,
)
from .geometry import (
    GEOM_TOL,
    SOLVE_TOL,
    DegenerateTripleError,
    InfeasibleMeasurementError,
    InvalidStateError,
    Measurement,
    Theory,
    closed_form_triple_weights,
    extremal_decomposition,
    min_effect_weight,
    outcome_probability,
    unit_effect,
)
from .polytope import (
    CANONICAL_FOUR,
    UNCLASSIFIED,
    ZERO_WEIGHT,
    ResourceBoundError,
    VertexPoint,
    classify_vertex,
    enumerate_vertices,
    is_vertex,
    max_vertex_capacity,
    vertex_summary,
)
from .protocols import (
    ICReport,
    NEReport,
    SimulationReport,
    best_ic_encoding,
    even_full_alphabet_ne_matrix,
    ic_bound_check,
    ic_encoding,
    ne_matrix,
    run_ic,
    simulate_transmission,
)

__version__ = "0.1.0"

__all__ = [
    "BA_MAX_ITER",
    "BA_TOL",
    "BAResult",
    "CANONICAL_FOUR",
    "CapacityResult",
    "Channel",
    "ConvergenceError",
    "DecompositionError",
    "DecompositionResult",
    "DegenerateTripleError",
    "GEOM_TOL",
    "ICReport",
    "InfeasibleChannelError",
    "InfeasibleMeasurementError",
    "InvalidStateError",
    "Measurement",
    "NEReport",
    "ReductionTrace",
    "ResourceBoundError",
    "SOLVE_TOL",
    "SimulationReport",
    "Theory",
    "UNCLASSIFIED",
    "VertexPoint",
    "ZERO_WEIGHT",
    "antipodal_pair_channel",
    "antipodal_pair_rate",
    "best_ic_encoding",
    "binary_entropy",
    "blahut_arimoto",
    "capacity_candidates",
    "caratheodory_reduce",
    "classify_vertex",
    "closed_form_triple_weights",
    "decompose_into_binary_channels",
    "enumerate_vertices",
    "even_full_alphabet_ne_matrix",
    "extremal_decomposition",
    "ic_bound_check",
    "ic_encoding",
    "induced_channel",
    "is_vertex",
    "max_vertex_capacity",
    "measurement_capacity",
    "min_effect_weight",
    "mutual_information",
    "mutual_information_bits",
    "ne_matrix",
    "odd_triple_channel",
    "odd_triple_rate",
    "outcome_probability",
    "run_ic",
    "simulate_transmission",
    "theory_capacity",
    "trace_information",
    "unit_effect",
    "vertex_summary",
]
