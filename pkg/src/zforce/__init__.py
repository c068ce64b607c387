"""Zero forcing sets, their error and variance polynomial vectors, and
numerical checks of null-vector reconstruction from sampled entries."""

from .errorvec import (
    alpha_vector_of_chain,
    error_vector_of_chain,
    error_vector_of_set,
    max_entry,
    variance_vector_of_chain,
    variance_vector_of_set,
)
from .forcing import (
    ForcingChain,
    closure,
    enumerate_forcing_chains,
    greedy_chain,
    is_zero_forcing_set,
    minimum_zero_forcing_sets,
    propagation_time,
)
from .graph import Graph, builtin_graph, parse_edge_list, serialize_edge_list
from .matrices import PatternMatrix, sample_with_null_vector, witness_matrix
from .polynomial import AlphaForm, Poly, cmp_preceq
from .reconstruct import Measurement, back_solve, verify_bounds, verify_variance

__version__ = "0.1.0"
