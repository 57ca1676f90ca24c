"""Pseudo-random graphs over finite fields: construction, spectra, exact
configuration counts and VC-dimension of neighbourhood families."""

from .builders import (
    FieldGraphSpec,
    Polynomial,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    distance_graph,
    dot_product_graph,
    empty_graph,
    graph_from_edges,
    polynomial_graph,
    random_graph,
)
from .ffield import FieldVector, PrimeField, all_vectors, dot, field_arith, sqdist
from .graph import (
    DenseGraph,
    SpectralProfile,
    common_neighbors,
    degrees_into,
    prune_by_degree,
    spectral_profile,
)
from .homcount import (
    BudgetExceeded,
    Pattern,
    census,
    count_named,
    count_pattern_bruteforce,
    cycle_pattern,
    path_pattern,
    pattern_by_name,
)
from .vcdim import (
    ShatterWitness,
    VCBudgetExceeded,
    find_selector_triple,
    is_shattered,
    vc_at_least,
    vc_dimension_exact,
)

__version__ = "0.1.0"
