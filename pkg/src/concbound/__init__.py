"""Certified lower bounds on bipartite and tripartite concurrence.

Spectral gap aggregates over antisymmetric-generator cross terms give
computable lower bounds on the squared concurrence of mixed states,
with a joint three-split variant that detects bound entanglement
invisible to every bipartition.
"""
from .bounds_bipartite import (
    BoundReport,
    SubsetEntry,
    concurrence_pure,
    concurrence_pure_sumrule,
    decomposition_average,
    delta_k,
    delta_total_bound,
    lambda_spectrum,
    observation1_bound,
    ppt_min_eigenvalue,
    wootters_concurrence,
)
from .bounds_multipartite import (
    ctau_pure,
    delta_tot_k,
    observation2_bound,
    observation3_bound,
)
from .generators import (
    Bipartition,
    GeneratorSet,
    GeneratorTriple,
    bipartite_generators,
    canonical_triple,
    example_operators,
    so_generators,
    tripartite_generators,
)
from .optimizer import (
    OptimizerConfig,
    ScanResult,
    optimize_bound_bipartite,
    optimize_bound_multipartite,
    optimize_u,
    threshold_scan,
)
from .states import (
    Decomposition,
    DensityMatrix,
    PureState,
    bell_state,
    ghz_state,
    horodecki_state,
    load_state,
    maximally_mixed,
    partial_trace,
    partial_transpose,
    random_decomposition,
    random_density,
    random_pure,
    save_state,
    w_state,
    white_noise_mix,
)

__version__ = "0.1.0"
