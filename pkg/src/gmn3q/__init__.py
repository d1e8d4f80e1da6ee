"""Genuine multipartite entanglement of three qubits under collective dephasing.

The package computes the genuine multipartite negativity E(rho) through
the PPT-mixture witness program with duality-gap certification, and
evolves states under the exact entry-wise collective-dephasing law, so
decay rates, logarithmic derivatives, and asymptotic entanglement of
state ensembles can be reproduced end to end.
"""
from .channel import ChannelParams, Z_WEIGHTS, asymptotic_map, choi_matrix, decay_factor, evolve
from .dynamics import (
    EnsembleStats,
    EntanglementSeries,
    TimeGrid,
    asymptotic_ensemble,
    ensemble_sweep,
    log_derivative,
    sweep,
)
from .gmn import (
    BIPARTITIONS,
    Bipartition,
    GmnResult,
    InfeasibleNumerics,
    SdpSettings,
    SolverFailure,
    SolverStatus,
    bipartite_negativity,
    genuine_negativity,
    verify_certificate,
)
from .states import (
    DensityMatrix,
    PureState,
    ghz1,
    ghz2,
    plus_product,
    pure_to_density,
    random_pure,
    random_weighted_graph,
    validate_density,
    w_state,
    weighted_graph_state,
)

__version__ = "0.1.0"
