"""Symmetry-based verification of quantum network states.

Decides whether multiqubit (and small-qudit) states can be prepared in
networks with limited sources, evaluates anticommutation witnesses and
noise/fidelity thresholds, and certifies individual network links.
"""

__version__ = "0.1.0"

from .pauli import PauliString, parse, multiply, commutes, anticommutes, pairwise_anticommuting
from .graphs import (
    Graph,
    parse_graph6,
    format_graph6,
    local_complement,
    lc_orbit,
    triangle_decomposition,
    TriangleDecomposition,
    is_path4,
    enumerate_graphs,
)
from .states import (
    DenseState,
    ghz,
    dicke,
    graph_state,
    basis_state,
    white_noise,
    expectation,
    fidelity,
    partial_trace,
    partial_transpose_min_eig,
)
from .network import (
    Network,
    Source,
    Inflation,
    triangle_network,
    square_network,
    complete_network,
    all_but_one_network,
    consecutive_triples_network,
    standard_inflations,
    custom_inflation,
    equal_marginals,
    separable_cut,
    patterns_equal,
    inflation_marginal,
    base_marginal,
    random_network_state,
)
from .witness import (
    Witness,
    WitnessReport,
    Direct,
    Chained,
    evaluate,
    validate_witness,
    ghz_triangle_witness,
    cluster_square_witness,
    theorem3_witness,
    tripartite_demo_witnesses,
    link_certification,
    link_certification_search,
    white_noise_threshold,
    closed_form_threshold,
)
from .nogo import (
    NoGoCertificate,
    theorem3_check,
    degree_rules_check,
    observation1_scan,
    replay_certificate,
)
from .symmetry import (
    flip_operator,
    symmetric_projector,
    is_perm_symmetric,
    is_antisymmetric,
    marginal_symmetry_lift,
    observation2_verdict,
    SymmetryVerdict,
)
from .bounds import (
    CorrelationVariables,
    ClusterVariables,
    covariance_matrix_z,
    comparison_matrix,
    itn_cm_check,
    gisin_check,
    extra_constraints_check,
    ghz_fidelity_bound,
    cluster_fidelity_bound,
)
