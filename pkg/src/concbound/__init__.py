"""Concurrence bounds for bipartite 2xK mixed quantum states.

Computes the closed-form lower bound on mixed-state concurrence (with basis
optimization), a variational upper bound over pure-state decompositions, the
induced entanglement-of-formation lower bound, PPT verdicts, and exactness
certificates, plus random-ensemble tooling and an analytic 2x3 test family.
"""

__version__ = "0.1.0"

from .bounds import (
    BoundReport,
    ExactnessCertificate,
    LowerBoundResult,
    PPTResult,
    UpperBoundResult,
    bound_report,
    eof_bound_from_sum,
    eof_lower_bound,
    exactness_certificate,
    lower_bound_fixed_basis,
    lower_bound_optimized,
    ppt_verdict,
    upper_bound,
)
from .concurrence import (
    SubstateSet,
    flip_operator,
    project_substates,
    pure_concurrence,
    pure_concurrence_via_flip,
    pure_projection_identity_residual,
    wootters_concurrence,
)
from .linalg import (
    BipartiteDims,
    hermitian_eigensystem,
    matrix_sqrt_psd,
    partial_trace,
    partial_transpose,
    tensor_product,
)
from .optim import OptimizerConfig, isometry_from_params, maximize, minimize, unitary_from_params
from .states import (
    Decomposition,
    DensityMatrix,
    FamilyParams,
    PureState,
    density_matrix_from_json,
    density_matrix_to_json,
    family_exact_concurrence,
    family_state,
    load_density_matrix,
    make_density_matrix,
    random_induced_state,
    save_density_matrix,
    state_seed,
)

__all__ = [name for name in dir() if not name.startswith("_")]
