"""Nearest stable matrix pencil via Riemannian optimization.

Given a square pencil A + xB, compute the distance to the closure of the set
of pencils whose eigenvalues lie in a stability region (closed left half-plane
plus infinity, or the closed unit disc) and return a nearest pencil, by
minimizing a Schur-form residual over the product of two unitary (or
orthogonal) groups with a trust-region method.
"""

from ._kernels import BACKEND_NAME
from .analysis import (
    JordanCluster,
    JordanReport,
    MinimizerResult,
    StabilityVerdict,
    jordan_structure,
    recover_minimizer,
    regularize_singular,
    verify_stability,
)
from .experiments import (
    ExperimentRow,
    experiment_jordan_stats,
    experiment_rank_sweep,
    experiment_size_sweep,
    solve_restarts,
)
from .generators import gen_gaussian, gen_grcar, gen_oscillator, truncate_rank
from .manifold import (
    GroupPair,
    TangentPair,
    egrad_to_rgrad,
    ehess_to_rhess,
    identity_pair,
    inner,
    random_point,
    random_tangent,
    retract,
    tangent_project,
)
from .objective import (
    ObjectiveEvaluation,
    TriangularTarget,
    euclidean_gradient,
    euclidean_hessian_vec,
    evaluate,
    triangular_target,
)
from .pencil import (
    EigKind,
    Field,
    GeneralizedEigenvalue,
    Pencil,
    ScalarPencil,
    distance,
    norm_sq,
    numerical_rank,
    triangular_eigenvalues,
)
from .projection import (
    MedialAxisError,
    ProjectionResult,
    StabilityRegion,
    dproject,
    is_stable_scalar,
    project,
)
from .trust_region import (
    SolveOptions,
    SolveReport,
    StopReason,
    gradient_check,
    hessian_check,
    solve,
    tcg_subproblem,
)

__version__ = "0.1.0"
