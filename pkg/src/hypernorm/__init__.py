"""p-norms and p-spectral radii of dense hypermatrices (r-matrices)."""

from .bounds import degree_lower_bound, slice_sum_lower_bound, tuple_lower_bound, uniform_vector_bound
from .errors import (
    DegenerateGradientError,
    EdgeListError,
    HypernormError,
    HypothesisError,
    IncompatibleShapeError,
    IndexOutOfRangeError,
    InputError,
    InvalidPairError,
    SizeCapError,
)
from .hypergraph import UniformHypergraph, adjacency_tensor, degrees, parse_edge_list
from .optimize import (
    AscentConfig,
    AscentResult,
    EqualityConstraint,
    holder_dual_step,
    kkt_residual,
    maximize_pnorm,
    p_spectral_radius,
)
from .oracle import GridSpec, exact_2norm_2matrix, find_counterexample, grid_max
from .tensor import (
    DenseHypermatrix,
    VectorTuple,
    contract_to_matrix,
    is_jk_symmetric,
    is_symmetric,
    linear_form,
    partial_gradient,
    sign_transform,
    slice_sums,
    symmetrize_pair,
)

__version__ = "0.1.0"

__all__ = [
    "AscentConfig",
    "AscentResult",
    "DegenerateGradientError",
    "DenseHypermatrix",
    "EdgeListError",
    "EqualityConstraint",
    "GridSpec",
    "HypernormError",
    "HypothesisError",
    "IncompatibleShapeError",
    "IndexOutOfRangeError",
    "InputError",
    "InvalidPairError",
    "SizeCapError",
    "UniformHypergraph",
    "VectorTuple",
    "adjacency_tensor",
    "contract_to_matrix",
    "degree_lower_bound",
    "degrees",
    "exact_2norm_2matrix",
    "find_counterexample",
    "grid_max",
    "holder_dual_step",
    "is_jk_symmetric",
    "is_symmetric",
    "kkt_residual",
    "linear_form",
    "maximize_pnorm",
    "p_spectral_radius",
    "parse_edge_list",
    "partial_gradient",
    "sign_transform",
    "slice_sum_lower_bound",
    "slice_sums",
    "symmetrize_pair",
    "tuple_lower_bound",
    "uniform_vector_bound",
]
