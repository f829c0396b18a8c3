"""Closed-form lower bounds on the p-spectral radius of symmetric nonnegative r-matrices."""

from __future__ import annotations

import math
from typing import TYPE_CHECKING

import numpy as np
from numpy.typing import ArrayLike

from .errors import HypothesisError
from .tensor import DenseHypermatrix, VectorTuple, is_symmetric, linear_form, slice_sums

if TYPE_CHECKING:
    from .hypergraph import UniformHypergraph


def _require_p(p: float) -> None:
    if not p >= 2 or math.isinf(p):
        raise HypothesisError(f"the bound holds for finite p >= 2, got p = {p}")


def _require_symmetric_nonnegative(A: DenseHypermatrix) -> None:
    if np.any(A.entries < 0):
        raise HypothesisError("the bound needs a nonnegative tensor")
    if not is_symmetric(A):
        raise HypothesisError("the bound needs a symmetric tensor")


def power_mean_bound(values: ArrayLike, n: int, r: int, p: float) -> float:
    """n^{1-r/p} * ((1/n) * sum v_i^{p/(p-1)})^{(p-1)/p}; zero entries contribute 0."""
    v = np.asarray(values, dtype=np.float64)
    q = p / (p - 1.0)
    return n ** (1.0 - r / p) * float(np.mean(v**q)) ** (1.0 / q)


def slice_sum_lower_bound(A: DenseHypermatrix, p: float) -> float:
    """rho^(p)(A) >= n^{1-r/p} ((1/n) sum S_i^{p/(p-1)})^{(p-1)/p} from the slice-sums S_i."""
    _require_p(p)
    _require_symmetric_nonnegative(A)
    return power_mean_bound(slice_sums(A), A.dims[0], A.order, p)


def degree_lower_bound(G: UniformHypergraph, p: float) -> float:
    """rho^(p)(G) >= (r-1)! n^{1-r/p} ((1/n) sum d_i^{p/(p-1)})^{(p-1)/p}."""
    from .hypergraph import degrees

    _require_p(p)
    return math.factorial(G.r - 1) * power_mean_bound(degrees(G), G.n, G.r, p)


def tuple_lower_bound(A: DenseHypermatrix, t: VectorTuple) -> float:
    """|L_A(t)| for a feasible tuple t, a lower bound on rho^(p)(A) when A is symmetric nonnegative and p >= 2."""
    _require_p(t.p)
    _require_symmetric_nonnegative(A)
    if not t.is_feasible(1e-9):
        raise HypothesisError("the tuple must consist of unit l^p vectors")
    return abs(linear_form(A, t))


def uniform_vector_bound(A: DenseHypermatrix, p: float) -> float:
    """n^{-r/p} * sum of entries: tuple_lower_bound at the uniform unit vectors."""
    return tuple_lower_bound(A, VectorTuple.uniform(A.dims, p))
