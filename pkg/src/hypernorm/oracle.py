"""
Brute-force and exact reference computations, independent of the block ascent.

- grid_max: exhaustive search of |L_A| over lattice points of the unit l^p spheres
- exact_2norm_2matrix: largest singular value by power iteration on A^T A
- find_counterexample: random search for symmetric matrices with rho^(p) < ||A||_p

Grid values are lower bounds on the true maximum. Agreement with the optimizer is
always stated with an explicit slack, never as exact equality.
"""

from __future__ import annotations

import itertools
import logging
import math
import string
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .config import get_settings
from .errors import DegenerateGradientError, InputError, SizeCapError
from .optimize import AscentConfig, EqualityConstraint, ascend_from, holder_dual_step
from .tensor import DenseHypermatrix, FloatArray, VectorTuple, contract, linear_form

logger = logging.getLogger(__name__)

COUNTEREXAMPLE_GAP = 1e-3
DOCUMENTED_SLACK_K64 = 5e-3
POWER_ITERATION_TOL = 1e-12
POWER_ITERATION_MAX = 100_000
_ROW_CHUNK = 65_536


class GridSpec(BaseModel):
    """Discretization of the unit l^p spheres for grid_max."""

    model_config = ConfigDict(frozen=True)

    resolution: int = Field(default=64, ge=2, description="K: lattice {0..K}^n per sphere")
    orthant: bool = Field(default=False, description="Only nonnegative grid points")
    refine: bool = Field(default=False, description="Polish the best grid point with block ascent")
    exact_last_block: bool = Field(
        default=True, description="Maximize the last free singleton block in closed form instead of gridding it"
    )
    cap: int | None = Field(default=None, ge=1, description="Evaluation cap; None uses HYPERNORM_GRID_CAP")


@dataclass
class GridResult:
    value: float
    maximizer: VectorTuple
    evaluations: int
    slack: float


@dataclass
class CounterexampleWitness:
    """A symmetric matrix whose constrained (x = y) maximum falls short of its p-norm."""

    matrix: DenseHypermatrix
    p: float
    unconstrained_value: float
    constrained_value: float
    gap: float
    unconstrained_tuple: VectorTuple
    constrained_tuple: VectorTuple
    trial: int


def sphere_grid(n: int, p: float, resolution: int, orthant: bool, cap: int | None = None) -> FloatArray:
    """Primitive lattice directions of {0..K}^n (with sign patterns unless ``orthant``), on the unit l^p sphere.

    Signed grids keep one representative per +-pair (first nonzero coordinate positive),
    since |L| does not change when one argument vector flips sign.
    """
    cap = cap or get_settings().grid_cap
    raw = (resolution + 1) ** n * (1 if orthant else 2**n)
    if raw > cap:
        raise SizeCapError(f"sphere grid for n={n}, K={resolution}", raw, cap)

    lattice = np.indices((resolution + 1,) * n).reshape(n, -1).T
    lattice = lattice[np.gcd.reduce(lattice, axis=1) == 1]
    if not orthant:
        patterns = np.array(list(itertools.product((1, -1), repeat=n)))
        signed = (lattice[None, :, :] * patterns[:, None, :]).reshape(-1, n)
        first = signed[np.arange(len(signed)), np.argmax(signed != 0, axis=1)]
        lattice = np.unique(signed[first > 0], axis=0)

    points = lattice.astype(np.float64)
    scale = np.max(np.abs(points), axis=1, keepdims=True)
    norms = scale * np.sum((np.abs(points) / scale) ** p, axis=1, keepdims=True) ** (1.0 / p)
    return points / norms


def _row_norms(M: FloatArray, q: float) -> FloatArray:
    a = np.abs(M)
    scale = np.max(a, axis=1)
    if math.isinf(q):
        return scale
    safe = np.where(scale > 0, scale, 1.0)
    return scale * np.sum((a / safe[:, None]) ** q, axis=1) ** (1.0 / q)


def _block_dual(G: FloatArray, p: float, orthant: bool) -> FloatArray:
    """Row-wise max of |<g, x>| over unit l^p x (nonnegative x when ``orthant``)."""
    q = math.inf if p == 1.0 else p / (p - 1.0)
    if not orthant:
        return _row_norms(G, q)
    return np.maximum(_row_norms(np.maximum(G, 0.0), q), _row_norms(np.maximum(-G, 0.0), q))


def _exact_block_vector(g: FloatArray, p: float, orthant: bool) -> FloatArray:
    if orthant:
        plus, minus = np.maximum(g, 0.0), np.maximum(-g, 0.0)
        q = math.inf if p == 1.0 else p / (p - 1.0)
        g = plus if _row_norms(plus[None, :], q)[0] >= _row_norms(minus[None, :], q)[0] else minus
    try:
        return holder_dual_step(g, p)
    except DegenerateGradientError:
        return np.full(g.size, g.size ** (-1.0 / p))


def grid_slack(A: DenseHypermatrix, spec: GridSpec) -> float:
    """Conservative gap between the grid maximum and the true maximum.

    |L_A| is Lipschitz with constant <= sum |a| in each argument on the unit balls,
    and every unit vector lies within about max(n)/K of a normalized lattice point,
    so the gap is at most (number of gridded blocks) * max(n) / K * sum |a|. The
    estimate is loose: on the desk-scale fixtures the observed gap at K = 64 stays
    below DOCUMENTED_SLACK_K64.
    """
    blocks = A.order - 1 if spec.exact_last_block else A.order
    return blocks * max(A.dims) / spec.resolution * float(np.sum(np.abs(A.entries)))


def grid_max(
    A: DenseHypermatrix,
    p: float,
    spec: GridSpec | None = None,
    constraint: EqualityConstraint | None = None,
) -> GridResult:
    """Maximum of |L_A| over the product of gridded unit l^p spheres.

    Each constraint group gets one grid shared by its positions. With
    ``exact_last_block`` the last singleton group is maximized in closed form
    (|g|_q by Hoelder), which is exact for that block.
    """
    spec = spec or GridSpec()
    constraint = constraint or EqualityConstraint.free(A.order)
    constraint.validate_for(A.dims)
    if p < 1.0:
        raise InputError(f"p must be >= 1, got {p}")
    cap = spec.cap or get_settings().grid_cap

    groups = [tuple(m - 1 for m in g) for g in constraint.groups]
    exact = None
    if spec.exact_last_block:
        singles = [i for i, g in enumerate(groups) if len(g) == 1]
        if singles and len(groups) > 1:
            exact = singles[-1]
    gridded = [i for i in range(len(groups)) if i != exact]

    cache: dict[int, FloatArray] = {}
    grids = []
    for i in gridded:
        n = A.dims[groups[i][0]]
        if n not in cache:
            cache[n] = sphere_grid(n, p, spec.resolution, spec.orthant, cap)
        grids.append(cache[n])
    evaluations = math.prod(len(g) for g in grids)
    if evaluations > cap:
        raise SizeCapError("grid search", evaluations, cap)
    logger.debug("grid_max: dims=%s p=%s K=%d evaluations=%d", A.dims, p, spec.resolution, evaluations)

    outer, inner = gridded[:-1], gridded[-1]
    outer_sizes = [len(g) for g in grids[:-1]]
    inner_grid = grids[-1]
    contracted = [a for i in outer for a in groups[i]]
    remaining = [a for a in range(A.order) if a not in contracted]
    letters = dict(zip(remaining, string.ascii_lowercase, strict=False))
    operands = "".join(letters[a] for a in remaining)
    subscripts = operands + "," + ",".join("z" + letters[a] for a in groups[inner])
    subscripts += "->z" + (letters[groups[exact][0]] if exact is not None else "")

    def inner_values(partial: FloatArray) -> FloatArray:
        chunks = []
        for start in range(0, len(inner_grid), _ROW_CHUNK):
            P = inner_grid[start : start + _ROW_CHUNK]
            out = np.einsum(subscripts, partial, *([P] * len(groups[inner])))
            chunks.append(_block_dual(out, p, spec.orthant) if exact is not None else np.abs(out))
        return np.concatenate(chunks)

    def scan(flat_range: range) -> tuple[float, int, int]:
        best_value, best_flat, best_row = -1.0, -1, -1
        for flat in flat_range:
            combo = np.unravel_index(flat, outer_sizes) if outer_sizes else ()
            fixed = {a: grids[pos][idx] for pos, idx in enumerate(combo) for a in groups[outer[pos]]}
            values = inner_values(contract(A.array, fixed))
            row = int(np.argmax(values))
            if values[row] > best_value:
                best_value, best_flat, best_row = float(values[row]), flat, row
        return best_value, best_flat, best_row

    total_outer = math.prod(outer_sizes)
    workers = min(get_settings().threads, total_outer)
    if workers > 1:
        bounds = np.linspace(0, total_outer, workers + 1).astype(int)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(scan, [range(lo, hi) for lo, hi in itertools.pairwise(bounds)]))
    else:
        parts = [scan(range(total_outer))]
    best_value, best_flat, best_row = parts[0]
    for part in parts[1:]:
        if part[0] > best_value:
            best_value, best_flat, best_row = part

    vectors: list[FloatArray] = [np.empty(0)] * A.order
    combo = np.unravel_index(best_flat, outer_sizes) if outer_sizes else ()
    for pos, idx in enumerate(combo):
        for a in groups[outer[pos]]:
            vectors[a] = grids[pos][idx]
    for a in groups[inner]:
        vectors[a] = inner_grid[best_row]
    if exact is not None:
        axis = groups[exact][0]
        g = contract(A.array, {a: v for a, v in enumerate(vectors) if a != axis})
        vectors[axis] = _exact_block_vector(g, p, spec.orthant)

    maximizer = VectorTuple(tuple(vectors), p)
    value = abs(linear_form(A, maximizer))

    if spec.refine:
        polished = ascend_from(
            A,
            maximizer,
            AscentConfig(p=p, constraint=constraint, nonneg_mode=spec.orthant and A.nonnegative),
        )
        if polished.value > value:
            value, maximizer = polished.value, polished.maximizer

    return GridResult(value=value, maximizer=maximizer, evaluations=evaluations, slack=grid_slack(A, spec))


def exact_2norm_2matrix(A: DenseHypermatrix) -> float:
    """Largest singular value of a 2-matrix, by power iteration on v -> A^T (A v).

    Starts from a fixed pseudo-random vector and stops when the eigen-residual of the
    Rayleigh quotient falls below 1e-12 relative.
    """
    if A.order != 2:
        raise InputError(f"exact 2-norm needs a 2-matrix, got order {A.order}")
    if A.is_zero():
        return 0.0

    M = A.array
    gram = M.T @ M
    v = np.random.default_rng(0).standard_normal(gram.shape[0])
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(POWER_ITERATION_MAX):
        w = gram @ v
        lam = float(v @ w)
        if np.linalg.norm(w - lam * v) <= POWER_ITERATION_TOL * lam:
            break
        v = w / np.linalg.norm(w)
    else:
        logger.warning("power iteration stopped at %d iterations", POWER_ITERATION_MAX)
    return math.sqrt(max(lam, 0.0))


def _counterexample_candidate(trial: int, rng: np.random.Generator, p: float, n: int) -> DenseHypermatrix:
    if trial == 0 and p < 2:
        # the swap matrix: ||J||_1 = 1 while max L_J(x, x) over |x|_1 = 1 is 1/2
        M = np.zeros((n, n))
        M[0, 1] = M[1, 0] = 1.0
        return DenseHypermatrix.from_array(M)
    if p < 2:
        raw = rng.random((n, n))
    else:
        raw = rng.standard_normal((n, n))
    return DenseHypermatrix.from_array((raw + raw.T) / 2.0)


def find_counterexample(
    p: float,
    trials: int,
    n: int,
    seed: int,
    grid: GridSpec | None = None,
) -> CounterexampleWitness | None:
    """Search symmetric n x n matrices with max_{|x|_p=1} |L(x,x)| < ||A||_p by more than 1e-3.

    Both sides come from grid_max. Candidates are nonnegative for p < 2 (starting with
    the swap matrix) and signed for p > 2. Returns the first witness or None.
    """
    if p == 2:
        raise InputError("p = 2 is covered by the symmetric-attainment theorem; no counterexample exists")
    if n < 2:
        raise InputError(f"n must be at least 2, got {n}")
    grid = grid or GridSpec(resolution=64 if n <= 2 else 16, refine=True)
    rng = np.random.default_rng(seed)

    for trial in range(trials):
        A = _counterexample_candidate(trial, rng, p, n)
        spec = grid.model_copy(update={"orthant": grid.orthant or A.nonnegative})
        free = grid_max(A, p, spec, EqualityConstraint.free(2))
        tied = grid_max(A, p, spec, EqualityConstraint.all_equal(2))
        gap = free.value - tied.value
        logger.debug("counterexample trial %d: free=%.6g tied=%.6g gap=%.3g", trial, free.value, tied.value, gap)
        if gap > COUNTEREXAMPLE_GAP:
            return CounterexampleWitness(
                matrix=A,
                p=p,
                unconstrained_value=free.value,
                constrained_value=tied.value,
                gap=gap,
                unconstrained_tuple=free.maximizer,
                constrained_tuple=tied.maximizer,
                trial=trial,
            )
    return None
