"""
p-norms and p-spectral radii of r-matrices by Hoelder-dual block ascent.

Each argument vector (or each group of vectors forced equal by an EqualityConstraint)
is a block. A sweep replaces every block in turn by the Hoelder dual of its gradient,
the closed-form maximizer of a linear function over the unit l^p sphere. Blocks whose
objective is not linear in the block vector (constraint groups with two or more
positions) keep the best of the full step and its damped versions, and never decrease
the objective.

Restarts are independent, seeded by (seed, restart index), and may run on a thread
pool; the best restart wins, ties going to the lowest index.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel, ConfigDict, Field, field_validator

from .config import get_settings
from .errors import DegenerateGradientError, HypothesisError, InputError
from .tensor import (
    DenseHypermatrix,
    FloatArray,
    VectorTuple,
    contract,
    is_symmetric,
    linear_form,
    normalize,
    pnorm,
)

logger = logging.getLogger(__name__)

MONOTONICITY_SLACK = 1e-12
DAMPING_HALVINGS = 12


class EqualityConstraint(BaseModel):
    """A partition of positions 1..r; vectors within one group are forced identical."""

    model_config = ConfigDict(frozen=True)

    groups: tuple[tuple[int, ...], ...] = Field(description="Disjoint groups of 1-based positions covering 1..r")

    @field_validator("groups")
    @classmethod
    def _normalize_groups(cls, groups: tuple[tuple[int, ...], ...]) -> tuple[tuple[int, ...], ...]:
        seen: set[int] = set()
        normalized = []
        for group in groups:
            if not group:
                raise ValueError("constraint groups must be non-empty")
            for position in group:
                if position < 1:
                    raise ValueError(f"positions are 1-based, got {position}")
                if position in seen:
                    raise ValueError(f"position {position} appears in more than one group")
                seen.add(position)
            normalized.append(tuple(sorted(group)))
        return tuple(sorted(normalized))

    @classmethod
    def free(cls, r: int) -> EqualityConstraint:
        """No equalities: every position is its own group."""
        return cls(groups=tuple((m,) for m in range(1, r + 1)))

    @classmethod
    def all_equal(cls, r: int) -> EqualityConstraint:
        """x^(1) = ... = x^(r), the p-spectral radius setting."""
        return cls(groups=(tuple(range(1, r + 1)),))

    @classmethod
    def pair(cls, r: int, j: int, k: int) -> EqualityConstraint:
        """x^(j) = x^(k), everything else free."""
        if j == k:
            raise InputError(f"constraint pair must have distinct positions, got ({j}, {k})")
        rest = tuple((m,) for m in range(1, r + 1) if m not in (j, k))
        return cls(groups=(*rest, (j, k)))

    @property
    def positions(self) -> int:
        return sum(len(g) for g in self.groups)

    def has_odd_group(self) -> bool:
        """Flipping the sign of an odd group's vector flips the sign of L."""
        return any(len(g) % 2 == 1 for g in self.groups)

    def validate_for(self, dims: tuple[int, ...]) -> None:
        covered = sorted(m for g in self.groups for m in g)
        if covered != list(range(1, len(dims) + 1)):
            raise InputError(f"constraint groups {self.groups} do not partition positions 1..{len(dims)}")
        for group in self.groups:
            sizes = {dims[m - 1] for m in group}
            if len(sizes) > 1:
                raise InputError(f"positions {group} have different dims {sorted(sizes)}")


class AscentConfig(BaseModel):
    """Parameters of the multi-restart block ascent."""

    model_config = ConfigDict(frozen=True)

    p: float = Field(ge=1.0, allow_inf_nan=False, description="Norm exponent p >= 1")
    max_sweeps: int = Field(default=500, ge=1, description="Sweep cap per restart")
    tol: float = Field(default=1e-10, gt=0, description="Objective stagnation threshold for one full sweep")
    restarts: int = Field(default=20, ge=1, description="Number of independent restarts")
    seed: int = Field(default=0, ge=0, lt=2**64, description="64-bit seed; restart i uses (seed, i)")
    constraint: EqualityConstraint | None = Field(default=None, description="Equality groups; None means free")
    nonneg_mode: bool | None = Field(
        default=None, description="Keep iterates nonnegative; None follows the tensor's nonnegative flag"
    )
    workers: int | None = Field(default=None, ge=1, description="Thread cap; None uses HYPERNORM_THREADS")


@dataclass
class AscentResult:
    """Best restart of an ascent run.

    ``value`` is |L_A| at ``maximizer``; ``signed_value`` is L_A itself there.
    ``max_decrease`` is the largest objective drop seen over all block updates of all
    restarts, the evidence behind the monotonicity guarantee.
    """

    value: float
    maximizer: VectorTuple
    signed_value: float
    sweeps_used: int
    converged: bool
    kkt_residual: float
    kkt_relative: float
    restart_values: list[float] = field(default_factory=list)
    best_restart: int = 0
    max_decrease: float = 0.0


@dataclass
class _Run:
    objective: float
    group_vectors: list[FloatArray]
    sweeps: int
    converged: bool
    max_decrease: float


def dual_norm(g: ArrayLike, p: float) -> float:
    """|g|_q with q = p/(p-1): the value of max <g, x> over |x|_p = 1."""
    if p == 1.0:
        return pnorm(g, math.inf)
    if math.isinf(p):
        return pnorm(g, 1.0)
    return pnorm(g, p / (p - 1.0))


def holder_dual_step(g: ArrayLike, p: float) -> FloatArray:
    """The unit l^p vector maximizing <g, x>.

    x_i = sign(g_i) |g_i|^{1/(p-1)} / normalizer, achieving <g, x> = |g|_{p/(p-1)}.
    At p = 1 all mass goes to the first coordinate of maximal |g_i|.
    """
    gv = np.asarray(g, dtype=np.float64)
    if p < 1.0:
        raise InputError(f"p must be >= 1, got {p}")
    scale = float(np.max(np.abs(gv), initial=0.0))
    if scale == 0.0:
        raise DegenerateGradientError("gradient is identically zero")
    if p == 1.0:
        x = np.zeros_like(gv)
        i = int(np.argmax(np.abs(gv)))
        x[i] = np.sign(gv[i])
        return x
    w = (np.abs(gv) / scale) ** (1.0 / (p - 1.0))
    return np.sign(gv) * w / pnorm(w, p)


def _expand(groups: tuple[tuple[int, ...], ...], group_vectors: list[FloatArray], r: int) -> list[FloatArray]:
    vectors: list[FloatArray] = [np.empty(0)] * r
    for group, v in zip(groups, group_vectors, strict=True):
        for m in group:
            vectors[m] = v
    return vectors


def _objective(array: FloatArray, vectors: list[FloatArray]) -> float:
    return float(contract(array, dict(enumerate(vectors))))


def _group_gradient(array: FloatArray, vectors: list[FloatArray], group: tuple[int, ...]) -> FloatArray:
    """Sum of the partial gradients over the group's (0-based) axes."""
    total = None
    for m in group:
        g = contract(array, {a: v for a, v in enumerate(vectors) if a != m})
        total = g if total is None else total + g
    assert total is not None
    return total


def _random_unit(rng: np.random.Generator, n: int, p: float, nonneg: bool) -> FloatArray:
    while True:
        v = rng.standard_normal(n)
        if nonneg:
            v = np.abs(v)
        if np.any(v):
            return normalize(v, p)


def _update_block(
    array: FloatArray,
    groups: tuple[tuple[int, ...], ...],
    group_vectors: list[FloatArray],
    index: int,
    p: float,
    nonneg: bool,
    rng: np.random.Generator,
    current: float,
) -> tuple[FloatArray, float]:
    """Return the new vector of block ``index`` and the objective after the update."""
    r = sum(len(g) for g in groups)
    group = groups[index]
    vectors = _expand(groups, group_vectors, r)
    g = _group_gradient(array, vectors, group)

    try:
        candidate = holder_dual_step(g, p)
    except DegenerateGradientError:
        logger.debug("zero gradient for block %s, re-randomizing", group)
        candidate = _random_unit(rng, g.size, p, nonneg)

    trial = list(group_vectors)
    trial[index] = candidate
    value = _objective(array, _expand(groups, trial, r))

    # Singleton blocks: the objective is linear in the block, so the dual step is its exact maximizer.
    if len(group) == 1:
        return candidate, value

    # Grouped blocks: the full step can land on an equal-valued point (e.g. a coordinate swap),
    # so the damped steps x + tau (x' - x) are scanned as well and the best one is kept.
    x = group_vectors[index]
    best_vector, best_value = x, current
    if value > best_value:
        best_vector, best_value = candidate, value
    for halving in range(1, DAMPING_HALVINGS + 1):
        step = x + 0.5**halving * (candidate - x)
        if not np.any(step):
            continue
        trial[index] = normalize(step, p)
        damped = _objective(array, _expand(groups, trial, r))
        if damped > best_value:
            best_vector, best_value = trial[index], damped

    return best_vector, best_value


def _ascend(
    array: FloatArray,
    groups: tuple[tuple[int, ...], ...],
    group_vectors: list[FloatArray],
    cfg: AscentConfig,
    nonneg: bool,
    rng: np.random.Generator,
) -> _Run:
    r = sum(len(g) for g in groups)
    group_vectors = list(group_vectors)
    objective = _objective(array, _expand(groups, group_vectors, r))
    max_decrease = 0.0
    converged = False
    sweeps = 0

    for sweeps in range(1, cfg.max_sweeps + 1):
        before = objective
        for index in range(len(groups)):
            vector, value = _update_block(array, groups, group_vectors, index, cfg.p, nonneg, rng, objective)
            max_decrease = max(max_decrease, objective - value)
            group_vectors[index] = vector
            objective = value
        if objective - before < cfg.tol:
            converged = True
            break

    if max_decrease > MONOTONICITY_SLACK:
        logger.warning("objective decreased by %.3e during a block update", max_decrease)
    return _Run(objective, group_vectors, sweeps, converged, max_decrease)


def kkt_residual(
    A: DenseHypermatrix,
    t: VectorTuple,
    lam: float,
    p: float,
    constraint: EqualityConstraint | None = None,
) -> float:
    """Largest violation of the Lagrange system lam * sign(x_i) |x_i|^{p-1} = g_i.

    g is the partial gradient at each position; for a constraint group the group's
    mean partial gradient is used against the shared vector.
    """
    t.check_compatible(A)
    constraint = constraint or EqualityConstraint.free(A.order)
    constraint.validate_for(A.dims)

    residual = 0.0
    for group in constraint.groups:
        axes = [m - 1 for m in group]
        g = sum(contract(A.array, {a: v for a, v in enumerate(t.vectors) if a != m}) for m in axes) / len(axes)
        x = t.vectors[axes[0]]
        lhs = lam * np.sign(x) * np.abs(x) ** (p - 1.0)
        residual = max(residual, float(np.max(np.abs(lhs - g))))
    return residual


def _resolve_mode(A: DenseHypermatrix, cfg: AscentConfig) -> tuple[EqualityConstraint, bool]:
    constraint = cfg.constraint or EqualityConstraint.free(A.order)
    constraint.validate_for(A.dims)
    nonneg = A.nonnegative if cfg.nonneg_mode is None else cfg.nonneg_mode
    if nonneg and not A.nonnegative:
        raise HypothesisError("nonnegative mode needs a tensor flagged nonnegative")
    return constraint, nonneg


def _zero_groups(constraint: EqualityConstraint) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(m - 1 for m in g) for g in constraint.groups)


def _finish(
    A: DenseHypermatrix,
    constraint: EqualityConstraint,
    groups: tuple[tuple[int, ...], ...],
    runs: list[_Run],
    p: float,
) -> AscentResult:
    best = 0
    for i, run in enumerate(runs):
        if run.objective > runs[best].objective:
            best = i
    winner = runs[best]
    maximizer = VectorTuple(tuple(_expand(groups, winner.group_vectors, A.order)), p)
    signed = linear_form(A, maximizer)
    residual = kkt_residual(A, maximizer, signed, p, constraint)
    if not winner.converged:
        logger.warning("best restart %d did not converge in %d sweeps", best, winner.sweeps)
    return AscentResult(
        value=abs(signed),
        maximizer=maximizer,
        signed_value=signed,
        sweeps_used=winner.sweeps,
        converged=winner.converged,
        kkt_residual=residual,
        kkt_relative=residual / abs(signed) if signed else residual,
        restart_values=[abs(run.objective) for run in runs],
        best_restart=best,
        max_decrease=max(run.max_decrease for run in runs),
    )


def ascend_from(A: DenseHypermatrix, start: VectorTuple, cfg: AscentConfig) -> AscentResult:
    """A single ascent run from ``start``; grouped positions take the vector of the group's first position."""
    start.check_compatible(A)
    constraint, nonneg = _resolve_mode(A, cfg)
    groups = _zero_groups(constraint)
    rng = np.random.default_rng([cfg.seed, 0])

    initial = []
    for group in groups:
        v = np.abs(start.vectors[group[0]]) if nonneg else start.vectors[group[0]]
        initial.append(normalize(v, cfg.p) if np.any(v) else _random_unit(rng, v.size, cfg.p, nonneg))

    # start on the branch where L >= 0: flip an odd group's vector, or ascend on -L
    branch = 1.0
    if not nonneg and _objective(A.array, _expand(groups, initial, A.order)) < 0:
        odd = [i for i, g in enumerate(groups) if len(g) % 2 == 1]
        if odd:
            initial[odd[0]] = -initial[odd[0]]
        else:
            branch = -1.0
    run = _ascend(branch * A.array, groups, initial, cfg, nonneg, rng)
    return _finish(A, constraint, groups, [run], cfg.p)


def maximize_pnorm(A: DenseHypermatrix, cfg: AscentConfig) -> AscentResult:
    """Estimate ||A||_p = max |L_A| over unit l^p vectors, subject to cfg.constraint.

    Global optimality is not guaranteed; the value is the best of ``cfg.restarts``
    monotone ascents from random starts.
    """
    constraint, nonneg = _resolve_mode(A, cfg)
    groups = _zero_groups(constraint)

    if A.is_zero():
        maximizer = VectorTuple.uniform(A.dims, cfg.p)
        return AscentResult(
            value=0.0,
            maximizer=maximizer,
            signed_value=0.0,
            sweeps_used=0,
            converged=True,
            kkt_residual=0.0,
            kkt_relative=0.0,
            restart_values=[0.0] * cfg.restarts,
        )

    # L is odd in an odd group's vector, so max L = max |L|; otherwise track -L too.
    branches = (1.0,) if nonneg or constraint.has_odd_group() else (1.0, -1.0)
    dims = [A.dims[g[0]] for g in groups]

    def restart(i: int) -> _Run:
        rng = np.random.default_rng([cfg.seed, i])
        best: _Run | None = None
        for branch in branches:
            start = [_random_unit(rng, n, cfg.p, nonneg) for n in dims]
            run = _ascend(branch * A.array, groups, start, cfg, nonneg, rng)
            if best is None or run.objective > best.objective:
                best = run
        assert best is not None
        logger.debug("restart %d: objective %.12g after %d sweeps", i, best.objective, best.sweeps)
        return best

    workers = min(cfg.workers or get_settings().threads, cfg.restarts)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(restart, range(cfg.restarts)))
    else:
        runs = [restart(i) for i in range(cfg.restarts)]

    return _finish(A, constraint, groups, runs, cfg.p)


def p_spectral_radius(A: DenseHypermatrix, cfg: AscentConfig) -> AscentResult:
    """rho^(p)(A) = max |L_A(x, ..., x)| over unit l^p vectors x, for symmetric A.

    For nonnegative A and p >= 2 this equals ||A||_p.
    """
    if not is_symmetric(A):
        raise HypothesisError("the p-spectral radius is defined for symmetric tensors")
    return maximize_pnorm(A, cfg.model_copy(update={"constraint": EqualityConstraint.all_equal(A.order)}))
