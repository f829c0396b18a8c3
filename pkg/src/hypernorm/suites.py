"""Verification suites behind ``hypernorm verify``, registered with the suite registry.

Every suite draws its cases from ``numpy.random.default_rng([seed, case])`` so a case
can be reproduced on its own, and returns a report of the form

    {"suite", "config", "cases", "passed", "failed", "ok", "diagnostics"}

with one diagnostics entry per case.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from typing import Annotated, Any

import numpy as np
from pydantic import BaseModel, BeforeValidator, ConfigDict, Field

from .bounds import slice_sum_lower_bound
from .errors import HypothesisError, InputError
from .generate import ones, random_jk_symmetric, random_signs, random_symmetric, random_unit_vector
from .hypergraph import adjacency_tensor, complete_hypergraph
from .optimize import (
    MONOTONICITY_SLACK,
    AscentConfig,
    AscentResult,
    EqualityConstraint,
    dual_norm,
    holder_dual_step,
    maximize_pnorm,
    p_spectral_radius,
)
from .oracle import DOCUMENTED_SLACK_K64, GridSpec, exact_2norm_2matrix, find_counterexample, grid_max
from .registry import verification_suite
from .tensor import DenseHypermatrix, contract_to_matrix, pnorm, sign_transform, symmetrize_pair

logger = logging.getLogger(__name__)

TH2P_PS = (2.0, 2.5, 3.0, 4.0)
THRP_PS = (2.0, 3.0, 4.0)
THRP_DEFAULT_DIMS = (2, 3, 3)
SIGN_FLIP_PS = (2.0, 3.0)
BOUNDS_PS = (2.0, 2.5, 4.0)
HOLDER_PS = (1.5, 2.0, 3.0, 10.0)
POINTWISE_SLACK = 1e-12
TIGHTNESS_TOL = 1e-9


def _split_ints(value: Any) -> Any:
    if isinstance(value, str):
        return tuple(int(tok) for tok in value.split(",") if tok.strip())
    return value


CommaInts = Annotated[tuple[int, ...], BeforeValidator(_split_ints)]


class SuiteArgs(BaseModel):
    """Options shared by every suite."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    seed: int = Field(default=0, ge=0, lt=2**64, description="64-bit base seed; case i uses default_rng([seed, i])")


class AscentSuiteArgs(SuiteArgs):
    restarts: int = Field(default=20, ge=1, description="Ascent restarts per optimization")
    tol: float = Field(default=1e-6, gt=0, description="Agreement tolerance between the two optima")


def _pick_p(case: int, p: float | None, choices: Sequence[float]) -> float:
    return p if p is not None else choices[case % len(choices)]


def _require_p_at_least_two(p: float | None, choices: Sequence[float]) -> None:
    ps = [p] if p is not None else list(choices)
    if any(not value >= 2 for value in ps):
        raise HypothesisError(f"the theorem needs p >= 2, got p = {min(ps)}")


def _case_rng(seed: int, case: int) -> np.random.Generator:
    return np.random.default_rng([seed, case])


def _ascent_config(p: float, args: AscentSuiteArgs, **updates: Any) -> AscentConfig:
    return AscentConfig(p=p, restarts=args.restarts, seed=args.seed, **updates)


def _monotone(*results: AscentResult) -> bool:
    return all(r.max_decrease <= MONOTONICITY_SLACK for r in results)


def _report(suite: str, args: BaseModel, outcomes: list[dict[str, Any]]) -> dict[str, Any]:
    passed = sum(1 for o in outcomes if o["ok"])
    failed = len(outcomes) - passed
    if failed:
        logger.info("suite %s: %d of %d cases failed", suite, failed, len(outcomes))
    return {
        "suite": suite,
        "config": args.model_dump(mode="json"),
        "cases": len(outcomes),
        "passed": passed,
        "failed": failed,
        "ok": failed == 0,
        "diagnostics": outcomes,
    }


def _agreement_case(
    case: int, p: float, A: DenseHypermatrix, free: AscentResult, tied: AscentResult, tol: float
) -> dict[str, Any]:
    gap = free.value - tied.value
    ok = abs(gap) <= tol and _monotone(free, tied)
    logger.debug("case %d: p=%s free=%.12g constrained=%.12g gap=%.3g", case, p, free.value, tied.value, gap)
    return {
        "case": case,
        "p": p,
        "dims": list(A.dims),
        "unconstrained": free.value,
        "constrained": tied.value,
        "gap": gap,
        "max_decrease": max(free.max_decrease, tied.max_decrease),
        "ok": ok,
    }


# ---------------------------------------------------------------------------
# theorems
# ---------------------------------------------------------------------------


class Th2pArgs(AscentSuiteArgs):
    """Arguments for the th2p suite."""

    cases: int = Field(default=200, ge=1, description="Number of random matrices")
    n_max: int = Field(default=5, ge=1, description="Largest matrix size n")
    p: float | None = Field(default=None, description="Fixed p; by default cycles through 2, 2.5, 3, 4")


@verification_suite(
    name="th2p",
    description="Symmetric nonnegative matrices, p >= 2: ||A||_p equals the maximum of L_A(x, x)",
    category="theorems",
    arg_model=Th2pArgs,
)
def verify_th2p(args: Th2pArgs) -> dict[str, Any]:
    _require_p_at_least_two(args.p, TH2P_PS)
    outcomes = []
    for case in range(args.cases):
        rng = _case_rng(args.seed, case)
        p = _pick_p(case, args.p, TH2P_PS)
        n = int(rng.integers(1, args.n_max + 1))
        A = random_symmetric(n, 2, rng)
        cfg = _ascent_config(p, args)
        outcomes.append(_agreement_case(case, p, A, maximize_pnorm(A, cfg), p_spectral_radius(A, cfg), args.tol))
    return _report("th2p", args, outcomes)


class Thr2Args(AscentSuiteArgs):
    """Arguments for the thr2 suite."""

    cases: int = Field(default=100, ge=1, description="Number of random tensors")
    dims: CommaInts = Field(default=(2, 3, 3), description="Tensor dims n_1,...,n_r")
    pair: CommaInts = Field(default=(2, 3), description="Symmetric position pair j,k")
    p: float = Field(default=2.0, description="Must be 2: the signed case holds only there")


def _check_pair(pair: tuple[int, ...]) -> tuple[int, int]:
    if len(pair) != 2:
        raise InputError(f"pair must be two positions j,k, got {list(pair)}")
    return pair[0], pair[1]


@verification_suite(
    name="thr2",
    description="Signed (j,k)-symmetric tensors at p = 2: forcing x^(j) = x^(k) keeps the norm",
    category="theorems",
    arg_model=Thr2Args,
)
def verify_thr2(args: Thr2Args) -> dict[str, Any]:
    if args.p != 2.0:
        raise HypothesisError(f"the signed theorem holds only at p = 2, got p = {args.p}")
    j, k = _check_pair(args.pair)
    r = len(args.dims)
    outcomes = []
    for case in range(args.cases):
        rng = _case_rng(args.seed, case)
        A = random_jk_symmetric(args.dims, j, k, rng, signed=True)
        free = maximize_pnorm(A, _ascent_config(2.0, args))
        tied = maximize_pnorm(A, _ascent_config(2.0, args, constraint=EqualityConstraint.pair(r, j, k)))
        outcome = _agreement_case(case, 2.0, A, free, tied, args.tol)

        # fixing the other vectors at the maximizer leaves a symmetric matrix whose 2-norm is ||A||_2
        exact = exact_2norm_2matrix(contract_to_matrix(A, free.maximizer, j, k))
        outcome["exact_contracted"] = exact
        outcome["ok"] = outcome["ok"] and abs(exact - free.value) <= args.tol
        outcomes.append(outcome)
    return _report("thr2", args, outcomes)


class ThrpArgs(AscentSuiteArgs):
    """Arguments for the thrp suite."""

    cases: int = Field(default=100, ge=1, description="Number of random tensors")
    r: int | None = Field(default=None, ge=2, description="Order; with n, builds dims n,...,n (default 3)")
    n: int | None = Field(default=None, ge=1, description="Common size; with r, builds dims n,...,n (default 3)")
    dims: CommaInts | None = Field(
        default=None, description="Tensor dims n_1,...,n_r (default 2,3,3 unless r or n is given)"
    )
    pair: CommaInts | None = Field(default=None, description="Symmetric position pair j,k; defaults to r-1,r")
    p: float | None = Field(default=None, description="Fixed p; by default cycles through 2, 3, 4")


@verification_suite(
    name="thrp",
    description="Nonnegative (j,k)-symmetric tensors, p >= 2: forcing x^(j) = x^(k) keeps the norm",
    category="theorems",
    arg_model=ThrpArgs,
)
def verify_thrp(args: ThrpArgs) -> dict[str, Any]:
    _require_p_at_least_two(args.p, THRP_PS)
    if args.dims is not None:
        dims = args.dims
    elif args.r is None and args.n is None:
        dims = THRP_DEFAULT_DIMS
    else:
        dims = (args.n or 3,) * (args.r or 3)
    j, k = _check_pair(args.pair or (len(dims) - 1, len(dims)))
    outcomes = []
    for case in range(args.cases):
        rng = _case_rng(args.seed, case)
        p = _pick_p(case, args.p, THRP_PS)
        A = random_jk_symmetric(dims, j, k, rng)
        free = maximize_pnorm(A, _ascent_config(p, args))
        tied = maximize_pnorm(A, _ascent_config(p, args, constraint=EqualityConstraint.pair(len(dims), j, k)))
        outcomes.append(_agreement_case(case, p, A, free, tied, args.tol))
    return _report("thrp", args, outcomes)


class CorpArgs(AscentSuiteArgs):
    """Arguments for the corp suite."""

    cases: int = Field(default=50, ge=1, description="Number of random symmetric tensors")
    r: int = Field(default=3, ge=2, description="Order")
    n: int = Field(default=3, ge=1, description="Size of every index")
    p: float | None = Field(default=None, description="Fixed p; by default cycles through 2, 2.5, 3, 4")


@verification_suite(
    name="corp",
    description="Symmetric nonnegative r-matrices, p >= 2: ||A||_p equals the p-spectral radius",
    category="theorems",
    arg_model=CorpArgs,
)
def verify_corp(args: CorpArgs) -> dict[str, Any]:
    _require_p_at_least_two(args.p, TH2P_PS)
    outcomes = []
    for case in range(args.cases):
        rng = _case_rng(args.seed, case)
        p = _pick_p(case, args.p, TH2P_PS)
        A = random_symmetric(args.n, args.r, rng)
        cfg = _ascent_config(p, args)
        outcomes.append(_agreement_case(case, p, A, maximize_pnorm(A, cfg), p_spectral_radius(A, cfg), args.tol))
    return _report("corp", args, outcomes)


# ---------------------------------------------------------------------------
# constructions
# ---------------------------------------------------------------------------


class SymmetrizationArgs(SuiteArgs):
    """Arguments for the symmetrization suite."""

    cases: int = Field(default=1000, ge=1, description="Number of random (B, x, y) triples")
    n_max: int = Field(default=5, ge=1, description="Largest matrix size n")
    p_min: float = Field(default=2.0, description="Smallest p drawn")
    p_max: float = Field(default=6.0, description="Largest p drawn")


@verification_suite(
    name="symmetrization",
    description="L_B(x, y) <= L_B(z, z) for z = ((x^p + y^p) / 2)^(1/p), B symmetric nonnegative, p >= 2",
    category="constructions",
    arg_model=SymmetrizationArgs,
)
def verify_symmetrization(args: SymmetrizationArgs) -> dict[str, Any]:
    if not args.p_min >= 2:
        raise HypothesisError(f"symmetrization dominance needs p >= 2, got p_min = {args.p_min}")
    if args.p_max < args.p_min:
        raise InputError(f"p_max {args.p_max} is below p_min {args.p_min}")
    outcomes = []
    for case in range(args.cases):
        rng = _case_rng(args.seed, case)
        n = int(rng.integers(1, args.n_max + 1))
        p = float(rng.uniform(args.p_min, args.p_max))
        B = random_symmetric(n, 2, rng).array
        x = random_unit_vector(n, p, rng)
        y = random_unit_vector(n, p, rng)
        z = symmetrize_pair(x, y, p)
        mixed = float(x @ B @ y)
        diagonal = float(z @ B @ z)
        norm_error = abs(pnorm(z, p) - 1.0)
        outcomes.append(
            {
                "case": case,
                "n": n,
                "p": p,
                "mixed": mixed,
                "symmetrized": diagonal,
                "norm_error": norm_error,
                "ok": mixed <= diagonal + POINTWISE_SLACK and norm_error <= POINTWISE_SLACK,
            }
        )
    return _report("symmetrization", args, outcomes)


class PowerMeanArgs(SuiteArgs):
    """Arguments for the power-mean suite."""

    cases: int = Field(default=1000, ge=1, description="Number of random scalar pairs")
    p_min: float = Field(default=2.0, description="Smallest p drawn")
    p_max: float = Field(default=6.0, description="Largest p drawn")


@verification_suite(
    name="power-mean",
    description="((a^2 + b^2) / 2)^(1/2) <= ((a^p + b^p) / 2)^(1/p) for nonnegative a, b and p >= 2",
    category="constructions",
    arg_model=PowerMeanArgs,
)
def verify_power_mean(args: PowerMeanArgs) -> dict[str, Any]:
    if not args.p_min >= 2:
        raise HypothesisError(f"the power-mean step needs p >= 2, got p_min = {args.p_min}")
    if args.p_max < args.p_min:
        raise InputError(f"p_max {args.p_max} is below p_min {args.p_min}")
    outcomes = []
    for case in range(args.cases):
        rng = _case_rng(args.seed, case)
        a, b = rng.random(2)
        p = float(rng.uniform(args.p_min, args.p_max))
        quadratic = float(np.sqrt((a**2 + b**2) / 2.0))
        power = float(((a**p + b**p) / 2.0) ** (1.0 / p))
        outcomes.append(
            {
                "case": case,
                "p": p,
                "quadratic_mean": quadratic,
                "power_mean": power,
                "ok": quadratic <= power + POINTWISE_SLACK,
            }
        )
    return _report("power-mean", args, outcomes)


class HolderArgs(SuiteArgs):
    """Arguments for the holder suite."""

    cases: int = Field(default=1000, ge=1, description="Number of random gradients")
    n_max: int = Field(default=6, ge=1, description="Largest gradient length")
    competitors: int = Field(default=100, ge=0, description="Random feasible vectors each step must dominate")
    p: float | None = Field(default=None, ge=1.0, description="Fixed p; by default cycles through 1.5, 2, 3, 10")


@verification_suite(
    name="holder",
    description="The Hoelder dual step attains |g|_q and dominates random feasible competitors",
    category="constructions",
    arg_model=HolderArgs,
)
def verify_holder(args: HolderArgs) -> dict[str, Any]:
    outcomes = []
    for case in range(args.cases):
        rng = _case_rng(args.seed, case)
        p = _pick_p(case, args.p, HOLDER_PS)
        n = int(rng.integers(1, args.n_max + 1))
        g = rng.standard_normal(n)
        achieved = float(g @ holder_dual_step(g, p))
        dual = dual_norm(g, p)
        relative = abs(achieved - dual) / dual
        best_competitor = max(
            (float(g @ random_unit_vector(n, p, rng, nonneg=False)) for _ in range(args.competitors)),
            default=-np.inf,
        )
        outcomes.append(
            {
                "case": case,
                "p": p,
                "n": n,
                "achieved": achieved,
                "dual_norm": dual,
                "relative_error": relative,
                "best_competitor": best_competitor,
                "ok": relative <= POINTWISE_SLACK and best_competitor <= achieved + POINTWISE_SLACK,
            }
        )
    return _report("holder", args, outcomes)


class SignFlipArgs(SuiteArgs):
    """Arguments for the sign-flip suite."""

    cases: int = Field(default=50, ge=1, description="Number of random matrices")
    n: int = Field(default=3, ge=1, description="Matrix size")
    resolution: int = Field(default=64, ge=2, description="Grid resolution K")
    slack: float = Field(default=DOCUMENTED_SLACK_K64, gt=0, description="Grid slack epsilon(K)")
    p: float | None = Field(default=None, description="Fixed p; by default cycles through 2, 3")


@verification_suite(
    name="sign-flip",
    description="b_ij = a_ij s_i s_j keeps ||.||_p, and the signed B still attains it at x = y (p >= 2)",
    category="constructions",
    arg_model=SignFlipArgs,
)
def verify_sign_flip(args: SignFlipArgs) -> dict[str, Any]:
    _require_p_at_least_two(args.p, SIGN_FLIP_PS)
    outcomes = []
    for case in range(args.cases):
        rng = _case_rng(args.seed, case)
        p = _pick_p(case, args.p, SIGN_FLIP_PS)
        A = random_symmetric(args.n, 2, rng)
        s = random_signs(args.n, rng)
        B = sign_transform(A, 1, 2, s)

        norm_a = grid_max(A, p, GridSpec(resolution=args.resolution, orthant=True)).value
        norm_b = grid_max(B, p, GridSpec(resolution=args.resolution)).value
        tied_b = grid_max(B, p, GridSpec(resolution=args.resolution), EqualityConstraint.all_equal(2)).value
        bound = 2.0 * args.slack
        outcomes.append(
            {
                "case": case,
                "p": p,
                "signs": s.tolist(),
                "norm_a": norm_a,
                "norm_b": norm_b,
                "constrained_b": tied_b,
                "ok": abs(norm_b - norm_a) <= bound and abs(norm_b - tied_b) <= bound,
            }
        )
    return _report("sign-flip", args, outcomes)


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------


class BoundsArgs(AscentSuiteArgs):
    """Arguments for the bounds suite."""

    cases: int = Field(default=100, ge=1, description="Number of random symmetric tensors")
    r: int = Field(default=3, ge=2, description="Order")
    n: int = Field(default=3, ge=1, description="Size of every index")
    p: float | None = Field(default=None, description="Fixed p; by default cycles through 2, 2.5, 4")


def _tightness_case(case: int, label: str, A: DenseHypermatrix, p: float) -> dict[str, Any]:
    bound = slice_sum_lower_bound(A, p)
    radius = p_spectral_radius(A, AscentConfig(p=p, tol=1e-14, restarts=4)).value
    return {
        "case": case,
        "fixture": label,
        "p": p,
        "bound": bound,
        "radius": radius,
        "ok": abs(radius - bound) <= TIGHTNESS_TOL,
    }


@verification_suite(
    name="bounds",
    description="The slice-sum lower bound never exceeds rho^(p), and is tight on regular fixtures",
    category="bounds",
    arg_model=BoundsArgs,
)
def verify_bounds(args: BoundsArgs) -> dict[str, Any]:
    _require_p_at_least_two(args.p, BOUNDS_PS)
    outcomes = []
    for case in range(args.cases):
        rng = _case_rng(args.seed, case)
        p = _pick_p(case, args.p, BOUNDS_PS)
        A = random_symmetric(args.n, args.r, rng)
        bound = slice_sum_lower_bound(A, p)
        radius = p_spectral_radius(A, _ascent_config(p, args))
        outcomes.append(
            {
                "case": case,
                "p": p,
                "bound": bound,
                "radius": radius.value,
                "ok": bound <= radius.value + args.tol and _monotone(radius),
            }
        )

    fixture_p = args.p if args.p is not None else 3.0
    outcomes.append(_tightness_case(args.cases, "ones", ones((args.n,) * args.r), fixture_p))
    outcomes.append(_tightness_case(args.cases + 1, "K4^(3)", adjacency_tensor(complete_hypergraph(4, 3)), 3.0))
    return _report("bounds", args, outcomes)


# ---------------------------------------------------------------------------
# oracles
# ---------------------------------------------------------------------------


class CounterexampleArgs(SuiteArgs):
    """Arguments for the counterexample suite."""

    p: float = Field(default=1.0, ge=1.0, description="Exponent, anything but 2")
    n: int = Field(default=2, ge=2, description="Matrix size")
    trials: int = Field(default=1000, ge=1, description="Candidate matrices to try")
    resolution: int | None = Field(default=None, ge=2, description="Grid resolution K; default 64 for n <= 2")


@verification_suite(
    name="counterexample",
    description="Search symmetric matrices whose x = y maximum falls short of ||A||_p, showing p >= 2 is needed",
    category="oracles",
    arg_model=CounterexampleArgs,
)
def verify_counterexample(args: CounterexampleArgs) -> dict[str, Any]:
    grid = None
    if args.resolution is not None:
        grid = GridSpec(resolution=args.resolution, refine=True)
    witness = find_counterexample(args.p, args.trials, args.n, args.seed, grid)
    if witness is None:
        outcome: dict[str, Any] = {"case": 0, "trials": args.trials, "witness": None, "ok": False}
    else:
        outcome = {
            "case": 0,
            "trial": witness.trial,
            "witness": witness.matrix.array.tolist(),
            "unconstrained": witness.unconstrained_value,
            "constrained": witness.constrained_value,
            "gap": witness.gap,
            "unconstrained_tuple": witness.unconstrained_tuple.to_lists(),
            "constrained_tuple": witness.constrained_tuple.to_lists(),
            "ok": True,
        }
    return _report("counterexample", args, [outcome])
