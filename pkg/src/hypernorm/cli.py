"""Command-line interface: norm, radius, bound, verify and gen.

Reports are JSON on stdout (or ``--out``), keys sorted and floats printed with 12
significant digits, so the same command and seed give byte-identical output. Errors
print ``{"error": true, "message": ...}`` and exit 2 for bad input, 3 when a theorem
hypothesis does not hold; a verification report with failing cases exits 1.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import ValidationError

from . import suites  # noqa: F401  registers the verification suites
from .bounds import degree_lower_bound, slice_sum_lower_bound, uniform_vector_bound
from .config import configure_logging, get_settings, reset_settings
from .errors import HypothesisError, InputError
from .generate import diagonal, ones, random_jk_symmetric, random_symmetric
from .hypergraph import (
    UniformHypergraph,
    adjacency_tensor,
    format_edge_list,
    load_hypergraph,
    random_hypergraph,
)
from .optimize import AscentConfig, AscentResult, EqualityConstraint, maximize_pnorm, p_spectral_radius
from .oracle import exact_2norm_2matrix
from .registry import registry
from .tensor import DenseHypermatrix, load_tensor, tensor_to_json

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_HYPOTHESIS = 3
SIGNIFICANT_DIGITS = 12
GEN_KINDS = ("ones", "diagonal", "sym-nonneg", "sym-signed", "jk-sym", "graph")


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    common.add_argument("--threads", type=int, default=None, help="Worker cap (sets HYPERNORM_THREADS)")
    common.add_argument("--log-level", default=None, help="Log level on stderr (sets HYPERNORM_LOG_LEVEL)")
    common.add_argument("--out", default=None, help="Write the output to this file instead of stdout")
    return common


def _ascent_options() -> argparse.ArgumentParser:
    ascent = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    ascent.add_argument("input", help="Tensor JSON file, or an edge-list file with --graph")
    ascent.add_argument("--p", type=float, required=True, help="Norm exponent p >= 1")
    ascent.add_argument("--restarts", type=int, default=20, help="Independent restarts (default: 20)")
    ascent.add_argument("--seed", type=int, default=0, help="Seed (default: 0)")
    ascent.add_argument("--tol", type=float, default=1e-10, help="Stagnation tolerance per sweep (default: 1e-10)")
    ascent.add_argument("--max-sweeps", type=int, default=500, help="Sweep cap per restart (default: 500)")
    ascent.add_argument("--graph", action="store_true", help="Read the input as an r-uniform edge list")
    mode = ascent.add_mutually_exclusive_group()
    mode.add_argument("--nonneg", dest="nonneg_mode", action="store_const", const=True, default=None)
    mode.add_argument("--signed", dest="nonneg_mode", action="store_const", const=False)
    return ascent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypernorm", description="p-norms and p-spectral radii of hypermatrices", allow_abbrev=False
    )
    commands = parser.add_subparsers(dest="command", required=True)
    common = _common_options()
    ascent = _ascent_options()

    norm = commands.add_parser("norm", parents=[common, ascent], allow_abbrev=False, help="Estimate ||A||_p")
    norm.add_argument("--constraint", type=_int_list, default=None, help="Force x^(j) = x^(k), given as j,k")
    norm.add_argument("--check-exact", action="store_true", help="Compare with the exact 2-norm (2-matrices, p=2)")

    commands.add_parser(
        "radius", parents=[common, ascent], allow_abbrev=False, help="Estimate the p-spectral radius"
    )

    bound = commands.add_parser("bound", parents=[common], allow_abbrev=False, help="Closed-form lower bounds")
    bound.add_argument("input", help="Tensor JSON file, or an edge-list file with --graph")
    bound.add_argument("--p", type=float, required=True, help="Exponent p >= 2")
    bound.add_argument("--graph", action="store_true", help="Read the input as an r-uniform edge list")

    verify = commands.add_parser(
        "verify",
        parents=[common],
        allow_abbrev=False,
        help="Run a verification suite; 'list' or 'list:<category>' shows the suites",
        epilog="Suite parameters are passed as --name value, e.g. verify thrp --p 2.5 --cases 50",
    )
    verify.add_argument("suite", help="Suite id, 'list' or 'list:<category>'")

    gen = commands.add_parser("gen", parents=[common], allow_abbrev=False, help="Generate a tensor or graph file")
    gen.add_argument("kind", choices=GEN_KINDS)
    gen.add_argument("--dims", type=_int_list, default=None, help="Tensor dims, e.g. 2,2,2")
    gen.add_argument("--pair", type=_int_list, default=None, help="Symmetric pair j,k for jk-sym (default: r-1,r)")
    gen.add_argument("--signed", action="store_true", help="Standard normal entries instead of uniform [0, 1)")
    gen.add_argument("--seed", type=int, default=0, help="Seed (default: 0)")
    gen.add_argument("--n", type=int, default=None, help="Vertex count for graph")
    gen.add_argument("--r", type=int, default=None, help="Uniformity for graph")
    gen.add_argument("--edges", type=int, default=None, help="Edge count for graph")
    return parser


def _round_floats(obj: Any) -> Any:
    if obj is None or isinstance(obj, bool | str):
        return obj
    if isinstance(obj, float | np.floating):
        return float(f"{float(obj):.{SIGNIFICANT_DIGITS}g}")
    if isinstance(obj, int | np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return _round_floats(obj.tolist())
    if isinstance(obj, dict):
        return {key: _round_floats(value) for key, value in obj.items()}
    if isinstance(obj, list | tuple):
        return [_round_floats(value) for value in obj]
    return obj


def _render(payload: dict[str, Any] | list[Any]) -> str:
    return json.dumps(_round_floats(payload), sort_keys=True, indent=2)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _apply_environment(args: argparse.Namespace) -> None:
    if args.threads is not None:
        os.environ["HYPERNORM_THREADS"] = str(args.threads)
    if args.log_level:
        os.environ["HYPERNORM_LOG_LEVEL"] = args.log_level
    reset_settings()
    configure_logging()


def _load_input(path: str, graph: bool) -> tuple[DenseHypermatrix | None, UniformHypergraph | None]:
    if graph:
        return None, load_hypergraph(path)
    return load_tensor(path), None


def _load_tensor_input(path: str, graph: bool) -> tuple[DenseHypermatrix, UniformHypergraph | None]:
    A, G = _load_input(path, graph)
    if G is not None:
        return adjacency_tensor(G), G
    assert A is not None
    return A, None


def _graph_summary(G: UniformHypergraph | None) -> dict[str, int] | None:
    if G is None:
        return None
    return {"n": G.n, "r": G.r, "edges": len(G.edges)}


def _ascent_config(args: argparse.Namespace, constraint: EqualityConstraint | None = None) -> AscentConfig:
    return AscentConfig(
        p=args.p,
        restarts=args.restarts,
        seed=args.seed,
        tol=args.tol,
        max_sweeps=args.max_sweeps,
        constraint=constraint,
        nonneg_mode=args.nonneg_mode,
    )


def _result_payload(result: AscentResult, cfg: AscentConfig) -> dict[str, Any]:
    return {
        "value": result.value,
        "signed_value": result.signed_value,
        "tuple": result.maximizer.to_lists(),
        "kkt_residual": result.kkt_residual,
        "kkt_relative": result.kkt_relative,
        "converged": result.converged,
        "sweeps": result.sweeps_used,
        "restarts": cfg.restarts,
        "seed": cfg.seed,
        "restart_values": result.restart_values,
        "best_restart": result.best_restart,
        "max_decrease": result.max_decrease,
    }


def _config_payload(args: argparse.Namespace, A: DenseHypermatrix, cfg: AscentConfig) -> dict[str, Any]:
    # echo the mode and constraint actually used, not the unset defaults
    effective = cfg.model_copy(
        update={
            "constraint": cfg.constraint or EqualityConstraint.free(A.order),
            "nonneg_mode": A.nonnegative if cfg.nonneg_mode is None else cfg.nonneg_mode,
        }
    )
    config = effective.model_dump(mode="json", exclude={"workers"})
    config["threads"] = get_settings().threads
    config["input"] = args.input
    config["graph"] = args.graph
    return config


def cmd_norm(args: argparse.Namespace) -> tuple[dict[str, Any], int]:
    A, G = _load_tensor_input(args.input, args.graph)
    constraint = None
    if args.constraint is not None:
        if len(args.constraint) != 2:
            raise InputError(f"--constraint takes two positions j,k, got {list(args.constraint)}")
        constraint = EqualityConstraint.pair(A.order, *args.constraint)
    cfg = _ascent_config(args, constraint)
    result = maximize_pnorm(A, cfg)

    config = _config_payload(args, A, cfg)
    config["check_exact"] = args.check_exact
    report = {"command": "norm", "config": config, "graph": _graph_summary(G)}
    report.update(_result_payload(result, cfg))
    if args.check_exact:
        if A.order != 2 or cfg.p != 2.0:
            raise InputError("--check-exact needs a 2-matrix and p = 2")
        exact = exact_2norm_2matrix(A)
        report["exact"] = {"value": exact, "difference": abs(result.value - exact)}
    return report, EXIT_OK


def cmd_radius(args: argparse.Namespace) -> tuple[dict[str, Any], int]:
    A, G = _load_tensor_input(args.input, args.graph)
    cfg = _ascent_config(args)
    result = p_spectral_radius(A, cfg)
    effective = cfg.model_copy(update={"constraint": EqualityConstraint.all_equal(A.order)})
    report = {"command": "radius", "config": _config_payload(args, A, effective), "graph": _graph_summary(G)}
    report.update(_result_payload(result, cfg))
    return report, EXIT_OK


def cmd_bound(args: argparse.Namespace) -> tuple[dict[str, Any], int]:
    A, G = _load_input(args.input, args.graph)
    config = {"p": args.p, "input": args.input, "graph": args.graph}
    if G is not None:
        return {"command": "bound", "config": config, "kind": "degree", "bound": degree_lower_bound(G, args.p)}, EXIT_OK
    assert A is not None
    return {
        "command": "bound",
        "config": config,
        "kind": "slice-sum",
        "bound": slice_sum_lower_bound(A, args.p),
        "uniform_vector_bound": uniform_vector_bound(A, args.p),
    }, EXIT_OK


def _suite_params(tokens: list[str]) -> dict[str, str]:
    """Turn ``--name value`` tokens into suite arguments; a bare ``--flag`` means true."""
    params: dict[str, str] = {}
    i = 0
    while i < len(tokens):
        token = tokens[i]
        if not token.startswith("--") or len(token) == 2:
            raise InputError(f"unexpected argument {token!r}; suite parameters look like --name value")
        key = token[2:]
        if "=" in key:
            key, value = key.split("=", 1)
            i += 1
        elif i + 1 < len(tokens) and not tokens[i + 1].startswith("--"):
            value = tokens[i + 1]
            i += 2
        else:
            value = "true"
            i += 1
        params[key.replace("-", "_")] = value
    return params


def cmd_verify(args: argparse.Namespace, extra: list[str]) -> tuple[dict[str, Any] | list[Any], int]:
    if args.suite == "list":
        if extra:
            raise InputError(f"'verify list' takes no parameters, got {extra}")
        return {"categories": registry.list_categories(), "suites": registry.list_suites()}, EXIT_OK
    if args.suite.startswith("list:"):
        return registry.list_suites(args.suite.split(":", 1)[1]), EXIT_OK

    report = registry.execute(args.suite, _suite_params(extra))
    logger.info("suite %s: %d/%d passed", args.suite, report["passed"], report["cases"])
    return report, EXIT_OK if report["ok"] else EXIT_FAILED


def cmd_gen(args: argparse.Namespace) -> tuple[str, int]:
    rng = np.random.default_rng(args.seed)
    if args.kind == "graph":
        if args.n is None or args.r is None or args.edges is None:
            raise InputError("gen graph needs --n, --r and --edges")
        return format_edge_list(random_hypergraph(args.n, args.r, args.edges, args.seed)), EXIT_OK

    if args.dims is None:
        raise InputError(f"gen {args.kind} needs --dims")
    dims = args.dims
    if args.kind == "ones":
        A = ones(dims)
    elif args.kind == "diagonal":
        A = diagonal(dims)
    elif args.kind in ("sym-nonneg", "sym-signed"):
        if len(set(dims)) != 1:
            raise InputError(f"a symmetric tensor needs equal dims, got {list(dims)}")
        A = random_symmetric(dims[0], len(dims), rng, signed=args.kind == "sym-signed")
    else:
        pair = args.pair or (len(dims) - 1, len(dims))
        if len(pair) != 2:
            raise InputError(f"--pair takes two positions j,k, got {list(pair)}")
        j, k = pair
        A = random_jk_symmetric(dims, j, k, rng, signed=args.signed)
    return tensor_to_json(A), EXIT_OK


def _error(message: str, code: int) -> int:
    _emit(_render({"error": True, "message": message}), None)
    return code


def run(argv: list[str] | None = None) -> int:
    """Parse ``argv``, run one command and return its exit code."""
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    if extra and args.command != "verify":
        parser.error(f"unrecognized arguments: {' '.join(extra)}")

    try:
        _apply_environment(args)
        text: str
        if args.command == "gen":
            text, code = cmd_gen(args)
        elif args.command == "verify":
            payload, code = cmd_verify(args, extra)
            text = _render(payload)
        else:
            handler = {"norm": cmd_norm, "radius": cmd_radius, "bound": cmd_bound}[args.command]
            report, code = handler(args)
            text = _render(report)
    except HypothesisError as e:
        return _error(f"hypothesis violated: {e}", EXIT_HYPOTHESIS)
    except (InputError, ValidationError) as e:
        return _error(str(e), EXIT_INPUT)
    except OSError as e:
        return _error(f"cannot read input: {e}", EXIT_INPUT)

    _emit(text, args.out)
    return code
