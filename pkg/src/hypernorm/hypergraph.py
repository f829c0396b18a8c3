"""
r-uniform hypergraphs: edge-list parsing, degrees and the adjacency tensor.

Edge-list text format:

    n=<int> r=<int>
    <v_1> ... <v_r>        one edge per line, 1-based vertices
    # comment lines and blank lines are ignored

Adjacency convention: a_{i_1..i_r} = 1 iff {i_1, ..., i_r} is an edge, for all r!
orderings, else 0. No 1/(r-1)! normalization is applied, so the slice-sums are
S_i = (r-1)! d_i.
"""

from __future__ import annotations

import itertools
import math
import re
from pathlib import Path

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .config import get_settings
from .errors import EdgeListError, InputError, SizeCapError
from .tensor import DenseHypermatrix

_HEADER = re.compile(r"^\s*n\s*=\s*(\d+)\s+r\s*=\s*(\d+)\s*$")


class UniformHypergraph(BaseModel):
    """An r-uniform hypergraph on vertices 1..n."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1, description="Vertex count")
    r: int = Field(ge=2, description="Uniformity: every edge has exactly r vertices")
    edges: tuple[tuple[int, ...], ...] = Field(default=(), description="Sorted r-subsets of 1..n")

    @field_validator("edges")
    @classmethod
    def _sort_edges(cls, edges: tuple[tuple[int, ...], ...]) -> tuple[tuple[int, ...], ...]:
        return tuple(sorted(tuple(sorted(e)) for e in edges))

    @model_validator(mode="after")
    def _check_edges(self) -> UniformHypergraph:
        seen = set()
        for edge in self.edges:
            if len(edge) != self.r:
                raise ValueError(f"edge {edge} does not have {self.r} vertices")
            if len(set(edge)) != self.r:
                raise ValueError(f"edge {edge} repeats a vertex")
            if not all(1 <= v <= self.n for v in edge):
                raise ValueError(f"edge {edge} has a vertex outside 1..{self.n}")
            if edge in seen:
                raise ValueError(f"duplicate edge {edge}")
            seen.add(edge)
        return self


def parse_edge_list(text: str) -> UniformHypergraph:
    """Parse the edge-list format; every error names its 1-based line number."""
    header: tuple[int, int] | None = None
    edges: list[tuple[int, ...]] = []
    seen: dict[tuple[int, ...], int] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            match = _HEADER.match(line)
            if not match:
                raise EdgeListError(lineno, f"expected header 'n=<int> r=<int>', got {line!r}")
            header = (int(match.group(1)), int(match.group(2)))
            if header[0] < 1 or header[1] < 2:
                raise EdgeListError(lineno, f"need n >= 1 and r >= 2, got n={header[0]} r={header[1]}")
            continue

        n, r = header
        try:
            edge = tuple(int(tok) for tok in line.split())
        except ValueError:
            raise EdgeListError(lineno, f"vertices must be integers, got {line!r}") from None
        if len(edge) != r:
            raise EdgeListError(lineno, f"edge has {len(edge)} vertices, expected {r}")
        if len(set(edge)) != r:
            raise EdgeListError(lineno, f"repeated vertex in edge {list(edge)}")
        if not all(1 <= v <= n for v in edge):
            raise EdgeListError(lineno, f"vertex out of range 1..{n} in edge {list(edge)}")
        key = tuple(sorted(edge))
        if key in seen:
            raise EdgeListError(lineno, f"duplicate edge {list(key)} (first seen at line {seen[key]})")
        seen[key] = lineno
        edges.append(key)

    if header is None:
        raise EdgeListError(1, "missing header 'n=<int> r=<int>'")
    return UniformHypergraph(n=header[0], r=header[1], edges=tuple(edges))


def load_hypergraph(path: str | Path) -> UniformHypergraph:
    return parse_edge_list(Path(path).read_text())


def format_edge_list(G: UniformHypergraph) -> str:
    lines = [f"n={G.n} r={G.r}"]
    lines.extend(" ".join(str(v) for v in edge) for edge in G.edges)
    return "\n".join(lines) + "\n"


def degrees(G: UniformHypergraph) -> NDArray[np.int64]:
    """d_i = number of edges containing vertex i (index i-1)."""
    d = np.zeros(G.n, dtype=np.int64)
    for edge in G.edges:
        for v in edge:
            d[v - 1] += 1
    return d


def adjacency_tensor(G: UniformHypergraph, cap: int | None = None) -> DenseHypermatrix:
    """The symmetric 0/1 adjacency r-matrix (all r! orderings of every edge set to 1)."""
    cap = cap or get_settings().dense_cap
    size = G.n**G.r
    if size > cap:
        raise SizeCapError(f"adjacency tensor of n={G.n}, r={G.r}", size, cap)
    arr = np.zeros((G.n,) * G.r)
    for edge in G.edges:
        for perm in itertools.permutations(v - 1 for v in edge):
            arr[perm] = 1.0
    return DenseHypermatrix.from_array(arr, nonnegative=True)


def complete_hypergraph(n: int, r: int) -> UniformHypergraph:
    """K_n^(r): every r-subset of 1..n is an edge."""
    return UniformHypergraph(n=n, r=r, edges=tuple(itertools.combinations(range(1, n + 1), r)))


def empty_hypergraph(n: int, r: int) -> UniformHypergraph:
    return UniformHypergraph(n=n, r=r, edges=())


def random_hypergraph(n: int, r: int, m: int, seed: int) -> UniformHypergraph:
    """m distinct edges drawn uniformly from the r-subsets of 1..n."""
    total = math.comb(n, r)
    if not 0 <= m <= total:
        raise InputError(f"cannot draw {m} distinct edges from {total} possible")
    rng = np.random.default_rng(seed)
    chosen: set[tuple[int, ...]] = set()
    while len(chosen) < m:
        edge = tuple(sorted(int(v) + 1 for v in rng.choice(n, size=r, replace=False)))
        chosen.add(edge)
    return UniformHypergraph(n=n, r=r, edges=tuple(sorted(chosen)))
