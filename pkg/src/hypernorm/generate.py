"""Structured and seeded random r-matrices for experiments, tests and the ``gen`` command."""

from __future__ import annotations

import itertools
import math
from collections.abc import Sequence

import numpy as np

from .config import get_settings
from .errors import IncompatibleShapeError, SizeCapError
from .tensor import DenseHypermatrix, normalize, pair_axes


def _check_size(dims: Sequence[int]) -> None:
    cap = get_settings().dense_cap
    size = math.prod(dims)
    if size > cap:
        raise SizeCapError(f"dense tensor of dims {list(dims)}", size, cap)


def _draw(rng: np.random.Generator, size: int | tuple[int, ...], signed: bool) -> np.ndarray:
    return rng.standard_normal(size) if signed else rng.random(size)


def ones(dims: Sequence[int]) -> DenseHypermatrix:
    _check_size(dims)
    return DenseHypermatrix.from_array(np.ones(tuple(dims)), nonnegative=True)


def diagonal(dims: Sequence[int]) -> DenseHypermatrix:
    """a_{i,...,i} = 1 for i up to min(dims), zero elsewhere; the identity for r = 2."""
    _check_size(dims)
    arr = np.zeros(tuple(dims))
    for i in range(min(dims)):
        arr[(i,) * len(dims)] = 1.0
    return DenseHypermatrix.from_array(arr, nonnegative=True)


def random_symmetric(n: int, r: int, rng: np.random.Generator, signed: bool = False) -> DenseHypermatrix:
    """One draw per index multiset, copied to every ordering, so the result is exactly symmetric.

    Entries are uniform on [0, 1) unless ``signed``, then standard normal.
    """
    _check_size((n,) * r)
    arr = np.zeros((n,) * r)
    for index in itertools.combinations_with_replacement(range(n), r):
        value = float(_draw(rng, 1, signed)[0])
        for perm in set(itertools.permutations(index)):
            arr[perm] = value
    return DenseHypermatrix.from_array(arr, nonnegative=not signed)


def random_jk_symmetric(
    dims: Sequence[int], j: int, k: int, rng: np.random.Generator, signed: bool = False
) -> DenseHypermatrix:
    """A random tensor made exactly (j,k)-symmetric by averaging with its (j,k)-swap."""
    ja, ka = pair_axes(j, k, len(dims))
    if dims[ja] != dims[ka]:
        raise IncompatibleShapeError(f"n_{j} = {dims[ja]} differs from n_{k} = {dims[ka]}")
    _check_size(dims)
    raw = _draw(rng, tuple(dims), signed)
    return DenseHypermatrix.from_array((raw + np.swapaxes(raw, ja, ka)) / 2.0, nonnegative=not signed)


def random_unit_vector(n: int, p: float, rng: np.random.Generator, nonneg: bool = True) -> np.ndarray:
    """A random vector with |x|_p = 1 (nonnegative entries by default)."""
    while True:
        v = rng.standard_normal(n)
        if nonneg:
            v = np.abs(v)
        if np.any(v):
            return normalize(v, p)


def random_signs(n: int, rng: np.random.Generator) -> np.ndarray:
    return rng.choice(np.array([-1.0, 1.0]), size=n)
