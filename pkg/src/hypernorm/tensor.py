"""
Dense r-matrices (hypermatrices) and the operations the p-norm theory is built on.

Provides:
- DenseHypermatrix / VectorTuple value types (immutable once constructed)
- the linear form L_A, partial gradients and contractions to 2-matrices
- (j,k)-symmetry predicates, symmetrization and the sign-flip construction
- slice-sums
- the tensor JSON format

Positions j, k, m are 1-based in every public function, matching the [n] indexing
used in the math; they are converted to 0-based numpy axes internally.
"""

from __future__ import annotations

import itertools
import json
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, Field, ValidationError, model_validator

from .errors import (
    HypothesisError,
    IncompatibleShapeError,
    IndexOutOfRangeError,
    InputError,
    InvalidPairError,
)

FloatArray = NDArray[np.float64]

DEFAULT_SYMMETRY_TOL = 1e-12
FEASIBILITY_TOL = 1e-12
SYMMETRIZE_INPUT_TOL = 1e-9


def pnorm(x: ArrayLike, p: float) -> float:
    """l^p norm of a vector, scaled by its max entry to avoid overflow for large p."""
    a = np.abs(np.asarray(x, dtype=np.float64))
    scale = float(a.max(initial=0.0))
    if scale == 0.0:
        return 0.0
    if math.isinf(p):
        return scale
    return scale * float(np.sum((a / scale) ** p)) ** (1.0 / p)


def normalize(x: ArrayLike, p: float) -> FloatArray:
    """Project a nonzero vector onto the unit l^p sphere."""
    v = np.asarray(x, dtype=np.float64)
    norm = pnorm(v, p)
    if norm == 0.0:
        raise InputError("cannot normalize the zero vector")
    return v / norm


def _axis(position: int, order: int) -> int:
    """Convert a 1-based position to a 0-based axis."""
    if not 1 <= position <= order:
        raise IndexOutOfRangeError(f"position {position} is outside 1..{order}")
    return position - 1


def pair_axes(j: int, k: int, order: int) -> tuple[int, int]:
    if j == k:
        raise InvalidPairError(f"positions must differ, got j = k = {j}")
    return _axis(j, order), _axis(k, order)


@dataclass(frozen=True, eq=False)
class DenseHypermatrix:
    """An r-matrix of order n_1 x ... x n_r stored as a flat row-major array.

    ``nonnegative`` is a validated flag: when set, every entry must be >= 0.
    """

    dims: tuple[int, ...]
    entries: FloatArray
    nonnegative: bool = False

    def __post_init__(self) -> None:
        dims = tuple(int(n) for n in self.dims)
        if len(dims) < 2:
            raise InputError(f"order must be at least 2, got {len(dims)}")
        if any(n < 1 for n in dims):
            raise InputError(f"dims must be positive, got {list(dims)}")

        entries = np.array(self.entries, dtype=np.float64).reshape(-1)
        if entries.size != math.prod(dims):
            raise IncompatibleShapeError(
                f"{entries.size} entries do not fill dims {list(dims)} ({math.prod(dims)} expected)"
            )
        if not np.all(np.isfinite(entries)):
            raise InputError("entries must be finite (no NaN/Inf)")
        if self.nonnegative and np.any(entries < 0):
            raise InputError("tensor is flagged nonnegative but has negative entries")

        entries.flags.writeable = False
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_array(cls, array: ArrayLike, nonnegative: bool | None = None) -> DenseHypermatrix:
        """Build from an r-dimensional array; ``nonnegative=None`` infers the flag from the entries."""
        arr = np.asarray(array, dtype=np.float64)
        if nonnegative is None:
            nonnegative = bool(np.all(arr >= 0))
        return cls(dims=arr.shape, entries=arr.reshape(-1), nonnegative=nonnegative)

    @property
    def order(self) -> int:
        return len(self.dims)

    @property
    def array(self) -> FloatArray:
        """Read-only r-dimensional view of the entries."""
        return self.entries.reshape(self.dims)

    def is_zero(self) -> bool:
        return not np.any(self.entries)

    def __repr__(self) -> str:
        return f"DenseHypermatrix(dims={list(self.dims)}, nonnegative={self.nonnegative})"


@dataclass(frozen=True, eq=False)
class VectorTuple:
    """The r argument vectors x^(1), ..., x^(r) of a linear form, with their exponent p."""

    vectors: tuple[FloatArray, ...]
    p: float

    def __post_init__(self) -> None:
        if not self.p >= 1.0 or math.isinf(self.p):
            raise InputError(f"p must be a finite real >= 1, got {self.p}")
        vectors = []
        for i, v in enumerate(self.vectors, start=1):
            arr = np.array(v, dtype=np.float64)
            if arr.ndim != 1 or arr.size == 0:
                raise InputError(f"vector {i} must be a non-empty 1-D array")
            arr.flags.writeable = False
            vectors.append(arr)
        object.__setattr__(self, "vectors", tuple(vectors))

    @classmethod
    def uniform(cls, dims: Sequence[int], p: float) -> VectorTuple:
        """Constant vectors n^{-1/p} * (1, ..., 1), feasible for every p."""
        return cls(tuple(np.full(n, n ** (-1.0 / p)) for n in dims), p)

    @property
    def order(self) -> int:
        return len(self.vectors)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(v.size for v in self.vectors)

    def vector(self, m: int) -> FloatArray:
        """The vector at 1-based position m."""
        return self.vectors[_axis(m, self.order)]

    def replace(self, m: int, x: ArrayLike) -> VectorTuple:
        """A copy with the vector at 1-based position m replaced."""
        vectors = list(self.vectors)
        vectors[_axis(m, self.order)] = np.asarray(x, dtype=np.float64)
        return VectorTuple(tuple(vectors), self.p)

    def check_compatible(self, A: DenseHypermatrix) -> None:
        if self.dims != A.dims:
            raise IncompatibleShapeError(f"vector lengths {list(self.dims)} do not match tensor dims {list(A.dims)}")

    def is_feasible(self, tol: float = FEASIBILITY_TOL) -> bool:
        """True when every vector has unit l^p norm within ``tol``."""
        return all(abs(pnorm(v, self.p) - 1.0) <= tol for v in self.vectors)

    def to_lists(self) -> list[list[float]]:
        return [v.tolist() for v in self.vectors]


def contract(array: ArrayLike, vectors: Mapping[int, ArrayLike]) -> FloatArray:
    """Contract the given 0-based axes of ``array`` with vectors.

    Remaining axes keep their original relative order. Axes are contracted from the
    last to the first, so the summation order is fixed for a given input.
    """
    result = np.asarray(array, dtype=np.float64)
    for axis in sorted(vectors, reverse=True):
        result = np.tensordot(result, np.asarray(vectors[axis], dtype=np.float64), axes=([axis], [0]))
    return result


def linear_form(A: DenseHypermatrix, t: VectorTuple) -> float:
    """L_A(x^(1), ..., x^(r)) = sum of a_{i_1..i_r} x^(1)_{i_1} ... x^(r)_{i_r}."""
    t.check_compatible(A)
    return float(contract(A.array, dict(enumerate(t.vectors))))


def partial_gradient(A: DenseHypermatrix, t: VectorTuple, m: int) -> FloatArray:
    """Gradient of L_A with respect to x^(m); the vector at position m itself is not used."""
    t.check_compatible(A)
    axis = _axis(m, A.order)
    return contract(A.array, {a: v for a, v in enumerate(t.vectors) if a != axis})


def contract_to_matrix(A: DenseHypermatrix, t: VectorTuple, j: int, k: int) -> DenseHypermatrix:
    """Fix every vector except positions j and k, giving the n_j x n_k 2-matrix B.

    b_{s,t} sums a over the other r-2 indices weighted by the fixed vectors, so that
    L_B(x^(j), x^(k)) == L_A(t). The vectors of ``t`` at positions j and k are ignored.
    """
    t.check_compatible(A)
    ja, ka = pair_axes(j, k, A.order)
    B = contract(A.array, {a: v for a, v in enumerate(t.vectors) if a not in (ja, ka)})
    if ja > ka:
        B = B.T
    return DenseHypermatrix.from_array(B)


def is_jk_symmetric(A: DenseHypermatrix, j: int, k: int, tol: float = DEFAULT_SYMMETRY_TOL) -> bool:
    """True iff n_j == n_k and A is invariant (within ``tol``) under swapping i_j and i_k."""
    ja, ka = pair_axes(j, k, A.order)
    if A.dims[ja] != A.dims[ka]:
        return False
    arr = A.array
    return bool(np.all(np.abs(arr - np.swapaxes(arr, ja, ka)) <= tol))


def is_symmetric(A: DenseHypermatrix, tol: float = DEFAULT_SYMMETRY_TOL) -> bool:
    """True iff A is (j,k)-symmetric for every pair j < k."""
    return all(is_jk_symmetric(A, j, k, tol) for j, k in itertools.combinations(range(1, A.order + 1), 2))


def symmetrize(A: DenseHypermatrix) -> DenseHypermatrix:
    """Average of A over all r! permutations of its indices."""
    if len(set(A.dims)) != 1:
        raise IncompatibleShapeError(f"symmetrization needs equal dims, got {list(A.dims)}")
    arr = A.array
    perms = list(itertools.permutations(range(A.order)))
    total = np.zeros_like(arr)
    for perm in perms:
        total = total + np.transpose(arr, perm)
    return DenseHypermatrix.from_array(total / len(perms), nonnegative=A.nonnegative or None)


def symmetrize_jk(A: DenseHypermatrix, j: int, k: int) -> DenseHypermatrix:
    """Average of A and its (j,k)-swap; the result is exactly (j,k)-symmetric."""
    ja, ka = pair_axes(j, k, A.order)
    if A.dims[ja] != A.dims[ka]:
        raise IncompatibleShapeError(f"n_{j} = {A.dims[ja]} differs from n_{k} = {A.dims[ka]}")
    arr = A.array
    return DenseHypermatrix.from_array((arr + np.swapaxes(arr, ja, ka)) / 2.0, nonnegative=A.nonnegative or None)


def symmetrize_pair(x: ArrayLike, y: ArrayLike, p: float) -> FloatArray:
    """z_i = ((x_i^p + y_i^p) / 2)^{1/p} for nonnegative unit-p vectors x, y.

    For p >= 2, |z|_p = 1 and z_i z_j >= (x_i y_j + x_j y_i) / 2 for all i, j.
    """
    xv = np.asarray(x, dtype=np.float64)
    yv = np.asarray(y, dtype=np.float64)
    if xv.shape != yv.shape or xv.ndim != 1:
        raise IncompatibleShapeError(f"x and y must be vectors of equal length, got {xv.shape} and {yv.shape}")
    if math.isnan(p) or math.isinf(p):
        raise InputError(f"p must be a finite real, got {p}")
    if p < 2:
        raise HypothesisError(f"symmetrization dominance needs p >= 2, got {p}")
    if np.any(xv < 0) or np.any(yv < 0):
        raise InputError("symmetrize_pair needs nonnegative vectors")
    for name, v in (("x", xv), ("y", yv)):
        if abs(pnorm(v, p) - 1.0) > SYMMETRIZE_INPUT_TOL:
            raise InputError(f"|{name}|_p must be 1, got {pnorm(v, p)!r}")
    return ((xv**p + yv**p) / 2.0) ** (1.0 / p)


def sign_transform(A: DenseHypermatrix, j: int, k: int, s: ArrayLike) -> DenseHypermatrix:
    """b_{i_1..i_r} = a_{i_1..i_r} s_{i_j} s_{i_k} for a +-1 vector s."""
    ja, ka = pair_axes(j, k, A.order)
    sv = np.asarray(s, dtype=np.float64)
    if sv.ndim != 1 or sv.size != A.dims[ja]:
        raise IncompatibleShapeError(f"s must have length n_{j} = {A.dims[ja]}, got shape {sv.shape}")
    if not np.all(np.abs(sv) == 1.0):
        raise InputError("s entries must be -1 or +1")
    if not is_jk_symmetric(A, j, k):
        raise HypothesisError(f"sign transform needs a ({j},{k})-symmetric tensor")

    shape_j = [1] * A.order
    shape_j[ja] = sv.size
    shape_k = [1] * A.order
    shape_k[ka] = sv.size
    return DenseHypermatrix.from_array(A.array * sv.reshape(shape_j) * sv.reshape(shape_k))


def slice_sums_along(A: DenseHypermatrix, m: int) -> FloatArray:
    """Sums of all entries whose index at position m is fixed, for each value of that index."""
    axis = _axis(m, A.order)
    moved = np.moveaxis(A.array, axis, 0)
    return moved.reshape(A.dims[axis], -1).sum(axis=1)


def slice_sums(A: DenseHypermatrix) -> FloatArray:
    """S_i = sum of a_{i, i_2, ..., i_r}: the row sums generalized along the first index."""
    return slice_sums_along(A, 1)


class TensorDocument(BaseModel):
    """On-disk JSON form of a DenseHypermatrix."""

    order: int = Field(ge=2, description="Number of indices r")
    dims: list[int] = Field(description="Dimensions n_1, ..., n_r")
    entries: list[float] = Field(description="Flat row-major entries, last index fastest")
    nonnegative: bool | None = Field(default=None, description="Validated nonnegativity flag; inferred when absent")

    @model_validator(mode="after")
    def _check_order(self) -> TensorDocument:
        if self.order != len(self.dims):
            raise ValueError(f"order {self.order} does not match {len(self.dims)} dims")
        return self


def tensor_from_json(text: str | bytes) -> DenseHypermatrix:
    try:
        doc = TensorDocument.model_validate_json(text)
    except ValidationError as e:
        raise InputError(f"invalid tensor document: {e}") from e
    return DenseHypermatrix(
        dims=tuple(doc.dims),
        entries=np.asarray(doc.entries, dtype=np.float64),
        nonnegative=doc.nonnegative if doc.nonnegative is not None else all(v >= 0 for v in doc.entries),
    )


def tensor_to_json(A: DenseHypermatrix) -> str:
    # json.dumps writes floats with repr, which round-trips exactly
    doc = {
        "order": A.order,
        "dims": list(A.dims),
        "entries": A.entries.tolist(),
        "nonnegative": A.nonnegative,
    }
    return json.dumps(doc)


def load_tensor(path: str | Path) -> DenseHypermatrix:
    return tensor_from_json(Path(path).read_text())


def dump_tensor(A: DenseHypermatrix, path: str | Path) -> None:
    Path(path).write_text(tensor_to_json(A) + "\n")
