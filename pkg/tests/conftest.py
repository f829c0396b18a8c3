"""Shared fixtures: canonical tensors, the complete 3-graph on 4 vertices and a clean settings cache."""

import os

import numpy as np
import pytest

from hypernorm.config import reset_settings
from hypernorm.hypergraph import UniformHypergraph, complete_hypergraph
from hypernorm.optimize import AscentConfig
from hypernorm.tensor import DenseHypermatrix

K4_3_TEXT = "n=4 r=3\n1 2 3\n1 2 4\n1 3 4\n2 3 4\n"


@pytest.fixture(autouse=True)
def clean_settings():
    """Drop HYPERNORM_* variables (the CLI writes them) and the cached settings around every test."""
    saved = {k: v for k, v in os.environ.items() if k.startswith("HYPERNORM_")}
    for key in saved:
        del os.environ[key]
    reset_settings()
    yield
    for key in [k for k in os.environ if k.startswith("HYPERNORM_")]:
        del os.environ[key]
    os.environ.update(saved)
    reset_settings()


@pytest.fixture
def ones2x2() -> DenseHypermatrix:
    return DenseHypermatrix.from_array(np.ones((2, 2)))


@pytest.fixture
def ones2x2x2() -> DenseHypermatrix:
    return DenseHypermatrix.from_array(np.ones((2, 2, 2)))


@pytest.fixture
def identity2() -> DenseHypermatrix:
    return DenseHypermatrix.from_array(np.eye(2))


@pytest.fixture
def swap() -> DenseHypermatrix:
    return DenseHypermatrix.from_array(np.array([[0.0, 1.0], [1.0, 0.0]]))


@pytest.fixture
def k4_3() -> UniformHypergraph:
    return complete_hypergraph(4, 3)


@pytest.fixture
def fast():
    """Build an AscentConfig with a small restart count for unit-level checks."""

    def make(p: float, **kwargs) -> AscentConfig:
        kwargs.setdefault("restarts", 8)
        kwargs.setdefault("seed", 1)
        return AscentConfig(p=p, **kwargs)

    return make


@pytest.fixture
def k4_3_text() -> str:
    return K4_3_TEXT
