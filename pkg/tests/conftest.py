import numpy as np
import pytest

from modules.core import ObjectiveSpec, RandomSource, SearchSpace


def sphere_spec(dimension: int = 2, bound: float = 5.0) -> ObjectiveSpec:
    return ObjectiveSpec(
        name="sphere",
        space=SearchSpace.box(dimension, -bound, bound),
        function=lambda x, rng=None: float(np.sum(x**2)),
        known_optimum=0.0,
    )


def constant_spec(value: float = 3.5, dimension: int = 3) -> ObjectiveSpec:
    return ObjectiveSpec(
        name="constant",
        space=SearchSpace.box(dimension, -1.0, 1.0),
        function=lambda x, rng=None: value,
    )


@pytest.fixture
def sphere():
    return sphere_spec()


@pytest.fixture
def rng():
    return RandomSource(7)


@pytest.fixture
def unit_box():
    return SearchSpace.box(2, -1.0, 1.0)


@pytest.fixture(autouse=True)
def _no_outdir_override(monkeypatch):
    monkeypatch.delenv("RIDLEY_OUTDIR", raising=False)
