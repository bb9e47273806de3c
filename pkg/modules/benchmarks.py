#!/usr/bin/env python3

"""
The fourteen benchmark functions ridley is measured on.

Fn1-Fn7 are unimodal, Fn8-Fn12 multimodal in 30 dimensions and
Fn13-Fn14 multimodal in a fixed low dimension. Where the usual table
of these functions abbreviates a formula, the canonical literature form
is implemented:

- Fn4 is Schwefel 2.21, max |x_j|;
- Fn11 uses 10 sin^2(pi y_1) as its leading term;
- Fn12 is the standard second penalized function;
- Fn13 is Kowalik's sum of squared residuals over the 11-point data set
  below.

Kowalik data (i, a_i, 1/b_i):

    1   0.1957   0.25      7   0.0456   8
    2   0.1947   0.5       8   0.0342  10
    3   0.1735   1         9   0.0323  12
    4   0.1600   2        10   0.0235  14
    5   0.0844   4        11   0.0246  16
    6   0.0627   6
"""


import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, Optional

import numpy as np

from modules.core import ObjectiveSpec, RandomSource, SearchSpace
from modules.errors import ConfigurationError, InvalidArgumentError

__version__ = "0.3.0-devel"

KOWALIK_A = np.array(
    [0.1957, 0.1947, 0.1735, 0.1600, 0.0844, 0.0627, 0.0456, 0.0342, 0.0323, 0.0235, 0.0246]
)
KOWALIK_B = 1.0 / np.array([0.25, 0.5, 1.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0])

# Kowalik's minimizer as reported in the literature, refined on a grid
KOWALIK_MINIMIZER = np.array([0.192833, 0.190836, 0.123117, 0.135766])
BRANIN_MINIMIZER = np.array([math.pi, 2.275])


class Modality(Enum):
    UNIMODAL = "Unimodal"
    MULTIMODAL = "Multimodal"
    FIXED_DIM_MULTIMODAL = "FixedDimMultimodal"


def sphere(x: np.ndarray) -> float:
    return float(np.sum(x**2))


def schwefel_2_22(x: np.ndarray) -> float:
    a = np.abs(x)
    return float(np.sum(a) + np.prod(a))


def schwefel_1_2(x: np.ndarray) -> float:
    return float(np.sum(np.cumsum(x) ** 2))


def schwefel_2_21(x: np.ndarray) -> float:
    return float(np.max(np.abs(x)))


def rosenbrock(x: np.ndarray) -> float:
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (x[:-1] - 1.0) ** 2))


def step(x: np.ndarray) -> float:
    return float(np.sum(np.floor(x + 0.5) ** 2))


def quartic(x: np.ndarray) -> float:
    """Fn7 without its noise term."""
    j = np.arange(1, x.size + 1)
    return float(np.sum(j * x**4))


def noisy_quartic(x: np.ndarray, rng: Optional[RandomSource] = None) -> float:
    if rng is None:
        raise InvalidArgumentError("the noisy quartic function needs a random source")
    return quartic(x) + float(rng.uniform(0.0, 1.0))


def rastrigin(x: np.ndarray) -> float:
    return float(np.sum(x**2 - 10.0 * np.cos(2.0 * math.pi * x) + 10.0))


def ackley(x: np.ndarray) -> float:
    n = x.size
    return float(
        -20.0 * np.exp(-0.2 * np.sqrt(np.sum(x**2) / n))
        - np.exp(np.sum(np.cos(2.0 * math.pi * x)) / n)
        + 20.0
        + math.e
    )


def griewank(x: np.ndarray) -> float:
    j = np.arange(1, x.size + 1)
    return float(np.sum(x**2) / 4000.0 - np.prod(np.cos(x / np.sqrt(j))) + 1.0)


def penalty_u(x, a: float, k: float, m: float) -> np.ndarray:
    """
    @type x: np.ndarray
    @param x: components to penalize
    @type a: float
    @param a: half-width of the penalty-free band
    @rtype: np.ndarray
    @return: k (x - a)^m above a, k (-x - a)^m below -a, 0 inside [-a, a]
    """
    x = np.asarray(x, dtype=float)
    return np.where(x > a, k * (x - a) ** m, np.where(x < -a, k * (-x - a) ** m, 0.0))


def penalized_1(x: np.ndarray) -> float:
    n = x.size
    y = 1.0 + (x + 1.0) / 4.0
    body = (
        10.0 * math.sin(math.pi * y[0]) ** 2
        + np.sum((y[:-1] - 1.0) ** 2 * (1.0 + 10.0 * np.sin(math.pi * y[1:]) ** 2))
        + (y[-1] - 1.0) ** 2
    )
    return float(math.pi / n * body + np.sum(penalty_u(x, 10.0, 100.0, 4.0)))


def penalized_2(x: np.ndarray) -> float:
    body = (
        math.sin(3.0 * math.pi * x[0]) ** 2
        + np.sum((x[:-1] - 1.0) ** 2 * (1.0 + np.sin(3.0 * math.pi * x[1:]) ** 2))
        + (x[-1] - 1.0) ** 2 * (1.0 + math.sin(2.0 * math.pi * x[-1]) ** 2)
    )
    return float(0.1 * body + np.sum(penalty_u(x, 5.0, 100.0, 4.0)))


def kowalik(x: np.ndarray) -> float:
    b = KOWALIK_B
    with np.errstate(divide="ignore", invalid="ignore"):
        residual = KOWALIK_A - x[0] * (b**2 + b * x[1]) / (b**2 + b * x[2] + x[3])
    return float(np.sum(residual**2))


def branin(x: np.ndarray) -> float:
    x1, x2 = x
    return float(
        (x2 - 5.1 / (4.0 * math.pi**2) * x1**2 + 5.0 / math.pi * x1 - 6.0) ** 2
        + 10.0 * (1.0 - 1.0 / (8.0 * math.pi)) * math.cos(x1)
        + 10.0
    )


@dataclass(frozen=True, eq=False)
class BenchmarkEntry:
    id: str
    spec: ObjectiveSpec
    fmin: float
    modality: Modality
    minimizer: np.ndarray

    @property
    def dimension(self) -> int:
        return self.spec.space.dimension


def _deterministic(f: Callable[[np.ndarray], float]):
    def function(x, rng=None):
        return f(x)

    return function


def _entry(id, name, f, dimension, bound, fmin, modality, minimizer, noisy=False) -> BenchmarkEntry:
    space = SearchSpace.box(dimension, -bound, bound)
    spec = ObjectiveSpec(
        name=name,
        space=space,
        function=f if noisy else _deterministic(f),
        known_optimum=fmin,
        noisy=noisy,
    )
    minimizer = np.broadcast_to(np.asarray(minimizer, dtype=float), (dimension,)).copy()
    return BenchmarkEntry(id=id, spec=spec, fmin=fmin, modality=modality, minimizer=minimizer)


def _build_registry() -> Dict[str, BenchmarkEntry]:
    uni, multi, fixed = Modality.UNIMODAL, Modality.MULTIMODAL, Modality.FIXED_DIM_MULTIMODAL
    entries = [
        _entry("Fn1", "Sphere", sphere, 30, 100.0, 0.0, uni, 0.0),
        _entry("Fn2", "Schwefel 2.22", schwefel_2_22, 30, 10.0, 0.0, uni, 0.0),
        _entry("Fn3", "Schwefel 1.2", schwefel_1_2, 30, 100.0, 0.0, uni, 0.0),
        _entry("Fn4", "Schwefel 2.21", schwefel_2_21, 30, 100.0, 0.0, uni, 0.0),
        _entry("Fn5", "Rosenbrock", rosenbrock, 30, 30.0, 0.0, uni, 1.0),
        _entry("Fn6", "Step", step, 30, 100.0, 0.0, uni, 0.0),
        _entry("Fn7", "Noisy quartic", noisy_quartic, 30, 1.28, 0.0, uni, 0.0, noisy=True),
        _entry("Fn8", "Rastrigin", rastrigin, 30, 5.12, 0.0, multi, 0.0),
        _entry("Fn9", "Ackley", ackley, 30, 32.0, 0.0, multi, 0.0),
        _entry("Fn10", "Griewank", griewank, 30, 600.0, 0.0, multi, 0.0),
        _entry("Fn11", "Penalized 1", penalized_1, 30, 50.0, 0.0, multi, -1.0),
        _entry("Fn12", "Penalized 2", penalized_2, 30, 50.0, 0.0, multi, 1.0),
        _entry("Fn13", "Kowalik", kowalik, 4, 5.0, 0.00030, fixed, KOWALIK_MINIMIZER),
        _entry("Fn14", "Branin", branin, 2, 5.0, 0.398, fixed, BRANIN_MINIMIZER),
    ]
    return {entry.id: entry for entry in entries}


REGISTRY = _build_registry()


def get_benchmark(id: str) -> BenchmarkEntry:
    try:
        return REGISTRY[id]
    except KeyError:
        raise ConfigurationError(
            f"unknown benchmark {id!r}; known ids are {', '.join(REGISTRY)}"
        ) from None


def evaluate(id: str, x, rng: Optional[RandomSource] = None) -> float:
    return get_benchmark(id).spec.evaluate(x, rng)
