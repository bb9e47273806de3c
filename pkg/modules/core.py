#!/usr/bin/env python3

"""
Domain types shared by every optimizer and problem in ridley.

A candidate solution is a `Hatchling`: a scalar mass and a velocity
vector. The velocity doubles as the decision vector, so objectives are
evaluated at `velocity` and bound clamping is applied to it. Populations
are held as a `Nest`, a struct of arrays that the optimizers update in
place; `Hatchling` objects are the per-candidate view handed to callers.
"""


import math
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Callable, List, NamedTuple, Optional, Sequence

import numpy as np

from modules.errors import InvalidArgumentError

__version__ = "0.3.0-devel"


class EmergenceOrder(IntEnum):
    EARLY = 0
    MIDDLE = 1
    LATE = 2


class RandomSource:
    """
    Seeded stream of uniform reals and integers.

    Every stochastic decision in ridley goes through one of these, so
    equal seeds give bit-identical trajectories. One instance per run;
    instances are never shared between runs or workers.
    """

    def __init__(self, seed: int) -> None:
        seed = int(seed)
        if not 0 <= seed < 2**64:
            raise InvalidArgumentError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self.seed = seed
        self.generator = np.random.Generator(np.random.PCG64(seed))

    def uniform(self, low=0.0, high=1.0, size=None):
        return self.generator.uniform(low, high, size)

    def integers(self, low, high=None, size=None):
        return self.generator.integers(low, high, size)

    def choice(self, a, size=None, replace=True):
        return self.generator.choice(a, size=size, replace=replace)

    def permutation(self, x):
        return self.generator.permutation(x)

    def __repr__(self) -> str:
        return f"RandomSource(seed={self.seed})"


@dataclass(frozen=True, eq=False)
class SearchSpace:
    """Box-bounded search space; lower[j] < upper[j] for every dimension."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self) -> None:
        lower = np.atleast_1d(np.asarray(self.lower, dtype=float))
        upper = np.atleast_1d(np.asarray(self.upper, dtype=float))

        if lower.ndim != 1 or lower.shape != upper.shape or lower.size == 0:
            raise InvalidArgumentError(
                f"bounds must be two non-empty vectors of equal length, got {lower.shape} and {upper.shape}"
            )
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise InvalidArgumentError("bounds must be finite")
        if np.any(lower >= upper):
            bad = int(np.argmax(lower >= upper))
            raise InvalidArgumentError(
                f"lower bound must be below upper bound in every dimension (dimension {bad}: {lower[bad]} >= {upper[bad]})"
            )

        lower.flags.writeable = False
        upper.flags.writeable = False
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def box(cls, dimension: int, low: float, high: float) -> "SearchSpace":
        if dimension < 1:
            raise InvalidArgumentError(f"dimension must be positive, got {dimension}")
        return cls(np.full(dimension, low, dtype=float), np.full(dimension, high, dtype=float))

    @property
    def dimension(self) -> int:
        return int(self.lower.size)

    @property
    def span(self) -> np.ndarray:
        return self.upper - self.lower

    def clamp(self, x: np.ndarray) -> np.ndarray:
        return np.clip(x, self.lower, self.upper)

    def contains(self, x: np.ndarray) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))

    def sample(self, rng: RandomSource, size: Optional[int] = None) -> np.ndarray:
        shape = (self.dimension,) if size is None else (size, self.dimension)
        return rng.uniform(self.lower, self.upper, shape)

    def check(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dimension,):
            raise InvalidArgumentError(
                f"expected a vector of {self.dimension} components, got shape {x.shape}"
            )
        return x


@dataclass(frozen=True, eq=False)
class ObjectiveSpec:
    """
    A minimization objective over a search space.

    `function(x, rng)` receives the decision vector and the caller's
    random source; only noisy objectives read from `rng`.
    """

    name: str
    space: SearchSpace
    function: Callable[[np.ndarray, Optional[RandomSource]], float]
    known_optimum: Optional[float] = None
    noisy: bool = False

    def evaluate(self, x, rng: Optional[RandomSource] = None) -> float:
        return float(self.function(self.space.check(x), rng))

    __call__ = evaluate


@dataclass(eq=False)
class Hatchling:
    """One candidate: scalar mass plus the velocity that doubles as the decision vector."""

    mass: float
    velocity: np.ndarray
    objective_value: float = math.nan
    survival_factor: float = 1.0
    emergence_order: EmergenceOrder = EmergenceOrder.EARLY
    alive: bool = True


@dataclass(eq=False)
class Candidate:
    """A plain decision vector with its objective value, used by the baselines."""

    point: np.ndarray
    objective_value: float


@dataclass(eq=False)
class ConvergenceTrace:
    seed: int
    best_per_iteration: np.ndarray
    final_best_point: np.ndarray
    initial_best: float = math.nan

    def __len__(self) -> int:
        return int(len(self.best_per_iteration))

    def is_monotone(self) -> bool:
        values = np.asarray(self.best_per_iteration, dtype=float)
        return bool(np.all(values[1:] <= values[:-1]))


class RunOutcome(NamedTuple):
    best: object
    trace: ConvergenceTrace
    diagnostics: object


@dataclass(eq=False)
class Nest:
    """Struct-of-arrays view of a hatchling population."""

    masses: np.ndarray
    velocities: np.ndarray
    objective_values: np.ndarray
    survival_factors: np.ndarray
    emergence_orders: np.ndarray
    alive: np.ndarray = field(default=None)

    def __post_init__(self) -> None:
        if self.alive is None:
            self.alive = np.ones(len(self.masses), dtype=bool)

    def __len__(self) -> int:
        return int(len(self.masses))

    def hatchling(self, i: int) -> Hatchling:
        return Hatchling(
            mass=float(self.masses[i]),
            velocity=np.array(self.velocities[i], dtype=float),
            objective_value=float(self.objective_values[i]),
            survival_factor=float(self.survival_factors[i]),
            emergence_order=EmergenceOrder(int(self.emergence_orders[i])),
            alive=bool(self.alive[i]),
        )

    def hatchlings(self) -> List[Hatchling]:
        return [self.hatchling(i) for i in range(len(self))]

    def best_index(self) -> Optional[int]:
        """Index of the lowest finite objective value (lowest index on ties), None if none is finite."""
        finite = np.isfinite(self.objective_values)
        if not finite.any():
            return None
        values = np.where(finite, self.objective_values, np.inf)
        return int(np.argmin(values))

    @classmethod
    def from_hatchlings(cls, hatchlings: Sequence[Hatchling]) -> "Nest":
        return cls(
            masses=np.array([h.mass for h in hatchlings], dtype=float),
            velocities=np.array([h.velocity for h in hatchlings], dtype=float),
            objective_values=np.array([h.objective_value for h in hatchlings], dtype=float),
            survival_factors=np.array([h.survival_factor for h in hatchlings], dtype=float),
            emergence_orders=np.array([int(h.emergence_order) for h in hatchlings], dtype=int),
            alive=np.array([h.alive for h in hatchlings], dtype=bool),
        )


def sample_masses(rng: RandomSource, size: Optional[int] = None):
    # 1 - U[0, 1) lies in (0, 1]
    return 1.0 - rng.uniform(0.0, 1.0, size)


def emergence_orders(n: int, rng: Optional[RandomSource] = None, assignment: str = "tercile") -> np.ndarray:
    """
    Emergence labels for a population of n.

    Indices are split into three contiguous blocks whose sizes differ by
    at most one, larger blocks first; "random" shuffles those labels.
    """
    orders = np.empty(n, dtype=int)
    for order, block in zip(EmergenceOrder, np.array_split(np.arange(n), 3)):
        orders[block] = int(order)

    if assignment == "random":
        if rng is None:
            raise InvalidArgumentError("random emergence assignment needs a random source")
        orders = rng.permutation(orders)
    elif assignment != "tercile":
        raise InvalidArgumentError(f"unknown emergence assignment {assignment!r}")

    return orders


def survival_factors(values) -> np.ndarray:
    """
    (f_max - f_i) / (f_max - f_min) for the whole population.

    Non-finite values are excluded from f_max/f_min and scored 0; a
    degenerate population (f_max == f_min) scores 1 everywhere.
    """
    values = np.asarray(values, dtype=float)
    finite = np.isfinite(values)
    if not finite.any():
        return np.ones_like(values)

    factors = np.zeros_like(values)
    f_max = values[finite].max()
    f_min = values[finite].min()
    if f_max == f_min:
        factors[finite] = 1.0
    else:
        factors[finite] = (f_max - values[finite]) / (f_max - f_min)

    return np.clip(factors, 0.0, 1.0)


def evaluate_population(objective: ObjectiveSpec, points: np.ndarray, rng: Optional[RandomSource] = None) -> np.ndarray:
    with np.errstate(all="ignore"):
        return np.array([objective(x, rng) for x in points], dtype=float)


def initialize_nest(
    space: SearchSpace,
    n: int,
    rng: RandomSource,
    objective: ObjectiveSpec,
    assignment: str = "tercile",
) -> Nest:
    if n < 2:
        raise InvalidArgumentError(f"a population needs at least two hatchlings, got {n}")
    if space.dimension != objective.space.dimension:
        raise InvalidArgumentError(
            f"search space has {space.dimension} dimensions but {objective.name} expects {objective.space.dimension}"
        )

    velocities = space.sample(rng, n)
    masses = sample_masses(rng, n)
    orders = emergence_orders(n, rng, assignment)
    values = evaluate_population(objective, velocities, rng)

    return Nest(
        masses=masses,
        velocities=velocities,
        objective_values=values,
        survival_factors=survival_factors(values),
        emergence_orders=orders,
    )


def initialize_population(
    space: SearchSpace,
    n: int,
    rng: RandomSource,
    objective: ObjectiveSpec,
    assignment: str = "tercile",
) -> List[Hatchling]:
    """
    n hatchlings with uniform velocities inside `space` and masses in (0, 1].

    Objective values and survival factors are computed for the whole
    population before returning.
    """
    return initialize_nest(space, n, rng, objective, assignment).hatchlings()


def momentum_fitness(h: Hatchling) -> np.ndarray:
    """Elementwise mass * velocity, the momentum quantity; selection uses objective_value instead."""
    if not h.alive:
        raise InvalidArgumentError("momentum is only defined for live hatchlings")
    return h.mass * np.asarray(h.velocity, dtype=float)
