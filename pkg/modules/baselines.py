#!/usr/bin/env python3

"""
Reference optimizers run against ORS under the same evaluation budget.

- de: Differential Evolution, rand/1/bin with greedy selection;
- random: uniform random search.

Both spend population_size * (max_iterations + 1) objective evaluations
and produce the same best-so-far trace as ORS.
"""


import math
from dataclasses import asdict, dataclass, fields

import numpy as np

from constants import Constants
from modules.core import (
    Candidate,
    ConvergenceTrace,
    ObjectiveSpec,
    RandomSource,
    RunOutcome,
    evaluate_population,
)
from modules.errors import ConfigurationError, InvalidArgumentError

__version__ = "0.3.0-devel"


def _from_overrides(cls, overrides: dict, budget: dict):
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(overrides) - known)
    if unknown:
        raise ConfigurationError(f"unknown {cls.__name__} parameters: {', '.join(unknown)}")
    return cls(**{**overrides, **budget})


@dataclass(frozen=True)
class DeParams:
    population_size: int = Constants.De.POPULATION
    max_iterations: int = Constants.De.ITERATIONS
    F: float = Constants.De.F
    CR: float = Constants.De.CR
    strategy: str = Constants.De.STRATEGY

    def __post_init__(self) -> None:
        if self.population_size < 4:
            raise InvalidArgumentError(
                f"rand/1 needs three donors besides the target; population_size must be at least 4, got {self.population_size}"
            )
        if self.max_iterations < 1:
            raise InvalidArgumentError(f"max_iterations must be at least 1, got {self.max_iterations}")
        if not self.F > 0.0:
            raise InvalidArgumentError(f"F must be positive, got {self.F}")
        if not 0.0 <= self.CR <= 1.0:
            raise InvalidArgumentError(f"CR must lie in [0, 1], got {self.CR}")
        if self.strategy != Constants.De.STRATEGY:
            raise InvalidArgumentError(f"only the {Constants.De.STRATEGY} strategy is available, got {self.strategy!r}")

    @classmethod
    def from_overrides(cls, overrides: dict, **budget) -> "DeParams":
        return _from_overrides(cls, overrides, budget)


@dataclass(frozen=True)
class RandomSearchParams:
    population_size: int = Constants.Campaign.POPULATION
    max_iterations: int = Constants.Campaign.ITERATIONS

    def __post_init__(self) -> None:
        if self.population_size < 1:
            raise InvalidArgumentError(f"population_size must be positive, got {self.population_size}")
        if self.max_iterations < 1:
            raise InvalidArgumentError(f"max_iterations must be at least 1, got {self.max_iterations}")

    @classmethod
    def from_overrides(cls, overrides: dict, **budget) -> "RandomSearchParams":
        return _from_overrides(cls, overrides, budget)


@dataclass
class BaselineDiagnostics:
    evaluations: int = 0
    nonfinite: int = 0
    accepted: int = 0

    def as_dict(self) -> dict:
        return asdict(self)


def _better(trial, current):
    """Finite trial values replace non-finite or worse-or-equal incumbents."""
    trial = np.asarray(trial, dtype=float)
    current = np.asarray(current, dtype=float)
    return np.isfinite(trial) & ((trial <= current) | ~np.isfinite(current))


def _best(points: np.ndarray, values: np.ndarray) -> Candidate:
    finite = np.isfinite(values)
    if not finite.any():
        return Candidate(point=np.array(points[0], dtype=float), objective_value=math.inf)
    i = int(np.argmin(np.where(finite, values, np.inf)))
    return Candidate(point=np.array(points[i], dtype=float), objective_value=float(values[i]))


def _donors(n: int, rng: RandomSource) -> np.ndarray:
    """Three distinct indices per target, none equal to the target."""
    donors = np.empty((n, 3), dtype=int)
    for i in range(n):
        picks = rng.choice(n - 1, size=3, replace=False)
        donors[i] = picks + (picks >= i)
    return donors


def de_optimize(objective: ObjectiveSpec, params: DeParams, rng: RandomSource) -> RunOutcome:
    """
    Synchronous DE/rand/1/bin.

    Every generation builds all trial vectors from the current population,
    clamps them to the bounds, evaluates them and keeps each trial that is
    at least as good as its target.
    """
    space = objective.space
    n, d = params.population_size, space.dimension

    population = space.sample(rng, n)
    values = evaluate_population(objective, population, rng)
    diagnostics = BaselineDiagnostics(evaluations=n, nonfinite=int(np.sum(~np.isfinite(values))))

    best = _best(population, values)
    initial_best = best.objective_value
    trace = np.empty(params.max_iterations, dtype=float)

    for t in range(params.max_iterations):
        r = _donors(n, rng)
        mutants = population[r[:, 0]] + params.F * (population[r[:, 1]] - population[r[:, 2]])

        cross = rng.uniform(0.0, 1.0, (n, d)) < params.CR
        jrand = rng.integers(0, d, n)
        cross[np.arange(n), jrand] = True

        trials = space.clamp(np.where(cross, mutants, population))
        trial_values = evaluate_population(objective, trials, rng)

        accept = _better(trial_values, values)
        population[accept] = trials[accept]
        values[accept] = trial_values[accept]

        diagnostics.evaluations += n
        diagnostics.nonfinite += int(np.sum(~np.isfinite(trial_values)))
        diagnostics.accepted += int(accept.sum())

        candidate = _best(population, values)
        if candidate.objective_value < best.objective_value:
            best = candidate
        trace[t] = best.objective_value

    return RunOutcome(
        best=best,
        trace=ConvergenceTrace(
            seed=rng.seed,
            best_per_iteration=trace,
            final_best_point=np.array(best.point, dtype=float),
            initial_best=initial_best,
        ),
        diagnostics=diagnostics,
    )


def random_search(objective: ObjectiveSpec, params: RandomSearchParams, rng: RandomSource) -> RunOutcome:
    """Fresh uniform batches of population_size points; the initial batch counts as one."""
    space = objective.space
    n = params.population_size

    points = space.sample(rng, n)
    values = evaluate_population(objective, points, rng)
    diagnostics = BaselineDiagnostics(evaluations=n, nonfinite=int(np.sum(~np.isfinite(values))))

    best = _best(points, values)
    initial_best = best.objective_value
    trace = np.empty(params.max_iterations, dtype=float)

    for t in range(params.max_iterations):
        points = space.sample(rng, n)
        values = evaluate_population(objective, points, rng)
        diagnostics.evaluations += n
        diagnostics.nonfinite += int(np.sum(~np.isfinite(values)))

        candidate = _best(points, values)
        if candidate.objective_value < best.objective_value:
            best = candidate
            diagnostics.accepted += 1
        trace[t] = best.objective_value

    return RunOutcome(
        best=best,
        trace=ConvergenceTrace(
            seed=rng.seed,
            best_per_iteration=trace,
            final_best_point=np.array(best.point, dtype=float),
            initial_best=initial_best,
        ),
        diagnostics=diagnostics,
    )
