#!/usr/bin/env python3

"""
The Olive Ridley Survival (ORS) optimizer.

Each iteration perturbs every hatchling's velocity with two impacts:

- environmental: sand temperature, emergence order and time of day,
  summed and scaled by a uniform weight p1 (r1);
- trajectory: the tangential speed change of a curvilinear move around
  an obstacle, scaled by a uniform weight p2 (r2).

Hatchlings whose survival factor is below the cutoff add the resultant
r1 + r2 (explore), the rest subtract it (exploit); both are then scaled
by the hatchling's mass after adding the best velocity found so far.
Sand hot enough to kill replaces the hatchling with a fresh one.

The operators accept a single velocity vector or a whole population
(rows of a 2-D array); `optimize` runs them on the full population
every iteration.
"""


import math
from dataclasses import asdict, dataclass, field, fields, replace
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from constants import Constants
from modules.core import (
    ConvergenceTrace,
    EmergenceOrder,
    Hatchling,
    ObjectiveSpec,
    RandomSource,
    RunOutcome,
    SearchSpace,
    evaluate_population,
    initialize_nest,
    sample_masses,
    survival_factors,
)
from modules.errors import ConfigurationError, InvalidArgumentError

__version__ = "0.3.0-devel"


@dataclass(frozen=True)
class OrsParams:
    """
    Every tunable of ORS.

    `k1`/`k2` left as None are derived from the search range by
    `resolved`: 0.1 and 0.05 times the mean bound width.

    `weight_sampling` decides whether the impact weights p1 and p2 are
    drawn once per hatchling (every component scaled alike) or once per
    component. Per-component weights let the update change the ratios
    between coordinates.
    """

    omega1: float = Constants.Ors.OMEGA1
    omega2: float = Constants.Ors.OMEGA2
    omega3: float = Constants.Ors.OMEGA3
    omega4: float = Constants.Ors.OMEGA4
    omega5: float = Constants.Ors.OMEGA5
    k: float = Constants.Ors.K
    k1: Optional[float] = None
    k2: Optional[float] = None
    temp_tol: float = Constants.Ors.TEMP_TOL
    temp_max: float = Constants.Ors.TEMP_MAX
    temp_sample_range: Tuple[float, float] = Constants.Ors.TEMP_SAMPLE_RANGE
    day_length: float = Constants.Ors.DAY_LENGTH
    day_segments: Tuple[float, float, float] = Constants.Ors.DAY_SEGMENTS
    hours_per_iteration: float = Constants.Ors.HOURS_PER_ITERATION
    survival_cutoff: float = Constants.Ors.SURVIVAL_CUTOFF
    strict_cutoff: bool = True
    speed_retention: Tuple[float, float] = Constants.Ors.SPEED_RETENTION
    emergence_assignment: str = "tercile"
    weight_sampling: str = "hatchling"
    population_size: int = Constants.Ors.POPULATION
    max_iterations: int = Constants.Ors.ITERATIONS

    def __post_init__(self) -> None:
        object.__setattr__(self, "temp_sample_range", tuple(float(t) for t in self.temp_sample_range))
        object.__setattr__(self, "day_segments", tuple(float(t) for t in self.day_segments))
        object.__setattr__(self, "speed_retention", tuple(float(r) for r in self.speed_retention))

        for name in ("omega1", "omega2", "omega3", "omega4", "omega5"):
            if not getattr(self, name) > 1.0:
                raise InvalidArgumentError(f"{name} must be greater than 1, got {getattr(self, name)}")
        for name in ("k", "k1", "k2"):
            value = getattr(self, name)
            if value is not None and not value > 0.0:
                raise InvalidArgumentError(f"{name} must be positive, got {value}")

        if not self.temp_tol < self.temp_max:
            raise InvalidArgumentError(
                f"temp_tol ({self.temp_tol}) must be below temp_max ({self.temp_max})"
            )
        if len(self.temp_sample_range) != 2 or not self.temp_sample_range[0] < self.temp_sample_range[1]:
            raise InvalidArgumentError(f"temp_sample_range must be an increasing pair, got {self.temp_sample_range}")

        if len(self.day_segments) != 3:
            raise InvalidArgumentError(f"day_segments needs three boundaries, got {self.day_segments}")
        t1, t2, t3 = self.day_segments
        if not 0.0 <= t1 < t2 < t3 < self.day_length:
            raise InvalidArgumentError(
                f"day segments must satisfy 0 <= t1 < t2 < t3 < {self.day_length}, got {self.day_segments}"
            )
        if not self.hours_per_iteration > 0.0:
            raise InvalidArgumentError(f"hours_per_iteration must be positive, got {self.hours_per_iteration}")

        if not 0.0 < self.survival_cutoff < 1.0:
            raise InvalidArgumentError(f"survival_cutoff must lie in (0, 1), got {self.survival_cutoff}")
        low, high = self.speed_retention
        if not 0.0 < low <= high:
            raise InvalidArgumentError(f"speed_retention must be a positive non-decreasing pair, got {self.speed_retention}")
        if self.emergence_assignment not in Constants.Ors.EMERGENCE_ASSIGNMENT:
            raise InvalidArgumentError(
                f"emergence_assignment must be one of {Constants.Ors.EMERGENCE_ASSIGNMENT}, got {self.emergence_assignment!r}"
            )
        if self.weight_sampling not in Constants.Ors.WEIGHT_SAMPLING:
            raise InvalidArgumentError(
                f"weight_sampling must be one of {Constants.Ors.WEIGHT_SAMPLING}, got {self.weight_sampling!r}"
            )
        if self.population_size < 2:
            raise InvalidArgumentError(f"population_size must be at least 2, got {self.population_size}")
        if self.max_iterations < 1:
            raise InvalidArgumentError(f"max_iterations must be at least 1, got {self.max_iterations}")

    def resolved(self, space: SearchSpace) -> "OrsParams":
        width = float(np.mean(space.span))
        return replace(
            self,
            k1=self.k1 if self.k1 is not None else Constants.Ors.K1_SCALE * width,
            k2=self.k2 if self.k2 is not None else Constants.Ors.K2_SCALE * width,
        )

    @classmethod
    def from_overrides(cls, overrides: dict, **budget) -> "OrsParams":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(overrides) - known)
        if unknown:
            raise ConfigurationError(f"unknown ORS parameters: {', '.join(unknown)}")
        return cls(**{**overrides, **budget})


@dataclass
class EnvironmentState:
    """Sand temperature (per hatchling) and model day-time (shared) for one iteration."""

    sand_temp: np.ndarray
    day_time: float

    @classmethod
    def sample(cls, iteration: int, n: int, params: OrsParams, rng: RandomSource) -> "EnvironmentState":
        low, high = params.temp_sample_range
        return cls(sand_temp=rng.uniform(low, high, n), day_time=day_time_at(iteration, params))


class TemperatureEffect(NamedTuple):
    delta: np.ndarray
    dead: object


class EnvironmentalEffect(NamedTuple):
    r1: np.ndarray
    dead: object
    p1: object


class TrajectoryEffect(NamedTuple):
    magnitude_delta: np.ndarray
    angle_delta: object
    p2: object


@dataclass
class OrsDiagnostics:
    evaluations: int = 0
    deaths: int = 0
    explorations: int = 0
    exploitations: int = 0
    nonfinite: int = 0
    temperature_branches: List[int] = field(default_factory=lambda: [0, 0, 0])
    emergence_branches: List[int] = field(default_factory=lambda: [0, 0, 0])
    time_branches: List[int] = field(default_factory=lambda: [0, 0, 0])
    mean_abs_angle_delta: float = 0.0

    def as_dict(self) -> dict:
        return asdict(self)


def _rows(values, v: np.ndarray):
    """Broadcast one value per hatchling against a (n, d) population."""
    values = np.asarray(values)
    if v.ndim == 2 and values.ndim == 1:
        return values[:, None]
    return values


def _weight_shape(velocities: np.ndarray, sampling: str) -> tuple:
    return velocities.shape if sampling == "component" else velocities.shape[:-1]


def _scalar_or_array(values):
    values = np.asarray(values)
    return values.item() if values.ndim == 0 else values


def temperature_branch(temp, params: OrsParams):
    """0 below tolerance, 1 between tolerance and the lethal threshold, 2 lethal."""
    temp = np.asarray(temp, dtype=float)
    return np.where(temp <= params.temp_tol, 0, np.where(temp < params.temp_max, 1, 2))


def time_of_day_branch(day_time: float, params: OrsParams) -> int:
    """0 morning [t1, t2), 1 midday [t2, t3), 2 the cyclic night window [t3, T) + [0, t1)."""
    t1, t2, t3 = params.day_segments
    if t1 <= day_time < t2:
        return 0
    if t2 <= day_time < t3:
        return 1
    return 2


def day_time_at(iteration: int, params: OrsParams) -> float:
    return math.fmod(iteration * params.hours_per_iteration, params.day_length)


def temperature_delta(v, temp, params: OrsParams) -> TemperatureEffect:
    """
    Velocity change caused by sand temperature.

    Lethal temperatures (temp >= temp_max) report `dead` and a zero delta
    instead of the unbounded velocity the biological model implies.
    """
    v = np.asarray(v, dtype=float)
    branch = temperature_branch(temp, params)
    factor = np.select(
        [branch == 0, branch == 1],
        [params.omega1 - 1.0, (1.0 - params.omega2) / params.omega2],
        default=0.0,
    )
    return TemperatureEffect(delta=_rows(factor, v) * v, dead=_scalar_or_array(branch == 2))


def emergence_delta(v, order, params: OrsParams) -> np.ndarray:
    if params.k1 is None or params.k2 is None:
        raise InvalidArgumentError("k1 and k2 are unresolved; call params.resolved(space) first")

    v = np.asarray(v, dtype=float)
    order = np.asarray(order)
    shift = np.select(
        [order == EmergenceOrder.EARLY, order == EmergenceOrder.LATE],
        [params.k1, -params.k2],
        default=0.0,
    )
    return v * (params.k - 1.0) + _rows(shift, v)


def time_of_day_delta(v, day_time: float, params: OrsParams) -> np.ndarray:
    if not 0.0 <= day_time < params.day_length:
        raise InvalidArgumentError(f"day_time must lie in [0, {params.day_length}), got {day_time}")

    factor = (
        params.omega3 - 1.0,
        (1.0 - params.omega4) / params.omega4,
        params.omega5 - 1.0,
    )[time_of_day_branch(day_time, params)]
    return factor * np.asarray(v, dtype=float)


def _environmental(velocities, orders, sand_temp, day_time, params, rng) -> EnvironmentalEffect:
    velocities = np.asarray(velocities, dtype=float)
    temperature = temperature_delta(velocities, sand_temp, params)
    total = (
        temperature.delta
        + emergence_delta(velocities, orders, params)
        + time_of_day_delta(velocities, day_time, params)
    )

    p1 = rng.uniform(0.0, 1.0, _weight_shape(velocities, params.weight_sampling))
    r1 = _rows(p1, velocities) * total
    r1 = np.where(_rows(temperature.dead, velocities), 0.0, r1)

    return EnvironmentalEffect(r1=r1, dead=temperature.dead, p1=_scalar_or_array(p1))


def environmental_delta(h: Hatchling, env: EnvironmentState, params: OrsParams, rng: RandomSource) -> EnvironmentalEffect:
    """r1 = p1 * (temperature + emergence + time-of-day deltas); death propagates from temperature."""
    if not h.alive:
        raise InvalidArgumentError("environmental impact is only defined for live hatchlings")
    return _environmental(h.velocity, int(h.emergence_order), float(env.sand_temp), env.day_time, params, rng)


def planar_speed(vx, vy):
    return np.hypot(vx, vy)


def tangential_delta(vx_a, vy_a, vx_b, vy_b):
    """Speed at B minus speed at A for planar velocity components."""
    return planar_speed(vx_b, vy_b) - planar_speed(vx_a, vy_a)


def _trajectory(velocities, rng, retention, sampling: str = "hatchling") -> TrajectoryEffect:
    velocities = np.asarray(velocities, dtype=float)
    shape = velocities.shape[:-1]

    theta1 = rng.uniform(0.0, math.pi / 2, shape)
    theta2 = rng.uniform(0.0, math.pi / 2, shape)
    rho = rng.uniform(retention[0], retention[1], shape)
    p2 = rng.uniform(0.0, 1.0, _weight_shape(velocities, sampling))

    # each component's speed is split into planar parts at the obstacle angle
    speed = np.abs(velocities)
    vx_a = speed * _rows(np.cos(theta1), velocities)
    vy_a = speed * _rows(np.sin(theta1), velocities)
    speed_b = _rows(rho, velocities) * speed
    vx_b = speed_b * _rows(np.cos(theta2), velocities)
    vy_b = speed_b * _rows(np.sin(theta2), velocities)

    delta = tangential_delta(vx_a, vy_a, vx_b, vy_b)
    return TrajectoryEffect(
        magnitude_delta=_rows(p2, velocities) * delta,
        angle_delta=_scalar_or_array(theta2 - theta1),
        p2=_scalar_or_array(p2),
    )


def trajectory_delta(h: Hatchling, rng: RandomSource, params: Optional[OrsParams] = None) -> TrajectoryEffect:
    """
    r2 = p2 * (tangential speed change), plus the angular change for diagnostics.

    The speed-retention factor is shared by every dimension of the
    hatchling; the angle change does not enter r2.
    """
    if not h.alive:
        raise InvalidArgumentError("trajectory impact is only defined for live hatchlings")
    if params is None:
        return _trajectory(h.velocity, rng, Constants.Ors.SPEED_RETENTION)
    return _trajectory(h.velocity, rng, params.speed_retention, params.weight_sampling)


def survival_factor(objective_values, i: int) -> float:
    values = np.asarray(objective_values, dtype=float)
    if values.size < 2:
        raise InvalidArgumentError(f"survival factors need at least two values, got {values.size}")
    return float(survival_factors(values)[i])


def _explores(factors, cutoff: float, strict: bool = True):
    factors = np.asarray(factors, dtype=float)
    return factors < cutoff if strict else factors <= cutoff


def _attract(masses, velocities, best_velocity, resultant, explore):
    velocities = np.asarray(velocities, dtype=float)
    sign = np.where(explore, 1.0, -1.0)
    moved = velocities + _rows(sign, velocities) * resultant
    return _rows(masses, velocities) * (moved + best_velocity)


def update_hatchling(
    h: Hatchling,
    best: Hatchling,
    resultant,
    cutoff: float,
    objective: ObjectiveSpec,
    rng: Optional[RandomSource] = None,
    strict: bool = True,
) -> Hatchling:
    """
    Move a hatchling toward the best one.

    Below the cutoff the resultant is added, otherwise subtracted; the
    result is mass-scaled, clamped to the bounds and re-evaluated.
    """
    if not h.alive:
        raise InvalidArgumentError("only live hatchlings can be updated")
    resultant = np.asarray(resultant, dtype=float)
    if resultant.shape != np.shape(h.velocity):
        raise InvalidArgumentError(
            f"resultant has shape {resultant.shape}, velocity has {np.shape(h.velocity)}"
        )

    explore = bool(_explores(h.survival_factor, cutoff, strict))
    velocity = objective.space.clamp(_attract(h.mass, h.velocity, best.velocity, resultant, explore))
    with np.errstate(all="ignore"):
        value = objective(velocity, rng)

    return replace(h, velocity=velocity, objective_value=value)


def handle_death(h: Hatchling, space: SearchSpace, rng: RandomSource, objective: ObjectiveSpec) -> Hatchling:
    """A fresh uniform hatchling in the same emergence slot."""
    velocity = space.sample(rng)
    mass = float(sample_masses(rng))
    with np.errstate(all="ignore"):
        value = objective(velocity, rng)

    return replace(h, mass=mass, velocity=velocity, objective_value=value, alive=True)


def optimize(objective: ObjectiveSpec, params: OrsParams, rng: RandomSource) -> RunOutcome:
    """
    Run ORS for `params.max_iterations` iterations.

    Returns the best hatchling, the best-so-far trace (one entry per
    iteration) and run diagnostics. The incumbent changes only on a
    strictly better finite objective value.
    """
    space = objective.space
    params = params.resolved(space)
    n = params.population_size

    nest = initialize_nest(space, n, rng, objective, params.emergence_assignment)
    diagnostics = OrsDiagnostics(evaluations=n)
    diagnostics.nonfinite += int(np.sum(~np.isfinite(nest.objective_values)))

    incumbent = nest.best_index()
    best = nest.hatchling(incumbent if incumbent is not None else 0)
    if incumbent is None:
        best.objective_value = math.inf
    initial_best = best.objective_value

    trace = np.empty(params.max_iterations, dtype=float)
    angle_total = 0.0

    for t in range(params.max_iterations):
        env = EnvironmentState.sample(t, n, params, rng)
        environmental = _environmental(
            nest.velocities, nest.emergence_orders, env.sand_temp, env.day_time, params, rng
        )
        trajectory = _trajectory(nest.velocities, rng, params.speed_retention, params.weight_sampling)
        resultant = environmental.r1 + trajectory.magnitude_delta

        explore = _explores(nest.survival_factors, params.survival_cutoff, params.strict_cutoff)
        velocities = space.clamp(
            _attract(nest.masses, nest.velocities, best.velocity, resultant, explore)
        )

        dead = np.asarray(environmental.dead, dtype=bool)
        n_dead = int(dead.sum())
        if n_dead:
            velocities[dead] = space.sample(rng, n_dead)
            nest.masses[dead] = sample_masses(rng, n_dead)

        nest.velocities = velocities
        nest.objective_values = evaluate_population(objective, velocities, rng)
        nest.survival_factors = survival_factors(nest.objective_values)

        diagnostics.evaluations += n
        diagnostics.deaths += n_dead
        diagnostics.explorations += int(np.sum(explore & ~dead))
        diagnostics.exploitations += int(np.sum(~explore & ~dead))
        diagnostics.nonfinite += int(np.sum(~np.isfinite(nest.objective_values)))
        for counts, branches in (
            (diagnostics.temperature_branches, temperature_branch(env.sand_temp, params)),
            (diagnostics.emergence_branches, nest.emergence_orders),
        ):
            for b, c in enumerate(np.bincount(branches, minlength=3)):
                counts[b] += int(c)
        diagnostics.time_branches[time_of_day_branch(env.day_time, params)] += n
        angle_total += float(np.sum(np.abs(trajectory.angle_delta)))

        candidate = nest.best_index()
        if candidate is not None and nest.objective_values[candidate] < best.objective_value:
            best = nest.hatchling(candidate)

        trace[t] = best.objective_value

    diagnostics.mean_abs_angle_delta = angle_total / (n * params.max_iterations)

    return RunOutcome(
        best=best,
        trace=ConvergenceTrace(
            seed=rng.seed,
            best_per_iteration=trace,
            final_best_point=np.array(best.velocity, dtype=float),
            initial_best=initial_best,
        ),
        diagnostics=diagnostics,
    )
