#!/usr/bin/env python3

"""
Constrained engineering design problems: pressure vessel (pvd), welded
beam (wbd) and tension/compression spring (sd).

Constraints are g_i(z) <= 0 and are folded into the objective with a
static quadratic exterior penalty:

    f(z) + c * sum(max(0, g_i(z))^2),   c = 1e6 by default

Two constraints follow their canonical forms: pvd g2 is
-z2 + 0.00954 z3 and wbd g7 uses 0.10471 z1^2 with no z2 factor.
"""


import math
from dataclasses import dataclass
from typing import Callable, Dict, List, NamedTuple, Sequence

import numpy as np

from constants import Constants
from modules.core import ObjectiveSpec, SearchSpace
from modules.errors import ConfigurationError, InvalidArgumentError

__version__ = "0.3.0-devel"

Beam = Constants.WeldedBeam


class ConstraintStatus(NamedTuple):
    index: int
    value: float
    satisfied: bool


@dataclass(frozen=True, eq=False)
class ConstrainedProblem:
    name: str
    id: str
    space: SearchSpace
    objective: Callable[[np.ndarray], float]
    constraints: Sequence[Callable[[np.ndarray], float]]
    penalty_coefficient: float = Constants.PENALTY_COEFFICIENT

    def __post_init__(self) -> None:
        if not self.penalty_coefficient > 0.0:
            raise InvalidArgumentError(
                f"penalty_coefficient must be positive, got {self.penalty_coefficient}"
            )

    def constraint_values(self, z) -> np.ndarray:
        z = self.space.check(z)
        return np.array([g(z) for g in self.constraints], dtype=float)

    def raw(self, z) -> float:
        return float(self.objective(self.space.check(z)))


def penalized_objective(problem: ConstrainedProblem, z) -> float:
    """
    @type problem: ConstrainedProblem
    @param problem: the design problem
    @type z: np.ndarray
    @param z: design vector
    @rtype: float
    @return: raw objective plus c * sum(max(0, g_i)^2)
    """
    with np.errstate(all="ignore"):
        violation = np.maximum(0.0, problem.constraint_values(z))
        return problem.raw(z) + problem.penalty_coefficient * float(np.sum(violation**2))


def feasibility_report(problem: ConstrainedProblem, z, tol: float = Constants.FEASIBILITY_TOL) -> List[ConstraintStatus]:
    with np.errstate(all="ignore"):
        values = problem.constraint_values(z)
    return [
        ConstraintStatus(index=i, value=float(v), satisfied=bool(v <= tol))
        for i, v in enumerate(values, start=1)
    ]


def is_feasible(problem: ConstrainedProblem, z, tol: float = Constants.FEASIBILITY_TOL) -> bool:
    return all(status.satisfied for status in feasibility_report(problem, z, tol))


def as_objective_spec(problem: ConstrainedProblem) -> ObjectiveSpec:
    return ObjectiveSpec(
        name=problem.name,
        space=problem.space,
        function=lambda z, rng=None: penalized_objective(problem, z),
    )


# pressure vessel: z = (shell thickness, head thickness, inner radius, length)


def vessel_cost(z: np.ndarray) -> float:
    z1, z2, z3, z4 = z
    return 0.6224 * z1 * z3 * z4 + 1.7781 * z2 * z3**2 + 3.1661 * z1**2 * z4 + 19.84 * z1**2 * z3


VESSEL_CONSTRAINTS = (
    lambda z: -z[0] + 0.0193 * z[2],
    lambda z: -z[1] + 0.00954 * z[2],
    lambda z: -math.pi * z[2] ** 2 * z[3] - 4.0 / 3.0 * math.pi * z[2] ** 3 + 1296000.0,
    lambda z: z[3] - 240.0,
)


# welded beam: z = (weld thickness h, weld length l, bar height t, bar thickness b)


def welding_cost(z: np.ndarray) -> float:
    z1, z2, z3, z4 = z
    return 1.10471 * z1**2 * z2 + 0.04811 * z3 * z4 * (14.0 + z2)


def shear_stress(z: np.ndarray) -> float:
    h, l, t, _ = z
    primary = Beam.P / (math.sqrt(2.0) * h * l)
    moment = Beam.P * (Beam.L + l / 2.0)
    radius = math.sqrt(l**2 / 4.0 + ((h + t) / 2.0) ** 2)
    polar = 2.0 * (math.sqrt(2.0) * h * l * (l**2 / 12.0 + ((h + t) / 2.0) ** 2))
    secondary = moment * radius / polar
    return math.sqrt(primary**2 + 2.0 * primary * secondary * l / (2.0 * radius) + secondary**2)


def bending_stress(z: np.ndarray) -> float:
    _, _, t, b = z
    return 6.0 * Beam.P * Beam.L / (b * t**2)


def end_deflection(z: np.ndarray) -> float:
    _, _, t, b = z
    return 4.0 * Beam.P * Beam.L**3 / (Beam.E * t**3 * b)


def buckling_load(z: np.ndarray) -> float:
    _, _, t, b = z
    return (
        4.013 * Beam.E * math.sqrt(t**2 * b**6 / 36.0) / Beam.L**2
        * (1.0 - t / (2.0 * Beam.L) * math.sqrt(Beam.E / (4.0 * Beam.G)))
    )


BEAM_CONSTRAINTS = (
    lambda z: shear_stress(z) - Beam.TAU_MAX,
    lambda z: bending_stress(z) - Beam.SIGMA_MAX,
    lambda z: end_deflection(z) - Beam.DELTA_MAX,
    lambda z: z[0] - z[3],
    lambda z: Beam.P - buckling_load(z),
    lambda z: 0.125 - z[0],
    lambda z: 0.10471 * z[0] ** 2 + 0.04811 * z[2] * z[3] * (14.0 + z[1]) - 5.0,
)


# spring: z = (wire diameter d, mean coil diameter D, active coils N)


def spring_weight(z: np.ndarray) -> float:
    d, D, N = z
    return (N + 2.0) * D * d**2


SPRING_CONSTRAINTS = (
    lambda z: 1.0 - z[1] ** 3 * z[2] / (71785.0 * z[0] ** 4),
    lambda z: (4.0 * z[1] ** 2 - z[0] * z[1]) / (12566.0 * (z[1] * z[0] ** 3 - z[0] ** 4))
    + 1.0 / (5108.0 * z[0] ** 2)
    - 1.0,
    lambda z: 1.0 - 140.45 * z[0] / (z[1] ** 2 * z[2]),
    lambda z: (z[0] + z[1]) / 1.5 - 1.0,
)


def _build_registry() -> Dict[str, ConstrainedProblem]:
    problems = [
        ConstrainedProblem(
            name="PVD",
            id="pvd",
            space=SearchSpace([0.0, 0.0, 10.0, 10.0], [99.0, 99.0, 200.0, 200.0]),
            objective=vessel_cost,
            constraints=VESSEL_CONSTRAINTS,
        ),
        ConstrainedProblem(
            name="WBD",
            id="wbd",
            space=SearchSpace([0.1, 0.1, 0.1, 0.1], [2.0, 10.0, 10.0, 2.0]),
            objective=welding_cost,
            constraints=BEAM_CONSTRAINTS,
        ),
        ConstrainedProblem(
            name="SD",
            id="sd",
            space=SearchSpace([0.05, 0.25, 2.0], [2.0, 1.3, 15.0]),
            objective=spring_weight,
            constraints=SPRING_CONSTRAINTS,
        ),
    ]
    return {problem.id: problem for problem in problems}


REGISTRY = _build_registry()


def get_problem(id: str) -> ConstrainedProblem:
    try:
        return REGISTRY[id]
    except KeyError:
        raise ConfigurationError(
            f"unknown engineering problem {id!r}; known ids are {', '.join(REGISTRY)}"
        ) from None
