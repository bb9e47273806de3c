#!/usr/bin/env python3

""" A module with ridley base utility functions. """


import math
import os
from dataclasses import replace

import numpy as np
import pandas as pd

from constants import Constants
from modules.core import ObjectiveSpec
from modules.engineering import ConstrainedProblem, penalized_objective
from modules.errors import InvalidArgumentError, ReportError

__version__ = "0.3.0-devel"


class EvaluationCounter:
    """Counts every call to the wrapped objective function."""

    def __init__(self, function) -> None:
        self.function = function
        self.calls = 0

    def __call__(self, x, rng=None):
        self.calls += 1
        return self.function(x, rng)


class FeasibilityTracker:
    """
    Penalized objective of a constrained problem that remembers the best
    feasible design it has been asked to evaluate.
    """

    def __init__(self, problem: ConstrainedProblem, tol: float = Constants.FEASIBILITY_TOL) -> None:
        self.problem = problem
        self.tol = tol
        self.best_value = math.inf
        self.best_point = None

    @property
    def found_feasible(self) -> bool:
        return self.best_point is not None

    def __call__(self, z, rng=None) -> float:
        with np.errstate(all="ignore"):
            raw = self.problem.raw(z)
            constraints = self.problem.constraint_values(z)
        if np.all(constraints <= self.tol) and math.isfinite(raw) and raw < self.best_value:
            self.best_value = raw
            self.best_point = np.array(z, dtype=float)
        return penalized_objective(self.problem, z)


def counted(objective: ObjectiveSpec):
    """
    @type objective: ObjectiveSpec
    @param objective: objective to audit
    @rtype: tuple
    @return: (objective whose calls are counted, the counter)
    """
    counter = EvaluationCounter(objective.function)
    return replace(objective, function=counter), counter


def sample_reader(path: str) -> np.ndarray:
    """
    Reads per-run final bests from a .csv file.

    Uses the `final_best` column when present, else the first numeric
    column.

    @type path: str
    @param path: path to a .csv file
    """
    try:
        df = pd.read_csv(path, float_precision="round_trip")
    except (pd.errors.EmptyDataError, pd.errors.ParserError) as error:
        raise InvalidArgumentError(f"could not read run results from {path}: {error}") from error

    if "final_best" in df.columns:
        column = df["final_best"]
    else:
        numeric = df.select_dtypes(include="number")
        if numeric.empty:
            raise InvalidArgumentError(f"{path} has no numeric column to read run results from")
        column = numeric.iloc[:, 0]

    return column.to_numpy(dtype=float)


def ensure_writable(outdir: str) -> str:
    """
    Create `outdir` if needed and check that files can be written in it.

    @type outdir: str
    @param outdir: output directory
    """
    outdir = os.path.abspath(outdir)
    probe = os.path.join(outdir, ".ridley_write_probe")
    try:
        os.makedirs(outdir, exist_ok=True)
        with open(probe, "w") as handle:
            handle.write("")
        os.remove(probe)
    except OSError as error:
        raise ReportError(f"output directory {outdir} is not writable: {error}") from error

    return outdir
