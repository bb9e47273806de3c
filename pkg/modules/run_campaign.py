#!/usr/bin/env python3

"""
Module to run a benchmark campaign: every (algorithm, problem) cell is run
R times with paired seeds, summarized and compared against the first
listed algorithm with the Wilcoxon signed-rank test.

Run r of every cell uses seed `base_seed + r`, so the same run index of
two algorithms starts from the same random stream.
"""


import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from typing import Dict, List, NamedTuple, Optional, Tuple

import numpy as np

from constants import Constants
from logger import Log
from modules.baselines import DeParams, RandomSearchParams, de_optimize, random_search
from modules.benchmarks import REGISTRY as BENCHMARKS
from modules.core import ObjectiveSpec, RandomSource
from modules.engineering import REGISTRY as ENGINEERING
from modules.engineering import ConstrainedProblem, as_objective_spec
from modules.errors import ConfigurationError, InvalidArgumentError
from modules.ors_optimizer import OrsParams, optimize
from modules.stats import RunSample, Summary, WilcoxonResult, summarize, wilcoxon_signed_rank
from modules.utils import FeasibilityTracker, counted, ensure_writable
from modules.write_reports import emit_reports

__version__ = "0.3.0-devel"

ALGORITHMS = {
    "ors": (OrsParams, optimize),
    "de": (DeParams, de_optimize),
    "random": (RandomSearchParams, random_search),
}

BUDGET_KEYS = ("population_size", "max_iterations")


def resolve_problem(id: str) -> Tuple[ObjectiveSpec, Optional[ConstrainedProblem]]:
    """
    @type id: str
    @param id: benchmark ("Fn1".."Fn14") or engineering ("pvd", "wbd", "sd") id
    @rtype: tuple
    @return: (objective to minimize, the constrained problem or None)
    """
    if id in BENCHMARKS:
        return BENCHMARKS[id].spec, None
    if id in ENGINEERING:
        problem = ENGINEERING[id]
        return as_objective_spec(problem), problem
    raise ConfigurationError(
        f"unknown problem {id!r}; known ids are {', '.join([*BENCHMARKS, *ENGINEERING])}"
    )


def build_params(algorithm: str, overrides: dict, population: int, iterations: int):
    if algorithm not in ALGORITHMS:
        raise ConfigurationError(f"unknown algorithm {algorithm!r}; known ids are {', '.join(ALGORITHMS)}")

    fixed = sorted(set(overrides) & set(BUDGET_KEYS))
    if fixed:
        raise ConfigurationError(
            f"{algorithm}: {', '.join(fixed)} come from the campaign's population/iterations and cannot be overridden"
        )

    cls, _ = ALGORITHMS[algorithm]
    try:
        return cls.from_overrides(overrides, population_size=population, max_iterations=iterations)
    except (InvalidArgumentError, TypeError) as error:
        raise ConfigurationError(f"{algorithm}: {error}") from error


@dataclass(frozen=True)
class AlgorithmSpec:
    id: str
    params: dict = field(default_factory=dict)

    @classmethod
    def parse(cls, entry) -> "AlgorithmSpec":
        if isinstance(entry, str):
            return cls(id=entry)
        if isinstance(entry, dict) and "id" in entry and set(entry) <= {"id", "params"}:
            params = entry.get("params") or {}
            if not isinstance(params, dict):
                raise ConfigurationError(f"params of algorithm {entry['id']!r} must be a mapping")
            return cls(id=str(entry["id"]), params=dict(params))
        raise ConfigurationError(
            f"an algorithm entry must be an id or {{'id': ..., 'params': {{...}}}}, got {entry!r}"
        )

    def to_dict(self) -> dict:
        return {"id": self.id, "params": dict(self.params)}


@dataclass
class CampaignConfig:
    problems: List[str]
    algorithms: List[AlgorithmSpec]
    runs: int = Constants.Campaign.RUNS
    iterations: int = Constants.Campaign.ITERATIONS
    population: int = Constants.Campaign.POPULATION
    base_seed: int = Constants.BASE_SEED
    output_dir: str = Constants.Campaign.OUTDIR
    workers: int = Constants.Campaign.WORKERS

    @classmethod
    def from_dict(cls, data: dict) -> "CampaignConfig":
        if not isinstance(data, dict):
            raise ConfigurationError("a campaign configuration must be a mapping")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigurationError(f"unknown campaign fields: {', '.join(unknown)}")
        missing = [key for key in ("problems", "algorithms") if key not in data]
        if missing:
            raise ConfigurationError(f"campaign configuration is missing {', '.join(missing)}")

        data = dict(data)
        if isinstance(data["problems"], str) or isinstance(data["algorithms"], str):
            raise ConfigurationError("problems and algorithms must be lists")
        data["problems"] = [str(p) for p in data["problems"]]
        data["algorithms"] = [AlgorithmSpec.parse(a) for a in data["algorithms"]]
        for key in ("runs", "iterations", "population", "base_seed", "workers"):
            if key in data and (isinstance(data[key], bool) or not isinstance(data[key], int)):
                raise ConfigurationError(f"{key} must be an integer, got {data[key]!r}")

        return cls(**data)

    @classmethod
    def from_file(cls, path: str) -> "CampaignConfig":
        """
        Reads a .json campaign file; RIDLEY_OUTDIR, when set, replaces output_dir.

        @type path: str
        @param path: path to the campaign file
        """
        try:
            with open(path, "r") as handle:
                data = json.load(handle)
        except FileNotFoundError:
            raise ConfigurationError(f"campaign file {path} does not exist") from None
        except json.JSONDecodeError as error:
            raise ConfigurationError(f"campaign file {path} is not valid JSON: {error}") from error

        config = cls.from_dict(data)
        return config.with_env_override()

    def with_env_override(self) -> "CampaignConfig":
        outdir = os.environ.get(Constants.Env.OUTDIR)
        return replace(self, output_dir=outdir) if outdir else self

    def seed_for(self, run: int) -> int:
        return self.base_seed + run

    def validate(self) -> None:
        """Resolve every id and parameter set; raises before anything runs."""
        if not self.problems:
            raise ConfigurationError("a campaign needs at least one problem")
        if not self.algorithms:
            raise ConfigurationError("a campaign needs at least one algorithm")
        for label, ids in (("problem", self.problems), ("algorithm", [a.id for a in self.algorithms])):
            duplicated = sorted({i for i in ids if ids.count(i) > 1})
            if duplicated:
                raise ConfigurationError(f"duplicated {label} ids: {', '.join(duplicated)}")

        if self.runs < 1:
            raise ConfigurationError(f"runs must be at least 1, got {self.runs}")
        if self.iterations < 1:
            raise ConfigurationError(f"iterations must be at least 1, got {self.iterations}")
        if self.workers < 1:
            raise ConfigurationError(f"workers must be at least 1, got {self.workers}")
        if not (0 <= self.base_seed and self.base_seed + self.runs <= 2**64):
            raise ConfigurationError(f"base_seed + runs must fit in 64 bits, got base_seed {self.base_seed}")

        for problem in self.problems:
            resolve_problem(problem)
        for algorithm in self.algorithms:
            build_params(algorithm.id, algorithm.params, self.population, self.iterations)

    def tasks(self) -> List["CellTask"]:
        return [
            CellTask(
                algorithm=algorithm.id,
                problem=problem,
                run=r,
                seed=self.seed_for(r),
                params=algorithm.params,
                population=self.population,
                iterations=self.iterations,
            )
            for algorithm in self.algorithms
            for problem in self.problems
            for r in range(self.runs)
        ]

    def to_dict(self) -> dict:
        return {
            "problems": list(self.problems),
            "algorithms": [a.to_dict() for a in self.algorithms],
            "runs": self.runs,
            "iterations": self.iterations,
            "population": self.population,
            "base_seed": self.base_seed,
            "output_dir": self.output_dir,
            "workers": self.workers,
        }


class CellTask(NamedTuple):
    algorithm: str
    problem: str
    run: int
    seed: int
    params: dict
    population: int
    iterations: int


@dataclass(eq=False)
class CellResult:
    algorithm: str
    problem: str
    run: int
    seed: int
    final_best: float
    best_point: np.ndarray
    trace: np.ndarray
    initial_best: float
    evaluations: int
    feasible: Optional[bool] = None
    diagnostics: dict = field(default_factory=dict)


def run_cell(task: CellTask) -> CellResult:
    """
    One seeded run of one algorithm on one problem.

    Engineering problems report the best feasible raw objective seen over
    every evaluation, or the best penalized value when nothing was
    feasible.
    """
    objective, problem = resolve_problem(task.problem)
    tracker = None
    if problem is not None:
        tracker = FeasibilityTracker(problem)
        objective = replace(objective, function=tracker)
    objective, counter = counted(objective)

    params = build_params(task.algorithm, task.params, task.population, task.iterations)
    _, run = ALGORITHMS[task.algorithm]
    outcome = run(objective, params, RandomSource(task.seed))

    final_best = outcome.best.objective_value
    best_point = outcome.trace.final_best_point
    feasible = None
    if tracker is not None:
        feasible = tracker.found_feasible
        if feasible:
            final_best, best_point = tracker.best_value, tracker.best_point

    return CellResult(
        algorithm=task.algorithm,
        problem=task.problem,
        run=task.run,
        seed=task.seed,
        final_best=float(final_best),
        best_point=np.asarray(best_point, dtype=float),
        trace=np.asarray(outcome.trace.best_per_iteration, dtype=float),
        initial_best=float(outcome.trace.initial_best),
        evaluations=counter.calls,
        feasible=feasible,
        diagnostics=outcome.diagnostics.as_dict(),
    )


@dataclass(eq=False)
class CampaignCell:
    algorithm: str
    problem: str
    sample: RunSample
    summary: Summary
    runs: List[CellResult]

    @property
    def best(self) -> float:
        return float(np.min(self.sample.final_bests))

    @property
    def worst(self) -> float:
        return float(np.max(self.sample.final_bests))


class WilcoxonRow(NamedTuple):
    problem: str
    reference: str
    baseline: str
    result: WilcoxonResult


@dataclass(eq=False)
class CampaignResult:
    config: CampaignConfig
    cells: List[CampaignCell]
    wilcoxon: List[WilcoxonRow]

    def cell(self, algorithm: str, problem: str) -> CampaignCell:
        for cell in self.cells:
            if cell.algorithm == algorithm and cell.problem == problem:
                return cell
        raise KeyError((algorithm, problem))


def _summary(sample: RunSample) -> Summary:
    if len(sample) < 2:
        return Summary(mean=float(np.mean(sample.final_bests)), std=math.nan)
    return summarize(sample)


def collect(config: CampaignConfig, results: List[CellResult]) -> CampaignResult:
    """Group run results into cells and compare every algorithm against the first one."""
    grouped: Dict[Tuple[str, str], List[CellResult]] = {}
    for result in results:
        grouped.setdefault((result.algorithm, result.problem), []).append(result)

    cells = []
    for (algorithm, problem), runs in grouped.items():
        runs = sorted(runs, key=lambda r: r.run)
        sample = RunSample(algorithm, problem, [r.final_best for r in runs])
        cells.append(CampaignCell(algorithm, problem, sample, _summary(sample), runs))

    result = CampaignResult(config=config, cells=cells, wilcoxon=[])
    reference = config.algorithms[0].id
    for problem in config.problems:
        a = result.cell(reference, problem).sample.final_bests
        for algorithm in config.algorithms[1:]:
            b = result.cell(algorithm.id, problem).sample.final_bests
            if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
                continue
            result.wilcoxon.append(
                WilcoxonRow(problem, reference, algorithm.id, wilcoxon_signed_rank(a, b))
            )

    return result


def run_campaign(config: CampaignConfig, log: Optional[Log] = None, write: bool = True) -> CampaignResult:
    """
    Run every cell of a campaign and write its reports.

    @type config: CampaignConfig
    @param config: campaign to run
    @type log: Log
    @param log: logger; one is connected in the output directory if missing
    @type write: bool
    @param write: whether to emit the report files
    """
    config.validate()
    outdir = ensure_writable(config.output_dir)
    log = log if log is not None else Log.connect(outdir, Constants.FileNames.LOG)

    tasks = config.tasks()
    log.record(f"running {len(tasks)} runs with configuration: {json.dumps(config.to_dict())}")

    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(run_cell, tasks))
    else:
        results = [run_cell(task) for task in tasks]

    for r in results:
        info = f"{r.algorithm} on {r.problem}, run {r.run} (seed {r.seed}): best {r.final_best:.6g}, {r.evaluations} evaluations"
        if "deaths" in r.diagnostics:
            info += f", {r.diagnostics['deaths']} deaths"
        log.record(info)
        if r.diagnostics.get("nonfinite"):
            log.warn(f"{r.algorithm} on {r.problem}, run {r.run}: {r.diagnostics['nonfinite']} non-finite objective values")
        if r.feasible is False:
            log.warn(f"{r.algorithm} on {r.problem}, run {r.run}: no feasible design found")

    result = collect(config, results)

    info = [f"{c.algorithm} on {c.problem}: mean {c.summary.mean:.6g}, std {c.summary.std:.6g}" for c in result.cells]
    info += [
        f"{w.reference} vs {w.baseline} on {w.problem}: W = {w.result.statistic_W:g}, p = {w.result.p_value:.4g} ({w.result.method.value})"
        for w in result.wilcoxon
    ]
    [log.record(i) for i in info]

    if write:
        for path in emit_reports(result, outdir):
            log.record(f"wrote {path}")

    return result
