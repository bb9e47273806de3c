"""
Desk-scale campaigns checked against loose quantitative targets.

Every test here runs hundreds of thousands of evaluations; run them with
`pytest -m slow`.
"""

import numpy as np
import pytest

from constants import Constants
from modules.baselines import RandomSearchParams, random_search
from modules.benchmarks import get_benchmark
from modules.core import RandomSource
from modules.engineering import get_problem, is_feasible
from modules.ors_optimizer import OrsParams, optimize
from modules.run_campaign import CampaignConfig, CellTask, run_cell
from modules.stats import wilcoxon_signed_rank

pytestmark = pytest.mark.slow

SEED = 2024
PARAMS = OrsParams(population_size=30, max_iterations=1000)


def engineering_overrides() -> dict:
    cfg = CampaignConfig.from_file(str(Constants.FileNames.ENGINEERING_CONFIG))
    return next(a.params for a in cfg.algorithms if a.id == "ors")


def ors_runs(id: str, runs: int = 20):
    objective = get_benchmark(id).spec
    return [optimize(objective, PARAMS, RandomSource(SEED + r)) for r in range(runs)]


def test_sphere_progress():
    outcomes = ors_runs("Fn1")
    finals = np.array([o.best.objective_value for o in outcomes])
    gains = np.array([np.log10(o.trace.initial_best / max(o.best.objective_value, 1e-300)) for o in outcomes])

    assert finals.mean() <= 10.0
    assert np.median(gains) >= 4.0


@pytest.mark.parametrize("id", ["Fn8", "Fn9", "Fn10"])
def test_multimodal_beats_random_search(id):
    objective = get_benchmark(id).spec
    budget = RandomSearchParams(population_size=30, max_iterations=1000)
    ors = np.array([o.best.objective_value for o in ors_runs(id)])
    rs = np.array(
        [random_search(objective, budget, RandomSource(SEED + r)).best.objective_value for r in range(20)]
    )

    assert np.median(ors) < np.median(rs)
    assert wilcoxon_signed_rank(ors, rs).p_value < 0.05


def test_branin_best_of_twenty():
    assert min(o.best.objective_value for o in ors_runs("Fn14")) <= 0.45


def test_kowalik_best_of_twenty():
    assert min(o.best.objective_value for o in ors_runs("Fn13")) <= 0.01


@pytest.mark.parametrize("id, target", [("pvd", 7000.0), ("wbd", 2.5), ("sd", 0.02)])
def test_engineering_designs(id, target):
    problem = get_problem(id)
    overrides = engineering_overrides()
    results = [run_cell(CellTask("ors", id, r, SEED + r, overrides, 30, 1000)) for r in range(10)]
    feasible = [r for r in results if r.feasible]
    assert feasible

    best = min(feasible, key=lambda r: r.final_best)
    assert best.final_best <= target
    assert is_feasible(problem, best.best_point)
    assert best.final_best == pytest.approx(problem.raw(best.best_point))


def test_paired_runs_are_deterministic():
    a = run_cell(CellTask("ors", "Fn9", 3, SEED + 3, {}, 30, 1000))
    b = run_cell(CellTask("ors", "Fn9", 3, SEED + 3, {}, 30, 1000))
    np.testing.assert_array_equal(a.trace, b.trace)
    np.testing.assert_array_equal(a.best_point, b.best_point)
