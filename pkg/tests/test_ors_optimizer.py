import math
import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import constant_spec, sphere_spec
from modules.core import EmergenceOrder, Hatchling, ObjectiveSpec, RandomSource, SearchSpace
from modules import ors_optimizer
from modules.errors import ConfigurationError, InvalidArgumentError
from modules.ors_optimizer import (
    EnvironmentState,
    OrsParams,
    environmental_delta,
    emergence_delta,
    handle_death,
    optimize,
    planar_speed,
    survival_factor,
    tangential_delta,
    temperature_delta,
    time_of_day_delta,
    trajectory_delta,
    update_hatchling,
)


def params(**kwargs) -> OrsParams:
    return OrsParams(**{"k1": 0.1, "k2": 0.05, **kwargs})


@pytest.mark.parametrize(
    "field, value",
    [
        ("omega1", 1.0),
        ("k", 0.0),
        ("temp_tol", 41.0),
        ("survival_cutoff", 1.0),
        ("day_segments", (12.0, 8.0, 16.0)),
        ("population_size", 1),
        ("emergence_assignment", "spiral"),
        ("weight_sampling", "pair"),
    ],
)
def test_params_reject_invalid(field, value):
    with pytest.raises(InvalidArgumentError, match=field.split("_")[0]):
        OrsParams(**{field: value})


def test_params_resolve_k_from_range():
    resolved = OrsParams().resolved(SearchSpace.box(3, -50.0, 50.0))
    assert resolved.k1 == pytest.approx(10.0)
    assert resolved.k2 == pytest.approx(5.0)
    assert OrsParams(k1=0.3).resolved(SearchSpace.box(3, -50.0, 50.0)).k1 == 0.3


def test_params_from_overrides_rejects_unknown_keys():
    with pytest.raises(ConfigurationError, match="omega9"):
        OrsParams.from_overrides({"omega9": 2.0})


def test_temperature_delta_tolerable():
    effect = temperature_delta(np.array([2.0, 2.0]), 30.0, params())
    np.testing.assert_allclose(effect.delta, [0.2, 0.2])
    assert effect.dead is False


def test_temperature_delta_hot():
    effect = temperature_delta(np.array([2.0, 2.0]), 38.5, params())
    np.testing.assert_allclose(effect.delta, [-0.4, -0.4])
    assert not effect.dead


@pytest.mark.parametrize("temp", [40.0, 41.0])
def test_temperature_delta_lethal(temp):
    assert temperature_delta(np.array([2.0, 2.0]), temp, params()).dead


def test_temperature_delta_per_row():
    v = np.ones((3, 2))
    effect = temperature_delta(v, np.array([30.0, 38.5, 41.0]), params())
    np.testing.assert_allclose(effect.delta[:, 0], [0.1, -0.2, 0.0])
    assert effect.dead.tolist() == [False, False, True]


def test_emergence_delta_middle():
    np.testing.assert_allclose(
        emergence_delta(np.array([1.0, 1.0]), EmergenceOrder.MIDDLE, params()), [0.0, 0.0]
    )


def test_emergence_delta_early():
    np.testing.assert_allclose(
        emergence_delta(np.array([1.0, 1.0]), EmergenceOrder.EARLY, params(k=1.05, k1=0.1)),
        [0.15, 0.15],
    )


def test_emergence_delta_late():
    np.testing.assert_allclose(
        emergence_delta(np.array([2.0, 0.0]), EmergenceOrder.LATE, params(k=0.9, k2=0.05)),
        [-0.25, -0.05],
    )


def test_emergence_delta_needs_resolved_params():
    with pytest.raises(InvalidArgumentError, match="resolved"):
        emergence_delta(np.ones(2), EmergenceOrder.EARLY, OrsParams())


@pytest.mark.parametrize(
    "day_time, overrides, expected",
    [
        (9.0, {"omega3": 1.2}, 0.2),
        (13.0, {"omega4": 2.0}, -0.5),
        (20.0, {"omega5": 1.1}, 0.1),
        (3.0, {"omega5": 1.1}, 0.1),
    ],
)
def test_time_of_day_delta(day_time, overrides, expected):
    delta = time_of_day_delta(np.array([1.0]), day_time, params(**overrides))
    np.testing.assert_allclose(delta, [expected])


def test_time_of_day_delta_outside_day():
    with pytest.raises(InvalidArgumentError):
        time_of_day_delta(np.array([1.0]), 24.0, params())


def test_environmental_delta_zero_when_parts_cancel():
    # middle emergence with k = 1 and the three deltas of a zero velocity are all zero
    h = Hatchling(mass=1.0, velocity=np.zeros(3), emergence_order=EmergenceOrder.MIDDLE)
    env = EnvironmentState(sand_temp=30.0, day_time=9.0)
    effect = environmental_delta(h, env, params(), RandomSource(1))
    np.testing.assert_array_equal(effect.r1, np.zeros(3))
    assert 0.0 <= effect.p1 <= 1.0


def test_environmental_delta_scales_by_p1():
    h = Hatchling(mass=1.0, velocity=np.array([1.0, 2.0]), emergence_order=EmergenceOrder.MIDDLE)
    env = EnvironmentState(sand_temp=30.0, day_time=9.0)
    p = params(omega1=1.5, omega3=1.5)
    effect = environmental_delta(h, env, p, RandomSource(1))
    # temperature 0.5 v and time of day 0.5 v sum to v
    np.testing.assert_allclose(effect.r1, effect.p1 * np.array([1.0, 2.0]))
    assert np.ndim(effect.p1) == 0


def test_environmental_delta_component_weights():
    h = Hatchling(mass=1.0, velocity=np.array([1.0, 2.0, -3.0]), emergence_order=EmergenceOrder.MIDDLE)
    env = EnvironmentState(sand_temp=30.0, day_time=9.0)
    p = params(omega1=1.5, omega3=1.5, weight_sampling="component")
    effect = environmental_delta(h, env, p, RandomSource(1))
    assert np.shape(effect.p1) == (3,)
    assert np.all((0.0 <= effect.p1) & (effect.p1 <= 1.0))
    np.testing.assert_allclose(effect.r1, effect.p1 * np.array([1.0, 2.0, -3.0]))


def test_environmental_delta_death_dominates():
    h = Hatchling(mass=1.0, velocity=np.array([1.0, 2.0]))
    effect = environmental_delta(h, EnvironmentState(sand_temp=45.0, day_time=9.0), params(), RandomSource(1))
    assert effect.dead


def test_tangential_delta_three_four_five():
    assert tangential_delta(3.0, 4.0, 6.0, 8.0) == pytest.approx(5.0)


def test_trajectory_delta_keeps_speed_when_retention_is_one():
    h = Hatchling(mass=1.0, velocity=np.array([1.0, -2.0, 3.0]))
    effect = trajectory_delta(h, RandomSource(5), params(speed_retention=(1.0, 1.0)))
    np.testing.assert_allclose(effect.magnitude_delta, 0.0, atol=1e-12)
    assert -math.pi / 2 <= effect.angle_delta <= math.pi / 2


def test_trajectory_delta_is_bounded_by_retention():
    v = np.array([1.0, -2.0, 3.0])
    effect = trajectory_delta(Hatchling(mass=1.0, velocity=v), RandomSource(5))
    assert np.all(np.abs(effect.magnitude_delta) <= 0.2 * np.abs(v) + 1e-12)


def test_trajectory_delta_component_weights():
    v = np.array([1.0, -2.0, 3.0])
    h = Hatchling(mass=1.0, velocity=v)
    shared = trajectory_delta(h, RandomSource(5), params())
    own = trajectory_delta(h, RandomSource(5), params(weight_sampling="component"))

    assert np.ndim(shared.p2) == 0
    assert np.shape(own.p2) == (3,)
    # same angles and retention, only the weights differ
    assert own.angle_delta == shared.angle_delta
    np.testing.assert_allclose(own.magnitude_delta / own.p2, shared.magnitude_delta / shared.p2)


@settings(max_examples=50, deadline=None)
@given(
    st.floats(min_value=0.0, max_value=math.pi / 2),
    st.floats(min_value=0.0, max_value=1e3),
)
def test_planar_speed_is_rotation_invariant(theta, speed):
    assert planar_speed(speed * math.cos(theta), speed * math.sin(theta)) == pytest.approx(speed, rel=1e-12, abs=1e-12)


def test_survival_factor_values():
    values = [10.0, 20.0, 30.0]
    assert [survival_factor(values, i) for i in range(3)] == [1.0, 0.5, 0.0]
    assert survival_factor([4.0, 4.0, 4.0], 1) == 1.0
    assert survival_factor([1.0, 2.0], 0) == 1.0
    assert survival_factor([1.0, 2.0], 1) == 0.0


def test_survival_factor_needs_two_values():
    with pytest.raises(InvalidArgumentError):
        survival_factor([1.0], 0)


def _box_objective(bound: float = 5.0) -> ObjectiveSpec:
    return sphere_spec(2, bound)


def test_update_attracts_to_best():
    h = Hatchling(mass=1.0, velocity=np.zeros(2), survival_factor=0.0)
    best = Hatchling(mass=1.0, velocity=np.ones(2))
    updated = update_hatchling(h, best, np.zeros(2), 0.3, _box_objective())
    np.testing.assert_allclose(updated.velocity, [1.0, 1.0])
    assert updated.objective_value == pytest.approx(2.0)


def test_update_scales_by_mass():
    h = Hatchling(mass=0.5, velocity=np.array([2.0, 2.0]), survival_factor=0.9)
    best = Hatchling(mass=1.0, velocity=np.zeros(2))
    updated = update_hatchling(h, best, np.zeros(2), 0.3, _box_objective())
    np.testing.assert_allclose(updated.velocity, [1.0, 1.0])


def test_update_clamps_to_bounds():
    h = Hatchling(mass=1.0, velocity=np.array([0.9, -0.9]), survival_factor=0.0)
    best = Hatchling(mass=1.0, velocity=np.array([0.9, -0.9]))
    updated = update_hatchling(h, best, np.zeros(2), 0.3, _box_objective(1.0))
    np.testing.assert_array_equal(updated.velocity, [1.0, -1.0])


def test_update_branch_contrast_is_two_m_delta():
    best = Hatchling(mass=1.0, velocity=np.array([0.1, -0.2]))
    delta = np.array([0.3, -0.4])
    explorer = Hatchling(mass=0.7, velocity=np.array([0.5, 0.5]), survival_factor=0.1)
    exploiter = Hatchling(mass=0.7, velocity=np.array([0.5, 0.5]), survival_factor=0.8)
    objective = _box_objective(100.0)

    a = update_hatchling(explorer, best, delta, 0.3, objective).velocity
    b = update_hatchling(exploiter, best, delta, 0.3, objective).velocity
    np.testing.assert_allclose(a - b, 2 * 0.7 * delta)


def test_update_cutoff_strictness():
    h = Hatchling(mass=1.0, velocity=np.zeros(2), survival_factor=0.3)
    best = Hatchling(mass=1.0, velocity=np.zeros(2))
    delta = np.array([1.0, 1.0])
    objective = _box_objective()
    strict = update_hatchling(h, best, delta, 0.3, objective).velocity
    loose = update_hatchling(h, best, delta, 0.3, objective, strict=False).velocity
    np.testing.assert_allclose(strict, [-1.0, -1.0])
    np.testing.assert_allclose(loose, [1.0, 1.0])


def test_handle_death_reinitializes_in_box():
    objective = _box_objective(1.0)
    h = Hatchling(mass=0.4, velocity=np.array([0.5, 0.5]), emergence_order=EmergenceOrder.LATE, alive=False)
    a = handle_death(h, objective.space, RandomSource(9), objective)
    b = handle_death(h, objective.space, RandomSource(9), objective)

    assert objective.space.contains(a.velocity)
    assert a.alive and a.emergence_order is EmergenceOrder.LATE
    assert 0.0 < a.mass <= 1.0
    np.testing.assert_array_equal(a.velocity, b.velocity)
    assert a.objective_value == pytest.approx(float(np.sum(a.velocity**2)))


def test_optimize_constant_objective():
    outcome = optimize(constant_spec(3.5), params(population_size=6, max_iterations=20), RandomSource(1))
    np.testing.assert_array_equal(outcome.trace.best_per_iteration, np.full(20, 3.5))
    assert outcome.best.objective_value == 3.5


def test_optimize_sphere_improves():
    objective = sphere_spec(2)
    outcome = optimize(objective, OrsParams(population_size=20, max_iterations=200), RandomSource(7))
    trace = outcome.trace

    assert len(trace) == 200
    assert trace.is_monotone()
    assert trace.best_per_iteration[-1] <= trace.initial_best
    assert outcome.best.objective_value == trace.best_per_iteration[-1]
    assert objective.space.contains(outcome.best.velocity)


def test_optimize_is_deterministic():
    objective = sphere_spec(3)
    p = OrsParams(population_size=10, max_iterations=50)
    a = optimize(objective, p, RandomSource(11))
    b = optimize(objective, p, RandomSource(11))
    np.testing.assert_array_equal(a.trace.best_per_iteration, b.trace.best_per_iteration)
    np.testing.assert_array_equal(a.best.velocity, b.best.velocity)


def test_optimize_evaluation_budget():
    p = OrsParams(population_size=8, max_iterations=25)
    outcome = optimize(sphere_spec(2), p, RandomSource(3))
    assert outcome.diagnostics.evaluations == 8 * 26
    assert outcome.diagnostics.explorations + outcome.diagnostics.exploitations + outcome.diagnostics.deaths == 8 * 25


def test_optimize_survives_nonfinite_values():
    def half_nan(x, rng=None):
        return math.nan if x[0] > 0 else float(np.sum(x**2))

    objective = ObjectiveSpec("half_nan", SearchSpace.box(2, -1.0, 1.0), half_nan)
    outcome = optimize(objective, OrsParams(population_size=10, max_iterations=30), RandomSource(2))
    assert math.isfinite(outcome.best.objective_value)
    assert outcome.best.velocity[0] <= 0.0
    assert outcome.diagnostics.nonfinite > 0
    assert outcome.trace.is_monotone()


def test_optimize_visits_every_branch():
    outcome = optimize(sphere_spec(5), OrsParams(population_size=30, max_iterations=1000), RandomSource(2024))
    d = outcome.diagnostics
    assert min(d.temperature_branches) > 0
    assert min(d.emergence_branches) > 0
    assert min(d.time_branches) > 0
    # lethal sand: (42 - 40) / (42 - 25)
    assert d.deaths / (30 * 1000) == pytest.approx(2.0 / 17.0, abs=0.01)


def test_optimize_trace_records_seed():
    outcome = optimize(sphere_spec(2), OrsParams(population_size=6, max_iterations=5), RandomSource(11))
    assert outcome.trace.seed == 11


@settings(max_examples=25, deadline=None)
@given(
    dimension=st.integers(min_value=1, max_value=6),
    lower=st.floats(min_value=-100.0, max_value=50.0),
    width=st.floats(min_value=0.01, max_value=200.0),
    seed=st.integers(min_value=0, max_value=2**32 - 1),
    sampling=st.sampled_from(["hatchling", "component"]),
)
def test_optimize_evaluates_only_points_inside_the_box(dimension, lower, width, seed, sampling):
    # uneven widths per coordinate, box not centred on the origin
    lowers = lower + np.arange(dimension, dtype=float)
    uppers = lowers + width * (1.0 + np.arange(dimension, dtype=float))
    space = SearchSpace(lowers, uppers)
    objective = ObjectiveSpec("sphere", space, lambda x, rng=None: float(np.sum(x**2)))

    evaluated = []

    def inside_box(objective, points, rng=None):
        assert np.all(points >= objective.space.lower)
        assert np.all(points <= objective.space.upper)
        evaluated.append(len(points))
        return original(objective, points, rng)

    original = ors_optimizer.evaluate_population
    p = OrsParams(population_size=10, max_iterations=40, weight_sampling=sampling)
    with pytest.MonkeyPatch.context() as mp:
        mp.setattr(ors_optimizer, "evaluate_population", inside_box)
        outcome = optimize(objective, p, RandomSource(seed))

    assert evaluated == [10] * 40
    assert outcome.diagnostics.deaths > 0
    assert space.contains(outcome.best.velocity)


@pytest.mark.slow
def test_optimize_time_scales_linearly():
    objective = sphere_spec(10)

    def elapsed(n, iterations):
        start = time.perf_counter()
        optimize(objective, OrsParams(population_size=n, max_iterations=iterations), RandomSource(1))
        return time.perf_counter() - start

    elapsed(20, 50)
    base = elapsed(20, 400)
    assert 2.0 / 3.0 <= elapsed(40, 400) / base <= 6.0
    assert 2.0 / 3.0 <= elapsed(20, 800) / base <= 6.0
