import math

import numpy as np
import pytest

from modules.benchmarks import (
    BRANIN_MINIMIZER,
    KOWALIK_MINIMIZER,
    REGISTRY,
    Modality,
    evaluate,
    get_benchmark,
    penalty_u,
    quartic,
)
from modules.core import RandomSource
from modules.errors import ConfigurationError, InvalidArgumentError

ZERO_MINIMUM = [f"Fn{i}" for i in range(1, 13) if i != 7]


def test_registry_shape():
    assert list(REGISTRY) == [f"Fn{i}" for i in range(1, 15)]
    for id, entry in REGISTRY.items():
        expected = {"Fn13": 4, "Fn14": 2}.get(id, 30)
        assert entry.dimension == expected


@pytest.mark.parametrize(
    "id, bound",
    [("Fn1", 100), ("Fn2", 10), ("Fn5", 30), ("Fn7", 1.28), ("Fn8", 5.12), ("Fn9", 32), ("Fn10", 600), ("Fn12", 50), ("Fn13", 5)],
)
def test_ranges(id, bound):
    space = get_benchmark(id).spec.space
    np.testing.assert_array_equal(space.lower, -bound)
    np.testing.assert_array_equal(space.upper, bound)


def test_modalities():
    assert get_benchmark("Fn3").modality is Modality.UNIMODAL
    assert get_benchmark("Fn10").modality is Modality.MULTIMODAL
    assert get_benchmark("Fn14").modality is Modality.FIXED_DIM_MULTIMODAL


@pytest.mark.parametrize("id", ZERO_MINIMUM)
def test_value_at_minimizer_is_zero(id):
    entry = get_benchmark(id)
    assert evaluate(id, entry.minimizer) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("id", ["Fn1", "Fn2", "Fn3", "Fn4", "Fn5", "Fn6", "Fn8", "Fn10"])
def test_value_at_minimizer_is_exactly_zero(id):
    assert evaluate(id, get_benchmark(id).minimizer) == 0.0


def test_ackley_origin():
    assert evaluate("Fn9", np.zeros(30)) == pytest.approx(0.0, abs=1e-12)


def test_kowalik_minimum():
    np.testing.assert_array_equal(get_benchmark("Fn13").minimizer, KOWALIK_MINIMIZER)
    assert evaluate("Fn13", KOWALIK_MINIMIZER) == pytest.approx(3.0749e-4, abs=1e-7)
    assert abs(evaluate("Fn13", KOWALIK_MINIMIZER) - get_benchmark("Fn13").fmin) < 1e-3


def test_kowalik_minimizer_is_local_minimum():
    # a refining grid around the reported minimizer never finds anything lower
    center = KOWALIK_MINIMIZER
    best = evaluate("Fn13", center)
    for step in (1e-2, 1e-3):
        offsets = np.linspace(-step, step, 5)
        grid = np.stack(np.meshgrid(offsets, offsets, offsets, offsets, indexing="ij"), -1).reshape(-1, 4)
        values = [evaluate("Fn13", center + o) for o in grid]
        assert min(values) >= best - 1e-9


def test_branin_minimum():
    assert evaluate("Fn14", BRANIN_MINIMIZER) == pytest.approx(0.3979, abs=1e-3)
    assert evaluate("Fn14", [math.pi, 2.275]) == pytest.approx(0.397887, abs=1e-5)


def test_rosenbrock_ones():
    assert evaluate("Fn5", np.ones(30)) == 0.0


def test_schwefel_2_21_uses_absolute_values():
    x = np.zeros(30)
    x[3] = -7.0
    x[5] = 2.0
    assert evaluate("Fn4", x) == 7.0


def test_step_rounds_to_nearest():
    x = np.zeros(30)
    x[0] = 1.6
    x[1] = -0.4
    assert evaluate("Fn6", x) == 4.0


def test_penalty_u_is_zero_inside_band():
    grid = np.linspace(-10.0, 10.0, 201)
    np.testing.assert_array_equal(penalty_u(grid, 10.0, 100.0, 4.0), 0.0)
    assert penalty_u(12.0, 10.0, 100.0, 4.0) == pytest.approx(1600.0)
    assert penalty_u(-12.0, 10.0, 100.0, 4.0) == pytest.approx(1600.0)


def test_noisy_quartic_needs_rng():
    with pytest.raises(InvalidArgumentError):
        evaluate("Fn7", np.zeros(30))


def test_noisy_quartic_noise_is_uniform():
    rng = RandomSource(12)
    x = np.full(30, 0.5)
    base = quartic(x)
    noise = np.array([evaluate("Fn7", x, rng) - base for _ in range(100_000)])
    assert np.all((noise >= 0.0) & (noise < 1.0))
    assert np.var(noise) == pytest.approx(1.0 / 12.0, rel=0.1)


def test_dimension_mismatch():
    with pytest.raises(InvalidArgumentError):
        evaluate("Fn1", np.zeros(29))


def test_unknown_id():
    with pytest.raises(ConfigurationError, match="Fn99"):
        get_benchmark("Fn99")
