#!/usr/bin/env python3


"""
Constants class for ridley.

ridley is an implementation of the Olive Ridley Survival (ORS)
metaheuristic together with a benchmark harness: 14 classical test
functions, 3 constrained engineering problems, a Differential Evolution
baseline and Wilcoxon signed-rank statistics. Every default the
optimizers, the harness and the reports rely on is collected here.
"""


from importlib import resources

import supply

__version__ = "0.3.0-devel"


class Constants:
    DESCRIPTION = (
        "ridley runs the Olive Ridley Survival optimizer and its benchmark campaigns."
    )

    ALGORITHMS = ["ors", "de", "random"]
    BENCHMARKS = [f"Fn{i}" for i in range(1, 15)]
    ENGINEERING = ["pvd", "wbd", "sd"]

    # paired seeds: run r of every algorithm uses BASE_SEED + r
    BASE_SEED = 2024
    FLOAT_FORMAT = "%.17g"
    FEASIBILITY_TOL = 1e-6
    PENALTY_COEFFICIENT = 1e6
    EXACT_WILCOXON_MAX_N = 25

    class Ors:
        OMEGA1 = 1.10
        OMEGA2 = 1.25
        OMEGA3 = 1.20
        OMEGA4 = 1.25
        OMEGA5 = 1.10
        K = 1.0
        K1_SCALE = 0.1  # k1 = K1_SCALE * mean(upper - lower)
        K2_SCALE = 0.05
        TEMP_TOL = 37.0
        TEMP_MAX = 40.0
        TEMP_SAMPLE_RANGE = (25.0, 42.0)
        DAY_LENGTH = 24.0
        DAY_SEGMENTS = (8.0, 12.0, 16.0)
        HOURS_PER_ITERATION = 0.5
        SURVIVAL_CUTOFF = 0.3
        SPEED_RETENTION = (0.8, 1.2)
        EMERGENCE_ASSIGNMENT = ["tercile", "random"]
        # p1/p2 drawn once per hatchling, or once per component
        WEIGHT_SAMPLING = ["hatchling", "component"]
        POPULATION = 30
        ITERATIONS = 1000

    class De:
        F = 0.5
        CR = 0.9
        STRATEGY = "rand/1/bin"
        POPULATION = 30
        ITERATIONS = 1000

    class Campaign:
        RUNS = 20
        ITERATIONS = 1000
        POPULATION = 30
        WORKERS = 1
        OUTDIR = "ridley_out"

    class Env:
        OUTDIR = "RIDLEY_OUTDIR"

    class Columns:
        SUMMARY = ["algorithm", "problem", "mean", "std", "best", "worst"]
        WILCOXON = ["problem", "baseline", "W", "p_value", "n_effective", "method"]
        TRACE = ["iteration", "best_so_far"]
        REFERENCE = [
            "problem",
            "algorithm",
            "published_mean",
            "published_std",
            "observed_mean",
        ]

    class FileNames:
        SUPPLY_FOLDER = resources.files(supply)
        LOG = "ridley.log"
        SUMMARY = "summary.csv"
        WILCOXON = "wilcoxon.csv"
        CAMPAIGN = "campaign.json"
        REFERENCE = "reference.csv"
        TRACE = "trace_{algorithm}_{problem}_{run}.csv"
        DEFAULT_CONFIG = SUPPLY_FOLDER.joinpath("campaign.json")
        ENGINEERING_CONFIG = SUPPLY_FOLDER.joinpath("engineering.json")
        PUBLISHED = SUPPLY_FOLDER.joinpath("published_reference.tsv")

    class WeldedBeam:
        # load (lb), overhang (in), Young's and shear moduli (psi)
        P = 6000.0
        L = 14.0
        E = 30e6
        G = 12e6
        TAU_MAX = 13600.0  # psi
        SIGMA_MAX = 30000.0  # psi
        DELTA_MAX = 0.25  # in
