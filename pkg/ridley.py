#!/usr/bin/env python3


"""
Master script for ridley.

ridley runs the Olive Ridley Survival (ORS) optimizer against a
Differential Evolution and a random-search baseline on 14 benchmark
functions and 3 constrained engineering problems, and writes
summary, Wilcoxon, trace and reference tables for every campaign.
"""


import argparse
import os
import sys
from dataclasses import replace

import pandas as pd

from constants import Constants
from logger import Log
from modules.baselines import DeParams, RandomSearchParams
from modules.benchmarks import REGISTRY as BENCHMARKS
from modules.engineering import REGISTRY as ENGINEERING
from modules.errors import RidleyError
from modules.ors_optimizer import OrsParams
from modules.run_campaign import CampaignConfig, run_campaign
from modules.stats import wilcoxon_signed_rank
from modules.utils import ensure_writable, sample_reader

__version__ = "0.3.0-devel"


class Campaign:
    """A benchmark campaign read from a .json configuration."""

    def __init__(self, args: argparse.Namespace) -> None:
        """
        @type args: argparse.Namespace
        @param args: defined arguments
        """
        self.args = args
        self.config = CampaignConfig.from_file(args.config)
        if args.outdir:
            self.config = replace(self.config, output_dir=args.outdir)
        if args.workers:
            self.config = replace(self.config, workers=args.workers)

        self.outdir = os.path.abspath(self.config.output_dir)
        self.log = Log(self.outdir, Constants.FileNames.LOG)

    def run(self) -> None:
        """The ridley runner function"""
        self.config.validate()
        ensure_writable(self.outdir)

        self.log.start()
        self.log.intro()
        self.log.record("ridley started!")
        self.log.record(f"running campaign {self.args.config}")

        self.result = run_campaign(self.config, self.log)
        self.log.close()


def problem_table() -> pd.DataFrame:
    rows = [
        [
            entry.id,
            entry.spec.name,
            entry.dimension,
            f"[{entry.spec.space.lower[0]:g}, {entry.spec.space.upper[0]:g}]",
            entry.fmin,
            entry.modality.value,
        ]
        for entry in BENCHMARKS.values()
    ]
    rows += [
        [
            problem.id,
            problem.name,
            problem.space.dimension,
            " x ".join(f"[{lo:g}, {hi:g}]" for lo, hi in zip(problem.space.lower, problem.space.upper)),
            None,
            f"Constrained ({len(problem.constraints)} constraints)",
        ]
        for problem in ENGINEERING.values()
    ]
    return pd.DataFrame(rows, columns=["id", "name", "dimension", "range", "fmin", "modality"])


def algorithm_table() -> pd.DataFrame:
    defaults = {
        "ors": OrsParams(),
        "de": DeParams(),
        "random": RandomSearchParams(),
    }
    rows = [
        [id, ", ".join(f"{k}={v}" for k, v in vars(params).items())]
        for id, params in defaults.items()
    ]
    return pd.DataFrame(rows, columns=["id", "defaults"])


def run_branch(subparsers):
    run_parser = subparsers.add_parser("run", help="Run a benchmark campaign")
    run_parser.add_argument(
        "-c",
        "--config",
        help="Path to a .json campaign file (default: the bundled desk-scale campaign)",
        required=False,
        type=str,
        default=str(Constants.FileNames.DEFAULT_CONFIG),
    )
    run_parser.add_argument(
        "-o",
        "--outdir",
        help=f"Output directory; overrides the campaign file and ${Constants.Env.OUTDIR}",
        required=False,
        type=str,
    )
    run_parser.add_argument(
        "-w",
        "--workers",
        help="Number of worker processes (default: the campaign's value)",
        required=False,
        type=int,
    )


def wilcoxon_branch(subparsers):
    wilcoxon_parser = subparsers.add_parser(
        "wilcoxon", help="Paired Wilcoxon signed-rank test on two .csv files of run results"
    )
    wilcoxon_parser.add_argument(
        "--a", help="Results of the first algorithm (.csv)", required=True, type=str
    )
    wilcoxon_parser.add_argument(
        "--b", help="Results of the second algorithm (.csv)", required=True, type=str
    )


def parser(argv=None):
    """Argument parser for ridley"""
    app = argparse.ArgumentParser(prog="ridley", description=Constants.DESCRIPTION)
    subparsers = app.add_subparsers(dest="mode", help="Select mode")

    run_branch(subparsers)
    subparsers.add_parser("list-problems", help="List the available problems")
    subparsers.add_parser("list-algorithms", help="List the available algorithms and their defaults")
    wilcoxon_branch(subparsers)

    argv = sys.argv[1:] if argv is None else argv
    if len(argv) < 1:
        app.print_help()
        sys.exit(0)

    return app.parse_args(argv)


def main(argv=None) -> int:
    args = parser(argv)

    try:
        if args.mode == "run":
            Campaign(args).run()
        elif args.mode == "list-problems":
            print(problem_table().to_string(index=False))
        elif args.mode == "list-algorithms":
            print(algorithm_table().to_string(index=False))
        elif args.mode == "wilcoxon":
            result = wilcoxon_signed_rank(sample_reader(args.a), sample_reader(args.b))
            table = pd.DataFrame(
                [[result.statistic_W, result.p_value, result.n_effective, result.method.value]],
                columns=["W", "p_value", "n_effective", "method"],
            )
            print(table.to_csv(index=False, float_format=Constants.FLOAT_FORMAT), end="")
    except (RidleyError, OSError) as error:
        print(f"error: {error}", file=sys.stderr)
        return 1

    return 0


if __name__ == "__main__":
    sys.exit(main())
