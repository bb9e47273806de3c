#!/usr/bin/env python3

""" Module to write the reports of a finished campaign. """


import json
import math
import os

import numpy as np
import pandas as pd

from constants import Constants
from modules.errors import ReportError
from version import __version__ as ridley_version

__version__ = "0.3.0-devel"


def _number(value):
    """JSON-safe float: NaN and infinities become null."""
    if value is None:
        return None
    value = float(value)
    return value if math.isfinite(value) else None


def summary_table(result) -> pd.DataFrame:
    rows = [
        [cell.algorithm, cell.problem, cell.summary.mean, cell.summary.std, cell.best, cell.worst]
        for cell in result.cells
    ]
    return pd.DataFrame(rows, columns=Constants.Columns.SUMMARY)


def wilcoxon_table(result) -> pd.DataFrame:
    rows = [
        [
            row.problem,
            row.baseline,
            row.result.statistic_W,
            row.result.p_value,
            row.result.n_effective,
            row.result.method.value,
        ]
        for row in result.wilcoxon
    ]
    return pd.DataFrame(rows, columns=Constants.Columns.WILCOXON)


def trace_table(run) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "iteration": np.arange(1, len(run.trace) + 1),
            "best_so_far": run.trace,
        },
        columns=Constants.Columns.TRACE,
    )


def reference_table(result, published=Constants.FileNames.PUBLISHED) -> pd.DataFrame:
    """
    Published means and standard deviations for the campaign's problems,
    next to the observed mean of every algorithm the campaign also ran.

    @type published: str
    @param published: path to the published reference .tsv
    """
    table = pd.read_csv(published, sep="\t", float_precision="round_trip")
    table = table[table["problem"].isin(result.config.problems)].copy()

    observed = {(cell.algorithm.lower(), cell.problem): cell.summary.mean for cell in result.cells}
    table["observed_mean"] = [
        observed.get((algorithm.lower(), problem), np.nan)
        for algorithm, problem in zip(table["algorithm"], table["problem"])
    ]

    return table.loc[:, Constants.Columns.REFERENCE].reset_index(drop=True)


def campaign_record(result) -> dict:
    """Config echo and every number of the campaign; no timestamps, no traces."""
    return {
        "ridley": str(ridley_version),
        "config": result.config.to_dict(),
        "cells": [
            {
                "algorithm": cell.algorithm,
                "problem": cell.problem,
                "mean": _number(cell.summary.mean),
                "std": _number(cell.summary.std),
                "best": _number(cell.best),
                "worst": _number(cell.worst),
                "runs": [
                    {
                        "run": run.run,
                        "seed": run.seed,
                        "final_best": _number(run.final_best),
                        "initial_best": _number(run.initial_best),
                        "feasible": run.feasible,
                        "best_point": [_number(x) for x in run.best_point],
                        "evaluations": run.evaluations,
                        "diagnostics": run.diagnostics,
                    }
                    for run in cell.runs
                ],
            }
            for cell in result.cells
        ],
        "wilcoxon": [
            {
                "problem": row.problem,
                "reference": row.reference,
                "baseline": row.baseline,
                "W": _number(row.result.statistic_W),
                "p_value": _number(row.result.p_value),
                "n_effective": row.result.n_effective,
                "method": row.result.method.value,
                "w_plus": _number(row.result.w_plus),
                "w_minus": _number(row.result.w_minus),
            }
            for row in result.wilcoxon
        ],
    }


def emit_reports(result, outdir: str) -> list:
    """
    Write summary.csv, wilcoxon.csv, one trace per run, reference.csv and
    campaign.json into `outdir`.

    On any write failure every file already written is removed and a
    ReportError is raised.

    @type result: CampaignResult
    @param result: finished campaign
    @type outdir: str
    @param outdir: output directory
    @rtype: list
    @return: paths written
    """
    fmt = dict(index=False, float_format=Constants.FLOAT_FORMAT, na_rep="NaN")
    written = []

    def _csv(df: pd.DataFrame, name: str) -> None:
        path = os.path.join(outdir, name)
        written.append(path)
        df.to_csv(path, **fmt)

    try:
        os.makedirs(outdir, exist_ok=True)
        _csv(summary_table(result), Constants.FileNames.SUMMARY)
        _csv(wilcoxon_table(result), Constants.FileNames.WILCOXON)
        for cell in result.cells:
            for run in cell.runs:
                name = Constants.FileNames.TRACE.format(
                    algorithm=run.algorithm, problem=run.problem, run=run.run
                )
                _csv(trace_table(run), name)
        _csv(reference_table(result), Constants.FileNames.REFERENCE)

        path = os.path.join(outdir, Constants.FileNames.CAMPAIGN)
        written.append(path)
        with open(path, "w") as handle:
            json.dump(campaign_record(result), handle, indent=2)
            handle.write("\n")
    except OSError as error:
        for path in written:
            if os.path.exists(path):
                os.remove(path)
        raise ReportError(f"could not write reports to {outdir}: {error}") from error

    return written
