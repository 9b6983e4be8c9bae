#!/usr/bin/env python
# coding: utf8
#
# Copyright (c) 2025 sentiforge contributors.
#
# This file is part of sentiforge.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""
    This module writes the experiment reports: summary.csv, reference_results.csv and, per experiment,
    predictions.csv with an actual-vs-predicted SVG plot.
"""
import logging
import os
from typing import List, Sequence, Tuple
import matplotlib.dates as mdates
from matplotlib.figure import Figure
import numpy as np
import pandas as pd
from sentiforge.ingest.storage import write_csv
from sentiforge.neural.metrics import METRIC_NAMES
from sentiforge.runner.experiment_matrix import NOT_REPRODUCIBLE, REFERENCE_RESULTS
from sentiforge.runner.experiment_runner import (PREDICTIONS_FILE, ExperimentResult, Predictions,
                                                 load_runs, run_dir)
from sentiforge.utils.exceptions import DataError
from sentiforge.utils.helper import ensure_dir
from sentiforge.utils.sentiforge_logger import SentiforgeLogger

SUMMARY_FILE = "summary.csv"
REFERENCE_FILE = "reference_results.csv"
PLOT_FILE = "predictions.svg"
WALL_TIME_COLUMN = "wall_time_s"
REFERENCE_COLUMNS = ("id", "reference_train_rmse", "reference_test_rmse", "reference_train_mae", "reference_test_mae",
                           "test_rmse", "test_rmse_delta", "status")


def summary_columns(record_timing: bool) -> Tuple[str, ...]:
    return ("id",) + METRIC_NAMES + ((WALL_TIME_COLUMN,) if record_timing else ()) + ("seed",)


def write_summary(results: Sequence[ExperimentResult], path: str, record_timing: bool = True) -> None:
    rows = []
    for result in sorted(results, key=lambda r: r.id):
        row = [str(result.id)] + [repr(float(value)) for value in result.metrics]
        if record_timing:
            row.append("" if result.wall_time is None else "{:.3f}".format(result.wall_time))
        rows.append(row + [str(result.seed)])
    write_csv(rows, summary_columns(record_timing), path)


def write_reference(results: Sequence[ExperimentResult], path: str) -> None:
    """
        Side by side with the published metrics, which this code cannot reproduce.
    """
    rows = []
    for result in sorted(results, key=lambda r: r.id):
        reference = REFERENCE_RESULTS.get(result.id)
        if reference is None:
            continue
        rows.append([str(result.id)] + [repr(value) for value in reference]
                    + [repr(result.metrics.test_rmse), repr(result.metrics.test_rmse - reference.test_rmse),
                       NOT_REPRODUCIBLE])
    write_csv(rows, REFERENCE_COLUMNS, path)


def _x_values(timestamps: np.ndarray) -> np.ndarray:
    if len(timestamps) and not isinstance(timestamps[0], (int, np.integer)):
        return pd.to_datetime(pd.Series(timestamps), utc=True).dt.tz_localize(None).to_numpy()
    return np.asarray(timestamps, dtype=np.float64)


def plot_predictions(result: ExperimentResult, path: str) -> Tuple[float, float]:
    """
    Plot the actual and predicted closes, train and test segments in distinct colours.

    Args:
        result: experiment result.
        path: output SVG path.

    Returns:
        the x-axis limits, which span the prediction timestamps exactly.
    """
    figure = Figure(figsize=(12, 6))
    axis = figure.subplots()
    segments: List[Tuple[str, Predictions, str]] = [("train", result.train, "tab:blue"),
                                                     ("test", result.test, "tab:green")]
    x_all = []
    for split, predictions, colour in segments:
        if not len(predictions):
            continue
        x = _x_values(predictions.timestamps)
        x_all.append(x)
        axis.plot(x, predictions.actual, color="black", linewidth=1.0, label="actual ({})".format(split))
        axis.plot(x, predictions.predicted, color=colour, linewidth=1.0, linestyle="--",
                  label="predicted ({})".format(split))
    if not x_all:
        raise DataError("Experiment {} has no prediction to plot".format(result.id))
    x_all = np.concatenate(x_all)
    if np.issubdtype(x_all.dtype, np.datetime64):
        limits = (mdates.date2num(x_all.min()), mdates.date2num(x_all.max()))
    else:
        limits = (float(x_all.min()), float(x_all.max()))
    if limits[0] == limits[1]:
        limits = (limits[0] - 0.5, limits[1] + 0.5)
    axis.set_xlim(*limits)
    axis.set_title("Experiment {}: actual vs predicted close_BTCUSDT".format(result.id))
    axis.set_xlabel("time")
    axis.set_ylabel("price (USD)")
    axis.grid(True, alpha=0.3)
    axis.legend()
    figure.savefig(path, format="svg")
    return tuple(float(v) for v in axis.get_xlim())


def emit_report(results: Sequence[ExperimentResult], out_dir: str, record_timing: bool = True,
                plots: bool = True) -> List[str]:
    """
    Write the report files of a set of experiment results.

    Args:
        results: experiment results.
        out_dir: report directory, created when missing.
        record_timing: add the wall-time column to summary.csv.
        plots: write the SVG plots.

    Returns:
        the written paths.

    Raises:
        DataError: no result or unwritable directory.
    """
    if not results:
        raise DataError("No experiment result to report")
    ensure_dir(out_dir)
    if not os.access(out_dir, os.W_OK):
        raise DataError("The report directory '{}' is not writable".format(out_dir))
    written = [os.path.join(out_dir, SUMMARY_FILE), os.path.join(out_dir, REFERENCE_FILE)]
    write_summary(results, written[0], record_timing)
    write_reference(results, written[1])
    for result in results:
        directory = ensure_dir(run_dir(out_dir, result.id))
        predictions_path = os.path.join(directory, PREDICTIONS_FILE)
        result.predictions_frame().to_csv(predictions_path, index=False, lineterminator="\n", encoding="utf-8")
        written.append(predictions_path)
        if plots:
            plot_path = os.path.join(directory, PLOT_FILE)
            plot_predictions(result, plot_path)
            written.append(plot_path)
    SentiforgeLogger.log("Report of {} experiment(s) written to {}".format(len(results), out_dir), logging.INFO)
    return written


def rebuild_report(runs_dir: str, out_dir: str, record_timing: bool = True, plots: bool = True) -> List[str]:
    """
        Regenerate the report from stored experiment_<id>/ run directories.
    """
    results = load_runs(runs_dir)
    if not any(result.wall_time is not None for result in results):
        record_timing = False
    return emit_report(results, out_dir, record_timing, plots)
