"""CSV and JSON output for experiment results."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .runner import ExperimentResult


def write_curves(path, curves: np.ndarray) -> np.ndarray:
    """Write ``round,trial_0,...,trial_{k-1},mean``; returns the mean column."""
    curves = np.atleast_2d(np.asarray(curves, dtype=np.float64))
    mean = curves.mean(axis=0)
    k, T = curves.shape
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["round"] + [f"trial_{i}" for i in range(k)] + ["mean"])
        for t in range(T):
            writer.writerow([t + 1] + [repr(float(v)) for v in curves[:, t]] + [repr(float(mean[t]))])
    return mean


def read_curves(path) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of :func:`write_curves`: ``(curves, mean)``."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    if header[0] != "round" or header[-1] != "mean":
        raise ValueError(f"{path}: unexpected header {header}")
    data = np.array([[float(x) for x in row[1:]] for row in body])
    if data.size == 0:
        return np.zeros((len(header) - 2, 0)), np.zeros(0)
    return data[:, :-1].T, data[:, -1]


def summary(result: ExperimentResult) -> dict:
    trials = []
    for tr in result.trials:
        trials.append(
            {
                "trial": tr.trial,
                "seed": tr.seed,
                "final_regret": float(tr.regret[-1]),
                "final_realized_regret": float(tr.realized[-1]),
                "runtime_seconds": tr.runtime,
                "corruption_level": tr.corruption,
                **tr.diagnostics.to_dict(),
            }
        )
    final = result.final
    return {
        "config": result.config.to_dict(),
        "mean_final_regret": float(final.mean()),
        "std_final_regret": float(final.std(ddof=1)) if final.size > 1 else 0.0,
        "total_runtime_seconds": float(sum(tr.runtime for tr in result.trials)),
        "trials": trials,
    }


def emit(result: ExperimentResult, path) -> dict[str, Path]:
    """Write ``regret.csv``, ``realized.csv`` and ``summary.json`` under ``path``."""
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    files = {
        "regret": out / "regret.csv",
        "realized": out / "realized.csv",
        "summary": out / "summary.json",
    }
    write_curves(files["regret"], result.curves)
    write_curves(files["realized"], result.realized)
    with open(files["summary"], "w") as fh:
        json.dump(summary(result), fh, indent=2)
    return files
