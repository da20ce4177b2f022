#!/usr/bin/env python3
"""
Multi-seed experiment runner and per-method summary tables.

OUTPUTS:
========
results.csv     one TrialResult row per (seed, method, pruning)
summary.csv     per (dataset, method, pruning): FDR and power mean/sd,
                validity verdicts and diagnostics
summary.json    {"spec": {...}, "summary": [...]}
selection.csv   per scorer: mean/sd of phase-1 metrics and selection wins

USAGE:
======
    from confshift.simulation.experiment import run_experiment, write_outputs

    result = run_experiment(load_spec("config/dilemma.toml"))
    write_outputs(result, "out/")

NOTES:
======
- Trials run in worker processes through joblib; rows are gathered in seed
  order and sorted canonically, so outputs are byte-identical for any
  worker count
- summary.csv can be rebuilt from results.csv alone (``report``)
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from confshift.core.constants import METHOD_ORDER, NO_PRUNING, PRUNING_ORDER
from confshift.core.logging import get_logger
from confshift.core.result import ParseError
from confshift.core.runtime import resolve_n_jobs
from confshift.evaluation.validity import validity
from confshift.simulation.protocol import RESULT_COLUMNS, Phase1Result, run_trial
from confshift.simulation.spec import ExperimentSpec

logger = get_logger(__name__)

SUMMARY_COLUMNS = (
    "dataset",
    "method",
    "pruning",
    "fdr_mean",
    "fdr_sd",
    "power_mean",
    "power_sd",
    "power_se",
    "n_train",
    "n_test",
    "valid",
    "valid_raw",
    "mean_n_rejected",
    "mean_n_eff",
    "mean_floor_max",
)

SELECTION_COLUMNS = (
    "scorer",
    "pr_auc_mean",
    "pr_auc_sd",
    "roc_auc_mean",
    "roc_auc_sd",
    "brier_mean",
    "brier_sd",
    "wins",
)

_METHOD_RANK = {str(method): rank for rank, method in enumerate(METHOD_ORDER)}
_PRUNING_RANK = {NO_PRUNING: -1} | {
    str(pruning): rank for rank, pruning in enumerate(PRUNING_ORDER)
}


@dataclass(frozen=True, eq=False)
class ExperimentResult:
    spec: ExperimentSpec
    results: pd.DataFrame
    summary: pd.DataFrame
    selection: pd.DataFrame


def canonical_order(frame: pd.DataFrame, keys: tuple[str, ...]) -> pd.DataFrame:
    """Sort by ``keys`` with methods and prunings in their fixed order."""

    def sort_key(column: pd.Series) -> pd.Series:
        if column.name == "method":
            return column.map(_METHOD_RANK)
        if column.name == "pruning":
            return column.map(_PRUNING_RANK)
        return column

    return frame.sort_values(list(keys), key=sort_key, kind="stable").reset_index(
        drop=True
    )


def _sd(values: pd.Series) -> float:
    return float(values.std(ddof=1)) if len(values) > 1 else 0.0


def summarize(results: pd.DataFrame) -> pd.DataFrame:
    """Aggregate results.csv rows into the summary table.

    Raises:
        ParseError: no rows, or required columns missing
    """
    if results.empty:
        raise ParseError("results table has no rows")
    missing = [name for name in RESULT_COLUMNS if name not in results.columns]
    if missing:
        raise ParseError(f"results table is missing column(s): {', '.join(missing)}")

    records = []
    for (dataset, method, pruning), group in results.groupby(
        ["dataset", "method", "pruning"], sort=False
    ):
        fdps = group["fdp"].astype(float)
        powers = group["power"].dropna().astype(float)
        alpha = float(group["alpha"].iloc[0])
        raw_valid = bool(fdps.mean() <= alpha)
        valid = validity(fdps.to_numpy(), alpha).valid if len(fdps) > 1 else raw_valid
        records.append(
            {
                "dataset": dataset,
                "method": method,
                "pruning": pruning,
                "fdr_mean": float(fdps.mean()),
                "fdr_sd": _sd(fdps),
                "power_mean": float(powers.mean()) if len(powers) else np.nan,
                "power_sd": _sd(powers) if len(powers) else np.nan,
                "power_se": (
                    _sd(powers) / np.sqrt(len(powers)) if len(powers) else np.nan
                ),
                "n_train": int(group["n_train"].iloc[0]),
                "n_test": int(group["n_test"].iloc[0]),
                "valid": valid,
                "valid_raw": raw_valid,
                "mean_n_rejected": float(group["n_rejected"].mean()),
                "mean_n_eff": float(group["n_eff"].mean()),
                "mean_floor_max": float(group["floor_max"].mean()),
            }
        )
    summary = pd.DataFrame.from_records(records, columns=list(SUMMARY_COLUMNS))
    return canonical_order(summary, ("dataset", "method", "pruning"))


def selection_table(
    phase1: list[Phase1Result], scorers: tuple[str, ...]
) -> pd.DataFrame:
    """Per-scorer mean/sd of validation metrics plus selection counts."""
    records = []
    for name in scorers:
        observed = [result.metrics.get(name) for result in phase1]
        observed = [metrics for metrics in observed if metrics is not None]
        row: dict[str, object] = {"scorer": name}
        for metric in ("pr_auc", "roc_auc", "brier"):
            values = pd.Series([getattr(m, metric) for m in observed], dtype=float)
            row[f"{metric}_mean"] = float(values.mean()) if len(values) else np.nan
            row[f"{metric}_sd"] = _sd(values) if len(values) else np.nan
        row["wins"] = sum(result.selected == name for result in phase1)
        records.append(row)
    return pd.DataFrame.from_records(records, columns=list(SELECTION_COLUMNS))


def run_experiment(
    spec: ExperimentSpec, n_jobs: Optional[int] = None
) -> ExperimentResult:
    """Run ``spec.n_seeds`` independent trials and aggregate them."""
    jobs = resolve_n_jobs(n_jobs) if spec.n_seeds > 1 else 1
    logger.info(
        "Running %s: %d seeds, methods=%s",
        spec.name,
        spec.n_seeds,
        ",".join(str(method) for method in spec.methods),
    )
    trials = Parallel(n_jobs=jobs)(
        delayed(run_trial)(spec, seed_index) for seed_index in range(spec.n_seeds)
    )

    rows = [row.to_row() for trial_rows, _ in trials for row in trial_rows]
    results = canonical_order(
        pd.DataFrame.from_records(rows, columns=list(RESULT_COLUMNS)),
        ("seed_index", "method", "pruning"),
    )
    phase1 = [result for _, result in trials]
    return ExperimentResult(
        spec=spec,
        results=results,
        summary=summarize(results),
        selection=selection_table(phase1, spec.scorers),
    )


# =============================================================================
# Files
# =============================================================================


def summary_json(summary: pd.DataFrame, spec: Optional[ExperimentSpec] = None) -> str:
    payload = {
        "spec": spec.to_dict() if spec is not None else None,
        "summary": json.loads(summary.to_json(orient="records")),
    }
    return json.dumps(payload, indent=2)


def write_outputs(result: ExperimentResult, out_dir: Path | str) -> list[Path]:
    """Write the four experiment artifacts into ``out_dir``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {
        "results": out_dir / "results.csv",
        "summary": out_dir / "summary.csv",
        "json": out_dir / "summary.json",
        "selection": out_dir / "selection.csv",
    }
    result.results.to_csv(paths["results"], index=False)
    result.summary.to_csv(paths["summary"], index=False)
    paths["json"].write_text(
        summary_json(result.summary, result.spec), encoding="utf-8"
    )
    result.selection.to_csv(paths["selection"], index=False)
    return list(paths.values())


def read_results(path: Path | str) -> pd.DataFrame:
    """Read a results.csv written by :func:`write_outputs`."""
    path = Path(path)
    try:
        # Only blank cells are missing; labels such as "none" stay strings.
        return pd.read_csv(
            path,
            dtype={"dataset": str, "weight_hash": str, "pruning": str},
            keep_default_na=False,
            na_values=[""],
        )
    except pd.errors.EmptyDataError as error:
        raise ParseError("results file is empty", path=path) from error


def report(in_path: Path | str, out_path: Path | str) -> pd.DataFrame:
    """Rebuild summary.csv (and summary.json beside it) from results.csv."""
    summary = summarize(read_results(in_path))
    out_path = Path(out_path)
    summary.to_csv(out_path, index=False)
    out_path.with_suffix(".json").write_text(summary_json(summary), encoding="utf-8")
    return summary
