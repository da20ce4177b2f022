"""Synthetic shifted anomaly-detection experiments (two-phase protocol)."""

from .experiment import (
    ExperimentResult,
    read_results,
    report,
    run_experiment,
    summarize,
    write_outputs,
)
from .generator import SyntheticProblem, generate_problem, oracle_weights
from .probes import FloorProbe, VarianceProbe, floor_inflation_probe, variance_probe
from .protocol import Phase1Result, TrialResult, run_phase1, run_phase2, run_trial
from .spec import ExperimentSpec, ShiftKind, ShiftSpec, WeightSource, load_spec

__all__ = [
    "ExperimentResult",
    "read_results",
    "report",
    "run_experiment",
    "summarize",
    "write_outputs",
    "SyntheticProblem",
    "generate_problem",
    "oracle_weights",
    "FloorProbe",
    "VarianceProbe",
    "floor_inflation_probe",
    "variance_probe",
    "Phase1Result",
    "TrialResult",
    "run_phase1",
    "run_phase2",
    "run_trial",
    "ExperimentSpec",
    "ShiftKind",
    "ShiftSpec",
    "WeightSource",
    "load_spec",
]
