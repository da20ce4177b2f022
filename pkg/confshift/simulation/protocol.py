#!/usr/bin/env python3
"""
Two-phase trial protocol.

PHASE 1 (model selection):
==========================
Fit every candidate scorer on the training split, score the validation split,
compute PR-AUC / ROC-AUC / Brier and pick a scorer lexicographically. The
validation split is not used again.

PHASE 2 (detection):
====================
Score calibration and test rows with the chosen scorer, estimate ONE
WeightProfile shared by every weighted method, build each requested p-value
vector, then
    unweighted methods (edf, edf_rand, kde)    -> Benjamini-Hochberg
    weighted methods (wedf, wedf_rand, wkde)   -> WCS, one row per pruning
and score the rejections against the test labels.

SEED STREAMS:
=============
trial seed      derive_seed(master_seed, seed_index)
data            derive_seed(trial seed, STREAM_DATA)
weights         derive_seed(trial seed, STREAM_WEIGHTS)
U_j draws       derive_seed(trial seed, METHOD_STREAM[method])
pruning xi      derive_seed(trial seed, PRUNING_STREAM[pruning])
"""

from dataclasses import asdict, dataclass, field
from typing import Any, Optional

import numpy as np

from confshift.core.constants import (
    METHOD_STREAM,
    NO_PRUNING,
    PRUNING_STREAM,
    RANDOMIZED_METHODS,
    SMOOTH_METHODS,
    STREAM_WEIGHTS,
    WEIGHTED_METHODS,
    Methods,
    Pruning,
)
from confshift.core.logging import get_logger
from confshift.core.result import DomainError
from confshift.core.seeding import derive_seed
from confshift.evaluation.metrics import (
    ClassificationMetrics,
    classification_metrics,
    lexicographic_select,
    trial_metrics,
)
from confshift.pvalues.conformal import (
    discrete_pvalues,
    floor_values,
    randomized_pvalues,
)
from confshift.pvalues.kde import fit_weighted_kde, kde_pvalue_batch
from confshift.pvalues.vector import PValueVector
from confshift.scoring.scorers import fit_scorer
from confshift.selection.bh import benjamini_hochberg
from confshift.selection.report import DecisionReport
from confshift.selection.wcs import wcs
from confshift.simulation.generator import SyntheticProblem, generate_problem
from confshift.simulation.spec import ExperimentSpec, WeightSource
from confshift.weights.bagging import bagged_weights, stabilize_weights
from confshift.weights.profile import WeightProfile

logger = get_logger(__name__)


@dataclass(frozen=True)
class Phase1Result:
    """Chosen scorer plus every candidate's validation metrics.

    ``metrics`` maps scorer name to its metrics, or None when the validation
    split held a single class and selection fell back to the first candidate.
    """

    selected: str
    metrics: dict[str, Optional[ClassificationMetrics]] = field(default_factory=dict)
    fallback: bool = False


@dataclass(frozen=True)
class TrialResult:
    """One (seed, method, pruning) row of results.csv."""

    seed_index: int
    seed: int
    dataset: str
    scorer: str
    method: str
    pruning: str
    procedure: str
    alpha: float
    fdp: float
    power: Optional[float]
    n_rejected: int
    n_anomalies: int
    n_train: int
    n_test: int
    n_eff: float
    floor_max: float
    undetectable_frac: float
    weight_hash: str

    def to_row(self) -> dict[str, Any]:
        return asdict(self)


RESULT_COLUMNS = tuple(TrialResult.__dataclass_fields__)


# =============================================================================
# Phase 1
# =============================================================================


def run_phase1(
    spec: ExperimentSpec, seed: int, problem: Optional[SyntheticProblem] = None
) -> Phase1Result:
    """Select a scorer on the validation split of the trial drawn from ``seed``."""
    problem = problem if problem is not None else generate_problem(spec, seed)
    labels = problem.validation_labels
    if labels.all() or not labels.any():
        logger.warning(
            "Validation split of seed %d holds one class; falling back to %s",
            seed,
            spec.scorers[0],
        )
        return Phase1Result(
            selected=spec.scorers[0],
            metrics={name: None for name in spec.scorers},
            fallback=True,
        )

    metrics: dict[str, Optional[ClassificationMetrics]] = {}
    for name in spec.scorers:
        scorer = fit_scorer(name, problem.train, **spec.scorer_params(name))
        metrics[name] = classification_metrics(scorer.score(problem.validation), labels)
    selected = lexicographic_select(
        [(name, *values) for name, values in metrics.items()]
    )
    logger.debug("Phase 1 seed %d selected %s", seed, selected)
    return Phase1Result(selected=selected, metrics=metrics)


# =============================================================================
# Phase 2
# =============================================================================


def trial_weights(
    spec: ExperimentSpec, seed: int, problem: SyntheticProblem
) -> WeightProfile:
    """The single WeightProfile shared by every weighted method of a trial."""
    if spec.weight_source is WeightSource.ORACLE:
        return stabilize_weights(
            problem.oracle_calib_weights,
            problem.oracle_test_weights,
            spec.gamma,
            source="oracle",
        )
    return bagged_weights(
        problem.calib,
        problem.test,
        n_bootstrap=spec.n_bootstrap,
        gamma=spec.gamma,
        kind=spec.classifier,
        seed=derive_seed(seed, STREAM_WEIGHTS),
        n_jobs=1,
    )


def method_pvalues(
    method: Methods,
    calib_scores: np.ndarray,
    test_scores: np.ndarray,
    profile: WeightProfile,
    seed: int,
) -> PValueVector:
    """p-values of one method; ``profile`` is the unit profile when unweighted."""
    if method in SMOOTH_METHODS:
        kde = fit_weighted_kde(calib_scores, profile.calib_weights)
        return kde_pvalue_batch(kde, test_scores)
    if method in RANDOMIZED_METHODS:
        return randomized_pvalues(
            calib_scores,
            profile.calib_weights,
            test_scores,
            profile.test_weights,
            seed=derive_seed(seed, METHOD_STREAM[method]),
        )
    return discrete_pvalues(
        calib_scores, profile.calib_weights, test_scores, profile.test_weights
    )


def select_rejections(
    method: Methods, pvalues: PValueVector, spec: ExperimentSpec, seed: int
) -> list[tuple[str, DecisionReport]]:
    """(pruning label, report) pairs: BH once, or WCS once per pruning."""
    if method not in WEIGHTED_METHODS:
        return [(NO_PRUNING, benjamini_hochberg(pvalues, spec.alpha))]
    decisions = []
    for strategy in spec.pruning:
        prune_seed = (
            None
            if strategy is Pruning.DETERMINISTIC
            else derive_seed(seed, PRUNING_STREAM[strategy])
        )
        decisions.append(
            (str(strategy), wcs(pvalues, spec.alpha, strategy, prune_seed))
        )
    return decisions


def run_phase2(
    spec: ExperimentSpec,
    seed: int,
    scorer: str,
    problem: Optional[SyntheticProblem] = None,
    seed_index: int = 0,
) -> list[TrialResult]:
    """Detection rows of one trial, in METHOD_ORDER then PRUNING_ORDER."""
    problem = problem if problem is not None else generate_problem(spec, seed)
    model = fit_scorer(scorer, problem.train, **spec.scorer_params(scorer))
    calib_scores = model.score(problem.calib)
    test_scores = model.score(problem.test)

    unit = WeightProfile.unit(spec.n_cal, spec.n_test)
    weighted = trial_weights(spec, seed, problem) if spec.has_weighted_methods else unit
    m = spec.n_test

    rows = []
    for method in spec.methods:
        profile = weighted if method in WEIGHTED_METHODS else unit
        pvalues = method_pvalues(method, calib_scores, test_scores, profile, seed)
        if method in SMOOTH_METHODS:
            floor_max, undetectable = 0.0, 0.0
        else:
            floors = floor_values(profile.calib_weights, profile.test_weights)
            floor_max = float(floors.max())
            # Points whose floor exceeds the single-rejection cutoff alpha / m.
            undetectable = float(np.mean(floors > spec.alpha / m))

        for pruning, report in select_rejections(method, pvalues, spec, seed):
            metrics = trial_metrics(report.rejected, problem.test_labels)
            rows.append(
                TrialResult(
                    seed_index=seed_index,
                    seed=seed,
                    dataset=spec.name,
                    scorer=scorer,
                    method=str(method),
                    pruning=pruning,
                    procedure=str(report.procedure),
                    alpha=spec.alpha,
                    fdp=metrics.fdp,
                    power=metrics.power,
                    n_rejected=metrics.n_rejected,
                    n_anomalies=metrics.n_anomalies,
                    n_train=spec.n_train,
                    n_test=spec.n_test,
                    n_eff=profile.n_eff,
                    floor_max=floor_max,
                    undetectable_frac=undetectable,
                    weight_hash=profile.fingerprint(),
                )
            )
    return rows


def run_trial(
    spec: ExperimentSpec, seed_index: int
) -> tuple[list[TrialResult], Phase1Result]:
    """Both phases of trial ``seed_index`` on one generated problem."""
    if seed_index < 0:
        raise DomainError(f"seed_index must be >= 0, got {seed_index}")
    seed = derive_seed(spec.master_seed, seed_index)
    problem = generate_problem(spec, seed)
    phase1 = run_phase1(spec, seed, problem)
    rows = run_phase2(spec, seed, phase1.selected, problem, seed_index=seed_index)
    return rows, phase1
