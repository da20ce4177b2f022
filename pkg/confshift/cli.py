#!/usr/bin/env python3
"""
confshift - weighted conformal anomaly detection under covariate shift.

SUBCOMMANDS:
============
weights    Estimate importance weights from calibration/test feature CSVs
pvalues    Turn anomaly scores (+ optional weights) into conformal p-values
select     Apply BH or WCS to a p-value file
simulate   Run a TOML experiment spec end to end
report     Rebuild summary.csv from a results.csv

USAGE:
======
    confshift weights --calib calib.csv --test test.csv --seed 7 --out w.json
    confshift pvalues --scores scores.csv --weights w.json --method kde --out pv.csv
    confshift select --pvalues pv.csv --alpha 0.1 --procedure wcs --pruning hom \\
        --seed 3 --out decision.json
    confshift simulate --spec config/dilemma.toml --out-dir out/
    confshift report --in out/results.csv --out out/summary.csv

SCORE FILES:
============
CSV with columns score (required), label (optional, test rows) and split
(optional, "calib" or "test"; rows without a split are test rows). A
``.json`` file holds {"calib_scores", "test_scores", "test_labels"}.

EXIT CODES:
===========
0 success, 1 invalid input or arguments, 2 unreadable or unwritable files.
CONFSHIFT_THREADS caps internal parallelism (0 = all cores).
"""

import argparse
import sys
from pathlib import Path
from typing import NoReturn, Optional, Sequence

from confshift import api
from confshift.core.constants import (
    DEFAULT_ALPHA,
    DEFAULT_GAMMA,
    DEFAULT_N_BOOTSTRAP,
    PRUNING_ALIASES,
    Pruning,
)
from confshift.core.logging import (
    DEFAULT_FORMAT,
    SHORT_FORMAT,
    configure_logging,
    get_logger,
    level_for_flags,
)
from confshift.core.result import (
    ConfigurationError,
    ConfshiftError,
    ReturnCodes,
    exit_code_for,
)
from confshift.pvalues.conformal import discrete_pvalues, randomized_pvalues
from confshift.pvalues.kde import fit_weighted_kde, kde_pvalue_batch
from confshift.pvalues.vector import PValueMethod, PValueVector
from confshift.scoring.features import read_feature_csv
from confshift.scoring.ingest import ingest_scores
from confshift.selection.bh import benjamini_hochberg
from confshift.selection.wcs import parse_pruning, wcs
from confshift.simulation.experiment import report, run_experiment, write_outputs
from confshift.simulation.spec import load_spec
from confshift.weights.classifier import ClassifierKind
from confshift.weights.profile import WeightProfile

logger = get_logger(__name__)


class CliParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with VALIDATION_ERROR (1)."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(ReturnCodes.VALIDATION_ERROR, f"{self.prog}: error: {message}\n")


def open_unit_interval(text: str) -> float:
    """argparse type for a real in (0, 1)."""
    try:
        value = float(text)
    except ValueError as error:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from error
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"must be in (0, 1), got {value}")
    return value


def nonnegative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError as error:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from error
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


# =============================================================================
# Subcommands
# =============================================================================


def cmd_weights(args: argparse.Namespace) -> int:
    calib, calib_columns = read_feature_csv(args.calib)
    test, test_columns = read_feature_csv(args.test)
    if calib_columns != test_columns:
        raise ConfigurationError(
            f"column mismatch: {args.calib} has {calib_columns}, "
            f"{args.test} has {test_columns}"
        )
    profile = api.estimate_weights(
        calib,
        test,
        standardize=args.standardize,
        n_bootstrap=args.bootstrap,
        gamma=args.gamma,
        classifier=args.classifier,
        seed=args.seed,
    )
    profile.write_json(args.out)
    print(f"N_eff: {profile.n_eff:.4f}")
    logger.info("Wrote weight profile to %s", args.out)
    return ReturnCodes.SUCCESS


def cmd_pvalues(args: argparse.Namespace) -> int:
    method = PValueMethod(args.method)
    if method is PValueMethod.RANDOMIZED and args.seed is None:
        raise ConfigurationError("--method randomized requires --seed")

    score_format = "json" if Path(args.scores).suffix.lower() == ".json" else "csv"
    batch = ingest_scores(args.scores, format=score_format)
    calib_weights = test_weights = None
    if args.weights is not None:
        profile = WeightProfile.read_json(args.weights)
        if profile.calib_weights.size != batch.calib_scores.size:
            raise ConfigurationError(
                f"weights file has {profile.calib_weights.size} calibration "
                f"weights for {batch.calib_scores.size} calibration scores"
            )
        if profile.test_weights.size != batch.test_scores.size:
            raise ConfigurationError(
                f"weights file has {profile.test_weights.size} test weights "
                f"for {batch.test_scores.size} test scores"
            )
        calib_weights, test_weights = profile.calib_weights, profile.test_weights

    out = Path(args.out)
    if method is PValueMethod.KDE:
        kde = fit_weighted_kde(batch.calib_scores, calib_weights)
        pvalues = kde_pvalue_batch(kde, batch.test_scores)
        model_path = out.with_suffix(".kde.json")
        kde.write_json(model_path)
        print(f"bandwidth: {kde.bandwidth:.6g}")
        print(f"degenerate_flag: {str(kde.degenerate).lower()}")
        logger.info("Wrote KDE model to %s", model_path)
    elif method is PValueMethod.RANDOMIZED:
        pvalues = randomized_pvalues(
            batch.calib_scores,
            calib_weights,
            batch.test_scores,
            test_weights,
            seed=args.seed,
        )
    else:
        pvalues = discrete_pvalues(
            batch.calib_scores, calib_weights, batch.test_scores, test_weights
        )

    pvalues.to_csv(out)
    print(f"p-values: {len(pvalues)}")
    return ReturnCodes.SUCCESS


def cmd_select(args: argparse.Namespace) -> int:
    pvalues = PValueVector.read_csv(args.pvalues)
    if args.procedure == "bh":
        decision = benjamini_hochberg(pvalues, args.alpha)
    else:
        strategy = parse_pruning(args.pruning)
        if strategy is not Pruning.DETERMINISTIC and args.seed is None:
            raise ConfigurationError(f"--pruning {args.pruning} requires --seed")
        decision = wcs(pvalues, args.alpha, strategy, args.seed)
    decision.write_json(args.out)
    print(f"rejected: {decision.n_rejected}")
    return ReturnCodes.SUCCESS


def cmd_simulate(args: argparse.Namespace) -> int:
    spec = load_spec(args.spec)
    result = run_experiment(spec)
    for path in write_outputs(result, args.out_dir):
        logger.info("Wrote %s", path)
    print(result.summary.to_string(index=False))
    return ReturnCodes.SUCCESS


def cmd_report(args: argparse.Namespace) -> int:
    summary = report(args.input, args.out)
    print(summary.to_string(index=False))
    return ReturnCodes.SUCCESS


# =============================================================================
# Parser
# =============================================================================


def build_parser() -> CliParser:
    parser = CliParser(
        prog="confshift",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument(
        "-v", "--verbose", action="store_true", help="Debug logging with timestamps."
    )
    parser.add_argument(
        "-q", "--quiet", action="store_true", help="Only log warnings and errors."
    )
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands.required = True

    weights = commands.add_parser(
        "weights", help="Estimate importance weights from feature CSVs."
    )
    weights.add_argument("--calib", required=True, metavar="PATH")
    weights.add_argument("--test", required=True, metavar="PATH")
    weights.add_argument(
        "--bootstrap",
        type=int,
        default=DEFAULT_N_BOOTSTRAP,
        metavar="B",
        help=f"Bootstrap replicas (default: {DEFAULT_N_BOOTSTRAP}).",
    )
    weights.add_argument(
        "--gamma",
        type=float,
        default=DEFAULT_GAMMA,
        help=f"Winsorization level in [0, 0.5) (default: {DEFAULT_GAMMA}).",
    )
    weights.add_argument(
        "--classifier",
        choices=[str(kind) for kind in ClassifierKind],
        default=str(ClassifierKind.FOREST),
    )
    weights.add_argument("--seed", type=nonnegative_int, default=0)
    weights.add_argument(
        "--standardize",
        action="store_true",
        help="Z-score both files with calibration parameters first.",
    )
    weights.add_argument("--out", required=True, metavar="PATH")
    weights.set_defaults(handler=cmd_weights)

    pvalues = commands.add_parser(
        "pvalues", help="Compute conformal p-values from a score file."
    )
    pvalues.add_argument("--scores", required=True, metavar="PATH")
    pvalues.add_argument(
        "--weights",
        metavar="PATH",
        help="Weight profile JSON (unit weights if absent).",
    )
    pvalues.add_argument(
        "--method",
        choices=[str(method) for method in PValueMethod],
        default=str(PValueMethod.DISCRETE),
    )
    pvalues.add_argument(
        "--seed", type=nonnegative_int, help="Required for --method randomized."
    )
    pvalues.add_argument("--out", required=True, metavar="PATH")
    pvalues.set_defaults(handler=cmd_pvalues)

    select = commands.add_parser("select", help="Apply BH or WCS to p-values.")
    select.add_argument("--pvalues", required=True, metavar="PATH")
    select.add_argument(
        "--alpha",
        type=open_unit_interval,
        default=DEFAULT_ALPHA,
        help=f"Target FDR in (0, 1) (default: {DEFAULT_ALPHA}).",
    )
    select.add_argument("--procedure", choices=["bh", "wcs"], default="bh")
    select.add_argument(
        "--pruning",
        choices=sorted(PRUNING_ALIASES) + [str(p) for p in Pruning],
        default="hom",
        help="WCS pruning: det, hom or het (default: hom).",
    )
    select.add_argument(
        "--seed", type=nonnegative_int, help="Required for hom/het pruning."
    )
    select.add_argument("--out", required=True, metavar="PATH")
    select.set_defaults(handler=cmd_select)

    simulate = commands.add_parser("simulate", help="Run an experiment spec.")
    simulate.add_argument("--spec", required=True, metavar="PATH")
    simulate.add_argument("--out-dir", required=True, metavar="DIR")
    simulate.set_defaults(handler=cmd_simulate)

    summary = commands.add_parser("report", help="Summarize a results.csv.")
    summary.add_argument("--in", dest="input", required=True, metavar="PATH")
    summary.add_argument("--out", required=True, metavar="PATH")
    summary.set_defaults(handler=cmd_report)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point for the ``confshift`` console script."""
    parser = build_parser()
    args = parser.parse_args(argv)

    configure_logging(
        level_for_flags(args.verbose, args.quiet),
        format_string=DEFAULT_FORMAT if args.verbose else SHORT_FORMAT,
    )

    try:
        return int(args.handler(args))
    except (ConfshiftError, OSError) as error:
        logger.error("%s", error)
        return int(exit_code_for(error))


if __name__ == "__main__":
    sys.exit(main())
