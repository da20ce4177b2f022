#!/usr/bin/env python3
"""
Tests for the confshift command line (confshift.cli.main).

Handlers are driven in-process through ``main(argv)``; the return value is
the exit code.
"""

import json
import textwrap

import numpy as np
import pytest

from confshift.cli import build_parser, main
from confshift.pvalues.vector import PValueVector
from confshift.weights.profile import WeightProfile

# =============================================================================
# pvalues
# =============================================================================


def test_discrete_pvalues(score_csv, temp_dir, capsys):
    out = temp_dir / "pv.csv"

    assert main(["pvalues", "--scores", str(score_csv), "--out", str(out)]) == 0

    pvalues = PValueVector.read_csv(out)
    np.testing.assert_allclose(pvalues.values, [1.0, 4 / 6, 2 / 6, 1 / 6])
    assert "p-values: 4" in capsys.readouterr().out


def test_kde_pvalues_write_model(score_csv, temp_dir, capsys):
    out = temp_dir / "pv.csv"

    code = main(
        ["pvalues", "--scores", str(score_csv), "--method", "kde", "--out", str(out)]
    )

    assert code == 0
    model = json.loads((temp_dir / "pv.kde.json").read_text(encoding="utf-8"))
    assert model["bandwidth"] > 0
    stdout = capsys.readouterr().out
    assert "bandwidth:" in stdout
    assert "degenerate_flag: false" in stdout
    assert PValueVector.read_csv(out).method == "kde"


def test_randomized_pvalues_need_seed(score_csv, temp_dir):
    argv = ["pvalues", "--scores", str(score_csv), "--method", "randomized"]

    assert main(argv + ["--out", str(temp_dir / "a.csv")]) == 1
    assert main(argv + ["--seed", "3", "--out", str(temp_dir / "b.csv")]) == 0
    assert PValueVector.read_csv(temp_dir / "b.csv").seed == 3


def test_missing_score_file_is_io_error(temp_dir):
    code = main(
        [
            "pvalues",
            "--scores",
            str(temp_dir / "absent.csv"),
            "--out",
            str(temp_dir / "pv.csv"),
        ]
    )

    assert code == 2


@pytest.mark.parametrize(
    "content",
    [b"score,label\n1.0,0\n2.0,1,extra\n", b"\xff\xfe"],
    ids=["ragged", "undecodable"],
)
def test_unparseable_score_file_is_validation_error(temp_dir, content, capsys):
    path = temp_dir / "scores.csv"
    path.write_bytes(content)

    code = main(["pvalues", "--scores", str(path), "--out", str(temp_dir / "pv.csv")])

    assert code == 1
    assert "scores.csv" in capsys.readouterr().err


def test_select_rejects_ragged_pvalue_file(temp_dir):
    path = temp_dir / "pv.csv"
    path.write_text("index,p_value\n0,0.1\n1,0.2,kde\n", encoding="utf-8")

    code = main(["select", "--pvalues", str(path), "--out", str(temp_dir / "d.json")])

    assert code == 1


# =============================================================================
# weights
# =============================================================================


def test_weights_then_mismatched_pvalues(feature_csvs, score_csv, temp_dir, capsys):
    calib, test = feature_csvs
    profile_path = temp_dir / "w.json"

    code = main(
        [
            "weights",
            "--calib",
            str(calib),
            "--test",
            str(test),
            "--bootstrap",
            "2",
            "--seed",
            "7",
            "--out",
            str(profile_path),
        ]
    )

    assert code == 0
    profile = json.loads(profile_path.read_text(encoding="utf-8"))
    assert len(profile["calib_weights"]) == 60
    assert len(profile["test_weights"]) == 40
    assert "N_eff:" in capsys.readouterr().out

    # 60 calibration weights cannot pair with 5 calibration scores.
    code = main(
        [
            "pvalues",
            "--scores",
            str(score_csv),
            "--weights",
            str(profile_path),
            "--out",
            str(temp_dir / "pv.csv"),
        ]
    )
    assert code == 1


def test_identical_files_keep_full_effective_size(feature_csvs, temp_dir, capsys):
    calib, _ = feature_csvs
    profile_path = temp_dir / "w.json"

    code = main(
        [
            "weights",
            "--calib",
            str(calib),
            "--test",
            str(calib),
            "--classifier",
            "logistic",
            "--seed",
            "3",
            "--out",
            str(profile_path),
        ]
    )

    assert code == 0
    n_eff = float(capsys.readouterr().out.split("N_eff:")[1])
    assert 0.9 * 60 <= n_eff <= 60
    assert WeightProfile.read_json(profile_path).n_eff == pytest.approx(n_eff, abs=1e-4)


def test_weights_column_mismatch(feature_csvs, temp_dir):
    calib, _ = feature_csvs
    other = temp_dir / "other.csv"
    other.write_text("a,b\n1.0,2.0\n3.0,4.0\n", encoding="utf-8")

    code = main(
        [
            "weights",
            "--calib",
            str(calib),
            "--test",
            str(other),
            "--out",
            str(temp_dir / "w.json"),
        ]
    )

    assert code == 1


# =============================================================================
# select
# =============================================================================


def test_select_bh(pvalue_csv, temp_dir, capsys):
    out = temp_dir / "decision.json"

    assert main(["select", "--pvalues", str(pvalue_csv), "--out", str(out)]) == 0

    decision = json.loads(out.read_text(encoding="utf-8"))
    assert decision["rejected"] == [0, 1]
    assert decision["procedure"] == "bh"
    assert "rejected: 2" in capsys.readouterr().out


def test_select_wcs(pvalue_csv, temp_dir):
    out = temp_dir / "decision.json"
    argv = ["select", "--pvalues", str(pvalue_csv), "--procedure", "wcs"]

    assert main(argv + ["--pruning", "hom", "--out", str(out)]) == 1
    assert main(argv + ["--pruning", "det", "--out", str(out)]) == 0

    decision = json.loads(out.read_text(encoding="utf-8"))
    assert decision["rejected"] == [0, 1]
    assert decision["procedure"] == "wcs_det"
    assert decision["wcs_approx"] is True

    assert main(argv + ["--pruning", "het", "--seed", "5", "--out", str(out)]) == 0
    assert json.loads(out.read_text(encoding="utf-8"))["prune_seed"] == 5


def test_select_rejects_out_of_range_pvalues(temp_dir):
    path = temp_dir / "bad.csv"
    path.write_text("index,p_value\n0,0.2\n1,1.5\n", encoding="utf-8")

    code = main(
        ["select", "--pvalues", str(path), "--out", str(temp_dir / "d.json")]
    )

    assert code == 1


@pytest.mark.parametrize("alpha", ["0", "1", "1.5", "abc"])
def test_invalid_alpha_is_usage_error(pvalue_csv, temp_dir, alpha):
    with pytest.raises(SystemExit) as excinfo:
        main(
            [
                "select",
                "--pvalues",
                str(pvalue_csv),
                "--alpha",
                alpha,
                "--out",
                str(temp_dir / "d.json"),
            ]
        )

    assert excinfo.value.code == 1


def test_missing_subcommand_is_usage_error():
    with pytest.raises(SystemExit) as excinfo:
        main([])

    assert excinfo.value.code == 1


# =============================================================================
# simulate / report
# =============================================================================


SMALL_SPEC = textwrap.dedent(
    """\
    [experiment]
    name = "cli"
    n_seeds = 2
    master_seed = 1
    methods = ["edf", "wkde"]

    [data]
    n_train = 50
    n_cal = 30
    n_test = 20
    n_features = 2

    [shift]
    kind = "localization"
    strength = 0.5

    [weights]
    source = "oracle"

    [scorers]
    candidates = ["mahalanobis"]
    """
)


def test_simulate_and_report(temp_dir, monkeypatch):
    monkeypatch.setenv("CONFSHIFT_THREADS", "1")
    spec_path = temp_dir / "spec.toml"
    spec_path.write_text(SMALL_SPEC, encoding="utf-8")
    out_dir = temp_dir / "out"

    assert main(["simulate", "--spec", str(spec_path), "--out-dir", str(out_dir)]) == 0
    for name in ("results.csv", "summary.csv", "summary.json", "selection.csv"):
        assert (out_dir / name).exists()

    summary = temp_dir / "rebuilt.csv"
    code = main(
        ["report", "--in", str(out_dir / "results.csv"), "--out", str(summary)]
    )
    assert code == 0
    assert summary.read_text(encoding="utf-8").startswith("dataset,method,pruning")


def test_simulate_rejects_unknown_key(temp_dir):
    spec_path = temp_dir / "spec.toml"
    spec_path.write_text("[data]\nn_cells = 3\n", encoding="utf-8")

    code = main(["simulate", "--spec", str(spec_path), "--out-dir", str(temp_dir)])

    assert code == 1


def test_parser_lists_every_subcommand():
    help_text = build_parser().format_help()

    for command in ("weights", "pvalues", "select", "simulate", "report"):
        assert command in help_text
