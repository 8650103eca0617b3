"""Tests for report serialization: schema, determinism, round-trips."""

import json

import pytest

from eprb_lab.experiment import RunConfig, run_experiment
from eprb_lab.reporting import (
    ReportWriteError,
    emit_report,
    parse_report,
    render_csv,
    report_bytes,
    report_from_dict,
    report_to_dict,
    write_sidecar,
)


@pytest.fixture(scope="module")
def sample_report():
    cfg = RunConfig(
        model="lhv",
        trials_per_pair=1500,
        seed=77,
        extra_contexts=((0.9, 2.3),),
        out_format="json",
        out_path="report.json",
    )
    return run_experiment(cfg)


def test_json_round_trip(sample_report):
    data = report_bytes(sample_report, "json")
    assert parse_report(data) == sample_report


def test_dict_round_trip(sample_report):
    assert report_from_dict(report_to_dict(sample_report)) == sample_report


def test_round_trip_all_models():
    for model in ("quantum", "realist", "lhv"):
        report = run_experiment(RunConfig(model=model, trials_per_pair=400, seed=3))
        assert parse_report(report_bytes(report, "json")) == report


def test_serialization_is_deterministic(sample_report):
    assert report_bytes(sample_report, "json") == report_bytes(sample_report, "json")
    assert report_bytes(sample_report, "csv") == report_bytes(sample_report, "csv")


def test_json_key_order(sample_report):
    ordered = json.loads(
        report_bytes(sample_report, "json"),
        object_pairs_hook=lambda pairs: [k for k, _ in pairs],
    )
    # object_pairs_hook replaces every object with its key list, so the
    # outermost value is the top-level key order
    assert ordered == ["config", "pairs", "chsh", "verdicts"]


def test_json_pair_schema(sample_report):
    data = json.loads(report_bytes(sample_report, "json"))
    assert list(data["config"].keys()) == [
        "model", "chsh_angles", "extra_contexts", "trials_per_pair", "seed",
        "format", "out", "lhv_rule", "gof_alpha", "no_signaling_tolerance",
    ]
    pair = data["pairs"][0]
    assert list(pair.keys()) == [
        "theta", "phi", "counts", "freq", "expected", "chi2",
        "e_hat", "e_err", "e_theory",
    ]
    assert list(pair["counts"].keys()) == ["pp", "pm", "mp", "mm"]
    assert list(pair["chi2"].keys()) == ["stat", "p"]
    assert list(data["chsh"].keys()) == ["s_hat", "s_err", "s_theory", "angles"]
    assert list(data["verdicts"].keys()) == ["gof_pass", "no_signaling_pass", "chsh_side"]
    assert data["config"]["lhv_rule"] == "sign-cos"
    assert data["config"]["out"] == "report.json"


def test_csv_shape(sample_report):
    lines = render_csv(sample_report).splitlines()
    # header + one row per pair + one CHSH comment line
    assert len(lines) == 1 + len(sample_report.pairs) + 1
    assert lines[0] == "theta,phi,n_pp,n_pm,n_mp,n_mm,e_hat,e_err,e_theory,chi2,p"
    assert lines[-1].startswith("# S_hat=")
    first = lines[1].split(",")
    assert float(first[0]) == sample_report.pairs[0].theta
    assert int(first[2]) == sample_report.pairs[0].counts.n_pp


def test_emit_report_writes_identical_files(tmp_path, sample_report):
    p1 = tmp_path / "a.json"
    p2 = tmp_path / "b.json"
    emit_report(sample_report, "json", str(p1))
    emit_report(sample_report, "json", str(p2))
    assert p1.read_bytes() == p2.read_bytes()


def test_emit_report_surfaces_path_on_failure(sample_report, tmp_path):
    bad = tmp_path / "missing-dir" / "report.json"
    with pytest.raises(ReportWriteError) as err:
        emit_report(sample_report, "json", str(bad))
    assert "missing-dir" in str(err.value)


def test_report_contains_no_environment_data(sample_report):
    text = report_bytes(sample_report, "json").decode()
    for fragment in ("time", "date", "host"):
        assert fragment not in text.lower()


def test_sidecar_written_separately(tmp_path, sample_report):
    out = tmp_path / "r.json"
    emit_report(sample_report, "json", str(out))
    write_sidecar(str(out))
    sidecar = json.loads((tmp_path / "r.json.sidecar.json").read_text())
    assert sidecar["package"] == "eprb-lab"
    assert "created_utc" in sidecar
    # the sidecar never alters the report itself
    assert parse_report(out.read_bytes()) == sample_report


def test_report_bytes_rejects_unknown_format(sample_report):
    with pytest.raises(ValueError):
        report_bytes(sample_report, "yaml")
