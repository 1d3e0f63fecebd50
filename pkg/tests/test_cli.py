import dataclasses
import json

import pytest
from pydantic import ValidationError

from src.lattice.families import Family, SpecError, family_subgroup
from src.main import main, parse_spec
from src.models import RunConfig, RunReport
from src.molien.quotient import compute_Q
from src.pipelines.report_pipeline import (
    EXIT_CAPACITY,
    EXIT_CONSISTENCY,
    EXIT_OK,
    EXIT_VALIDATION,
    render_text,
    run,
)
from src.polyring.multipoly import VariableCountError


def test_parse_spec_hyperoctahedral():
    config = parse_spec(["--family", "b", "--n", "3", "--k", "2"])
    assert config.k == 2
    spec = config.build_spec()
    assert spec.family is Family.HYPEROCTAHEDRAL
    assert spec.order == 48


def test_parse_spec_g_de_e_n():
    spec = parse_spec("--family g --d 2 --e 3 --n 2 --k 2".split()).build_spec()
    assert spec.N == 6
    assert spec.label == "G(6,3,2)"


def test_parse_spec_custom_matches_g2_example():
    config = parse_spec("--family custom --modulus 2 --dim 3 --gen 1,1,1 --k 2".split())
    assert config.generators == [[1, 1, 1]]
    assert config.build_spec().H.elements == family_subgroup("g2-example").H.elements


@pytest.mark.parametrize(
    "argv",
    [
        "--family custom --modulus 2 --dim 3 --gen 1,x,1",
        "--family custom --modulus 2 --dim 3 --gen 1,2,1",
        "--family a --n 2 --bogus",
        "--n 2",
    ],
)
def test_parse_spec_rejects_bad_flags(argv):
    with pytest.raises(SpecError):
        parse_spec(argv.split())


@pytest.mark.parametrize("argv", ["--family a --n 2 --k 0", "--family a --n 2 --depth -1", "--family a --n 2 --cap 0"])
def test_parse_spec_validates_ranges(argv):
    with pytest.raises(ValidationError):
        parse_spec(argv.split())


def test_run_symmetric_text():
    outcome = run(RunConfig(family="symmetric", n=2, k=2))
    assert outcome.status == EXIT_OK
    text = render_text(outcome.report)
    assert "Q = 1 + h1*h2" in text
    assert "rank 2 = |G|^1" in text


def test_run_g2_example_is_a_valid_outcome():
    outcome = run(RunConfig(family="g2-example", k=2))
    assert outcome.success
    assert not outcome.report.Q.polynomial
    assert "Q is NOT a polynomial" in render_text(outcome.report)


def test_run_dihedral_with_oracle():
    outcome = run(RunConfig(family="dihedral", N=4, k=2, check_oracle=True, depth=5))
    assert outcome.status == EXIT_OK
    report = outcome.report
    assert report.oracle.checked and report.oracle.agrees
    assert report.oracle.depth == 5
    assert report.q_series().numerator.eval_at_ones() == 8
    assert "oracle (depth 5): agrees" in render_text(report)


def test_run_reports_validation_and_capacity():
    assert run(RunConfig(family="custom", N=2, n=2, generators=[[1, 0]])).status == EXIT_VALIDATION
    assert run(RunConfig(family="nope", n=2)).status == EXIT_VALIDATION
    assert run(RunConfig(family="symmetric", n=3, cap=5)).status == EXIT_CAPACITY


def test_run_flags_rank_mismatch(monkeypatch):
    def wrong_rank(spec, k, cap=None):
        return dataclasses.replace(compute_Q(spec, k, cap=cap), rank=3)

    monkeypatch.setattr("src.pipelines.report_pipeline.compute_Q", wrong_rank)
    outcome = run(RunConfig(family="symmetric", n=2, k=2))
    assert outcome.status == EXIT_CONSISTENCY
    assert "rank 3" in outcome.error
    assert outcome.report is not None


def test_run_maps_unexpected_errors(monkeypatch):
    def boom(*_, **__):
        raise RuntimeError("boom")

    monkeypatch.setattr("src.pipelines.report_pipeline.compute_Q", boom)
    outcome = run(RunConfig(family="symmetric", n=2))
    assert outcome.status == EXIT_CONSISTENCY
    assert "boom" in outcome.error


def test_run_maps_engine_value_errors_to_internal(monkeypatch):
    def mismatched(*_, **__):
        raise VariableCountError("cannot combine polynomials in 1 and 2 variables")

    monkeypatch.setattr("src.pipelines.report_pipeline.compute_Q", mismatched)
    outcome = run(RunConfig(family="symmetric", n=2))
    assert outcome.status == EXIT_CONSISTENCY
    assert "2 variables" in outcome.error


def test_run_reports_non_polynomial_with_residual():
    outcome = run(RunConfig(family="custom", N=5, n=2, generators=[[1, 1]], k=2))
    assert outcome.status == EXIT_OK
    report = outcome.report
    assert not report.Q.polynomial
    assert report.Q.residual
    assert report.rank is None
    text = render_text(report)
    assert "Q is NOT a polynomial" in text
    assert ") / (" in text


def test_main_json_is_deterministic_and_round_trips(capsys):
    argv = ["--family", "hyperoctahedral", "--n", "2", "--k", "2", "--format", "json", "--quiet"]
    assert main(argv) == EXIT_OK
    first = capsys.readouterr().out
    assert main(argv) == EXIT_OK
    second = capsys.readouterr().out
    assert first == second

    payload = json.loads(first)
    assert payload["group"]["orderG"] == 8
    assert payload["group"]["degrees"] == [2, 4]
    assert payload["scaled_limit"] == "1/8"
    assert payload["limit_rank"] == "8/1"
    assert payload["rank"] == 8 and payload["expected_rank"] == 8
    assert payload["separable"] is False

    report = RunReport.model_validate(payload)
    expected = compute_Q(family_subgroup("hyperoctahedral", n=2), 2)
    assert report.q_series() == expected.Q


def test_main_text_output(capsys):
    assert main(["--family", "a", "--n", "2", "--k", "3"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "Q = 1 + h1*h2 + h1*h3 + h2*h3" in out
    assert "rank 4 = |G|^2" in out


def test_main_capacity_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("MOLIEN_CAP", "5")
    assert main(["--family", "b", "--n", "3"]) == EXIT_CAPACITY
    assert capsys.readouterr().out == ""


def test_main_rejects_unknown_family(capsys):
    assert main(["--family", "e8", "--n", "2"]) == EXIT_VALIDATION
    assert "unknown family" in capsys.readouterr().err


def test_main_writes_output_file(tmp_path):
    target = tmp_path / "report.json"
    assert main(["--family", "d", "--n", "2", "--format", "json", "--output", str(target)]) == EXIT_OK
    assert json.loads(target.read_text())["group"]["label"] == "D_2"


def test_main_batch(tmp_path, capsys):
    batch = tmp_path / "grid.txt"
    batch.write_text(
        "# small grid\n"
        "--family a --n 2 --k 2\n"
        "\n"
        "--family zz --n 2\n"
        "--family b --n 3 --cap 5\n"
        "--family i --N 3 --k 2 --depth\n"
    )
    assert main(["--batch", str(batch)]) == EXIT_CAPACITY
    entries = json.loads(capsys.readouterr().out)
    assert len(entries) == 4
    assert entries[0]["rank"] == 2
    assert entries[1]["status"] == EXIT_VALIDATION
    assert entries[2]["status"] == EXIT_CAPACITY
    assert entries[3] == {"spec": "--family i --N 3 --k 2 --depth", "error": entries[3]["error"], "status": EXIT_VALIDATION}


def test_main_batch_missing_file(tmp_path):
    assert main(["--batch", str(tmp_path / "missing.txt")]) == EXIT_VALIDATION
