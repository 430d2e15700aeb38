import json
import sys

import pytest
from typer.testing import CliRunner

from ih_derham import main
from ih_derham.cli import app

runner = CliRunner()

TRIANGLE_BOUNDARY = '{"0-1": 1, "0-2": -1, "1-2": 1}'


def _json(result) -> dict:
    assert result.stdout, result.output
    return json.loads(result.stdout)


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ("IH_DERHAM_LOG_LEVEL", "IH_DERHAM_DEFAULT_COEFFICIENTS", "IH_DERHAM_ORACLE_CAP"):
        monkeypatch.delenv(name, raising=False)


# ----- check -----
def test_check_sphere_file(write_doc):
    path = write_doc({"facets": [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]})
    result = runner.invoke(app, ["check", str(path), "--json"])
    assert result.exit_code == 0, result.output
    report = _json(result)
    assert report["command"] == "check"
    assert report["results"]["is_pseudomanifold"] is True
    assert report["results"]["f_vector"] == [4, 6, 4]
    assert len(report["input_digest"]) == 64


def test_check_human_output():
    result = runner.invoke(app, ["check", "corpus:pinched_torus"])
    assert result.exit_code == 0
    assert "pseudomanifold" in result.stdout
    assert "vertices with disconnected links: [8]" in result.stdout


def test_check_disk_exits_2():
    result = runner.invoke(app, ["check", "corpus:disk", "--json"])
    assert result.exit_code == 2
    assert _json(result)["results"]["is_pseudomanifold"] is False


def test_malformed_input_exits_1(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("[[0, 1]", encoding="utf-8")
    result = runner.invoke(app, ["check", str(path)])
    assert result.exit_code == 1
    assert "parse_error:" in result.output


def test_missing_file_exits_1(tmp_path):
    result = runner.invoke(app, ["homology", str(tmp_path / "nope.json")])
    assert result.exit_code == 1
    assert "not_found:" in result.output


# ----- homology -----
def test_homology_projective_plane_torsion():
    result = runner.invoke(app, ["homology", "corpus:rp2", "--json"])
    assert result.exit_code == 0
    groups = _json(result)["results"]["groups"]
    assert [g["betti"] for g in groups] == [1, 0, 0]
    assert groups[1]["torsion"] == [2]


def test_homology_over_rationals():
    result = runner.invoke(app, ["homology", "corpus:rp2", "--coefficients", "rat", "--json"])
    assert all(g["torsion"] == [] for g in _json(result)["results"]["groups"])


def test_default_coefficients_from_env():
    result = runner.invoke(app, ["homology", "corpus:rp2", "--json"], env={"IH_DERHAM_DEFAULT_COEFFICIENTS": "rat"})
    assert _json(result)["results"]["coefficients"] == "rat"


def test_cohomology_moves_torsion_up():
    result = runner.invoke(app, ["cohomology", "corpus:rp2", "--json"])
    groups = _json(result)["results"]["groups"]
    assert groups[2]["torsion"] == [2]


@pytest.mark.parametrize(
    "args",
    [
        ["check", "corpus:pinched_torus"],
        ["homology", "corpus:suspension_rp2"],
        ["cohomology", "corpus:rp2"],
        ["ih", "corpus:pinched_torus"],
        ["normalize", "corpus:wedge_spheres"],
        ["verify", "corpus:pinched_torus"],
        ["flatnorm", "corpus:pinched_torus", "--chain", '{"0-1": 1, "1-4": "1/2", "4-8": -1}'],
        ["corpus", "list"],
    ],
)
def test_json_output_is_deterministic(args):
    a = runner.invoke(app, [*args, "--json"])
    b = runner.invoke(app, [*args, "--json"])
    assert a.exit_code == 0, a.output
    assert a.stdout == b.stdout


# ----- ih -----
def test_ih_pinched_torus():
    result = runner.invoke(app, ["ih", "corpus:pinched_torus", "--json"])
    assert result.exit_code == 0
    report = _json(result)
    assert [g["betti"] for g in report["results"]["homology"]["groups"]] == [1, 0, 1]
    assert report["warnings"] == ["heuristic stratification used"]


def test_ih_heuristic_warning_on_stderr():
    result = runner.invoke(app, ["ih", "corpus:pinched_torus"])
    assert result.exit_code == 0
    assert "warning: heuristic stratification used" in result.output


def test_ih_supplied_strata_have_no_warning(write_doc):
    path = write_doc({**json.loads(runner.invoke(app, ["corpus", "emit", "pinched_torus"]).stdout), "strata": [[[8]]]})
    report = _json(runner.invoke(app, ["ih", str(path), "--json"]))
    assert report["warnings"] == []
    assert report["results"]["heuristic_stratification"] is False


def test_ih_rejects_bad_perversity():
    result = runner.invoke(app, ["ih", "corpus:pinched_torus", "--perversity", "custom:0,2"])
    assert result.exit_code == 1
    assert "invalid perversity" in result.output


def test_ih_rejects_bad_perversity_on_a_curve():
    result = runner.invoke(app, ["ih", "corpus:circle", "--perversity", "custom:0,2"])
    assert result.exit_code == 1
    assert "invalid perversity" in result.output


def test_ih_requires_pseudomanifold():
    result = runner.invoke(app, ["ih", "corpus:disk"])
    assert result.exit_code == 2
    assert "precondition_failed: pseudomanifold required" in result.output


# ----- normalize / verify -----
def test_normalize_wedge():
    result = runner.invoke(app, ["normalize", "corpus:wedge_spheres", "--json"])
    assert result.exit_code == 0
    results = _json(result)["results"]
    assert results["components"] == 2
    assert results["sheet_count"]["0"] == 2
    assert results["check"]["ok"] is True


def test_verify_pinched_torus():
    result = runner.invoke(app, ["verify", "corpus:pinched_torus", "--json"])
    assert result.exit_code == 0
    assert _json(result)["results"]["match"] is True


def test_verify_mismatch_exits_2(write_doc):
    doc = json.loads(runner.invoke(app, ["corpus", "emit", "pinched_torus"]).stdout)
    path = write_doc({**doc, "strata": [[]]}, "pinched.yaml")
    result = runner.invoke(app, ["verify", str(path), "--json"])
    assert result.exit_code == 2
    assert _json(result)["results"]["match"] is False


# ----- flatnorm -----
def test_flatnorm_with_oracle(write_doc):
    path = write_doc({"facets": [[0, 1, 2]]})
    result = runner.invoke(app, ["flatnorm", str(path), "--chain", TRIANGLE_BOUNDARY, "--oracle-bound", "1", "--json"])
    assert result.exit_code == 0, result.output
    results = _json(result)["results"]
    assert results["value"] == "1"
    assert results["mass"] == "3"
    assert results["oracle"] == "1"
    assert results["A"] == {"0-1-2": "1"}


def test_flatnorm_oracle_cap_from_env():
    result = runner.invoke(
        app,
        ["flatnorm", "corpus:torus", "--chain", '{"0-1": 1}', "--oracle-bound", "2"],
        env={"IH_DERHAM_ORACLE_CAP": "100"},
    )
    assert result.exit_code == 2
    assert "oracle_too_large:" in result.output


def test_flatnorm_bad_chain():
    result = runner.invoke(app, ["flatnorm", "corpus:sphere2", "--chain", '{"0-9": 1}'])
    assert result.exit_code == 1
    assert "validation_error:" in result.output


# ----- corpus -----
def test_corpus_list():
    result = runner.invoke(app, ["corpus", "list", "--json"])
    entries = {e["name"]: e for e in _json(result)["results"]}
    assert entries["pinched_torus"]["provenance"] == "derived"
    assert entries["torus"]["provenance"] == "known"


def test_corpus_emit_unknown():
    result = runner.invoke(app, ["corpus", "emit", "nope"])
    assert result.exit_code == 1
    assert "not_found:" in result.output


def test_emitted_document_reads_back_from_stdin():
    emitted = runner.invoke(app, ["corpus", "emit", "torus"]).stdout
    direct = _json(runner.invoke(app, ["homology", "corpus:torus", "--json"]))
    piped = _json(runner.invoke(app, ["homology", "-", "--json"], input=emitted))
    assert piped == direct


def test_log_level_is_validated():
    result = runner.invoke(app, ["--log-level", "chatty", "corpus", "list"])
    assert result.exit_code == 1
    assert "log level" in result.output


# ----- entry point -----
def test_main_usage_error_exits_1(monkeypatch):
    monkeypatch.setattr(sys, "argv", ["ih-derham", "no-such-command"])
    with pytest.raises(SystemExit) as exc:
        main()
    assert exc.value.code == 1


def test_main_propagates_domain_exit_code(monkeypatch):
    monkeypatch.setattr(sys, "argv", ["ih-derham", "check", "corpus:disk", "--json"])
    with pytest.raises(SystemExit) as exc:
        main()
    assert exc.value.code == 2


def test_main_success(monkeypatch):
    monkeypatch.setattr(sys, "argv", ["ih-derham", "corpus", "list"])
    with pytest.raises(SystemExit) as exc:
        main()
    assert exc.value.code == 0
