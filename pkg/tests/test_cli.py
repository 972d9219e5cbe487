"""CLI surface: exit codes, JSON reports, schema conformance, determinism."""

from __future__ import annotations

import json
from pathlib import Path

from jsonschema import Draft202012Validator

from ybt.cli import dispatch
from ybt.formats import load_operator, operator_to_obj, pretty_dumps, save_operator
from ybt import apply_twist, catalog, fuse_r, identity

SCHEMA_PATH = Path(__file__).resolve().parents[1] / "src" / "ybt" / "data" / "report.schema.json"
VALIDATOR = Draft202012Validator(json.loads(SCHEMA_PATH.read_text()))


def run(capsys, *argv):
    code = dispatch([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    report = json.loads(out)
    VALIDATOR.validate(report)
    return code, report, err


def test_verify_ybe_catalog_ref(capsys):
    code, report, _ = run_json(capsys, "verify-ybe", "catalog:perm")
    assert code == 0
    assert report["residuals"]["ybe"] == "0"
    assert report["verdict"] is True


def test_verify_ybe_exit_one_on_failure(capsys, tmp_path):
    bad = identity(2, 2) + identity(2, 2)
    rows = [list(r) for r in bad.rows]
    rows[0][1] = rows[1][2] = rows[0][0]
    from ybt import Operator

    op = Operator.from_rows(2, 2, rows)
    path = tmp_path / "bad.json"
    save_operator(op, path)
    code, report, _ = run_json(capsys, "verify-ybe", path)
    assert code == 1
    assert report["verdict"] is False
    assert report["residuals"]["ybe"] != "0"


def test_check_pair_pipeline(capsys):
    code, report, _ = run_json(
        capsys, "check-pair", "catalog:identity", "--pair", "catalog:jordanian"
    )
    assert code == 0
    for key in ("cond2", "cond3", "aux", "ybe_r_twisted"):
        assert report["residuals"][key] == "0"


def test_check_pair_from_files(capsys, tmp_path):
    entry = catalog.get("jordanian")
    fp, gp = tmp_path / "f.json", tmp_path / "g.json"
    save_operator(entry.twist.f, fp)
    save_operator(entry.twist.g, gp)
    code, report, _ = run_json(
        capsys, "check-pair", "catalog:identity", "--pair", f"{fp},{gp}"
    )
    assert code == 0 and report["verdict"] is True


def test_check_split_both_variants(capsys):
    code, report, _ = run_json(
        capsys, "check-split", "catalog:six_vertex", "catalog:six_vertex",
        "--variant", "A",
    )
    assert code == 0
    assert set(report["residuals"]) == {"A1", "A2", "A3"}
    code, report, _ = run_json(
        capsys, "check-split", "catalog:jordanian", "catalog:jordanian",
        "--variant", "B",
    )
    assert code == 0
    assert set(report["residuals"]) == {"B1", "B2"}


def test_twist_writes_output(capsys, tmp_path):
    out = tmp_path / "twisted.json"
    code, report, _ = run_json(
        capsys, "twist", "catalog:identity", "catalog:jordanian", "-o", out
    )
    assert code == 0
    assert report["outputs"]["path"] == str(out)
    entry = catalog.get("jordanian")
    assert load_operator(out) == apply_twist(entry.r, entry.twist.f)


def test_fuse_embeds_operator(capsys):
    code, report, _ = run_json(capsys, "fuse", "catalog:six_vertex", "-m", 2, "-n", 1)
    assert code == 0
    entry = catalog.get("six_vertex")
    assert report["outputs"]["operator"] == operator_to_obj(fuse_r(entry.r, 2, 1))


def test_rsym_reports_dimension(capsys):
    code, report, _ = run_json(capsys, "rsym", "catalog:perm", "-n", 2)
    assert code == 0
    assert report["outputs"]["dimension"] == 16


def test_intertwine_no_certificate_exits_one(capsys):
    code, report, _ = run_json(
        capsys, "intertwine", "catalog:identity", "catalog:perm",
        "-n", 2, "--budget", 50, "--seed", 7,
    )
    assert code == 1
    assert report["verdict"] is False
    assert report["outputs"]["dimension"] == 12
    assert any("no invertible certificate" in note for note in report["notes"])


def test_intertwine_finds_certificate(capsys):
    code, report, _ = run_json(
        capsys, "intertwine", "catalog:six_vertex", "catalog:six_vertex",
        "-n", 2, "--budget", 5, "--seed", 0,
    )
    assert code == 0
    assert report["outputs"]["certificate"]["coefficients"]


def test_omega_matches_library(capsys):
    from ybt import omega_split_B

    code, report, _ = run_json(
        capsys, "omega", "catalog:jordanian", "-n", 3, "--variant", "B"
    )
    assert code == 0
    entry = catalog.get("jordanian")
    assert report["outputs"]["operator"] == operator_to_obj(
        omega_split_B(entry.twist.f, 3)
    )


def test_te1_with_catalog_components(capsys):
    code, report, _ = run_json(
        capsys, "te1", "catalog:jordanian", "-m", 2, "-n", 1, "-k", 1
    )
    assert code == 0
    assert report["residuals"]["te1"] == "0"


def test_te1_with_component_file(capsys, tmp_path):
    from ybt import f_components_from_omega, omega_split_B
    from ybt.formats import components_to_obj

    entry = catalog.get("jordanian")
    omegas = {j: omega_split_B(entry.twist.f, j) for j in (2, 3)}
    comps = {
        (m, n): f_components_from_omega(omegas, m, n)
        for m, n in ((1, 1), (1, 2), (2, 1))
    }
    path = tmp_path / "components.json"
    path.write_text(pretty_dumps(components_to_obj(comps)))
    code, report, _ = run_json(capsys, "te1", path, "-m", 1, "-n", 1, "-k", 1)
    assert code == 0 and report["residuals"]["te1"] == "0"


def test_catalog_list_and_get(capsys):
    code, report, _ = run_json(capsys, "catalog", "list")
    assert code == 0
    assert report["outputs"]["names"] == catalog.names()
    code, report, _ = run_json(capsys, "catalog", "get", "six_vertex?q=5/2")
    assert code == 0
    assert report["outputs"]["entry"]["params"]["q"] == "5/2"


def test_complex_backend_with_tolerance_flag(capsys, tmp_path):
    entry = catalog.get("six_vertex")
    rows = [[complex(float(v), 0.0) for v in row] for row in entry.r.rows]
    rows = [list(row) for row in rows]
    rows[1][2] += 1e-12
    from ybt import COMPLEX64, Operator

    op = Operator.from_rows(2, 2, rows, backend=COMPLEX64)
    path = tmp_path / "approx.json"
    save_operator(op, path)
    code, report, _ = run_json(capsys, "verify-ybe", path)
    assert code == 0 and report["verdict"] is True
    assert isinstance(report["residuals"]["ybe"], float)
    code, report, _ = run_json(capsys, "verify-ybe", path, "--tol", "1e-15")
    assert code == 1 and report["verdict"] is False


def test_malformed_file_exits_two(capsys, tmp_path):
    bad = tmp_path / "broken.json"
    bad.write_text('{"scalar": "rational", "site_dim": 2,')
    code, out, err = run(capsys, "verify-ybe", bad)
    assert code == 2
    assert out == ""
    assert "broken.json" in err and ":1:" in err


def test_semantic_file_error_exits_two(capsys, tmp_path):
    bad = tmp_path / "short.json"
    bad.write_text('{"scalar": "rational", "site_dim": 2, "legs": 2, "rows": [["1"]]}')
    code, out, err = run(capsys, "verify-ybe", bad)
    assert code == 2
    assert "rows" in err


def test_usage_errors_exit_two(capsys):
    assert run(capsys, "verify-ybe")[0] == 2
    assert run(capsys, "no-such-command")[0] == 2
    assert run(capsys, "catalog", "get", "nope")[0] == 2


def test_help_exits_zero(capsys):
    assert run(capsys, "--help")[0] == 0


def test_quiet_suppresses_summary(capsys):
    _, _, err = run(capsys, "verify-ybe", "catalog:perm", "--quiet")
    assert err == ""
    _, _, err = run(capsys, "verify-ybe", "catalog:perm")
    assert "verify-ybe" in err


def test_reports_are_byte_deterministic(capsys):
    invocations = [
        ("verify-ybe", "catalog:six_vertex"),
        ("check-pair", "catalog:identity", "--pair", "catalog:jordanian"),
        ("intertwine", "catalog:identity", "catalog:perm", "-n", 2,
         "--budget", 10, "--seed", 7),
        ("rsym", "catalog:identity", "-n", 2),
        ("catalog", "list"),
    ]
    for argv in invocations:
        first = run(capsys, *argv)
        second = run(capsys, *argv)
        assert first[1] == second[1]
        assert first[0] == second[0]
