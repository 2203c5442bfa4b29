import io
import json

import jsonschema
import pytest

from prymlattice import cli
from prymlattice.prym import DecompositionReport
from prymlattice.schema import BATCH_SCHEMA, REPORT_SCHEMA

from conftest import CORPUS_DIR

COMMANDS = [
    ["validate"],
    ["genus"],
    ["eigenspaces"],
    ["homology"],
    ["prym"],
    ["verify"],
    ["product", "--n", "2"],
    ["rank-bound", "--n", "3"],
]


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def write(tmp_path, doc, name="cover.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def test_prym_table():
    code, out, _ = run("prym", "--input", str(CORPUS_DIR / "z2_6pts.json"))
    assert code == 0
    assert "Prym rank 4, dimension 2" in out


def test_rank_bound_table():
    code, out, _ = run("rank-bound", "--input", str(CORPUS_DIR / "z3_111.json"), "--n", "4")
    assert code == 0
    assert "bound ≥ 8" in out


def test_validate_sum_not_zero(tmp_path):
    path = write(tmp_path, {"group": {"invariant_factors": [2]}, "branch_points": [{"monodromy": [1]}] * 3})
    code, out, _ = run("validate", "--input", path)
    assert code == 1
    assert "SumNotZero" in out
    code, out, _ = run("validate", "--input", path, "--json")
    doc = json.loads(out)
    assert doc["status"] == "invalid" and doc["violations"][0]["kind"] == "SumNotZero"
    jsonschema.validate(doc, REPORT_SCHEMA)


@pytest.mark.parametrize(
    "doc, pointer",
    [
        ({"group": {"invariant_factors": [2]}}, "/"),
        ({"group": {"invariant_factors": [1]}, "branch_points": []}, "/group/invariant_factors/0"),
        ({"group": {"invariant_factors": [2, 3]}, "branch_points": []}, "/group/invariant_factors"),
        (
            {"group": {"invariant_factors": [2]}, "branch_points": [{"monodromy": [1, 0]}]},
            "/branch_points/0/monodromy",
        ),
        (
            {"group": {"invariant_factors": [2]}, "branch_points": [{"monodromy": ["x"]}]},
            "/branch_points/0/monodromy/0",
        ),
    ],
)
def test_malformed_documents_point_at_field(tmp_path, doc, pointer):
    path = write(tmp_path, doc)
    code, out, err = run("genus", "--input", path)
    assert code == 1
    assert err.startswith(f"error: {pointer}")
    code, out, _ = run("genus", "--input", path, "--json")
    report = json.loads(out)
    assert report["status"] == "error" and report["error"].startswith(pointer)


def test_unreadable_input(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text("{not json")
    assert run("genus", "--input", str(p))[0] == 1
    assert run("genus", "--input", str(tmp_path / "missing.json"))[0] == 1


def test_bad_arguments():
    assert run("product", "--input", "x.json")[0] == 1  # --n missing
    assert run("product", "--input", str(CORPUS_DIR / "z3_111.json"), "--n", "0")[0] == 1
    code, _, _ = run("rank-bound", "--input", str(CORPUS_DIR / "z3_111.json"), "--n", "2", "--end-rank", "1")
    assert code == 1


@pytest.mark.parametrize("argv", COMMANDS)
def test_json_reports_match_schema(argv):
    code, out, _ = run(*argv, "--input", str(CORPUS_DIR / "z3_111.json"), "--json")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, REPORT_SCHEMA)
    assert doc["command"] == argv[0] and doc["status"] == "ok"
    assert doc["input"]["document"]["group"]["invariant_factors"] == [3]


def test_homology_json_has_action():
    _, out, _ = run("homology", "--input", str(CORPUS_DIR / "z3_111.json"), "--json")
    result = json.loads(out)["result"]
    assert result["rank"] == 2 and result["action"] == [[[-1, 1], [-1, 0]]]
    _, table, _ = run("homology", "--input", str(CORPUS_DIR / "z3_111.json"))
    assert "[" not in table


def test_eigenspaces_and_verify_json():
    _, out, _ = run("eigenspaces", "--input", str(CORPUS_DIR / "klein_1100.json"), "--json")
    res = json.loads(out)["result"]
    assert res["consistent"] and res["total"] == res["genus"] == 1
    assert [row["d"] for row in res["characters"]] == [0, 0, 0, 1]
    _, out, _ = run("verify", "--input", str(CORPUS_DIR / "z2_6pts.json"), "--json")
    res = json.loads(out)["result"]
    assert res["passed"] and res["prym_rank"] == 4 and res["torsion_exponent"] == 1


def test_dir_mode(tmp_path):
    for name in ["z3_111.json", "z2_6pts.json"]:
        (tmp_path / name).write_text((CORPUS_DIR / name).read_text())
    (tmp_path / "bad.json").write_text(
        json.dumps({"group": {"invariant_factors": [2]}, "branch_points": [{"monodromy": [1]}]})
    )
    code, out, _ = run("genus", "--dir", str(tmp_path), "--json")
    docs = json.loads(out)
    jsonschema.validate(docs, BATCH_SCHEMA)
    assert [d["input"]["source"] for d in docs] == ["bad.json", "z2_6pts.json", "z3_111.json"]
    assert code == 1
    assert [d["status"] for d in docs] == ["invalid", "ok", "ok"]


def test_quiet():
    code, out, err = run("prym", "--input", str(CORPUS_DIR / "z2_6pts.json"), "--quiet")
    assert code == 0 and out == "" and err == ""


def test_failed_certificate_exits_2(monkeypatch):
    broken = DecompositionReport(4, 2, 1, 1, False, 1, None, False)
    monkeypatch.setattr(cli, "verify_decomposition", lambda L: broken)
    code, out, _ = run("verify", "--input", str(CORPUS_DIR / "z2_6pts.json"), "--json")
    assert code == 2
    assert json.loads(out)["status"] == "failed"


def test_output_is_deterministic():
    a = run("rank-bound", "--dir", str(CORPUS_DIR), "--n", "2", "--json")
    b = run("rank-bound", "--dir", str(CORPUS_DIR), "--n", "2", "--json")
    assert a == b and a[0] == 0
