"""CLI exit codes, output schemas and golden reports for the catalog."""
import io
import json
import sys
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

import pytest

from gradalg import catalog
from gradalg.algebra import GradedAlgebra
from gradalg.cli import main

GOLDEN = Path(__file__).parent / "golden"


def run(*args):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main([str(a) for a in args])
    return code, out.getvalue(), err.getvalue()


def golden_cases():
    cases = []
    for name in catalog.names():
        e = catalog.get(name)
        ref = f"catalog:{name}"
        cases.append((f"{name}.classify", ["classify", ref, "--format", "json"]))
        cases.append((f"{name}.codim", ["codim", ref, "--n", "3", "--mode", "plain", "--format", "json"]
                      + ([] if e.algebra.claims_associative else ["--nonassoc"])))
        if e.algebra.claims_associative:
            cases.append((f"{name}.structure", ["structure", ref, "--format", "json"]))
            cases.append((f"{name}.cochar", ["cochar", ref, "--n", "3", "--mode", "plain", "--format", "json"]))
        for action in e.actions:
            aref = f"{ref}:{action}"
            cases.append((f"{name}.action.{action}", ["action", ref, aref, "--format", "json"]))
            if e.algebra.claims_associative:
                cases.append((f"{name}.structure.{action}", ["structure", ref, "--action", aref, "--format", "json"]))
            cases.append((f"{name}.equality.{action}", ["equality", ref, "--action", aref, "--n", "2",
                                                         "--format", "json"]))
    return cases


@pytest.mark.parametrize("key,args", golden_cases(), ids=[k for k, _ in golden_cases()])
def test_golden_reports(key, args):
    code, out, _ = run(*args)
    assert code == 0
    assert out == (GOLDEN / f"{key}.json").read_text()
    json.loads(out)


def test_reports_are_deterministic_across_threads():
    base = run("cochar", "catalog:m11", "--n", "3", "--format", "json")
    assert run("cochar", "catalog:m11", "--n", "3", "--format", "json", "--threads", "3") == base
    assert run("structure", "catalog:qs3", "--seed", "5", "--format", "json") == \
        run("structure", "catalog:qs3", "--seed", "5", "--format", "json")


def test_verify_exit_codes(tmp_path):
    path = tmp_path / "ut2.json"
    code, out, _ = run("catalog", "export", "ut2")
    assert code == 0
    path.write_text(out)
    assert run("verify", path)[0] == 0
    assert GradedAlgebra.from_json(json.loads(out)).to_json() == catalog.get("ut2").algebra.to_json()

    data = catalog.get("ut2_graded").algebra.to_json()
    data["degrees"] = ["0", "1", "1"]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    code, out, err = run("verify", bad, "--format", "json")
    assert code == 2 and "refused" in err
    assert json.loads(out)["grading"]["violations"]

    broken = tmp_path / "broken.json"
    broken.write_text("{")
    assert run("verify", broken)[0] == 3
    assert run("verify", tmp_path / "missing.json")[0] == 3
    assert run("verify", "catalog:nope")[0] == 3


def test_pseudo_command(tmp_path):
    m = tmp_path / "d.json"
    m.write_text(json.dumps({"matrix": [[2, 0, 0, 0], [0, 3, 0, 0], [0, 0, 5, 0], [0, 0, 0, 2]]}))
    code, out, _ = run("pseudo", "catalog:m11", m, "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["certified"]
    assert all(p["beta"] == "0" for p in data["pairs"])

    ident = tmp_path / "id.json"
    ident.write_text(json.dumps([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]))
    code, out, _ = run("pseudo", "catalog:m2", ident, "--format", "json")
    assert code == 0
    assert all(t["matrix"] in ([["1"]], [["1", "0"], ["0", "1"]]) for t in json.loads(out)["tau"])

    generic = tmp_path / "g.json"
    generic.write_text(json.dumps({"matrix": [[1, 2, 0, 0], [0, 1, 0, 1], [0, 0, 1, 0], [3, 0, 0, 1]]}))
    code, out, _ = run("pseudo", "catalog:m2", generic, "--format", "json")
    assert code == 2 and json.loads(out)["certified"] is False

    wrong = tmp_path / "w.json"
    wrong.write_text(json.dumps({"matrix": [[1, 0], [0, 1]]}))
    assert run("pseudo", "catalog:m2", wrong)[0] == 3


def test_spec_examples():
    code, out, _ = run("codim", "catalog:q1", "--n", "4", "--format", "json")
    assert code == 0 and json.loads(out)["c_n"] == 1
    code, out, _ = run("structure", "catalog:a0", "--format", "json")
    assert json.loads(out)["radical_basis_names"] == ["u", "v", "w"]
    code, out, _ = run("equality", "catalog:ut2_graded", "--n", "2")
    assert code == 0 and any(line.split() == ["equal", "True"] for line in out.splitlines())


def test_budget_exit_code():
    code, _, err = run("codim", "catalog:m2", "--n", "6", "--budget", "1000")
    assert code == 4 and "estimate 11796480" in err


def test_identity_command():
    code, out, _ = run("identity", "catalog:ut2_graded", "[x,y]", "--degrees", "x=0,y=0", "--format", "json")
    assert code == 0 and json.loads(out)["identity"] is True
    code, out, _ = run("identity", "catalog:m2", "[[x1,x2],x3]", "--format", "json")
    data = json.loads(out)
    assert data["identity"] is False and len(data["witness"]) == 3
    assert run("identity", "catalog:m11", "[x,y]")[0] == 3  # degrees missing
    assert run("identity", "catalog:m2", "[x,")[0] == 3
    assert run("identity", "catalog:m2", "x^rho - x", "--action", "catalog:m2:transpose")[0] == 3
    # skew-symmetric 2x2 matrices span a line, so they commute
    code, out, _ = run("identity", "catalog:m2", "[x - x^t, y - y^t]", "--action", "catalog:m2:transpose",
                       "--format", "json")
    assert json.loads(out)["identity"] is True


def test_action_command():
    code, out, _ = run("action", "catalog:m11", "catalog:m11:superinvolution", "--generalized", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["certified"] and data["generalized_action"] is False
    code, out, _ = run("action", "catalog:grassmann2", "catalog:grassmann2:parity", "--generalized",
                       "--format", "json")
    assert json.loads(out)["generalized_action"] is True
    assert run("action", "catalog:m11", "catalog:m11:nope")[0] == 3


def test_action_file_formats(tmp_path):
    e = catalog.get("m11")
    spec = e.actions["full"]
    gens = tmp_path / "gens.json"
    gens.write_text(json.dumps({"generators": [{"name": k, "matrix": m.to_json()} for k, m in spec.generators.items()],
                                "relations": [["t", "c", "t", "c"]]}))
    assert run("action", "catalog:m11", gens)[0] == 0
    span = tmp_path / "span.json"
    span.write_text(json.dumps(spec.span().to_json()))
    code, out, _ = run("codim", "catalog:m11", "--action", span, "--n", "2", "--format", "json")
    assert code == 0 and json.loads(out)["c_n"] == json.loads(
        run("codim", "catalog:m11", "--action", gens, "--n", "2", "--format", "json")[1])["c_n"]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"generators": [{"name": "t", "matrix": [[1]]}]}))
    assert run("action", "catalog:m11", bad)[0] == 3
    rel = tmp_path / "rel.json"
    rel.write_text(json.dumps({"generators": [{"name": "t", "matrix": spec.generators["t"].to_json()}],
                               "relations": [["t"]]}))
    assert run("action", "catalog:m11", rel)[0] == 2


def test_catalog_commands():
    code, out, _ = run("catalog", "list", "--format", "json")
    assert [r["name"] for r in json.loads(out)["entries"]] == catalog.names()
    code, out, _ = run("catalog", "export", "m11", "--action", "full")
    assert code == 0 and [g["name"] for g in json.loads(out)["generators"]] == ["t", "c"]
    assert run("catalog", "export", "m11", "--action", "zzz")[0] == 3


def test_usage_errors():
    assert run()[0] == 3
    assert run("codim", "catalog:q1", "--n", "0")[0] == 3
    assert run("codim", "catalog:q1", "--mode", "weird")[0] == 3


def test_table_format():
    code, out, _ = run("cochar", "catalog:ut2", "--n", "3")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split() == ["n", "3"]
    assert any(line.split()[:2] == ["partition", "mult"] for line in lines)


def regenerate():
    GOLDEN.mkdir(exist_ok=True)
    for key, args in golden_cases():
        code, out, err = run(*args)
        if code != 0:
            raise SystemExit(f"{key}: exit {code}: {err}")
        (GOLDEN / f"{key}.json").write_text(out)
    print(f"wrote {len(golden_cases())} golden reports")


if __name__ == "__main__" and "--regen" in sys.argv:
    regenerate()
