import json
import os

import pytest

from hallalg.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_tables_default_quiver(capsys):
    code, out, _ = run(capsys, "tables", "--max-dim", "2")
    assert code == 0
    doc = json.loads(out)
    entry = doc["product"]["[d1.0#0],[d0.1#0]"]
    assert {e["class"]: e["coeff"] for e in entry} == \
        {"d1.1#0": "1/1", "d1.1#1": "1/1"}


def test_tables_bound_zero(capsys):
    code, out, _ = run(capsys, "tables", "--max-dim", "0")
    assert code == 0
    doc = json.loads(out)
    assert list(doc["product"]) == ["[d0.0#0],[d0.0#0]"]
    assert doc["product"]["[d0.0#0],[d0.0#0]"] == \
        [{"class": "d0.0#0", "coeff": "1/1"}]


def test_tables_q3_coproduct_row(capsys):
    code, out, _ = run(capsys, "tables", "--q", "3", "--max-dim", "2")
    assert code == 0
    doc = json.loads(out)
    rows = doc["coproduct"]["[d1.1#1]"]
    lookup = {(e["left"], e["right"]): e["coeff"] for e in rows}
    assert lookup[("d0.1#0", "d1.0#0")] == "2/1"


def test_tables_csv(capsys, tmp_path):
    out_file = tmp_path / "tables.csv"
    code, _, _ = run(capsys, "tables", "--max-dim", "1", "--format", "csv",
                     "--out", str(out_file))
    assert code == 0
    lines = out_file.read_text().splitlines()
    assert lines[0] == "table,left,right,class,coeff"
    assert any(line.startswith("product,") for line in lines[1:])
    assert any(line.startswith("coproduct,") for line in lines[1:])


def test_verify_green_exits_zero(capsys):
    code, out, err = run(capsys, "verify", "green", "--q", "2", "--max-dim", "3")
    assert code == 0
    doc = json.loads(out)
    assert doc["ok"] is True
    assert doc["suites"][0]["check"] == "green"
    assert doc["suites"][0]["failures"] == []
    assert "[green]" in err  # timings on stderr only


def test_verify_all_bound_zero(capsys):
    code, out, _ = run(capsys, "verify", "all", "--q", "2", "--max-dim", "0")
    assert code == 0
    assert json.loads(out)["ok"] is True


def test_verify_engine_seeded(capsys):
    code, out, _ = run(capsys, "verify", "engine", "--seed", "7")
    assert code == 0
    doc = json.loads(out)
    rep = doc["suites"][0]
    assert rep["seed"] == 7
    assert rep["instances"] == 80
    assert rep["failures"] == []


def test_verify_only_replay(capsys):
    inst = "green:d1.0#0|d0.1#0|d1.0#0|d0.1#0"
    code, out, _ = run(capsys, "verify", "green", "--only", inst)
    assert code == 0
    doc = json.loads(out)
    assert doc["suites"][0]["instances"] == 1


def test_verify_deterministic_output(tmp_path, capsys):
    p1 = tmp_path / "r1.json"
    p2 = tmp_path / "r2.json"
    assert run(capsys, "verify", "algebra", "--max-dim", "2", "--out", str(p1))[0] == 0
    assert run(capsys, "verify", "algebra", "--max-dim", "2", "--out", str(p2))[0] == 0
    assert p1.read_bytes() == p2.read_bytes()


def test_usage_errors_exit_two(capsys):
    assert run(capsys, "verify", "nosuchsuite")[0] == 2
    assert run(capsys, "tables", "--q", "4")[0] == 2
    assert run(capsys, "tables", "--max-dim", "-1")[0] == 2
    assert run(capsys, "tables", "--quiver", "/nonexistent/path.json")[0] == 2
    assert run(capsys, "groupoid", "card", "/nonexistent.json")[0] == 2


def test_budget_error_exits_two(capsys):
    code, _, err = run(capsys, "tables", "--max-dim", "3", "--budget", "2")
    assert code == 2
    assert "budget" in err


def test_groupoid_card_bundled(capsys):
    code, out, _ = run(capsys, "groupoid", "card", "discrete-3")
    assert code == 0 and out.strip() == "3/1"
    code, out, _ = run(capsys, "groupoid", "card", "finite-sets-5")
    assert code == 0 and out.strip() == "163/60"


def test_groupoid_card_malformed(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"objects": 1, "morphisms": [{"src": 0}], "compose": [[0]]}')
    code, _, err = run(capsys, "groupoid", "card", str(bad))
    assert code == 2
    assert "morphisms[0]" in err


def test_groupoid_pullback_discrete(tmp_path, capsys):
    from hallalg import groupoids as gpd
    A, B, X = (gpd.discrete_groupoid(n) for n in (3, 2, 2))
    f = gpd.GroupoidFunctor(A, X, [0, 1, 0], [0, 1, 0])
    g = gpd.GroupoidFunctor(B, X, [0, 1], [0, 1])
    for path, fun in ((tmp_path / "f.json", f), (tmp_path / "g.json", g)):
        doc = {"source": gpd.groupoid_to_json(fun.source),
               "target": gpd.groupoid_to_json(fun.target),
               "objects": list(fun.obj_map), "morphisms": list(fun.mor_map)}
        path.write_text(json.dumps(doc))
    out_g = tmp_path / "pullback.json"
    code, out, _ = run(capsys, "groupoid", "pullback", str(tmp_path / "f.json"),
                       str(tmp_path / "g.json"), "--out", str(out_g))
    assert code == 0
    doc = json.loads(out)
    assert doc["objects"] == 3 and doc["cardinality"] == "3/1"
    from hallalg.groupoids import groupoid_from_json
    assert groupoid_from_json(json.loads(out_g.read_text())).cardinality() == 3


def test_groupoid_degroupoidify(tmp_path, capsys):
    from hallalg import groupoids as gpd
    pt = gpd.discrete_groupoid(1)
    a = gpd.group_groupoid(gpd.cyclic_table(2))
    leg = gpd.GroupoidFunctor(a, pt, [0], [0, 0])
    span = gpd.ConcreteSpan(a, leg, leg)
    path = tmp_path / "span.json"
    path.write_text(json.dumps(gpd.span_to_json(span)))
    code, out, _ = run(capsys, "groupoid", "degroupoidify", str(path))
    assert code == 0
    doc = json.loads(out)
    assert doc["entries"] == [["1/2"]]


def test_verify_failure_exits_one(capsys, monkeypatch):
    # force a mathematical failure to confirm the exit-code contract
    import hallalg.verify as verify_mod

    def broken(ctx, hall, max_dim, only=None):
        return {"check": "green", "instances": 1,
                "failures": ["green:forced: residual 1/1"],
                "scope_note": "forced"}

    monkeypatch.setattr(verify_mod, "suite_green", broken)
    code, out, _ = run(capsys, "verify", "green")
    assert code == 1
    doc = json.loads(out)
    assert doc["ok"] is False


def test_bundled_quivers_load(capsys):
    for name in ("a2", "a3-linear", "a3-source", "d4"):
        code, out, _ = run(capsys, "verify", "gabriel", "--quiver", name,
                           "--max-dim", "2")
        assert code == 0
