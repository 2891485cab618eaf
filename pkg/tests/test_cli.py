import json
from fractions import Fraction
from pathlib import Path

import pytest

from cuweb import serialize as io
from cuweb.cli import EXIT_FAIL, EXIT_INPUT, EXIT_OK, main
from cuweb.fixtures import w5_system
from cuweb.systems import collapse_morphism, identity_morphism

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_validate_ok(capsys):
    code, rep = run_json(capsys, "validate", DATA / "w5_system.json")
    assert code == EXIT_OK and rep["holds"]
    assert rep["verdicts"][0]["details"]["canonical"] is True
    assert len(rep["inputs"]) == 1


def test_validate_reports_non_canonical(capsys, tmp_path):
    doc = json.loads((DATA / "t1_monoid.json").read_text(encoding="utf-8"))
    p = tmp_path / "compact.json"
    p.write_text(json.dumps(doc), encoding="utf-8")
    code, rep = run_json(capsys, "validate", p)
    # canonicity concerns content; layout does not matter
    assert code == EXIT_OK and rep["verdicts"][0]["details"]["canonical"] is True
    doc["comment"] = "not part of the schema"
    p.write_text(json.dumps(doc), encoding="utf-8")
    code, rep = run_json(capsys, "validate", p)
    assert code == EXIT_OK and rep["verdicts"][0]["details"]["canonical"] is False


def test_axiom_failure_has_witness(capsys):
    code, rep = run_json(capsys, "axioms", "--axiom", "AU", DATA / "w5_system.json")
    assert code == EXIT_FAIL
    assert rep["verdicts"][0]["witness"] == ["(1,1)", "(∞,0)", 1]


def test_axiom_success(capsys):
    code, rep = run_json(capsys, "axioms", "--axiom", "PC", "--axiom", "PD", DATA / "w5_system.json")
    assert code == EXIT_OK and [v["name"] for v in rep["verdicts"]] == ["PC", "PD"]


@pytest.mark.parametrize("argv", [
    ["validate", "no-such-file.json"],
    ["frobnicate"],
    ["axioms", "--axiom", "XX", str(DATA / "w5_system.json")],
    ["quotient", str(DATA / "w5_system.json"), "--ideal", "gen:nobody"],
    ["exact", str(DATA / "w5_system.json"), str(DATA / "t1_monoid.json")],
])
def test_input_errors(capsys, argv):
    assert main(argv) == EXIT_INPUT
    capsys.readouterr()


def test_malformed_json(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"cuweb_schema": 1,', encoding="utf-8")
    code, rep = run_json(capsys, "validate", p)
    assert code == EXIT_INPUT and rep["error"].startswith("ParseError")


def test_metric_identical_files(capsys):
    code, rep = run_json(capsys, "metric", DATA / "id_circle.json", DATA / "id_circle.json")
    assert code == EXIT_OK
    assert rep["dd_text"] == "[0, 1/8]"
    assert rep["report"]["dd"] == {"lower": "0", "upper": "1/8", "exact": False}
    code, rep = run_json(capsys, "metric", "--max-n", 2, DATA / "id_circle.json", DATA / "id_circle.json")
    assert rep["dd_text"] == "[0, 1/4]"


def test_metric_rotation_reports_bound_failure(capsys):
    code, rep = run_json(capsys, "metric", DATA / "rot_3_8.json", DATA / "id_circle.json")
    assert code == EXIT_FAIL
    verdicts = {v["name"]: v["holds"] for v in rep["verdicts"]}
    assert verdicts == {"dd<=d": False, "d<=2dd": True}
    assert rep["dd_text"] == "1/2" and rep["d_text"] == "(1/4, 3/8]"


def test_metric_table_against_formula(capsys):
    code, rep = run_json(capsys, "metric", "--max-n", 2, DATA / "rot_1_4_table.json", DATA / "id_circle.json")
    assert code == EXIT_OK
    assert Fraction(rep["report"]["dd"]["upper"]) == Fraction(1, 4)


def test_metric_infinite(capsys):
    code, rep = run_json(capsys, "metric", DATA / "neg_circle.json", DATA / "id_circle.json")
    assert rep["dd_text"] == "∞" and rep["report"]["dd"] == {"value": "inf", "exact": True}


def test_circle_prints_web_document(capsys):
    code, doc = run_json(capsys, "circle", "--n", 0, "--M", 2, "--B", 1)
    assert code == EXIT_OK and doc["kind"] == "web"
    # arc value a in 0..3 with point value <= a; full support needs both >= 1
    full = sum(a for a in range(1, 4))
    assert len(doc["pairs"]) == (10 - full) + 3 * full


def test_web_and_ideals(capsys):
    code, doc = run_json(capsys, "web", DATA / "w5_system.json")
    assert code == EXIT_OK and len(doc["pairs"]) == 5
    code, rep = run_json(capsys, "ideals", DATA / "w5_system.json")
    assert code == EXIT_OK and len(rep["ideals"]) >= 2


def test_quotient(capsys):
    code, rep = run_json(capsys, "quotient", DATA / "w5_system.json", "--ideal", "gen:(1,0)")
    assert code == EXIT_OK and rep["quotient"]["kind"] == "monoid"


def test_exact_forms(capsys, tmp_path):
    code, rep = run_json(capsys, "exact", DATA / "w5_system.json")
    assert code == EXIT_OK and rep["verdicts"][0]["details"]["split"]
    A = w5_system()
    f, g = tmp_path / "f.json", tmp_path / "g.json"
    f.write_text(io.dumps(io.to_document(identity_morphism(A))), encoding="utf-8")
    g.write_text(io.dumps(io.to_document(collapse_morphism(A))), encoding="utf-8")
    code, rep = run_json(capsys, "exact", f, g)
    assert code == EXIT_OK and rep["verdicts"][0]["details"]["exact"] == [True, True, True]
    assert main(["exact", str(g), str(f)]) == EXIT_INPUT
    capsys.readouterr()


def test_colimit(capsys):
    code, rep = run_json(capsys, "colimit", DATA / "chain_diagram.json", "--candidate", "padded")
    assert code == EXIT_OK
    assert {v["name"] for v in rep["verdicts"]} == {"L1L2", "continuity", "padded-rejected"}


def test_text_and_timing_flags(capsys):
    code, out = run(capsys, "axioms", "--axiom", "AU", DATA / "w5_system.json", "--text", "--timing")
    assert code == EXIT_FAIL
    assert out.splitlines()[0] == "axioms: FAIL" and "witness" in out and "time:" in out
    code, out = run(capsys, "--text", "validate", DATA / "w5_system.json")
    assert out.startswith("validate: ok")
    code, rep = run_json(capsys, "validate", DATA / "w5_system.json")
    assert "seconds" not in rep
