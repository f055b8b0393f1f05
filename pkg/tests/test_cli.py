import json
import os

import jsonschema
import pytest

from knotss.cli import main

SCHEMA = json.load(open(os.path.join(os.path.dirname(__file__), "..", "src",
                                     "knotss", "data", "schema.json")))


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    return code, doc


def test_conf_dims(capsys):
    code, doc = run_json(capsys, "conf-dims", "--max-arity", "4",
                         "--field", "f2")
    assert code == 0 and doc["pass"]
    assert doc["schema"] == "knotss-output/1"
    assert doc["config"]["max_arity"] == 4
    row = doc["report"]["rows"][-1]
    assert row["dims"] == row["expected"] == [1, 6, 11, 6]


def test_conf_dims_tsv(capsys):
    code, out = run(capsys, "conf-dims", "--max-arity", "3", "--format", "tsv")
    assert code == 0
    assert out.splitlines() == ["1\t1", "2\t1\t1", "3\t1\t3\t2"]


def test_bad_field_is_usage_error(capsys):
    assert main(["conf-dims", "--field", "f7"]) == 2


def test_unknown_flag_is_usage_error(capsys):
    assert main(["ss-table", "--bogus"]) == 2


def test_ss_table(capsys):
    code, doc = run_json(capsys, "ss-table", "--max-arity", "4",
                         "--field", "f3", "--r-max", "3")
    assert code == 0 and doc["pass"]
    assert doc["report"]["nonzero_higher"] == []
    e2 = {p["r"]: p["slots"] for p in doc["report"]["pages"]}[2]
    assert e2["-4,2"]["dim"] == 1
    assert e2["-2,1"]["dim"] == 1


def test_verify_cycle_verdicts(capsys):
    cls = "g14*g23+g13*g24+g12*g34"
    code, doc = run_json(capsys, "verify-cycle", "--class", cls,
                         "--arity", "4", "--field", "f2")
    assert code == 0 and doc["report"]["is_d1_cycle"]
    assert not doc["report"]["is_d1_boundary"]
    code, doc = run_json(capsys, "verify-cycle", "--class", cls,
                         "--arity", "4", "--field", "q")
    assert code == 0 and not doc["report"]["is_d1_cycle"]
    assert main(["verify-cycle", "--class", "g1*bogus", "--arity", "4"]) == 2


def test_ledger_single_case(capsys):
    code, doc = run_json(capsys, "ledger", "--case", "ch2-cycles")
    assert code == 0 and doc["pass"]
    assert doc["report"]["cases"][0]["case"] == "ch2-cycles"
    assert main(["ledger", "--case", "nope"]) == 2


def test_ainf_check(capsys):
    code, doc = run_json(capsys, "ainf-check", "--max-arity", "4",
                         "--field", "q", "--mode", "signed")
    assert code == 0 and doc["report"]["failures"] == []


def test_triple_commute(capsys):
    code, doc = run_json(capsys, "triple-commute", "--n", "3")
    assert code == 0 and doc["report"]["counterexamples"] == []
    assert doc["report"]["checked"] > 0


def test_geom(capsys):
    code, doc = run_json(capsys, "geom", "--lemma", "collapse0",
                         "--samples", "30", "--seed", "5")
    assert code == 0
    (rep,) = doc["report"]["lemmas"]
    assert rep["lemma"] == "collapse0" and rep["seed"] == 5
    assert main(["geom", "--lemma", "nope"]) == 2


def test_seed_env_default(capsys, monkeypatch):
    monkeypatch.setenv("KNOTSS_SEED", "99")
    code, doc = run_json(capsys, "geom", "--lemma", "collapse0",
                         "--samples", "5")
    assert doc["config"]["seed"] == 99


def test_config_file_defaults_and_overrides(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\nmax-arity=3\nfield=f3\n")
    code, doc = run_json(capsys, "conf-dims", "--config", str(cfg))
    assert doc["config"]["max_arity"] == 3
    assert doc["config"]["field"] == "f3"
    code, doc = run_json(capsys, "conf-dims", "--config", str(cfg),
                         "--field", "q")
    assert doc["config"]["field"] == "q"  # explicit flags win


def test_output_file_and_determinism(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["geom", "--lemma", "condensed-image", "--samples", "20",
            "--seed", "3"]
    assert main(argv + ["--output", str(a)]) == 0
    assert main(argv + ["--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    jsonschema.validate(json.loads(a.read_text()), SCHEMA)
