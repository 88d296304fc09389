import json

import pytest

from cohpow import interp
from cohpow.cli import main
from cohpow.core import Character, EquivalenceSpec, TwoToOneSpec, spec_to_json
from cohpow.interp import Const, Input


@pytest.fixture
def spec_file(tmp_path):
    def write(spec, name="spec.json"):
        p = tmp_path / name
        p.write_text(json.dumps(spec_to_json(spec)))
        return str(p)
    return write


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_unbounded_equivalence(spec_file, capsys):
    path = spec_file(EquivalenceSpec(character=Character.every_size()), "eq_unbounded.json")
    code, out, _ = run(["classify", "--spec", path], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["schema_version"] == "1"
    assert doc["isomorphic_to_original"] == "no"
    assert "S3.unbounded-char" in doc["citations"]


def test_classify_batch(spec_file, tmp_path, capsys):
    spec_file(EquivalenceSpec(character=Character.of({2: 1})), "a.json")
    spec_file(TwoToOneSpec(cycle_character=Character.of({1: 1})), "b.json")
    code, out, _ = run(["classify", "--batch", str(tmp_path)], capsys)
    verdicts = [r["isomorphic_to_original"] for r in json.loads(out)["reports"].values()]
    assert code == 0 and verdicts == ["yes", "no"]


def test_malformed_spec_is_a_usage_error(tmp_path, capsys):
    bad = tmp_path / "malformed.json"
    bad.write_text(json.dumps({"kind": "equivalence", "character": [{"k": 0, "count": 1}]}))
    code, _, err = run(["classify", "--spec", str(bad)], capsys)
    assert code == 2 and "$.character[0].k" in err
    bad.write_text("{not json")
    assert run(["classify", "--spec", str(bad)], capsys)[0] == 2


def test_unknown_subcommand_and_bad_stage(spec_file, capsys):
    assert run(["frobnicate"], capsys)[0] == 2
    path = spec_file(EquivalenceSpec(character=Character.of({2: 1})))
    assert run(["realize", "--spec", path, "--stage", "0"], capsys)[0] == 2


def test_realize_dump(spec_file, capsys):
    path = spec_file(EquivalenceSpec(character=Character.of({2: 1})))
    code, out, _ = run(["realize", "--spec", path, "--stage", "5"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["closed"] and doc["axioms"]["value"] == "true"
    assert doc["dump"] == ["elem 0", "elem 2", "E 0 2"]


def test_witness_report(spec_file, tmp_path, capsys):
    path = spec_file(TwoToOneSpec(cycle_character=Character.of({1: 1})))
    report = tmp_path / "report.json"
    code, _, _ = run(["witness", "--spec", path, "--m-max", "2", "--k-max", "2", "--report", str(report)],
                     capsys)
    doc = json.loads(report.read_text())
    assert code == 0 and doc["pass"] and doc["family"] == "TwoToOneZChain"
    assert all(c["pass"] for c in doc["claims"])


def test_witness_without_applicable_family(spec_file, capsys):
    path = spec_file(EquivalenceSpec(character=Character.of({2: 1})))
    assert run(["witness", "--spec", path], capsys)[0] == 2


def test_check_sentence(spec_file, capsys):
    path = spec_file(TwoToOneSpec(cycle_character=Character.of({3: 2})))
    code, out, _ = run(["check", "--spec", path, "--stage", "4", "--sentence",
                        '{"shape": "AtLeastNKCycles", "n": 2, "k": 3}'], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["verdict"]["value"] == "true" and doc["complexity"] == "Sigma1"
    assert run(["check", "--spec", path, "--stage", "4", "--sentence", "{oops"], capsys)[0] == 2


def test_maximal_set_eqc_totalize_pipeline(tmp_path, capsys):
    run_file = tmp_path / "run.json"
    assert run(["maximal-set", "--family", "evens", "--stages", "400", "--out", str(run_file)], capsys)[0] == 0
    snap = json.loads(run_file.read_text())
    assert snap["schema_version"] == "1" and snap["markers"][:3] == [0, 2, 4]
    p1, p2 = tmp_path / "p1.json", tmp_path / "p2.json"
    p1.write_text(json.dumps(interp.to_json(Const(3))))
    p2.write_text(json.dumps(interp.to_json(Const(3))))
    code, out, _ = run(["eqc", "--run", str(run_file), "--p1", str(p1), "--p2", str(p2), "--window", "10"], capsys)
    assert code == 0 and json.loads(out)["verdict"] == "agree"
    p2.write_text(json.dumps(interp.to_json(Input())))
    code, out, _ = run(["totalize", "--run", str(run_file), "--program", str(p2), "--N", "20"], capsys)
    table = json.loads(out)["table"]
    assert code == 0 and [v for _, v, _ in table] == list(range(21))


def test_estate_log_dump(capsys):
    code, out, _ = run(["maximal-set", "--family", "evens,mult3", "--stages", "50", "--dump", "estate-log"],
                       capsys)
    assert code == 0 and "estate_log" in json.loads(out)


def test_outputs_are_deterministic(spec_file, tmp_path, capsys):
    path = spec_file(TwoToOneSpec(cycle_character=Character.of({1: 1})))
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["classify", "--spec", path, "--out", str(a)])
    main(["classify", "--spec", path, "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_suite_subcommand(tmp_path, capsys):
    # the slow criteria are exercised by the acceptance tests
    out = tmp_path / "summary.json"
    code = main(["suite", "--skip", "3", "--skip", "6", "--skip", "8", "--out", str(out)])
    doc = json.loads(out.read_text())
    assert code == 0 and doc["pass"]
    assert [c["criterion"] for c in doc["criteria"]] == [1, 2, 4, 5, 7, 9]
    assert "[PASS] 1." in capsys.readouterr().err
