import json

import pytest

from conftest import DATA
from omlogic import formats
from omlogic.cli import main
from omlogic.errors import FileFormatError
from omlogic.oml import mo
from omlogic.tvalgebra import find_isomorphism


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr().out


def test_check_algebra(capsys):
    code, out = run(capsys, "check-algebra", DATA / "mo2.alg")
    assert code == 0 and "(vi) compatible-all: false" in out
    code, out = run(capsys, "check-algebra", DATA / "o6.alg")
    assert code == 1 and "(v) orthomodularity: fails at (a,b)" in out
    code, _ = run(capsys, "check-algebra", "--boolean", DATA / "mo2.alg")
    assert code == 1
    code, _ = run(capsys, "check-algebra", "--boolean", DATA / "b8.alg")
    assert code == 0


def test_malformed_algebra(tmp_path, capsys):
    bad = tmp_path / "bad.alg"
    bad.write_text("format 1\ntype 2 2 1\nnames meet join neg\nelements 0 1\n"
                   "cover 0 1\ntable meet derived-meet\ntable join derived-join\n"
                   "table neg\n  0 -> 1\nend\n")
    assert main(["check-algebra", str(bad)]) == 2
    assert "not total" in capsys.readouterr().err
    bad.write_text("type 2 2 1\n")
    assert main(["check-algebra", str(bad)]) == 2
    assert main(["check-algebra", str(tmp_path / "missing.alg")]) == 2


def test_factorize(capsys):
    code, out = run(capsys, "factorize", DATA / "b8.alg")
    assert code == 0 and "factors: [2, 2, 2]" in out
    code, out = run(capsys, "factorize", DATA / "mo2.alg")
    assert "irreducible (center = {0,1})" in out
    code, out = run(capsys, "factorize", DATA / "one.alg")
    assert "trivial" in out
    assert main(["factorize", str(DATA / "o6.alg")]) == 2


def test_center_json(capsys):
    code, out = run(capsys, "center", "--json", DATA / "mo2x2.alg")
    assert code == 0 and json.loads(out)["center"] == ["(0|0)", "(0|1)", "(1|0)", "(1|1)"]


def test_enumerate(tmp_path, capsys):
    code, out = run(capsys, "enumerate", "6", "--out", tmp_path)
    assert code == 0 and "4 found" in out
    files = sorted(tmp_path.iterdir())
    assert len(files) == 4
    assert find_isomorphism(formats.read_algebra(files[-1]), mo(2)) is not None


def test_eval(capsys):
    code, out = run(capsys, "eval", DATA / "mo2.str", "P(m1) | ~P(m1)")
    assert code == 0 and "value: 1" in out
    code, out = run(capsys, "eval", "--json", DATA / "mo2.str", "forall x. P(x)")
    assert json.loads(out) == {"value": "0", "holds": False, "closure_order": []}
    code, out = run(capsys, "eval", "--json", DATA / "mo2.str", "Q(y) | P(x)")
    assert json.loads(out)["closure_order"] == ["x", "y"]
    assert main(["eval", str(DATA / "mo2.str"), "R(c)"]) == 2


def test_model_check(capsys):
    code, out = run(capsys, "model-check", DATA / "example.sem", DATA / "excluded_middle.gamma")
    assert code == 0 and out.count(": model") == 3
    code, _ = run(capsys, "model-check", DATA / "mo2.str", DATA / "mp.hyp")
    assert code == 1


def test_verify_irreducible(capsys):
    code, out = run(capsys, "verify-irreducible", DATA / "example.sem", DATA / "empty.gamma",
                    "P(c)")
    assert code == 0 and "agree" in out and "value a" in out
    code, _ = run(capsys, "verify-irreducible", DATA / "open.sem", DATA / "empty.gamma", "P(c)")
    assert code == 3
    code, _ = run(capsys, "verify-irreducible", "--saturate", DATA / "open.sem",
                  DATA / "empty.gamma", "P(c)")
    assert code == 0


def test_verify_trials_json_stable(capsys, monkeypatch):
    code, first = run(capsys, "verify-irreducible", "--trials", "40", "--seed", "5", "--json")
    code2, second = run(capsys, "verify-irreducible", "--trials", "40", "--seed", "5", "--json")
    assert code == code2 == 0 and first == second
    assert json.loads(first)["agree"] == 40
    monkeypatch.setenv("OMLOGIC_SEED", "9")
    _, third = run(capsys, "verify-irreducible", "--trials", "40", "--seed", "5", "--json")
    assert json.loads(third)["seed"] == 9


def test_proof_check(capsys):
    code, out = run(capsys, "proof-check", DATA / "toy.sys", DATA / "mp.hyp", DATA / "mp.proof")
    assert code == 0 and "accepted" in out and "sound on" in out
    code, out = run(capsys, "proof-check", DATA / "toy.sys", DATA / "mp.hyp",
                    DATA / "mp_bad_index.proof")
    assert code == 1 and "step 3" in out
    code, out = run(capsys, "proof-check", DATA / "unsound.sys", DATA / "empty.gamma",
                    DATA / "flip.proof")
    assert code == 1 and "soundness counterexample" in out


def test_json_inputs_round_trip(tmp_path, capsys):
    s = formats.read_structure(DATA / "mo2x2.str")
    path = tmp_path / "s.json"
    path.write_text(json.dumps(formats.structure_to_dict(s)))
    again = formats.read_structure(path)
    assert again.atomic_base == s.atomic_base and again.algebra.elements == s.algebra.elements
    code, out = run(capsys, "eval", "--json-in", path, "P(c)")
    assert "value: (a|1)" in out


def test_text_algebra_round_trip(tmp_path):
    a = formats.read_algebra(DATA / "o6.alg")
    path = tmp_path / "o6.alg"
    formats.write_algebra(a, path)
    b = formats.read_algebra(path)
    assert b.elements == a.elements and b._t == a._t


def test_proof_file_errors(tmp_path):
    d = formats.read_system(DATA / "toy.sys")
    bad = tmp_path / "p.proof"
    bad.write_text("2. P(c) ; hyp\n")
    with pytest.raises(FileFormatError):
        formats.read_proof(bad, d.lang)
    bad.write_text("1. P(c) ; because\n")
    with pytest.raises(FileFormatError) as e:
        formats.read_proof(bad, d.lang)
    assert e.value.line == 1
