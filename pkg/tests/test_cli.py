import json

import pytest

from sliceguard.cli import main

J2 = "T(2,3;2,5) # -T(2,5) # -T(2,3;2,7) # T(2,7)"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_obstruct_json(capsys):
    code, out, _ = run(capsys, "obstruct", J2, "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"] == "NOT_SLICE"
    assert doc["r"] == 5
    assert len(doc["metabolizers"]) == 2


def test_obstruct_human(capsys):
    code, out, _ = run(capsys, "obstruct", "T(2,3)")
    assert code == 0
    assert "NOT_ALGEBRAICALLY_SLICE" in out


def test_obstruct_inconclusive_exit_code(capsys):
    code, out, _ = run(capsys, "obstruct", J2, "--max-dim", "1")
    assert code == 2


def test_obstruct_verify_roundtrip(tmp_path, capsys):
    code, out, _ = run(capsys, "obstruct", J2, "--json")
    path = tmp_path / "cert.json"
    path.write_text(out)
    code, out2, _ = run(capsys, "obstruct", "--verify", str(path))
    assert code == 0
    assert "bit-for-bit" in out2


def test_obstruct_verify_detects_tampering(tmp_path, capsys):
    code, out, _ = run(capsys, "obstruct", J2, "--json")
    doc = json.loads(out)
    doc["metabolizers"][0]["witness"]["total_jump"] *= 3
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, "obstruct", "--verify", str(path))
    assert code == 1


def test_slice_check(capsys):
    code, out, _ = run(capsys, "slice-check", "T(2,3)")
    assert code == 0 and "NOT_ALGEBRAICALLY_SLICE" in out
    code, out, _ = run(capsys, "slice-check", J2, "--json")
    assert json.loads(out)["verdict"] == "ALGEBRAICALLY_SLICE"


def test_alex(capsys):
    code, out, _ = run(capsys, "alex", "2", "3")
    assert code == 0 and "t^2" in out


def test_talex(capsys):
    code, out, _ = run(capsys, "talex", "2", "3", "1,2")
    assert code == 0 and "t" in out
    code, out, _ = run(capsys, "talex", "2", "3", "0,0", "--surgery", "--json")
    doc = json.loads(out)
    assert doc["variant"] == "surgery"


def test_characters(capsys):
    code, out, _ = run(capsys, "characters", "2", "3", "--json")
    assert json.loads(out)["characters"] == [[0, 0], [1, 2], [2, 1]]


def test_metabolizers(capsys):
    code, out, _ = run(capsys, "metabolizers", "2", "5", "--json")
    assert json.loads(out)["metabolizers"] == [[[1, 1]], [[1, 4]]]


def test_signature(capsys):
    code, out, _ = run(capsys, "signature", "2", "3", "1/2", "--json")
    assert json.loads(out)["signature"] == -2
    code, out, _ = run(capsys, "signature", "2", "3", "--jumps", "--json")
    assert json.loads(out)["jumps"] == {"1/6": -2, "5/6": 2}


def test_homology(capsys):
    code, out, _ = run(capsys, "homology", "3", "2", "3", "--json")
    doc = json.loads(out)
    assert doc["divisors"] == [2, 2]
    assert doc["module"]["deck_action"] == [[1, 1], [1, 0]]


def test_input_errors_exit_1(capsys):
    code, _, err = run(capsys, "obstruct", "T(2,4)")
    assert code == 1 and "error" in err
    code, _, err = run(capsys, "signature", "2", "3", "1/6")
    assert code == 1
    code, _, err = run(capsys, "signature", "2", "3")
    assert code == 1
