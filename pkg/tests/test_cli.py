import json
import subprocess
import sys

import pytest

from modcoh.cli import EXIT_BAD_INPUT, EXIT_FAILED, EXIT_OK, InputError, main, parse_box
from modcoh.verdict import Box


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_mo_generator(capsys):
    code, out, _ = run(capsys, "mo", "--ring", "x,y", "--f", "x^3*y^2")
    assert code == EXIT_OK and "generator: 1/(x^2*y)" in out


def test_mo_membership(capsys):
    code, out, _ = run(capsys, "mo", "--ring", "x", "--f", "1", "--test", "7")
    assert code == EXIT_OK and "7: member" in out
    code, out, _ = run(capsys, "mo", "--ring", "x", "--f", "x^2", "--test", "1/x^2", "--test", "1/x")
    assert "1/x^2: not a member" in out and "1/x: member" in out


def test_mo_json_and_spec_file(capsys, tmp_path):
    spec = tmp_path / "pair.json"
    spec.write_text(json.dumps({"variables": ["x", "y"], "factors": [["x", 3], ["x + y", 2]]}))
    code, out, _ = run(capsys, "mo", "--spec", str(spec), "--test", "1/(x^2*(x+y))", "--format", "json")
    data = json.loads(out)
    assert code == EXIT_OK
    assert data["generator"] == "1/(x^2*(x + y))"
    assert data["tests"][0]["member"] is True


def test_mo_random_sweep_records_seed(capsys):
    code, out, _ = run(capsys, "mo", "--ring", "x", "--f", "x", "--random", "50", "--seed", "9", "--format", "json")
    data = json.loads(out)
    assert data["config"]["seed"] == 9 and data["sweep"]["parameters"] == {"count": 50, "seed": 9}


def test_mo_dual(capsys):
    code, out, _ = run(capsys, "mo", "--ring", "t", "--f", "t", "--coeffs", "dual", "--test", "eps/t")
    assert code == EXIT_OK and "eps/t: member" in out and "generator: none" in out


@pytest.mark.parametrize("argv", [
    ["mo", "--ring", "x", "--f", "x^^2"],
    ["mo", "--ring", "x", "--f", "0"],
    ["mo", "--ring", "x"],
    ["mo", "--spec", "/nonexistent/pair.json"],
    ["cech", "pn", "--n", "0"],
    ["cech", "pn", "--n", "1", "--box", "3..1"],
    ["cech", "product", "--n", "1", "--f", "x1 + 1"],
    ["verify", "nope"],
])
def test_bad_input_exits_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_BAD_INPUT and err.startswith("modcoh:")


def test_parse_error_reports_position(capsys):
    code, _, err = run(capsys, "mo", "--ring", "x", "--f", "x^2", "--test", "1/x + $")
    assert code == EXIT_BAD_INPUT and "column 7" in err


def test_bad_spec_json(capsys, tmp_path):
    spec = tmp_path / "bad.json"
    spec.write_text('{"variables": ["x"],\n "modulus": }')
    code, _, err = run(capsys, "mo", "--spec", str(spec))
    assert code == EXIT_BAD_INPUT and "line 2" in err


def test_unknown_space_is_rejected(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["cech", "grassmannian"])
    assert exc.value.code == 2


def test_cech_examples(capsys):
    code, out, _ = run(capsys, "cech", "pn", "--n", "2", "--twist", "-3")
    assert code == EXIT_OK and "H^2: dim 1  basis: 1/(t0*t1*t2)" in out
    _, out, _ = run(capsys, "cech", "pn", "--n", "1", "--twist", "-1")
    assert "H^0: dim 0" in out and "H^1: dim 0" in out
    code, out, _ = run(capsys, "cech", "blowup", "--n", "1", "--twist", "1", "--box", "-4..4")
    assert code == EXIT_OK and "H^1: dim 0" in out
    code, out, _ = run(capsys, "cech", "product", "--n", "1", "--f", "x1^2", "--twist", "1", "--box", "2",
                       "--format", "json")
    data = json.loads(out)
    assert data["report"]["totals"] == {"0": 4, "1": 0}  # x1^k, -1 <= k <= 2, t-degree 0


def test_box_parsing(monkeypatch):
    assert parse_box("3", 2) == Box.symmetric(2, 3)
    assert parse_box("-1..2", 2) == Box(((-1, 2), (-1, 2)))
    assert parse_box("-1..2,0..0", 2) == Box(((-1, 2), (0, 0)))
    with pytest.raises(InputError):
        parse_box("1..2,3..4", 3)
    monkeypatch.setenv("MODCOH_BOX", "2")
    assert parse_box(None, 1) == Box.symmetric(1, 2)
    monkeypatch.setenv("MODCOH_BOX", "big")
    with pytest.raises(InputError):
        parse_box(None, 1)


def test_env_box_reaches_verify(capsys, monkeypatch):
    monkeypatch.setenv("MODCOH_BOX", "3")
    code, out, _ = run(capsys, "verify", "bupush", "--format", "json")
    data = json.loads(out)
    assert code == EXIT_OK and data["config"]["params"]["box_radius"] == 3
    assert data["verdicts"][0]["parameters"]["box"] == 3


def test_verify_examples(capsys):
    code, out, _ = run(capsys, "verify", "gabber")
    assert code == EXIT_OK and "dim H^1(E, O_E) = 1" in out
    code, out, _ = run(capsys, "verify", "nonreduced")
    assert code == EXIT_OK and "strict-inclusion-witnessed  witness: eps*t" in out


def test_counterexamples_command(capsys):
    code, out, _ = run(capsys, "counterexamples", "--format", "json")
    data = json.loads(out)
    assert code == EXIT_OK and data["ok"]
    assert [v["theorem"] for v in data["verdicts"]] == ["flatbc", "gabber", "nonreduced"]


def test_failed_theorem_exits_1(capsys, monkeypatch):
    import modcoh.theorems as th
    from modcoh.verdict import FAIL, TheoremVerdict

    monkeypatch.setitem(th.SUITE, "snc", lambda box, workers: TheoremVerdict("snc", {}, FAIL, witness="forced"))
    code, out, _ = run(capsys, "verify", "snc")
    assert code == EXIT_FAILED and "forced" in out


def test_json_output_is_byte_identical():
    cmd = [sys.executable, "-m", "modcoh", "verify", "cube", "snc", "--box", "3", "--format", "json"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd + ["--workers", "2"], capture_output=True, check=True).stdout
    assert first == second
    json.loads(first)
