import json
import subprocess
import sys
from pathlib import Path

import pytest

from tribekit.cli import EXIT_FAIL, EXIT_INPUT, EXIT_OK, main

DATA = Path(__file__).resolve().parent.parent / "demos" / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_check_valid_clan(capsys):
    code, out, _ = run(capsys, "check", "clan", DATA / "square.json")
    assert code == EXIT_OK and "PASS" in out


@pytest.mark.parametrize("kind", ["tribe", "pi"])
def test_check_valid_tribes(capsys, kind):
    assert run(capsys, "check", kind, DATA / "chain.json")[0] == EXIT_OK


def test_missing_composite_is_input_error(capsys):
    code, out, err = run(capsys, "check", "clan", DATA / "missing_composite.json")
    assert code == EXIT_INPUT
    assert "not a category" in err and '"a<=1"' in err


def test_missing_meet_fails_with_witness(capsys):
    code, out, _ = run(capsys, "--json", "check", "clan", DATA / "no_meet.json")
    assert code == EXIT_FAIL
    checks = {c["name"]: c for c in json.loads(out)["checks"]}
    assert checks["fibrations_carrable"]["witness"]["problem"] == "no pullback"


def test_unclosed_fibrations_fail_as_tribe(capsys):
    code, out, _ = run(capsys, "check", "tribe", DATA / "unclosed_fibrations.json", "--json")
    assert code == EXIT_FAIL
    failed = {c["name"] for c in json.loads(out)["checks"] if c["status"] == "fail"}
    assert {"base_changes_are_fibrations", "af_factorizations"} <= failed


def test_json_flag_position_does_not_matter(capsys):
    a = run(capsys, "--json", "check", "clan", DATA / "square.json")[1]
    b = run(capsys, "check", "--json", "clan", DATA / "square.json")[1]
    c = run(capsys, "check", "clan", DATA / "square.json", "--json")[1]
    assert a == b == c
    assert json.loads(a)["checks"]


def test_max_size(capsys):
    code, _, err = run(capsys, "check", "clan", DATA / "square.json", "--max-size", 3)
    assert code == EXIT_INPUT and "cap is 3" in err


def test_bad_invocations(capsys):
    assert run(capsys, "frobnicate")[0] == EXIT_INPUT
    assert run(capsys)[0] == EXIT_INPUT
    assert run(capsys, "check", "clan", DATA / "nope.json")[0] == EXIT_INPUT
    assert run(capsys, "--help")[0] == EXIT_OK


def test_slice(capsys):
    code, out, _ = run(capsys, "--json", "slice", DATA / "square.json", "--at", "a")
    assert code == EXIT_OK
    assert json.loads(out)["slice"]["objects"] == ["(0,0<=a)", "(a,a<=a)"]
    assert run(capsys, "slice", DATA / "square.json", "--at", "z")[0] == EXIT_INPUT


def test_factorize(capsys):
    code, out, _ = run(capsys, "--json", "factorize", DATA / "chain.json", "--map", "0<=m")
    assert code == EXIT_OK
    d = json.loads(out)
    assert d["fibration"] == "0<=m" and d["anodyne"] == "0<=0"
    assert run(capsys, "factorize", DATA / "chain.json", "--map", "zz")[0] == EXIT_INPUT


def test_hocat(capsys):
    code, out, _ = run(capsys, "--json", "hocat", DATA / "chain.json")
    assert code == EXIT_OK
    d = json.loads(out)
    assert len(d["morphisms"]) == 6 and d["quotient"]["0<=m"] == "0<=m"


def test_homotopic(capsys):
    assert run(capsys, "homotopic", DATA / "chain.json", "--f", "m<=m", "--g", "m<=m")[0] == EXIT_OK
    code, _, err = run(capsys, "homotopic", DATA / "chain.json", "--f", "0<=m", "--g", "m<=m")
    assert code == EXIT_INPUT and "not parallel" in err


def test_truncate(capsys):
    assert run(capsys, "truncate", DATA / "chain.json", "--map", "0<=m", "--level", 0)[0] == EXIT_OK
    assert run(capsys, "truncate", DATA / "chain.json", "--map", "0<=m", "--level", -2)[0] == EXIT_FAIL
    assert run(capsys, "truncate", DATA / "chain.json", "--map", "0<=m", "--level", -3)[0] == EXIT_INPUT


def test_poly_eval_and_compose(capsys):
    code, out, _ = run(capsys, "--json", "poly", "eval", DATA / "P.json", "--family", DATA / "family.json")
    assert code == EXIT_OK and json.loads(out)["profile"] == {"u": 2, "v": 2}
    code, out, _ = run(capsys, "--json", "poly", "compose", DATA / "P.json", DATA / "Q.json",
                       "--verify-upto", 2)
    assert code == EXIT_OK
    span = json.loads(out)["span"]
    assert span["I"] == ["i0", "i1"] and span["J"] == ["j0"]
    assert run(capsys, "poly", "compose", DATA / "P.json")[0] == EXIT_INPUT
    assert run(capsys, "poly", "compose", DATA / "P.json", DATA / "P.json")[0] == EXIT_INPUT
    assert run(capsys, "poly", "eval", DATA / "P.json")[0] == EXIT_INPUT


def test_gpd_universe(capsys):
    code, out, _ = run(capsys, "--json", "gpd", "universe")
    assert code == EXIT_OK and len(json.loads(out)["objects"]) == 7
    code, out, _ = run(capsys, "gpd", "universe", "--universe", DATA / "universe_micro.json")
    assert code == EXIT_OK
    code, out, _ = run(capsys, "--json", "gpd", "universe", "--cap", 2)
    assert json.loads(out)["complete"] is False
    code, _, err = run(capsys, "gpd", "universe", "--universe", '{"closure": ["sum"]}')
    assert code == EXIT_INPUT and "sum" in err


def test_gpd_check(capsys):
    code, out, _ = run(capsys, "--json", "gpd", "check", "--laws", "clan,anodyne,iscontr")
    assert code == EXIT_OK
    names = [c["name"] for c in json.loads(out)["checks"]]
    assert "anodyne/anodyne_procedures_agree" in names
    assert run(capsys, "gpd", "check", "--laws", "magic")[0] == EXIT_INPUT


def test_seed_controls_pair_sample(capsys, monkeypatch):
    monkeypatch.setenv("TRIBEKIT_SEED", "3")
    argv = ("--json", "gpd", "check", "--laws", "pi", "--pairs", 5,
            "--universe", DATA / "universe_micro.json")
    a = run(capsys, *argv)
    b = run(capsys, *argv)
    assert a[0] == EXIT_OK and a[1] == b[1]
    monkeypatch.setenv("TRIBEKIT_SEED", "three")
    assert run(capsys, *argv)[0] == EXIT_INPUT


def test_entry_point_module():
    r = subprocess.run([sys.executable, "-m", "tribekit.cli", "check", "clan", str(DATA / "terminal.json")],
                       capture_output=True, text=True)
    assert r.returncode == EXIT_OK, r.stderr
