import json

import pytest

from tribekit.report import FAIL, PASS, SKIPPED, Check, VerificationReport


def test_first_witness_wins():
    c = Check("x")
    c.fail({"n": 1})
    c.fail({"n": 2})
    assert c.status == FAIL and c.witness == {"n": 1}


def test_context_manager_records_even_on_error():
    rep = VerificationReport()
    with pytest.raises(RuntimeError):
        with rep.check("boom"):
            raise RuntimeError
    assert "boom" in rep and rep["boom"].status == PASS


def test_skipped_does_not_fail():
    rep = VerificationReport()
    with rep.check("a") as chk:
        chk.skip("nothing to do")
    assert rep.ok and rep["a"].status == SKIPPED


def test_record_and_failures():
    rep = VerificationReport()
    rep.record("good", True, witness="ignored")
    rep.record("bad", False, witness=[1, 2])
    assert not rep.ok
    assert [c.name for c in rep.failures] == ["bad"]
    assert rep["good"].witness is None
    with pytest.raises(KeyError):
        rep["missing"]


def test_extend_prefixes():
    inner = VerificationReport()
    inner.record("x", True)
    outer = VerificationReport()
    outer.extend(inner, prefix="suite/")
    assert [c.name for c in outer.checks] == ["suite/x"]


def test_json_is_timing_free_by_default():
    rep = VerificationReport()
    with rep.check("slow") as chk:
        chk.fail(witness=frozenset({1}))
    d = json.loads(rep.to_json())
    assert d == {"checks": [{"name": "slow", "status": "fail", "witness": "frozenset({1})"}]}
    assert "elapsed_ms" in json.loads(rep.to_json(timings=True))["checks"][0]


def test_summary_lines():
    rep = VerificationReport()
    rep.record("a", False, witness="w")
    assert "FAIL" in str(rep) and "w" in str(rep)
