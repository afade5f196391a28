import json
from pathlib import Path

import pytest

from tribekit.clan import ClanStructure
from tribekit.models.finset import FinSetModel
from tribekit.models.io import (
    LoadError,
    dump_span,
    dump_universe_spec,
    export_presentation,
    load_presentation,
    load_span,
    load_universe_spec,
)
from tribekit.models.universe import UniverseSpec
from tribekit.pi import PiTribeStructure
from tribekit.tribe import TribeStructure

DATA = Path(__file__).resolve().parent.parent / "demos" / "data"


def read(name):
    return (DATA / name).read_text()


@pytest.mark.parametrize("kind, cls", [
    ("clan", ClanStructure), ("tribe", TribeStructure), ("pi", PiTribeStructure),
])
def test_kinds(kind, cls):
    assert type(load_presentation(read("square.json"), kind)) is cls


def test_unknown_kind():
    with pytest.raises(ValueError):
        load_presentation(read("square.json"), "topos")


def test_invalid_json_reports_position():
    with pytest.raises(LoadError) as e:
        load_presentation('{"objects": [}')
    d = e.value.diagnostics[0]
    assert d["line"] == 1 and d["column"] > 1


def test_non_object_top_level():
    with pytest.raises(LoadError, match="expected a JSON object"):
        load_presentation("[1, 2]")


def test_missing_composite_names_the_pair():
    with pytest.raises(LoadError, match="not a category") as e:
        load_presentation(read("missing_composite.json"))
    assert e.value.diagnostics[0] == {
        "check": "totality", "witness": {"pair": ["a<=1", "0<=a"], "problem": "composite missing"},
    }


def test_missing_pullback_rejected_as_clan():
    with pytest.raises(LoadError, match="not a clan") as e:
        load_presentation(read("no_meet.json"))
    assert e.value.diagnostics[0]["check"] == "fibrations_carrable"
    # category laws alone are fine
    assert load_presentation(read("no_meet.json"), check_axioms=False)


def test_morphism_cap():
    with pytest.raises(LoadError, match="cap is 3"):
        load_presentation(read("square.json"), max_morphisms=3)


def test_missing_terminal_field():
    d = json.loads(read("square.json"))
    del d["terminal"]
    with pytest.raises(LoadError, match="terminal"):
        load_presentation(json.dumps(d))


def test_export_roundtrip():
    d = export_presentation(FinSetModel(1, include_empty=True))
    c = load_presentation(json.dumps(d))
    assert c.to_dict() == d


def test_export_of_unclosed_working_set_is_rejected():
    # 2x2 = 4 is outside FinSet(2), so the presented pullback is missing
    with pytest.raises(LoadError, match="not a clan"):
        load_presentation(json.dumps(export_presentation(FinSetModel(2))))


def test_span_roundtrip():
    P = load_span(read("P.json"))
    assert json.loads(dump_span(P)) == json.loads(read("P.json"))
    with pytest.raises(LoadError, match="missing"):
        load_span('{"I": []}')
    with pytest.raises(LoadError, match="outside its codomain"):
        load_span('{"I": ["i"], "E": ["e"], "B": ["b"], "J": ["j"], '
                  '"u": {"e": "x"}, "p": {"e": "b"}, "v": {"b": "j"}}')


def test_universe_spec_roundtrip():
    u = load_universe_spec(read("universe_micro.json"))
    assert load_universe_spec(dump_universe_spec(u)) == u
    assert load_universe_spec("{}") == UniverseSpec()
    with pytest.raises(LoadError, match="unknown universe field"):
        load_universe_spec('{"size": 3}')


def test_load_error_to_dict():
    e = LoadError("bad", [{"problem": "x"}])
    assert e.to_dict() == {"error": "bad", "diagnostics": [{"problem": "x"}]}
