import pytest

from tribekit.models.fingpd import FinGpdModel, fingpd_model, invariant
from tribekit.models.universe import (
    UniverseError,
    UniverseSpec,
    build_seed,
    generate_universe,
)


def test_default_universe(universe):
    assert universe.complete
    assert universe.names == ["0", "1", "I", "d2", "B(Z2)", "2B(Z2)", "B(Z2xZ2)"]


def test_generation_is_deterministic():
    a = generate_universe(UniverseSpec())
    b = generate_universe(FinGpdModel(()), UniverseSpec())
    assert a.to_dict() == b.to_dict()
    assert a.log == b.log


def test_terminal_alone_is_closed():
    u = generate_universe(UniverseSpec(seeds=("1",)))
    assert u.names == ["1"] and u.complete


def test_objects_are_pairwise_non_isomorphic(universe):
    invs = [invariant(G) for G in universe.objects]
    assert len(set(invs)) == len(invs)


def test_cap_truncates_or_raises():
    u = generate_universe(UniverseSpec(max_objects=3))
    assert not u.complete and len(u.objects) == 3
    assert u.stopped_in.startswith("seed")
    with pytest.raises(UniverseError, match="cap of 3"):
        generate_universe(UniverseSpec(max_objects=3, strict=True))


def test_closure_without_operations_keeps_seeds():
    u = generate_universe(UniverseSpec(seeds=("1", "I", "B(Z3)"), closure=()))
    assert u.names == ["1", "I", "B(Z3)"]


def test_products_only():
    u = generate_universe(UniverseSpec(seeds=("1", "d2"), closure=("product",)))
    assert u.names == ["1", "d2"]  # d4 is too large


@pytest.mark.parametrize("text, name", [
    ("0", "0"), ("I", "I"), ("d3", "d3"), ("C3", "C3"), ("B(Z2)", "B(Z2)"),
    ("discrete(2)", "d2"), ("codiscrete(2)", "I"), ("delooping(4)", "B(Z4)"),
    ("I*B(Z2)", "IxB(Z2)"), ("B(Z2) * B(Z2)", "B(Z2xZ2)"),
])
def test_seed_grammar(text, name):
    assert build_seed(text).name == name


@pytest.mark.parametrize("text", ["J", "B(Z0)", "B(Z2", "I*", ""])
def test_bad_seeds(text):
    with pytest.raises(UniverseError):
        build_seed(text)


def test_oversized_seed_is_rejected():
    with pytest.raises(UniverseError, match="size caps"):
        generate_universe(UniverseSpec(seeds=("d4",)))


def test_spec_validation_and_roundtrip():
    with pytest.raises(UniverseError, match="closure"):
        UniverseSpec(closure=("coproduct",))
    with pytest.raises(UniverseError, match="positive"):
        UniverseSpec(max_objects=0)
    with pytest.raises(UniverseError, match="unknown universe field"):
        UniverseSpec.from_dict({"seedz": []})
    spec = UniverseSpec(seeds=("1",), strict=True)
    assert UniverseSpec.from_dict(spec.to_dict()) == spec


def test_generate_requires_spec():
    with pytest.raises(UniverseError):
        generate_universe({"seeds": ["1"]})


def test_fingpd_model_factory():
    m = fingpd_model()
    assert [X.name for X in m.objects][:3] == ["0", "1", "I"]
    m2 = fingpd_model(objects=[build_seed("1")])
    assert len(m2.objects) == 1
