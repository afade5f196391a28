import pytest

from corruption import corruptions
from tribekit.clan import (
    CLAN_CHECKS,
    ClanError,
    ClanStructure,
    RemarkedClan,
    SliceObject,
    SpanData,
    arrow_clan,
    base_change,
    compose_spans,
    fiber_of,
    identity_morphism,
    identity_span,
    is_cartesian_projection,
    is_reedy_fibrant,
    materialize,
    poset_clan,
    sigma_along,
    slice_clan,
    smallest_clan,
    span_clan,
    verify_clan,
    verify_clan_morphism,
    verify_generic_element,
    verify_sigma_adjunction,
)
from tribekit.fincat import SquareData
from tribekit.models.finset import FinSetModel, finmap


def test_poset_clan_shape(square):
    assert square.terminal == "1"
    assert len(list(square.morphisms())) == 9
    assert square.hom("a", "b") == ()
    assert verify_clan(square).ok


def test_poset_clan_rejects_cycles_and_missing_top():
    with pytest.raises(ClanError, match="identified"):
        poset_clan(["x", "y"], [("x", "y"), ("y", "x")])
    with pytest.raises(ClanError, match="no top"):
        poset_clan(["x", "y"], [])


def test_order_without_meets_is_not_a_clan():
    c = poset_clan(["1", "a", "b"], [("a", "1"), ("b", "1")])
    rep = verify_clan(c)
    assert rep["fibrations_carrable"].witness["problem"] == "no pullback"


def test_structure_validation(square):
    with pytest.raises(ClanError, match="terminal"):
        ClanStructure(square.presentation, "nowhere", [])
    with pytest.raises(Exception, match="unknown morphism"):
        ClanStructure(square.presentation, "1", ["zz"])


def test_checks_selector(square):
    rep = verify_clan(square, checks=["terminal_object"])
    assert [c.name for c in rep.checks] == ["terminal_object"]
    with pytest.raises(ValueError, match="unknown clan check"):
        verify_clan(square, checks=["associativity"])


@pytest.mark.parametrize("instance", ["finset", "gpd"])
def test_each_corruption_trips_its_axiom(instance, gpd):
    c = FinSetModel(3) if instance == "finset" else gpd
    found = corruptions(c)
    assert set(found) == set(CLAN_CHECKS)
    for name, bad in found.items():
        rep = verify_clan(bad, checks=[name])
        assert rep[name].failed and rep[name].witness is not None, name


def test_unmarked_base_change_is_caught_by_full_run(square):
    # 0 <= a is the base change of b <= 1 along a <= 1
    bad = RemarkedClan(square, unmark=["0<=a"])
    rep = verify_clan(bad)
    assert [c.name for c in rep.failures] == ["base_changes_are_fibrations"]


def test_materialize_keeps_structure():
    m = FinSetModel(1, include_empty=True)
    c = materialize(m)
    assert set(c.objects) == {"0", "1"}
    assert verify_clan(c).ok
    assert c.labels[1] == "1"


def test_smallest_clan_marks_projections(square):
    s = smallest_clan(square.presentation, [square])
    # x <= y is the projection y ∧ x -> y, so every map is a cartesian projection
    assert s.fibration_ids == square.fibration_ids
    assert verify_clan(s).ok
    assert s.report.ok


def test_cartesian_projection_in_finite_sets():
    m = FinSetModel(4)
    assert is_cartesian_projection(m, finmap(4, 2, [0, 0, 1, 1]))
    assert not is_cartesian_projection(m, finmap(3, 2, [0, 0, 1]))


def test_slices(square):
    E = slice_clan(square, "a")
    assert E.terminal == SliceObject("a", "a<=a")
    assert [o.total for o in E.objects] == ["0", "a"]
    assert verify_clan(E).ok
    with pytest.raises(ClanError, match="unknown object"):
        slice_clan(square, "z")


def test_slices_of_finite_sets():
    m = FinSetModel(3)
    E = slice_clan(m, 2)
    # fibrations X -> 2 with X <= 3: 2 + 4 + 8
    assert len(E.objects) == 14
    assert verify_clan(E, checks=["terminal_object", "maps_to_terminal_are_fibrations"]).ok


def test_base_change_and_sum_in_finite_sets():
    m = FinSetModel(3)
    f = finmap(1, 2, [1])
    F = base_change(m, f)
    X = SliceObject(3, finmap(3, 2, [0, 1, 1]))
    assert F.ob(X).total == 2
    assert verify_clan_morphism(F, objects=[X, SliceObject(2, m.identity(2))]).ok
    g = finmap(2, 1, [0, 0])
    assert verify_sigma_adjunction(m, g).ok
    S = sigma_along(m, g, verify=True)
    assert S.report.ok


def test_sum_needs_a_fibration(gpd, G):
    with pytest.raises(ClanError, match="not a fibration"):
        sigma_along(gpd, gpd.hom(G["1"], G["I"])[0])


def test_identity_morphism(square):
    assert verify_clan_morphism(identity_morphism(square), iso_fibration=True).ok


def test_fibers(gpd, G):
    p = gpd.to_terminal(G["d2"])
    pt = gpd.identity(G["1"])
    assert fiber_of(gpd, p, pt) is G["d2"]
    with pytest.raises(ClanError, match="not a point"):
        fiber_of(gpd, p, gpd.to_terminal(G["I"]))


def test_reedy_squares_and_arrow_clan(square):
    sq = SquareData(top="0<=a", left="0<=b", right="a<=1", bottom="b<=1")
    assert is_reedy_fibrant(square, sq)
    A = arrow_clan(square)
    assert len(A.objects) == 9
    assert verify_clan(A).ok
    with pytest.raises(ClanError, match="cap"):
        arrow_clan(square, cap=3)


def test_span_clan(square):
    S = span_clan(square)
    assert verify_clan(S).ok
    i = identity_span(square, "a")
    assert compose_spans(square, i, i) == i
    with pytest.raises(ClanError, match="do not meet"):
        compose_spans(square, i, identity_span(square, "b"))


def test_generic_element(square):
    for target in (square, FinSetModel(2)):
        rep = verify_generic_element(square, "a", target)
        assert rep.ok, rep


def test_generic_element_caps(square):
    with pytest.raises(ClanError, match="cap"):
        verify_generic_element(square, "a", FinSetModel(3))
    # 2 x 2 leaves FinSet(2)
    with pytest.raises(ClanError, match="outside the working set"):
        verify_generic_element(FinSetModel(2), 2, square)
