import json
import math
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from tribekit.clan import ClanError
from tribekit.fincat import SquareData, validate_presentation
from tribekit.models.fingpd import invariant, is_equivalence
from tribekit.models.finset import FinSetModel
from tribekit.models.io import load_presentation
from tribekit.tribe import (
    TribeError,
    af_factorize,
    anodyne_decisions,
    are_homotopic,
    homotopy_category,
    homotopy_classes,
    homotopy_inverse,
    hreplete_closure,
    is_anodyne,
    is_homotopy_cartesian,
    is_homotopy_equivalence,
    is_n_truncated,
    is_object_n_truncated,
    mapping_path_object,
    mere_proposition_conditions,
    path_object,
    product_tribe,
    restrict,
    same_class,
    section_of,
    straighten,
    tribe_morphism_report,
    verify_fibration_category,
    verify_homotopy_congruence,
    verify_mapping_path,
    verify_tribe,
)
from tribekit.clan import identity_morphism

DATA = Path(__file__).resolve().parent.parent / "demos" / "data"


def _rank(inv_component):
    # vertex groups here are elementary abelian 2-groups
    return int(math.log2(len(inv_component[1])))


def expected_classes(A, B):
    """[A, B] for groupoids with elementary abelian 2-group vertex groups."""
    comps_a = invariant(A)
    comps_b = invariant(B)
    total = 1
    for ca in comps_a:
        total *= sum(2 ** (_rank(ca) * _rank(cb)) for cb in comps_b)
    return total


def test_homotopy_classes_match_group_theory(gpd):
    for A in gpd.objects:
        for B in gpd.objects:
            assert len(homotopy_classes(gpd, A, B)) == expected_classes(A, B), (A.name, B.name)


def test_homotopy_category(gpd):
    Ho = homotopy_category(gpd)
    assert validate_presentation(Ho.presentation).ok
    assert len(Ho.presentation.morphisms) == sum(
        expected_classes(A, B) for A in gpd.objects for B in gpd.objects
    )
    assert set(Ho.quotient.values()) == set(Ho.representative)


def test_homotopy_equivalence_agrees_with_model(gpd):
    for f in gpd.morphisms():
        assert is_homotopy_equivalence(gpd, f, use_model=False) == is_equivalence(f)


def test_homotopic_requires_parallel_maps(gpd, G):
    f = gpd.identity(G["I"])
    with pytest.raises(TribeError, match="parallel"):
        are_homotopic(gpd, f, gpd.to_terminal(G["I"]))


def test_points_of_interval_are_homotopic(gpd, G):
    x, y = gpd.hom(G["1"], G["I"])
    w = are_homotopic(gpd, x, y)
    assert w is not None
    P = w.path
    assert gpd.compose(P.d0, w.map) == x and gpd.compose(P.d1, w.map) == y
    a, b = gpd.hom(G["1"], G["d2"])
    assert are_homotopic(gpd, a, b) is None


def test_factorization(gpd):
    for f in gpd.morphisms():
        u, p = af_factorize(gpd, f)
        assert gpd.compose(p, u) == f
        assert gpd.is_fibration(p) and is_anodyne(gpd, u) is not None


def test_mapping_path(gpd, G):
    f = gpd.hom(G["1"], G["I"])[0]
    m = mapping_path_object(gpd, f)
    assert gpd.compose(m.delta1, m.unit) == f
    assert verify_mapping_path(gpd, f).ok


def test_anodyne_methods(gpd, G):
    u = gpd.hom(G["1"], G["I"])[0]
    assert anodyne_decisions(gpd, u) == {"lifting": True, "sdr": True, "model": True}
    assert is_anodyne(gpd, u, "sdr").method == "sdr"
    with pytest.raises(ValueError):
        is_anodyne(gpd, u, "guess")
    v = gpd.hom(G["1"], G["d2"])[0]
    assert anodyne_decisions(gpd, v) == {"lifting": False, "sdr": False, "model": False}


def test_anodyne_without_a_model():
    c = load_presentation((DATA / "chain.json").read_text(), "tribe")
    with pytest.raises(TribeError, match="no model characterization"):
        is_anodyne(c, c.identity("m"), "model")
    assert is_anodyne(c, c.identity("m")) is not None


def test_straightening(gpd, G):
    p = gpd.to_terminal(G["I"])
    x, y = gpd.hom(G["1"], G["I"])
    # p∘x == p∘y already; straighten along the constant homotopy
    P = path_object(gpd, G["1"])
    H = gpd.compose(P.sigma, gpd.compose(p, x))
    g2 = straighten(gpd, p, gpd.compose(p, y), x, H)
    assert gpd.compose(p, g2) == gpd.compose(p, y) and same_class(gpd, g2, x)
    with pytest.raises(TribeError, match="does not connect"):
        straighten(gpd, gpd.identity(G["I"]), y, x, gpd.compose(path_object(gpd, G["I"]).sigma, x))


def test_sections_of_trivial_fibrations(gpd, G):
    p = gpd.to_terminal(G["I"])
    s = section_of(gpd, p)
    assert gpd.compose(p, s) == gpd.identity(G["1"])
    with pytest.raises(TribeError, match="not a trivial fibration"):
        section_of(gpd, gpd.to_terminal(G["d2"]))


def test_homotopy_inverse(gpd, G):
    u = gpd.hom(G["1"], G["I"])[0]
    assert homotopy_inverse(gpd, u) is not None
    assert homotopy_inverse(gpd, gpd.to_terminal(G["B(Z2)"])) is None


# truncation levels for n = -2, -1, 0, 1
LEVELS = {
    "0": [False, True, True, True],
    "1": [True, True, True, True],
    "I": [True, True, True, True],
    "d2": [False, False, True, True],
    "B(Z2)": [False, False, False, True],
    "2B(Z2)": [False, False, False, True],
    "B(Z2xZ2)": [False, False, False, True],
}


@pytest.mark.parametrize("name", sorted(LEVELS))
def test_truncation_levels(gpd, G, name):
    assert [is_object_n_truncated(gpd, G[name], n) for n in (-2, -1, 0, 1)] == LEVELS[name]


def test_truncation_level_bound(gpd, G):
    with pytest.raises(ValueError):
        is_n_truncated(gpd, gpd.identity(G["1"]), -3)


@pytest.mark.parametrize("name", sorted(LEVELS))
def test_mere_proposition_conditions_agree(gpd, G, name):
    conds = mere_proposition_conditions(gpd, G[name])
    assert len(conds) == 5
    assert set(conds.values()) == {LEVELS[name][1]}


def test_homotopy_cartesian(gpd, G):
    # the strict pullback square of 1 -> I along itself is homotopy cartesian
    x = gpd.hom(G["1"], G["I"])[0]
    one = gpd.identity(G["1"])
    assert is_homotopy_cartesian(gpd, SquareData(top=one, left=one, right=x, bottom=x))
    # a point of d2 against the other point: commutes only through 0
    a, b = gpd.hom(G["1"], G["d2"])
    z = gpd.hom(G["0"], G["1"])[0]
    assert is_homotopy_cartesian(gpd, SquareData(top=z, left=z, right=a, bottom=b))
    # the point of d2 pulled back along itself: strict and homotopy pullback agree
    assert is_homotopy_cartesian(gpd, SquareData(top=one, left=one, right=a, bottom=a))
    # 1 over I -> 1 <- 1 is a commuting square whose gap 1 -> I is an equivalence
    tI, t1 = gpd.to_terminal(G["I"]), gpd.identity(G["1"])
    assert is_homotopy_cartesian(gpd, SquareData(top=x, left=t1, right=tI, bottom=t1))
    # 1 -> 1 over d2 -> 1 <- 1: the gap 1 -> d2 misses a component
    td2 = gpd.to_terminal(G["d2"])
    assert not is_homotopy_cartesian(gpd, SquareData(top=a, left=t1, right=td2, bottom=t1))


def test_tribe_axioms(gpd):
    assert verify_tribe(gpd).ok
    assert verify_fibration_category(gpd).ok
    assert verify_homotopy_congruence(gpd).ok


def test_finite_sets_are_a_discrete_tribe():
    m = FinSetModel(3)
    assert verify_tribe(m).ok
    assert verify_homotopy_congruence(m).ok


def test_presented_tribes():
    c = load_presentation((DATA / "chain.json").read_text(), "tribe")
    assert verify_tribe(c).ok
    bad = load_presentation((DATA / "unclosed_fibrations.json").read_text(), "tribe",
                            check_axioms=False)
    rep = verify_tribe(bad)
    assert {"base_changes_are_fibrations", "af_factorizations"} <= {c.name for c in rep.failures}


def test_restriction_and_slices(gpd, micro, G):
    r = restrict(gpd, micro)
    assert list(r.objects) == micro
    E = gpd.slice(G["d2"])
    assert verify_tribe(E).ok


def test_identity_is_a_weak_equivalence(gpd, micro):
    r = restrict(gpd, micro)
    rep = tribe_morphism_report(identity_morphism(r))
    assert rep.ok, rep


def test_hreplete_closure(gpd, G):
    assert [X.name for X in hreplete_closure(gpd, [G["1"]])] == ["1", "I"]


def test_product_tribe(gpd, G):
    T = product_tribe(FinSetModel(2), restrict(gpd, [G["1"], G["I"]]))
    assert len(T.objects) == 4
    assert verify_tribe(T).ok
    assert verify_homotopy_congruence(T).ok
