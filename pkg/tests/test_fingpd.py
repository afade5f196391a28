import itertools

import pytest
from hypothesis import given, settings, strategies as st

from tribekit.clan import verify_clan
from tribekit.models.fingpd import (
    EMPTY,
    ONE,
    WALKING_ISO,
    Functor,
    GroupoidError,
    canonical,
    codiscrete,
    compose_functors,
    delooping,
    discrete,
    functors,
    groupoid,
    identity_functor,
    invariant,
    is_equivalence,
    is_isofibration,
    natural_isos,
    validate_functor,
)
from tribekit.tribe import homotopy_classes, is_anodyne, verify_path_object

SMALL = [EMPTY, ONE, WALKING_ISO, discrete(2), delooping(2), delooping(3), codiscrete(3)]


def test_standard_names():
    assert [G.name for G in SMALL] == ["0", "1", "I", "d2", "B(Z2)", "B(Z3)", "C3"]
    assert delooping(6).name == "B(Z2xZ3)"


def test_interning_makes_equality_identity():
    # Z/2 written out by hand is the standard B(Z2)
    G = groupoid(1, [0, 0], [0, 0], {(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 1): 0})
    assert G is delooping(2)


def test_relabelled_iso_is_distinct_but_canonically_equal():
    # I with arrows listed in a different order
    G = groupoid(2, [1, 0, 0, 1], [1, 1, 0, 0],
                 {(0, 0): 0, (1, 2): 1, (0, 1): 1, (3, 0): 3, (2, 2): 2, (3, 1): 2,
                  (1, 3): 0, (2, 3): 3})
    assert G is not WALKING_ISO
    assert canonical(G) is WALKING_ISO
    assert invariant(G) == invariant(WALKING_ISO)
    assert "~" in G.name


@pytest.mark.parametrize("args, problem", [
    ((1, [0], [1], {}), "outside"),
    ((1, [0, 0], [0, 0], {(0, 0): 0, (0, 1): 1, (1, 0): 1}), "missing composite"),
    ((1, [0, 0], [0, 0], {(0, 0): 0, (0, 1): 0, (1, 0): 0, (1, 1): 0}), "identity"),
    ((1, [0, 0], [0, 0], {(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 1): 1}), "not invertible"),
])
def test_groupoid_validation(args, problem):
    with pytest.raises(GroupoidError, match=problem):
        groupoid(*args)


def test_non_abelian_has_no_canonical_form():
    # S3 acting on itself: build the symmetric group by permutations
    perms = list(itertools.permutations(range(3)))
    idx = {p: k for k, p in enumerate(perms)}
    comp = {(g, f): idx[tuple(perms[g][perms[f][i]] for i in range(3))]
            for g in range(6) for f in range(6)}
    S3 = groupoid(1, [0] * 6, [0] * 6, comp)
    with pytest.raises(GroupoidError, match="non-abelian"):
        canonical(S3)


@pytest.mark.parametrize("a, b, n", [
    ("1", "I", 2), ("I", "I", 4), ("I", "d2", 2), ("d2", "I", 4),
    ("I", "B(Z2)", 2), ("B(Z2)", "I", 2), ("B(Z2)", "B(Z2)", 2),
    ("B(Z2)", "B(Z2xZ2)", 4), ("B(Z2xZ2)", "B(Z2)", 4), ("0", "1", 1), ("1", "0", 0),
])
def test_hom_sizes(gpd, G, a, b, n):
    assert len(gpd.hom(G[a], G[b])) == n


def _brute_force_functors(A, B):
    out = set()
    for ob in itertools.product(range(B.n), repeat=A.n):
        for mor in itertools.product(range(B.m), repeat=A.m):
            F = Functor(A, B, ob, mor)
            try:
                validate_functor(F)
            except GroupoidError:
                continue
            out.add(F)
    return out


PAIRS = [(A, B) for A in SMALL for B in SMALL if B.m ** A.m <= 4096]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(PAIRS))
def test_functor_enumeration_matches_brute_force(pair):
    A, B = pair
    got = list(functors(A, B))
    assert len(got) == len(set(got))
    assert set(got) == _brute_force_functors(A, B)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SMALL), st.sampled_from(SMALL), st.sampled_from(SMALL), st.data())
def test_composition_is_associative_and_unital(A, B, C, data):
    fs, gs = list(functors(A, B)), list(functors(B, C))
    if not fs or not gs:
        return
    f, g = data.draw(st.sampled_from(fs)), data.draw(st.sampled_from(gs))
    validate_functor(compose_functors(g, f))
    assert compose_functors(identity_functor(B), f) == f
    assert compose_functors(f, identity_functor(A)) == f
    h = identity_functor(C)
    assert compose_functors(h, compose_functors(g, f)) == compose_functors(compose_functors(h, g), f)


def test_isofibrations(gpd, G):
    point_into_I = gpd.hom(G["1"], G["I"])[0]
    # the arrow 0 -> 1 of I starts at the image point and has nothing above it
    assert not is_isofibration(point_into_I)
    assert is_isofibration(gpd.to_terminal(G["I"]))
    assert is_isofibration(gpd.hom(G["1"], G["d2"])[0])
    assert not is_isofibration(gpd.hom(G["1"], G["B(Z2)"])[0])
    assert all(is_isofibration(gpd.to_terminal(X)) for X in gpd.objects)


def test_anodyne_examples(gpd, G):
    assert is_anodyne(gpd, gpd.hom(G["1"], G["I"])[0]) is not None
    assert is_anodyne(gpd, gpd.hom(G["1"], G["d2"])[0]) is None
    assert is_anodyne(gpd, gpd.hom(G["0"], G["1"])[0]) is None
    assert is_equivalence(gpd.to_terminal(G["I"]))
    assert not is_equivalence(gpd.to_terminal(G["B(Z2)"]))


def test_natural_isos_of_identity_count_the_centre(G):
    assert len(list(natural_isos(identity_functor(G["B(Z2)"]), identity_functor(G["B(Z2)"])))) == 2
    assert len(list(natural_isos(identity_functor(G["I"]), identity_functor(G["I"])))) == 1
    assert len(list(natural_isos(identity_functor(G["B(Z2xZ2)"]),
                                 identity_functor(G["B(Z2xZ2)"])))) == 4


# homotopy classes [A, X] for X = 1, I, d2, B(Z2), 2B(Z2), B(Z2xZ2):
# [I, X] = components of X; [B(Z2), X] = homs Z/2 -> vertex groups; [d2, X] = [1, X]^2
CLASSES = {
    "I": [1, 1, 2, 1, 2, 1],
    "B(Z2)": [1, 1, 2, 2, 4, 4],
    "d2": [1, 1, 4, 1, 4, 1],
}


@pytest.mark.parametrize("a", sorted(CLASSES))
def test_homotopy_class_counts(gpd, G, a):
    targets = ["1", "I", "d2", "B(Z2)", "2B(Z2)", "B(Z2xZ2)"]
    assert [len(homotopy_classes(gpd, G[a], G[b])) for b in targets] == CLASSES[a]


def test_products_and_paths(gpd, G):
    assert gpd.product(G["B(Z2)"], G["B(Z2)"]).apex is G["B(Z2xZ2)"]
    assert gpd.product(G["d2"], G["d2"]).apex.name == "d4"
    assert canonical(gpd.product(G["I"], G["I"]).apex).name == "C4"
    assert gpd.build_path_object(G["I"]).obj.name == "C4"
    # free paths in B(Z2): two objects, vertex group Z/2
    assert invariant(gpd.build_path_object(G["B(Z2)"]).obj) == ((2, (1, 2)),)


@pytest.mark.parametrize("name", ["0", "1", "I", "d2", "B(Z2)", "2B(Z2)", "B(Z2xZ2)"])
def test_path_objects(gpd, G, name):
    assert verify_path_object(gpd, G[name]).ok


def test_clan_axioms(gpd):
    assert verify_clan(gpd).ok


def test_pullback_is_strict(gpd, G):
    f = gpd.hom(G["1"], G["I"])[0]
    p = gpd.to_terminal(G["d2"])
    assert gpd.pullback(gpd.to_terminal(G["1"]), p).apex is G["d2"]
    cone = gpd.pullback(f, gpd.identity(G["I"]))
    assert cone.apex is G["1"]
