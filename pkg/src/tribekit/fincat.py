"""Finite categories: presentations, functors, limits and lifting by search.

Everything here works against a small structural interface (``objects``,
``hom``, ``src``, ``tgt``, ``compose``, ``identity``, ``name``), so the same
searches run on an explicit :class:`CategoryPresentation` and on the
constructive models in :mod:`tribekit.models`.  Universal properties are
checked exhaustively over ``C.objects``, the working set of the category.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Protocol, Sequence

from .report import VerificationReport

DEFAULT_MAX_MORPHISMS = 64


class PresentationError(ValueError):
    """Malformed input: duplicate ids, unknown ids, size cap, bad endpoints."""


class Category(Protocol):
    objects: Sequence[Any]

    def hom(self, a, b) -> Sequence[Any]: ...
    def src(self, f) -> Any: ...
    def tgt(self, f) -> Any: ...
    def compose(self, g, f) -> Any: ...
    def identity(self, a) -> Any: ...
    def name(self, x) -> str: ...


@dataclass(frozen=True)
class Morphism:
    id: str
    src: str
    tgt: str


class CategoryPresentation:
    """A finite category given by explicit tables.

    ``composition`` maps ``(g, f)`` to ``g∘f`` and should be total on
    composable pairs; :func:`validate_presentation` reports gaps and law
    violations instead of raising, so a corrupted table can be inspected.
    """

    def __init__(
        self,
        objects: Iterable[str],
        morphisms: Iterable[Morphism | Mapping | Sequence],
        identities: Mapping[str, str],
        composition: Mapping[tuple[str, str], str] | Iterable[Sequence[str]],
        max_morphisms: int = DEFAULT_MAX_MORPHISMS,
    ):
        objs = list(objects)
        seen = set()
        for x in objs:
            if x in seen:
                raise PresentationError(f"duplicate object id {x!r}")
            seen.add(x)
        mors: dict[str, Morphism] = {}
        for m in morphisms:
            if isinstance(m, Mapping):
                m = Morphism(m["id"], m["src"], m["tgt"])
            elif not isinstance(m, Morphism):
                m = Morphism(*m)
            if m.id in mors or m.id in seen:
                raise PresentationError(f"duplicate morphism id {m.id!r}")
            for end in (m.src, m.tgt):
                if end not in seen:
                    raise PresentationError(f"morphism {m.id!r} has unknown endpoint {end!r}")
            mors[m.id] = m
        if len(mors) > max_morphisms:
            raise PresentationError(
                f"presentation has {len(mors)} morphisms, cap is {max_morphisms}"
            )
        ids = dict(identities)
        for x, i in ids.items():
            if x not in seen:
                raise PresentationError(f"identity given for unknown object {x!r}")
            if i not in mors:
                raise PresentationError(f"identity of {x!r} is unknown morphism {i!r}")
        if isinstance(composition, Mapping):
            table = dict(composition)
        else:
            table = {}
            for g, f, gf in composition:
                if (g, f) in table and table[(g, f)] != gf:
                    raise PresentationError(f"conflicting composites for ({g!r}, {f!r})")
                table[(g, f)] = gf
        for (g, f), gf in table.items():
            for m in (g, f, gf):
                if m not in mors:
                    raise PresentationError(f"composition mentions unknown morphism {m!r}")

        self._objects = tuple(sorted(objs))
        self._mors = mors
        self._identities = ids
        self._table = table
        self.max_morphisms = max_morphisms
        homs: dict[tuple[str, str], list[str]] = defaultdict(list)
        for m in mors.values():
            homs[(m.src, m.tgt)].append(m.id)
        self._hom = {k: tuple(sorted(v)) for k, v in homs.items()}

    # structural interface
    @property
    def objects(self) -> tuple[str, ...]:
        return self._objects

    @property
    def morphisms(self) -> tuple[Morphism, ...]:
        return tuple(self._mors[k] for k in sorted(self._mors))

    @property
    def identities(self) -> dict[str, str]:
        return dict(self._identities)

    @property
    def composition(self) -> dict[tuple[str, str], str]:
        return dict(self._table)

    def hom(self, a, b) -> tuple[str, ...]:
        return self._hom.get((a, b), ())

    def src(self, f) -> str:
        return self._mors[f].src

    def tgt(self, f) -> str:
        return self._mors[f].tgt

    def identity(self, a) -> str:
        try:
            return self._identities[a]
        except KeyError:
            raise PresentationError(f"object {a!r} has no identity") from None

    def compose(self, g, f) -> str:
        try:
            return self._table[(g, f)]
        except KeyError:
            raise PresentationError(f"composite {g!r}∘{f!r} missing from table") from None

    def name(self, x) -> str:
        return str(x)

    def morphism(self, f) -> Morphism:
        try:
            return self._mors[f]
        except KeyError:
            raise PresentationError(f"unknown morphism id {f!r}") from None

    def has_object(self, x) -> bool:
        return x in self._identities or x in self._objects

    def __repr__(self) -> str:
        return f"CategoryPresentation({len(self._objects)} objects, {len(self._mors)} morphisms)"

    # JSON shape shared with the cli
    def to_dict(self) -> dict:
        return {
            "objects": list(self._objects),
            "morphisms": [
                {"id": m.id, "src": m.src, "tgt": m.tgt} for m in self.morphisms
            ],
            "identities": {x: self._identities[x] for x in sorted(self._identities)},
            "composition": [
                [g, f, gf] for (g, f), gf in sorted(self._table.items())
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping, max_morphisms: int = DEFAULT_MAX_MORPHISMS):
        for key in ("objects", "morphisms", "identities", "composition"):
            if key not in data:
                raise PresentationError(f"missing field {key!r}")
        return cls(
            data["objects"],
            data["morphisms"],
            data["identities"],
            [tuple(t) for t in data["composition"]],
            max_morphisms=max_morphisms,
        )


def materialize_category(C: Category, max_morphisms: int = 100_000):
    """Explicit tables for the full subcategory on ``C.objects``.

    Returns the presentation and a dict from original objects/morphisms to
    their string ids.
    """
    objs = list(C.objects)
    label: dict[Any, str] = {x: C.name(x) for x in objs}
    if len(set(label.values())) != len(objs):
        raise PresentationError("object names collide; cannot materialize")
    used = set(label.values())
    mors, ids, table = [], {}, {}
    for a in objs:
        for b in objs:
            for k, f in enumerate(C.hom(a, b)):
                mid = C.name(f)
                if mid in used:
                    mid = f"{label[a]}->{label[b]}#{k}"
                used.add(mid)
                label[f] = mid
                mors.append(Morphism(mid, label[a], label[b]))
        ids[label[a]] = label[C.identity(a)]
    for a in objs:
        for b in objs:
            for f in C.hom(a, b):
                for c in objs:
                    for g in C.hom(b, c):
                        table[(label[g], label[f])] = label[C.compose(g, f)]
    p = CategoryPresentation(
        [label[x] for x in objs], mors, ids, table, max_morphisms=max_morphisms
    )
    return p, label


def presentation_from_category(C: Category, max_morphisms: int = 100_000) -> CategoryPresentation:
    return materialize_category(C, max_morphisms)[0]


# ---------------------------------------------------------------- validation

def validate_presentation(p: CategoryPresentation) -> VerificationReport:
    """Check identities, endpoints, totality, unit laws and associativity."""
    rep = VerificationReport()
    table = p.composition
    mors = {m.id: m for m in p.morphisms}

    with rep.check("identities") as chk:
        for x in p.objects:
            i = p.identities.get(x)
            if i is None:
                chk.fail({"object": x, "problem": "missing identity"})
                break
            if mors[i].src != x or mors[i].tgt != x:
                chk.fail({"object": x, "identity": i, "problem": "wrong endpoints"})
                break

    with rep.check("endpoints") as chk:
        for (g, f), gf in sorted(table.items()):
            mg, mf, mgf = mors[g], mors[f], mors[gf]
            if mf.tgt != mg.src or mgf.src != mf.src or mgf.tgt != mg.tgt:
                chk.fail({"pair": [g, f], "composite": gf})
                break

    with rep.check("totality") as chk:
        for f in sorted(mors):
            for c in p.objects:
                for g in p.hom(mors[f].tgt, c):
                    if (g, f) not in table:
                        chk.fail({"pair": [g, f], "problem": "composite missing"})
                        break
                if chk.failed:
                    break
            if chk.failed:
                break

    with rep.check("unit_laws") as chk:
        for f in sorted(mors):
            m = mors[f]
            il, ir = p.identities.get(m.tgt), p.identities.get(m.src)
            if il is None or ir is None:
                continue
            if table.get((il, f)) != f or table.get((f, ir)) != f:
                chk.fail({"morphism": f})
                break

    with rep.check("associativity") as chk:
        for (g, f), gf in sorted(table.items()):
            for c in p.objects:
                for h in p.hom(mors[g].tgt, c):
                    hg = table.get((h, g))
                    if hg is None:
                        continue
                    left, right = table.get((hg, f)), table.get((h, gf))
                    if left is not None and right is not None and left != right:
                        chk.fail({"triple": [h, g, f], "(hg)f": left, "h(gf)": right})
                        break
                if chk.failed:
                    break
            if chk.failed:
                break
    return rep


# ------------------------------------------------------------------ functors

@dataclass
class FunctorData:
    source: Any
    target: Any
    on_objects: Mapping
    on_morphisms: Mapping

    def ob(self, x):
        return self.on_objects[x]

    def mor(self, f):
        return self.on_morphisms[f]


@dataclass
class NaturalTransformationData:
    dom: FunctorData
    cod: FunctorData
    components: Mapping


def _all_morphisms(C: Category):
    for a in C.objects:
        for b in C.objects:
            yield from C.hom(a, b)


def validate_functor(F: FunctorData) -> VerificationReport:
    S, T = F.source, F.target
    rep = VerificationReport()
    for x in S.objects:
        if x not in F.on_objects:
            raise PresentationError(f"functor does not map object {S.name(x)!r}")
    for f in _all_morphisms(S):
        if f not in F.on_morphisms:
            raise PresentationError(f"functor does not map morphism {S.name(f)!r}")
    Fo, Fm = F.on_objects, F.on_morphisms

    with rep.check("endpoints") as chk:
        for f in _all_morphisms(S):
            if T.src(Fm[f]) != Fo[S.src(f)] or T.tgt(Fm[f]) != Fo[S.tgt(f)]:
                chk.fail({"morphism": S.name(f)})
                break
    with rep.check("identities") as chk:
        for x in S.objects:
            if Fm[S.identity(x)] != T.identity(Fo[x]):
                chk.fail({"object": S.name(x)})
                break
    with rep.check("composites") as chk:
        if rep["endpoints"].failed:
            chk.skip("endpoints already fail")
        else:
            for a in S.objects:
                for b in S.objects:
                    for f in S.hom(a, b):
                        for c in S.objects:
                            for g in S.hom(b, c):
                                if Fm[S.compose(g, f)] != T.compose(Fm[g], Fm[f]):
                                    chk.fail({"triple": [S.name(g), S.name(f), S.name(S.compose(g, f))]})
                                    break
                            if chk.failed:
                                break
                        if chk.failed:
                            break
                    if chk.failed:
                        break
                if chk.failed:
                    break
    return rep


def validate_nat(alpha: NaturalTransformationData) -> VerificationReport:
    F, G = alpha.dom, alpha.cod
    S, T = F.source, F.target
    if G.source is not S or G.target is not T:
        raise PresentationError("natural transformation between non-parallel functors")
    rep = VerificationReport()
    for x in S.objects:
        if x not in alpha.components:
            raise PresentationError(f"no component at {S.name(x)!r}")
    comp = alpha.components
    with rep.check("component_endpoints") as chk:
        for x in S.objects:
            c = comp[x]
            if T.src(c) != F.on_objects[x] or T.tgt(c) != G.on_objects[x]:
                chk.fail({"object": S.name(x)})
                break
    with rep.check("naturality") as chk:
        for f in _all_morphisms(S):
            a, b = S.src(f), S.tgt(f)
            if T.compose(G.on_morphisms[f], comp[a]) != T.compose(comp[b], F.on_morphisms[f]):
                chk.fail({"morphism": S.name(f)})
                break
    return rep


# ------------------------------------------------------------------- squares

@dataclass(frozen=True)
class SquareData:
    """A square ``X00 -top-> X10``, ``left: X00 -> X01``, ``right: X10 -> X11``,
    ``bottom: X01 -> X11``; it commutes when ``bottom∘left == right∘top``."""

    top: Any
    bottom: Any
    left: Any
    right: Any


@dataclass(frozen=True)
class Cone:
    """A pullback cone ``f∘p1 == g∘p2`` over the cospan ``f: A -> C <- B: g``.

    ``data`` is an optional lookup used by constructive models to build
    mediating maps without search.
    """

    apex: Any
    p1: Any
    p2: Any
    f: Any = None
    g: Any = None
    data: Any = field(default=None, compare=False, repr=False, hash=False)


class SquareError(ValueError):
    pass


def square_commutes(C: Category, s: SquareData) -> bool:
    try:
        return C.compose(s.bottom, s.left) == C.compose(s.right, s.top)
    except (PresentationError, ValueError):
        return False


def _check_square_shape(C: Category, s: SquareData) -> None:
    if C.src(s.top) != C.src(s.left) or C.tgt(s.top) != C.src(s.right):
        raise SquareError("square sides do not meet at the corners")
    if C.tgt(s.left) != C.src(s.bottom) or C.tgt(s.bottom) != C.tgt(s.right):
        raise SquareError("square sides do not meet at the corners")


def cartesian_obstruction(C: Category, s: SquareData, test_objects=None):
    """Return ``None`` when ``s`` is a pullback square, else a witness cone.

    Categories may supply ``square_obstruction(s, test_objects)``, answering
    the same question faster; it returns ``NotImplemented`` to defer here.
    """
    _check_square_shape(C, s)
    if not square_commutes(C, s):
        raise SquareError("square does not commute")
    fast = getattr(C, "square_obstruction", None)
    if fast is not None:
        out = fast(s, test_objects)
        if out is not NotImplemented:
            return out
    X00, X01, X10 = C.src(s.top), C.tgt(s.left), C.tgt(s.top)
    for T in (C.objects if test_objects is None else test_objects):
        counts: dict[tuple, int] = defaultdict(int)
        for m in C.hom(T, X00):
            counts[(C.compose(s.left, m), C.compose(s.top, m))] += 1
        by_image: dict[Any, list] = defaultdict(list)
        for b in C.hom(T, X10):
            by_image[C.compose(s.right, b)].append(b)
        for a in C.hom(T, X01):
            for b in by_image.get(C.compose(s.bottom, a), ()):
                n = counts.get((a, b), 0)
                if n != 1:
                    return {
                        "test_object": C.name(T),
                        "cone": [C.name(a), C.name(b)],
                        "mediating_maps": n,
                    }
    return None


def is_cartesian_square(C: Category, s: SquareData, test_objects=None) -> bool:
    return cartesian_obstruction(C, s, test_objects) is None


def pullback(C: Category, f, g) -> Cone | None:
    """Search ``C.objects`` for a pullback of the cospan ``f, g``.

    Returns the first universal cone in search order, or ``None`` when the
    working set holds no fiber product.
    """
    if C.tgt(f) != C.tgt(g):
        raise PresentationError(
            f"cospan legs {C.name(f)!r} and {C.name(g)!r} have different targets"
        )
    A, B = C.src(f), C.src(g)
    cones_at: dict[Any, set] = {}
    for T in C.objects:
        by_image = defaultdict(list)
        for b in C.hom(T, B):
            by_image[C.compose(g, b)].append(b)
        cones_at[T] = {
            (a, b) for a in C.hom(T, A) for b in by_image.get(C.compose(f, a), ())
        }
    for P in C.objects:
        for p1, p2 in sorted(cones_at[P], key=lambda ab: (str(ab[0]), str(ab[1]))):
            if _universal(C, P, p1, p2, cones_at):
                return Cone(P, p1, p2, f, g)
    return None


def _universal(C, P, p1, p2, cones_at) -> bool:
    for T, cones in cones_at.items():
        images = [(C.compose(p1, m), C.compose(p2, m)) for m in C.hom(T, P)]
        if len(images) != len(cones) or set(images) != cones:
            return False
    return True


def mediating_maps(C: Category, cone: Cone, T, a, b) -> list:
    return [
        m for m in C.hom(T, cone.apex)
        if C.compose(cone.p1, m) == a and C.compose(cone.p2, m) == b
    ]


# ------------------------------------------------------------------- lifting

def has_diagonal_filler(C: Category, u, f, square: SquareData):
    """First ``d: B -> X`` with ``f∘d == bottom`` and ``d∘u == top``, else ``None``."""
    if square.left != u or square.right != f:
        raise SquareError("square sides must be u (left) and f (right)")
    _check_square_shape(C, square)
    if not square_commutes(C, square):
        raise SquareError("lifting square does not commute")
    B, X = C.tgt(u), C.src(f)
    for d in C.hom(B, X):
        if C.compose(f, d) == square.bottom and C.compose(d, u) == square.top:
            return d
    return None


def lifting_obstruction(C: Category, u, f):
    """``None`` when ``u`` has the left lifting property against ``f``;
    otherwise the first commuting square ``(top, bottom)`` without a filler."""
    A, B = C.src(u), C.tgt(u)
    X, Y = C.src(f), C.tgt(f)
    filled = {(C.compose(d, u), C.compose(f, d)) for d in C.hom(B, X)}
    by_image = defaultdict(list)
    for b in C.hom(B, Y):
        by_image[C.compose(b, u)].append(b)
    for a in C.hom(A, X):
        for b in by_image.get(C.compose(f, a), ()):
            if (a, b) not in filled:
                return SquareData(top=a, bottom=b, left=u, right=f)
    return None


def lifts(C: Category, u, f) -> bool:
    return lifting_obstruction(C, u, f) is None


def left_lifting_class(C: Category, K: Iterable) -> list:
    """All maps of the working set with the left lifting property against ``K``."""
    K = list(K)
    return [u for u in _all_morphisms(C) if all(lifts(C, u, k) for k in K)]


def right_lifting_class(C: Category, K: Iterable) -> list:
    K = list(K)
    return [f for f in _all_morphisms(C) if all(lifts(C, k, f) for k in K)]


def inverse(C: Category, f):
    a, b = C.src(f), C.tgt(f)
    ida, idb = C.identity(a), C.identity(b)
    for g in C.hom(b, a):
        if C.compose(g, f) == ida and C.compose(f, g) == idb:
            return g
    return None


def is_iso(C: Category, f) -> bool:
    return inverse(C, f) is not None


@dataclass(frozen=True)
class RetractData:
    i0: Any
    r0: Any
    i1: Any
    r1: Any


def find_retract_data(C: Category, f, g) -> RetractData | None:
    """Exhibit ``f: A -> B`` as a retract of ``g: X -> Y`` in the arrow category."""
    A, B, X, Y = C.src(f), C.tgt(f), C.src(g), C.tgt(g)
    ida, idb = C.identity(A), C.identity(B)
    split0 = [
        (i, r) for i in C.hom(A, X) for r in C.hom(X, A) if C.compose(r, i) == ida
    ]
    if not split0:
        return None
    split1 = [
        (i, r) for i in C.hom(B, Y) for r in C.hom(Y, B) if C.compose(r, i) == idb
    ]
    for i0, r0 in split0:
        gi0 = C.compose(g, i0)
        fr0 = C.compose(f, r0)
        for i1, r1 in split1:
            if gi0 == C.compose(i1, f) and fr0 == C.compose(r1, g):
                return RetractData(i0, r0, i1, r1)
    return None


def is_retract(C: Category, f, g) -> bool:
    return find_retract_data(C, f, g) is not None


# ------------------------------------------------------- functor enumeration

def enumerate_functors(S: Category, T: Category, limit: int | None = None):
    """All functors between two small categories, by backtracking.

    Objects are assigned first, then morphisms in a fixed order; composites
    and identities are checked as soon as both factors are assigned.  Only
    meant for micro instances.
    """
    objs = list(S.objects)
    mors = list(_all_morphisms(S))
    triples = []
    pos = {f: k for k, f in enumerate(mors)}
    for f in mors:
        for c in objs:
            for g in S.hom(S.tgt(f), c):
                triples.append((pos[g], pos[f], pos[S.compose(g, f)]))
    # a triple can be checked once its largest index is assigned
    due: dict[int, list] = defaultdict(list)
    for t in triples:
        due[max(t)].append(t)
    ident_at = {pos[S.identity(x)]: x for x in objs}
    count = 0
    for image in _product_of(T.objects, len(objs)):
        ob = dict(zip(objs, image))
        assigned: list = [None] * len(mors)

        def extend(k):
            nonlocal count
            if k == len(mors):
                yield FunctorData(S, T, dict(ob), dict(zip(mors, assigned)))
                return
            f = mors[k]
            if k in ident_at:
                cands = (T.identity(ob[ident_at[k]]),)
            else:
                cands = T.hom(ob[S.src(f)], ob[S.tgt(f)])
            for c in cands:
                assigned[k] = c
                if all(
                    T.compose(assigned[g], assigned[h]) == assigned[gh]
                    for g, h, gh in due.get(k, ())
                ):
                    yield from extend(k + 1)
            assigned[k] = None

        for F in extend(0):
            yield F
            count += 1
            if limit is not None and count >= limit:
                return


def _product_of(values, n):
    if n == 0:
        yield ()
        return
    for head in values:
        for rest in _product_of(values, n - 1):
            yield (head,) + rest


def enumerate_natural_transformations(F, G, objects=None, morphisms=None):
    """Natural transformations between two parallel functors.

    ``F`` and ``G`` need ``source``, ``target``, ``ob`` and ``mor``;
    ``objects``/``morphisms`` default to the working set of ``F.source``.
    """
    S, T = F.source, F.target
    objs = list(S.objects if objects is None else objects)
    mors = list(_all_morphisms(S) if morphisms is None else morphisms)
    by_pair: dict[tuple, list] = defaultdict(list)
    for f in mors:
        by_pair[(S.src(f), S.tgt(f))].append(f)
    comp: dict = {}

    def extend(k):
        if k == len(objs):
            yield dict(comp)
            return
        x = objs[k]
        for c in T.hom(F.ob(x), G.ob(x)):
            comp[x] = c
            ok = True
            for y in objs[: k + 1]:
                for a, b in ((x, y), (y, x)):
                    for f in by_pair.get((a, b), ()):
                        if T.compose(G.mor(f), comp[a]) != T.compose(comp[b], F.mor(f)):
                            ok = False
                            break
                    if not ok:
                        break
                if not ok:
                    break
            if ok:
                yield from extend(k + 1)
        comp.pop(x, None)

    yield from extend(0)


def find_natural_iso(F, G, objects=None, morphisms=None):
    """First natural transformation ``F => G`` whose components are all isos."""
    T = F.target
    for comp in enumerate_natural_transformations(F, G, objects, morphisms):
        if all(is_iso(T, c) for c in comp.values()):
            return comp
    return None


def find_isomorphism(C: Category, X, Y):
    """First isomorphism ``X -> Y`` in search order, with its inverse."""
    for f in C.hom(X, Y):
        g = inverse(C, f)
        if g is not None:
            return f, g
    return None
