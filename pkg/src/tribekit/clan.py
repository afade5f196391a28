"""Clans: a terminal object plus a class of carrable maps called fibrations.

:class:`Clan` is the interface every instance implements.  The presented
tier (:class:`ClanStructure`) answers by exhaustive search over explicit
tables; the models in :mod:`tribekit.models` construct pullbacks directly.
Slices, arrow clans and span clans are lazy wrappers over any clan.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Iterator, Mapping

from . import fincat
from .fincat import (
    CategoryPresentation,
    Cone,
    FunctorData,
    PresentationError,
    SquareData,
    cartesian_obstruction,
)
from .report import VerificationReport


class ClanError(ValueError):
    """A construction the clan cannot carry out (missing pullback, bad input)."""


class Clan:
    """Interface shared by presented clans, models and derived clans.

    Subclasses provide the category (``objects``, ``hom``, ``src``, ``tgt``,
    ``compose``, ``identity``, ``name``), ``terminal``, ``is_fibration`` and
    ``pullback``.  ``objects`` is the working set: the domain of every
    exhaustive check.  ``probe_objects``, when set, is a smaller family of
    test shapes that detects universality (points, and arrows for groupoids).
    """

    terminal: Any = None
    probe_objects: tuple | None = None
    objects: tuple = ()

    # category interface, supplied by subclasses
    def hom(self, a, b):
        raise NotImplementedError

    def src(self, f):
        raise NotImplementedError

    def tgt(self, f):
        raise NotImplementedError

    def compose(self, g, f):
        raise NotImplementedError

    def identity(self, a):
        raise NotImplementedError

    def name(self, x) -> str:
        return str(x)

    def is_fibration(self, f) -> bool:
        raise NotImplementedError

    def pullback(self, f, g) -> Cone | None:
        raise NotImplementedError

    # derived structure with search defaults
    def mediate(self, cone: Cone, a, b):
        """The unique map ``m`` with ``p1∘m == a`` and ``p2∘m == b``."""
        ms = fincat.mediating_maps(self, cone, self.src(a), a, b)
        if len(ms) != 1:
            raise ClanError(
                f"{len(ms)} mediating maps into {self.name(cone.apex)!r}; cone is not universal"
            )
        return ms[0]

    def to_terminal(self, X):
        hs = self.hom(X, self.terminal)
        if len(hs) != 1:
            raise ClanError(f"{self.name(self.terminal)!r} is not terminal for {self.name(X)!r}")
        return hs[0]

    def product(self, A, B) -> Cone | None:
        return self.pullback(self.to_terminal(A), self.to_terminal(B))

    def pair(self, a, b, cone: Cone | None = None):
        """``(a, b): T -> A×B`` into the canonical product (or a given cone)."""
        if cone is None:
            cone = self.product(self.tgt(a), self.tgt(b))
        return self.mediate(cone, a, b)

    def is_iso(self, f) -> bool:
        return fincat.is_iso(self, f)

    def inverse(self, f):
        return fincat.inverse(self, f)

    def morphisms(self, objects=None) -> Iterator:
        objs = self.objects if objects is None else objects
        for a in objs:
            for b in objs:
                yield from self.hom(a, b)

    def fibrations(self, objects=None) -> Iterator:
        return (f for f in self.morphisms(objects) if self.is_fibration(f))

    def test_objects(self):
        return self.objects if self.probe_objects is None else self.probe_objects

    def contains(self, X) -> bool:
        return X in self.objects

    def maps_over(self, X, a, Y, b) -> Iterator:
        """Maps ``h: X -> Y`` with ``b∘h == a``."""
        for h in self.hom(X, Y):
            if self.compose(b, h) == a:
                yield h

    def iso_over(self, X, a, Y, b):
        """First isomorphism ``X -> Y`` over the common base, or ``None``."""
        for h in self.maps_over(X, a, Y, b):
            if self.is_iso(h):
                return h
        return None


class ClanStructure(Clan):
    """A finite presentation with a designated terminal object and marked fibrations."""

    def __init__(self, presentation: CategoryPresentation, terminal: str, fibrations: Iterable[str]):
        if not presentation.has_object(terminal):
            raise ClanError(f"unknown terminal id {terminal!r}")
        fibs = frozenset(fibrations)
        for f in fibs:
            presentation.morphism(f)
        self.presentation = presentation
        self.terminal = terminal
        self.fibration_ids = fibs
        self.objects = presentation.objects
        self._pullbacks: dict = {}
        self.labels: dict = {}

    def hom(self, a, b):
        return self.presentation.hom(a, b)

    def src(self, f):
        return self.presentation.src(f)

    def tgt(self, f):
        return self.presentation.tgt(f)

    def compose(self, g, f):
        return self.presentation.compose(g, f)

    def identity(self, a):
        return self.presentation.identity(a)

    def is_fibration(self, f) -> bool:
        return f in self.fibration_ids

    def pullback(self, f, g):
        key = (f, g)
        if key not in self._pullbacks:
            self._pullbacks[key] = fincat.pullback(self.presentation, f, g)
        return self._pullbacks[key]

    def with_fibrations(self, fibrations: Iterable[str]) -> "ClanStructure":
        return ClanStructure(self.presentation, self.terminal, fibrations)

    def __repr__(self):
        return f"ClanStructure({self.presentation!r}, terminal={self.terminal!r}, {len(self.fibration_ids)} fibrations)"

    def to_dict(self) -> dict:
        out = self.presentation.to_dict()
        out["terminal"] = self.terminal
        out["fibrations"] = sorted(self.fibration_ids)
        return out

    @classmethod
    def from_dict(cls, data: Mapping, max_morphisms: int = fincat.DEFAULT_MAX_MORPHISMS):
        p = CategoryPresentation.from_dict(data, max_morphisms=max_morphisms)
        for key in ("terminal", "fibrations"):
            if key not in data:
                raise PresentationError(f"missing field {key!r}")
        return cls(p, data["terminal"], data["fibrations"])


class RemarkedClan(Clan):
    """A clan with fibration marks or terminal overridden; used to corrupt instances."""

    def __init__(self, base: Clan, unmark=(), mark=(), terminal=None):
        self.base = base
        self.unmark = set(unmark)
        self.mark = set(mark)
        self.terminal = base.terminal if terminal is None else terminal
        self.objects = base.objects
        self.probe_objects = base.probe_objects

    def __getattr__(self, item):
        return getattr(self.base, item)

    def hom(self, a, b):
        return self.base.hom(a, b)

    def src(self, f):
        return self.base.src(f)

    def tgt(self, f):
        return self.base.tgt(f)

    def compose(self, g, f):
        return self.base.compose(g, f)

    def identity(self, a):
        return self.base.identity(a)

    def name(self, x):
        return self.base.name(x)

    def is_iso(self, f):
        return self.base.is_iso(f)

    def is_fibration(self, f):
        if f in self.unmark:
            return False
        return f in self.mark or self.base.is_fibration(f)

    def pullback(self, f, g):
        return self.base.pullback(f, g)

    def mediate(self, cone, a, b):
        return self.base.mediate(cone, a, b)


def materialize(c: Clan, max_morphisms: int = 100_000) -> ClanStructure:
    """Explicit :class:`ClanStructure` on the working set of ``c``.

    ``result.labels`` maps the original objects and maps to their ids.
    """
    p, labels = fincat.materialize_category(c, max_morphisms=max_morphisms)
    if c.terminal not in labels:
        raise ClanError("terminal object is outside the working set")
    fibs = [labels[f] for f in c.fibrations()]
    out = ClanStructure(p, labels[c.terminal], fibs)
    out.labels = labels
    return out


def poset_clan(elements: Iterable[str], leq: Iterable[tuple[str, str]]) -> ClanStructure:
    """A finite meet-semilattice with a top, every map a fibration.

    ``leq`` lists generating pairs ``(x, y)`` meaning ``x <= y``; the order is
    their reflexive-transitive closure.  Map ids are ``"x<=y"``.
    """
    els = sorted(set(elements))
    le = {(x, x) for x in els} | set(leq)
    changed = True
    while changed:
        changed = False
        for x, y in list(le):
            for y2, z in list(le):
                if y == y2 and (x, z) not in le:
                    le.add((x, z))
                    changed = True
    for x, y in le:
        if (y, x) in le and x != y:
            raise ClanError(f"{x!r} and {y!r} are identified by the order")
    tops = [t for t in els if all((x, t) in le for x in els)]
    if not tops:
        raise ClanError("order has no top element")
    mid = {pair: f"{pair[0]}<={pair[1]}" for pair in sorted(le)}
    morphisms = [(mid[(x, y)], x, y) for x, y in sorted(le)]
    comp = [
        (mid[(y, z)], mid[(x, y)], mid[(x, z)])
        for x, y in sorted(le) for y2, z in sorted(le) if y == y2
    ]
    p = CategoryPresentation(els, morphisms, {x: mid[(x, x)] for x in els}, comp)
    return ClanStructure(p, tops[0], [m[0] for m in morphisms])


# ------------------------------------------------------------ verification

CLAN_CHECKS = (
    "terminal_object",
    "isomorphisms_are_fibrations",
    "fibrations_compose",
    "maps_to_terminal_are_fibrations",
    "fibrations_carrable",
    "base_changes_are_fibrations",
)


def verify_clan(c: Clan, test_objects=None, checks=None) -> VerificationReport:
    """Check the clan axioms exhaustively over the working set.

    Universality of each base change is tested against ``test_objects``
    (default: the clan's probe objects, else the whole working set).
    ``checks`` restricts the run to the named axioms of :data:`CLAN_CHECKS`.
    """
    wanted = set(CLAN_CHECKS if checks is None else checks)
    unknown = wanted - set(CLAN_CHECKS)
    if unknown:
        raise ValueError(f"unknown clan check {sorted(unknown)[0]!r}")
    objs = list(c.objects)
    if c.terminal not in objs:
        raise ClanError(f"unknown terminal id {c.terminal!r}")
    probes = list(c.test_objects() if test_objects is None else test_objects)
    mors = list(c.morphisms())
    fib = {f: c.is_fibration(f) for f in mors}
    fibs = [f for f in mors if fib[f]]
    out_fibs: dict = defaultdict(list)
    into: dict = defaultdict(list)
    for f in fibs:
        out_fibs[c.src(f)].append(f)
    for f in mors:
        into[c.tgt(f)].append(f)
    rep = VerificationReport()

    if "terminal_object" in wanted:
        with rep.check("terminal_object") as chk:
            for X in objs:
                n = len(c.hom(X, c.terminal))
                if n != 1:
                    chk.fail({"object": c.name(X), "maps_to_terminal": n})
                    break

    if "isomorphisms_are_fibrations" in wanted:
        with rep.check("isomorphisms_are_fibrations") as chk:
            for f in mors:
                if not fib[f] and c.is_iso(f):
                    chk.fail({"iso": c.name(f)})
                    break

    if "fibrations_compose" in wanted:
        with rep.check("fibrations_compose") as chk:
            for f in fibs:
                for g in out_fibs.get(c.tgt(f), ()):
                    if not c.is_fibration(c.compose(g, f)):
                        chk.fail({"pair": [c.name(g), c.name(f)], "composite": c.name(c.compose(g, f))})
                        break
                if chk.failed:
                    break

    if "maps_to_terminal_are_fibrations" in wanted:
        with rep.check("maps_to_terminal_are_fibrations") as chk:
            if "terminal_object" in rep and rep["terminal_object"].failed:
                chk.skip("no terminal object")
            else:
                for X in objs:
                    t = c.to_terminal(X)
                    if not c.is_fibration(t):
                        chk.fail({"object": c.name(X), "map": c.name(t)})
                        break

    if "fibrations_carrable" in wanted:
        with rep.check("fibrations_carrable") as chk:
            for p in fibs:
                for f in into.get(c.tgt(p), ()):
                    cone = c.pullback(f, p)
                    if cone is None:
                        chk.fail({"fibration": c.name(p), "along": c.name(f), "problem": "no pullback"})
                        break
                    sq = SquareData(top=cone.p2, left=cone.p1, right=p, bottom=f)
                    bad = cartesian_obstruction(c, sq, probes)
                    if bad is not None:
                        chk.fail({"fibration": c.name(p), "along": c.name(f), "cone": bad})
                        break
                if chk.failed:
                    break

    if "base_changes_are_fibrations" in wanted:
        with rep.check("base_changes_are_fibrations") as chk:
            for p in fibs:
                for f in into.get(c.tgt(p), ()):
                    cone = c.pullback(f, p)
                    if cone is not None and not c.is_fibration(cone.p1):
                        chk.fail({
                            "fibration": c.name(p),
                            "along": c.name(f),
                            "base_change": c.name(cone.p1),
                        })
                        break
                if chk.failed:
                    break
    return rep


def is_cartesian_projection(c: Clan, f, objects=None) -> bool:
    """Is ``f: X -> A`` isomorphic over ``A`` to a product projection ``A×B -> A``?"""
    X, A = c.src(f), c.tgt(f)
    for B in (c.objects if objects is None else objects):
        cone = c.product(A, B)
        if cone is None:
            continue
        for phi in c.hom(X, cone.apex):
            if c.compose(cone.p1, phi) == f and c.is_iso(phi):
                return True
    return False


def smallest_clan(p: CategoryPresentation, alternatives: Iterable[ClanStructure] = ()) -> ClanStructure:
    """Clan structure whose fibrations are exactly the cartesian projections.

    ``result.report`` records, for each supplied alternative that is a valid
    clan, whether it contains every cartesian projection.
    """
    terminal = None
    for T in p.objects:
        if all(len(p.hom(X, T)) == 1 for X in p.objects):
            terminal = T
            break
    if terminal is None:
        raise ClanError("presentation has no terminal object")
    everything = ClanStructure(p, terminal, [m.id for m in p.morphisms])
    for i, A in enumerate(p.objects):
        for B in p.objects[i:]:
            if everything.product(A, B) is None:
                raise ClanError(f"no product of {A!r} and {B!r}")
    fibs = [f for f in everything.morphisms() if is_cartesian_projection(everything, f)]
    out = ClanStructure(p, terminal, fibs)
    rep = VerificationReport()
    for k, alt in enumerate(alternatives):
        if not verify_clan(alt).ok:
            rep.record(f"alternative_{k}", True, note="not a clan; ignored")
            continue
        missing = sorted(set(fibs) - set(alt.fibration_ids))
        rep.record(f"alternative_{k}", not missing, {"missing": missing})
    out.report = rep
    return out


# ------------------------------------------------------------------ slices

@dataclass(frozen=True)
class SliceObject:
    total: Any
    structure: Any


@dataclass(frozen=True)
class SliceMap:
    src: SliceObject
    tgt: SliceObject
    map: Any


class SliceClan(Clan):
    """The clan of fibrations over ``A`` with fibrations detected underneath."""

    def __init__(self, base: Clan, A):
        self.base = base
        self.base_object = A
        self.terminal = SliceObject(A, base.identity(A))
        self._objects = None
        if base.probe_objects is not None:
            self.probe_objects = tuple(
                SliceObject(T, t)
                for T in base.probe_objects
                for t in base.hom(T, A)
                if base.is_fibration(t)
            )

    @property
    def objects(self):
        if self._objects is None:
            b = self.base
            self._objects = tuple(
                SliceObject(X, p)
                for X in b.objects
                for p in b.hom(X, self.base_object)
                if b.is_fibration(p)
            )
        return self._objects

    def hom(self, a: SliceObject, b: SliceObject):
        B = self.base
        return tuple(
            SliceMap(a, b, h)
            for h in B.hom(a.total, b.total)
            if B.compose(b.structure, h) == a.structure
        )

    def src(self, f):
        return f.src

    def tgt(self, f):
        return f.tgt

    def compose(self, g, f):
        return SliceMap(f.src, g.tgt, self.base.compose(g.map, f.map))

    def identity(self, a):
        return SliceMap(a, a, self.base.identity(a.total))

    def name(self, x):
        n = self.base.name
        if isinstance(x, SliceObject):
            return f"({n(x.total)},{n(x.structure)})"
        return f"{n(x.map)}:{self.name(x.src)}->{self.name(x.tgt)}"

    def is_fibration(self, f):
        return self.base.is_fibration(f.map)

    def is_iso(self, f):
        return self.base.is_iso(f.map)

    def to_terminal(self, X):
        return SliceMap(X, self.terminal, X.structure)

    def pullback(self, f, g):
        cone = self.base.pullback(f.map, g.map)
        if cone is None:
            return None
        B = self.base
        apex = SliceObject(cone.apex, B.compose(f.src.structure, cone.p1))
        return Cone(
            apex,
            SliceMap(apex, f.src, cone.p1),
            SliceMap(apex, g.src, cone.p2),
            f,
            g,
            cone,
        )

    def mediate(self, cone, a, b):
        m = self.base.mediate(cone.data, a.map, b.map)
        return SliceMap(a.src, cone.apex, m)


def slice_clan(c: Clan, A) -> SliceClan:
    if not c.contains(A):
        raise ClanError(f"unknown object {c.name(A)!r}")
    if hasattr(c, "slice"):
        return c.slice(A)
    return SliceClan(c, A)


# -------------------------------------------------------- clan morphisms

@dataclass
class ClanMorphismData:
    """A functor between clans given by object and morphism callables."""

    source: Any
    target: Any
    ob: Callable
    mor: Callable
    label: str = ""
    report: VerificationReport | None = None

    @classmethod
    def from_functor(cls, F: FunctorData, label: str = ""):
        return cls(F.source, F.target, F.ob, F.mor, label)

    def functor_data(self, objects=None) -> FunctorData:
        S = self.source
        objs = list(S.objects if objects is None else objects)
        return FunctorData(
            S,
            self.target,
            {x: self.ob(x) for x in objs},
            {f: self.mor(f) for f in S.morphisms(objs)},
        )


def identity_morphism(c: Clan) -> ClanMorphismData:
    return ClanMorphismData(c, c, lambda x: x, lambda f: f, "identity")


def verify_clan_morphism(
    F: ClanMorphismData | FunctorData,
    iso_fibration: bool = False,
    objects=None,
    test_objects=None,
) -> VerificationReport:
    if isinstance(F, FunctorData):
        F = ClanMorphismData.from_functor(F)
    S, T = F.source, F.target
    objs = list(S.objects if objects is None else objects)
    probes = list(T.test_objects() if test_objects is None else test_objects)
    mors = list(S.morphisms(objs))
    rep = VerificationReport()

    with rep.check("functor_laws") as chk:
        for x in objs:
            if F.mor(S.identity(x)) != T.identity(F.ob(x)):
                chk.fail({"identity_at": S.name(x)})
                break
        if not chk.failed:
            out: dict = defaultdict(list)
            for f in mors:
                out[S.src(f)].append(f)
            for f in mors:
                for g in out.get(S.tgt(f), ()):
                    if F.mor(S.compose(g, f)) != T.compose(F.mor(g), F.mor(f)):
                        chk.fail({"pair": [S.name(g), S.name(f)]})
                        break
                if chk.failed:
                    break

    with rep.check("preserves_fibrations") as chk:
        for f in mors:
            if S.is_fibration(f) and not T.is_fibration(F.mor(f)):
                chk.fail({"fibration": S.name(f), "image": T.name(F.mor(f))})
                break

    with rep.check("preserves_terminal") as chk:
        img = F.ob(S.terminal)
        try:
            ok = T.is_iso(T.to_terminal(img))
        except ClanError:
            ok = False
        if not ok:
            chk.fail({"image_of_terminal": T.name(img)})

    with rep.check("preserves_base_changes") as chk:
        into: dict = defaultdict(list)
        for f in mors:
            into[S.tgt(f)].append(f)
        for p in mors:
            if not S.is_fibration(p):
                continue
            for f in into.get(S.tgt(p), ()):
                cone = S.pullback(f, p)
                if cone is None:
                    continue
                sq = SquareData(
                    top=F.mor(cone.p2), left=F.mor(cone.p1), right=F.mor(p), bottom=F.mor(f)
                )
                try:
                    bad = cartesian_obstruction(T, sq, probes)
                except fincat.SquareError as e:
                    bad = str(e)
                if bad is not None:
                    chk.fail({"fibration": S.name(p), "along": S.name(f), "cone": bad})
                    break
            if chk.failed:
                break

    if iso_fibration:
        with rep.check("iso_fibration") as chk:
            for x in objs:
                fx = F.ob(x)
                lifts = {F.mor(e) for y in objs for e in S.hom(x, y) if S.is_iso(e)}
                for y in T.objects:
                    for e in T.hom(fx, y):
                        if T.is_iso(e) and e not in lifts:
                            chk.fail({"object": S.name(x), "iso": T.name(e)})
                            break
                    if chk.failed:
                        break
                if chk.failed:
                    break
    return rep


def base_change(c: Clan, f) -> ClanMorphismData:
    """``f*: E(B) -> E(A)`` along ``f: A -> B`` using canonical pullbacks."""
    A, B = c.src(f), c.tgt(f)
    source, target = slice_clan(c, B), slice_clan(c, A)
    cones: dict = {}

    def cone_for(X: SliceObject):
        if X not in cones:
            cone = c.pullback(f, X.structure)
            if cone is None:
                raise ClanError(
                    f"no pullback of {c.name(f)!r} along {c.name(X.structure)!r}"
                )
            cones[X] = cone
        return cones[X]

    def ob(X):
        return SliceObject(cone_for(X).apex, cone_for(X).p1)

    def mor(h):
        cx, cy = cone_for(h.src), cone_for(h.tgt)
        m = c.mediate(cy, cx.p1, c.compose(h.map, cx.p2))
        return SliceMap(ob(h.src), ob(h.tgt), m)

    return ClanMorphismData(source, target, ob, mor, f"base change along {c.name(f)}")


def sigma_along(c: Clan, f, verify: bool = False, objects=None) -> ClanMorphismData:
    """``Σ_f: E(A) -> E(B)``, post-composition with the fibration ``f``."""
    if not c.is_fibration(f):
        raise ClanError(f"{c.name(f)!r} is not a fibration")
    A, B = c.src(f), c.tgt(f)
    source, target = slice_clan(c, A), slice_clan(c, B)

    def ob(X):
        return SliceObject(X.total, c.compose(f, X.structure))

    def mor(h):
        return SliceMap(ob(h.src), ob(h.tgt), h.map)

    F = ClanMorphismData(source, target, ob, mor, f"sum along {c.name(f)}")
    if verify:
        F.report = verify_sigma_adjunction(c, f, objects)
    return F


def verify_sigma_adjunction(c: Clan, f, objects=None) -> VerificationReport:
    """``Hom_B(Σ_f E, Y) ≅ Hom_A(E, f* Y)`` for every pair in the working set."""
    sig = sigma_along(c, f)
    bc = base_change(c, f)
    EA, EB = sig.source, sig.target
    srcs = list(EA.objects if objects is None else objects)
    rep = VerificationReport()
    with rep.check("sum_base_change_adjunction") as chk:
        for E in srcs:
            for Y in EB.objects:
                cone = c.pullback(f, Y.structure)
                left = EB.hom(sig.ob(E), Y)
                right = set(EA.hom(E, bc.ob(Y)))
                image = [
                    SliceMap(E, bc.ob(Y), c.mediate(cone, E.structure, v.map)) for v in left
                ]
                if len(set(image)) != len(left) or set(image) != right:
                    chk.fail({"E": EA.name(E), "Y": EB.name(Y), "left": len(left), "right": len(right)})
                    break
            if chk.failed:
                break
    return rep


def fiber_cone(c: Clan, p, x) -> Cone:
    cone = c.pullback(x, p)
    if cone is None:
        raise ClanError(f"no fiber of {c.name(p)!r} at {c.name(x)!r}")
    return cone


def fiber_of(c: Clan, p, x):
    """Fiber of ``p: E -> A`` at a point ``x: 1 -> A``."""
    if not c.is_fibration(p):
        raise ClanError(f"{c.name(p)!r} is not a fibration")
    if c.src(x) != c.terminal:
        raise ClanError(f"{c.name(x)!r} is not a point")
    return fiber_cone(c, p, x).apex


# ----------------------------------------------------------- Reedy squares

def gap_map(c: Clan, s: SquareData):
    """``(left, top): X00 -> X01 ×_{X11} X10`` into the canonical pullback."""
    cone = c.pullback(s.bottom, s.right)
    if cone is None:
        raise ClanError(
            f"no pullback of {c.name(s.bottom)!r} and {c.name(s.right)!r}"
        )
    return c.mediate(cone, s.left, s.top)


def is_reedy_fibrant(c: Clan, s: SquareData) -> bool:
    if not fincat.square_commutes(c, s):
        raise fincat.SquareError("square does not commute")
    if not (c.is_fibration(s.bottom) and c.is_fibration(s.right)):
        return False
    return c.is_fibration(gap_map(c, s))


@dataclass(frozen=True)
class ArrowMap:
    src: Any
    tgt: Any
    top: Any
    bottom: Any


class ArrowClan(Clan):
    """Fibrations of ``base`` as objects; Reedy fibrations as fibrations."""

    def __init__(self, base: Clan, objects=None):
        self.base = base
        self.terminal = base.identity(base.terminal)
        self._given = objects
        self._objects = None

    @property
    def objects(self):
        if self._objects is None:
            self._objects = tuple(self._given) if self._given is not None else tuple(self.base.fibrations())
        return self._objects

    def hom(self, f, g):
        B = self.base
        by_image = defaultdict(list)
        for b in B.hom(B.tgt(f), B.tgt(g)):
            by_image[B.compose(b, f)].append(b)
        return tuple(
            ArrowMap(f, g, a, b)
            for a in B.hom(B.src(f), B.src(g))
            for b in by_image.get(B.compose(g, a), ())
        )

    def src(self, m):
        return m.src

    def tgt(self, m):
        return m.tgt

    def compose(self, n, m):
        B = self.base
        return ArrowMap(m.src, n.tgt, B.compose(n.top, m.top), B.compose(n.bottom, m.bottom))

    def identity(self, f):
        B = self.base
        return ArrowMap(f, f, B.identity(B.src(f)), B.identity(B.tgt(f)))

    def name(self, x):
        n = self.base.name
        if isinstance(x, ArrowMap):
            return f"[{n(x.top)},{n(x.bottom)}]"
        return n(x)

    def is_iso(self, m):
        return self.base.is_iso(m.top) and self.base.is_iso(m.bottom)

    def square(self, m) -> SquareData:
        return SquareData(top=m.top, left=m.src, right=m.tgt, bottom=m.bottom)

    def is_fibration(self, m):
        return is_reedy_fibrant(self.base, self.square(m))

    def pullback(self, m, n):
        B = self.base
        top = B.pullback(m.top, n.top)
        bot = B.pullback(m.bottom, n.bottom)
        if top is None or bot is None:
            return None
        k = B.mediate(bot, B.compose(m.src, top.p1), B.compose(n.src, top.p2))
        if not B.is_fibration(k):
            return None
        return Cone(
            k,
            ArrowMap(k, m.src, top.p1, bot.p1),
            ArrowMap(k, n.src, top.p2, bot.p2),
            m,
            n,
            (top, bot),
        )

    def mediate(self, cone, a, b):
        top, bot = cone.data
        B = self.base
        return ArrowMap(a.src, cone.apex, B.mediate(top, a.top, b.top), B.mediate(bot, a.bottom, b.bottom))


def arrow_clan(c: Clan, cap: int | None = None) -> ArrowClan:
    out = ArrowClan(c)
    if cap is not None and len(out.objects) > cap:
        raise ClanError(f"arrow clan has {len(out.objects)} objects, cap is {cap}")
    return out


# ------------------------------------------------------------------- spans

@dataclass(frozen=True)
class SpanData:
    """``left: X01 -> X0`` and ``right: X01 -> X1``."""

    left: Any
    right: Any


def span_pairing(c: Clan, s: SpanData):
    return c.pair(s.left, s.right)


def is_fibrant_span(c: Clan, s: SpanData) -> bool:
    return c.is_fibration(span_pairing(c, s))


def identity_span(c: Clan, A) -> SpanData:
    i = c.identity(A)
    return SpanData(i, i)


def compose_spans(c: Clan, X: SpanData, Y: SpanData) -> SpanData:
    """Compose ``A <- X01 -> B`` with ``B <- Y01 -> C`` through the middle pullback."""
    if c.tgt(X.right) != c.tgt(Y.left):
        raise ClanError("spans do not meet")
    for s in (X, Y):
        if not is_fibrant_span(c, s):
            raise ClanError("spans must be fibrant")
    cone = c.pullback(X.right, Y.left)
    if cone is None:
        raise ClanError("middle pullback absent")
    return SpanData(c.compose(X.left, cone.p1), c.compose(Y.right, cone.p2))


@dataclass(frozen=True)
class SpanMap:
    src: SpanData
    tgt: SpanData
    f0: Any
    f01: Any
    f1: Any


class SpanClan(Clan):
    """Fibrant spans with Reedy fibrations between them."""

    def __init__(self, base: Clan, objects=None):
        self.base = base
        t = base.identity(base.terminal)
        self.terminal = SpanData(t, t)
        self._given = objects
        self._objects = None

    @property
    def objects(self):
        if self._objects is None:
            if self._given is not None:
                self._objects = tuple(self._given)
            else:
                B = self.base
                self._objects = tuple(
                    SpanData(l, r)
                    for X in B.objects
                    for X0 in B.objects
                    for l in B.hom(X, X0)
                    for X1 in B.objects
                    for r in B.hom(X, X1)
                    if is_fibrant_span(B, SpanData(l, r))
                )
        return self._objects

    def hom(self, s, t):
        B = self.base
        X, Y = B.src(s.left), B.src(t.left)
        out = []
        for f01 in B.hom(X, Y):
            for f0 in B.hom(B.tgt(s.left), B.tgt(t.left)):
                if B.compose(f0, s.left) != B.compose(t.left, f01):
                    continue
                for f1 in B.hom(B.tgt(s.right), B.tgt(t.right)):
                    if B.compose(f1, s.right) == B.compose(t.right, f01):
                        out.append(SpanMap(s, t, f0, f01, f1))
        return tuple(out)

    def src(self, m):
        return m.src

    def tgt(self, m):
        return m.tgt

    def compose(self, n, m):
        B = self.base
        return SpanMap(
            m.src, n.tgt, B.compose(n.f0, m.f0), B.compose(n.f01, m.f01), B.compose(n.f1, m.f1)
        )

    def identity(self, s):
        B = self.base
        return SpanMap(
            s, s, B.identity(B.tgt(s.left)), B.identity(B.src(s.left)), B.identity(B.tgt(s.right))
        )

    def name(self, x):
        n = self.base.name
        if isinstance(x, SpanMap):
            return f"<{n(x.f0)},{n(x.f01)},{n(x.f1)}>"
        return f"<{n(x.left)}|{n(x.right)}>"

    def is_iso(self, m):
        B = self.base
        return B.is_iso(m.f0) and B.is_iso(m.f01) and B.is_iso(m.f1)

    def is_fibration(self, m):
        B = self.base
        if not (B.is_fibration(m.f0) and B.is_fibration(m.f1)):
            return False
        s, t = m.src, m.tgt
        prod_s = B.product(B.tgt(s.left), B.tgt(s.right))
        prod_t = B.product(B.tgt(t.left), B.tgt(t.right))
        f0f1 = B.mediate(prod_t, B.compose(m.f0, prod_s.p1), B.compose(m.f1, prod_s.p2))
        pair_t = B.mediate(prod_t, t.left, t.right)
        cone = B.pullback(f0f1, pair_t)
        if cone is None:
            return False
        gap = B.mediate(cone, B.mediate(prod_s, s.left, s.right), m.f01)
        return B.is_fibration(gap)

    def pullback(self, m, n):
        B = self.base
        c0 = B.pullback(m.f0, n.f0)
        c01 = B.pullback(m.f01, n.f01)
        c1 = B.pullback(m.f1, n.f1)
        if c0 is None or c01 is None or c1 is None:
            return None
        s, t = m.src, n.src
        left = B.mediate(c0, B.compose(s.left, c01.p1), B.compose(t.left, c01.p2))
        right = B.mediate(c1, B.compose(s.right, c01.p1), B.compose(t.right, c01.p2))
        apex = SpanData(left, right)
        if not is_fibrant_span(B, apex):
            return None
        return Cone(
            apex,
            SpanMap(apex, s, c0.p1, c01.p1, c1.p1),
            SpanMap(apex, t, c0.p2, c01.p2, c1.p2),
            m,
            n,
            (c0, c01, c1),
        )

    def mediate(self, cone, a, b):
        c0, c01, c1 = cone.data
        B = self.base
        return SpanMap(
            a.src,
            cone.apex,
            B.mediate(c0, a.f0, b.f0),
            B.mediate(c01, a.f01, b.f01),
            B.mediate(c1, a.f1, b.f1),
        )


def span_clan(c: Clan, objects=None) -> SpanClan:
    return SpanClan(c, objects)


# ---------------------------------------------------------- generic element

def _count_morphisms(c: Clan) -> int:
    return sum(1 for _ in c.morphisms())


def verify_generic_element(c: Clan, A, r: Clan, cap: int = 12) -> VerificationReport:
    """Compare clan morphisms ``E(A) -> R`` with pairs ``(F, a: 1 -> F(A))``.

    The comparison sends ``H`` to ``(H∘e_A, H(δ_A))``.  Everything is
    enumerated, so both clans must stay within ``cap`` morphisms.
    """
    for label, cl in (("clan", c), ("target", r)):
        n = _count_morphisms(cl)
        if n > cap:
            raise ClanError(f"{label} has {n} morphisms, generic-element cap is {cap}")
    EA_lazy = slice_clan(c, A)
    EA = materialize(EA_lazy)
    lab = EA.labels
    C = c if isinstance(c, ClanStructure) else materialize(c)
    clab = C.labels if C is not c else {x: x for x in list(c.objects) + list(c.morphisms())}
    R = r

    prod_cache: dict = {}

    def prod(X):
        if X not in prod_cache:
            cone = c.product(A, X)
            if cone is None:
                raise ClanError(f"no product of {c.name(A)!r} and {c.name(X)!r}")
            prod_cache[X] = cone
        return prod_cache[X]

    def e_ob(X):
        cone = prod(X)
        return SliceObject(cone.apex, cone.p1)

    def e_mor(h):
        cx, cy = prod(c.src(h)), prod(c.tgt(h))
        m = c.mediate(cy, cx.p1, c.compose(h, cx.p2))
        return SliceMap(e_ob(c.src(h)), e_ob(c.tgt(h)), m)

    for X in c.objects:
        if e_ob(X) not in lab:
            raise ClanError(
                f"{c.name(A)}×{c.name(X)} is outside the working set; "
                "the generic element needs every product with A"
            )
    e_A = FunctorData(
        C,
        EA,
        {clab[X]: lab[e_ob(X)] for X in c.objects},
        {clab[h]: lab[e_mor(h)] for h in c.morphisms()},
    )
    cAA = prod(A)
    delta = lab[SliceMap(EA_lazy.terminal, e_ob(A), c.mediate(cAA, c.identity(A), c.identity(A)))]
    oneA = lab[EA_lazy.terminal]
    A_id = clab[A]

    def clan_morphisms(S):
        return [F for F in fincat.enumerate_functors(S, R) if verify_clan_morphism(F).ok]

    Hs = clan_morphisms(EA)
    Fs = clan_morphisms(C)
    rep = VerificationReport()

    def compare(H):
        F = FunctorData(
            C, R,
            {x: H.ob(e_A.ob(x)) for x in C.objects},
            {f: H.mor(e_A.mor(f)) for f in C.morphisms()},
        )
        to_one = R.inverse(R.to_terminal(H.ob(oneA)))
        a = R.compose(H.mor(delta), to_one)
        return F, a

    with rep.check("comparison_lands_in_pairs") as chk:
        images = []
        for H in Hs:
            F, a = compare(H)
            if not verify_clan_morphism(F).ok:
                chk.fail({"H": H.on_objects})
                break
            images.append((F, a))
        chk.note = f"{len(Hs)} morphisms out of the slice, {len(Fs)} out of the clan"

    def pair_iso(F1, a1, F2, a2):
        for comp in fincat.enumerate_natural_transformations(F1, F2):
            if all(R.is_iso(v) for v in comp.values()) and R.compose(comp[A_id], a1) == a2:
                return comp
        return None

    pairs = [(F, a) for F in Fs for a in R.hom(R.terminal, F.ob(A_id))]
    with rep.check("essentially_surjective") as chk:
        for F, a in pairs:
            if not any(pair_iso(F1, a1, F, a) is not None for F1, a1 in images):
                chk.fail({"F": {k: v for k, v in F.on_objects.items()}, "a": a})
                break
        chk.note = f"{len(pairs)} pairs (F, a)"

    with rep.check("fully_faithful") as chk:
        for i, H in enumerate(Hs):
            F, a = images[i]
            for j, H2 in enumerate(Hs):
                F2, a2 = images[j]
                nats = list(fincat.enumerate_natural_transformations(H, H2))
                whiskered = [
                    tuple(sorted((x, al[e_A.ob(x)]) for x in C.objects)) for al in nats
                ]
                targets = [
                    tuple(sorted(th.items()))
                    for th in fincat.enumerate_natural_transformations(F, F2)
                    if R.compose(th[A_id], a) == a2
                ]
                if len(set(whiskered)) != len(nats) or set(whiskered) != set(targets):
                    chk.fail({"pair": [i, j], "source_nats": len(nats), "target_nats": len(targets)})
                    break
            if chk.failed:
                break
    return rep
