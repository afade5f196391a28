"""Dependent products, exponentials, their laws, polynomial functors and isCont.

A :class:`PiTribe` supplies ``internal_product`` and ``exponential``; the
checks here treat those constructions as black boxes and verify them by
exhaustive hom-set bijections.  Polynomial functors live on plain finite
sets given by labelled elements, independent of any model.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Mapping, Sequence

from .clan import ClanError
from .fincat import Cone
from .report import SKIPPED, Check, VerificationReport
from .tribe import (
    TribeStructure,
    Tribe,
    is_anodyne,
    is_contractible,
    is_mere_proposition,
    homotopy_classes,
    path_object,
    same_class,
)


@dataclass(frozen=True)
class InternalProductData:
    """``Π_f(E, p)`` with its structure map and evaluation ``f*(Π) -> E``."""

    obj: Any
    structure: Any
    cone: Cone  # pullback of f along the structure map
    evaluation: Any
    p: Any
    f: Any


@dataclass(frozen=True)
class ExponentialData:
    obj: Any
    evaluation: Any
    cone: Cone  # [A,B] × A
    abstract: Callable = field(compare=False)
    A: Any = None
    B: Any = None


class PiTribe(Tribe):
    """Tribe with internal products; the defaults search the working set."""

    def internal_product(self, p, f) -> InternalProductData:
        return search_internal_product(self, p, f)

    def exponential(self, A, B) -> ExponentialData:
        return exponential_from_product(self, A, B)


def search_internal_product(m: Tribe, p, f, objects=None) -> InternalProductData:
    """First cofree candidate ``(X, s, ε)`` in the working set, in search order."""
    B, E = m.tgt(f), m.src(p)
    for X in (m.objects if objects is None else objects):
        for s in m.hom(X, B):
            if not m.is_fibration(s):
                continue
            cone = m.pullback(f, s)
            if cone is None:
                continue
            for ev in m.maps_over(cone.apex, cone.p1, E, p):
                P = InternalProductData(X, s, cone, ev, p, f)
                if verify_cofree(m, P).ok:
                    return P
    raise ClanError(f"no internal product of {m.name(p)!r} along {m.name(f)!r} in the working set")


def exponential_from_product(m: PiTribe, A, B) -> ExponentialData:
    """``[A, B] = Π_{A->1}(A×B -> A)`` with abstraction found by search."""
    AB = m.product(A, B)
    P = m.internal_product(AB.p1, m.to_terminal(A))
    X = P.obj
    cone = m.product(X, A)
    swap = m.mediate(P.cone, cone.p2, cone.p1)
    ev = m.compose(AB.p2, m.compose(P.evaluation, swap))

    def abstract(C, h):
        CA = m.product(C, A)
        for v in m.hom(C, X):
            if m.compose(ev, m.mediate(cone, m.compose(v, CA.p1), CA.p2)) == h:
                return v
        raise ClanError("exponential has no transpose; it is not cofree")

    return ExponentialData(X, ev, cone, abstract, A, B)


def exponential(m: PiTribe, A, B) -> ExponentialData:
    return m.exponential(A, B)


def internal_product(m: PiTribe, p, f) -> InternalProductData:
    if not (m.is_fibration(p) and m.is_fibration(f)):
        raise ClanError("internal products are taken of fibrations along fibrations")
    if m.tgt(p) != m.src(f):
        raise ClanError("p and f do not compose")
    return m.internal_product(p, f)


def transpose(m: PiTribe, P: InternalProductData, C, g, v):
    """``ε∘f*(v): f*C -> E`` for ``v: C -> Π`` over the base."""
    cC = m.pullback(P.f, g)
    fv = m.mediate(P.cone, cC.p1, m.compose(v, cC.p2))
    return cC, m.compose(P.evaluation, fv)


def verify_cofree(m: PiTribe, P: InternalProductData, objects=None) -> VerificationReport:
    """``v -> ε∘f*(v)`` is a bijection ``Hom_B(C, Π) -> Hom_A(f*C, E)`` for all ``(C, g)``."""
    B = m.tgt(P.f)
    E = m.src(P.p)
    rep = VerificationReport()
    with rep.check("structure_map_is_fibration") as chk:
        if not m.is_fibration(P.structure):
            chk.fail(m.name(P.structure))
    with rep.check("evaluation_over_base") as chk:
        if m.compose(P.p, P.evaluation) != P.cone.p1:
            chk.fail(m.name(P.evaluation))
    with rep.check("cofree") as chk:
        for C in (m.objects if objects is None else objects):
            for g in m.hom(C, B):
                if not m.is_fibration(g):
                    continue
                cC = m.pullback(P.f, g)
                if cC is None:
                    chk.fail({"C": m.name(C), "g": m.name(g), "problem": "no pullback along f"})
                    break
                vs = list(m.maps_over(C, g, P.obj, P.structure))
                images = [transpose(m, P, C, g, v)[1] for v in vs]
                targets = set(m.maps_over(cC.apex, cC.p1, E, P.p))
                if len(set(images)) != len(vs):
                    chk.fail({"C": m.name(C), "g": m.name(g), "problem": "not injective"})
                    break
                if set(images) != targets:
                    chk.fail({
                        "C": m.name(C), "g": m.name(g), "problem": "not surjective",
                        "maps_into_product": len(vs), "maps_into_E": len(targets),
                    })
                    break
            if chk.failed:
                break
    return rep


def pi_on_map(m: PiTribe, f, P: InternalProductData, Q: InternalProductData, h):
    """``Π_f(h): Π_f E -> Π_f E'`` for ``h: E -> E'`` over ``A``, via cofreeness."""
    target = m.compose(h, P.evaluation)
    for v in m.maps_over(P.obj, P.structure, Q.obj, Q.structure):
        if transpose(m, Q, P.obj, P.structure, v)[1] == target:
            return v
    raise ClanError("no transpose found; internal product is not cofree")


def verify_exponential(m: PiTribe, X: ExponentialData, objects=None) -> VerificationReport:
    """β and η for every test object ``C``."""
    rep = VerificationReport()
    A, B = X.A, X.B
    with rep.check("beta") as chk, rep.check("eta") as chk_eta:
        for C in (m.objects if objects is None else objects):
            CA = m.product(C, A)
            for h in m.hom(CA.apex, B):
                lam = X.abstract(C, h)
                lamA = m.mediate(X.cone, m.compose(lam, CA.p1), CA.p2)
                if m.compose(X.evaluation, lamA) != h:
                    chk.fail({"C": m.name(C), "map": m.name(h)})
                    break
            for g in m.hom(C, X.obj):
                gA = m.mediate(X.cone, m.compose(g, CA.p1), CA.p2)
                if X.abstract(C, m.compose(X.evaluation, gA)) != g:
                    chk_eta.fail({"C": m.name(C), "map": m.name(g)})
                    break
            if chk.failed or chk_eta.failed:
                break
    return rep


# ----------------------------------------------------------------- laws

LAWS = ("beck_chevalley", "frobenius1", "frobenius2", "distributivity", "fubini")


def _iso_check(rep, m, name, X, a, Y, b):
    iso = m.iso_over(X, a, Y, b)
    rep.record(
        name,
        iso is not None,
        {"left": m.name(X), "right": m.name(Y)},
        note="" if iso is None else f"iso {m.name(iso)}",
    )


def verify_law(m: PiTribe, law: str, instance: Mapping) -> VerificationReport:
    """Compute both sides of a law on ``instance`` and search an iso over the base.

    Instances name morphisms of the model:

    - ``beck_chevalley``: ``f: A -> B`` fibration, ``g: D -> B``, ``e: E -> A`` fibration
    - ``frobenius1``: ``f: A -> B``, ``g: B -> C``, ``x: X -> C`` fibration
    - ``frobenius2``: ``x: X -> A`` fibration, ``f: A -> B`` fibration, ``y: Y -> B``
    - ``distributivity``: ``x: X -> A``, ``f: A -> B``, ``g: B -> C`` fibrations
    - ``fubini``: ``e: E -> A×B`` fibration over a canonical product, with ``A``, ``B``
    """
    try:
        check = _LAW_CHECKS[law]
    except KeyError:
        raise ValueError(f"unknown law {law!r}; expected one of {', '.join(LAWS)}") from None
    rep = VerificationReport()
    check(m, instance, rep)
    return rep


def _need(instance, *keys):
    for k in keys:
        if k not in instance:
            raise ValueError(f"law instance is missing {k!r}")
    return [instance[k] for k in keys]


def _beck_chevalley(m, inst, rep):
    f, g, e = _need(inst, "f", "g", "e")
    if m.tgt(f) != m.tgt(g) or m.tgt(e) != m.src(f):
        raise ValueError("instance shape mismatch for beck_chevalley")
    sq = m.pullback(g, f)  # apex C, p1 = u': C -> D, p2: C -> A
    fprime, gprime = sq.p1, sq.p2
    # sums: g*(Σ_f E) versus Σ_{f'} g'*(E)
    left = m.pullback(g, m.compose(f, e))
    inner = m.pullback(gprime, e)
    _iso_check(rep, m, "sum_square", left.apex, left.p1, inner.apex, m.compose(fprime, inner.p1))
    # products: g*(Π_f E) versus Π_{f'} g'*(E)
    P = internal_product(m, e, f)
    leftP = m.pullback(g, P.structure)
    Q = internal_product(m, inner.p1, fprime)
    _iso_check(rep, m, "product_square", leftP.apex, leftP.p1, Q.obj, Q.structure)


def _frobenius1(m, inst, rep):
    f, g, x = _need(inst, "f", "g", "x")
    if m.tgt(f) != m.src(g) or m.tgt(x) != m.tgt(g):
        raise ValueError("instance shape mismatch for frobenius1")
    BX = m.pullback(g, x)
    left = m.pullback(f, BX.p1)
    right = m.pullback(m.compose(g, f), x)
    _iso_check(rep, m, "iterated_pullback", left.apex, left.p1, right.apex, right.p1)


def _frobenius2(m, inst, rep):
    x, f, y = _need(inst, "x", "f", "y")
    if m.tgt(x) != m.src(f) or m.tgt(y) != m.tgt(f):
        raise ValueError("instance shape mismatch for frobenius2")
    fY = m.pullback(f, y)
    left = m.pullback(x, fY.p1)
    right = m.pullback(m.compose(f, x), y)
    _iso_check(
        rep, m, "sum_of_pullback",
        left.apex, m.compose(f, m.compose(x, left.p1)),
        right.apex, m.compose(y, right.p2),
    )


def _distributivity(m, inst, rep):
    x, f, g = _need(inst, "x", "f", "g")
    if m.tgt(x) != m.src(f) or m.tgt(f) != m.src(g):
        raise ValueError("instance shape mismatch for distributivity")
    left = internal_product(m, m.compose(f, x), g)
    PA = internal_product(m, f, g)  # Π_g(A, f) over C
    # ε_A: g*Π_g(A) -> A, and p: g*Π_g(A) -> Π_g(A)
    eps, proj = PA.evaluation, PA.cone.p2
    pulled = m.pullback(eps, x)
    inner = internal_product(m, pulled.p1, proj)
    right_map = m.compose(PA.structure, inner.structure)
    _iso_check(rep, m, "distributivity", left.obj, left.structure, inner.obj, right_map)
    rep.checks[-1].note += f" sizes {m.name(left.obj)}, {m.name(inner.obj)}"


def _fubini(m, inst, rep):
    e, A, B = _need(inst, "e", "A", "B")
    AB = m.product(A, B)
    if m.tgt(e) != AB.apex:
        raise ValueError("e must live over the canonical product A×B")
    E = m.src(e)
    tA, tB = m.to_terminal(A), m.to_terminal(B)
    via_A = m.compose(tA, m.compose(AB.p1, e))
    via_B = m.compose(tB, m.compose(AB.p2, e))
    direct = m.to_terminal(E)
    rep.record("sum_over_product_iterates_first", via_A == direct, m.name(E))
    rep.record("sum_over_product_iterates_second", via_B == direct, m.name(E))
    # reindex along the swap B×A -> A×B and compare totals
    BA = m.product(B, A)
    swap = m.mediate(AB, BA.p2, BA.p1)
    swapped = m.pullback(swap, e)
    _iso_check(rep, m, "swap_invariance", swapped.apex, m.to_terminal(swapped.apex), E, direct)


_LAW_CHECKS = {
    "beck_chevalley": _beck_chevalley,
    "frobenius1": _frobenius1,
    "frobenius2": _frobenius2,
    "distributivity": _distributivity,
    "fubini": _fubini,
}


# ----------------------------------------------------------- isContr

def is_contr_witness(m: PiTribe, A, objects=None):
    """``isCont(A) = Σ_A Π_{p1}(PA)`` and a report on its three properties."""
    P = path_object(m, A)
    AA = P.square
    Pi = internal_product(m, P.pairing, AA.p1)
    K = Pi.obj
    one = m.terminal
    tA = m.to_terminal(A)
    rep = VerificationReport()
    rep.record("mere_proposition", is_mere_proposition(m, K), m.name(K))
    points = list(m.hom(one, K))
    contractible = is_contractible(m, A)
    rep.record(
        "inhabited_iff_contractible",
        bool(points) == contractible,
        {"points": len(points), "contractible": contractible},
    )
    with rep.check("points_are_contractions") as chk:
        seen = set()
        for c in points:
            a = m.compose(Pi.structure, c)
            at = m.compose(a, tA)
            x = m.mediate(AA, at, m.identity(A))
            h = m.compose(Pi.evaluation, m.mediate(Pi.cone, x, m.compose(c, tA)))
            if m.compose(P.d0, h) != at or m.compose(P.d1, h) != m.identity(A):
                chk.fail({"point": m.name(c), "problem": "not a contraction"})
                break
            seen.add((a, h))
        if not chk.failed:
            expected = sum(
                len(list(m.homotopies(m.compose(a, tA), m.identity(A))))
                for a in m.hom(one, A)
            )
            if len(seen) != len(points) or len(seen) != expected:
                chk.fail({"points": len(points), "contractions": expected})
    return K, rep


# ------------------------------------------------------- π-tribe checks

def fibration_pairs(m: PiTribe, objects=None, limit: int | None = None, seed: int | None = None):
    """Composable pairs ``(p: E -> A, f: A -> B)`` of fibrations.

    Pairs come in search order; with a ``seed`` the full list is shuffled
    by that seed before ``limit`` is applied.
    """
    objs = list(m.objects if objects is None else objects)
    pairs = []
    for A in objs:
        for B in objs:
            for f in m.hom(A, B):
                if not m.is_fibration(f):
                    continue
                for E in objs:
                    for p in m.hom(E, A):
                        if m.is_fibration(p):
                            pairs.append((p, f))
                            if seed is None and limit is not None and len(pairs) >= limit:
                                return pairs
    if seed is not None:
        random.Random(seed).shuffle(pairs)
    return pairs if limit is None else pairs[:limit]


def verify_pi_tribe(m: PiTribe, objects=None, pair_limit: int | None = None,
                    test_objects=None, exponential_objects=None,
                    seed: int | None = None) -> VerificationReport:
    """Cofree products, anodyne preservation and cartesian closure of Ho."""
    objs = list(m.objects if objects is None else objects)
    tests = list(m.test_objects() if test_objects is None else test_objects)
    rep = VerificationReport()
    pairs = fibration_pairs(m, objs, pair_limit, seed)
    with rep.check("internal_products_cofree") as chk:
        for p, f in pairs:
            try:
                P = internal_product(m, p, f)
            except ClanError as e:
                chk.fail({"p": m.name(p), "f": m.name(f), "problem": str(e)})
                break
            sub = verify_cofree(m, P, tests)
            if not sub.ok:
                chk.fail({"p": m.name(p), "f": m.name(f), "failed": [c.name for c in sub.failures]})
                break
        chk.note = f"{len(pairs)} fibration pairs"
    if rep["internal_products_cofree"].failed:
        for name in ("products_preserve_anodyne", "homotopy_category_closed"):
            rep.checks.append(Check(name, SKIPPED, note="internal products missing"))
        return rep
    with rep.check("products_preserve_anodyne") as chk:
        for p, f in pairs:
            E, A = m.src(p), m.tgt(p)
            P = internal_product(m, p, f)
            for E2 in objs:
                for u in m.hom(E2, E):
                    q = m.compose(p, u)
                    if not m.is_fibration(q) or is_anodyne(m, u) is None:
                        continue
                    Q = internal_product(m, q, f)
                    v = pi_on_map(m, f, Q, P, u)
                    if is_anodyne(m, v) is None:
                        chk.fail({"p": m.name(p), "f": m.name(f), "anodyne": m.name(u)})
                        break
                if chk.failed:
                    break
            if chk.failed:
                break
    with rep.check("homotopy_category_closed") as chk:
        eobjs = list(objs if exponential_objects is None else exponential_objects)
        for A in eobjs:
            for B in eobjs:
                try:
                    X = m.exponential(A, B)
                except ClanError as e:
                    chk.fail({"A": m.name(A), "B": m.name(B), "problem": str(e)})
                    break
                for C in eobjs:
                    CA = m.product(C, A)
                    left = homotopy_classes(m, CA.apex, B)
                    right = homotopy_classes(m, C, X.obj)
                    index = {g: i for i, cl in enumerate(right) for g in cl}
                    hit = {index[X.abstract(C, cl[0])] for cl in left}
                    if len(hit) != len(left) or len(hit) != len(right):
                        chk.fail({"C": m.name(C), "A": m.name(A), "B": m.name(B),
                                  "classes": [len(left), len(right)]})
                        break
                if chk.failed:
                    break
            if chk.failed:
                break
    return rep


# ------------------------------------------------------------ polynomials

def _fmt(x) -> str:
    return x if isinstance(x, str) else repr(x)


@dataclass(frozen=True)
class Family:
    """A finite set ``elements`` with a map ``index`` to a base set."""

    elements: tuple
    index: Mapping

    @classmethod
    def of(cls, elements: Iterable, index: Mapping | Callable):
        els = tuple(elements)
        if callable(index):
            return cls(els, {x: index(x) for x in els})
        return cls(els, {x: index[x] for x in els})

    def fiber(self, i) -> tuple:
        return tuple(x for x in self.elements if self.index[x] == i)

    def profile(self, base: Sequence) -> tuple:
        return tuple(len(self.fiber(i)) for i in base)

    def __len__(self):
        return len(self.elements)


@dataclass(frozen=True)
class PolynomialSpan:
    """``I <-u- E -p-> B -v-> J`` on labelled finite sets."""

    I: tuple
    E: tuple
    B: tuple
    J: tuple
    u: Mapping
    p: Mapping
    v: Mapping

    def __post_init__(self):
        for name, m, dom, cod in (
            ("u", self.u, self.E, self.I),
            ("p", self.p, self.E, self.B),
            ("v", self.v, self.B, self.J),
        ):
            codset = set(cod)
            for x in dom:
                if x not in m:
                    raise ValueError(f"map {name} is undefined at {x!r}")
                if m[x] not in codset:
                    raise ValueError(f"map {name} sends {x!r} outside its codomain")
            if set(m) - set(dom):
                raise ValueError(f"map {name} has keys outside its domain")

    @classmethod
    def from_dict(cls, d: Mapping) -> "PolynomialSpan":
        try:
            I, E, B, J = (tuple(d[k]) for k in "IEBJ")
            u, p, v = (dict(d[k]) for k in "upv")
        except KeyError as e:
            raise ValueError(f"polynomial span is missing {e.args[0]!r}") from None
        return cls(I, E, B, J, u, p, v)

    def to_dict(self) -> dict:
        return {
            "I": [_jsonable(x) for x in self.I],
            "E": [_jsonable(x) for x in self.E],
            "B": [_jsonable(x) for x in self.B],
            "J": [_jsonable(x) for x in self.J],
            "u": {_fmt(k): _jsonable(self.u[k]) for k in self.E},
            "p": {_fmt(k): _jsonable(self.p[k]) for k in self.E},
            "v": {_fmt(k): _jsonable(self.v[k]) for k in self.B},
        }

    def relabelled(self) -> "PolynomialSpan":
        """Same span with every element renamed to a short string."""
        names = {}
        for prefix, xs in (("i", self.I), ("e", self.E), ("b", self.B), ("j", self.J)):
            for k, x in enumerate(xs):
                names[(prefix, x)] = f"{prefix}{k}"
        I = tuple(names[("i", x)] for x in self.I)
        E = tuple(names[("e", x)] for x in self.E)
        B = tuple(names[("b", x)] for x in self.B)
        J = tuple(names[("j", x)] for x in self.J)
        return PolynomialSpan(
            I, E, B, J,
            {names[("e", x)]: names[("i", self.u[x])] for x in self.E},
            {names[("e", x)]: names[("b", self.p[x])] for x in self.E},
            {names[("b", x)]: names[("j", self.v[x])] for x in self.B},
        )


def _jsonable(x):
    return x if isinstance(x, (str, int)) else repr(x)


def _sections(choices: Sequence[Sequence]):
    return itertools.product(*choices)


def eval_polynomial(P: PolynomialSpan, X: Family) -> Family:
    """``v_! p_* u*`` on a family ``X`` over ``I``.

    Elements of the result are pairs ``(b, s)`` where ``s`` assigns to each
    ``e`` over ``b`` (in the order of ``P.E``) an element of ``X`` over ``u(e)``.
    """
    by_i = {i: X.fiber(i) for i in P.I}
    out = []
    for b in P.B:
        es = [e for e in P.E if P.p[e] == b]
        for s in _sections([by_i[P.u[e]] for e in es]):
            out.append((b, s))
    return Family.of(out, lambda bs: P.v[bs[0]])


def identity_polynomial(I: Sequence) -> PolynomialSpan:
    I = tuple(I)
    ident = {i: i for i in I}
    return PolynomialSpan(I, I, I, I, ident, ident, ident)


def compose_polynomials(P: PolynomialSpan, Q: PolynomialSpan) -> PolynomialSpan:
    """A span for ``Q∘P`` built from pullbacks and one dependent product.

    With ``P = (s, p, t): I <- E -> A -> J`` and ``Q = (u, q, v): J <- F -> B -> K``:
    ``A' = A ×_J F``, ``E' = E ×_A A'``, ``D = Π_q(A')`` over ``B``,
    ``C = D ×_B F`` with counit ``C -> A'``, and ``R = E' ×_{A'} C``.
    The composite is ``I <- R -> D -> K``.
    """
    if tuple(P.J) != tuple(Q.I):
        raise ValueError("polynomial endpoints do not match")
    # D: for each b, a choice of a over every f in q^{-1}(b) with t(a) = u(f)
    D = []
    for b in Q.B:
        fs = [f for f in Q.E if Q.p[f] == b]
        for sigma in _sections([[a for a in P.B if P.v[a] == Q.u[f]] for f in fs]):
            D.append((b, tuple(zip(fs, sigma))))
    R, r_to_i, r_to_d = [], {}, {}
    for d in D:
        for f, a in d[1]:
            for e in P.E:
                if P.p[e] == a:
                    r = (d, f, e)
                    R.append(r)
                    r_to_i[r] = P.u[e]
                    r_to_d[r] = d
    return PolynomialSpan(
        tuple(P.I), tuple(R), tuple(D), tuple(Q.J),
        r_to_i, r_to_d, {d: Q.v[d[0]] for d in D},
    )


def families_over(I: Sequence, max_size: int):
    """Every family ``{0..n-1} -> I`` with ``n <= max_size``, in lexicographic order."""
    I = tuple(I)
    for n in range(max_size + 1):
        for idx in itertools.product(I, repeat=n):
            yield Family(tuple(range(n)), dict(enumerate(idx)))


def composite_comparison(P: PolynomialSpan, Q: PolynomialSpan, C: PolynomialSpan, X: Family) -> dict:
    """The canonical map ``C(X) -> Q(P(X))`` for ``C = compose_polynomials(P, Q)``."""
    out = {}
    for d, rho in eval_polynomial(C, X).elements:
        Rd = [r for r in C.E if C.p[r] == d]
        value = dict(zip(Rd, rho))
        b, sigma = d
        inner = []
        for f, a in sigma:
            es = [e for e in P.E if P.p[e] == a]
            inner.append((a, tuple(value[(d, f, e)] for e in es)))
        out[(d, rho)] = (b, tuple(inner))
    return out


def verify_composition(P: PolynomialSpan, Q: PolynomialSpan, C: PolynomialSpan | None = None,
                       max_size: int = 4) -> VerificationReport:
    """``C(X) ≅ Q(P(X))`` over ``K`` for every family ``X`` with ``|X| <= max_size``."""
    if C is None:
        C = compose_polynomials(P, Q)
    rep = VerificationReport()
    with rep.check("fiber_cardinalities") as chk, rep.check("comparison_bijective") as chk2:
        n = 0
        for X in families_over(P.I, max_size):
            n += 1
            left = eval_polynomial(C, X)
            right = eval_polynomial(Q, eval_polynomial(P, X))
            if left.profile(Q.J) != right.profile(Q.J):
                chk.fail({"X": [X.index[x] for x in X.elements],
                          "composite": left.profile(Q.J), "iterated": right.profile(Q.J)})
                break
            phi = composite_comparison(P, Q, C, X)
            img = set(phi.values())
            if (
                len(img) != len(phi)
                or img != set(right.elements)
                or any(left.index[x] != right.index[y] for x, y in phi.items())
            ):
                chk2.fail({"X": [X.index[x] for x in X.elements]})
                break
        chk.note = f"{n} families up to size {max_size}"
    return rep


def random_span(rng: random.Random, I: Sequence, J: Sequence, max_e: int = 3, max_b: int = 3) -> PolynomialSpan:
    I, J = tuple(I), tuple(J)
    B = tuple(f"b{k}" for k in range(rng.randint(1, max_b)))
    E = tuple(f"e{k}" for k in range(rng.randint(0, max_e)))
    return PolynomialSpan(
        I, E, B, J,
        {e: rng.choice(I) for e in E},
        {e: rng.choice(B) for e in E},
        {b: rng.choice(J) for b in B},
    )


class PiTribeStructure(TribeStructure, PiTribe):
    """A presented tribe whose internal products are found by search."""

    @classmethod
    def from_clan(cls, c) -> "PiTribeStructure":
        return cls(c.presentation, c.terminal, c.fibration_ids)
