"""Finite groupoids with isofibrations: a constructive π-tribe.

A :class:`Groupoid` stores objects ``0..n-1`` and arrows ``0..m-1`` with
explicit source, target, identity, inverse and composition tables.
Groupoids are interned by structure, so identical tables give the same
object and equality is identity.  Functors are enumerated component by
component: a root image, images of spanning-tree arrows, and a group
homomorphism on the automorphisms of the root.
"""

from __future__ import annotations

import hashlib
import itertools
from collections import Counter, deque
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Iterator, Mapping, Sequence

from ..fincat import Cone
from ..pi import ExponentialData, InternalProductData, PiTribe
from ..tribe import FibrewisePathData, PathObjectData


class GroupoidError(ValueError):
    pass


_INTERNED: dict = {}


class Groupoid:
    """A finite groupoid; build with :func:`groupoid` or the constructors in this module."""

    def __init__(self, n, src, tgt, ident, inv, comp, key):
        self.n = n
        self.src = src
        self.tgt = tgt
        self.ident = ident
        self.inv = inv
        self.comp = comp
        self._key = key
        self._hash = hash(key)
        self.m = len(src)
        self.label = None
        out = [[] for _ in range(n)]
        homs: dict = {}
        for a in range(self.m):
            out[src[a]].append(a)
            homs.setdefault((src[a], tgt[a]), []).append(a)
        self.out = tuple(tuple(x) for x in out)
        self._homs = {k: tuple(v) for k, v in homs.items()}
        self._analyse()

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Groupoid({self.name})"

    def hom(self, x, y) -> tuple:
        return self._homs.get((x, y), ())

    def compose(self, g, f):
        return self.comp[(g, f)]

    @property
    def objects(self):
        return range(self.n)

    @property
    def arrows(self):
        return range(self.m)

    def is_identity(self, a) -> bool:
        return self.ident[self.src[a]] == a

    def _analyse(self):
        comp_of = [-1] * self.n
        tree = [None] * self.n
        components = []
        for r in range(self.n):
            if comp_of[r] >= 0:
                continue
            k = len(components)
            comp_of[r] = k
            tree[r] = self.ident[r]
            members = [r]
            queue = deque([r])
            while queue:
                x = queue.popleft()
                for a in self.out[x]:
                    y = self.tgt[a]
                    if comp_of[y] < 0:
                        comp_of[y] = k
                        tree[y] = self.comp[(a, tree[x])]
                        members.append(y)
                        queue.append(y)
            components.append(tuple(members))
        self.components = tuple(components)
        self.comp_of = tuple(comp_of)
        self.tree = tuple(tree)
        # each arrow a: x -> y as the loop tree[y]^-1 a tree[x] at the root
        loop = []
        for a in range(self.m):
            x, y = self.src[a], self.tgt[a]
            loop.append(self.comp[(self.inv[self.tree[y]], self.comp[(a, self.tree[x])])])
        self.loop = tuple(loop)
        self.gens = tuple(self._generators(c[0]) for c in self.components)

    def _generators(self, r) -> tuple:
        group = self.hom(r, r)
        gens: list = []
        span = {self.ident[r]}
        for g in group:
            if g in span:
                continue
            gens.append(g)
            span = _closure(self, r, gens)
        return tuple(gens)

    def aut(self, x) -> tuple:
        return self.hom(x, x)

    def order(self, a) -> int:
        k, b, e = 1, a, self.ident[self.src[a]]
        while b != e:
            b = self.comp[(a, b)]
            k += 1
        return k

    @property
    def name(self) -> str:
        if self.label is None:
            self.label = _auto_name(self)
        return self.label


def _closure(G: Groupoid, r, gens) -> set:
    span = {G.ident[r]}
    queue = deque(span)
    while queue:
        g = queue.popleft()
        for s in gens:
            h = G.comp[(s, g)]
            if h not in span:
                span.add(h)
                queue.append(h)
    return span


def groupoid(n: int, src: Sequence[int], tgt: Sequence[int], comp: Mapping,
             label: str | None = None) -> Groupoid:
    """Intern a groupoid from index tables; identities and inverses are derived and checked."""
    src, tgt = tuple(src), tuple(tgt)
    m = len(src)
    if len(tgt) != m:
        raise GroupoidError("source and target tables differ in length")
    for a in range(m):
        if not (0 <= src[a] < n and 0 <= tgt[a] < n):
            raise GroupoidError(f"arrow {a} has endpoints outside 0..{n - 1}")
    table = {}
    for g in range(m):
        for f in range(m):
            if tgt[f] == src[g]:
                if (g, f) not in comp:
                    raise GroupoidError(f"missing composite of arrows {g} and {f}")
                h = comp[(g, f)]
                if src[h] != src[f] or tgt[h] != tgt[g]:
                    raise GroupoidError(f"composite of {g} and {f} has wrong endpoints")
                table[(g, f)] = h
    ident = []
    for x in range(n):
        cands = [
            a for a in range(m)
            if src[a] == x and tgt[a] == x
            and all(table[(a, f)] == f for f in range(m) if tgt[f] == x)
            and all(table[(g, a)] == g for g in range(m) if src[g] == x)
        ]
        if len(cands) != 1:
            raise GroupoidError(f"object {x} has no identity arrow")
        ident.append(cands[0])
    inv = []
    for a in range(m):
        cands = [b for b in range(m) if src[b] == tgt[a] and tgt[b] == src[a]
                 and table[(b, a)] == ident[src[a]] and table[(a, b)] == ident[tgt[a]]]
        if not cands:
            raise GroupoidError(f"arrow {a} is not invertible")
        inv.append(cands[0])
    for h in range(m):
        for g in range(m):
            if src[h] != tgt[g]:
                continue
            for f in range(m):
                if src[g] == tgt[f] and table[(h, table[(g, f)])] != table[(table[(h, g)], f)]:
                    raise GroupoidError(f"composition is not associative on ({h}, {g}, {f})")
    return _intern(n, src, tgt, tuple(ident), tuple(inv), table, label)


def _intern(n, src, tgt, ident, inv, comp, label=None) -> Groupoid:
    key = (n, src, tgt, tuple(sorted(comp.items())))
    G = _INTERNED.get(key)
    if G is None:
        G = Groupoid(n, src, tgt, ident, inv, comp, key)
        _INTERNED[key] = G
    if label is not None and G.label is None:
        G.label = label
    return G


def _from_labels(objects: Sequence, arrows: Sequence, src, tgt, ident, inv, compose, label=None):
    """Build from labelled data; ``src``, ``tgt`` etc. act on labels."""
    oi = {o: k for k, o in enumerate(objects)}
    ai = {a: k for k, a in enumerate(arrows)}
    s = tuple(oi[src(a)] for a in arrows)
    t = tuple(oi[tgt(a)] for a in arrows)
    comp = {}
    by_src: dict = {}
    for k, a in enumerate(arrows):
        by_src.setdefault(s[k], []).append(k)
    for f, fa in enumerate(arrows):
        for g in by_src.get(t[f], ()):
            comp[(g, f)] = ai[compose(arrows[g], fa)]
    return (
        _intern(len(objects), s, t, tuple(ai[ident(o)] for o in objects),
                tuple(ai[inv(a)] for a in arrows), comp, label),
        oi,
        ai,
    )


# ------------------------------------------------------------ normal forms

def _group_orders(G: Groupoid, r) -> tuple:
    return tuple(sorted(G.order(a) for a in G.aut(r)))


def component_invariant(G: Groupoid, k: int) -> tuple:
    r = G.components[k][0]
    return (len(G.components[k]), _group_orders(G, r))


def invariant(G: Groupoid) -> tuple:
    """Sorted component invariants: (size, multiset of element orders of the vertex group)."""
    return tuple(sorted(component_invariant(G, k) for k in range(len(G.components))))


def _is_abelian(G: Groupoid, r) -> bool:
    A = G.aut(r)
    return all(G.comp[(a, b)] == G.comp[(b, a)] for a in A for b in A)


def _prime_factors(n: int) -> list:
    out, p = [], 2
    while n > 1:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    return out


def cyclic_factors(orders: Sequence[int]) -> tuple:
    """Cyclic decomposition (prime powers) of the abelian group with these element orders."""
    N = len(orders)
    factors = []
    for p in _prime_factors(N):
        counts = [1]
        k = 1
        while True:
            c = sum(1 for o in orders if (p ** k) % o == 0 and _is_p_power(o, p))
            counts.append(c)
            if c == counts[-2]:
                break
            k += 1
        parts_at_least = []
        for k in range(1, len(counts)):
            ratio = counts[k] // counts[k - 1]
            e = 0
            while ratio > 1:
                ratio //= p
                e += 1
            parts_at_least.append(e)
        for k, cnt in enumerate(parts_at_least):
            nxt = parts_at_least[k + 1] if k + 1 < len(parts_at_least) else 0
            factors += [p ** (k + 1)] * (cnt - nxt)
    return tuple(sorted(factors))


def _is_p_power(o: int, p: int) -> bool:
    while o % p == 0:
        o //= p
    return o == 1


def _group_name(orders: tuple) -> str:
    fs = cyclic_factors(orders)
    if _product(fs) != len(orders):
        return f"G{len(orders)}"
    return "x".join(f"Z{f}" for f in fs)


def _product(xs) -> int:
    out = 1
    for x in xs:
        out *= x
    return out


def _component_name(inv: tuple) -> str:
    n, orders = inv
    base = "1" if n == 1 else "I" if n == 2 else f"C{n}"
    if len(orders) == 1:
        return base
    g = f"B({_group_name(orders)})"
    return g if n == 1 else f"{base}x{g}"


def invariant_name(inv: tuple) -> str:
    if not inv:
        return "0"
    parts = []
    for c, k in sorted(Counter(inv).items()):
        nm = _component_name(c)
        if nm == "1":
            parts.append("1" if k == 1 else f"d{k}")
        else:
            parts.append(nm if k == 1 else f"{k}{nm}")
    return "+".join(parts)


def _auto_name(G: Groupoid) -> str:
    inv = invariant(G)
    nm = invariant_name(inv)
    try:
        if canonical(G) is G:
            return nm
    except GroupoidError:
        pass
    digest = hashlib.sha1(repr(G._key).encode()).hexdigest()[:6]
    return f"{nm}~{digest}"


def _abelian_component(n: int, factors: Sequence[int]):
    elems = list(itertools.product(*(range(f) for f in factors)))
    zero = elems[0] if elems else ()

    def add(x, y):
        return tuple((a + b) % f for a, b, f in zip(x, y, factors))

    def neg(x):
        return tuple((-a) % f for a, f in zip(x, factors))

    objects = list(range(n))
    arrows = [(i, j, g) for i in range(n) for j in range(n) for g in elems]
    return objects, arrows, add, neg, zero


def canonical(G: Groupoid) -> Groupoid:
    """The interned standard representative of the isomorphism class of ``G``."""
    inv = invariant(G)
    for k, c in enumerate(G.components):
        if not _is_abelian(G, c[0]):
            raise GroupoidError(f"{invariant_name(inv)} has a non-abelian vertex group")
    return groupoid_from_invariant(inv)


def groupoid_from_invariant(inv: Sequence) -> Groupoid:
    objects, arrows = [], []
    ops = []
    offset = 0
    for k, (n, orders) in enumerate(sorted(inv)):
        fs = cyclic_factors(orders)
        _, arr, add, neg, zero = _abelian_component(n, fs)
        ops.append((add, neg, zero))
        objects += [(k, i) for i in range(n)]
        arrows += [(k, i, j, g) for (i, j, g) in arr]
    ops_of = dict(enumerate(ops))
    G, _, _ = _from_labels(
        objects, arrows,
        src=lambda a: (a[0], a[1]),
        tgt=lambda a: (a[0], a[2]),
        ident=lambda o: (o[0], o[1], o[1], ops_of[o[0]][2]),
        inv=lambda a: (a[0], a[2], a[1], ops_of[a[0]][1](a[3])),
        compose=lambda g, f: (f[0], f[1], g[2], ops_of[f[0]][0](g[3], f[3])),
    )
    if G.label is None:
        G.label = invariant_name(tuple(sorted(inv)))
    return G


def discrete(n: int) -> Groupoid:
    return groupoid_from_invariant([(1, (1,))] * n)


def codiscrete(n: int) -> Groupoid:
    if n == 0:
        return discrete(0)
    return groupoid_from_invariant([(n, (1,))])


def delooping(k: int) -> Groupoid:
    """``B(Z/k)``: one object with cyclic automorphism group of order ``k``."""
    orders = tuple(sorted(k // gcd(k, j) for j in range(k)))
    return groupoid_from_invariant([(1, orders)])


EMPTY = discrete(0)
ONE = discrete(1)
WALKING_ISO = codiscrete(2)


# ------------------------------------------------------------------ functors

@dataclass(frozen=True)
class Functor:
    src: Groupoid
    tgt: Groupoid
    ob: tuple
    mor: tuple


def identity_functor(G: Groupoid) -> Functor:
    return Functor(G, G, tuple(range(G.n)), tuple(range(G.m)))


def compose_functors(g: Functor, f: Functor) -> Functor:
    return Functor(f.src, g.tgt, tuple(g.ob[x] for x in f.ob), tuple(g.mor[a] for a in f.mor))


def validate_functor(F: Functor) -> None:
    G, H = F.src, F.tgt
    for a in G.arrows:
        if H.src[F.mor[a]] != F.ob[G.src[a]] or H.tgt[F.mor[a]] != F.ob[G.tgt[a]]:
            raise GroupoidError(f"arrow {a} is sent to an arrow with the wrong endpoints")
    for (g, f), h in G.comp.items():
        if H.comp[(F.mor[g], F.mor[f])] != F.mor[h]:
            raise GroupoidError(f"composite ({g}, {f}) is not preserved")
    for x in G.objects:
        if F.mor[G.ident[x]] != H.ident[F.ob[x]]:
            raise GroupoidError(f"identity of {x} is not preserved")


def _group_homs(G, r, gens, H, y0, gen_choices) -> list:
    """Homomorphisms ``Aut(r) -> Aut(y0)`` with generator images drawn from ``gen_choices``."""
    out = []
    er, ey = G.ident[r], H.ident[y0]
    for images in itertools.product(*gen_choices):
        phi = {er: ey}
        queue = deque([er])
        ok = True
        while queue and ok:
            g = queue.popleft()
            for s, hs in zip(gens, images):
                sg = G.comp[(s, g)]
                val = H.comp[(hs, phi[g])]
                old = phi.get(sg)
                if old is None:
                    phi[sg] = val
                    queue.append(sg)
                elif old != val:
                    ok = False
                    break
        if ok:
            out.append(phi)
    return out


def _component_options(G, H, k, over, fix_ob, fix_mor) -> list:
    C = G.components[k]
    r = C[0]
    gens = G.gens[k]
    arrows = [a for a in G.arrows if G.comp_of[G.src[a]] == k]
    p, q = over if over is not None else (None, None)
    options = []
    for y0 in H.objects:
        if r in fix_ob and fix_ob[r] != y0:
            continue
        if p is not None and q.ob[y0] != p.ob[r]:
            continue
        tree_choices = []
        for x in C[1:]:
            t = G.tree[x]
            cands = [
                h for h in H.out[y0]
                if (p is None or q.mor[h] == p.mor[t])
                and (x not in fix_ob or H.tgt[h] == fix_ob[x])
                and (t not in fix_mor or fix_mor[t] == h)
            ]
            if not cands:
                break
            tree_choices.append(cands)
        else:
            aut = H.aut(y0)
            gen_choices = [
                [h for h in aut if (p is None or q.mor[h] == p.mor[s]) and fix_mor.get(s, h) == h]
                for s in gens
            ]
            phis = _group_homs(G, r, gens, H, y0, gen_choices)
            if not phis:
                continue
            for trees in itertools.product(*tree_choices):
                Ft = {r: H.ident[y0]}
                for x, h in zip(C[1:], trees):
                    Ft[x] = h
                obs = {x: H.tgt[Ft[x]] for x in C}
                for phi in phis:
                    mors = {}
                    for a in arrows:
                        x, y = G.src[a], G.tgt[a]
                        mors[a] = H.comp[(H.comp[(Ft[y], phi[G.loop[a]])], H.inv[Ft[x]])]
                    if fix_mor and any(a in mors and mors[a] != h for a, h in fix_mor.items()):
                        continue
                    options.append((obs, mors))
    return options


def functors(G: Groupoid, H: Groupoid, over=None, fix_ob=None, fix_mor=None) -> Iterator[Functor]:
    """All functors ``G -> H`` (optionally with ``q∘F == p`` for ``over=(p, q)``
    and prescribed values on some objects and arrows), in a fixed order."""
    fix_ob = fix_ob or {}
    fix_mor = fix_mor or {}
    per_comp = []
    for k in range(len(G.components)):
        opts = _component_options(G, H, k, over, fix_ob, fix_mor)
        if not opts:
            return
        per_comp.append(opts)
    for combo in itertools.product(*per_comp):
        ob = [0] * G.n
        mor = [0] * G.m
        for obs, mors in combo:
            for x, y in obs.items():
                ob[x] = y
            for a, h in mors.items():
                mor[a] = h
        yield Functor(G, H, tuple(ob), tuple(mor))


def natural_isos(F: Functor, G: Functor) -> Iterator[tuple]:
    """Component tuples ``θ`` of the natural isomorphisms ``F => G``."""
    A, B = F.src, F.tgt
    per_comp = []
    for k, C in enumerate(A.components):
        r = C[0]
        opts = []
        for th in B.hom(F.ob[r], G.ob[r]):
            if any(B.comp[(G.mor[s], th)] != B.comp[(th, F.mor[s])] for s in A.gens[k]):
                continue
            theta = {r: th}
            for x in C[1:]:
                t = A.tree[x]
                theta[x] = B.comp[(B.comp[(G.mor[t], th)], B.inv[F.mor[t]])]
            opts.append(theta)
        if not opts:
            return
        per_comp.append(opts)
    for combo in itertools.product(*per_comp):
        out = [0] * A.n
        for theta in combo:
            for x, a in theta.items():
                out[x] = a
        yield tuple(out)


def is_isofibration(p: Functor) -> bool:
    E, B = p.src, p.tgt
    for e in E.objects:
        lifted = {p.mor[a] for a in E.out[e]}
        if any(b not in lifted for b in B.out[p.ob[e]]):
            return False
    return True


def is_equivalence(F: Functor) -> bool:
    """Fully faithful and essentially surjective."""
    G, H = F.src, F.tgt
    for x in G.objects:
        for y in G.objects:
            src_arrows = G.hom(x, y)
            if len(src_arrows) != len(H.hom(F.ob[x], F.ob[y])):
                return False
            if len({F.mor[a] for a in src_arrows}) != len(src_arrows):
                return False
    hit = {H.comp_of[y] for y in F.ob}
    return len(hit) == len(H.components)


def is_injective_on_objects(F: Functor) -> bool:
    return len(set(F.ob)) == len(F.ob)


# ------------------------------------------------------------------- model

@dataclass(frozen=True)
class _ArrowGroupoid:
    obj: Groupoid
    objects: tuple  # arrows of the base used as objects
    triples: tuple
    ob_index: dict
    index: dict


def _arrow_groupoid(B: Groupoid, vertical=None) -> _ArrowGroupoid:
    """Groupoid of arrows of ``B`` (only ``vertical`` ones, if given) and commuting squares."""
    keep = [a for a in B.arrows if vertical is None or vertical(a)]
    keepset = set(keep)
    triples = []
    for a in keep:
        for b0 in B.out[B.src[a]]:
            for a2 in B.out[B.tgt[b0]]:
                if a2 in keepset:
                    triples.append((a, b0, a2))
    G, oi, ai = _from_labels(
        keep, triples,
        src=lambda t: t[0],
        tgt=lambda t: t[2],
        ident=lambda a: (a, B.ident[B.src[a]], a),
        inv=lambda t: (t[2], B.inv[t[1]], t[0]),
        compose=lambda g, f: (f[0], B.comp[(g[1], f[1])], g[2]),
    )
    return _ArrowGroupoid(G, tuple(keep), tuple(triples), oi, ai)


def _square_side(B: Groupoid, a, b0, a2):
    """The fourth side ``a2∘b0∘a^-1`` of the square with left side ``b0``."""
    return B.comp[(a2, B.comp[(b0, B.inv[a])])]


class FinGpdModel(PiTribe):
    """Finite groupoids over a fixed working set of objects."""

    factorizer = "constructive"

    def __init__(self, objects: Iterable[Groupoid]):
        self.objects = tuple(objects)
        self.terminal = ONE
        self.probe_objects = (ONE, WALKING_ISO)
        self._homs: dict = {}
        self._pullbacks: dict = {}
        self._arrow_groupoids: dict = {}
        self._fibrewise: dict = {}
        self._names: dict = {}

    def __repr__(self):
        return f"FinGpdModel({len(self.objects)} objects)"

    # category
    def hom(self, a, b):
        key = (a, b)
        hs = self._homs.get(key)
        if hs is None:
            hs = tuple(functors(a, b))
            self._homs[key] = hs
        return hs

    def src(self, f):
        return f.src

    def tgt(self, f):
        return f.tgt

    def compose(self, g, f):
        if f.tgt is not g.src:
            raise GroupoidError(f"cannot compose {self.name(g)} after {self.name(f)}")
        return compose_functors(g, f)

    def identity(self, a):
        return identity_functor(a)

    def name(self, x):
        if isinstance(x, Groupoid):
            return x.name
        if isinstance(x, Functor):
            nm = self._names.get(x)
            if nm is None:
                ob = ",".join(map(str, x.ob))
                mor = ",".join(map(str, x.mor))
                nm = f"{x.src.name}->{x.tgt.name}[{ob}|{mor}]"
                self._names[x] = nm
            return nm
        return str(x)

    def contains(self, X):
        return isinstance(X, Groupoid)

    def is_fibration(self, f):
        return is_isofibration(f)

    def is_iso(self, f):
        return len(set(f.ob)) == f.src.n == f.tgt.n and len(set(f.mor)) == f.src.m == f.tgt.m

    def inverse(self, f):
        if not self.is_iso(f):
            return None
        ob = [0] * f.src.n
        mor = [0] * f.src.m
        for x, y in enumerate(f.ob):
            ob[y] = x
        for a, b in enumerate(f.mor):
            mor[b] = a
        return Functor(f.tgt, f.src, tuple(ob), tuple(mor))

    def to_terminal(self, X):
        return Functor(X, ONE, (0,) * X.n, (0,) * X.m)

    # limits
    def pullback(self, f, g):
        key = (f, g)
        cone = self._pullbacks.get(key)
        if cone is not None:
            return cone
        if f.tgt is not g.tgt:
            raise GroupoidError("pullback of functors with different codomains")
        A, B = f.src, g.src
        objs = [(x, y) for x in A.objects for y in B.objects if f.ob[x] == g.ob[y]]
        arrs = [(a, b) for a in A.arrows for b in B.arrows if f.mor[a] == g.mor[b]]
        P, oi, ai = _from_labels(
            objs, arrs,
            src=lambda ab: (A.src[ab[0]], B.src[ab[1]]),
            tgt=lambda ab: (A.tgt[ab[0]], B.tgt[ab[1]]),
            ident=lambda xy: (A.ident[xy[0]], B.ident[xy[1]]),
            inv=lambda ab: (A.inv[ab[0]], B.inv[ab[1]]),
            compose=lambda g2, f2: (A.comp[(g2[0], f2[0])], B.comp[(g2[1], f2[1])]),
        )
        cone = Cone(
            P,
            Functor(P, A, tuple(x for x, _ in objs), tuple(a for a, _ in arrs)),
            Functor(P, B, tuple(y for _, y in objs), tuple(b for _, b in arrs)),
            f,
            g,
            (oi, ai),
        )
        self._pullbacks[key] = cone
        return cone

    def mediate(self, cone, a, b):
        oi, ai = cone.data
        try:
            return Functor(
                a.src, cone.apex,
                tuple(oi[(a.ob[t], b.ob[t])] for t in range(a.src.n)),
                tuple(ai[(a.mor[t], b.mor[t])] for t in range(a.src.m)),
            )
        except KeyError:
            raise GroupoidError("functors do not form a cone") from None

    def square_obstruction(self, s, test_objects=None):
        """Universality against ``1`` and ``I``: pairs of objects and of arrows biject."""
        tests = self.probe_objects if test_objects is None else tuple(test_objects)
        if any(T is not ONE and T is not WALKING_ISO for T in tests):
            return NotImplemented
        for T in tests:
            if T is ONE:
                have = Counter(zip(s.left.ob, s.top.ob))
                want = [(d, e) for d in s.left.tgt.objects for e in s.top.tgt.objects
                        if s.bottom.ob[d] == s.right.ob[e]]
            else:
                have = Counter(zip(s.left.mor, s.top.mor))
                want = [(d, e) for d in s.left.tgt.arrows for e in s.top.tgt.arrows
                        if s.bottom.mor[d] == s.right.mor[e]]
            for pair in want:
                if have.get(pair, 0) != 1:
                    return {"test_object": T.name, "cone": list(pair),
                            "mediating_maps": have.get(pair, 0)}
        return None

    # constrained enumeration
    def maps_over(self, X, a, Y, b):
        return functors(X, Y, over=(a, b))

    def iso_over(self, X, a, Y, b):
        if invariant(X) != invariant(Y):
            return None
        for h in self.maps_over(X, a, Y, b):
            if self.is_iso(h):
                return h
        return None

    def fillers(self, u, p, top, bottom):
        fix_ob: dict = {}
        fix_mor: dict = {}
        for x in u.src.objects:
            y, v = u.ob[x], top.ob[x]
            if fix_ob.setdefault(y, v) != v:
                return
        for a in u.src.arrows:
            y, v = u.mor[a], top.mor[a]
            if fix_mor.setdefault(y, v) != v:
                return
        yield from functors(u.tgt, p.src, over=(bottom, p), fix_ob=fix_ob, fix_mor=fix_mor)

    def sections(self, p):
        return functors(p.tgt, p.src, over=(identity_functor(p.tgt), p))

    # model characterizations
    def is_anodyne_model(self, u):
        return is_injective_on_objects(u) and is_equivalence(u)

    def is_equivalence_model(self, f):
        return is_equivalence(f)

    # path objects and homotopies
    def _arrows_of(self, B) -> _ArrowGroupoid:
        ag = self._arrow_groupoids.get(B)
        if ag is None:
            ag = _arrow_groupoid(B)
            self._arrow_groupoids[B] = ag
        return ag

    def build_path_object(self, B):
        ag = self._arrows_of(B)
        PB = ag.obj
        d0 = Functor(PB, B, tuple(B.src[a] for a in ag.objects), tuple(t[1] for t in ag.triples))
        d1 = Functor(PB, B, tuple(B.tgt[a] for a in ag.objects),
                     tuple(_square_side(B, *t) for t in ag.triples))
        sigma = Functor(
            B, PB,
            tuple(ag.ob_index[B.ident[x]] for x in B.objects),
            tuple(ag.index[(B.ident[B.src[b]], b, B.ident[B.tgt[b]])] for b in B.arrows),
        )
        square = self.product(B, B)
        return PathObjectData(PB, d0, d1, sigma, self.mediate(square, d0, d1), square)

    def _homotopy_functor(self, f, theta, ag):
        A = f.src
        return Functor(
            A, ag.obj,
            tuple(ag.ob_index[theta[x]] for x in A.objects),
            tuple(ag.index[(theta[A.src[a]], f.mor[a], theta[A.tgt[a]])] for a in A.arrows),
        )

    def homotopies_from(self, f):
        A, B = f.src, f.tgt
        ag = self._arrows_of(B)
        for theta in itertools.product(*(B.out[f.ob[x]] for x in A.objects)):
            yield self._homotopy_functor(f, theta, ag)

    def homotopies(self, f, g):
        ag = self._arrows_of(f.tgt)
        for theta in natural_isos(f, g):
            yield self._homotopy_functor(f, theta, ag)

    def homotopy_key(self, f):
        A, B = f.src, f.tgt
        key = []
        for k, C in enumerate(A.components):
            r = C[0]
            y = f.ob[r]
            K = B.comp_of[y]
            c = B.components[K][0]
            tau = B.tree[y]
            psi = [B.comp[(B.inv[tau], B.comp[(f.mor[s], tau)])] for s in A.gens[k]]
            best = min(
                tuple(B.comp[(B.comp[(g, h)], B.inv[g])] for h in psi)
                for g in B.aut(c)
            )
            key.append((K, best))
        return tuple(key)

    def fibrewise_path_object(self, p):
        cached = self._fibrewise.get(p)
        if cached is not None:
            return cached[0]
        E, B = p.src, p.tgt
        vertical_ids = {B.ident[b] for b in B.objects}

        ag = _arrow_groupoid(E, lambda a: p.mor[a] in vertical_ids)
        cone = self.pullback(p, p)
        oi, ai = cone.data
        pi = Functor(
            ag.obj, cone.apex,
            tuple(oi[(E.src[a], E.tgt[a])] for a in ag.objects),
            tuple(ai[(t[1], _square_side(E, *t))] for t in ag.triples),
        )
        sigma = Functor(
            E, ag.obj,
            tuple(ag.ob_index[E.ident[x]] for x in E.objects),
            tuple(ag.index[(E.ident[E.src[b]], b, E.ident[E.tgt[b]])] for b in E.arrows),
        )
        diag = self.mediate(cone, identity_functor(E), identity_functor(E))
        fp = FibrewisePathData(ag.obj, sigma, pi, cone, diag)
        self._fibrewise[p] = (fp, ag)
        return fp

    def fibrewise_homotopies_from(self, f, q):
        """Homotopies into the fibrewise path object of ``q`` starting at ``f``."""
        self.fibrewise_path_object(q)
        fp, ag = self._fibrewise[q]
        Y, A = q.tgt, f.src
        E = f.tgt
        ids = {Y.ident[b] for b in Y.objects}
        outs = [[a for a in E.out[f.ob[x]] if q.mor[a] in ids] for x in A.objects]
        for theta in itertools.product(*outs):
            yield self._homotopy_functor(f, theta, ag)

    # dependent products
    def internal_product(self, p, f):
        E, A = p.src, p.tgt
        B = f.tgt
        fibers = {}
        objects = []
        for b in B.objects:
            fib = _strict_fiber(f, b)
            fibers[b] = fib
            for s in functors(fib.obj, E, over=(fib.incl, p)):
                objects.append((b, _Section(fib, s)))
        lifts = {beta: tuple(a for a in A.arrows if f.mor[a] == beta) for beta in B.arrows}
        arrows = []
        for beta in B.arrows:
            b0, b1 = B.src[beta], B.tgt[beta]
            srcs = [k for k, (b, _) in enumerate(objects) if b == b0]
            tgts = [k for k, (b, _) in enumerate(objects) if b == b1]
            for i in srcs:
                for j in tgts:
                    for fam in _families(A, E, p, lifts[beta], fibers[b0], objects[i][1],
                                         objects[j][1]):
                        arrows.append((i, j, beta, fam))
        arrow_index = {a: k for k, a in enumerate(arrows)}
        lift_pos = {beta: {a: k for k, a in enumerate(ls)} for beta, ls in lifts.items()}

        def value(arrow, alpha):
            return arrow[3][lift_pos[arrow[2]][alpha]]

        def compose(g, fa):
            beta = B.comp[(g[2], fa[2])]
            fam = []
            for alpha in lifts[beta]:
                a0 = A.src[alpha]
                first = next(x for x in lifts[fa[2]] if A.src[x] == a0)
                second = A.comp[(alpha, A.inv[first])]
                fam.append(E.comp[(value(g, second), value(fa, first))])
            return (fa[0], g[1], beta, tuple(fam))

        def ident(k):
            b, s = objects[k]
            beta = B.ident[b]
            return (k, k, beta, tuple(s.mor[alpha] for alpha in lifts[beta]))

        def inverse(arrow):
            beta = B.inv[arrow[2]]
            fam = tuple(E.inv[value(arrow, A.inv[alpha])] for alpha in lifts[beta])
            return (arrow[1], arrow[0], beta, fam)

        Pi, oi, ai = _from_labels(
            list(range(len(objects))), arrows,
            src=lambda a: a[0], tgt=lambda a: a[1],
            ident=ident, inv=inverse, compose=compose,
        )
        structure = Functor(Pi, B, tuple(b for b, _ in objects), tuple(a[2] for a in arrows))
        cone = self.pullback(f, structure)
        c_oi, c_ai = cone.data
        ev_ob = [0] * cone.apex.n
        for (a, k), idx in c_oi.items():
            ev_ob[idx] = objects[k][1].ob[a]
        ev_mor = [0] * cone.apex.m
        for (alpha, k), idx in c_ai.items():
            ev_mor[idx] = value(arrows[k], alpha)
        ev = Functor(cone.apex, E, tuple(ev_ob), tuple(ev_mor))
        return InternalProductData(Pi, structure, cone, ev, p, f)

    def exponential(self, A, B):
        funcs = self.hom(A, B)
        fidx = {F: k for k, F in enumerate(funcs)}
        arrows = []
        for i, F in enumerate(funcs):
            for j, G in enumerate(funcs):
                for theta in natural_isos(F, G):
                    arrows.append((i, j, theta))

        X, oi, ai = _from_labels(
            list(range(len(funcs))), arrows,
            src=lambda a: a[0], tgt=lambda a: a[1],
            ident=lambda k: (k, k, tuple(B.ident[y] for y in funcs[k].ob)),
            inv=lambda a: (a[1], a[0], tuple(B.inv[t] for t in a[2])),
            compose=lambda g, f: (f[0], g[1], tuple(B.comp[(s, t)] for s, t in zip(g[2], f[2]))),
        )
        cone = self.product(X, A)
        c_oi, c_ai = cone.data
        ev_ob = [0] * cone.apex.n
        for (k, a), idx in c_oi.items():
            ev_ob[idx] = funcs[k].ob[a]
        ev_mor = [0] * cone.apex.m
        for (t, alpha), idx in c_ai.items():
            i, j, theta = arrows[t]
            ev_mor[idx] = B.comp[(funcs[j].mor[alpha], theta[A.src[alpha]])]
        ev = Functor(cone.apex, B, tuple(ev_ob), tuple(ev_mor))

        def abstract(C, h):
            CA = self.product(C, A)
            p_oi, p_ai = CA.data
            ob = []
            for c in C.objects:
                F = Functor(A, B,
                            tuple(h.ob[p_oi[(c, a)]] for a in A.objects),
                            tuple(h.mor[p_ai[(C.ident[c], al)]] for al in A.arrows))
                ob.append(fidx[F])
            mor = []
            for g in C.arrows:
                theta = tuple(h.mor[p_ai[(g, A.ident[a])]] for a in A.objects)
                mor.append(ai[(ob[C.src[g]], ob[C.tgt[g]], theta)])
            return Functor(C, X, tuple(ob), tuple(mor))

        return ExponentialData(X, ev, cone, abstract, A, B)


@dataclass(frozen=True)
class _Fiber:
    obj: Groupoid
    incl: Functor
    objects: tuple  # global object ids, by local index
    arrows: tuple


class _Section:
    """A section over a strict fiber, indexed by global ids of the total groupoid."""

    def __init__(self, fib: _Fiber, s: Functor):
        self.ob = {fib.objects[x]: s.ob[x] for x in fib.obj.objects}
        self.mor = {fib.arrows[a]: s.mor[a] for a in fib.obj.arrows}


def _strict_fiber(f: Functor, b) -> _Fiber:
    A, B = f.src, f.tgt
    objs = [a for a in A.objects if f.ob[a] == b]
    arrs = [al for al in A.arrows if f.mor[al] == B.ident[b]]
    G, oi, ai = _from_labels(
        objs, arrs,
        src=lambda al: A.src[al], tgt=lambda al: A.tgt[al],
        ident=lambda a: A.ident[a], inv=lambda al: A.inv[al],
        compose=lambda g, h: A.comp[(g, h)],
    )
    incl = Functor(G, A, tuple(objs), tuple(arrs))
    return _Fiber(G, incl, tuple(objs), tuple(arrs))


def _families(A, E, p, lifts, fib, s, s2) -> Iterator[tuple]:
    """Natural families ``e_α: s(src α) -> s2(tgt α)`` over the lifts ``α`` of one arrow."""
    G = fib.obj
    reps = []
    for C in G.components:
        root = fib.objects[C[0]]
        alpha0 = next(al for al in lifts if A.src[al] == root)
        cands = [
            e for e in E.out[s.ob[root]]
            if p.mor[e] == alpha0 and E.tgt[e] == s2.ob[A.tgt[alpha0]]
        ]
        reps.append((C, alpha0, cands))
    tree_to = {fib.objects[x]: fib.arrows[G.tree[x]] for x in G.objects}
    root_of = {fib.objects[x]: fib.objects[G.components[G.comp_of[x]][0]] for x in G.objects}
    rep_of = {fib.objects[C[0]]: (k, alpha0) for k, (C, alpha0, _) in enumerate(reps)}
    vertical_out: dict = {}
    vertical_in: dict = {}
    for al in s2.mor:
        vertical_out.setdefault(A.src[al], []).append(al)
    for al in s.mor:
        vertical_in.setdefault(A.tgt[al], []).append(al)
    pos = {al: k for k, al in enumerate(lifts)}
    for choice in itertools.product(*(c for _, _, c in reps)):
        fam = []
        for al in lifts:
            a1 = A.src[al]
            r = root_of[a1]
            k, alpha0 = rep_of[r]
            gamma = tree_to[a1]
            gamma2 = A.comp[(al, A.comp[(gamma, A.inv[alpha0])])]
            fam.append(E.comp[(s2.mor[gamma2], E.comp[(choice[k], E.inv[s.mor[gamma]])])])
        ok = True
        for al, e in zip(lifts, fam):
            for d in vertical_out.get(A.tgt[al], ()):
                if fam[pos[A.comp[(d, al)]]] != E.comp[(s2.mor[d], e)]:
                    ok = False
                    break
            if not ok:
                break
            for d in vertical_in.get(A.src[al], ()):
                if fam[pos[A.comp[(al, d)]]] != E.comp[(e, s.mor[d])]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            yield tuple(fam)


def fingpd_model(spec=None, objects: Iterable[Groupoid] | None = None) -> FinGpdModel:
    """The groupoid model over a generated universe (or an explicit object list)."""
    if objects is None:
        from .universe import UniverseSpec, generate_universe

        spec = UniverseSpec() if spec is None else spec
        objects = generate_universe(spec).objects
    return FinGpdModel(objects)
