"""Skeletal finite sets: the degenerate π-tribe where every map is a fibration.

An object is a natural number ``n`` standing for ``{0, ..., n-1}``.  Pullbacks,
products, Π and exponentials are built directly, with elements listed in
lexicographic order so every construction is reproducible.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass

from ..fincat import Cone
from ..pi import ExponentialData, InternalProductData, PiTribe


@dataclass(frozen=True)
class FinMap:
    src: int
    tgt: int
    values: tuple

    def __call__(self, x):
        return self.values[x]

    def fiber(self, y) -> tuple:
        return tuple(x for x, v in enumerate(self.values) if v == y)


def finmap(src: int, tgt: int, values) -> FinMap:
    values = tuple(values)
    if len(values) != src or any(not 0 <= v < tgt for v in values):
        raise ValueError(f"{list(values)} is not a map {src} -> {tgt}")
    return FinMap(src, tgt, values)


class FinSetModel(PiTribe):
    factorizer = "constructive"
    probe_objects = (1,)

    def __init__(self, cap: int, include_empty: bool = False):
        if cap < 1:
            raise ValueError("cap must be at least 1")
        self.cap = cap
        self.terminal = 1
        self.objects = tuple(range(0 if include_empty else 1, cap + 1))
        self._pullbacks: dict = {}

    def __repr__(self):
        return f"FinSetModel(cap={self.cap})"

    # category
    def hom(self, a, b):
        return tuple(FinMap(a, b, v) for v in itertools.product(range(b), repeat=a))

    def src(self, f):
        return f.src

    def tgt(self, f):
        return f.tgt

    def compose(self, g, f):
        if f.tgt != g.src:
            raise ValueError(f"cannot compose {self.name(g)} after {self.name(f)}")
        return FinMap(f.src, g.tgt, tuple(g.values[x] for x in f.values))

    def identity(self, a):
        return FinMap(a, a, tuple(range(a)))

    def name(self, x):
        if isinstance(x, FinMap):
            return f"{x.src}->{x.tgt}:{''.join(map(str, x.values)) if x.tgt <= 10 else list(x.values)}"
        return str(x)

    def contains(self, X):
        return isinstance(X, int) and X >= 0

    def is_fibration(self, f):
        return True

    def is_iso(self, f):
        return f.src == f.tgt and len(set(f.values)) == f.src

    def inverse(self, f):
        if not self.is_iso(f):
            return None
        inv = [0] * f.src
        for x, y in enumerate(f.values):
            inv[y] = x
        return FinMap(f.tgt, f.src, tuple(inv))

    def to_terminal(self, X):
        return FinMap(X, 1, (0,) * X)

    # limits
    def pullback(self, f, g):
        key = (f, g)
        if key in self._pullbacks:
            return self._pullbacks[key]
        if f.tgt != g.tgt:
            raise ValueError("pullback of maps with different codomains")
        pairs = [(x, y) for x in range(f.src) for y in range(g.src) if f.values[x] == g.values[y]]
        n = len(pairs)
        cone = Cone(
            n,
            FinMap(n, f.src, tuple(x for x, _ in pairs)),
            FinMap(n, g.src, tuple(y for _, y in pairs)),
            f,
            g,
            {pr: k for k, pr in enumerate(pairs)},
        )
        self._pullbacks[key] = cone
        return cone

    def mediate(self, cone, a, b):
        index = cone.data
        try:
            return FinMap(a.src, cone.apex, tuple(index[(a.values[t], b.values[t])] for t in range(a.src)))
        except KeyError:
            raise ValueError("maps do not form a cone") from None

    def square_obstruction(self, s, test_objects=None):
        """Universality against the point: pairs of elements biject."""
        tests = self.probe_objects if test_objects is None else tuple(test_objects)
        if any(T != 1 for T in tests):
            return NotImplemented
        have = Counter(zip(s.left.values, s.top.values))
        for d in range(s.left.tgt):
            for e in range(s.top.tgt):
                if s.bottom.values[d] == s.right.values[e] and have.get((d, e), 0) != 1:
                    return {"test_object": "1", "cone": [d, e], "mediating_maps": have.get((d, e), 0)}
        return None

    # fibred structure
    def maps_over(self, X, a, Y, b):
        choices = [b.fiber(a.values[x]) for x in range(X)]
        for v in itertools.product(*choices):
            yield FinMap(X, Y, v)

    def iso_over(self, X, a, Y, b):
        if X != Y:
            return None
        out = [0] * X
        for z in range(a.tgt):
            fa, fb = a.fiber(z), b.fiber(z)
            if len(fa) != len(fb):
                return None
            for x, y in zip(fa, fb):
                out[x] = y
        return FinMap(X, Y, tuple(out))

    def fillers(self, u, p, top, bottom):
        choices = []
        for b in range(u.tgt):
            pre = {top.values[a] for a in u.fiber(b)}
            if len(pre) > 1:
                return
            cands = pre if pre else range(p.src)
            choices.append([e for e in sorted(cands) if p.values[e] == bottom.values[b]])
        for v in itertools.product(*choices):
            yield FinMap(u.tgt, p.src, v)

    def sections(self, p):
        yield from self.maps_over(p.tgt, self.identity(p.tgt), p.src, p)

    # homotopy theory is discrete
    def homotopies_from(self, f):
        yield f

    def homotopy_key(self, f):
        return f

    def is_anodyne_model(self, u):
        return self.is_iso(u)

    def is_equivalence_model(self, f):
        return self.is_iso(f)

    def fibrewise_homotopies_from(self, f, q):
        yield f

    # dependent products
    def internal_product(self, p, f):
        elements = []
        for b in range(f.tgt):
            fib = f.fiber(b)
            for s in itertools.product(*(p.fiber(a) for a in fib)):
                elements.append((b, dict(zip(fib, s))))
        n = len(elements)
        structure = FinMap(n, f.tgt, tuple(b for b, _ in elements))
        cone = self.pullback(f, structure)
        ev = FinMap(cone.apex, p.src, tuple(
            elements[k][1][a] for a, k in zip(cone.p1.values, cone.p2.values)
        ))
        return InternalProductData(n, structure, cone, ev, p, f)

    def exponential(self, A, B):
        funcs = self.hom(A, B)
        index = {h.values: k for k, h in enumerate(funcs)}
        n = len(funcs)
        cone = self.product(n, A)
        ev = FinMap(cone.apex, B, tuple(
            funcs[k].values[a] for k, a in zip(cone.p1.values, cone.p2.values)
        ))

        def abstract(C, h):
            CA = self.product(C, A)
            vals = []
            for c in range(C):
                row = tuple(h.values[CA.data[(c, a)]] for a in range(A))
                vals.append(index[row])
            return FinMap(C, n, tuple(vals))

        return ExponentialData(n, ev, cone, abstract, A, B)


def finset_model(cap: int, include_empty: bool = False) -> FinSetModel:
    return FinSetModel(cap, include_empty)
