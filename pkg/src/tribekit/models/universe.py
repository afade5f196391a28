"""Deterministic working sets of finite groupoids.

A :class:`UniverseSpec` names seed groupoids and closure operations.  The
generator runs breadth-first: each round applies the operations, in the
order given, to the objects known at the start of the round, keeping one
standard representative per isomorphism class.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, asdict
from typing import Mapping

from .fingpd import (
    FinGpdModel,
    Groupoid,
    GroupoidError,
    canonical,
    codiscrete,
    delooping,
    discrete,
    invariant,
)

CLOSURE_OPS = ("product", "path", "pullback")


class UniverseError(ValueError):
    pass


@dataclass(frozen=True)
class UniverseSpec:
    seeds: tuple = ("0", "1", "I", "d2", "B(Z2)")
    closure: tuple = CLOSURE_OPS
    max_objects: int = 32
    max_groupoid_objects: int = 3
    max_groupoid_arrows: int = 6
    strict: bool = False

    def __post_init__(self):
        object.__setattr__(self, "seeds", tuple(self.seeds))
        object.__setattr__(self, "closure", tuple(self.closure))
        bad = [op for op in self.closure if op not in CLOSURE_OPS]
        if bad:
            raise UniverseError(f"unknown closure operation {bad[0]!r}")
        if self.max_objects < 1:
            raise UniverseError("max_objects must be positive")

    @classmethod
    def from_dict(cls, data: Mapping) -> "UniverseSpec":
        known = {f for f in cls.__dataclass_fields__}
        extra = set(data) - known
        if extra:
            raise UniverseError(f"unknown universe field {sorted(extra)[0]!r}")
        return cls(**data)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["seeds"] = list(self.seeds)
        d["closure"] = list(self.closure)
        return d


_TERM = re.compile(
    r"^(?:(?P<zero>0)|(?P<one>1)|(?P<iso>I)|d(?P<d>\d+)|C(?P<c>\d+)"
    r"|discrete\((?P<dn>\d+)\)|codiscrete\((?P<cn>\d+)\)"
    r"|B\(Z(?P<bz>\d+)\)|delooping\((?P<bn>\d+)\))$"
)


def build_seed(text: str) -> Groupoid:
    """Parse a seed such as ``"I"``, ``"d3"``, ``"B(Z2)"`` or ``"I*B(Z2)"`` (``*`` is product)."""
    parts = [t.strip() for t in text.split("*")]
    out = None
    scratch = FinGpdModel(())
    for part in parts:
        m = _TERM.match(part)
        if m is None:
            raise UniverseError(f"cannot parse seed {text!r}")
        g = m.groupdict()
        if g["zero"]:
            G = discrete(0)
        elif g["one"]:
            G = discrete(1)
        elif g["iso"]:
            G = codiscrete(2)
        elif g["d"] or g["dn"]:
            G = discrete(int(g["d"] or g["dn"]))
        elif g["c"] or g["cn"]:
            G = codiscrete(int(g["c"] or g["cn"]))
        else:
            k = int(g["bz"] or g["bn"])
            if k < 1:
                raise UniverseError("cyclic group order must be positive")
            G = delooping(k)
        out = G if out is None else canonical(scratch.product(out, G).apex)
    return out


@dataclass
class Universe:
    objects: tuple
    spec: UniverseSpec
    complete: bool
    stopped_in: str | None = None
    log: list = field(default_factory=list)

    @property
    def names(self) -> list:
        return [G.name for G in self.objects]

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "objects": self.names,
            "complete": self.complete,
            "stopped_in": self.stopped_in,
        }


def _fits(spec: UniverseSpec, G: Groupoid) -> bool:
    return G.n <= spec.max_groupoid_objects and G.m <= spec.max_groupoid_arrows


def _fiber_counts(f):
    obs = [0] * f.tgt.n
    mors = [0] * f.tgt.m
    for y in f.ob:
        obs[y] += 1
    for b in f.mor:
        mors[b] += 1
    return obs, mors


def _pullback_fits(spec: UniverseSpec, C: Groupoid, a, b) -> bool:
    n = sum(x * y for x, y in zip(a[0], b[0]))
    m = sum(x * y for x, y in zip(a[1], b[1]))
    return n <= spec.max_groupoid_objects and m <= spec.max_groupoid_arrows


def generate_universe(m, u: UniverseSpec | None = None) -> Universe:
    """Close the seeds of ``u`` under its operations; ``m`` may be a model or omitted.

    Called with one argument, that argument is the spec.  Pullbacks are
    taken of every fibration along every map into a seed object; other
    cospans would multiply the work without reaching new shapes at desk scale.
    """
    if u is None:
        m, u = None, m
    if not isinstance(u, UniverseSpec):
        raise UniverseError("expected a UniverseSpec")
    model = m if isinstance(m, FinGpdModel) else FinGpdModel(())
    objects: list = []
    seen: set = set()
    log: list = []

    class _Full(Exception):
        pass

    def add(G: Groupoid, how: str) -> None:
        try:
            G = canonical(G)
        except GroupoidError:
            return
        key = invariant(G)
        if key in seen or not _fits(u, G):
            return
        if len(objects) >= u.max_objects:
            if u.strict:
                raise UniverseError(f"{how} exceeds the cap of {u.max_objects} objects")
            raise _Full(how)
        seen.add(key)
        objects.append(G)
        log.append((G.name, how))

    seeds: list = []
    try:
        for s in u.seeds:
            G = build_seed(s)
            if not _fits(u, G):
                raise UniverseError(f"seed {s!r} exceeds the per-groupoid size caps")
            seeds.append(canonical(G))
            add(G, f"seed {s}")
        while True:
            before = len(objects)
            snapshot = list(objects)
            for op in u.closure:
                if op == "product":
                    for i, A in enumerate(snapshot):
                        for B in snapshot[i:]:
                            add(model.product(A, B).apex, f"product {A.name} {B.name}")
                elif op == "path":
                    for A in snapshot:
                        add(model.build_path_object(A).obj, f"path {A.name}")
                elif op == "pullback":
                    for C in seeds:
                        if C.n <= 1 and C.m <= 1:
                            continue  # pullbacks over 1 are products
                        fibs = [p for E in snapshot for p in model.hom(E, C) if model.is_fibration(p)]
                        maps = [f for D in snapshot for f in model.hom(D, C)]
                        fc = {f: _fiber_counts(f) for f in maps}
                        for p in fibs:
                            pc = fc[p] if p in fc else _fiber_counts(p)
                            for f in maps:
                                if not _pullback_fits(u, C, fc[f], pc):
                                    continue
                                add(model.pullback(f, p).apex,
                                    f"pullback {model.name(f)} {model.name(p)}")
            if len(objects) == before:
                break
    except _Full as e:
        return Universe(tuple(objects), u, False, str(e), log)
    return Universe(tuple(objects), u, True, None, log)
