"""Named verification suites over a whole working set.

Each suite takes an instance and keyword options and returns a
:class:`VerificationReport`.  The command line's ``gpd check`` and the
acceptance tests both go through :data:`SUITES`.
"""

from __future__ import annotations

from typing import Callable

from .clan import verify_clan
from .pi import is_contr_witness, verify_pi_tribe
from .report import VerificationReport
from .tribe import (
    anodyne_decisions,
    is_n_truncated,
    is_trivial_fibration,
    mere_proposition_conditions,
    path_object,
    same_class,
    section_of,
    straighten,
    verify_fibration_category,
    verify_homotopy_congruence,
    verify_ho_products,
    verify_mapping_path,
    verify_tribe,
)


def anodyne_agreement(t, objects=None) -> VerificationReport:
    """Every available anodyne decision procedure gives the same verdict on every map."""
    rep = VerificationReport()
    with rep.check("anodyne_procedures_agree") as chk:
        n = anodyne = 0
        for u in t.morphisms(objects):
            d = anodyne_decisions(t, u)
            n += 1
            if len(set(d.values())) > 1:
                chk.fail({"map": t.name(u), "decisions": d})
                break
            anodyne += next(iter(d.values()))
        chk.note = f"{n} maps, {anodyne} anodyne"
    return rep


def mapping_paths(t, objects=None) -> VerificationReport:
    """Mapping path contracts, including uniqueness of ``w``, for every map."""
    rep = VerificationReport()
    with rep.check("mapping_path_objects") as chk:
        n = 0
        for f in t.morphisms(objects):
            sub = verify_mapping_path(t, f)
            n += 1
            if not sub.ok:
                chk.fail({"map": t.name(f), "failed": [c.name for c in sub.failures]})
                break
        chk.note = f"{n} maps"
    return rep


def straightening(t, objects=None) -> VerificationReport:
    """Strict solutions of homotopy-commuting triangles, and sections of trivial fibrations."""
    objs = list(t.objects if objects is None else objects)
    rep = VerificationReport()
    with rep.check("straightening") as chk:
        n = 0
        for p in t.fibrations(objs):
            E, B = t.src(p), t.tgt(p)
            P = path_object(t, B)
            for A in objs:
                for g in t.hom(A, E):
                    pg = t.compose(p, g)
                    for H in t.homotopies_from(pg):
                        f = t.compose(P.d1, H)
                        g2 = straighten(t, p, f, g, H)
                        n += 1
                        if t.compose(p, g2) != f or not same_class(t, g2, g):
                            chk.fail({"fibration": t.name(p), "map": t.name(g), "target": t.name(f)})
                            break
                    if chk.failed:
                        break
                if chk.failed:
                    break
            if chk.failed:
                break
        chk.note = f"{n} triangles"
    with rep.check("trivial_fibration_sections") as chk:
        n = 0
        for p in t.fibrations(objs):
            if not is_trivial_fibration(t, p):
                continue
            s = section_of(t, p)
            n += 1
            if s is None or t.compose(p, s) != t.identity(t.tgt(p)):
                chk.fail({"trivial_fibration": t.name(p)})
                break
        chk.note = f"{n} trivial fibrations"
    return rep


def iscontr(t, objects=None) -> VerificationReport:
    rep = VerificationReport()
    with rep.check("iscontr") as chk:
        inhabited = []
        for A in (t.objects if objects is None else objects):
            K, sub = is_contr_witness(t, A)
            if not sub.ok:
                chk.fail({"object": t.name(A), "failed": [c.name for c in sub.failures]})
                break
            if t.hom(t.terminal, K):
                inhabited.append(t.name(A))
        chk.note = "inhabited for " + (", ".join(inhabited) or "none")
    return rep


def truncation(t, objects=None, max_level: int = 1) -> VerificationReport:
    """Mere-proposition conditions agree; every map is ``max_level``-truncated."""
    objs = list(t.objects if objects is None else objects)
    rep = VerificationReport()
    with rep.check("mere_proposition_conditions_agree") as chk:
        for A in objs:
            conds = mere_proposition_conditions(t, A, objs)
            if len(set(conds.values())) > 1:
                chk.fail({"object": t.name(A), "conditions": conds})
                break
    with rep.check("maps_truncated") as chk:
        n = 0
        for f in t.morphisms(objs):
            n += 1
            if not is_n_truncated(t, f, max_level):
                chk.fail({"map": t.name(f), "level": max_level})
                break
        chk.note = f"{n} maps at level {max_level}"
    return rep


SUITES: dict[str, Callable[..., VerificationReport]] = {
    "clan": verify_clan,
    "tribe": verify_tribe,
    "fibration_category": verify_fibration_category,
    "congruence": verify_homotopy_congruence,
    "anodyne": anodyne_agreement,
    "mapping_path": mapping_paths,
    "straightening": straightening,
    "pi": verify_pi_tribe,
    "iscontr": iscontr,
    "truncation": truncation,
    "ho_products": verify_ho_products,
}


def run_suites(t, names, **options) -> VerificationReport:
    """Run the named suites in order; check names are prefixed ``suite/``.

    ``options`` maps a suite name to its keyword arguments.
    """
    rep = VerificationReport()
    for name in names:
        if name not in SUITES:
            raise KeyError(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
        rep.extend(SUITES[name](t, **options.get(name, {})), prefix=f"{name}/")
    return rep
