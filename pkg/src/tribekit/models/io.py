"""JSON input and output for presentations, polynomial spans and universe specs.

Loading validates and reports; it never repairs.  Every rejection carries a
list of line-item diagnostics, each naming the offending ids.
"""

from __future__ import annotations

import json
from typing import Mapping

from ..clan import ClanStructure, materialize, verify_clan
from ..fincat import CategoryPresentation, PresentationError, validate_presentation
from ..pi import PiTribeStructure, PolynomialSpan
from ..tribe import TribeStructure
from .universe import UniverseError, UniverseSpec


class LoadError(ValueError):
    """Rejected input; ``diagnostics`` lists what is wrong."""

    def __init__(self, message: str, diagnostics=()):
        super().__init__(message)
        self.diagnostics = list(diagnostics)

    def to_dict(self) -> dict:
        return {"error": str(self), "diagnostics": self.diagnostics}


def _parse(text: str | bytes | Mapping, what: str) -> Mapping:
    if isinstance(text, Mapping):
        return text
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise LoadError(
            f"{what}: invalid JSON",
            [{"line": e.lineno, "column": e.colno, "problem": e.msg}],
        ) from None
    if not isinstance(data, Mapping):
        raise LoadError(f"{what}: expected a JSON object", [{"problem": "top level is not an object"}])
    return data


def _diagnostics(report) -> list:
    return [{"check": c.name, "witness": c.witness} for c in report.failures]


def load_presentation(text, kind: str = "clan", max_morphisms: int | None = None,
                      check_axioms: bool = True):
    """Build a :class:`ClanStructure`, :class:`TribeStructure` or :class:`PiTribeStructure`.

    The category laws are validated first; then, unless ``check_axioms`` is
    off, the clan axioms.  Any failure raises :class:`LoadError`.
    """
    if kind not in ("clan", "tribe", "pi"):
        raise ValueError(f"unknown presentation kind {kind!r}")
    data = _parse(text, "presentation")
    kw = {} if max_morphisms is None else {"max_morphisms": max_morphisms}
    try:
        clan = ClanStructure.from_dict(data, **kw)
    except (PresentationError, KeyError, TypeError, ValueError) as e:
        raise LoadError(f"presentation: {e}", [{"problem": str(e)}]) from None

    laws = validate_presentation(clan.presentation)
    if not laws.ok:
        raise LoadError("presentation is not a category", _diagnostics(laws))
    if check_axioms:
        rep = verify_clan(clan)
        if not rep.ok:
            raise LoadError("presentation is not a clan", _diagnostics(rep))
    if kind == "clan":
        return clan
    if kind == "pi":
        return PiTribeStructure.from_clan(clan)
    return TribeStructure.from_clan(clan)


def export_presentation(m, max_morphisms: int = 100_000) -> dict:
    """CategoryPresentation JSON for the working set of any clan instance."""
    return materialize(m, max_morphisms=max_morphisms).to_dict()


def load_span(text) -> PolynomialSpan:
    data = _parse(text, "polynomial span")
    try:
        return PolynomialSpan.from_dict(data)
    except (KeyError, TypeError, ValueError) as e:
        raise LoadError(f"polynomial span: {e}", [{"problem": str(e)}]) from None


def dump_span(P: PolynomialSpan) -> str:
    return json.dumps(P.to_dict(), sort_keys=True)


def load_universe_spec(text) -> UniverseSpec:
    data = _parse(text, "universe spec")
    try:
        return UniverseSpec.from_dict(data)
    except (UniverseError, TypeError) as e:
        raise LoadError(f"universe spec: {e}", [{"problem": str(e)}]) from None


def dump_universe_spec(u: UniverseSpec) -> str:
    return json.dumps(u.to_dict(), sort_keys=True)
