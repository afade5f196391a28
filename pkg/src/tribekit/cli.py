"""Command-line front end.

Exit status: 0 when every check passes, 1 when any check fails, 2 for
invalid input.  ``--json`` prints machine-readable output to stdout.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .clan import ClanError, materialize, slice_clan, verify_clan
from .fincat import PresentationError
from .models.fingpd import FinGpdModel
from .models.io import (
    LoadError,
    load_presentation,
    load_span,
    load_universe_spec,
)
from .models.universe import UniverseError, UniverseSpec, generate_universe
from .pi import (
    Family,
    PolynomialSpan,
    compose_polynomials,
    eval_polynomial,
    verify_composition,
    verify_pi_tribe,
)
from .report import VerificationReport
from .suites import SUITES, run_suites
from .tribe import (
    TribeError,
    are_homotopic,
    homotopy_category,
    is_n_truncated,
    verify_tribe,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    """Bad invocation or unreadable input; exit status 2."""


def _seed() -> int | None:
    raw = os.environ.get("TRIBEKIT_SEED")
    if raw in (None, ""):
        return None
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"TRIBEKIT_SEED must be an integer, got {raw!r}") from None


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def _load(args, kind: str, check_axioms: bool = True):
    return load_presentation(
        _read(args.file), kind, max_morphisms=args.max_size, check_axioms=check_axioms
    )


def _morphism(t, ident: str) -> str:
    try:
        t.presentation.morphism(ident)
    except (KeyError, PresentationError):
        raise InputError(f"unknown morphism id {ident!r}") from None
    return ident


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True, indent=2, default=str))
    else:
        print(text)


def _report_exit(args, rep: VerificationReport, extra: dict | None = None, text: str = "") -> int:
    payload = rep.to_dict()
    if extra:
        payload.update(extra)
    body = rep.summary()
    if text:
        body = text + ("\n" + body if body else "")
    _emit(args, payload, body)
    return EXIT_OK if rep.ok else EXIT_FAIL


# ------------------------------------------------------------------ verbs

def cmd_check(args) -> int:
    t = _load(args, args.kind, check_axioms=False)
    if args.kind == "clan":
        rep = verify_clan(t)
    else:
        rep = verify_tribe(t)
        if args.kind == "pi":
            rep.extend(verify_pi_tribe(t, seed=_seed()))
    return _report_exit(args, rep)


def cmd_slice(args) -> int:
    t = _load(args, "clan")
    if not t.presentation.has_object(args.at):
        raise InputError(f"unknown object id {args.at!r}")
    s = materialize(slice_clan(t, args.at))
    rep = verify_clan(s)
    out = s.to_dict()
    text = (
        f"slice over {args.at}: {len(out['objects'])} objects, "
        f"{len(out['morphisms'])} maps, {len(out['fibrations'])} fibrations"
    )
    return _report_exit(args, rep, {"slice": out}, text)


def cmd_factorize(args) -> int:
    t = _load(args, "tribe")
    f = _morphism(t, args.map)
    rep = VerificationReport()
    extra = {}
    with rep.check("af_factorization") as chk:
        try:
            u, p = t.af_factorize(f)
        except (TribeError, ClanError) as e:
            chk.fail({"map": f, "problem": str(e)})
        else:
            extra = {"anodyne": u, "fibration": p, "middle": t.src(p)}
    text = f"{f} = {extra['fibration']} ∘ {extra['anodyne']}" if extra else ""
    return _report_exit(args, rep, extra, text)


def cmd_hocat(args) -> int:
    t = _load(args, "tribe")
    ho = homotopy_category(t)
    out = ho.to_dict()
    text = "\n".join(
        f"{m['id']}: {m['src']} -> {m['tgt']}" for m in out["morphisms"]
    )
    _emit(args, out, text)
    return EXIT_OK


def cmd_homotopic(args) -> int:
    t = _load(args, "tribe")
    f, g = _morphism(t, args.f), _morphism(t, args.g)
    if t.src(f) != t.src(g) or t.tgt(f) != t.tgt(g):
        raise InputError(f"{f!r} and {g!r} are not parallel")
    w = are_homotopic(t, f, g)
    rep = VerificationReport()
    rep.record("homotopic", w is not None, {"f": f, "g": g})
    extra = {"homotopy": w.map} if w is not None else {}
    return _report_exit(args, rep, extra)


def cmd_truncate(args) -> int:
    t = _load(args, "tribe")
    f = _morphism(t, args.map)
    if args.level < -2:
        raise InputError("truncation level must be at least -2")
    rep = VerificationReport()
    rep.record("truncated", is_n_truncated(t, f, args.level), {"map": f, "level": args.level})
    return _report_exit(args, rep)


def _family(text: str, I) -> Family:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"family: invalid JSON at line {e.lineno}") from None
    if isinstance(data, list):
        index = dict(enumerate(data))
        els = list(index)
    elif isinstance(data, dict) and "index" in data:
        index = dict(data["index"])
        els = list(data.get("elements", index))
    else:
        raise InputError('family must be a list of labels or {"elements", "index"}')
    labels = set(I)
    bad = [x for x in els if index.get(x) not in labels]
    if bad:
        raise InputError(f"family element {bad[0]!r} is not over a label of I")
    return Family.of(els, index)


def cmd_poly(args) -> int:
    P = load_span(_read(args.P))
    if args.action == "eval":
        if args.family is None:
            raise InputError("poly eval needs --family FILE")
        X = _family(_read(args.family), P.I)
        Y = eval_polynomial(P, X)
        out = {
            "elements": [repr(y) for y in Y.elements],
            "profile": dict(zip(map(str, P.J), Y.profile(P.J))),
        }
        _emit(args, out, "\n".join(f"{j}: {n}" for j, n in out["profile"].items()))
        return EXIT_OK
    if args.Q is None:
        raise InputError("poly compose needs two span files")
    Q = load_span(_read(args.Q))
    try:
        C = compose_polynomials(P, Q)
    except ValueError as e:
        raise InputError(str(e)) from None
    span = C.relabelled().to_dict()
    if args.verify_upto is None:
        _emit(args, {"span": span}, json.dumps(span, sort_keys=True))
        return EXIT_OK
    rep = verify_composition(P, Q, C, max_size=args.verify_upto)
    return _report_exit(args, rep, {"span": span}, json.dumps(span, sort_keys=True))


def _universe_spec(args) -> UniverseSpec:
    if args.universe in (None, "default"):
        u = UniverseSpec()
    else:
        text = args.universe if args.universe.lstrip().startswith("{") else _read(args.universe)
        u = load_universe_spec(text)
    if args.cap is not None:
        u = UniverseSpec.from_dict({**u.to_dict(), "max_objects": args.cap})
    return u


def cmd_gpd(args) -> int:
    u = _universe_spec(args)
    U = generate_universe(u)
    if args.action == "universe":
        _emit(args, U.to_dict(), "\n".join(U.names))
        return EXIT_OK
    laws = [x.strip() for x in args.laws.split(",") if x.strip()]
    unknown = [x for x in laws if x not in SUITES]
    if unknown:
        raise InputError(f"unknown law {unknown[0]!r}; known: {', '.join(SUITES)}")
    m = FinGpdModel(U.objects)
    options = {"pi": {"pair_limit": args.pairs, "seed": _seed()}}
    rep = run_suites(m, laws, **options)
    extra = {"universe": U.to_dict()}
    text = f"universe: {', '.join(U.names)}" + ("" if U.complete else f" (truncated in {U.stopped_in})")
    return _report_exit(args, rep, extra, text)


# ----------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    # SUPPRESS keeps a subcommand from resetting a flag given before it
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="print JSON to stdout")
    common.add_argument("--max-size", type=int, metavar="N",
                        help="largest presentation accepted, in morphisms")
    common.add_argument("--cap", type=int, metavar="N",
                        help="object cap for generated universes")

    ap = argparse.ArgumentParser(prog="tribekit", description=__doc__.splitlines()[0],
                                 parents=[common])
    sub = ap.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("check", parents=[common], help="verify clan, tribe or π-tribe axioms")
    p.add_argument("kind", choices=("clan", "tribe", "pi"))
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("slice", parents=[common], help="the slice clan over an object")
    p.add_argument("file")
    p.add_argument("--at", required=True, metavar="OBJ")
    p.set_defaults(func=cmd_slice)

    p = sub.add_parser("factorize", parents=[common], help="anodyne-then-fibration factorization")
    p.add_argument("file")
    p.add_argument("--map", required=True, metavar="ID")
    p.set_defaults(func=cmd_factorize)

    p = sub.add_parser("hocat", parents=[common], help="the homotopy category")
    p.add_argument("file")
    p.set_defaults(func=cmd_hocat)

    p = sub.add_parser("homotopic", parents=[common], help="decide whether two maps are homotopic")
    p.add_argument("file")
    p.add_argument("--f", required=True, metavar="ID")
    p.add_argument("--g", required=True, metavar="ID")
    p.set_defaults(func=cmd_homotopic)

    p = sub.add_parser("truncate", parents=[common], help="decide n-truncatedness of a map")
    p.add_argument("file")
    p.add_argument("--map", required=True, metavar="ID")
    p.add_argument("--level", required=True, type=int, metavar="N")
    p.set_defaults(func=cmd_truncate)

    p = sub.add_parser("poly", parents=[common], help="evaluate or compose polynomial spans")
    p.add_argument("action", choices=("eval", "compose"))
    p.add_argument("P")
    p.add_argument("Q", nargs="?")
    p.add_argument("--family", metavar="FILE", help="family over I for eval")
    p.add_argument("--verify-upto", type=int, default=None, metavar="N",
                   help="check the composite against iterated evaluation for |X| <= N")
    p.set_defaults(func=cmd_poly)

    p = sub.add_parser("gpd", parents=[common], help="finite groupoid universes")
    p.add_argument("action", choices=("check", "universe"))
    p.add_argument("--universe", default=None, metavar="SPEC",
                   help="UniverseSpec JSON file, inline JSON, or 'default'")
    p.add_argument("--laws", default="clan,tribe", metavar="LIST",
                   help=f"comma-separated suites: {', '.join(SUITES)}")
    p.add_argument("--pairs", type=int, default=20, metavar="N",
                   help="fibration pairs sampled by the pi suite")
    p.set_defaults(func=cmd_gpd)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_INPUT
    for key, value in (("json", False), ("max_size", None), ("cap", None)):
        if not hasattr(args, key):
            setattr(args, key, value)
    if getattr(args, "func", None) is None:
        ap.print_usage(sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except LoadError as e:
        if getattr(args, "json", False):
            print(json.dumps(e.to_dict(), sort_keys=True, indent=2, default=str))
        print(f"error: {e}", file=sys.stderr)
        for d in e.diagnostics:
            print(f"  {json.dumps(d, sort_keys=True, default=str)}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, UniverseError, PresentationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
