"""Command-line front end.

Exit codes: 0 when every verdict holds, 1 when a checked property fails
(the witness is in the report), 2 for unreadable or malformed input.
"""
from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction
from typing import Any, Sequence

from . import serialize as io
from .circle import circle_semigroup
from .colimits import (
    SystemDiagram,
    check_L1L2,
    check_universal_property,
    check_webbing_continuity,
    colimit,
    colimit_web_cocone,
    padded_candidate,
    web_diagram,
)
from .errors import CuwebError, ParseError, SchemaError
from .metric import check_table_morphism, metric_report
from .order import AXIOMS, FiniteOrderedMonoid, check_axiom
from .structure import (
    StructMap,
    element_name,
    ideal_generated_by,
    ideal_lattice,
    quotient,
    short_exact,
    split_sequence,
)
from .systems import GroupSystem, SystemMorphism
from .webbing import WebMorphism, web

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    """Usage problems detected after argument parsing."""


def _show(S, x: Any) -> Any:
    """Element names inside witnesses; other values pass through."""
    if isinstance(x, tuple) and len(x) == 2 and isinstance(x[0], int) and isinstance(x[1], tuple) and hasattr(S, "system"):
        return element_name(S, x)
    if isinstance(x, int) and isinstance(S, FiniteOrderedMonoid) and not isinstance(x, bool):
        return S.names[x] if 0 <= x < S.size else x
    if isinstance(x, (tuple, list)):
        return [_show(S, y) for y in x]
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return str(x)


def _verdict(name: str, holds: bool, witness=None, **details) -> dict:
    out = {"name": name, "holds": bool(holds)}
    if witness is not None:
        out["witness"] = witness
    if details:
        out["details"] = details
    return out


def _structure(doc: dict, window: int | None):
    """A monoid document stands for itself, a system for its web."""
    obj = io.from_document(doc)
    if isinstance(obj, FiniteOrderedMonoid):
        return obj
    if isinstance(obj, GroupSystem):
        return web(obj, window)
    raise InputError(f"expected a monoid or system document, got {doc['kind']!r}")


def _load(path: str) -> dict:
    return io.load_file(path)


# ---------------------------------------------------------------------------
# subcommands; each returns (payload, verdicts)


def cmd_validate(args) -> tuple[dict, list]:
    doc = _load(args.file)
    try:
        obj = io.from_document(doc)
    except (ParseError, SchemaError):
        raise
    except CuwebError as exc:
        return {}, [_verdict("valid", False, _show(None, exc.witness), error=type(exc).__name__, message=str(exc))]
    details = {"kind": doc["kind"]}
    if isinstance(obj, FiniteOrderedMonoid):
        details["elements"] = obj.size
    elif isinstance(obj, GroupSystem):
        details["elements"] = obj.base.size
    canonical = io.dumps(io.to_document(obj)) if doc["kind"] != "diagram" else None
    if canonical is not None:
        details["canonical"] = canonical == io.dumps(doc)
    return {}, [_verdict("valid", True, **details)]


def cmd_web(args) -> tuple[dict, list]:
    doc = _load(args.file)
    system = io.from_document(doc)
    if not isinstance(system, GroupSystem):
        raise InputError("web expects a system document")
    W = web(system, args.window)
    return {"document": io.to_document(W)}, []


def cmd_axioms(args) -> tuple[dict, list]:
    S = _structure(_load(args.file), args.window)
    tags = args.axiom or list(AXIOMS)
    verdicts = []
    for tag in tags:
        v = check_axiom(S, tag)
        w = v.witness
        if w is not None:
            # AU and AD witnesses end with the multiplier n, which is not an element
            w = _show(S, w[:2]) + [w[2]] if tag in ("AU", "AD") else _show(S, w)
        verdicts.append(_verdict(tag, v.holds, w,
                                 certified=v.certified, note=v.note))
    return {}, verdicts


def cmd_ideals(args) -> tuple[dict, list]:
    S = _structure(_load(args.file), args.window)
    L = ideal_lattice(S)

    def names(I):
        return [element_name(S, x) for x in S.elements if x in I]

    payload = {
        "ideals": [names(I) for I in L.ideals],
        "hasse": [list(e) for e in L.hasse],
        "generators": [None if g is None else element_name(S, g) for g in L.generators],
        "positive_ideals": [names(J) for J in L.positive_ideals],
        "star": {str(k): v for k, v in sorted(L.star.items())},
    }
    return payload, [_verdict(L.verdict.name, L.verdict.holds, _show(S, L.verdict.witness), **L.verdict.details)]


def _parse_ideal(S, text: str) -> frozenset:
    lookup = {element_name(S, x): x for x in S.elements}

    def find(name: str):
        if name not in lookup:
            raise InputError(f"unknown element {name!r}")
        return lookup[name]

    if text.startswith("gen:"):
        return ideal_generated_by(S, find(text[4:]))
    return frozenset(find(p.strip()) for p in text.split(";") if p.strip())


def cmd_quotient(args) -> tuple[dict, list]:
    S = _structure(_load(args.file), args.window)
    I = _parse_ideal(S, args.ideal)
    Q = quotient(S, I)
    payload = {
        "ideal": [element_name(S, x) for x in S.elements if x in I],
        "classes": [[element_name(S, x) for x in S.elements if x in c] for c in Q.classes],
        "quotient": io.to_document(Q.monoid),
    }
    v = Q.exactness
    return payload, [_verdict("exact", v.holds, None, positions=v.positions, exact=v.exact)]


def cmd_exact(args) -> tuple[dict, list]:
    docs = [_load(p) for p in args.files]
    if len(docs) == 1:
        S = _structure(docs[0], args.window)
        seq = split_sequence(S)
        v = seq.verdict
        return {"neutral": element_name(S, seq.maximal.zero)}, [
            _verdict("split-exact", v.holds, None, positions=v.positions, exact=v.exact, split=v.split)]
    if len(docs) != 2:
        raise InputError("exact takes one system/monoid file or two morphism files")
    f, g = (io.from_document(d) for d in docs)
    if not (isinstance(f, SystemMorphism) and isinstance(g, SystemMorphism)):
        raise InputError("two-file form expects morphism documents")
    if io.digest(io.envelope("system", io.system_to_json(f.target))) != io.digest(io.envelope("system", io.system_to_json(g.source))):
        raise InputError("target of the first morphism differs from the source of the second")
    A, B = web(f.source, args.window), web(f.target, args.window)
    C = web(g.target, args.window)
    wf, wg = WebMorphism(f, A, B), WebMorphism(g, B, C)
    v = short_exact(StructMap(A, B, wf, "f"), StructMap(B, C, wg, "g"))
    return {}, [_verdict("exact", v.holds, None, positions=v.positions, exact=v.exact)]


def cmd_colimit(args) -> tuple[dict, list]:
    D = io.from_document(_load(args.file))
    if not isinstance(D, SystemDiagram):
        raise InputError("colimit expects a diagram document")
    verdicts = []
    wd = web_diagram(D, args.window)
    cocone = colimit_web_cocone(wd)
    v = check_L1L2(wd, cocone)
    verdicts.append(_verdict("L1L2", v.holds, _show(None, v.witness), L1=v.details["L1"], L2=v.details["L2"]))
    v = check_webbing_continuity(D, args.window)
    verdicts.append(_verdict("continuity", v.holds, _show(None, v.witness), **v.details))
    if args.candidate == "padded":
        v = check_L1L2(wd, padded_candidate(wd))
        # the padded candidate is not a colimit, so (L1)/(L2) failing is the expected outcome
        verdicts.append(_verdict("padded-rejected", not v.holds, _show(None, v.witness), failed=v.details["failed"]))
    elif args.candidate:
        cand = io.cocone_from_json(io.load_file(args.candidate), D)
        v = check_universal_property(D, cand)
        verdicts.append(_verdict("universal-property", v.holds, _show(None, v.witness),
                                 unique=v.details.get("unique"), certified=v.certified))
    top = colimit(D)
    return {"top": str(D.top), "colimit": io.to_document(top.target)}, verdicts


def cmd_circle(args) -> tuple[dict, list]:
    W = circle_semigroup(args.n, args.M, args.B, allow_large=args.allow_large)
    return {"document": io.to_document(W)}, []


def cmd_metric(args) -> tuple[dict, list]:
    a = io.from_document(_load(args.a))
    b = io.from_document(_load(args.b))
    verdicts = []
    for f in (a, b):
        tv = check_table_morphism(f)
        if not tv.holds:
            verdicts.append(_verdict(f"table:{f.name}", False, _show(None, tv.witness)))
    if verdicts:
        return {}, verdicts
    rep = metric_report(a, b, args.max_n, args.window)
    dd, d = rep.dd, rep.d
    if dd.exact and dd.finite and d.finite:
        lower_ok = dd.value <= d.value
        upper_ok = d.value <= 2 * dd.value
        verdicts.append(_verdict("dd<=d", lower_ok, None if lower_ok else [str(dd), str(d)]))
        verdicts.append(_verdict("d<=2dd", upper_ok, None if upper_ok else [str(dd), str(d)]))
    return {"report": rep.to_json(), "dd_text": _bracket_text(dd), "d_text": _bracket_text(d)}, verdicts


def _bracket_text(b) -> str:
    if not b.finite:
        return "∞"
    if b.exact:
        return str(b.upper)
    lo = "[" if b.lower == Fraction(0) and b.note.startswith("no failure") else "("
    return f"{lo}{b.lower}, {b.upper}]"


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    # the output flags are accepted before or after the subcommand
    flags = argparse.ArgumentParser(add_help=False)
    flags.add_argument("--timing", action="store_true", default=argparse.SUPPRESS,
                       help="include wall-clock time in the report")
    flags.add_argument("--text", action="store_true", default=argparse.SUPPRESS,
                       help="print a human-readable summary instead of JSON")
    p = argparse.ArgumentParser(prog="cuweb", description="Finite webbed ordered monoids: checks and constructions.",
                                parents=[flags])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, fn, help_: str, window: bool = True):
        sp = sub.add_parser(name, help=help_, parents=[flags])
        sp.set_defaults(func=fn)
        if window:
            sp.add_argument("--window", type=int, default=None, help="window B for Z fibers")
        return sp

    sp = add("validate", cmd_validate, "parse and validate a document", window=False)
    sp.add_argument("file")
    sp = add("web", cmd_web, "web of a system")
    sp.add_argument("file")
    sp = add("axioms", cmd_axioms, "check order axioms on a monoid or the web of a system")
    sp.add_argument("file")
    sp.add_argument("--axiom", action="append", choices=AXIOMS)
    sp = add("ideals", cmd_ideals, "ideal lattice and the positive-cone correspondence")
    sp.add_argument("file")
    sp = add("quotient", cmd_quotient, "quotient by an ideal")
    sp.add_argument("file")
    sp.add_argument("--ideal", required=True,
                    help='"gen:NAME" for the ideal generated by NAME, or element names separated by ";"')
    sp = add("exact", cmd_exact, "split sequence of one structure, or exactness of two morphisms")
    sp.add_argument("files", nargs="+")
    sp = add("colimit", cmd_colimit, "colimit checks for a finite directed diagram")
    sp.add_argument("file")
    sp.add_argument("--candidate", help='"padded" or a cocone document')
    sp = add("circle", cmd_circle, "window of the circle web", window=False)
    sp.add_argument("--n", type=int, default=0, help="grid resolution (2**n arcs)")
    sp.add_argument("--M", type=int, default=4, help="largest finite step value; larger sums become ∞")
    sp.add_argument("--B", type=int, default=2, help="window [-B, B] for the Z fiber")
    sp.add_argument("--allow-large", action="store_true", help="lift the resolution guard")
    sp = add("metric", cmd_metric, "distances between two circle morphisms", window=False)
    sp.add_argument("a", help="circle morphism document")
    sp.add_argument("b", help="circle morphism document")
    sp.add_argument("--max-n", type=int, default=3, help="finest resolution for dd and the grid for d (<= 4)")
    sp.add_argument("--window", type=int, default=1, help="window [-B, B] for the Z fiber")
    return p


def _summary(report: dict) -> str:
    lines = [f"{report['command']}: {'ok' if report['holds'] else 'FAIL'}"]
    if "dd_text" in report:
        lines.append(f"  dd = {report['dd_text']}   d = {report['d_text']}")
    for v in report["verdicts"]:
        line = f"  {v['name']}: {'holds' if v['holds'] else 'fails'}"
        if "witness" in v:
            line += f"  witness={v['witness']}"
        lines.append(line)
    if "error" in report:
        lines.append(f"  error: {report['error']}")
    if "seconds" in report:
        lines.append(f"  time: {report['seconds']:.3f}s")
    return "\n".join(lines)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    for flag in ("timing", "text"):
        setattr(args, flag, getattr(args, flag, False))
    inputs = [getattr(args, k) for k in ("file", "a", "b") if getattr(args, k, None)] + list(getattr(args, "files", []) or [])
    report: dict[str, Any] = {"command": args.command, "inputs": {}}
    start = time.perf_counter()
    code = EXIT_OK
    try:
        for path in inputs:
            report["inputs"][path] = io.digest(_load(path))
        payload, verdicts = args.func(args)
        report.update(payload)
        report["verdicts"] = verdicts
        report["holds"] = all(v["holds"] for v in verdicts)
        code = EXIT_OK if report["holds"] else EXIT_FAIL
    except (ParseError, SchemaError, InputError) as exc:
        report.update({"holds": False, "verdicts": [], "error": f"{type(exc).__name__}: {exc}"})
        code = EXIT_INPUT
    except CuwebError as exc:
        report.update({"holds": False, "verdicts": [
            _verdict(type(exc).__name__, False, _show(None, exc.witness), message=str(exc))]})
        code = EXIT_FAIL
    if args.timing:
        report["seconds"] = round(time.perf_counter() - start, 6)
    if "document" in report and code == EXIT_OK and not args.text:
        # constructions print the document itself
        out = report["document"]
    else:
        out = io.envelope("report", report)
    sys.stdout.write(_summary(report) + "\n" if args.text else io.dumps(out))
    return code


if __name__ == "__main__":
    sys.exit(main())
