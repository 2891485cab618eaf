"""JSON reading and writing.

Every document carries ``"cuweb_schema": 1`` and a ``"kind"``.  Output is
canonical (sorted keys, two-space indent, trailing newline), so dumping a
parsed canonical document reproduces it byte for byte.
"""
from __future__ import annotations

import hashlib
import json
from typing import Any, Mapping

from . import abgroups as ab
from .circle import ArcOpenSet
from .colimits import Cocone, SystemDiagram, validate_diagram
from .errors import ParseError, SchemaError
from .metric import CircleMorphism
from .order import FiniteOrderedMonoid, validate_monoid
from .systems import GroupSystem, SystemMorphism, validate_morphism, validate_system
from .webbing import WebbedSemigroup

SCHEMA_VERSION = 1
KINDS = ("monoid", "group", "system", "morphism", "diagram", "cocone", "web", "circle_morphism", "report")


def dumps(doc: Mapping) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def digest(doc: Mapping) -> str:
    return hashlib.sha256(dumps(doc).encode("utf-8")).hexdigest()


def loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}: {exc.msg}", (exc.lineno, exc.colno)) from None
    if not isinstance(doc, dict):
        raise SchemaError("top level must be a JSON object", ("",))
    if doc.get("cuweb_schema") != SCHEMA_VERSION:
        raise SchemaError(f'missing or unsupported "cuweb_schema" (expected {SCHEMA_VERSION})', ("cuweb_schema",))
    if doc.get("kind") not in KINDS:
        raise SchemaError(f'"kind" must be one of {list(KINDS)}', ("kind",))
    return doc


def load_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return loads(fh.read())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}", (path,)) from None


def envelope(kind: str, body: Mapping) -> dict:
    return {"cuweb_schema": SCHEMA_VERSION, "kind": kind, **body}


def _get(doc: Mapping, key: str, path: str, types=None):
    if key not in doc:
        raise SchemaError(f"missing key {path}{key}", (path + key,))
    value = doc[key]
    if types is not None and not isinstance(value, types):
        raise SchemaError(f"key {path}{key} has the wrong type", (path + key,))
    return value


def _wrap(path: str, fn, *args):
    """Re-raise value errors from constructors with the offending key."""
    try:
        return fn(*args)
    except (ValueError, TypeError, KeyError, IndexError) as exc:
        raise SchemaError(f"{path or 'document'}: {exc}", (path,)) from None


# ---------------------------------------------------------------------------
# monoids


def monoid_to_json(S: FiniteOrderedMonoid) -> dict:
    out = {
        "elements": list(S.names),
        "zero": S.zero,
        "add": [[S.add(a, b) for b in S.elements] for a in S.elements],
        "leq": [[int(S.leq(a, b)) for b in S.elements] for a in S.elements],
        "positively_ordered": S.positively_ordered,
    }
    if S.wb_table is not None:
        out["way_below"] = [[int(S.way_below(a, b)) for b in S.elements] for a in S.elements]
    return out


def monoid_from_json(doc: Mapping, path: str = "") -> FiniteOrderedMonoid:
    names = _get(doc, "elements", path, list)
    zero = _get(doc, "zero", path, int)
    add = _get(doc, "add", path, list)
    leq = _get(doc, "leq", path, list)
    pos = doc.get("positively_ordered")
    wb = doc.get("way_below")
    return _wrap(path, validate_monoid, names, add, leq, zero, pos, wb)


# ---------------------------------------------------------------------------
# groups and systems


def group_to_json(G: ab.FinAbGroup) -> dict:
    return {"factors": list(G.factors)}


def group_from_json(doc: Mapping, path: str = "") -> ab.FinAbGroup:
    factors = _get(doc, "factors", path, list)
    return _wrap(path, ab.FinAbGroup, tuple(factors))


def hom_to_json(h: ab.GroupHom) -> dict:
    return {"matrix": [list(r) for r in h.matrix]}


def system_to_json(G: GroupSystem) -> dict:
    S = G.base
    return {
        "base": monoid_to_json(S),
        "fibers": {str(s): group_to_json(G.fiber(s)) for s in S.elements},
        "edges": {f"{s},{t}": hom_to_json(G.edge(s, t)) for s in S.elements for t in S.elements if S.leq(s, t)},
    }


def _index_map(doc: Mapping, path: str) -> dict:
    out = {}
    for k, v in doc.items():
        try:
            out[int(k)] = v
        except ValueError:
            raise SchemaError(f"key {path}{k} is not an element index", (path + k,)) from None
    return out


def _pair_map(doc: Mapping, path: str) -> dict:
    out = {}
    for k, v in doc.items():
        try:
            a, b = (int(x) for x in k.split(","))
        except ValueError:
            raise SchemaError(f'key {path}{k} must look like "s,t"', (path + k,)) from None
        out[(a, b)] = v
    return out


def system_from_json(doc: Mapping, path: str = "") -> GroupSystem:
    S = monoid_from_json(_get(doc, "base", path, dict), path + "base.")
    fib_doc = _index_map(_get(doc, "fibers", path, dict), path + "fibers.")
    fibers = [group_from_json(fib_doc[s], f"{path}fibers.{s}.") if s in fib_doc else ab.TRIVIAL for s in S.elements]
    edges = {}
    for (s, t), h in _pair_map(_get(doc, "edges", path, dict), path + "edges.").items():
        edges[(s, t)] = _get(h, "matrix", f"{path}edges.{s},{t}.", list)
    return _wrap(path, validate_system, S, fibers, edges)


def morphism_body(m: SystemMorphism) -> dict:
    return {"alpha": list(m.alpha), "eta": {str(s): hom_to_json(h) for s, h in enumerate(m.eta)}}


def morphism_to_json(m: SystemMorphism) -> dict:
    return {"source": system_to_json(m.source), "target": system_to_json(m.target), **morphism_body(m)}


def _morphism_from_body(doc: Mapping, source: GroupSystem, target: GroupSystem, path: str) -> SystemMorphism:
    alpha = _get(doc, "alpha", path, list)
    eta_doc = _index_map(_get(doc, "eta", path, dict), path + "eta.")
    eta = []
    for s in source.base.elements:
        if s in eta_doc:
            eta.append(_get(eta_doc[s], "matrix", f"{path}eta.{s}.", list))
        else:
            eta.append(None)
    if any(e is None for e in eta):
        if not alpha or len(alpha) != source.base.size:
            raise SchemaError(f"{path}alpha must list one image per element", (path + "alpha",))
        eta = [e if e is not None else ab.zero_hom(source.fiber(s), target.fiber(alpha[s]))
               for s, e in enumerate(eta)]
    return _wrap(path, validate_morphism, source, target, alpha, eta)


def morphism_from_json(doc: Mapping, path: str = "") -> SystemMorphism:
    source = system_from_json(_get(doc, "source", path, dict), path + "source.")
    target = system_from_json(_get(doc, "target", path, dict), path + "target.")
    return _morphism_from_body(doc, source, target, path)


# ---------------------------------------------------------------------------
# diagrams


def diagram_to_json(D: SystemDiagram) -> dict:
    nodes = list(D.nodes)
    return {
        "index": {"nodes": [str(i) for i in nodes],
                  "leq": [[str(i), str(j)] for i in nodes for j in nodes if i != j and D.le(i, j)]},
        "objects": {str(i): system_to_json(D.objects[i]) for i in nodes},
        "arrows": {f"{i},{j}": morphism_body(D.arrow(i, j)) for i in nodes for j in nodes if i != j and D.le(i, j)},
    }


def diagram_from_json(doc: Mapping, path: str = "") -> SystemDiagram:
    index = _get(doc, "index", path, dict)
    nodes = [str(x) for x in _get(index, "nodes", path + "index.", list)]
    pairs = [tuple(str(v) for v in p) for p in _get(index, "leq", path + "index.", list)]
    obj_doc = _get(doc, "objects", path, dict)
    objects = {}
    for i in nodes:
        objects[i] = system_from_json(_get(obj_doc, i, path + "objects.", dict), f"{path}objects.{i}.")
    arrows = {}
    for key, body in _get(doc, "arrows", path, dict).items():
        parts = key.split(",")
        if len(parts) != 2 or parts[0] not in objects or parts[1] not in objects:
            raise SchemaError(f'arrow key {key!r} must be "i,j" with known nodes', (path + "arrows." + key,))
        i, j = parts
        arrows[(i, j)] = _morphism_from_body(body, objects[i], objects[j], f"{path}arrows.{key}.")
    return validate_diagram(nodes, pairs, objects, arrows)


def cocone_to_json(D: SystemDiagram, c: Cocone) -> dict:
    return {"target": system_to_json(c.target), "maps": {str(i): morphism_body(c.maps[i]) for i in D.nodes}}


def cocone_from_json(doc: Mapping, D: SystemDiagram, path: str = "") -> Cocone:
    """Candidate cocone over ``D``; legs are read against the diagram's objects."""
    target = system_from_json(_get(doc, "target", path, dict), path + "target.")
    maps_doc = _get(doc, "maps", path, dict)
    maps = {}
    for i in D.nodes:
        body = _get(maps_doc, str(i), path + "maps.", dict)
        maps[i] = _morphism_from_body(body, D.objects[i], target, f"{path}maps.{i}.")
    return Cocone(target, maps)


# ---------------------------------------------------------------------------
# webs


def web_to_json(W: WebbedSemigroup) -> dict:
    els = list(W.elements)
    idx = {x: i for i, x in enumerate(els)}

    def add_index(x, y):
        z = W.add(x, y)
        return idx.get(z)  # None when the sum leaves the window

    return {
        "pairs": [W.name(x) for x in els],
        "zero": idx[W.zero],
        "add": [[add_index(x, y) for y in els] for x in els],
        "leq": [[int(W.leq(x, y)) for y in els] for x in els],
        "way_below": [[int(W.way_below(x, y)) for y in els] for x in els],
        "window": W.window,
        "complete": W.complete,
        "system_sha256": digest(envelope("system", system_to_json(W.system))),
    }


# ---------------------------------------------------------------------------
# circle morphisms


def circle_morphism_to_json(f: CircleMorphism) -> dict:
    out: dict[str, Any] = {"fiber_factor": f.fiber_factor}
    if f.label:
        out["label"] = f.label
    if f.fiber_values is not None:
        out["fiber_values"] = [[g, h] for g, h in f.fiber_values]
    if f.kind == "table":
        out["table"] = {
            "cap": f.table_cap,
            "target_resolution": f.table_resolution,
            "images": [{"source": ArcOpenSet.from_mask(n, a).to_json(),
                        "image": ArcOpenSet.from_mask(f.table_resolution, b).to_json()} for n, a, b in f.table],
        }
    else:
        formula: dict[str, Any] = {"map": f.kind}
        if f.kind == "rotation":
            formula.update({"p": f.p, "m": f.m})
        out["formula"] = formula
    return out


def circle_morphism_from_json(doc: Mapping, path: str = "") -> CircleMorphism:
    c = doc.get("fiber_factor", 1)
    if not isinstance(c, int):
        raise SchemaError(f"{path}fiber_factor must be an integer", (path + "fiber_factor",))
    fv = doc.get("fiber_values")
    fiber_values = None if fv is None else tuple((int(g), int(h)) for g, h in fv)
    label = str(doc.get("label", ""))
    if "formula" in doc:
        formula = _get(doc, "formula", path, dict)
        kind = _get(formula, "map", path + "formula.", str)
        p, m = int(formula.get("p", 0)), int(formula.get("m", 0))
        return _wrap(path, lambda: CircleMorphism(kind, p=p % (1 << m) if kind == "rotation" else 0,
                                                  m=m if kind == "rotation" else 0, fiber_factor=c,
                                                  fiber_values=fiber_values, label=label))
    table = _get(doc, "table", path, dict)
    R = _get(table, "target_resolution", path + "table.", int)
    cap = _get(table, "cap", path + "table.", int)
    rows = []
    for k, entry in enumerate(_get(table, "images", path + "table.", list)):
        p = f"{path}table.images.{k}."
        src = _wrap(p + "source", ArcOpenSet.from_json, _get(entry, "source", p, dict))
        img = _wrap(p + "image", ArcOpenSet.from_json, _get(entry, "image", p, dict))
        if img.n != R:
            raise SchemaError(f"{p}image must have resolution {R}", (p + "image",))
        rows.append((src.n, src.mask, img.mask))
    return _wrap(path, lambda: CircleMorphism("table", fiber_factor=c, table=tuple(rows), table_resolution=R,
                                              table_cap=cap, fiber_values=fiber_values, label=label))


# ---------------------------------------------------------------------------
# dispatch

READERS = {
    "monoid": monoid_from_json,
    "group": group_from_json,
    "system": system_from_json,
    "morphism": morphism_from_json,
    "diagram": diagram_from_json,
    "circle_morphism": circle_morphism_from_json,
}

WRITERS = {
    FiniteOrderedMonoid: ("monoid", monoid_to_json),
    ab.FinAbGroup: ("group", group_to_json),
    GroupSystem: ("system", system_to_json),
    SystemMorphism: ("morphism", morphism_to_json),
    SystemDiagram: ("diagram", diagram_to_json),
    WebbedSemigroup: ("web", web_to_json),
    CircleMorphism: ("circle_morphism", circle_morphism_to_json),
}


def to_document(obj) -> dict:
    for cls, (kind, writer) in WRITERS.items():
        if isinstance(obj, cls):
            return envelope(kind, writer(obj))
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def from_document(doc: Mapping):
    kind = doc["kind"]
    if kind not in READERS:
        raise SchemaError(f"documents of kind {kind!r} cannot be read back", ("kind",))
    return READERS[kind](doc)
