"""JSON and DOT formats for graphs, witnesses and reports.

Graph files::

    {"kind": "finite", "vertices": ["v", "w"],
     "edges": [{"id": "a", "src": "v", "dst": "w"}]}

    {"kind": "periodic", "stem": {...finite...}, "pattern": {...finite...},
     "stem_links": [{"id": "x", "src": "v", "dst": "c"}],
     "period_links": [{"id": "e", "src": "c", "dst": "c"}]}

A period link's ``dst`` lives in the next copy. Vertices are written
``stem:v`` or ``copy:3:c``; copy edges as ``copy:2:e``.

Witness files::

    {"mu": {"base": "stem:v", "edges": []},
     "first": [{"alpha": [...edge ids...], "beta": [...]}], "second": [...]}

``alpha`` / ``beta`` edge lists start at the base of ``mu``.
"""

from __future__ import annotations

import json
from pathlib import Path as FsPath
from typing import Any

from pigraph.conditions import BadPathCertificate
from pigraph.cylinders import Bisection, ParadoxicalWitness
from pigraph.graph_model import (
    Edge,
    FiniteGraph,
    GraphError,
    GraphHandle,
    Path,
    PeriodicGraph,
    VertexRef,
    materialize,
)
from pigraph.structure import IsotropyCertificate


class ParseError(GraphError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line, self.column = line, column
        where = f" (line {line}, column {column})" if line else ""
        super().__init__(message + where)


def _loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None


def _need(obj: dict, key: str, kind: type, where: str):
    if not isinstance(obj, dict) or key not in obj:
        raise ParseError(f"{where}: missing {key!r}")
    value = obj[key]
    if not isinstance(value, kind):
        raise ParseError(f"{where}.{key}: expected {kind.__name__}")
    return value


def _edges(items: list, where: str) -> tuple[Edge, ...]:
    out = []
    for i, item in enumerate(items):
        at = f"{where}[{i}]"
        step = item.get("step", 1) if isinstance(item, dict) else 1
        out.append(Edge(_need(item, "id", str, at), _need(item, "src", str, at), _need(item, "dst", str, at), step))
    return tuple(out)


def _finite(obj: dict, where: str) -> FiniteGraph:
    vertices = _need(obj, "vertices", list, where)
    if not all(isinstance(v, str) for v in vertices):
        raise ParseError(f"{where}.vertices: expected strings")
    return FiniteGraph(tuple(vertices), _edges(_need(obj, "edges", list, where), f"{where}.edges"))


def graph_from_dict(obj: dict) -> GraphHandle:
    kind = _need(obj, "kind", str, "$")
    if kind == "finite":
        return _finite(obj, "$")
    if kind == "periodic":
        return PeriodicGraph(
            stem=_finite(_need(obj, "stem", dict, "$"), "$.stem"),
            pattern=_finite(_need(obj, "pattern", dict, "$"), "$.pattern"),
            stem_links=_edges(obj.get("stem_links", []), "$.stem_links"),
            period_links=_edges(obj.get("period_links", []), "$.period_links"),
        )
    raise ParseError(f"$.kind: unknown graph kind {kind!r}")


def _edge_dict(e: Edge) -> dict:
    d = {"id": e.id, "src": e.src, "dst": e.dst}
    if e.step != 1:
        d["step"] = e.step
    return d


def _finite_dict(g: FiniteGraph) -> dict:
    return {"vertices": list(g.vertices), "edges": [_edge_dict(e) for e in g.edges]}


def graph_to_dict(g: GraphHandle) -> dict:
    if isinstance(g, FiniteGraph):
        return {"kind": "finite", **_finite_dict(g)}
    return {
        "kind": "periodic",
        "stem": _finite_dict(g.stem),
        "pattern": _finite_dict(g.pattern),
        "stem_links": [_edge_dict(e) for e in g.stem_links],
        "period_links": [_edge_dict(e) for e in g.period_links],
    }


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def render_graph_json(g: GraphHandle) -> str:
    return dumps(graph_to_dict(g))


def parse_graph_text(text: str) -> GraphHandle:
    return graph_from_dict(_loads(text))


def parse_graph_file(path) -> GraphHandle:
    return parse_graph_text(FsPath(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# witnesses


def path_to_dict(p: Path) -> dict:
    return {"base": str(p.base), "edges": [str(e) for e in p.edges]}


def path_from_dict(g: GraphHandle, obj) -> Path:
    return g.path(_need(obj, "base", str, "path"), _need(obj, "edges", list, "path"))


def witness_to_dict(w: ParadoxicalWitness) -> dict:
    def fam(items):
        return [{"alpha": [str(e) for e in b.alpha.edges], "beta": [str(e) for e in b.beta.edges]} for b in items]

    return {"mu": path_to_dict(w.mu), "first": fam(w.first), "second": fam(w.second)}


def witness_from_dict(obj: dict, g: GraphHandle) -> ParadoxicalWitness:
    """Resolve a witness against ``g``; unknown ids raise ``UnknownEdge`` / ``UnknownVertex``."""
    mu = path_from_dict(g, _need(obj, "mu", dict, "$"))

    def side(item, key, at):
        edges = _need(item, key, list, at)
        return g.path(mu.base, edges)

    def fam(name):
        out = []
        for i, item in enumerate(_need(obj, name, list, "$")):
            at = f"$.{name}[{i}]"
            out.append(Bisection(side(item, "alpha", at), side(item, "beta", at)))
        return tuple(out)

    return ParadoxicalWitness(mu, fam("first"), fam("second"))


def render_witness_json(w: ParadoxicalWitness) -> str:
    return dumps(witness_to_dict(w))


def parse_witness_file(path, g: GraphHandle) -> ParadoxicalWitness:
    return witness_from_dict(_loads(FsPath(path).read_text(encoding="utf-8")), g)


# ---------------------------------------------------------------------------
# certificates


def to_jsonable(obj: Any) -> Any:
    """Plain JSON data for certificates and other analysis results."""
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    if isinstance(obj, Path):
        return path_to_dict(obj)
    if isinstance(obj, VertexRef):
        return str(obj)
    if isinstance(obj, IsotropyCertificate):
        return {"prefix": path_to_dict(obj.prefix), "cycle": path_to_dict(obj.cycle)}
    if isinstance(obj, BadPathCertificate):
        return {
            "root": str(obj.root),
            "marker": obj.marker.value,
            "prefix": list(obj.prefix),
            "cycle_node": [obj.cycle_node[0], obj.cycle_node[1]],
            "cycle": list(obj.cycle),
        }
    if isinstance(obj, ParadoxicalWitness):
        return witness_to_dict(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


# ---------------------------------------------------------------------------
# DOT


def _q(name: str) -> str:
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def render_dot(g: GraphHandle, copies: int = 3) -> str:
    """A DOT digraph; periodic graphs are unrolled to ``copies`` copies.

    Frontier vertices (whose period links were cut) are drawn dashed.
    """
    if isinstance(g, FiniteGraph):
        lines = ["digraph G {"]
        lines += [f"  {_q(v)};" for v in g.vertices]
        lines += [f"  {_q(e.src)} -> {_q(e.dst)} [label={_q(e.id)}];" for e in g.edges]
        lines.append("}")
        return "\n".join(lines) + "\n"
    flat, frontier = materialize(g, copies)
    lines = ["digraph G {"]
    for v in flat.vertices:
        attrs = ' [style=dashed, xlabel="..."]' if VertexRef.parse(v) in frontier else ""
        lines.append(f"  {_q(v)}{attrs};")
    lines += [f"  {_q(e.src)} -> {_q(e.dst)} [label={_q(e.id)}];" for e in flat.edges]
    lines.append("}")
    return "\n".join(lines) + "\n"
