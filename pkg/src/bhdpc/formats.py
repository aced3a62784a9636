"""JSON instance and result files, and DOT export.

Parsing errors name the offending field with a JSON-style path such as
``faults[0][1][0]`` so a bad file can be fixed without guesswork.
"""

from __future__ import annotations

import json
from typing import Any, Dict, Iterable, List, Optional

from .errors import InputError
from .instance import Dpc2, Instance, Terminals
from .topology import FaultSet, Vertex, canon_edge, edges, is_adjacent, side, vertices

MAX_N = 12


def _fail(path: str, message: str):
    raise InputError(f"{path}: {message}")


def _int(obj: Any, path: str) -> int:
    if isinstance(obj, bool) or not isinstance(obj, int):
        _fail(path, f"expected an integer, got {json.dumps(obj)}")
    return obj


def parse_vertex(obj: Any, n: int, path: str) -> Vertex:
    if not isinstance(obj, list):
        _fail(path, "expected a coordinate array")
    if len(obj) != n:
        _fail(path, f"expected {n} coordinates, got {len(obj)}")
    out = []
    for j, a in enumerate(obj):
        a = _int(a, f"{path}[{j}]")
        if not 0 <= a <= 3:
            _fail(f"{path}[{j}]", f"coordinate {a} is not in 0..3")
        out.append(a)
    return tuple(out)


def parse_vertex_text(text: str, n: int, what: str) -> Vertex:
    """A vertex written as comma-separated coordinates, e.g. ``0,1,3``."""
    try:
        coords = [int(x) for x in text.split(",")]
    except ValueError:
        raise InputError(f"{what}: expected comma-separated integers, got {text!r}") from None
    return parse_vertex(coords, n, what)


def parse_instance(obj: Any) -> Instance:
    if not isinstance(obj, dict):
        _fail("$", "expected an object with n, faults and terminals")
    for key in ("n", "faults", "terminals"):
        if key not in obj:
            _fail(key, "missing")
    n = _int(obj["n"], "n")
    if not 1 <= n <= MAX_N:
        _fail("n", f"{n} is not in 1..{MAX_N}")
    faults = obj["faults"]
    if not isinstance(faults, list):
        _fail("faults", "expected a list of edges")
    edge_list = []
    for i, e in enumerate(faults):
        if not isinstance(e, list) or len(e) != 2:
            _fail(f"faults[{i}]", "expected a pair of coordinate arrays")
        u = parse_vertex(e[0], n, f"faults[{i}][0]")
        v = parse_vertex(e[1], n, f"faults[{i}][1]")
        if not is_adjacent(u, v):
            _fail(f"faults[{i}]", f"{list(u)} and {list(v)} are not adjacent")
        edge_list.append(canon_edge(u, v))
    if len(set(edge_list)) != len(edge_list):
        _fail("faults", "an edge is listed twice")
    terms = obj["terminals"]
    if not isinstance(terms, dict):
        _fail("terminals", "expected an object with s1, s2, t1, t2")
    vs = {}
    for key in ("s1", "s2", "t1", "t2"):
        if key not in terms:
            _fail(f"terminals.{key}", "missing")
        vs[key] = parse_vertex(terms[key], n, f"terminals.{key}")
    t = Terminals(**vs)
    if t.s1 == t.s2:
        _fail("terminals.s2", "equals s1")
    if t.t1 == t.t2:
        _fail("terminals.t2", "equals t1")
    if side(t.s1) != side(t.s2):
        _fail("terminals.s2", "s1 and s2 must lie in the same partite set")
    if side(t.t1) != side(t.t2):
        _fail("terminals.t2", "t1 and t2 must lie in the same partite set")
    if side(t.s1) == side(t.t1):
        _fail("terminals.t1", "S and T must lie in different partite sets")
    return Instance(n, FaultSet(n, edge_list), t)


def instance_to_json(inst: Instance) -> Dict:
    t = inst.terminals
    return {
        "n": inst.n,
        "faults": [[list(a), list(b)] for a, b in sorted(inst.faults)],
        "terminals": {k: list(getattr(t, k)) for k in ("s1", "s2", "t1", "t2")},
    }


def parse_path(obj: Any, n: int, path: str) -> tuple:
    if not isinstance(obj, list):
        _fail(path, "expected a list of vertices")
    return tuple(parse_vertex(v, n, f"{path}[{i}]") for i, v in enumerate(obj))


def parse_result(obj: Any, n: int) -> Dict:
    """The status plus, for solved results, the cover as a Dpc2."""
    if not isinstance(obj, dict) or "status" not in obj:
        _fail("$", "expected an object with a status")
    out = dict(obj)
    if obj["status"] == "solved":
        for key in ("p1", "p2"):
            if key not in obj:
                _fail(key, "missing")
        out["cover"] = Dpc2(parse_path(obj["p1"], n, "p1"), parse_path(obj["p2"], n, "p2"))
    return out


def cover_to_json(cover: Dpc2) -> Dict:
    return {"p1": [list(v) for v in cover.p1], "p2": [list(v) for v in cover.p2]}


def load_json(path: str) -> Any:
    """Read a UTF-8 JSON file; ``-`` reads standard input."""
    import sys
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: not valid JSON ({exc})") from None
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def dumps(obj: Any) -> str:
    """Compact, key-sorted JSON so equal values give equal bytes."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


# --------------------------------------------------------------------------
# DOT export


def vertex_name(v: Vertex) -> str:
    return "v_" + "".join(str(a) for a in v)


PATH_STYLES = ({"color": "blue", "penwidth": "2.5"}, {"color": "red", "penwidth": "2.5", "style": "bold"})


def _attrs(d: Dict[str, str]) -> str:
    return "[" + ", ".join(f'{k}="{v}"' for k, v in d.items()) + "]"


def to_dot(n: int, faults: Optional[FaultSet] = None, cover: Optional[Dpc2] = None) -> str:
    """BH_n as an undirected DOT graph.

    Faulty edges are dashed grey.  With a cover, each vertex and each path
    edge takes the style of the path it lies on.
    """
    faults = faults if faults is not None else FaultSet(n)
    owner: Dict[Vertex, int] = {}
    on_path: Dict[tuple, int] = {}
    if cover is not None:
        for k, p in enumerate((cover.p1, cover.p2)):
            for v in p:
                owner[v] = k
            for a, b in zip(p, p[1:]):
                on_path[canon_edge(a, b)] = k
    lines: List[str] = [f"graph BH{n} {{", '  node [shape=circle, fontsize=10];']
    for v in vertices(n):
        style = {"label": "".join(map(str, v))}
        if v in owner:
            style["color"] = PATH_STYLES[owner[v]]["color"]
        lines.append(f"  {vertex_name(v)} {_attrs(style)};")
    for a, b in edges(n):
        e = (a, b)
        if e in faults:
            style = {"style": "dashed", "color": "grey"}
        elif e in on_path:
            style = dict(PATH_STYLES[on_path[e]])
        else:
            style = {}
        tail = f" {_attrs(style)}" if style else ""
        lines.append(f"  {vertex_name(a)} -- {vertex_name(b)}{tail};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def dot_stats(text: str) -> Dict[str, int]:
    """Node and edge counts of a DOT text produced by ``to_dot``."""
    body: Iterable[str] = (ln.strip() for ln in text.splitlines())
    nodes = edges_ = 0
    for ln in body:
        if ln.startswith("v_"):
            if " -- " in ln:
                edges_ += 1
            else:
                nodes += 1
    return {"nodes": nodes, "edges": edges_}
