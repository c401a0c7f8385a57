"""JSON and CSV formats for graphs, twists, series, homology tables and plots."""

from __future__ import annotations

import csv
import io
import json
from importlib import resources
from pathlib import Path
from typing import Any, Optional, Sequence

from .graph import Graph, GraphError
from .series import TruncatedSeries
from .twist import TwistError, TwistSpec


class InputError(ValueError):
    """Malformed input file; the message names the offending field or item."""


def _need(obj: Any, key: str, kind, where: str):
    if not isinstance(obj, dict):
        raise InputError(f"{where}: expected a JSON object")
    if key not in obj:
        raise InputError(f"{where}: missing field '{key}'")
    val = obj[key]
    if not isinstance(val, kind):
        raise InputError(f"{where}.{key}: expected {kind.__name__}")
    return val


def graph_from_json(obj: Any, where: str = "graph") -> Graph:
    verts = _need(obj, "vertices", list, where)
    edges = _need(obj, "edges", list, where)
    for i, v in enumerate(verts):
        if not isinstance(v, str):
            raise InputError(f"{where}.vertices[{i}]: vertex labels must be strings, got {v!r}")
    for i, e in enumerate(edges):
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(x, str) for x in e)):
            raise InputError(f"{where}.edges[{i}]: malformed edge {e!r}; expected two vertex labels")
    try:
        return Graph.from_edges(verts, [tuple(e) for e in edges])
    except GraphError as exc:
        raise InputError(f"{where}: {exc}") from exc


def graph_to_json(g: Graph) -> dict:
    return {"vertices": list(g.vertices), "edges": [list(e) for e in g.sorted_edges()]}


def _str_map(obj: Any, key: str, where: str) -> dict[str, str]:
    m = _need(obj, key, dict, where)
    for a, b in m.items():
        if not isinstance(b, str):
            raise InputError(f"{where}.{key}[{a!r}]: expected a vertex label")
    return dict(m)


def twist_from_json(obj: Any, where: str = "twist") -> TwistSpec:
    G = graph_from_json(_need(obj, "G", dict, where), f"{where}.G")
    H = graph_from_json(_need(obj, "H", dict, where), f"{where}.H")
    K = _need(obj, "K", list, where)
    for i, v in enumerate(K):
        if not isinstance(v, str):
            raise InputError(f"{where}.K[{i}]: expected a vertex label")
    try:
        return TwistSpec.from_maps(
            G, H, K,
            _str_map(obj, "iota_G", where),
            _str_map(obj, "iota_H", where),
            _str_map(obj, "alpha", where),
        )
    except (TwistError, GraphError) as exc:
        raise InputError(f"{where}: {exc}") from exc


def twist_to_json(spec: TwistSpec) -> dict:
    return {
        "G": graph_to_json(spec.G),
        "H": graph_to_json(spec.H),
        "K": list(spec.K.vertices),
        "iota_G": dict(spec.iota_G.vertex_map),
        "iota_H": dict(spec.iota_H.vertex_map),
        "alpha": dict(spec.alpha),
    }


def read_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def load_graph(path: str | Path) -> Graph:
    return graph_from_json(read_json(path), str(path))


def load_twist(path: str | Path) -> TwistSpec:
    return twist_from_json(read_json(path), str(path))


def dump_json(obj: Any, path: Optional[str | Path] = None) -> str:
    text = json.dumps(obj, indent=2, sort_keys=False) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def series_to_json(s: TruncatedSeries) -> list[int]:
    return s.to_list()


def plot_csv(t_values: Sequence[float], samples: Sequence[Optional[float]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "magnitude"])
    for t, v in zip(t_values, samples):
        w.writerow([repr(float(t)), "singular" if v is None else repr(v)])
    return buf.getvalue()


FIXTURES = ("fig2", "fig4", "fig4_printed", "fig4_cut12", "whitney_nonadjacent")


def fixture_path(name: str):
    return resources.files("magtwist") / "fixtures" / f"{name}.json"


def load_fixture(name: str) -> TwistSpec:
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}")
    return twist_from_json(json.loads(fixture_path(name).read_text()), name)
