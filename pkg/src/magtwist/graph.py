"""Finite simple graphs with their shortest-path metric.

Vertices are string labels; the order in which they are declared fixes the
index order used by every downstream basis and matrix.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Mapping, Optional, Sequence, Union


class GraphError(ValueError):
    """Raised for malformed graph data (loops, duplicate edges, unknown vertices)."""


class Infinity(enum.Enum):
    """The distance between vertices in different components."""

    INF = "inf"

    def __add__(self, other):
        if isinstance(other, (int, Infinity)):
            return self
        return NotImplemented

    __radd__ = __add__

    def __lt__(self, other):
        if isinstance(other, (int, Infinity)):
            return False
        return NotImplemented

    def __le__(self, other):
        if isinstance(other, (int, Infinity)):
            return other is self
        return NotImplemented

    def __gt__(self, other):
        if isinstance(other, (int, Infinity)):
            return other is not self
        return NotImplemented

    def __ge__(self, other):
        if isinstance(other, (int, Infinity)):
            return True
        return NotImplemented

    def __repr__(self) -> str:
        return "INF"

    __str__ = __repr__


INF = Infinity.INF

ExtDistance = Union[int, Infinity]


def is_finite(d: ExtDistance) -> bool:
    return d is not INF


@dataclass(frozen=True, eq=False)
class Graph:
    """An undirected graph without loops or multiple edges.

    ``vertices`` is an ordered tuple of distinct labels and ``edges`` a
    frozenset of two-element frozensets. Construction validates both.
    """

    vertices: tuple[str, ...]
    edges: frozenset[frozenset[str]] = field(default_factory=frozenset)

    def __post_init__(self):
        verts = tuple(self.vertices)
        object.__setattr__(self, "vertices", verts)
        if len(set(verts)) != len(verts):
            seen = set()
            dup = next(v for v in verts if v in seen or seen.add(v))
            raise GraphError(f"duplicate vertex label {dup!r}")
        known = set(verts)
        edges = set()
        for e in self.edges:
            e = frozenset(e)
            if len(e) != 2:
                raise GraphError(f"edge {sorted(e)} is a loop or malformed")
            for v in e:
                if v not in known:
                    raise GraphError(f"edge {sorted(e)} uses undeclared vertex {v!r}")
            edges.add(e)
        object.__setattr__(self, "edges", frozenset(edges))

    @classmethod
    def from_edges(cls, vertices: Iterable[str], edges: Iterable[Sequence[str]]) -> "Graph":
        """Build a graph, rejecting duplicate edges and loops."""
        seen: set[frozenset[str]] = set()
        for e in edges:
            u, v = e
            if u == v:
                raise GraphError(f"edge [{u!r}, {v!r}] is a loop")
            key = frozenset((u, v))
            if key in seen:
                raise GraphError(f"edge [{u!r}, {v!r}] is listed twice")
            seen.add(key)
        return cls(tuple(vertices), frozenset(seen))

    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, v: str) -> bool:
        return v in self.index

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.vertices, self.edges))

    def __repr__(self) -> str:
        return f"Graph({len(self.vertices)} vertices, {len(self.edges)} edges)"

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        """Neighbour indices of each vertex, sorted."""
        nbrs: list[list[int]] = [[] for _ in self.vertices]
        for e in self.edges:
            u, v = (self.index[x] for x in e)
            nbrs[u].append(v)
            nbrs[v].append(u)
        return tuple(tuple(sorted(n)) for n in nbrs)

    def has_edge(self, u: str, v: str) -> bool:
        return frozenset((u, v)) in self.edges

    def sorted_edges(self) -> list[tuple[str, str]]:
        """Edges as label pairs, ordered by vertex index."""
        idx = self.index
        pairs = [tuple(sorted(e, key=idx.__getitem__)) for e in self.edges]
        return sorted(pairs, key=lambda p: (idx[p[0]], idx[p[1]]))

    @cached_property
    def distances(self) -> "DistanceMatrix":
        return all_pairs_distances(self)

    def induced_subgraph(self, labels: Iterable[str]) -> "Graph":
        keep = set(labels)
        missing = keep - set(self.vertices)
        if missing:
            raise GraphError(f"unknown vertices {sorted(missing)}")
        verts = tuple(v for v in self.vertices if v in keep)
        return Graph(verts, frozenset(e for e in self.edges if e <= keep))

    def relabel(self, mapping: Mapping[str, str]) -> "Graph":
        verts = tuple(mapping[v] for v in self.vertices)
        edges = frozenset(frozenset(mapping[v] for v in e) for e in self.edges)
        return Graph(verts, edges)


class DistanceMatrix:
    """Shortest-path distances of a graph, indexed by vertex position."""

    def __init__(self, vertices: Sequence[str], rows: list[list[ExtDistance]]):
        self.vertices = tuple(vertices)
        self.index = {v: i for i, v in enumerate(self.vertices)}
        self.rows = rows

    def __call__(self, u: str, v: str) -> ExtDistance:
        return self.rows[self.index[u]][self.index[v]]

    def __len__(self) -> int:
        return len(self.vertices)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DistanceMatrix):
            return NotImplemented
        return self.vertices == other.vertices and self.rows == other.rows

    def check_invariants(self, g: Optional[Graph] = None) -> None:
        n = len(self.rows)
        for i in range(n):
            if self.rows[i][i] != 0:
                raise AssertionError(f"nonzero diagonal at {self.vertices[i]}")
            for j in range(n):
                dij = self.rows[i][j]
                if dij != self.rows[j][i]:
                    raise AssertionError("distance matrix is not symmetric")
                if g is not None and i != j:
                    adjacent = g.has_edge(self.vertices[i], self.vertices[j])
                    if adjacent != (dij == 1):
                        raise AssertionError("d(u,v)=1 must coincide with adjacency")
                for k in range(n):
                    dik, dkj = self.rows[i][k], self.rows[k][j]
                    if is_finite(dij) and is_finite(dik) and is_finite(dkj) and dij > dik + dkj:
                        raise AssertionError("triangle inequality fails")


def all_pairs_distances(g: Graph) -> DistanceMatrix:
    """Breadth-first search from every vertex; unreachable pairs get ``INF``."""
    n = len(g.vertices)
    adj = g.adjacency
    rows: list[list[ExtDistance]] = []
    for s in range(n):
        dist: list[ExtDistance] = [INF] * n
        dist[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            du = dist[u]
            for w in adj[u]:
                if dist[w] is INF:
                    dist[w] = du + 1
                    queue.append(w)
        rows.append(dist)
    return DistanceMatrix(g.vertices, rows)


@dataclass(frozen=True, eq=False)
class SubgraphEmbedding:
    """An injective vertex map exhibiting ``domain`` as an induced subgraph of ``codomain``."""

    domain: Graph
    codomain: Graph
    vertex_map: Mapping[str, str]

    def __post_init__(self):
        vm = dict(self.vertex_map)
        object.__setattr__(self, "vertex_map", vm)
        if set(vm) != set(self.domain.vertices):
            raise GraphError("embedding must map exactly the domain's vertices")
        if len(set(vm.values())) != len(vm):
            raise GraphError("embedding is not injective")
        for v, w in vm.items():
            if w not in self.codomain:
                raise GraphError(f"embedding sends {v!r} to unknown vertex {w!r}")
        verts = self.domain.vertices
        for a_i, a in enumerate(verts):
            for b in verts[a_i + 1:]:
                if self.domain.has_edge(a, b) != self.codomain.has_edge(vm[a], vm[b]):
                    raise GraphError(
                        f"embedding is not induced: {a!r}~{b!r} is "
                        f"{'an' if self.domain.has_edge(a, b) else 'not an'} edge "
                        f"but {vm[a]!r}~{vm[b]!r} "
                        f"{'is' if self.codomain.has_edge(vm[a], vm[b]) else 'is not'}"
                    )

    @classmethod
    def inclusion(cls, g: Graph, labels: Iterable[str]) -> "SubgraphEmbedding":
        """The induced subgraph of ``g`` on ``labels`` with its inclusion map."""
        sub = g.induced_subgraph(labels)
        return cls(sub, g, {v: v for v in sub.vertices})

    @property
    def image(self) -> list[str]:
        return [self.vertex_map[v] for v in self.domain.vertices]


def is_convex(g: Graph, w: SubgraphEmbedding) -> bool:
    """Whether the embedded subgraph is isometrically embedded in ``g``."""
    if w.codomain is not g and w.codomain != g:
        raise GraphError("embedding does not land in the given graph")
    dw, dg = w.domain.distances, g.distances
    vm = w.vertex_map
    verts = w.domain.vertices
    return all(dw(u, v) == dg(vm[u], vm[v]) for u in verts for v in verts)


def projection_candidates(d: DistanceMatrix, targets: Sequence[str], v: str) -> list[str]:
    """Vertices ``p`` of ``targets`` through which every distance from ``v`` factors."""
    return [
        p for p in targets
        if all(d(v, w) == d(v, p) + d(p, w) for w in targets)
    ]


def project_vertex(g: Graph, w: SubgraphEmbedding, v: str) -> Optional[str]:
    """The vertex of ``w`` that ``v`` projects through, or ``None``.

    ``v`` must be joined by an edge-path to the subgraph; with several
    candidates (impossible when ``w`` is convex) no projection exists.
    """
    d = g.distances
    image = w.image
    if all(d(v, t) is INF for t in image):
        return None
    cands = projection_candidates(d, image, v)
    return cands[0] if len(cands) == 1 else None


def is_projecting_decomposition(x: Graph, g: SubgraphEmbedding, h: SubgraphEmbedding) -> bool:
    gv, hv = set(g.image), set(h.image)
    if gv | hv != set(x.vertices):
        return False
    if any(not (e <= gv or e <= hv) for e in x.edges):
        return False
    common = [v for v in x.vertices if v in gv and v in hv]
    if not common:
        return False
    meet = SubgraphEmbedding.inclusion(x, common)
    if not is_convex(x, meet):
        return False
    d = x.distances
    for v in h.image:
        if all(d(v, c) is INF for c in common):
            continue
        if project_vertex(x, meet, v) is None:
            return False
    return True


def is_between(d: DistanceMatrix, u: str, w: str, v: str) -> bool:
    """Whether ``w`` lies between ``u`` and ``v``."""
    return d(u, v) == d(u, w) + d(w, v)


def path_length(d: DistanceMatrix, p: Sequence[str]) -> ExtDistance:
    if not p:
        raise ValueError("a path needs at least one vertex")
    total: ExtDistance = 0
    for a, b in zip(p, p[1:]):
        total = total + d(a, b)
    return total


def cartesian_product(x: Graph, y: Graph) -> Graph:
    def label(u, v):
        return f"({u},{v})"

    verts = tuple(label(u, v) for u, v in product(x.vertices, y.vertices))
    edges = set()
    for u in x.vertices:
        for e in y.edges:
            a, b = tuple(e)
            edges.add(frozenset((label(u, a), label(u, b))))
    for v in y.vertices:
        for e in x.edges:
            a, b = tuple(e)
            edges.add(frozenset((label(a, v), label(b, v))))
    return Graph(verts, frozenset(edges))


def disjoint_union(x: Graph, y: Graph, tags: tuple[str, str] = ("L", "R")) -> Graph:
    lx = {v: f"{tags[0]}:{v}" for v in x.vertices}
    ry = {v: f"{tags[1]}:{v}" for v in y.vertices}
    return Graph(
        tuple(lx.values()) + tuple(ry.values()),
        frozenset(x.relabel(lx).edges | y.relabel(ry).edges),
    )


def complete_graph(n: int, prefix: str = "v") -> Graph:
    verts = [f"{prefix}{i}" for i in range(n)]
    return Graph.from_edges(verts, [(verts[i], verts[j]) for i in range(n) for j in range(i + 1, n)])


def path_graph(n: int, prefix: str = "v") -> Graph:
    verts = [f"{prefix}{i}" for i in range(n)]
    return Graph.from_edges(verts, [(verts[i], verts[i + 1]) for i in range(n - 1)])


def cycle_graph(n: int, prefix: str = "v") -> Graph:
    verts = [f"{prefix}{i}" for i in range(n)]
    return Graph.from_edges(verts, [(verts[i], verts[(i + 1) % n]) for i in range(n)])


def are_isometric(x: Graph, y: Graph) -> bool:
    """Exhaustive search for a distance-preserving bijection between vertex sets.

    Backtracking with a distance-profile filter; fine for the small graphs
    this package deals with.
    """
    if len(x) != len(y):
        return False
    dx, dy = x.distances.rows, y.distances.rows
    n = len(x)

    def profile(rows, i):
        return tuple(sorted((d is INF, 0 if d is INF else d) for d in rows[i]))

    px = [profile(dx, i) for i in range(n)]
    py = [profile(dy, i) for i in range(n)]
    if sorted(px) != sorted(py):
        return False
    order = sorted(range(n), key=lambda i: -sum(1 for d in dx[i] if d == 1))
    image: dict[int, int] = {}
    used = [False] * n

    def extend(pos: int) -> bool:
        if pos == n:
            return True
        i = order[pos]
        for j in range(n):
            if used[j] or px[i] != py[j]:
                continue
            if all(dx[i][a] == dy[j][b] for a, b in image.items()):
                image[i] = j
                used[j] = True
                if extend(pos + 1):
                    return True
                del image[i]
                used[j] = False
        return False

    return extend(0)
