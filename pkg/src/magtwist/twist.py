"""Generalized Whitney twists and sycamore twists.

A twist is given by graphs ``G``, ``H``, ``K``, induced embeddings of ``K``
into ``G`` and ``H``, and an isometry ``alpha`` of ``K``. Gluing
``iota_G(v)`` to ``iota_H(v)`` gives ``X``; gluing ``iota_G(v)`` to
``iota_H(alpha(v))`` gives ``Y``.

Labels in the glued graphs: a gluing vertex keeps its ``K`` label, other
vertices of ``G`` become ``"G:<label>"`` and other vertices of ``H`` become
``"H:<label>"``. ``X`` and ``Y`` list the same labels in the same order, so
an index means the same vertex in both.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from itertools import permutations
from typing import Mapping, Optional, Sequence

from .graph import (
    INF,
    Graph,
    GraphError,
    SubgraphEmbedding,
    is_convex,
    project_vertex,
)


class TwistError(ValueError):
    """Invalid twist data: bad embeddings, or ``alpha`` is not an isometry of ``K``."""


class TwistInvariantError(AssertionError):
    """A property that must hold for a validated sycamore twist did not."""


class VertexClass(str, enum.Enum):
    GLUING = "gluing"
    G_ONLY = "g_only"
    BIASED = "biased"
    NEUTRAL = "neutral"


class Direction(str, enum.Enum):
    G_TO_H = "G->H"
    H_TO_G = "H->G"


# integer codes for the hot loops
GLUING, G_ONLY, BIASED, NEUTRAL = 0, 1, 2, 3
_CODE = {VertexClass.GLUING: GLUING, VertexClass.G_ONLY: G_ONLY,
         VertexClass.BIASED: BIASED, VertexClass.NEUTRAL: NEUTRAL}


@dataclass(frozen=True, eq=False)
class TwistSpec:
    G: Graph
    H: Graph
    K: Graph
    iota_G: SubgraphEmbedding
    iota_H: SubgraphEmbedding
    alpha: Mapping[str, str]

    def __post_init__(self):
        object.__setattr__(self, "alpha", dict(self.alpha))
        if self.iota_G.domain != self.K or self.iota_H.domain != self.K:
            raise TwistError("both embeddings must have K as domain")
        if self.iota_G.codomain != self.G or self.iota_H.codomain != self.H:
            raise TwistError("embeddings must land in G and H respectively")
        a = self.alpha
        if set(a) != set(self.K.vertices) or set(a.values()) != set(self.K.vertices):
            raise TwistError("alpha must be a bijection of the vertices of K")
        d = self.K.distances
        for u in self.K.vertices:
            for v in self.K.vertices:
                if d(u, v) != d(a[u], a[v]):
                    raise TwistError(
                        f"alpha is not an isometry of K: d({u},{v})={d(u, v)} "
                        f"but d({a[u]},{a[v]})={d(a[u], a[v])}"
                    )

    @classmethod
    def from_maps(
        cls,
        G: Graph,
        H: Graph,
        K_labels: Sequence[str],
        iota_G: Mapping[str, str],
        iota_H: Mapping[str, str],
        alpha: Mapping[str, str],
    ) -> "TwistSpec":
        """Build a spec whose ``K`` is the subgraph of ``G`` induced on ``iota_G(K_labels)``."""
        K_labels = list(K_labels)
        if set(iota_G) != set(K_labels) or set(iota_H) != set(K_labels):
            raise TwistError("iota_G and iota_H must be defined exactly on K")
        try:
            inG = G.induced_subgraph(iota_G[v] for v in K_labels)
            back = {iota_G[v]: v for v in K_labels}
            K = Graph(tuple(K_labels), frozenset(frozenset(back[x] for x in e) for e in inG.edges))
            emb_G = SubgraphEmbedding(K, G, iota_G)
            emb_H = SubgraphEmbedding(K, H, iota_H)
        except GraphError as exc:
            raise TwistError(str(exc)) from exc
        return cls(G, H, K, emb_G, emb_H, alpha)

    @cached_property
    def alpha_inv(self) -> dict[str, str]:
        return {v: k for k, v in self.alpha.items()}


@dataclass(eq=False)
class TwistPair:
    spec: TwistSpec
    X: Graph
    Y: Graph
    g_label: dict[str, str]        # vertex of G -> label in X and Y
    h_label_X: dict[str, str]      # vertex of H -> label in X
    h_label_Y: dict[str, str]      # vertex of H -> label in Y
    classes: dict[str, VertexClass]
    h_projection: dict[str, str]   # biased vertex (label) -> K label it projects through, in H
    merged_edges: int = 0

    def graph(self, owner: str) -> Graph:
        if owner not in ("X", "Y"):
            raise ValueError("owner must be 'X' or 'Y'")
        return self.X if owner == "X" else self.Y

    @property
    def gluing(self) -> list[str]:
        return list(self.spec.K.vertices)

    @property
    def biased(self) -> list[str]:
        return [v for v in self.X.vertices if self.classes[v] is VertexClass.BIASED]

    @property
    def neutral(self) -> list[str]:
        return [v for v in self.X.vertices if self.classes[v] is VertexClass.NEUTRAL]

    @property
    def g_vertices(self) -> list[str]:
        return [self.g_label[v] for v in self.spec.G.vertices]

    @property
    def h_vertices(self) -> list[str]:
        """Labels of H's vertices; the same set in X and in Y."""
        return [self.h_label_X[v] for v in self.spec.H.vertices]

    def class_codes(self) -> list[int]:
        return [_CODE[self.classes[v]] for v in self.X.vertices]

    def to_json(self) -> dict:
        from .io import graph_to_json

        return {
            "X": graph_to_json(self.X),
            "Y": graph_to_json(self.Y),
            "classes": {v: c.value for v, c in self.classes.items()},
            "merged_edges": self.merged_edges,
        }


def build_twist_pair(spec: TwistSpec) -> TwistPair:
    """Glue ``G`` and ``H`` along ``K`` both ways.

    When ``K`` comes out convex in both graphs, the cross distances are
    checked against the ``min over K`` formulas before returning.
    """
    G, H, K = spec.G, spec.H, spec.K
    k_of_g = {w: v for v, w in spec.iota_G.vertex_map.items()}
    k_of_h = {w: v for v, w in spec.iota_H.vertex_map.items()}
    g_label = {g: (k_of_g[g] if g in k_of_g else f"G:{g}") for g in G.vertices}
    h_label_X = {h: (k_of_h[h] if h in k_of_h else f"H:{h}") for h in H.vertices}
    a_inv = spec.alpha_inv
    h_label_Y = {h: (a_inv[k_of_h[h]] if h in k_of_h else f"H:{h}") for h in H.vertices}

    verts = [g_label[g] for g in G.vertices] + [h_label_X[h] for h in H.vertices if h not in k_of_h]
    if len(set(verts)) != len(verts):
        raise TwistError("label clash while gluing; rename vertices")

    def glue(h_label):
        edges = set(G.relabel(g_label).edges)
        before = len(edges)
        h_edges = {frozenset(h_label[x] for x in e) for e in H.edges}
        edges |= h_edges
        return Graph(tuple(verts), frozenset(edges)), before + len(h_edges) - len(edges)

    X, merged = glue(h_label_X)
    Y, merged_y = glue(h_label_Y)
    if merged != merged_y or merged != len(K.edges):
        raise TwistError("gluing merged an unexpected number of edges; embeddings are not induced")

    classes: dict[str, VertexClass] = {}
    h_projection: dict[str, str] = {}
    for g in G.vertices:
        classes[g_label[g]] = VertexClass.GLUING if g in k_of_g else VertexClass.G_ONLY
    for h in H.vertices:
        if h in k_of_h:
            continue
        p = project_vertex(H, spec.iota_H, h)
        if p is None:
            classes[h_label_X[h]] = VertexClass.NEUTRAL
        else:
            classes[h_label_X[h]] = VertexClass.BIASED
            h_projection[h_label_X[h]] = k_of_h[p]

    pair = TwistPair(spec, X, Y, g_label, h_label_X, h_label_Y, classes, h_projection, merged)
    if k_convex(pair, "X") and k_convex(pair, "Y"):
        bad = distance_formula_mismatches(pair)
        if bad:
            raise TwistInvariantError(f"glued distances disagree with the gluing formulas: {bad[:3]}")
    return pair


def k_convex(pair: TwistPair, owner: str) -> bool:
    Z = pair.graph(owner)
    return is_convex(Z, SubgraphEmbedding.inclusion(Z, pair.gluing))


def distance_formula_mismatches(pair: TwistPair) -> list[tuple[str, str, str]]:
    """Vertex pairs whose glued distance is not the one predicted from G, H and K."""
    spec = pair.spec
    dG, dH = spec.G.distances, spec.H.distances
    iG, iH, alpha = spec.iota_G.vertex_map, spec.iota_H.vertex_map, spec.alpha
    k_of_h = set(iH.values())
    out = []
    for owner in ("X", "Y"):
        Z = pair.graph(owner)
        dZ = Z.distances
        h_label = pair.h_label_X if owner == "X" else pair.h_label_Y
        for g in spec.G.vertices:
            for g2 in spec.G.vertices:
                if dZ(pair.g_label[g], pair.g_label[g2]) != dG(g, g2):
                    out.append((owner, g, g2))
            for h in spec.H.vertices:
                if h in k_of_h:
                    continue
                if owner == "X":
                    pred = min((dG(g, iG[k]) + dH(iH[k], h) for k in spec.K.vertices), default=INF)
                else:
                    pred = min((dG(g, iG[k]) + dH(iH[alpha[k]], h) for k in spec.K.vertices), default=INF)
                if dZ(pair.g_label[g], h_label[h]) != pred:
                    out.append((owner, g, h))
        for h in spec.H.vertices:
            for h2 in spec.H.vertices:
                if h in k_of_h or h2 in k_of_h:
                    continue
                if dZ(h_label[h], h_label[h2]) != dH(h, h2):
                    out.append((owner, h, h2))
    return out


@dataclass
class SycamoreReport:
    k_nonempty: bool
    k_convex_X: bool
    k_convex_Y: bool
    violations: list[tuple[str, str]] = field(default_factory=list)  # (neutral vertex, witnessing k)
    biased: list[str] = field(default_factory=list)
    neutral: list[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return self.k_nonempty and self.k_convex_X and self.k_convex_Y and not self.violations

    def reasons(self) -> list[str]:
        out = []
        if not self.k_nonempty:
            out.append("K is empty")
        if not self.k_convex_X:
            out.append("K is not convex in X")
        if not self.k_convex_Y:
            out.append("K is not convex in Y")
        for h, k in self.violations:
            out.append(f"{h} does not project to K and d_H({h},{k}) != d_H({h},alpha({k}))")
        return out

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "k_nonempty": self.k_nonempty,
            "k_convex_X": self.k_convex_X,
            "k_convex_Y": self.k_convex_Y,
            "violations": [{"vertex": h, "k": k} for h, k in self.violations],
            "biased": self.biased,
            "neutral": self.neutral,
            "reasons": self.reasons(),
        }


def validate_sycamore(pair: TwistPair) -> SycamoreReport:
    spec = pair.spec
    dH = spec.H.distances
    iH, alpha = spec.iota_H.vertex_map, spec.alpha
    back = {lab: h for h, lab in pair.h_label_X.items()}
    rep = SycamoreReport(
        k_nonempty=len(spec.K) > 0,
        k_convex_X=k_convex(pair, "X"),
        k_convex_Y=k_convex(pair, "Y"),
        biased=pair.biased,
        neutral=pair.neutral,
    )
    for lab in rep.neutral:
        h = back[lab]
        for k in spec.K.vertices:
            if dH(h, iH[k]) != dH(h, iH[alpha[k]]):
                rep.violations.append((lab, k))
    return rep


def require_sycamore(pair: TwistPair) -> SycamoreReport:
    rep = validate_sycamore(pair)
    if not rep.valid:
        raise TwistError("not a sycamore twist: " + "; ".join(rep.reasons()))
    return rep


def tau_maps(pair: TwistPair) -> tuple[dict[str, str], dict[str, str]]:
    """The vertex bijections ``X -> Y`` fixing G (``tau_G``) and fixing H (``tau_H``).

    Both are checked to be isometries on ``G ∪ H_0`` and ``H`` respectively.
    """
    require_sycamore(pair)
    a_inv = pair.spec.alpha_inv
    tau_G = {v: v for v in pair.X.vertices}
    tau_H = {v: (a_inv[v] if pair.classes[v] is VertexClass.GLUING else v) for v in pair.X.vertices}
    dX, dY = pair.X.distances, pair.Y.distances
    gh0 = pair.g_vertices + pair.neutral
    for name, tau, part in (("tau_G", tau_G, gh0), ("tau_H", tau_H, pair.h_vertices)):
        for u in part:
            for v in part:
                if dY(tau[u], tau[v]) != dX(u, v):
                    raise TwistInvariantError(f"{name} is not an isometry at ({u}, {v})")
    return tau_G, tau_H


def projection_to_G(pair: TwistPair, owner: str) -> dict[str, str]:
    """For each biased vertex, the vertex of G it projects through in ``owner``.

    Computed directly in the glued graph; it must be a gluing vertex.
    """
    Z = pair.graph(owner)
    emb = SubgraphEmbedding.inclusion(Z, pair.g_vertices)
    out = {}
    for v in pair.biased:
        p = project_vertex(Z, emb, v)
        if p is None or pair.classes[p] is not VertexClass.GLUING:
            raise TwistInvariantError(f"biased vertex {v} does not project to G through K in {owner}")
        out[v] = p
    return out


# ---------------------------------------------------------------------------
# paths

@dataclass(frozen=True)
class PathClass:
    """Classification of a path in X or Y.

    ``kind`` is ``"flat"``, ``"twistable"`` or ``"not_twistable"``. Twistable
    paths (flat ones included) carry their maximal flat decomposition as
    ``(start, end, part)`` index triples with ``part`` ``"GH0"`` or ``"H"``.
    Non-twistable paths carry their first sticky subpath and its direction.
    """

    kind: str
    flat_in: Optional[str] = None
    pieces: tuple[tuple[int, int, str], ...] = ()
    sticky: Optional[tuple[int, int]] = None
    direction: Optional[Direction] = None

    @property
    def twistable(self) -> bool:
        return self.kind != "not_twistable"


def first_sticky(codes: Sequence[int], p: Sequence[int]) -> Optional[tuple[int, int]]:
    """``(i, j)`` for the sticky subpath with least start index, else ``None``.

    A start index fixes the end: the first non-gluing vertex after it.
    """
    k = len(p) - 1
    i = 0
    while i < k:
        ci = codes[p[i]]
        if ci == G_ONLY or ci == BIASED:
            j = i + 1
            while j <= k and codes[p[j]] == GLUING:
                j += 1
            if j <= k:
                cj = codes[p[j]]
                if (ci == G_ONLY and cj == BIASED) or (ci == BIASED and cj == G_ONLY):
                    return i, j
        i += 1
    return None


def _pieces(codes: Sequence[int], p: Sequence[int]) -> tuple[tuple[int, int, str], ...]:
    cuts = [t for t in range(len(p)) if codes[p[t]] == NEUTRAL]
    bounds = sorted({0, len(p) - 1, *cuts})
    if len(bounds) == 1:
        bounds = [0, 0]
    out = []
    for a, b in zip(bounds, bounds[1:]):
        seg = [codes[v] for v in p[a:b + 1]]
        if BIASED not in seg:
            out.append((a, b, "GH0"))
        elif G_ONLY not in seg:
            out.append((a, b, "H"))
        else:
            raise TwistInvariantError("a path with no sticky subpath has a non-flat piece")
    return tuple(out)


def classify_indices(codes: Sequence[int], p: Sequence[int]) -> PathClass:
    st = first_sticky(codes, p)
    if st is not None:
        d = Direction.G_TO_H if codes[p[st[0]]] == G_ONLY else Direction.H_TO_G
        return PathClass("not_twistable", sticky=st, direction=d)
    seg = [codes[v] for v in p]
    pieces = _pieces(codes, p)
    if BIASED not in seg:
        return PathClass("flat", flat_in="GH0", pieces=pieces)
    if G_ONLY not in seg:
        return PathClass("flat", flat_in="H", pieces=pieces)
    return PathClass("twistable", pieces=pieces)


def classify_path(pair: TwistPair, owner: str, labels: Sequence[str]) -> PathClass:
    Z = pair.graph(owner)
    return classify_indices(pair.class_codes(), [Z.index[v] for v in labels])


def _tau_index(pair: TwistPair, inverse: bool = False) -> list[int]:
    spec = pair.spec
    a = spec.alpha if inverse else spec.alpha_inv
    idx = pair.X.index
    return [idx[a[v]] if pair.classes[v] is VertexClass.GLUING else i for i, v in enumerate(pair.X.vertices)]


def twist_indices(codes: Sequence[int], tau_h: Sequence[int], p: Sequence[int]) -> tuple[int, ...]:
    """Apply the piecewise map to a twistable index path (``tau_G`` is the identity)."""
    st = first_sticky(codes, p)
    if st is not None:
        raise TwistError("path is not twistable")
    out = list(p)
    for a, b, part in _pieces(codes, p):
        if part == "H":
            for t in range(a, b + 1):
                out[t] = tau_h[p[t]]
    return tuple(out)


def twist_path(pair: TwistPair, labels: Sequence[str], inverse: bool = False) -> tuple[str, ...]:
    """``T`` from X to Y, or its inverse ``T'`` from Y to X with ``inverse=True``."""
    idx = pair.X.index
    p = [idx[v] for v in labels]
    out = twist_indices(pair.class_codes(), _tau_index(pair, inverse), p)
    return tuple(pair.X.vertices[i] for i in out)


def whitney_spec(
    G: Graph, H: Graph, g_pair: tuple[str, str], h_pair: tuple[str, str], k_labels=("k0", "k1")
) -> TwistSpec:
    """An ordinary Whitney twist: glue ``g_pair`` to ``h_pair``, then the other way round."""
    k0, k1 = k_labels
    return TwistSpec.from_maps(
        G, H, [k0, k1],
        {k0: g_pair[0], k1: g_pair[1]},
        {k0: h_pair[0], k1: h_pair[1]},
        {k0: k1, k1: k0},
    )


def isometries(K: Graph) -> list[dict[str, str]]:
    """All self-isometries of ``K`` (brute force; K is small)."""
    d = K.distances.rows
    n = len(K)
    out = []
    for perm in permutations(range(n)):
        if all(d[i][j] == d[perm[i]][perm[j]] for i in range(n) for j in range(n)):
            out.append({K.vertices[i]: K.vertices[perm[i]] for i in range(n)})
    return out
