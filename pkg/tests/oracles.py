"""Independent reference implementations used only by the tests.

Nothing here imports the package's algorithms; graphs are passed as
(vertices, edges) or converted through networkx.
"""

import itertools
from math import gcd

import networkx as nx
import numpy as np
import sympy
from sympy.matrices.normalforms import smith_normal_form as sympy_snf


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from(tuple(e) for e in g.edges)
    return h


def distances(g):
    """dict-of-dicts distances; missing keys mean unreachable."""
    return dict(nx.all_pairs_shortest_path_length(to_nx(g)))


def magnitude(g, order):
    """Sum of entries of (I + A)^-1 via the Neumann series, A having no constant term."""
    verts = list(g.vertices)
    n = len(verts)
    if n == 0:
        return [0] * (order + 1)
    d = distances(g)
    A = np.zeros((order + 1, n, n), dtype=object)
    for i, u in enumerate(verts):
        for j, v in enumerate(verts):
            if i != j and v in d[u] and d[u][v] <= order:
                A[d[u][v], i, j] += 1

    def mul(P, Q):
        R = np.zeros_like(P)
        for s in range(order + 1):
            for t in range(order + 1 - s):
                R[s + t] = R[s + t] + P[s].dot(Q[t])
        return R

    term = np.zeros((order + 1, n, n), dtype=object)
    term[0] = np.identity(n, dtype=object)
    total = term.copy()
    for j in range(1, order + 1):
        term = -mul(term, A)
        total = total + term
    return [int(total[t].sum()) for t in range(order + 1)]


def brute_paths(g, ell):
    """Non-degenerate paths of length ell by exhaustive product search, as label tuples."""
    d = distances(g)
    out = []
    for k in range(ell + 1):
        for p in itertools.product(g.vertices, repeat=k + 1):
            if any(p[i] == p[i + 1] for i in range(k)):
                continue
            if all(p[i + 1] in d[p[i]] for i in range(k)) and sum(d[p[i]][p[i + 1]] for i in range(k)) == ell:
                out.append(p)
    return out


def invariant_factors_by_minors(rows):
    """Invariant factors as ratios of gcds of k x k minors (small matrices only)."""
    M = sympy.Matrix(rows)
    r, c = M.shape
    out, prev = [], 1
    for k in range(1, min(r, c) + 1):
        g = 0
        for ri in itertools.combinations(range(r), k):
            for ci in itertools.combinations(range(c), k):
                g = gcd(g, int(M.extract(list(ri), list(ci)).det()))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def invariant_factors_sympy(rows):
    M = sympy.Matrix(rows)
    if M.rows == 0 or M.cols == 0:
        return []
    D = sympy_snf(M, domain=sympy.ZZ)
    return sorted(abs(int(D[i, i])) for i in range(min(D.shape)) if D[i, i] != 0)


def rank(rows):
    M = sympy.Matrix(rows)
    return 0 if M.rows == 0 or M.cols == 0 else M.rank()


def is_convex(g, labels):
    d = distances(g)
    sub = distances(g.induced_subgraph(labels))
    return all(sub[u].get(v) == d[u].get(v) for u in labels for v in labels)


def projection(g, labels, v):
    d = distances(g)
    if not any(w in d[v] for w in labels):
        return None
    hits = [p for p in labels if p in d[v] and all(w in d[v] and d[v][w] == d[v][p] + d[p][w] for w in labels)]
    return hits[0] if len(hits) == 1 else None


def isometric(g, h):
    return nx.is_isomorphic(to_nx(g), to_nx(h))
