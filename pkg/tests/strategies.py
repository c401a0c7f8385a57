import itertools

from hypothesis import strategies as st

from magtwist.graph import Graph


@st.composite
def graphs(draw, min_vertices=0, max_vertices=6, connected=False):
    n = draw(st.integers(min_vertices, max_vertices))
    verts = [f"v{i}" for i in range(n)]
    edges = set()
    if connected:
        for j in range(1, n):
            edges.add((draw(st.integers(0, j - 1)), j))
    for i, j in itertools.combinations(range(n), 2):
        if draw(st.booleans()):
            edges.add((i, j))
    return Graph.from_edges(verts, [(verts[i], verts[j]) for i, j in sorted(edges)])


def int_matrices(max_rows=5, max_cols=5, lo=-6, hi=6):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def unit_series(order):
    return st.tuples(st.sampled_from([1, -1]), st.lists(st.integers(-9, 9), min_size=order, max_size=order)).map(
        lambda t: (t[0], *t[1])
    )
