"""Non-degenerate paths and the magnitude chain complex of a graph.

Paths are tuples of vertex *indices* into ``Graph.vertices``; use
:func:`path_labels` to turn one back into labels. Within each degree a
basis is sorted lexicographically by those indices.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping, Optional, Sequence

import numpy as np

from .graph import INF, Graph
from .series import TruncatedSeries

Path = tuple[int, ...]


class ChainComplexError(RuntimeError):
    """A boundary matrix failed an internal consistency check."""


@dataclass
class SparseMatrix:
    """Integer matrix stored as one ``{row: value}`` dict per column."""

    nrows: int
    ncols: int
    cols: list[dict[int, int]] = field(default_factory=list)

    def __post_init__(self):
        if not self.cols:
            self.cols = [dict() for _ in range(self.ncols)]

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]]) -> "SparseMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        m = cls(nrows, ncols)
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                if v:
                    m.cols[j][i] = int(v)
        return m

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                out[i][j] = v
        return out

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols)

    def is_zero(self) -> bool:
        return all(not c for c in self.cols)

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        out = SparseMatrix(self.nrows, other.ncols)
        for j, col in enumerate(other.cols):
            acc: dict[int, int] = defaultdict(int)
            for k, v in col.items():
                for i, w in self.cols[k].items():
                    acc[i] += v * w
            out.cols[j] = {i: v for i, v in acc.items() if v}
        return out

    def triples(self) -> list[tuple[int, int, int]]:
        return [(i, j, v) for j, col in enumerate(self.cols) for i, v in sorted(col.items())]


def path_labels(g: Graph, p: Path) -> tuple[str, ...]:
    return tuple(g.vertices[i] for i in p)


def path_indices(g: Graph, labels: Sequence[str]) -> Path:
    return tuple(g.index[v] for v in labels)


def _hops(g: Graph) -> list[list[tuple[int, int]]]:
    rows = g.distances.rows
    n = len(rows)
    return [[(w, rows[v][w]) for w in range(n) if w != v and rows[v][w] is not INF] for v in range(n)]


def iter_paths(g: Graph, ell: int, start: Optional[int] = None) -> Iterator[Path]:
    """Yield the non-degenerate paths of length exactly ``ell``, in lexicographic order.

    Depth-first extension; a partial path is abandoned once no hop fits in
    the remaining length (every hop costs at least 1).
    """
    hops = _hops(g)
    starts = range(len(g)) if start is None else (start,)

    def extend(prefix: list[int], length: int) -> Iterator[Path]:
        if length == ell:
            yield tuple(prefix)
            return
        budget = ell - length
        for w, dw in hops[prefix[-1]]:
            if dw <= budget:
                prefix.append(w)
                yield from extend(prefix, length + dw)
                prefix.pop()

    for s in starts:
        yield from extend([s], 0)


def enumerate_paths(g: Graph, ell: int) -> dict[int, list[Path]]:
    """Non-degenerate paths of length ``ell`` grouped by degree ``k`` (``k <= ell``)."""
    out: dict[int, list[Path]] = defaultdict(list)
    for p in iter_paths(g, ell):
        out[len(p) - 1].append(p)
    return {k: sorted(v) for k, v in sorted(out.items())}


def path_counts(g: Graph, max_length: int) -> dict[tuple[int, int], int]:
    """Number of non-degenerate k-paths of each length, keyed by ``(k, length)``.

    Dynamic programming over (end vertex, length); no path is materialized.
    """
    hops = _hops(g)
    counts: dict[tuple[int, int], int] = defaultdict(int)
    layer = {(v, 0): 1 for v in range(len(g))}
    k = 0
    while layer:
        for (_, length), c in layer.items():
            counts[(k, length)] += c
        nxt: dict[tuple[int, int], int] = defaultdict(int)
        for (v, length), c in layer.items():
            for w, dw in hops[v]:
                if length + dw <= max_length:
                    nxt[(w, length + dw)] += c
        layer = nxt
        k += 1
    return dict(counts)


def magnitude_by_path_count(g: Graph, order: int) -> TruncatedSeries:
    """Coefficients as alternating counts of non-degenerate paths."""
    coeffs = [0] * (order + 1)
    for (k, length), c in path_counts(g, order).items():
        coeffs[length] += (-1) ** k * c
    return TruncatedSeries(tuple(coeffs))


def faces(dist: Sequence[Sequence[int]], p: Path) -> Iterator[tuple[int, Path]]:
    """Nonzero terms ``(sign, face)`` of the magnitude boundary of ``p``.

    Position ``i`` is dropped only when the shortened path keeps its length;
    the endpoints are never dropped.
    """
    for i in range(1, len(p) - 1):
        a, b, c = p[i - 1], p[i], p[i + 1]
        if dist[a][c] == dist[a][b] + dist[b][c]:
            yield (-1 if i % 2 else 1), p[:i] + p[i + 1:]


def boundary_from_bases(
    source: Sequence[Path],
    target: Sequence[Path],
    face_fn: Callable[[Path], Iterator[tuple[int, Path]]],
    strict: bool = True,
) -> SparseMatrix:
    """Assemble a sparse boundary matrix from a per-generator face function.

    With ``strict`` every nonzero face must be a target generator.
    """
    row_of = {p: i for i, p in enumerate(target)}
    m = SparseMatrix(len(target), len(source))
    for j, p in enumerate(source):
        col = m.cols[j]
        for sign, f in face_fn(p):
            i = row_of.get(f)
            if i is None:
                if strict:
                    raise ChainComplexError(f"face {f} of {p} is not a basis element")
                continue
            v = col.get(i, 0) + sign
            if v:
                col[i] = v
            else:
                del col[i]
    return m


@dataclass
class ChainSlice:
    """The complex in one length grading: bases per degree and boundaries ``d_k: C_k -> C_{k-1}``."""

    ell: int
    bases: dict[int, list[Path]]
    boundaries: dict[int, SparseMatrix]

    def degrees(self) -> range:
        top = max(self.bases, default=-1)
        return range(0, top + 1)

    def basis(self, k: int) -> list[Path]:
        return self.bases.get(k, [])

    def boundary(self, k: int) -> SparseMatrix:
        if k in self.boundaries:
            return self.boundaries[k]
        return SparseMatrix(len(self.basis(k - 1)), len(self.basis(k)))

    def check_d_squared(self) -> None:
        for k in self.boundaries:
            if k - 1 in self.boundaries:
                if not (self.boundaries[k - 1] @ self.boundaries[k]).is_zero():
                    raise ChainComplexError(f"d∘d != 0 at degree {k} (length {self.ell})")

    def to_json(self, g: Optional[Graph] = None) -> dict:
        def show(p):
            return list(path_labels(g, p)) if g is not None else list(p)

        return {
            "ell": self.ell,
            "bases": {str(k): [show(p) for p in ps] for k, ps in sorted(self.bases.items())},
            "boundaries": {
                str(k): {"shape": [m.nrows, m.ncols], "triples": m.triples()}
                for k, m in sorted(self.boundaries.items())
            },
        }


def complex_from_bases(
    ell: int,
    bases: Mapping[int, Sequence[Path]],
    face_fn: Callable[[Path], Iterator[tuple[int, Path]]],
    strict: bool = True,
) -> ChainSlice:
    bases = {k: list(v) for k, v in bases.items() if v}
    boundaries = {}
    for k in sorted(bases):
        if k >= 1:
            boundaries[k] = boundary_from_bases(bases[k], bases.get(k - 1, []), face_fn, strict)
    sl = ChainSlice(ell, bases, boundaries)
    sl.check_d_squared()
    return sl


def chain_slice(g: Graph, ell: int) -> ChainSlice:
    rows = g.distances.rows
    return complex_from_bases(ell, enumerate_paths(g, ell), lambda p: faces(rows, p))


def boundary_matrix(g: Graph, ell: int, k: int) -> SparseMatrix:
    if k < 1:
        raise ValueError("the boundary starts in degree 1")
    return chain_slice(g, ell).boundary(k)


def is_distance_decreasing(f: Mapping[str, str], x: Graph, y: Graph) -> bool:
    dx, dy = x.distances, y.distances
    return all(dy(f[u], f[v]) <= dx(u, v) for u in x.vertices for v in x.vertices)


def induced_chain_map(f: Mapping[str, str], x: Graph, y: Graph, ell: int, k: int) -> SparseMatrix:
    """Matrix of ``MC(f)`` from ``MC_k^ell(x)`` to ``MC_k^ell(y)``.

    A generator survives only if every hop keeps its distance.
    """
    if set(f) != set(x.vertices) or any(v not in y for v in f.values()):
        raise ValueError("vertex map must send every vertex of x into y")
    if not is_distance_decreasing(f, x, y):
        raise ValueError("vertex map is not distance-decreasing")
    dx, dy = x.distances.rows, y.distances.rows
    fi = [y.index[f[v]] for v in x.vertices]
    src = enumerate_paths(x, ell).get(k, [])
    tgt = enumerate_paths(y, ell).get(k, [])
    row_of = {p: i for i, p in enumerate(tgt)}
    m = SparseMatrix(len(tgt), len(src))
    for j, p in enumerate(src):
        image = tuple(fi[v] for v in p)
        if all(dy[image[t]][image[t + 1]] == dx[p[t]][p[t + 1]] for t in range(k)):
            m.cols[j][row_of[image]] = 1
    return m


def euler_characteristic(sl: ChainSlice) -> int:
    return sum((-1) ** k * len(b) for k, b in sl.bases.items())


# Largest number of generators the chain route will materialize in one degree.
CHAIN_BUDGET = 4_000_000


def chain_euler_coefficients(g: Graph, order: int, budget: int = CHAIN_BUDGET) -> list[Optional[int]]:
    """``χ(MC_•^ℓ)`` for ``ℓ <= order`` from explicitly enumerated bases.

    Paths are grown one vertex at a time as rows of an integer array. Lengths
    whose bases would exceed ``budget`` rows (predicted from the path counts)
    are left as ``None``.
    """
    n = len(g)
    if n == 0:
        return [0] * (order + 1)
    per_len: dict[int, int] = defaultdict(int)
    for (_, length), c in path_counts(g, order).items():
        per_len[length] += c
    top, acc = -1, 0
    for ell in range(order + 1):
        acc += per_len[ell]
        if acc > budget:
            break
        top = ell
    if top < 0:
        return [None] * (order + 1)
    big = top + 1
    hop = np.array(
        [[big if (i == j or d is INF) else d for j, d in enumerate(row)] for i, row in enumerate(g.distances.rows)],
        dtype=np.int64,
    )
    chi = np.zeros(top + 1, dtype=np.int64)
    paths = np.arange(n, dtype=np.int32)[:, None]
    lengths = np.zeros(n, dtype=np.int64)
    k = 0
    while len(paths):
        chi += (-1) ** k * np.bincount(lengths, minlength=top + 1)
        cand = hop[paths[:, -1]] + lengths[:, None]
        rows, cols = np.nonzero(cand <= top)
        paths = np.hstack([paths[rows], cols[:, None].astype(np.int32)])
        lengths = cand[rows, cols]
        k += 1
    return [int(c) for c in chi] + [None] * (order - top)


class ChainBudgetError(RuntimeError):
    pass


def magnitude_by_chains(g: Graph, order: int, budget: int = CHAIN_BUDGET) -> TruncatedSeries:
    """Coefficient ``ell`` is the Euler characteristic of the enumerated slice."""
    coeffs = chain_euler_coefficients(g, order, budget)
    if None in coeffs:
        raise ChainBudgetError(f"slices beyond length {coeffs.index(None) - 1} exceed the budget of {budget}")
    return TruncatedSeries(tuple(coeffs))
