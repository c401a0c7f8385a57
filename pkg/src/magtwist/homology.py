"""Integral homology via Smith normal form, and magnitude homology of graphs."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Iterator, Sequence

from .chains import (
    ChainComplexError,
    ChainSlice,
    Path,
    SparseMatrix,
    complex_from_bases,
    faces,
    iter_paths,
)
from .graph import Graph


@dataclass(frozen=True)
class SnfResult:
    invariant_factors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariant_factors if d > 1)


def smith_normal_form(m) -> SnfResult:
    """Invariant factors of an integer matrix (list of rows, array, or SparseMatrix).

    Elimination picks the entry of least absolute value as pivot and
    repairs divisibility by folding offending rows into the pivot row.
    """
    if isinstance(m, SparseMatrix):
        a = m.to_dense()
    else:
        a = [[int(v) for v in row] for row in m]
    a = [row for row in a if any(row)]
    if not a:
        return SnfResult(())
    ncols = len(a[0])
    keep = [j for j in range(ncols) if any(row[j] for row in a)]
    a = [[row[j] for j in keep] for row in a]
    factors: list[int] = []
    while a and a[0]:
        nr, nc = len(a), len(a[0])
        while True:
            best = None
            for i in range(nr):
                for j in range(nc):
                    v = a[i][j]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), i, j)
                        if best[0] == 1:
                            break
                if best and best[0] == 1:
                    break
            if best is None:
                a = []
                break
            _, pi, pj = best
            a[0], a[pi] = a[pi], a[0]
            for row in a:
                row[0], row[pj] = row[pj], row[0]
            p = a[0][0]
            clean = True
            for i in range(1, nr):
                if a[i][0]:
                    q = a[i][0] // p
                    a[i] = [x - q * y for x, y in zip(a[i], a[0])]
                    if a[i][0]:
                        clean = False
            for j in range(1, nc):
                if a[0][j]:
                    q = a[0][j] // p
                    for row in a:
                        row[j] -= q * row[0]
                    if a[0][j]:
                        clean = False
            if not clean:
                continue
            bad = next(
                (i for i in range(1, nr) for j in range(1, nc) if a[i][j] % p),
                None,
            )
            if bad is not None:
                a[0] = [x + y for x, y in zip(a[0], a[bad])]
                continue
            factors.append(abs(p))
            a = [row[1:] for row in a[1:]]
            a = [row for row in a if any(row)]
            break
    return SnfResult(tuple(sorted(factors)))


def sparse_invariant_factors(m: SparseMatrix) -> SnfResult:
    """Invariant factors, eliminating unit pivots sparsely before any dense work.

    Each unit pivot contributes a factor 1; what survives is handed to
    :func:`smith_normal_form`.
    """
    rows: dict[int, dict[int, int]] = defaultdict(dict)
    cols: dict[int, set[int]] = defaultdict(set)
    for j, col in enumerate(m.cols):
        for i, v in col.items():
            if v:
                rows[i][j] = v
                cols[j].add(i)
    units = 0
    for j in range(m.ncols):
        cand = [i for i in cols.get(j, ()) if abs(rows[i][j]) == 1]
        if not cand:
            continue
        r = min(cand, key=lambda i: (len(rows[i]), i))
        prow = rows.pop(r)
        for c in prow:
            cols[c].discard(r)
        sgn = prow[j]
        for i in list(cols[j]):
            row = rows[i]
            f = row[j] * sgn
            for c, v in prow.items():
                nv = row.get(c, 0) - f * v
                if nv:
                    if c not in row:
                        cols[c].add(i)
                    row[c] = nv
                elif c in row:
                    del row[c]
                    cols[c].discard(i)
            if not row:
                del rows[i]
        del cols[j]
        units += 1
    rest_rows = sorted(i for i, r in rows.items() if r)
    rest_cols = sorted({c for i in rest_rows for c in rows[i]})
    if not rest_rows:
        return SnfResult((1,) * units)
    ci = {c: t for t, c in enumerate(rest_cols)}
    dense = [[0] * len(rest_cols) for _ in rest_rows]
    for t, i in enumerate(rest_rows):
        for c, v in rows[i].items():
            dense[t][ci[c]] = v
    rest = smith_normal_form(dense)
    return SnfResult(tuple(sorted((1,) * units + rest.invariant_factors)))


@dataclass(frozen=True)
class HomologyGroup:
    rank: int
    torsion: tuple[int, ...] = ()

    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion


def complex_homology(sizes: Sequence[int], boundaries: dict[int, SparseMatrix]) -> list[HomologyGroup]:
    """Homology of ``0 <- C_0 <- C_1 <- ...`` given sizes and ``d_k: C_k -> C_{k-1}``."""
    snf = {k: sparse_invariant_factors(m) for k, m in boundaries.items()}
    out = []
    for k, size in enumerate(sizes):
        rk_out = snf[k].rank if k in snf and k >= 1 else 0
        above = snf.get(k + 1)
        rk_in = above.rank if above else 0
        out.append(HomologyGroup(size - rk_out - rk_in, above.torsion if above else ()))
    return out


def homology_slice(sl: ChainSlice) -> list[HomologyGroup]:
    """``MH_k`` for each degree ``k`` of the slice (``k = 0 .. top``)."""
    sl.check_d_squared()
    sizes = [len(sl.basis(k)) for k in sl.degrees()]
    return complex_homology(sizes, {k: sl.boundary(k) for k in sl.boundaries})


def is_acyclic(sl: ChainSlice) -> bool:
    return all(h.is_zero() for h in homology_slice(sl))


def split_by_key(
    paths: Iterable[Path], key: Callable[[Path], Hashable]
) -> dict[Hashable, dict[int, list[Path]]]:
    blocks: dict[Hashable, dict[int, list[Path]]] = defaultdict(lambda: defaultdict(list))
    for p in paths:
        blocks[key(p)][len(p) - 1].append(p)
    return blocks


def block_homology(
    bases: dict[int, list[Path]],
    face_fn: Callable[[Path], Iterator[tuple[int, Path]]],
) -> list[HomologyGroup]:
    """Homology of one block given its bases; a face outside the block is an error."""
    sl = complex_from_bases(0, bases, face_fn, strict=True)
    top = max(bases) if bases else -1
    sizes = [len(bases.get(k, [])) for k in range(top + 1)]
    return complex_homology(sizes, sl.boundaries)


def add_groups(parts: Iterable[list[HomologyGroup]]) -> list[HomologyGroup]:
    ranks: dict[int, int] = defaultdict(int)
    tors: dict[int, list[int]] = defaultdict(list)
    for groups in parts:
        for k, h in enumerate(groups):
            ranks[k] += h.rank
            tors[k].extend(h.torsion)
    top = max(list(ranks) + list(tors), default=-1)
    return [HomologyGroup(ranks[k], tuple(sorted(tors[k]))) for k in range(top + 1)]


@dataclass
class BigradedHomology:
    """``MH_k^ell`` keyed by ``(k, ell)``; absent keys are zero groups."""

    max_length: int
    groups: dict[tuple[int, int], HomologyGroup] = field(default_factory=dict)

    def __getitem__(self, kl: tuple[int, int]) -> HomologyGroup:
        return self.groups.get(kl, HomologyGroup(0))

    def euler_characteristic(self, ell: int) -> int:
        return sum((-1) ** k * h.rank for (k, l), h in self.groups.items() if l == ell)

    def rows(self) -> list[tuple[int, int, int, tuple[int, ...]]]:
        return [(l, k, h.rank, h.torsion) for (k, l), h in sorted(self.groups.items(), key=lambda t: (t[0][1], t[0][0]))]

    def to_tsv(self) -> str:
        lines = ["ell\tk\trank\ttorsion"]
        for l, k, r, t in self.rows():
            lines.append(f"{l}\t{k}\t{r}\t{','.join(map(str, t))}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> list[dict]:
        return [{"ell": l, "k": k, "rank": r, "torsion": list(t)} for l, k, r, t in self.rows()]


def magnitude_homology(g: Graph, max_length: int) -> BigradedHomology:
    """All ``MH_k^ell(g)`` for ``ell <= max_length``.

    The boundary never moves a path's endpoints, so each slice is computed
    as a direct sum over (start, end) blocks.
    """
    rows = g.distances.rows
    out = BigradedHomology(max_length)
    for ell in range(max_length + 1):
        blocks = split_by_key(iter_paths(g, ell), lambda p: (p[0], p[-1]))
        total = add_groups(
            block_homology(b, lambda p: faces(rows, p)) for b in blocks.values()
        )
        for k, h in enumerate(total):
            if k > ell and not h.is_zero():
                raise ChainComplexError(f"nonzero MH_{k}^{ell} above the diagonal")
            if not h.is_zero():
                out.groups[(k, ell)] = h
    return out
