"""Truncated integer power series and the magnitude of a graph as one."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .graph import INF, Graph

SINGULAR_PIVOT = 1e-10


class SeriesError(ValueError):
    pass


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficients ``c_0 .. c_N`` of an integer power series in ``q``."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if not self.coeffs:
            raise SeriesError("a truncated series needs at least the constant term")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def zero(cls, order: int) -> "TruncatedSeries":
        return cls((0,) * (order + 1))

    @classmethod
    def one(cls, order: int) -> "TruncatedSeries":
        return cls.monomial(0, order)

    @classmethod
    def monomial(cls, exponent, order: int, coeff: int = 1) -> "TruncatedSeries":
        """``coeff * q**exponent``; ``q**INF`` and exponents past ``order`` give zero."""
        c = [0] * (order + 1)
        if exponent is not INF and exponent <= order:
            c[exponent] = coeff
        return cls(tuple(c))

    def _check(self, other: "TruncatedSeries") -> None:
        if not isinstance(other, TruncatedSeries):
            raise TypeError("expected a TruncatedSeries")
        if other.order != self.order:
            raise SeriesError(f"order mismatch: {self.order} vs {other.order}")

    def __add__(self, other):
        self._check(other)
        return TruncatedSeries(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        return TruncatedSeries(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return TruncatedSeries(tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            return TruncatedSeries(tuple(other * a for a in self.coeffs))
        return series_mul(self, other)

    __rmul__ = __mul__

    def invert(self) -> "TruncatedSeries":
        return series_invert(self)

    def evaluate(self, q: float) -> float:
        return sum(c * q**i for i, c in enumerate(self.coeffs))

    def to_list(self) -> list[int]:
        return list(self.coeffs)


def _mul(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    out = [0] * (n + 1)
    for i, ai in enumerate(a):
        if ai:
            for j in range(n + 1 - i):
                bj = b[j]
                if bj:
                    out[i + j] += ai * bj
    return out


def _inv(a: Sequence[int], n: int) -> list[int]:
    c0 = a[0]
    if c0 not in (1, -1):
        raise SeriesError(f"constant term {c0} is not a unit in Z[[q]]")
    b = [0] * (n + 1)
    b[0] = c0
    for i in range(1, n + 1):
        s = sum(a[j] * b[i - j] for j in range(1, i + 1))
        b[i] = -c0 * s
    return b


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    a._check(b)
    return TruncatedSeries(tuple(_mul(a.coeffs, b.coeffs, a.order)))


def series_invert(a: TruncatedSeries) -> TruncatedSeries:
    return TruncatedSeries(tuple(_inv(a.coeffs, a.order)))


class SeriesMatrix:
    """Square matrix of truncated series sharing one order."""

    def __init__(self, entries: list[list[TruncatedSeries]]):
        orders = {e.order for row in entries for e in row}
        if len(orders) > 1:
            raise SeriesError("matrix entries have different orders")
        if any(len(row) != len(entries) for row in entries):
            raise SeriesError("matrix is not square")
        self.entries = entries
        self.order = orders.pop() if orders else 0

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij) -> TruncatedSeries:
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other) -> bool:
        return isinstance(other, SeriesMatrix) and self.entries == other.entries

    def __matmul__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        n, N = len(self), self.order
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = [0] * (N + 1)
                for k in range(n):
                    for t, c in enumerate(_mul(self.entries[i][k].coeffs, other.entries[k][j].coeffs, N)):
                        acc[t] += c
                row.append(TruncatedSeries(tuple(acc)))
            out.append(row)
        return SeriesMatrix(out)

    def total(self) -> TruncatedSeries:
        acc = [0] * (self.order + 1)
        for row in self.entries:
            for e in row:
                for t, c in enumerate(e.coeffs):
                    acc[t] += c
        return TruncatedSeries(tuple(acc))

    @classmethod
    def identity(cls, n: int, order: int) -> "SeriesMatrix":
        return cls([
            [TruncatedSeries.monomial(0 if i == j else INF, order) for j in range(n)]
            for i in range(n)
        ])


def zeta_matrix(g: Graph, order: int) -> SeriesMatrix:
    """Entry ``(u, v)`` is ``q**d(u, v)``, zero for unreachable pairs."""
    rows = g.distances.rows
    return SeriesMatrix([[TruncatedSeries.monomial(d, order) for d in row] for row in rows])


def invert_series_matrix(z: SeriesMatrix) -> SeriesMatrix:
    """Gauss-Jordan elimination over truncated series with diagonal pivots.

    Every pivot must have a unit constant term. That holds for zeta matrices,
    whose constant-term part is the identity.
    """
    n, N = len(z), z.order
    a = [[list(e.coeffs) for e in row] for row in z.entries]
    inv = [[[1 if (i == j and t == 0) else 0 for t in range(N + 1)] for j in range(n)] for i in range(n)]
    for p in range(n):
        pinv = _inv(a[p][p], N)
        a[p] = [_mul(pinv, e, N) for e in a[p]]
        inv[p] = [_mul(pinv, e, N) for e in inv[p]]
        for r in range(n):
            if r == p:
                continue
            f = a[r][p]
            if not any(f):
                continue
            for c in range(n):
                prod_a = _mul(f, a[p][c], N)
                prod_i = _mul(f, inv[p][c], N)
                a[r][c] = [x - y for x, y in zip(a[r][c], prod_a)]
                inv[r][c] = [x - y for x, y in zip(inv[r][c], prod_i)]
    return SeriesMatrix([[TruncatedSeries(tuple(e)) for e in row] for row in inv])


def magnitude_by_inversion(g: Graph, order: int) -> TruncatedSeries:
    """Sum of the entries of the inverse zeta matrix, up to ``q**order``."""
    if len(g) == 0:
        return TruncatedSeries.zero(order)
    return invert_series_matrix(zeta_matrix(g, order)).total()


def magnitude_function_samples(g: Graph, t_values: Iterable[float]) -> list[Optional[float]]:
    """Real magnitude at ``q = exp(-t)``; ``None`` marks a numerically singular sample."""
    rows = g.distances.rows
    n = len(rows)
    out: list[Optional[float]] = []
    ones = np.ones(n)
    for t in t_values:
        if t <= 0:
            raise ValueError("sample points must satisfy t > 0")
        q = math.exp(-t)
        z = np.array([[0.0 if d is INF else q**d for d in row] for row in rows])
        lu, piv = lu_factor(z, check_finite=True)
        if np.min(np.abs(np.diag(lu))) < SINGULAR_PIVOT:
            out.append(None)
            continue
        out.append(float(lu_solve((lu, piv), ones).sum()))
    return out
