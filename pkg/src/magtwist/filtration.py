"""Quotient complexes ``Q_m``, the non-twistable subcomplexes ``E_m``, and the contracting homotopy.

``Q_m`` (for one owner graph and one length) is spanned by paths with exactly
``m`` entries outside ``H_0 ∪ K``; its boundary never drops such an entry.
``E_m`` is spanned by the non-twistable generators.

The homotopy check works on the associated graded pieces of a filtration of
``E_m`` by the start index ``F`` of the first sticky subpath. Dropping an entry
never raises ``F``, and when ``F`` is unchanged so is the entry ``x_F``, hence
the direction. Each graded piece therefore splits by direction. H->G pieces
are contracted directly; G->H pieces are graded once more by ``k - L`` (``L``
the end of the first sticky subpath) and then contracted.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from .chains import ChainComplexError, ChainSlice, Path, boundary_from_bases, complex_from_bases, iter_paths
from .homology import complex_homology
from .twist import (
    BIASED,
    G_ONLY,
    Direction,
    TwistInvariantError,
    TwistPair,
    first_sticky,
    projection_to_G,
)


class HomotopyError(AssertionError):
    """``s d + d s`` differs from the identity on some generator."""


class ClosureError(AssertionError):
    """A face of a non-twistable generator is twistable."""


class OwnerData:
    """Per-owner lookup tables shared by every slice computation."""

    def __init__(self, pair: TwistPair, owner: str):
        self.pair = pair
        self.owner = owner
        self.graph = pair.graph(owner)
        self.rows = self.graph.distances.rows
        self.codes = pair.class_codes()
        self.outside = [c == G_ONLY or c == BIASED for c in self.codes]
        self._pi: Optional[list[int]] = None

    @property
    def pi(self) -> list[int]:
        """Index of the projection to G of each biased vertex, ``-1`` elsewhere."""
        if self._pi is None:
            idx = self.graph.index
            pi = [-1] * len(self.graph)
            for v, w in projection_to_G(self.pair, self.owner).items():
                pi[idx[v]] = idx[w]
            self._pi = pi
        return self._pi

    def visits(self, p: Path) -> int:
        out = self.outside
        return sum(1 for v in p if out[v])

    def anchors(self, p: Path) -> tuple[int, ...]:
        out = self.outside
        return tuple(v for v in p if out[v])

    def q_faces(self, p: Path) -> Iterator[tuple[int, Path]]:
        rows, out = self.rows, self.outside
        for i in range(1, len(p) - 1):
            b = p[i]
            if out[b]:
                continue
            a, c = p[i - 1], p[i + 1]
            if rows[a][c] == rows[a][b] + rows[b][c]:
                yield (-1 if i % 2 else 1), p[:i] + p[i + 1:]

    def sticky(self, p: Path) -> Optional[tuple[int, int]]:
        return first_sticky(self.codes, p)

    def direction(self, p: Path, st: tuple[int, int]) -> Direction:
        return Direction.G_TO_H if self.codes[p[st[0]]] == G_ONLY else Direction.H_TO_G

    def piece_key(self, p: Path, st: tuple[int, int]) -> tuple:
        """Graded piece of a non-twistable generator: ``(dir, F)`` or ``(dir, F, k - L)``."""
        if self.codes[p[st[0]]] == G_ONLY:
            return (Direction.G_TO_H, st[0], len(p) - 1 - st[1])
        return (Direction.H_TO_G, st[0])

    def s(self, key: tuple, x: Path) -> Optional[tuple[int, Path]]:
        """The contracting homotopy on one graded piece."""
        pi = self.pi
        if key[0] is Direction.H_TO_G:
            i = key[1]
            w = pi[x[i]]
            if w < 0:
                raise TwistInvariantError(f"start of a sticky subpath {x} is not biased")
            if x[i + 1] == w:
                return None
            return (1 if (i + 1) % 2 == 0 else -1), x[:i + 1] + (w,) + x[i + 1:]
        L = len(x) - 1 - key[2]
        w = pi[x[L]]
        if w < 0:
            raise TwistInvariantError(f"end of a sticky subpath {x} is not biased")
        if x[L - 1] == w:
            return None
        return (1 if L % 2 == 0 else -1), x[:L] + (w,) + x[L:]


def _by_degree(paths: Iterable[Path]) -> dict[int, list[Path]]:
    out: dict[int, list[Path]] = defaultdict(list)
    for p in paths:
        out[len(p) - 1].append(p)
    return {k: sorted(v) for k, v in out.items()}


@dataclass
class QuotientSlice(ChainSlice):
    m: int = 0
    owner: str = "X"


def q_slice(pair: TwistPair, owner: str, m: int, ell: int, od: Optional[OwnerData] = None) -> QuotientSlice:
    od = od or OwnerData(pair, owner)
    paths = [p for p in iter_paths(od.graph, ell) if od.visits(p) == m]
    sl = complex_from_bases(ell, _by_degree(paths), od.q_faces, strict=True)
    return QuotientSlice(ell, sl.bases, sl.boundaries, m=m, owner=owner)


@dataclass
class ESubcomplex:
    total: QuotientSlice
    summands: dict[Direction, QuotientSlice]
    leaks: list[tuple[Path, Path]] = field(default_factory=list)  # (generator, face of the other direction)

    @property
    def split_is_direct(self) -> bool:
        return not self.leaks


def e_subcomplex(q: QuotientSlice, od: OwnerData) -> ESubcomplex:
    """Non-twistable part of ``q``; raises :class:`ClosureError` if it is not closed.

    Each direction summand carries the boundary projected onto its own
    generators. Those projections form subcomplexes only when no face
    changes direction; such faces are listed in ``leaks``.
    """
    sticky = {}
    for ps in q.bases.values():
        for p in ps:
            st = od.sticky(p)
            if st is not None:
                sticky[p] = od.direction(p, st)
    leaks = []
    for p, d in sticky.items():
        for _, f in od.q_faces(p):
            if f not in sticky:
                raise ClosureError(f"face {f} of non-twistable {p} is twistable")
            if sticky[f] is not d:
                leaks.append((p, f))
    total = complex_from_bases(q.ell, _by_degree(sticky), od.q_faces, strict=True)
    summands = {}
    for d in Direction:
        bases = _by_degree(p for p, e in sticky.items() if e is d)
        bases = {k: v for k, v in bases.items() if v}
        bd = {k: boundary_from_bases(bases[k], bases.get(k - 1, []), od.q_faces, strict=False)
              for k in bases if k >= 1}
        summands[d] = QuotientSlice(q.ell, bases, bd, m=q.m, owner=q.owner)
    return ESubcomplex(QuotientSlice(q.ell, total.bases, total.boundaries, m=q.m, owner=q.owner), summands, leaks)


def slice_acyclic(sl: ChainSlice) -> bool:
    """SNF homology of ``sl`` vanishes in every degree (``d∘d = 0`` checked first)."""
    sl.check_d_squared()
    top = max(sl.bases, default=-1)
    sizes = [len(sl.bases.get(k, [])) for k in range(top + 1)]
    return all(h.is_zero() for h in complex_homology(sizes, sl.boundaries))


def verify_e_acyclic(e: ESubcomplex) -> bool:
    """``E_m`` and both direction summands have vanishing SNF homology.

    A summand that is not a subcomplex is taken with its projected boundary;
    if that projection fails ``d∘d = 0`` the result is ``False``.
    """
    if not slice_acyclic(e.total):
        return False
    try:
        return all(slice_acyclic(s) for s in e.summands.values())
    except ChainComplexError:
        return False


def graded_pieces(od: OwnerData, paths: Iterable[Path]) -> dict[tuple, dict[int, list[Path]]]:
    groups: dict[tuple, list[Path]] = defaultdict(list)
    for p in paths:
        st = od.sticky(p)
        if st is not None:
            groups[od.piece_key(p, st)].append(p)
    return {key: _by_degree(ps) for key, ps in groups.items()}


def piece_complex(od: OwnerData, ell: int, bases: dict[int, list[Path]]) -> ChainSlice:
    """One graded piece: boundary projected onto the piece; ``d∘d = 0`` asserted."""
    bd = {k: boundary_from_bases(bases[k], bases.get(k - 1, []), od.q_faces, strict=False)
          for k in bases if k >= 1}
    sl = ChainSlice(ell, bases, bd)
    sl.check_d_squared()
    return sl


def homotopy_identity_failures(od: OwnerData, key: tuple, bases: dict[int, list[Path]]) -> list[tuple[Path, dict]]:
    """Generators ``x`` of one piece with ``(s d + d s)(x) != x``, with the computed value."""
    members = {p for ps in bases.values() for p in ps}
    bad = []
    for ps in bases.values():
        for x in ps:
            acc: dict[Path, int] = defaultdict(int)
            sx = od.s(key, x)
            if sx is not None:
                sgn, y = sx
                if y not in members:
                    raise HomotopyError(f"s({x}) = {y} leaves its graded piece {key}")
                for sg, f in od.q_faces(y):
                    if f in members:
                        acc[f] += sgn * sg
            for sg, f in od.q_faces(x):
                if f in members:
                    t = od.s(key, f)
                    if t is not None:
                        acc[t[1]] += sg * t[0]
            got = {p: c for p, c in acc.items() if c}
            if got != {x: 1}:
                bad.append((x, got))
    return bad


def homotopy_check(pair: TwistPair, owner: str, direction: Direction, m: int, ell: int, i: int,
                   od: Optional[OwnerData] = None, refined: bool = True) -> bool:
    """``s d + d s = id`` on the pieces with index ``i`` in ``direction``.

    For H->G, ``i`` is the start ``F`` of the first sticky subpath. For
    G->H, ``i`` is ``k - L``; with ``refined`` each start ``F`` is its own
    piece, otherwise all generators with ``k - L = i`` form one slice.
    Raises :class:`HomotopyError` naming the first offending generator.
    """
    od = od or OwnerData(pair, owner)
    paths = [p for p in iter_paths(od.graph, ell) if od.visits(p) == m]
    pos = 1 if direction is Direction.H_TO_G else 2
    pieces = graded_pieces(od, paths)
    if direction is Direction.G_TO_H and not refined:
        merged: dict[tuple, dict[int, list[Path]]] = defaultdict(lambda: defaultdict(list))
        for key, bases in pieces.items():
            if key[0] is direction:
                for k, ps in bases.items():
                    merged[(direction, None, key[2])][k].extend(ps)
        pieces = {key: {k: sorted(v) for k, v in b.items()} for key, b in merged.items()}
    for key, bases in sorted(pieces.items(), key=lambda t: tuple(-1 if x is None else x for x in t[0][1:])):
        if key[0] is not direction or key[pos] != i:
            continue
        piece_complex(od, ell, bases)
        bad = homotopy_identity_failures(od, key, bases)
        if bad:
            x, got = bad[0]
            raise HomotopyError(f"(sd+ds)({x}) = {got} on piece {key}")
    return True


# ---------------------------------------------------------------------------
# streaming verifier


@dataclass
class SliceEvidence:
    """Everything checked for one ``(owner, m, ell)``.

    ``ok`` covers the argument as run here: closure of ``E_m``, the
    filtration by first-sticky start, acyclicity of ``E_m`` and of every
    graded piece, and the homotopy identity on every piece. The ``literal_*``
    and ``summand*`` fields record two coarser decompositions that are
    reported but not required: the split of ``E_m`` by direction, and the
    G->H grading by ``k - L`` alone.
    """

    owner: str
    m: int
    ell: int
    q_sizes: Counter = field(default_factory=Counter)
    e_sizes: Counter = field(default_factory=Counter)
    closure_violations: int = 0
    e_acyclic: bool = True
    filtration_violations: int = 0
    pieces: int = 0
    pieces_acyclic: bool = True
    homotopy_failures: int = 0
    d_squared_failures: int = 0
    direction_leaks: int = 0
    summands_direct: bool = True
    summand_blocks_not_complex: int = 0
    summands_acyclic: bool = True
    literal_m_violations: int = 0
    literal_m_pieces: int = 0
    literal_m_not_complex: int = 0
    literal_m_homotopy_failures: int = 0
    examples: list[str] = field(default_factory=list)

    @property
    def q_euler(self) -> int:
        return sum((-1) ** k * c for k, c in self.q_sizes.items())

    @property
    def ok(self) -> bool:
        return (
            self.closure_violations == 0
            and self.e_acyclic
            and self.pieces_acyclic
            and self.homotopy_failures == 0
            and self.filtration_violations == 0
            and self.d_squared_failures == 0
        )

    @property
    def literal_summands_ok(self) -> bool:
        return self.summand_blocks_not_complex == 0 and self.summands_acyclic

    @property
    def literal_homotopy_ok(self) -> bool:
        return self.literal_m_not_complex == 0 and self.literal_m_homotopy_failures == 0

    def note(self, msg: str) -> None:
        if len(self.examples) < 5:
            self.examples.append(msg)

    _SUMS = (
        "closure_violations", "filtration_violations", "pieces", "homotopy_failures",
        "d_squared_failures", "direction_leaks", "summand_blocks_not_complex",
        "literal_m_violations", "literal_m_pieces", "literal_m_not_complex",
        "literal_m_homotopy_failures",
    )
    _ALLS = ("e_acyclic", "pieces_acyclic", "summands_direct", "summands_acyclic")

    def merge(self, other: "SliceEvidence") -> None:
        self.q_sizes.update(other.q_sizes)
        self.e_sizes.update(other.e_sizes)
        for name in self._SUMS:
            setattr(self, name, getattr(self, name) + getattr(other, name))
        for name in self._ALLS:
            setattr(self, name, getattr(self, name) and getattr(other, name))
        for e in other.examples:
            self.note(e)

    def to_json(self) -> dict:
        out = {"owner": self.owner, "m": self.m, "ell": self.ell,
               "q_sizes": {str(k): v for k, v in sorted(self.q_sizes.items())},
               "q_euler": self.q_euler,
               "e_sizes": {str(k): v for k, v in sorted(self.e_sizes.items())}}
        for name in self._SUMS + self._ALLS:
            out[name] = getattr(self, name)
        out["ok"] = self.ok
        out["literal_summands_ok"] = self.literal_summands_ok
        out["literal_homotopy_ok"] = self.literal_homotopy_ok
        out["examples"] = self.examples
        return out


def _checked_complex(ev: SliceEvidence, ell, bases, face_fn, strict=True) -> Optional[ChainSlice]:
    try:
        return complex_from_bases(ell, bases, face_fn, strict=strict)
    except ChainComplexError as exc:
        ev.d_squared_failures += 1
        ev.note(str(exc))
        return None


def _check_pieces(od, ell, ev, groups, literal: bool) -> None:
    for key, ps in groups.items():
        bases = _by_degree(ps)
        if literal:
            ev.literal_m_pieces += 1
        else:
            ev.pieces += 1
        try:
            sl = piece_complex(od, ell, bases)
        except ChainComplexError as exc:
            if literal:
                ev.literal_m_not_complex += 1
            else:
                ev.d_squared_failures += 1
            ev.note(f"piece {key}: {exc}")
            continue
        if not literal and not slice_acyclic(sl):
            ev.pieces_acyclic = False
            ev.note(f"graded piece {key} not acyclic")
        try:
            bad = homotopy_identity_failures(od, key, bases)
        except HomotopyError as exc:
            bad = [(None, str(exc))]
        if bad:
            if literal:
                ev.literal_m_homotopy_failures += len(bad)
            else:
                ev.homotopy_failures += len(bad)
            ev.note(f"homotopy on {key}: (sd+ds)({bad[0][0]}) = {bad[0][1]}")


def _check_block(od: OwnerData, ell: int, paths: list[Path], ev: SliceEvidence, check_q: bool) -> None:
    """All checks on one block (fixed endpoints and fixed outside entries)."""
    for p in paths:
        ev.q_sizes[len(p) - 1] += 1
    if check_q:
        _checked_complex(ev, ell, _by_degree(paths), od.q_faces)

    info: dict[Path, tuple] = {}
    for p in paths:
        st = od.sticky(p)
        if st is not None:
            info[p] = od.piece_key(p, st)
    if not info:
        return
    for p in info:
        ev.e_sizes[len(p) - 1] += 1

    leaks = 0
    for p, key in info.items():
        for _, f in od.q_faces(p):
            fkey = info.get(f)
            if fkey is None:
                ev.closure_violations += 1
                ev.note(f"closure: face {f} of {p} is twistable")
                continue
            if fkey[0] is not key[0]:
                leaks += 1
            elif key[0] is Direction.G_TO_H and fkey[2] > key[2]:
                ev.literal_m_violations += 1
            if fkey[1] > key[1]:
                ev.filtration_violations += 1
                ev.note(f"filtration: face {f} of {p} has a later first sticky subpath")
            elif fkey[1] == key[1]:
                if fkey[0] is not key[0]:
                    ev.filtration_violations += 1
                    ev.note(f"filtration: face {f} of {p} keeps the start but changes direction")
                elif key[0] is Direction.G_TO_H and fkey[2] > key[2]:
                    ev.filtration_violations += 1
                    ev.note(f"filtration: face {f} of {p} raises k - L")
    if ev.closure_violations:
        return
    ev.direction_leaks += leaks

    total = _checked_complex(ev, ell, _by_degree(info), od.q_faces)
    if total is not None and not slice_acyclic(total):
        ev.e_acyclic = False
        vs = od.graph.vertices
        ev.note(f"E block from {vs[paths[0][0]]} to {vs[paths[0][-1]]} is not acyclic")

    # the direction split as literally stated: subcomplexes when nothing leaks,
    # otherwise the boundary is projected onto each summand
    if leaks:
        ev.summands_direct = False
    for d in Direction:
        sb = _by_degree(p for p, key in info.items() if key[0] is d)
        if not sb:
            continue
        try:
            sl = piece_complex(od, ell, sb)
        except ChainComplexError:
            ev.summand_blocks_not_complex += 1
            vs = od.graph.vertices
            ev.note(f"{d.value} summand from {vs[paths[0][0]]} to {vs[paths[0][-1]]}: projected boundary squares to nonzero")
            continue
        if not slice_acyclic(sl):
            ev.summands_acyclic = False
            ev.note(f"{d.value} summand not acyclic")

    groups: dict[tuple, list[Path]] = defaultdict(list)
    literal: dict[tuple, list[Path]] = defaultdict(list)
    for p, key in info.items():
        groups[key].append(p)
        if key[0] is Direction.G_TO_H:
            literal[(key[0], None, key[2])].append(p)
    _check_pieces(od, ell, ev, groups, literal=False)
    _check_pieces(od, ell, ev, literal, literal=True)


def evidence_for_start(pair: TwistPair, owner: str, ell: int, start: int, check_q: bool = True) -> dict[int, SliceEvidence]:
    """Evidence for all paths of length ``ell`` starting at vertex index ``start``, keyed by ``m``."""
    od = _owner_data(pair, owner)
    blocks: dict[tuple, list[Path]] = defaultdict(list)
    out = od.outside
    for p in iter_paths(od.graph, ell, start=start):
        blocks[(p[-1], tuple(v for v in p if out[v]))].append(p)
    res: dict[int, SliceEvidence] = {}
    for key in sorted(blocks):
        m = len(key[1])
        ev = res.setdefault(m, SliceEvidence(owner, m, ell))
        _check_block(od, ell, blocks[key], ev, check_q)
    return res


_OD_CACHE: dict[tuple[int, str], OwnerData] = {}


def _owner_data(pair: TwistPair, owner: str) -> OwnerData:
    key = (id(pair), owner)
    od = _OD_CACHE.get(key)
    if od is None or od.pair is not pair:
        od = OwnerData(pair, owner)
        _OD_CACHE[key] = od
    return od
