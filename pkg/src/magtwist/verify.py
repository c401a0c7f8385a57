"""Reports: magnitude by three routes, and step-by-step evidence for sycamore twists."""

from __future__ import annotations

import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from .chains import CHAIN_BUDGET, chain_euler_coefficients, iter_paths, magnitude_by_path_count
from .filtration import OwnerData, SliceEvidence, evidence_for_start
from .graph import Graph, are_isometric
from .homology import add_groups, block_homology, magnitude_homology, split_by_key
from .series import magnitude_by_inversion
from .twist import (
    TwistError,
    TwistInvariantError,
    TwistPair,
    TwistSpec,
    _tau_index,
    build_twist_pair,
    first_sticky,
    tau_maps,
    twist_indices,
    validate_sycamore,
)

def chain_route(g: Graph, order: int, budget: int = CHAIN_BUDGET) -> list[Optional[int]]:
    return chain_euler_coefficients(g, order, budget)


@dataclass
class MagnitudeRoutes:
    inversion: list[int]
    path_count: list[int]
    chains: list[Optional[int]]

    @property
    def agree(self) -> bool:
        return self.inversion == self.path_count and all(
            c is None or c == a for c, a in zip(self.chains, self.inversion)
        )

    def to_json(self) -> dict:
        return {
            "inversion": self.inversion,
            "path_count": self.path_count,
            "chains": self.chains,
            "chains_computed_up_to": next((i - 1 for i, c in enumerate(self.chains) if c is None), len(self.chains) - 1),
            "agree": self.agree,
        }


def magnitude_routes(g: Graph, order: int, budget: int = CHAIN_BUDGET) -> MagnitudeRoutes:
    return MagnitudeRoutes(
        magnitude_by_inversion(g, order).to_list(),
        magnitude_by_path_count(g, order).to_list(),
        chain_route(g, order, budget),
    )


# ---------------------------------------------------------------------------
# proof-step evidence

_WORKER_PAIR: Optional[TwistPair] = None


def _init_worker(pair: TwistPair) -> None:
    global _WORKER_PAIR
    _WORKER_PAIR = pair


def _job(args) -> tuple[str, int, dict[int, SliceEvidence]]:
    owner, ell, start, check_q = args
    return owner, ell, evidence_for_start(_WORKER_PAIR, owner, ell, start, check_q)


def proof_evidence(
    pair: TwistPair, max_length: int, workers: Optional[int] = None, check_q: bool = True
) -> dict[tuple[str, int, int], SliceEvidence]:
    """Evidence for every ``(owner, m, ell)`` with ``ell <= max_length``.

    Jobs are one per (owner, length, start vertex); results are merged in
    key order, so the report does not depend on scheduling.
    """
    jobs = [(o, ell, s, check_q) for ell in range(max_length, -1, -1) for o in "XY" for s in range(len(pair.X))]
    workers = workers if workers is not None else min(8, os.cpu_count() or 1)
    if workers > 1:
        with ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(pair,)) as ex:
            results = list(ex.map(_job, jobs, chunksize=1))
    else:
        _init_worker(pair)
        results = [_job(j) for j in jobs]
    merged: dict[tuple[str, int, int], SliceEvidence] = {}
    for o in "XY":
        for ell in range(max_length + 1):
            for m in range(ell + 2):  # a k-path has at most k + 1 <= ell + 1 outside entries
                merged[(o, m, ell)] = SliceEvidence(o, m, ell)
    results.sort(key=lambda r: (r[0], r[1]))
    for owner, ell, part in results:
        for m, ev in sorted(part.items()):
            merged[(owner, m, ell)].merge(ev)
    return merged


def q_homology_euler(pair: TwistPair, owner: str, m: int, ell: int) -> int:
    """``χ(Q_m)`` computed from SNF homology ranks rather than generator counts."""
    od = OwnerData(pair, owner)
    paths = [p for p in iter_paths(od.graph, ell) if od.visits(p) == m]
    blocks = split_by_key(paths, lambda p: (p[0], p[-1], od.anchors(p)))
    groups = add_groups(block_homology(b, od.q_faces) for b in blocks.values())
    return sum((-1) ** k * h.rank for k, h in enumerate(groups))


@dataclass
class BijectionTally:
    """Twistable-path counts per ``(k, ell, m)`` in X and Y, and every failure of ``T``."""

    counts_X: Counter = field(default_factory=Counter)
    counts_Y: Counter = field(default_factory=Counter)
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and self.counts_X == self.counts_Y

    def to_json(self) -> dict:
        keys = sorted(set(self.counts_X) | set(self.counts_Y))
        return {
            "ok": self.ok,
            "buckets": [
                {"k": k, "ell": l, "m": m, "X": self.counts_X[(k, l, m)], "Y": self.counts_Y[(k, l, m)]}
                for k, l, m in keys
            ],
            "failures": self.failures[:20],
        }


def t_bijection(pair: TwistPair, max_length: int) -> BijectionTally:
    """Apply ``T`` to every twistable path of X and ``T'`` back, up to ``max_length``.

    Checks that ``T`` lands on twistable paths of Y with the same degree,
    length and outside-visit count, that ``T' T = id``, and that the images
    are exactly the twistable paths of Y.
    """
    tau_maps(pair)
    odX, odY = OwnerData(pair, "X"), OwnerData(pair, "Y")
    codes = odX.codes
    fwd, back = _tau_index(pair), _tau_index(pair, inverse=True)
    ry = odY.rows
    tally = BijectionTally()

    def fail(msg):
        if len(tally.failures) < 100:
            tally.failures.append(msg)

    for ell in range(max_length + 1):
        images = set()
        for p in iter_paths(pair.X, ell):
            if first_sticky(codes, p) is not None:
                continue
            key = (len(p) - 1, ell, odX.visits(p))
            tally.counts_X[key] += 1
            q = twist_indices(codes, fwd, p)
            hops = [ry[q[t]][q[t + 1]] for t in range(len(q) - 1)]
            if any(h == 0 for h in hops) or sum(hops) != ell:
                fail(f"T{p} = {q} is degenerate or changes length")
                continue
            if first_sticky(codes, q) is not None:
                fail(f"T{p} = {q} is not twistable in Y")
            if odY.visits(q) != key[2]:
                fail(f"T{p} = {q} changes the outside-visit count")
            if twist_indices(codes, back, q) != p:
                fail(f"T'T{p} != {p}")
            if q in images:
                fail(f"T is not injective at {q}")
            images.add(q)
        for q in iter_paths(pair.Y, ell):
            if first_sticky(codes, q) is not None:
                continue
            tally.counts_Y[(len(q) - 1, ell, odY.visits(q))] += 1
            if q not in images:
                fail(f"twistable {q} in Y is not an image of T")
    return tally


# ---------------------------------------------------------------------------


@dataclass
class TwistReport:
    valid: bool
    reasons: list[str]
    classes: dict[str, str]
    magnitude_X: MagnitudeRoutes
    magnitude_Y: MagnitudeRoutes
    isometric: Optional[bool] = None
    evidence: dict = field(default_factory=dict)
    euler_table: list[dict] = field(default_factory=list)
    bijection: Optional[BijectionTally] = None
    homology: Optional[dict] = None
    errors: list[str] = field(default_factory=list)

    @property
    def magnitudes_equal(self) -> bool:
        return self.magnitude_X.inversion == self.magnitude_Y.inversion

    @property
    def checks_pass(self) -> bool:
        return (
            self.magnitude_X.agree
            and self.magnitude_Y.agree
            and self.magnitudes_equal
            and all(e.ok for e in self.evidence.values())
            and all(row["equal"] for row in self.euler_table)
            and (self.bijection is None or self.bijection.ok)
            and not self.errors
        )

    def exit_code(self) -> int:
        if not self.valid:
            return 2
        return 0 if self.checks_pass else 1

    def to_json(self) -> dict:
        ev = self.evidence
        return {
            "verdict": "sycamore" if self.valid else "not-a-sycamore-twist",
            "reasons": self.reasons,
            "classes": self.classes,
            "magnitude": {"X": self.magnitude_X.to_json(), "Y": self.magnitude_Y.to_json()},
            "magnitudes_equal": self.magnitudes_equal,
            "isometric": self.isometric,
            "euler_table": self.euler_table,
            "e_closed": all(e.closure_violations == 0 for e in ev.values()),
            "e_acyclic": all(e.e_acyclic for e in ev.values()),
            "pieces_acyclic": all(e.pieces_acyclic for e in ev.values()),
            "homotopy_ok": all(e.homotopy_failures == 0 for e in ev.values()),
            "filtration_ok": all(e.filtration_violations == 0 for e in ev.values()),
            "literal_split": {
                "direct": all(e.summands_direct for e in ev.values()),
                "direction_leaks": sum(e.direction_leaks for e in ev.values()),
                "blocks_not_complex": sum(e.summand_blocks_not_complex for e in ev.values()),
                "summands_acyclic": all(e.literal_summands_ok for e in ev.values()),
            },
            "literal_m_grading": {
                "violations": sum(e.literal_m_violations for e in ev.values()),
                "homotopy_ok": all(e.literal_homotopy_ok for e in ev.values()),
            },
            "evidence": [e.to_json() for _, e in sorted(ev.items())],
            "bijection": self.bijection.to_json() if self.bijection else None,
            "homology": self.homology,
            "errors": self.errors,
            "checks_pass": self.checks_pass,
        }


def euler_table(evidence: dict[tuple[str, int, int], SliceEvidence]) -> list[dict]:
    rows = []
    for (o, m, ell), ev in sorted(evidence.items()):
        if o != "X":
            continue
        y = evidence[("Y", m, ell)]
        rows.append({"m": m, "ell": ell, "X": ev.q_euler, "Y": y.q_euler, "equal": ev.q_euler == y.q_euler})
    return rows


def verify_sycamore_magnitude(
    spec: TwistSpec,
    order: int = 10,
    evidence_length: int = 6,
    bijection_length: int = 6,
    homology_length: Optional[int] = None,
    workers: Optional[int] = None,
    isometry_check: bool = True,
) -> TwistReport:
    """Build, validate, compare magnitudes, and (for sycamore twists) collect proof evidence."""
    pair = build_twist_pair(spec)
    rep = validate_sycamore(pair)
    report = TwistReport(
        valid=rep.valid,
        reasons=rep.reasons(),
        classes={v: c.value for v, c in pair.classes.items()},
        magnitude_X=magnitude_routes(pair.X, order),
        magnitude_Y=magnitude_routes(pair.Y, order),
    )
    if isometry_check:
        report.isometric = are_isometric(pair.X, pair.Y)
    if homology_length is not None:
        report.homology = {
            o: magnitude_homology(pair.graph(o), homology_length).to_json() for o in "XY"
        }
    if not rep.valid:
        return report
    try:
        report.evidence = proof_evidence(pair, evidence_length, workers)
        report.euler_table = euler_table(report.evidence)
        report.bijection = t_bijection(pair, bijection_length)
    except (TwistInvariantError, TwistError, AssertionError) as exc:
        report.errors.append(f"{type(exc).__name__}: {exc}")
    return report
