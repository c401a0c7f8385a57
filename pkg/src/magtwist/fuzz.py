"""Seeded random-instance harness.

Each trial draws from its own generator, spawned from the master seed with
``numpy.random.SeedSequence``, so a trial can be replayed on its own.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .chains import ChainComplexError
from .graph import Graph, SubgraphEmbedding, is_finite
from .homology import magnitude_homology
from .io import dump_json, graph_to_json, twist_to_json
from .series import magnitude_by_inversion
from .twist import TwistSpec, build_twist_pair, isometries, validate_sycamore
from .verify import magnitude_routes, proof_evidence, t_bijection

MODES = ("random-graphs", "random-sycamore", "random-whitney-nonadjacent")


@dataclass
class FuzzConfig:
    mode: str
    trials: int = 100
    seed: int = 0
    max_vertices: int = 6
    max_length: int = 6
    evidence_length: int = 4
    max_attempts: int = 200  # rejection-sampling cap per sycamore trial
    out: Optional[str] = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown fuzz mode {self.mode!r}")
        if self.trials < 0 or self.max_vertices < 1 or self.max_length < 0:
            raise ValueError("trials, max_vertices and max_length must be non-negative (max_vertices >= 1)")


@dataclass
class FuzzSummary:
    mode: str
    seed: int
    trials: int
    checked: int = 0
    failures: list[dict] = field(default_factory=list)
    witnesses: list[dict] = field(default_factory=list)
    attempts: int = 0
    accepted: int = 0

    @property
    def acceptance_rate(self) -> Optional[float]:
        return self.accepted / self.attempts if self.attempts else None

    def to_json(self) -> dict:
        out = {
            "mode": self.mode,
            "seed": self.seed,
            "trials": self.trials,
            "checked": self.checked,
            "failures": self.failures,
        }
        if self.mode == "random-sycamore":
            out["attempts"] = self.attempts
            out["accepted"] = self.accepted
            out["acceptance_rate"] = self.acceptance_rate
        if self.mode == "random-whitney-nonadjacent":
            out["witnesses"] = self.witnesses
        return out


def trial_rngs(seed: int, trials: int) -> list[np.random.Generator]:
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(trials)]


def random_graph(rng: np.random.Generator, n: int, prefix: str = "v", p: Optional[float] = None) -> Graph:
    p = float(rng.uniform(0.2, 0.8)) if p is None else p
    verts = [f"{prefix}{i}" for i in range(n)]
    edges = [(verts[i], verts[j]) for i, j in itertools.combinations(range(n), 2) if rng.random() < p]
    return Graph.from_edges(verts, edges)


def random_connected_extension(
    rng: np.random.Generator, core: Graph, extra: int, prefix: str, p: float
) -> Graph:
    """Add ``extra`` vertices to ``core`` with random edges, never inside ``core``, keeping it connected."""
    verts = list(core.vertices) + [f"{prefix}{i}" for i in range(extra)]
    edges = {tuple(e) for e in core.sorted_edges()}
    n0 = len(core)
    for j in range(n0, len(verts)):
        # each new vertex attaches to some earlier vertex, so the result is connected when core is
        edges.add((verts[int(rng.integers(0, j))], verts[j]))
        for i in range(j):
            if rng.random() < p:
                edges.add((verts[i], verts[j]))
    return Graph.from_edges(verts, sorted(edges))


def _random_connected(rng, n, prefix):
    while True:
        g = random_graph(rng, n, prefix)
        if is_connected(g):
            return g


def is_connected(g: Graph) -> bool:
    return len(g) == 0 or all(is_finite(d) for d in g.distances.rows[0])


def random_sycamore_spec(rng: np.random.Generator, max_vertices: int) -> TwistSpec:
    """Random generalized twist around a small connected K; may or may not be sycamore."""
    nk = int(rng.integers(1, min(3, max_vertices) + 1))
    K = _random_connected(rng, nk, "k")
    isos = isometries(K)
    alpha = isos[int(rng.integers(0, len(isos)))]
    room = max(0, max_vertices - nk)
    G = random_connected_extension(rng, K, int(rng.integers(1, room + 1)) if room else 0, "g", float(rng.uniform(0.1, 0.6)))
    H = random_connected_extension(rng, K, int(rng.integers(1, room + 1)) if room else 0, "h", float(rng.uniform(0.1, 0.6)))
    ident = {v: v for v in K.vertices}
    return TwistSpec(G, H, K, SubgraphEmbedding(K, G, ident), SubgraphEmbedding(K, H, ident), alpha)


def random_whitney_nonadjacent(rng: np.random.Generator, max_vertices: int) -> Optional[TwistSpec]:
    """A Whitney twist of two connected graphs along two non-adjacent vertices, or ``None``."""
    from .twist import whitney_spec

    def side(prefix):
        n = int(rng.integers(3, max(3, max_vertices) + 1))
        g = _random_connected(rng, n, prefix)
        pairs = [(u, v) for u, v in itertools.combinations(g.vertices, 2) if not g.has_edge(u, v)]
        if not pairs:
            return None, None
        return g, pairs[int(rng.integers(0, len(pairs)))]

    G, gp = side("g")
    H, hp = side("h")
    if G is None or H is None:
        return None
    return whitney_spec(G, H, gp, hp)


def _dump(cfg: FuzzConfig, name: str, obj: dict) -> Optional[str]:
    if cfg.out is None:
        return None
    d = Path(cfg.out)
    d.mkdir(parents=True, exist_ok=True)
    path = d / name
    dump_json(obj, path)
    return str(path)


def run_fuzz(cfg: FuzzConfig) -> FuzzSummary:
    summary = FuzzSummary(cfg.mode, cfg.seed, cfg.trials)
    for t, rng in enumerate(trial_rngs(cfg.seed, cfg.trials)):
        if cfg.mode == "random-graphs":
            _graph_trial(cfg, summary, t, rng)
        elif cfg.mode == "random-sycamore":
            _sycamore_trial(cfg, summary, t, rng)
        else:
            _whitney_trial(cfg, summary, t, rng)
    return summary


def _graph_trial(cfg, summary, t, rng):
    g = random_graph(rng, int(rng.integers(1, cfg.max_vertices + 1)))
    problems = []
    routes = magnitude_routes(g, cfg.max_length)
    if not routes.agree:
        problems.append("magnitude routes disagree")
    try:
        mh = magnitude_homology(g, cfg.max_length)
        if any(mh.euler_characteristic(l) != routes.inversion[l] for l in range(cfg.max_length + 1)):
            problems.append("homology Euler characteristic differs from magnitude")
    except ChainComplexError as exc:
        problems.append(str(exc))
    summary.checked += 1
    if problems:
        summary.failures.append({"trial": t, "problems": problems,
                                 "reproducer": _dump(cfg, f"graph_trial{t}.json", graph_to_json(g))})


def _sycamore_trial(cfg, summary, t, rng):
    for _ in range(cfg.max_attempts):
        summary.attempts += 1
        spec = random_sycamore_spec(rng, cfg.max_vertices)
        pair = build_twist_pair(spec)
        if validate_sycamore(pair).valid:
            summary.accepted += 1
            break
    else:
        return
    problems = []
    mx = magnitude_by_inversion(pair.X, cfg.max_length)
    my = magnitude_by_inversion(pair.Y, cfg.max_length)
    if mx != my:
        problems.append(f"magnitudes differ: {mx.to_list()} vs {my.to_list()}")
    ev = proof_evidence(pair, cfg.evidence_length, workers=1)
    for (o, m, ell), e in sorted(ev.items()):
        if not e.ok:
            problems.append(f"evidence fails at owner={o} m={m} ell={ell}: {e.examples[:2]}")
        if o == "X" and e.q_euler != ev[("Y", m, ell)].q_euler:
            problems.append(f"Euler characteristics of Q differ at m={m} ell={ell}")
    tb = t_bijection(pair, cfg.evidence_length)
    if not tb.ok:
        problems.append(f"T bijection: {tb.failures[:2]}")
    summary.checked += 1
    if problems:
        summary.failures.append({"trial": t, "problems": problems[:10],
                                 "reproducer": _dump(cfg, f"sycamore_trial{t}.json", twist_to_json(spec))})


def _whitney_trial(cfg, summary, t, rng):
    spec = random_whitney_nonadjacent(rng, cfg.max_vertices)
    if spec is None:
        return
    pair = build_twist_pair(spec)
    mx = magnitude_by_inversion(pair.X, cfg.max_length)
    my = magnitude_by_inversion(pair.Y, cfg.max_length)
    summary.checked += 1
    if mx != my:
        first = next(i for i, (a, b) in enumerate(zip(mx.coeffs, my.coeffs)) if a != b)
        summary.witnesses.append({
            "trial": t,
            "first_difference": first,
            "X": mx.to_list(),
            "Y": my.to_list(),
            "reproducer": _dump(cfg, f"whitney_witness_trial{t}.json", twist_to_json(spec)),
        })
