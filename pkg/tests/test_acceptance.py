"""Acceptance criteria.

Each test prints one ``ACCEPTANCE <id> PASS|FAIL: ...`` line and then asserts
the same condition. All comparisons are exact integer equality; the only
tolerances are the runtime budgets below.
"""

import time

import pytest

import oracles
from magtwist.chains import chain_euler_coefficients, magnitude_by_path_count
from magtwist.fuzz import FuzzConfig, random_connected_extension, random_graph, run_fuzz, trial_rngs
from magtwist.graph import SubgraphEmbedding, are_isometric, cartesian_product, disjoint_union, is_projecting_decomposition
from magtwist.homology import magnitude_homology
from magtwist.io import FIXTURES, load_fixture, twist_to_json
from magtwist.series import magnitude_by_inversion
from magtwist.twist import TwistSpec, build_twist_pair, validate_sycamore
from magtwist.verify import euler_table, proof_evidence, t_bijection

# pinned parameters
CORPUS_SEED, CORPUS_SIZE, CORPUS_MAX_VERTICES = 0, 500, 7
ROUTE_LENGTH = 7
ROUTE_BUDGET_S = 300.0
FIXTURE_LENGTH = 10
EVIDENCE_LENGTH = 8
EVIDENCE_BUDGET_S = 600.0
BIJECTION_LENGTH = 6
PRODUCT_SEED, PRODUCT_PAIRS, PRODUCT_MAX_VERTICES, PRODUCT_LENGTH = 1, 50, 5, 8
DECOMP_SEED, DECOMPOSITIONS = 2, 50
WHITNEY_SEED, WHITNEY_TRIALS, WHITNEY_MAX_VERTICES, WHITNEY_LENGTH = 0, 8, 5, 8
HOMOLOGY_LENGTH = 4

# independently computed (Neumann-series oracle), frozen
FIG2_MAGNITUDE = [10, -30, 68, -158, 390, -1010, 2690, -7266, 19754, -53858, 147018]
FIG4_MAGNITUDE = [12, -38, 104, -336, 1206, -4488, 16804, -62856, 234856, -877200, 3276372]
WHITNEY_X = [8, -24, 58, -140, 344, -862, 2194, -5648, 14658, -38264, 100318]
WHITNEY_Y = [8, -24, 58, -142, 356, -908, 2342, -6086, 15900, -41704, 109712]


def report(capsys, cid, ok, detail):
    with capsys.disabled():
        print(f"\nACCEPTANCE {cid} {'PASS' if ok else 'FAIL'}: {detail}")
    return ok


@pytest.fixture(scope="module")
def corpus():
    graphs = []
    for rng in trial_rngs(CORPUS_SEED, CORPUS_SIZE):
        graphs.append(random_graph(rng, int(rng.integers(1, CORPUS_MAX_VERTICES + 1))))
    for name in FIXTURES:
        pair = build_twist_pair(load_fixture(name))
        graphs += [pair.X, pair.Y]
    return graphs


@pytest.fixture(scope="module")
def pairs():
    return {name: build_twist_pair(load_fixture(name)) for name in ("fig2", "fig4")}


@pytest.fixture(scope="module")
def evidence(pairs):
    out, seconds = {}, 0.0
    for name, pair in pairs.items():
        t = time.perf_counter()
        out[name] = proof_evidence(pair, EVIDENCE_LENGTH, workers=1)
        seconds += time.perf_counter() - t
    return out, seconds


def _all_evidence(evidence):
    return [e for ev in evidence[0].values() for e in ev.values()]


def test_criterion_1_triple_route(corpus, capsys):
    t = time.perf_counter()
    bad = []
    for i, g in enumerate(corpus):
        inv = magnitude_by_inversion(g, ROUTE_LENGTH).to_list()
        pc = magnitude_by_path_count(g, ROUTE_LENGTH).to_list()
        ch = chain_euler_coefficients(g, ROUTE_LENGTH)
        if not (inv == pc == ch):
            bad.append(i)
    seconds = time.perf_counter() - t
    ok = not bad and seconds < ROUTE_BUDGET_S
    detail = f"{len(corpus)} graphs, l <= {ROUTE_LENGTH}, {len(bad)} disagreements, {seconds:.1f}s (budget {ROUTE_BUDGET_S:.0f}s)"
    assert report(capsys, "1", ok, detail), bad[:5]


def test_criterion_2_fixture_magnitudes(pairs, capsys):
    rows = []
    ok = True
    for name, expected in (("fig2", FIG2_MAGNITUDE), ("fig4", FIG4_MAGNITUDE)):
        pair = pairs[name]
        mx = magnitude_by_inversion(pair.X, FIXTURE_LENGTH).to_list()
        my = magnitude_by_inversion(pair.Y, FIXTURE_LENGTH).to_list()
        noniso = not are_isometric(pair.X, pair.Y) and not oracles.isometric(pair.X, pair.Y)
        ok &= mx == my == expected and noniso
        rows.append(f"{name} Mag(X)=Mag(Y) {mx == my}, non-isometric {noniso}")
    assert report(capsys, "2", ok, f"l <= {FIXTURE_LENGTH}; " + "; ".join(rows))


def test_criterion_3a_closure(evidence, capsys):
    evs = _all_evidence(evidence)
    bad = sum(e.closure_violations for e in evs)
    gens = sum(sum(e.e_sizes.values()) for e in evs)
    detail = f"{gens} E_m generators over both fixtures and owners, l <= {EVIDENCE_LENGTH}, {bad} twistable faces"
    assert report(capsys, "3a", bad == 0, detail)


def test_criterion_3b_direction_summands_acyclic(evidence, capsys):
    """Each direction summand must be a complex with zero homology.

    The summands are not subcomplexes of ``E_m`` (faces can change direction),
    so they are taken with the boundary projected onto them. In some blocks
    that projection does not square to zero, and the criterion fails there.
    The line also reports the acyclicity that does hold: ``E_m`` itself and
    every graded piece of its first-sticky-start filtration.
    """
    evs = _all_evidence(evidence)
    leaks = sum(e.direction_leaks for e in evs)
    not_complex = sum(e.summand_blocks_not_complex for e in evs)
    literal = all(e.literal_summands_ok for e in evs)
    repaired = all(e.e_acyclic and e.pieces_acyclic and e.d_squared_failures == 0 for e in evs)
    first = next((f"{e.owner} m={e.m} l={e.ell}: {x}" for e in evs for x in e.examples if "squares to nonzero" in x), "none")
    detail = (
        f"literal direction summands acyclic: {literal} ({leaks} direction-changing faces, "
        f"{not_complex} summand blocks whose projected boundary has d^2 != 0, first: {first}); "
        f"E_m and all {sum(e.pieces for e in evs)} filtration pieces acyclic: {repaired}"
    )
    assert report(capsys, "3b", literal, detail)


def test_criterion_3c_euler_characteristics(evidence, capsys):
    rows = [r for ev in evidence[0].values() for r in euler_table(ev)]
    bad = [r for r in rows if not r["equal"]]
    assert report(capsys, "3c", not bad, f"{len(rows)} (fixture, m, l) cells, {len(bad)} mismatches")


def test_criterion_3d_homotopy(evidence, capsys):
    evs = _all_evidence(evidence)
    refined = sum(e.homotopy_failures + e.d_squared_failures for e in evs)
    literal = sum(e.literal_m_homotopy_failures + e.literal_m_not_complex for e in evs)
    ok = refined == 0 and literal == 0
    detail = (
        f"sd+ds=id on {sum(e.pieces for e in evs)} N/M filtration pieces ({refined} failures) and on "
        f"{sum(e.literal_m_pieces for e in evs)} M(i)/M(i-1) slices graded by k-L alone ({literal} failures)"
    )
    assert report(capsys, "3d", ok, detail)


def test_criterion_3_runtime(evidence, capsys):
    seconds = evidence[1]
    ok = seconds < EVIDENCE_BUDGET_S
    assert report(capsys, "3-runtime", ok, f"{seconds:.1f}s for l <= {EVIDENCE_LENGTH} (budget {EVIDENCE_BUDGET_S:.0f}s)")


def test_criterion_4_bijection(pairs, capsys):
    parts, ok = [], True
    for name, pair in pairs.items():
        tally = t_bijection(pair, BIJECTION_LENGTH)
        n = sum(tally.counts_X.values())
        ok &= tally.ok and n > 0
        parts.append(f"{name}: {n} twistable paths, {len(tally.failures)} failures")
    assert report(capsys, "4", ok, f"l <= {BIJECTION_LENGTH}; " + "; ".join(parts))


def _projecting_decompositions(n, seed, max_attempts=2000):
    out, attempts = [], 0
    rngs = iter(trial_rngs(seed, max_attempts))
    while len(out) < n and attempts < max_attempts:
        attempts += 1
        rng = next(rngs)
        K = random_graph(rng, int(rng.integers(1, 4)), "k", p=0.7)
        G = random_connected_extension(rng, K, int(rng.integers(1, 4)), "g", float(rng.uniform(0.1, 0.6)))
        H = random_connected_extension(rng, K, int(rng.integers(1, 4)), "h", float(rng.uniform(0.1, 0.6)))
        ident = {v: v for v in K.vertices}
        spec = TwistSpec(G, H, K, SubgraphEmbedding(K, G, ident), SubgraphEmbedding(K, H, ident), ident)
        pair = build_twist_pair(spec)
        X = pair.X
        g_side = SubgraphEmbedding.inclusion(X, [pair.g_label[v] for v in G.vertices])
        h_side = SubgraphEmbedding.inclusion(X, [pair.h_label_X[v] for v in H.vertices])
        if is_projecting_decomposition(X, g_side, h_side):
            out.append((X, G, H, K))
    return out, attempts


def test_criterion_5_formal_properties(corpus, capsys):
    N = PRODUCT_LENGTH
    mag = lambda g: magnitude_by_inversion(g, N)  # noqa: E731
    product_bad = union_bad = 0
    for rng in trial_rngs(PRODUCT_SEED, PRODUCT_PAIRS):
        x = random_graph(rng, int(rng.integers(1, PRODUCT_MAX_VERTICES + 1)), "x")
        y = random_graph(rng, int(rng.integers(1, PRODUCT_MAX_VERTICES + 1)), "y")
        p = cartesian_product(x, y)
        product_bad += mag(p) != mag(x) * mag(y) or magnitude_by_path_count(p, N) != mag(x) * mag(y)
        union_bad += mag(disjoint_union(x, y)) != mag(x) + mag(y)

    decomps, attempts = _projecting_decompositions(DECOMPOSITIONS, DECOMP_SEED)
    ie_bad = sum(mag(X) != mag(G) + mag(H) - mag(K) for X, G, H, K in decomps)

    low_bad = 0
    for g in corpus:
        c = magnitude_by_inversion(g, 1).to_list()
        low_bad += c != [len(g), -2 * len(g.edges)]

    ok = product_bad == 0 and union_bad == 0 and ie_bad == 0 and len(decomps) == DECOMPOSITIONS and low_bad == 0
    detail = (
        f"product {PRODUCT_PAIRS} pairs l <= {N}: {product_bad} bad; disjoint union: {union_bad} bad; "
        f"inclusion-exclusion {len(decomps)} decompositions ({attempts} drawn): {ie_bad} bad; "
        f"c0=|V|, c1=-2|E| on {len(corpus)} graphs: {low_bad} bad"
    )
    assert report(capsys, "5", ok, detail)


def test_criterion_6_whitney_negative_control(capsys):
    summary = run_fuzz(FuzzConfig("random-whitney-nonadjacent", trials=WHITNEY_TRIALS, seed=WHITNEY_SEED,
                                  max_vertices=WHITNEY_MAX_VERTICES, max_length=WHITNEY_LENGTH))
    shipped = load_fixture("whitney_nonadjacent")
    pair = build_twist_pair(shipped)
    mx = magnitude_by_inversion(pair.X, FIXTURE_LENGTH).to_list()
    my = magnitude_by_inversion(pair.Y, FIXTURE_LENGTH).to_list()
    regen = [w for w in summary.witnesses if w["trial"] == 7]
    ok = (
        bool(summary.witnesses)
        and mx == WHITNEY_X and my == WHITNEY_Y
        and mx == oracles.magnitude(pair.X, FIXTURE_LENGTH) and my == oracles.magnitude(pair.Y, FIXTURE_LENGTH)
        and bool(regen) and regen[0]["X"] == mx[:WHITNEY_LENGTH + 1]
        and not validate_sycamore(pair).valid
    )
    detail = (
        f"seed {WHITNEY_SEED}: {len(summary.witnesses)} witnesses in {summary.checked} twists; "
        f"shipped fixture differs first at q^3 ({mx[3]} vs {my[3]})"
    )
    assert report(capsys, "6", ok, detail)
    assert twist_to_json(shipped)["iota_G"] == {"k0": "g0", "k1": "g2"}


def test_criterion_7_structural_sanity(corpus, evidence, capsys):
    # magnitude_homology checks d^2 = 0 on every block and raises on MH above the diagonal
    failures = 0
    above = 0
    for g in corpus:
        try:
            mh = magnitude_homology(g, HOMOLOGY_LENGTH)
        except Exception:
            failures += 1
            continue
        above += sum(1 for (k, ell), h in mh.groups.items() if k > ell and not h.is_zero())
    evs = _all_evidence(evidence)
    q_e = sum(e.d_squared_failures for e in evs)
    ok = failures == 0 and above == 0 and q_e == 0
    detail = (
        f"ordinary complexes on {len(corpus)} graphs l <= {HOMOLOGY_LENGTH}: {failures} failures, "
        f"{above} nonzero MH_k^l with k > l; Q_m, E_m and filtration pieces l <= {EVIDENCE_LENGTH}: {q_e} d^2 failures"
    )
    assert report(capsys, "7", ok, detail)
