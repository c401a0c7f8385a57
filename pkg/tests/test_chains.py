from collections import Counter

import pytest
from hypothesis import given, settings

import oracles
from magtwist.chains import (
    ChainBudgetError,
    SparseMatrix,
    chain_euler_coefficients,
    chain_slice,
    enumerate_paths,
    euler_characteristic,
    faces,
    induced_chain_map,
    iter_paths,
    magnitude_by_chains,
    magnitude_by_path_count,
    path_counts,
    path_labels,
)
from magtwist.graph import complete_graph, cycle_graph, path_graph
from magtwist.series import magnitude_by_inversion
from strategies import graphs


@given(graphs(max_vertices=5))
@settings(max_examples=40)
def test_paths_match_brute_force(g):
    for ell in range(4):
        ours = sorted(path_labels(g, p) for p in iter_paths(g, ell))
        assert ours == sorted(oracles.brute_paths(g, ell))


@given(graphs(max_vertices=6))
@settings(max_examples=40)
def test_path_counts_match_enumeration(g):
    counts = path_counts(g, 4)
    for ell in range(5):
        seen = Counter(len(p) - 1 for p in iter_paths(g, ell))
        for k in range(ell + 1):
            assert counts.get((k, ell), 0) == seen[k]


def test_faces_of_a_geodesic():
    g = path_graph(3)
    rows = g.distances.rows
    assert list(faces(rows, (0, 1, 2))) == [(-1, (0, 2))]
    # 0 -> 1 -> 0 backtracks, so 1 is not between its neighbours
    assert list(faces(rows, (0, 1, 0))) == []


@given(graphs(max_vertices=6))
@settings(max_examples=40)
def test_boundary_squares_to_zero(g):
    for ell in range(5):
        chain_slice(g, ell).check_d_squared()


@given(graphs(max_vertices=6))
@settings(max_examples=40)
def test_three_routes_agree(g):
    expected = oracles.magnitude(g, 5)
    assert magnitude_by_inversion(g, 5).to_list() == expected
    assert magnitude_by_path_count(g, 5).to_list() == expected
    assert magnitude_by_chains(g, 5).to_list() == expected


def test_chain_euler_matches_slices():
    g = cycle_graph(5)
    coeffs = chain_euler_coefficients(g, 5)
    assert coeffs == [euler_characteristic(chain_slice(g, ell)) for ell in range(6)]


def test_chain_budget():
    coeffs = chain_euler_coefficients(complete_graph(4), 6, budget=100)
    assert coeffs[0] == 4 and coeffs[-1] is None
    with pytest.raises(ChainBudgetError):
        magnitude_by_chains(complete_graph(4), 6, budget=100)


def test_sparse_matrix_roundtrip():
    rows = [[1, 0, -2], [0, 0, 3]]
    m = SparseMatrix.from_dense(rows)
    assert m.to_dense() == rows
    assert m.nnz() == 3
    ident = SparseMatrix.from_dense([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert (m @ ident).to_dense() == rows


def test_induced_chain_map_commutes_with_boundary():
    # folding the 4-cycle onto an edge is distance-decreasing
    x, y = cycle_graph(4), complete_graph(2)
    f = {"v0": "v0", "v1": "v1", "v2": "v0", "v3": "v1"}
    for ell in range(1, 4):
        for k in range(1, ell + 1):
            sx, sy = chain_slice(x, ell), chain_slice(y, ell)
            lhs = sy.boundary(k) @ induced_chain_map(f, x, y, ell, k)
            rhs = induced_chain_map(f, x, y, ell, k - 1) @ sx.boundary(k)
            assert lhs.to_dense() == rhs.to_dense()


def test_induced_chain_map_rejects_expanding_maps():
    with pytest.raises(ValueError):
        induced_chain_map({"v0": "v0", "v1": "v2", "v2": "v1"}, path_graph(3), path_graph(3), 1, 1)


def test_enumerate_paths_degrees():
    assert {k: len(v) for k, v in enumerate_paths(complete_graph(3), 2).items()} == {2: 12}
