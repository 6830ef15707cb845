"""
Tests for the second-type coin walk on cycles and the uniform CRW on regular graphs.
"""
import sys

import numpy as np
import pytest

from config import COIN_GRID, CYCLE_COIN_LENGTHS
from crw2 import (
    CoinParams,
    circulant_weight_eigenvalues,
    cycle_coin_charpoly_both_sides,
    cycle_coin_spectrum_closed,
    cycle_half_coin_spectrum_closed,
    cycle_permutation_matrix,
    second_type_matrix,
    second_type_matrix_arcwise,
    uniform_crw_charpoly_both_sides,
    uniform_crw_matrix,
    uniform_crw_spectrum_closed,
    weight_matrix,
)
from errors import CoinError, InapplicableError
from graph_core import adjacency_matrix, generate, semi_edge_matrices
from grover import srw_eigenvalues
from numerics import eigenvalues, multiset_match, relative_deviation

GRID = [(n, CoinParams(*coin)) for n in CYCLE_COIN_LENGTHS for coin in COIN_GRID]


def test_coin_validation():
    CoinParams(0.9, 0.2, 0.1, 0.8)
    with pytest.raises(CoinError, match="a \\+ c"):
        CoinParams(0.5, 0.5, 0.6, 0.5)
    with pytest.raises(CoinError, match="b \\+ d"):
        CoinParams(0.5, 0.4, 0.5, 0.5)
    with pytest.raises(CoinError, match="outside"):
        CoinParams(1.2, 0.5, -0.2, 0.5)


def test_coin_parse():
    coin = CoinParams.parse('0.7, 0.3, 0.3, 0.7')
    assert coin.as_tuple() == (0.7, 0.3, 0.3, 0.7)
    assert abs(coin.determinant - 0.4) < 1e-15
    with pytest.raises(CoinError):
        CoinParams.parse('0.5,0.5,0.5')
    with pytest.raises(CoinError):
        CoinParams.parse('a,b,c,d')


def test_cycle_permutation_matrix():
    Q = cycle_permutation_matrix(4)
    assert Q[0, 1] == 1.0 and Q[3, 0] == 1.0
    np.testing.assert_array_equal(Q @ Q.T, np.eye(4))
    with pytest.raises(InapplicableError):
        cycle_permutation_matrix(2)


@pytest.mark.parametrize('n, coin', GRID)
def test_second_type_is_column_stochastic(n, coin):
    U = second_type_matrix(n, coin)
    np.testing.assert_allclose(U.sum(axis=0), 1.0, atol=1e-12)
    np.testing.assert_array_equal(second_type_matrix_arcwise(n, coin), U)


def test_pure_rotation_spectrum():
    n = 5
    U = second_type_matrix(n, CoinParams(1.0, 0.0, 0.0, 1.0))
    roots = [np.exp(2j * np.pi * k / n) for k in range(n)] * 2
    assert multiset_match(eigenvalues(U), roots).passed
    assert multiset_match(cycle_coin_spectrum_closed(n, CoinParams(1.0, 0.0, 0.0, 1.0)), roots).passed


def test_half_coin_entries():
    U = second_type_matrix(3, CoinParams.half())
    assert set(np.unique(U)) <= {0.0, 0.5}


def test_weight_matrix():
    half = weight_matrix(6, CoinParams.half())
    np.testing.assert_array_equal(half, adjacency_matrix(generate('cycle', n=6)) / 2)
    np.testing.assert_array_equal(weight_matrix(5, CoinParams(1.0, 0.0, 0.0, 1.0)),
                                  adjacency_matrix(generate('cycle', n=5)))
    shift = CoinParams(0.0, 0.0, 1.0, 1.0)
    np.testing.assert_array_equal(weight_matrix(4, shift), cycle_permutation_matrix(4))
    np.testing.assert_allclose(circulant_weight_eigenvalues(4, shift), [1, 1j, -1, -1j], atol=1e-15)


def test_circulant_eigenvalues_match_weight_matrix():
    coin = CoinParams(0.9, 0.2, 0.1, 0.8)
    assert multiset_match(circulant_weight_eigenvalues(5, coin), eigenvalues(weight_matrix(5, coin))).passed


def test_charpoly_identity_at_zero():
    coin = CoinParams(0.7, 0.3, 0.3, 0.7)
    left, right = cycle_coin_charpoly_both_sides(5, coin, 0.0)
    assert abs(right - 0.4 ** 5) < 1e-14
    assert relative_deviation(left, right) < 1e-12


def test_charpoly_identity_with_eigenvalue_one():
    left, right = cycle_coin_charpoly_both_sides(4, CoinParams(1.0, 0.0, 0.0, 1.0), 1.0)
    assert abs(left) < 1e-12 and abs(right) < 1e-12


@pytest.mark.parametrize('n, coin', GRID)
def test_charpoly_identity(n, coin):
    for lam in (0.35, -0.6, 0.2 + 0.7j, -0.5j, 1.3 - 0.2j):
        left, right = cycle_coin_charpoly_both_sides(n, coin, lam)
        assert relative_deviation(left, right) <= 1e-9


@pytest.mark.parametrize('n, coin', GRID)
def test_closed_spectrum_matches_oracle(n, coin):
    closed = cycle_coin_spectrum_closed(n, coin)
    assert len(closed) == 2 * n
    assert multiset_match(closed, eigenvalues(second_type_matrix(n, coin)), tol=1e-8).passed


def test_symmetric_coin_on_triangle():
    closed = cycle_coin_spectrum_closed(3, CoinParams(0.7, 0.3, 0.3, 0.7))
    imag = np.sqrt(1.6 - 0.49) / 2
    expected = [1.0, 0.4] + [complex(-0.35, imag), complex(-0.35, -imag)] * 2
    assert multiset_match(closed, expected, tol=1e-12).passed


def test_every_coin_has_eigenvalue_one():
    for _, coin in GRID:
        values = cycle_coin_spectrum_closed(6, coin).as_array()
        assert np.min(np.abs(values - 1.0)) < 1e-12
        assert np.min(np.abs(values - (coin.a + coin.d - 1.0))) < 1e-12


def test_half_coin_on_c4():
    expected = [1.0, 0.0, -1.0, 0.0] + [0.0] * 4
    assert multiset_match(cycle_half_coin_spectrum_closed(4), expected, tol=1e-12).passed
    assert multiset_match(cycle_half_coin_spectrum_closed(4),
                          cycle_coin_spectrum_closed(4, CoinParams.half()), tol=1e-12).passed


@pytest.mark.parametrize('n', range(3, 9))
def test_half_coin_is_srw_plus_zeros(n):
    closed = cycle_half_coin_spectrum_closed(n)
    srw = list(srw_eigenvalues(generate('cycle', n=n))) + [0.0] * n
    assert multiset_match(closed, srw, tol=1e-8).passed
    assert multiset_match(closed, eigenvalues(second_type_matrix(n, CoinParams.half())), tol=1e-8).passed


def test_uniform_crw_matrix():
    U = uniform_crw_matrix(generate('cycle', n=3))
    assert set(np.unique(U)) <= {0.0, 0.5}
    np.testing.assert_allclose(U.sum(axis=1), 1.0)
    K4 = uniform_crw_matrix(generate('complete', n=4))
    np.testing.assert_allclose(np.unique(K4), [0.0, 1 / 3])
    np.testing.assert_allclose(uniform_crw_matrix(generate('petersen')).sum(axis=1), np.ones(30))


def test_uniform_crw_matches_semi_edge_product():
    for graph in (generate('complete', n=4), generate('petersen'), generate('cycle', n=5)):
        K, L = semi_edge_matrices(graph)
        d = graph.regular_degree()
        np.testing.assert_array_equal(uniform_crw_matrix(graph), K @ L.T / d)
        np.testing.assert_array_equal(adjacency_matrix(graph), L.T @ K)


def test_uniform_crw_refuses_irregular():
    with pytest.raises(InapplicableError):
        uniform_crw_matrix(generate('star', leaves=3))
    with pytest.raises(InapplicableError):
        uniform_crw_spectrum_closed(generate('random_connected', n=6, extra_edges=3, seed=7))


def test_uniform_identity():
    k4 = generate('complete', n=4)
    left, right = uniform_crw_charpoly_both_sides(k4, 0.5)
    assert relative_deviation(left, right) <= 1e-9
    left, right = uniform_crw_charpoly_both_sides(k4, 1.0)
    assert abs(left) < 1e-12 and abs(right) < 1e-12
    left, right = uniform_crw_charpoly_both_sides(k4, 0.0)
    assert abs(left) < 1e-12 and right == 0.0


@pytest.mark.parametrize('family, params, expected', [
    ('complete', {'n': 4}, [1.0] + [-1 / 3] * 3 + [0.0] * 8),
    ('petersen', {}, [1.0] + [1 / 3] * 5 + [-2 / 3] * 4 + [0.0] * 20),
])
def test_uniform_closed_spectrum(family, params, expected):
    graph = generate(family, **params)
    closed = uniform_crw_spectrum_closed(graph)
    assert len(closed) == 2 * graph.m
    assert multiset_match(closed, expected, tol=1e-12).passed
    assert multiset_match(closed, eigenvalues(uniform_crw_matrix(graph)), tol=1e-8).passed


def test_uniform_on_cycle_matches_half_coin():
    for n in range(3, 9):
        graph = generate('cycle', n=n)
        assert multiset_match(uniform_crw_spectrum_closed(graph), cycle_half_coin_spectrum_closed(n), tol=1e-12).passed


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, '-v']))
