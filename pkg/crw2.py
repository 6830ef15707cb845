"""
Second-type correlated random walks: the (a, b, c, d) coin walk on the
cycle C_n and the uniform-coin walk U = B/d on regular graphs.
"""
import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from errors import CoinError, InapplicableError
from graph_core import DenseMatrix, Graph, adjacency_matrix, arc_adjacency_matrix, generate, semi_edge_matrices
from numerics import Spectrum, determinant, monic_quadratic_roots, symmetric_eigenvalues

logger = logging.getLogger(__name__)

COIN_TOL = 1e-14


@dataclass(frozen=True)
class CoinParams:
    """
    2x2 coin [[a, b], [c, d]] with a + c = b + d = 1.
    Forward arcs continue with d and reverse with b; backward arcs continue with a and reverse with c.
    """
    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        for name in ('a', 'b', 'c', 'd'):
            value = getattr(self, name)
            if not (-COIN_TOL <= value <= 1.0 + COIN_TOL):
                raise CoinError(f"coin entry {name} = {value} outside [0, 1]")
        if abs(self.a + self.c - 1.0) > COIN_TOL:
            raise CoinError(f"a + c must equal 1, got {self.a + self.c}")
        if abs(self.b + self.d - 1.0) > COIN_TOL:
            raise CoinError(f"b + d must equal 1, got {self.b + self.d}")

    @classmethod
    def parse(cls, text: str) -> 'CoinParams':
        """Read 'a,b,c,d'."""
        parts = [p.strip() for p in text.split(',')]
        if len(parts) != 4:
            raise CoinError(f"coin needs four comma-separated values a,b,c,d, got {text!r}")
        try:
            a, b, c, d = (float(p) for p in parts)
        except ValueError:
            raise CoinError(f"non-numeric coin value in {text!r}")
        return cls(a, b, c, d)

    @classmethod
    def half(cls) -> 'CoinParams':
        return cls(0.5, 0.5, 0.5, 0.5)

    @property
    def determinant(self) -> float:
        """ad - bc."""
        return self.a * self.d - self.b * self.c

    def as_tuple(self) -> Tuple[float, float, float, float]:
        return self.a, self.b, self.c, self.d


def _require_cycle_length(n: int):
    if n < 3:
        raise InapplicableError(f"cycle length must be >= 3, got {n}")


def cycle_permutation_matrix(n: int) -> DenseMatrix:
    """Q of the cyclic permutation (1 2 ... n): Q[j, j+1 mod n] = 1."""
    _require_cycle_length(n)
    return np.roll(np.eye(n), 1, axis=1)


def second_type_matrix(n: int, coin: CoinParams) -> DenseMatrix:
    """U = [[d Q^-1, c I], [b I, a Q]] on the 2n arcs of C_n (forward arcs first)."""
    Q = cycle_permutation_matrix(n)
    identity = np.eye(n)
    return np.block([
        [coin.d * Q.T, coin.c * identity],
        [coin.b * identity, coin.a * Q],
    ])


def second_type_matrix_arcwise(n: int, coin: CoinParams) -> DenseMatrix:
    """
    Same walk assembled arc by arc on generate('cycle', n=n): the column of
    arc f spreads over arcs e with o(e) = t(f) according to the coin.
    """
    graph = generate('cycle', n=n)
    follows = arc_adjacency_matrix(graph).T  # follows[e, f] = [t(f) = o(e)]
    U = np.zeros((2 * n, 2 * n))
    for f in range(2 * n):
        forward = f < n
        for e in np.flatnonzero(follows[:, f]):
            reverse = e == graph.inverse(f)
            if forward:
                U[e, f] = coin.b if reverse else coin.d
            else:
                U[e, f] = coin.c if reverse else coin.a
    return U


def weight_matrix(n: int, coin: CoinParams) -> DenseMatrix:
    """W(C_n) = d Q + a Q^-1: d on the forward cyclic diagonal, a on the backward one."""
    Q = cycle_permutation_matrix(n)
    return coin.d * Q + coin.a * Q.T


def circulant_weight_eigenvalues(n: int, coin: CoinParams) -> List[complex]:
    """mu_j = d e^{i theta_j} + a e^{-i theta_j}, theta_j = 2 pi j / n."""
    _require_cycle_length(n)
    thetas = 2.0 * np.pi * np.arange(n) / n
    return [complex(z) for z in coin.d * np.exp(1j * thetas) + coin.a * np.exp(-1j * thetas)]


def cycle_coin_charpoly_both_sides(n: int, coin: CoinParams, lam: complex) -> Tuple[complex, complex]:
    """
    left  = det(lambda I_2n - U)
    right = det((lambda^2 + (ad - bc)) I_n - lambda W(C_n))
    """
    U = second_type_matrix(n, coin)
    left = determinant(lam * np.eye(2 * n) - U)
    right = determinant((lam * lam + coin.determinant) * np.eye(n) - lam * weight_matrix(n, coin))
    return left, right


def cycle_coin_spectrum_closed(n: int, coin: CoinParams) -> Spectrum:
    """Both roots of lambda^2 - mu_j lambda + (ad - bc) for every circulant eigenvalue mu_j."""
    values: List[complex] = []
    for mu in circulant_weight_eigenvalues(n, coin):
        values.extend(monic_quadratic_roots(mu, coin.determinant))
    return Spectrum(tuple(values), 'closed_form', f'cycle_coin_closed_form:C{n}:{coin.as_tuple()}')


def cycle_half_coin_spectrum_closed(n: int) -> Spectrum:
    """{cos(2 pi j / n)} together with n zeros."""
    _require_cycle_length(n)
    values = [complex(np.cos(2.0 * np.pi * j / n)) for j in range(n)] + [0j] * n
    return Spectrum(tuple(values), 'closed_form', f'cycle_half_coin_closed_form:C{n}')


def _require_regular(graph: Graph) -> int:
    d = graph.regular_degree()
    if d is None:
        raise InapplicableError(f"{graph.label}: uniform CRW needs a regular graph")
    if d < 2:
        raise InapplicableError(f"{graph.label}: uniform CRW needs d >= 2, got d = {d}")
    return d


def uniform_crw_matrix(graph: Graph) -> DenseMatrix:
    """U = B / d, row-stochastic."""
    d = _require_regular(graph)
    return arc_adjacency_matrix(graph) / d


def uniform_crw_charpoly_both_sides(graph: Graph, lam: complex) -> Tuple[complex, complex]:
    """
    left  = det(lambda I_2m - B/d)
    right = lambda^(2m-n) det(lambda I_n - L^T K / d), where B = K L^T and A(G) = L^T K
    """
    d = _require_regular(graph)
    K, L = semi_edge_matrices(graph)
    left = determinant(lam * np.eye(2 * graph.m) - uniform_crw_matrix(graph))
    right = complex(lam) ** (2 * graph.m - graph.n) * determinant(lam * np.eye(graph.n) - L.T @ K / d)
    return left, right


def uniform_crw_spectrum_closed(graph: Graph) -> Spectrum:
    """{lambda_A / d} together with 2m - n zeros."""
    d = _require_regular(graph)
    values = [complex(lam_a / d) for lam_a in symmetric_eigenvalues(adjacency_matrix(graph))]
    values.extend([0j] * (2 * graph.m - graph.n))
    logger.debug(f"Uniform CRW closed form for {graph.label}: {graph.n} scaled adjacency values, "
                 f"{2 * graph.m - graph.n} zeros")
    return Spectrum(tuple(values), 'closed_form', f'uniform_crw_closed_form:{graph.label}')
