"""
Weighted zeta machinery on arcs: the matrix M(theta), its 2m x 2m
determinant, the reduced n x n determinant, and the Ihara special case in
both its edge-matrix and Bass forms.
"""
import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from config import get_config
from errors import PoleProximityError
from graph_core import (
    DenseMatrix,
    Graph,
    adjacency_matrix,
    arc_adjacency_matrix,
    degree_matrix,
    flip_matrix,
)
from numerics import determinant

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ArcWeighting:
    """Per-arc values tau(e), mu(e) in canonical arc order."""
    tau: Tuple[complex, ...]
    mu: Tuple[complex, ...]
    label: str = ''

    def __post_init__(self):
        if len(self.tau) != len(self.mu):
            raise ValueError(f"tau has {len(self.tau)} arcs but mu has {len(self.mu)}")

    def check_bound(self, graph: Graph):
        if len(self.tau) != 2 * graph.m:
            raise ValueError(f"weighting covers {len(self.tau)} arcs, graph {graph.label} has {2 * graph.m}")

    def mu_products(self, graph: Graph) -> np.ndarray:
        """mu(e_j) * mu(e_j^{-1}) for the m forward arcs."""
        mu = np.array(self.mu, dtype=complex)
        return mu[:graph.m] * mu[graph.m:]


def ihara_weighting(graph: Graph) -> ArcWeighting:
    ones = tuple(1.0 + 0j for _ in range(2 * graph.m))
    return ArcWeighting(ones, ones, label='ihara')


def random_weighting(graph: Graph, seed: int) -> ArcWeighting:
    """tau, mu with real and imaginary parts uniform in [-1, 1]."""
    rng = np.random.default_rng(seed)
    size = 2 * graph.m
    tau = rng.uniform(-1.0, 1.0, size) + 1j * rng.uniform(-1.0, 1.0, size)
    mu = rng.uniform(-1.0, 1.0, size) + 1j * rng.uniform(-1.0, 1.0, size)
    return ArcWeighting(tuple(complex(z) for z in tau), tuple(complex(z) for z in mu), label=f'random(seed={seed})')


def crw_weighting(graph: Graph) -> ArcWeighting:
    """tau(e) = 4/d_o(e)^2, mu(e) = 4/d_o(e) - 1; M(theta) is then the transpose of the CRW matrix."""
    degrees = np.array(graph.degrees, dtype=float)[graph.origins()]
    tau = 4.0 / degrees ** 2
    mu = 4.0 / degrees - 1.0
    return ArcWeighting(tuple(complex(z) for z in tau), tuple(complex(z) for z in mu), label='crw-induced')


def theta_matrix(graph: Graph, weighting: ArcWeighting) -> DenseMatrix:
    """M(theta)[e, f] = tau(f) [t(e) = o(f)] - mu(f) [f = e^{-1}]."""
    weighting.check_bound(graph)
    tau = np.array(weighting.tau, dtype=complex)
    mu = np.array(weighting.mu, dtype=complex)
    return arc_adjacency_matrix(graph) * tau[None, :] - flip_matrix(graph) * mu[None, :]


def zeta_recip_direct(graph: Graph, weighting: ArcWeighting, u: complex) -> complex:
    """det(I_2m - u M(theta))."""
    M = theta_matrix(graph, weighting)
    return determinant(np.eye(M.shape[0]) - u * M)


def _edge_factors(graph: Graph, weighting: ArcWeighting, u: complex) -> np.ndarray:
    """1 - u^2 mu(e_j) mu(e_j^{-1}) per edge, pole-guarded."""
    guard = get_config()['pole_guard']
    factors = 1.0 - u * u * weighting.mu_products(graph)
    for j, factor in enumerate(factors):
        if abs(factor) <= guard:
            raise PoleProximityError("1 - u^2 mu(e) mu(e^-1) vanishes", point=u, edge=j + 1)
    return factors


def weighted_vertex_matrices(graph: Graph, weighting: ArcWeighting, u: complex) -> Tuple[DenseMatrix, DenseMatrix]:
    """
    A_G(theta) and D_G(theta):
      a_uv = tau(e) / (1 - u^2 mu(e) mu(e^-1)) for e = (u, v),
      d_uu = sum over o(e) = u of tau(e) mu(e^-1) / (1 - u^2 mu(e) mu(e^-1)).
    """
    weighting.check_bound(graph)
    factors = _edge_factors(graph, weighting, u)
    per_arc = np.concatenate([factors, factors])
    tau = np.array(weighting.tau, dtype=complex)
    mu = np.array(weighting.mu, dtype=complex)
    mu_inverse = np.roll(mu, graph.m)

    A = np.zeros((graph.n, graph.n), dtype=complex)
    D = np.zeros((graph.n, graph.n), dtype=complex)
    origins, termini = graph.origins(), graph.termini()
    A[origins, termini] = tau / per_arc
    np.add.at(D, (origins, origins), tau * mu_inverse / per_arc)
    return A, D


def zeta_recip_reduced(graph: Graph, weighting: ArcWeighting, u: complex) -> complex:
    """prod_j (1 - u^2 mu(e_j) mu(e_j^-1)) * det(I_n - u A_G(theta) + u^2 D_G(theta))."""
    factors = _edge_factors(graph, weighting, u)
    A, D = weighted_vertex_matrices(graph, weighting, u)
    return complex(np.prod(factors)) * determinant(np.eye(graph.n) - u * A + u * u * D)


def ihara_recip_edge(graph: Graph, u: complex) -> complex:
    """Reciprocal Ihara zeta from the edge matrix: det(I_2m - u (B - J_0))."""
    edge = arc_adjacency_matrix(graph) - flip_matrix(graph)
    return determinant(np.eye(2 * graph.m) - u * edge)


def ihara_recip_bass(graph: Graph, u: complex) -> complex:
    """Bass form: (1 - u^2)^(m-n) det(I_n - u A + u^2 (D - I_n))."""
    exponent = graph.m - graph.n
    base = 1.0 - u * u
    if exponent < 0 and abs(base) <= get_config()['pole_guard']:
        raise PoleProximityError("(1 - u^2)^(m-n) with m < n", point=u)
    identity = np.eye(graph.n)
    inner = identity - u * adjacency_matrix(graph) + u * u * (degree_matrix(graph) - identity)
    return complex(base) ** exponent * determinant(inner)
