"""
Grover matrix of a graph and its spectral mapping from the simple random walk.
"""
import logging
from typing import Tuple

import numpy as np

from config import get_config
from errors import InapplicableError, PoleProximityError
from graph_core import (
    DenseMatrix,
    Graph,
    adjacency_matrix,
    arc_adjacency_matrix,
    degree_matrix,
    flip_matrix,
    srw_transition_matrix,
)
from numerics import DISCRIMINANT_SNAP, Spectrum, determinant, symmetric_eigenvalues

logger = logging.getLogger(__name__)


def grover_matrix(graph: Graph) -> DenseMatrix:
    """
    U[e, f] = 2/d_t(f) if t(f) = o(e) and f != e^{-1},
              2/d_t(f) - 1 if f = e^{-1}, 0 otherwise.
    """
    coin = 2.0 / np.array(graph.degrees, dtype=float)[graph.termini()]
    follows = arc_adjacency_matrix(graph).T  # follows[e, f] = [t(f) = o(e)]
    return follows * coin[None, :] - flip_matrix(graph)


def grover_column_sums(graph: Graph) -> np.ndarray:
    return grover_matrix(graph).sum(axis=0)


def grover_is_hadamard(graph: Graph, tol: float = 1e-12) -> bool:
    """True when every nonzero entry of U has absolute value 1/2."""
    U = grover_matrix(graph)
    nonzero = np.abs(U[np.abs(U) > tol])
    return bool(np.all(np.abs(nonzero - 0.5) <= tol))


def grover_charpoly_both_sides(graph: Graph, lam: complex) -> Tuple[complex, complex]:
    """
    left  = det(lambda I_2m - U)
    right = (lambda^2 - 1)^(m-n) det((lambda^2 + 1) I_n - 2 lambda T(G))
    """
    exponent = graph.m - graph.n
    base = lam * lam - 1.0
    if exponent != 0 and abs(base) < get_config()['pole_guard']:
        raise PoleProximityError("(lambda^2 - 1)^(m-n) at lambda = +-1", point=lam)

    U = grover_matrix(graph)
    left = determinant(lam * np.eye(2 * graph.m) - U)
    T = srw_transition_matrix(graph)
    right = complex(base) ** exponent * determinant((lam * lam + 1.0) * np.eye(graph.n) - 2.0 * lam * T)
    return left, right


def grover_charpoly_degree_form_both_sides(graph: Graph, lam: complex) -> Tuple[complex, complex]:
    """
    left  = det(lambda I_2m - U)
    right = (lambda^2 - 1)^(m-n) det((lambda^2 + 1) D - 2 lambda A(G)) / (d_1 ... d_n)
    """
    exponent = graph.m - graph.n
    base = lam * lam - 1.0
    if exponent != 0 and abs(base) < get_config()['pole_guard']:
        raise PoleProximityError("(lambda^2 - 1)^(m-n) at lambda = +-1", point=lam)

    left = determinant(lam * np.eye(2 * graph.m) - grover_matrix(graph))
    inner = (lam * lam + 1.0) * degree_matrix(graph) - 2.0 * lam * adjacency_matrix(graph)
    degree_product = float(np.prod(np.array(graph.degrees, dtype=float)))
    right = complex(base) ** exponent * determinant(inner) / degree_product
    return left, right


def srw_eigenvalues(graph: Graph) -> np.ndarray:
    """Spec(T(G)) from the symmetric similar matrix D^{-1/2} A D^{-1/2}."""
    scale = 1.0 / np.sqrt(np.array(graph.degrees, dtype=float))
    symmetric = scale[:, None] * adjacency_matrix(graph) * scale[None, :]
    return symmetric_eigenvalues(symmetric)


def grover_spectrum_closed(graph: Graph) -> Spectrum:
    """
    2n eigenvalues lambda_T +- i sqrt(1 - lambda_T^2) over Spec(T(G)),
    plus m - n copies each of +1 and -1. Trees are refused.
    """
    if graph.m < graph.n:
        raise InapplicableError(f"{graph.label}: closed-form Grover spectrum needs m >= n (tree has m = {graph.m}, n = {graph.n})")

    values = []
    for lam_t in srw_eigenvalues(graph):
        if abs(lam_t) > 1.0 + 1e-9:
            raise RuntimeError(f"internal error: SRW eigenvalue {lam_t} outside [-1, 1]")
        lam_t = float(np.clip(lam_t, -1.0, 1.0))
        gap = 1.0 - lam_t * lam_t
        root = np.sqrt(gap) if gap > DISCRIMINANT_SNAP else 0.0
        values.extend([complex(lam_t, root), complex(lam_t, -root)])

    extra = graph.m - graph.n
    values.extend([1.0 + 0j] * extra + [-1.0 + 0j] * extra)
    logger.debug(f"Closed-form Grover spectrum for {graph.label}: {len(values)} values")
    return Spectrum(tuple(values), 'closed_form', f'grover_closed_form:{graph.label}')
