"""
Correlated random walk induced by the Grover matrix: P = |U|^2 entrywise,
its general determinant identity, and closed-form spectra on regular and
semiregular bipartite graphs.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from config import get_config
from errors import InapplicableError, PoleProximityError, SignResolutionError
from graph_core import DenseMatrix, Graph, adjacency_matrix, flip_matrix
from grover import grover_matrix
from numerics import (
    Spectrum,
    determinant,
    monic_quadratic_roots,
    multiset_match,
    relative_deviation,
    snap_discriminant,
    symmetric_eigenvalues,
)

logger = logging.getLogger(__name__)

# Inner factors of the bipartite identity read (1 + u^2 (4/s-1))(1 + u^2 (4/r-1)),
# and the W-excess factor (1 + u^2 (4/r-1))^(n-m). The "minus" reading fails
# against det(I - uP) on K2,3; resolve_bipartite_sign keeps that check live.
BIPARTITE_INNER_SIGN = +1


def _degree_array(graph: Graph) -> np.ndarray:
    return np.array(graph.degrees, dtype=float)


def crw_matrix(graph: Graph) -> DenseMatrix:
    """P[e, f] = |U[e, f]|^2."""
    return np.abs(grover_matrix(graph)) ** 2


def crw_matrix_piecewise(graph: Graph) -> DenseMatrix:
    """
    P[e, f] = 4/d_t(f)^2 if t(f) = o(e) and f != e^{-1},
              (2/d_t(f) - 1)^2 if f = e^{-1}, 0 otherwise.
    """
    d_t = _degree_array(graph)[graph.termini()]
    follows = (graph.termini()[None, :] == graph.origins()[:, None]).astype(float)
    P = follows * (4.0 / d_t ** 2)[None, :]
    reverse = flip_matrix(graph).astype(bool)
    P[reverse] = np.broadcast_to((2.0 / d_t - 1.0) ** 2, P.shape)[reverse]
    return P


def r_matrix(graph: Graph) -> DenseMatrix:
    """
    R[e, f] = 4/d_o(f)^2 if o(e) = o(f) and f != e,
              (2/d_o(f) - 1)^2 if f = e, 0 otherwise.
    """
    d_o = _degree_array(graph)[graph.origins()]
    siblings = (graph.origins()[:, None] == graph.origins()[None, :]).astype(float)
    R = siblings * (4.0 / d_o ** 2)[None, :]
    np.fill_diagonal(R, (2.0 / d_o - 1.0) ** 2)
    return R


def crw_factorization_residuals(graph: Graph) -> Dict[str, float]:
    """
    Max entrywise deviations of the flip/R factorizations against P.
    With U[e, f] supported on t(f) = o(e), P = R J_0 and J_0 R = P^T.
    """
    P, R, J = crw_matrix(graph), r_matrix(graph), flip_matrix(graph)
    return {
        'R_J0_vs_P': float(np.max(np.abs(R @ J - P))),
        'J0_R_vs_PT': float(np.max(np.abs(J @ R - P.T))),
        'J0_R_vs_P': float(np.max(np.abs(J @ R - P))),
    }


def crw_vertex_matrices(graph: Graph, u: complex) -> Tuple[DenseMatrix, DenseMatrix]:
    """
    A_CRW(u)[x, y] = (4/d_x^2) / (1 - u^2 (4/d_x - 1)(4/d_y - 1)) on arcs,
    D_CRW(u)[x, x] = sum over o(e) = x of (4/d_x^2)(4/d_t(e) - 1) / (1 - u^2 (4/d_x - 1)(4/d_t(e) - 1)).
    """
    degrees = _degree_array(graph)
    origins, termini = graph.origins(), graph.termini()
    d_o, d_t = degrees[origins], degrees[termini]
    factors = 1.0 - u * u * (4.0 / d_o - 1.0) * (4.0 / d_t - 1.0)

    A = np.zeros((graph.n, graph.n), dtype=complex)
    D = np.zeros((graph.n, graph.n), dtype=complex)
    A[origins, termini] = (4.0 / d_o ** 2) / factors
    np.add.at(D, (origins, origins), (4.0 / d_o ** 2) * (4.0 / d_t - 1.0) / factors)
    return A, D


def crw_determinant_both_sides(graph: Graph, u: complex) -> Tuple[complex, complex]:
    """
    left  = det(I_2m - u P)
    right = prod_j (1 - u^2 (4/d_o(e_j) - 1)(4/d_t(e_j) - 1)) det(I_n - u A_CRW + u^2 D_CRW)
    """
    guard = get_config()['pole_guard']
    degrees = _degree_array(graph)
    factors = []
    for j, (x, y) in enumerate(graph.edges()):
        factor = 1.0 - u * u * (4.0 / degrees[x] - 1.0) * (4.0 / degrees[y] - 1.0)
        if abs(factor) <= guard:
            raise PoleProximityError("1 - u^2 (4/d_x - 1)(4/d_y - 1) vanishes", point=u, edge=j + 1)
        factors.append(factor)

    P = crw_matrix(graph)
    left = determinant(np.eye(2 * graph.m) - u * P)
    A, D = crw_vertex_matrices(graph, u)
    right = complex(np.prod(factors)) * determinant(np.eye(graph.n) - u * A + u * u * D)
    return left, right


def _require_regular(graph: Graph) -> int:
    d = graph.regular_degree()
    if d is None:
        raise InapplicableError(f"{graph.label}: graph is not regular")
    if d < 2:
        raise InapplicableError(f"{graph.label}: regular closed forms need d >= 2, got d = {d}")
    return d


def regular_crw_determinant_both_sides(graph: Graph, u: complex) -> Tuple[complex, complex]:
    """
    left  = det(I_2m - u P)
    right = (d^2 - u^2 (4-d)^2)^(m-n) / d^(2m) * det(d (d + (4-d) u^2) I_n - 4u A(G))
    """
    d = _require_regular(graph)
    exponent = graph.m - graph.n
    base = d * d - u * u * (4 - d) ** 2
    if exponent != 0 and abs(base) <= get_config()['pole_guard']:
        raise PoleProximityError("d^2 - u^2 (4-d)^2 vanishes", point=u)

    left = determinant(np.eye(2 * graph.m) - u * crw_matrix(graph))
    inner = d * (d + (4 - d) * u * u) * np.eye(graph.n) - 4.0 * u * adjacency_matrix(graph)
    right = complex(base) ** exponent / float(d) ** (2 * graph.m) * determinant(inner)
    return left, right


def regular_crw_charpoly_both_sides(graph: Graph, lam: complex) -> Tuple[complex, complex]:
    """
    left  = det(lambda I_2m - P)
    right = (d^2 lambda^2 - (4-d)^2)^(m-n) / d^(2m) * det(d (d lambda^2 + 4 - d) I_n - 4 lambda A(G))
    """
    d = _require_regular(graph)
    exponent = graph.m - graph.n
    base = d * d * lam * lam - (4 - d) ** 2
    if exponent != 0 and abs(base) <= get_config()['pole_guard']:
        raise PoleProximityError("d^2 lambda^2 - (4-d)^2 vanishes", point=lam)

    left = determinant(lam * np.eye(2 * graph.m) - crw_matrix(graph))
    inner = d * (d * lam * lam + 4 - d) * np.eye(graph.n) - 4.0 * lam * adjacency_matrix(graph)
    right = complex(base) ** exponent / float(d) ** (2 * graph.m) * determinant(inner)
    return left, right


def regular_crw_spectral_mapping_both_sides(graph: Graph, lam: complex) -> Tuple[complex, complex]:
    """
    Spectral mapping form of the regular characteristic polynomial, alpha = 4/d - 1:
    left  = det(lambda I_2m - P)
    right = (lambda^2 - alpha^2)^(m-n) lambda^n prod_{lambda_A} (lambda + alpha / lambda - 4 lambda_A / d^2)
    """
    d = _require_regular(graph)
    guard = get_config()['pole_guard']
    if abs(lam) <= guard:
        raise PoleProximityError("alpha / lambda at lambda = 0", point=lam)
    alpha = 4.0 / d - 1.0
    exponent = graph.m - graph.n
    base = lam * lam - alpha * alpha
    if exponent != 0 and abs(base) <= guard:
        raise PoleProximityError("lambda^2 - (4/d - 1)^2 vanishes", point=lam)

    left = determinant(lam * np.eye(2 * graph.m) - crw_matrix(graph))
    shifted = lam + alpha / lam
    mapped = [shifted - 4.0 * lam_a / d ** 2 for lam_a in symmetric_eigenvalues(adjacency_matrix(graph))]
    right = complex(base) ** exponent * complex(lam) ** graph.n * complex(np.prod(mapped))
    return left, right


def regular_crw_spectrum_closed(graph: Graph) -> Spectrum:
    """
    2n eigenvalues (2 lambda_A +- sqrt(4 lambda_A^2 - d^3 (4-d))) / d^2 over Spec(A),
    and +-(4-d)/d with multiplicity m - n each.
    """
    d = _require_regular(graph)
    if graph.m < graph.n:
        raise InapplicableError(f"{graph.label}: closed form needs m >= n")

    values: List[complex] = []
    for lam_a in symmetric_eigenvalues(adjacency_matrix(graph)):
        values.extend(monic_quadratic_roots(4.0 * lam_a / d ** 2, (4.0 - d) / d))
    extra = graph.m - graph.n
    values.extend([complex((4.0 - d) / d)] * extra + [complex(-(4.0 - d) / d)] * extra)
    return Spectrum(tuple(values), 'closed_form', f'regular_crw_closed_form:{graph.label}')


@dataclass(frozen=True)
class BipartiteProfile:
    """(r, s)-semiregular bipartition with |V| = m_part <= n_part = |W|."""
    graph: Graph
    part_V: Tuple[int, ...]
    part_W: Tuple[int, ...]
    r: int
    s: int
    lambda_js: Tuple[float, ...]

    @property
    def m_part(self) -> int:
        return len(self.part_V)

    @property
    def n_part(self) -> int:
        return len(self.part_W)

    @property
    def epsilon(self) -> int:
        return self.graph.m

    @property
    def nu(self) -> int:
        return self.graph.n


def bipartite_profile(graph: Graph) -> BipartiteProfile:
    """Two-colour the graph, check semiregularity, and read lambda_1..lambda_m off Spec(A)."""
    parts = graph.bipartition()
    if parts is None:
        raise InapplicableError(f"{graph.label}: graph is not bipartite")
    V, W = parts
    if len(V) > len(W):
        V, W = W, V

    degree_V = {graph.degrees[v] for v in V}
    degree_W = {graph.degrees[w] for w in W}
    if len(degree_V) != 1 or len(degree_W) != 1:
        raise InapplicableError(f"{graph.label}: bipartite but not semiregular")
    r, s = degree_V.pop(), degree_W.pop()

    spectrum = symmetric_eigenvalues(adjacency_matrix(graph))[::-1]
    top = spectrum[:len(V)]
    if np.any(top < -1e-8):
        raise InapplicableError(f"{graph.label}: adjacency spectrum is not symmetric about 0")
    lambda_js = tuple(float(max(x, 0.0)) for x in top)

    rebuilt = list(lambda_js) + [-x for x in lambda_js] + [0.0] * (graph.n - 2 * len(V))
    match = multiset_match(rebuilt, spectrum, tol=1e-8)
    if not match.passed:
        raise InapplicableError(
            f"{graph.label}: +-lambda_j symmetry validation failed (max distance {match.max_distance:.3e})")

    return BipartiteProfile(graph=graph, part_V=V, part_W=W, r=r, s=s, lambda_js=lambda_js)


def bipartite_crw_quartic_family(profile: BipartiteProfile, sign: int = BIPARTITE_INNER_SIGN) -> List[complex]:
    """The 4m roots of the quartic, four per lambda_j."""
    alpha_r, alpha_s = 4.0 / profile.r - 1.0, 4.0 / profile.s - 1.0
    rs2 = float(profile.r * profile.s) ** 2
    values: List[complex] = []
    for lam_j in profile.lambda_js:
        # (x + sign alpha_s)(x + sign alpha_r) - 16 lam_j^2 x / (r s)^2 with x = lambda^2
        p = -sign * (alpha_r + alpha_s) + 16.0 * lam_j ** 2 / rs2
        for x in monic_quadratic_roots(p, alpha_r * alpha_s):
            root = np.sqrt(complex(x))
            values.extend([complex(root), complex(-root)])
    return values


def bipartite_crw_spectrum_closed(profile: BipartiteProfile, allow_deficient: bool = False,
                                  sign: int = BIPARTITE_INNER_SIGN) -> Spectrum:
    """
    (1) 4m roots of lambda^4 + (4/r + 4/s - 2 - 16 lambda_j^2/(r^2 s^2)) lambda^2 + (4/r-1)(4/s-1);
    (2) 2(n-m) values +-i sqrt(4/r - 1);
    (3) 2(epsilon - nu) values +-sqrt((4/r-1)(4/s-1)).
    """
    deficit = profile.epsilon - profile.nu
    if deficit < 0 and not allow_deficient:
        raise InapplicableError(f"{profile.graph.label}: epsilon < nu, closed form rejected")

    alpha_r, alpha_s = 4.0 / profile.r - 1.0, 4.0 / profile.s - 1.0
    values = bipartite_crw_quartic_family(profile, sign)

    root = np.sqrt(complex(-sign * alpha_r))
    values.extend([complex(root), complex(-root)] * (profile.n_part - profile.m_part))

    root = np.sqrt(complex(alpha_r * alpha_s))
    if deficit >= 0:
        values.extend([complex(root), complex(-root)] * deficit)
    else:
        # negative exponent: nu - epsilon copies of +-root cancel out of families (1) and (2)
        for target in [complex(root), complex(-root)] * (-deficit):
            distances = [abs(z - target) for z in values]
            nearest = int(np.argmin(distances))
            if distances[nearest] > 1e-8:
                raise InapplicableError(
                    f"{profile.graph.label}: cannot cancel {target} for epsilon < nu")
            values.pop(nearest)
    return Spectrum(tuple(values), 'closed_form', f'bipartite_crw_closed_form:{profile.graph.label}')


def bipartite_crw_quartic_roots(profile: BipartiteProfile) -> List[complex]:
    """
    Family (1) through the nested radical
    +-sqrt((K +- sqrt(K^2 - 4 r^3 s^3 (4-r)(4-s))) / (2 r^2 s^2)),
    K = 2 r^2 s^2 - 4 r s^2 - 4 r^2 s + 16 lambda_j^2.
    """
    r, s = float(profile.r), float(profile.s)
    values: List[complex] = []
    for lam_j in profile.lambda_js:
        K = 2 * r * r * s * s - 4 * r * s * s - 4 * r * r * s + 16 * lam_j ** 2
        product = 4 * r ** 3 * s ** 3 * (4 - r) * (4 - s)
        inner = np.sqrt(snap_discriminant(K * K - product, max(K * K, abs(product))))
        for branch in (K + inner, K - inner):
            root = np.sqrt(complex(branch / (2 * r * r * s * s)))
            values.extend([complex(root), complex(-root)])
    return values


def _bipartite_factors(profile: BipartiteProfile, z: complex, sign: int) -> Tuple[complex, complex, complex]:
    alpha_r, alpha_s = 4.0 / profile.r - 1.0, 4.0 / profile.s - 1.0
    return (1.0 + sign * z * alpha_s), (1.0 + sign * z * alpha_r), alpha_r * alpha_s


def bipartite_crw_determinant_both_sides(profile: BipartiteProfile, u: complex,
                                         sign: int = BIPARTITE_INNER_SIGN) -> Tuple[complex, complex]:
    """
    left  = det(I_2eps - u P)
    right = (1 - u^2 (4/r-1)(4/s-1))^(eps-nu) (1 + sign u^2 (4/r-1))^(n-m)
            * prod_j ((1 + sign u^2 (4/s-1))(1 + sign u^2 (4/r-1)) - 16 lambda_j^2 u^2 / (r^2 s^2))
    """
    deficit = profile.epsilon - profile.nu
    inner_s, inner_r, alpha_rs = _bipartite_factors(profile, u * u, sign)
    base = 1.0 - u * u * alpha_rs
    guard = get_config()['pole_guard']
    if deficit < 0 and abs(base) <= guard:
        raise PoleProximityError("1 - u^2 (4/r-1)(4/s-1) with epsilon < nu", point=u)

    graph = profile.graph
    left = determinant(np.eye(2 * graph.m) - u * crw_matrix(graph))
    rs2 = float(profile.r * profile.s) ** 2
    right = complex(base) ** deficit * complex(inner_r) ** (profile.n_part - profile.m_part)
    for lam_j in profile.lambda_js:
        right *= inner_s * inner_r - 16.0 * lam_j ** 2 * u * u / rs2
    return left, right


def bipartite_crw_charpoly_both_sides(profile: BipartiteProfile, lam: complex,
                                      sign: int = BIPARTITE_INNER_SIGN) -> Tuple[complex, complex]:
    """
    left  = det(lambda I - P)
    right = (lambda^2 - (4/r-1)(4/s-1))^(eps-nu) (lambda^2 + sign (4/r-1))^(n-m)
            * prod_j ((lambda^2 + sign (4/s-1))(lambda^2 + sign (4/r-1)) - 16 lambda_j^2 lambda^2 / (r^2 s^2))
    """
    alpha_r, alpha_s = 4.0 / profile.r - 1.0, 4.0 / profile.s - 1.0
    deficit = profile.epsilon - profile.nu
    z = lam * lam
    base = z - alpha_r * alpha_s
    if deficit < 0 and abs(base) <= get_config()['pole_guard']:
        raise PoleProximityError("lambda^2 - (4/r-1)(4/s-1) with epsilon < nu", point=lam)

    graph = profile.graph
    left = determinant(lam * np.eye(2 * graph.m) - crw_matrix(graph))
    rs2 = float(profile.r * profile.s) ** 2
    right = complex(base) ** deficit * complex(z + sign * alpha_r) ** (profile.n_part - profile.m_part)
    for lam_j in profile.lambda_js:
        right *= (z + sign * alpha_s) * (z + sign * alpha_r) - 16.0 * lam_j ** 2 * z / rs2
    return left, right


@dataclass
class SignResolution:
    """Outcome of testing both bipartite sign readings against det(I - uP)."""
    resolved: str
    max_dev_plus: float
    max_dev_minus: float
    samples: int


def resolve_bipartite_sign(profile: BipartiteProfile, samples: Sequence[complex],
                           tol: float = None) -> SignResolution:
    """Exactly one of the two readings must match the arc determinant at every sample."""
    tol = get_config()['tol_identity'] if tol is None else tol
    deviations = {}
    for name, sign in (('plus', +1), ('minus', -1)):
        worst = 0.0
        for u in samples:
            left, right = bipartite_crw_determinant_both_sides(profile, u, sign=sign)
            worst = max(worst, relative_deviation(left, right))
        deviations[name] = worst

    fits = [name for name, worst in deviations.items() if worst <= tol]
    logger.info(f"Bipartite sign check on {profile.graph.label}: plus {deviations['plus']:.3e}, "
                f"minus {deviations['minus']:.3e}")
    if len(fits) != 1:
        raise SignResolutionError(
            f"{profile.graph.label}: {len(fits)} sign conventions fit "
            f"(plus {deviations['plus']:.3e}, minus {deviations['minus']:.3e})")
    return SignResolution(fits[0], deviations['plus'], deviations['minus'], len(samples))
