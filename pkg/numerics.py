"""
Dense complex linear algebra: determinants, the eigenvalue oracle,
characteristic polynomials and tolerant multiset comparison of spectra.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.sparse.csgraph import connected_components

from config import get_config
from errors import CardinalityError, ConvergenceError, InapplicableError

logger = logging.getLogger(__name__)

PROVENANCES = ('closed_form', 'numeric_oracle')


@dataclass(frozen=True)
class Spectrum:
    """Multiset of eigenvalues with where it came from."""
    values: Tuple[complex, ...]
    provenance: str
    source: str = ''

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance: {self.provenance}")

    def __len__(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=complex)

    def sorted_values(self) -> List[complex]:
        return sorted(self.values, key=lambda z: (z.real, z.imag))


@dataclass(frozen=True)
class Polynomial:
    """Polynomial with coefficients in ascending degree."""
    coefficients: Tuple[complex, ...]

    @classmethod
    def trimmed(cls, coefficients: Sequence[complex], tol: float = 1e-14) -> 'Polynomial':
        """Drop leading coefficients with |c| <= tol * max|c| (at least the constant term stays)."""
        coeffs = [complex(c) for c in coefficients]
        scale = max((abs(c) for c in coeffs), default=0.0)
        while len(coeffs) > 1 and abs(coeffs[-1]) <= tol * scale:
            coeffs.pop()
        return cls(tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x: complex) -> complex:
        return complex(np.polynomial.polynomial.polyval(x, np.array(self.coefficients)))

    def norm(self) -> float:
        return float(np.linalg.norm(np.array(self.coefficients)))


@dataclass
class MatchReport:
    """Pairing of two spectra and its worst pair distance."""
    pairs: List[Tuple[complex, complex, float]]
    max_distance: float
    passed: bool
    tolerance: float
    counts: Tuple[int, int] = field(default=(0, 0))


def _square(M: np.ndarray, name: str = 'matrix') -> np.ndarray:
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"{name} must be square, got shape {M.shape}")
    return M


def determinant(M: np.ndarray) -> complex:
    """det(M) via LAPACK LU with partial pivoting."""
    M = _square(M)
    if M.shape[0] == 0:
        return 1.0 + 0.0j
    return complex(np.linalg.det(M))


def relative_deviation(lhs: complex, rhs: complex) -> float:
    """|lhs - rhs| / max(|lhs|, |rhs|, 1e-30)."""
    return float(abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-30))


def _average_clusters(values: np.ndarray, radius: float,
                       accept: Optional[Callable[[complex], bool]] = None) -> np.ndarray:
    """
    Replace each single-linkage cluster of eigenvalues by its mean. With
    `accept`, a cluster whose mean is rejected keeps its individual values.
    """
    if values.size < 2:
        return values
    close = np.abs(values[:, None] - values[None, :]) <= radius
    count, labels = connected_components(close.astype(float), directed=False)
    if count == values.size:
        return values
    averaged = values.copy()
    for label in range(count):
        members = labels == label
        if members.sum() < 2:
            continue
        mean = values[members].mean()
        if accept is None or accept(mean):
            averaged[members] = mean
    return averaged


def eigenvalues(M: np.ndarray, tol: Optional[float] = None, source: str = '') -> Spectrum:
    """
    All eigenvalues of a square matrix with multiplicity.

    Hessenberg reduction + shifted QR (LAPACK geev). Numerically split
    clusters are averaged, then every value must satisfy the residual
    contract sigma_min(M - lambda I) <= tol * ||M||_2.
    """
    config = get_config()
    tol = config['eigen_residual_tol'] if tol is None else tol
    M = _square(M).astype(complex)
    size = M.shape[0]
    if size > config['eigen_dimension_cap']:
        raise InapplicableError(f"dimension {size} exceeds eigen_dimension_cap {config['eigen_dimension_cap']}")
    if size == 0:
        return Spectrum((), 'numeric_oracle', source)

    try:
        values, vectors = np.linalg.eig(M)
    except np.linalg.LinAlgError as e:
        raise ConvergenceError(f"eigenvalue iteration did not converge for {source or 'matrix'}: {e}")

    scale = float(np.linalg.norm(M, 2))
    if scale == 0.0:
        return Spectrum(tuple(complex(0.0) for _ in range(size)), 'numeric_oracle', source)

    identity = np.eye(size)

    def mean_is_eigenvalue(lam: complex) -> bool:
        return np.linalg.svd(M - lam * identity, compute_uv=False)[-1] <= tol * scale

    values = _average_clusters(values, config['eigen_cluster_tol'] * max(1.0, scale), mean_is_eigenvalue)

    for i, lam in enumerate(values):
        v = vectors[:, i] / np.linalg.norm(vectors[:, i])
        residual = np.linalg.norm(M @ v - lam * v)
        if residual > tol * scale:
            residual = np.linalg.svd(M - lam * identity, compute_uv=False)[-1]
        if residual > tol * scale:
            raise ConvergenceError(
                f"residual contract violated for {source or 'matrix'}: "
                f"eigenvalue {lam} has residual {residual:.3e} > {tol * scale:.3e}")

    logger.debug(f"Oracle spectrum for {source or 'matrix'}: {size} eigenvalues, ||M||_2 = {scale:.4g}")
    return Spectrum(tuple(complex(z) for z in values), 'numeric_oracle', source)


def symmetric_eigenvalues(M: np.ndarray) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, ascending."""
    return np.linalg.eigvalsh(_square(M))


def char_poly(M: np.ndarray) -> Polynomial:
    """Coefficients of det(lambda I - M) by the Faddeev-LeVerrier recursion."""
    M = _square(M).astype(complex)
    size = M.shape[0]
    coeffs = np.zeros(size + 1, dtype=complex)
    coeffs[size] = 1.0
    identity = np.eye(size, dtype=complex)
    Mk = np.zeros_like(M)
    for k in range(1, size + 1):
        Mk = M @ Mk + coeffs[size - k + 1] * identity
        coeffs[size - k] = -np.trace(M @ Mk) / k
    return Polynomial(tuple(complex(c) for c in coeffs))


DISCRIMINANT_SNAP = 1e-14


def snap_discriminant(discriminant: complex, scale: float) -> complex:
    """
    Zero out a discriminant within rounding of zero relative to `scale`, so
    double roots come back equal instead of split by ~sqrt(machine eps).
    """
    discriminant = complex(discriminant)
    if abs(discriminant) <= DISCRIMINANT_SNAP * max(1.0, scale):
        return 0j
    return discriminant


def monic_quadratic_roots(p: complex, q: complex) -> Tuple[complex, complex]:
    """Both roots of x^2 - p x + q = 0, principal square root branch."""
    discriminant = snap_discriminant(p * p - 4 * q, max(abs(p * p), abs(4 * q)))
    root = np.sqrt(discriminant)
    return complex((p + root) / 2), complex((p - root) / 2)


def _values(spectrum: Union[Spectrum, Sequence[complex]]) -> np.ndarray:
    if isinstance(spectrum, Spectrum):
        return spectrum.as_array()
    return np.array(list(spectrum), dtype=complex)


def multiset_match(a: Union[Spectrum, Sequence[complex]], b: Union[Spectrum, Sequence[complex]],
                   tol: Optional[float] = None) -> MatchReport:
    """
    Pair two multisets so that the largest pair distance is minimal.

    Bottleneck assignment: binary search over the distinct pair distances for
    the smallest threshold that still admits a perfect matching, then the
    minimum-total-distance matching under that threshold. Deterministic.
    """
    tol = get_config()['tol_spectrum'] if tol is None else tol
    left, right = _values(a), _values(b)
    if left.size != right.size:
        raise CardinalityError(left.size, right.size)
    if left.size == 0:
        return MatchReport([], 0.0, True, tol, (0, 0))

    distances = np.abs(left[:, None] - right[None, :])
    thresholds = np.unique(distances)

    def feasible(t: float) -> bool:
        rows, cols = linear_sum_assignment((distances > t).astype(float))
        return not (distances[rows, cols] > t).any()

    lo, hi = 0, thresholds.size - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(thresholds[mid]):
            hi = mid
        else:
            lo = mid + 1
    bottleneck = thresholds[lo]

    penalty = distances.max() * left.size + 1.0
    rows, cols = linear_sum_assignment(np.where(distances <= bottleneck, distances, penalty))
    pairs = [(complex(left[i]), complex(right[j]), float(distances[i, j])) for i, j in zip(rows, cols)]
    max_distance = float(max(p[2] for p in pairs))
    return MatchReport(pairs, max_distance, max_distance <= tol, tol, (left.size, right.size))


def max_unitarity_deviation(U: np.ndarray) -> float:
    """||U^* U - I||_max."""
    U = _square(U)
    return float(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))))


def row_sum_deviation(M: np.ndarray) -> float:
    return float(np.max(np.abs(np.asarray(M).sum(axis=1) - 1.0)))


def column_sum_deviation(M: np.ndarray) -> float:
    return float(np.max(np.abs(np.asarray(M).sum(axis=0) - 1.0)))
