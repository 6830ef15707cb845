"""
Verification harness: sample sets, per-(identity, graph) reports and the
property suites that back `main.py verify`.
"""
import logging
from dataclasses import dataclass, field
from itertools import islice
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from config import (
    COIN_GRID,
    CYCLE_COIN_LENGTHS,
    STANDARD_FAMILY,
    get_config,
)
from crw import (
    BIPARTITE_INNER_SIGN,
    bipartite_crw_charpoly_both_sides,
    bipartite_crw_determinant_both_sides,
    bipartite_crw_quartic_family,
    bipartite_crw_quartic_roots,
    bipartite_crw_spectrum_closed,
    bipartite_profile,
    crw_determinant_both_sides,
    crw_factorization_residuals,
    crw_matrix,
    crw_matrix_piecewise,
    regular_crw_charpoly_both_sides,
    regular_crw_determinant_both_sides,
    regular_crw_spectral_mapping_both_sides,
    regular_crw_spectrum_closed,
    resolve_bipartite_sign,
)
from crw2 import (
    CoinParams,
    cycle_coin_charpoly_both_sides,
    cycle_coin_spectrum_closed,
    cycle_half_coin_spectrum_closed,
    second_type_matrix,
    second_type_matrix_arcwise,
    uniform_crw_charpoly_both_sides,
    uniform_crw_matrix,
    uniform_crw_spectrum_closed,
)
from errors import CrwSpectraError, InapplicableError, PoleProximityError
from graph_core import Graph, generate
from grover import (
    grover_charpoly_both_sides,
    grover_charpoly_degree_form_both_sides,
    grover_column_sums,
    grover_is_hadamard,
    grover_matrix,
    grover_spectrum_closed,
    srw_eigenvalues,
)
from numerics import (
    Spectrum,
    column_sum_deviation,
    eigenvalues,
    max_unitarity_deviation,
    multiset_match,
    relative_deviation,
    row_sum_deviation,
)
from report_handler import complex_pair
from zeta import (
    crw_weighting,
    ihara_recip_bass,
    ihara_recip_edge,
    random_weighting,
    zeta_recip_direct,
    zeta_recip_reduced,
)

SUITES = ('all', 'zeta', 'grover', 'crw', 'crw2')

SIGN_RESOLUTION_GRAPH = 'K2,3'
SIGN_RESOLUTION_SAMPLES = 10


@dataclass
class SampleRecord:
    """Both sides of an identity at one sample point."""
    point: complex
    lhs: complex
    rhs: complex
    rel_dev: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            'point': complex_pair(self.point),
            'lhs': complex_pair(self.lhs),
            'rhs': complex_pair(self.rhs),
            'rel_dev': self.rel_dev,
        }


@dataclass
class VerificationReport:
    """One check of one identity or property on one graph."""
    identity: str
    graph: str
    samples: List[SampleRecord]
    max_rel_dev: float
    passed: bool
    tolerance: float
    notes: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'identity': self.identity,
            'graph': self.graph,
            'samples': [s.to_dict() for s in self.samples],
            'max_rel_dev': self.max_rel_dev,
            'pass': self.passed,
            'tolerance': self.tolerance,
            'notes': self.notes,
        }

    def sort_key(self) -> Tuple[str, str]:
        return self.identity, self.graph


def iter_sample_points(seed: int, real_count: Optional[int] = None,
                       radius: Optional[float] = None) -> Iterator[complex]:
    """
    Endless deterministic stream: real points in (-radius, radius) first,
    then complex points of modulus <= radius.
    """
    config = get_config()
    real_count = config['real_sample_count'] if real_count is None else real_count
    radius = config['sample_radius'] if radius is None else radius
    rng = np.random.default_rng(seed)
    for _ in range(real_count):
        yield complex(rng.uniform(-radius, radius))
    while True:
        modulus = radius * np.sqrt(rng.uniform(0.0, 1.0))
        angle = rng.uniform(0.0, 2.0 * np.pi)
        yield complex(modulus * np.exp(1j * angle))


def sample_points(count: int, seed: int) -> List[complex]:
    return list(islice(iter_sample_points(seed), count))


def sample_count(dimension: int, minimum: int = 20) -> int:
    """At least 2 * dimension + 1 points, never fewer than `minimum`."""
    return max(minimum, 2 * dimension + 1)


class VerificationRunner:
    """Runs the property suites over the standard graph family."""

    def __init__(self, tolerance: Optional[float] = None, seed: Optional[int] = None):
        self.config = get_config()
        self.logger = logging.getLogger(__name__)
        self.tolerance = self.config['tol_identity'] if tolerance is None else tolerance
        self.spectrum_tolerance = self.config['tol_spectrum']
        self.seed = self.config['seed'] if seed is None else seed
        self._graphs: Optional[List[Graph]] = None

    @property
    def graphs(self) -> List[Graph]:
        if self._graphs is None:
            self._graphs = [generate(family, **params) for _, family, params in STANDARD_FAMILY]
        return self._graphs

    def run(self, suite: str = 'all') -> List[VerificationReport]:
        """Run one suite (or all of them); reports sorted by identity, then graph."""
        if suite not in SUITES:
            raise ValueError(f"unknown suite: {suite} (expected one of {', '.join(SUITES)})")

        suites = {
            'zeta': self.run_zeta_suite,
            'grover': self.run_grover_suite,
            'crw': self.run_crw_suite,
            'crw2': self.run_crw2_suite,
        }
        selected = list(suites) if suite == 'all' else [suite]

        reports: List[VerificationReport] = []
        for name in selected:
            self.logger.info(f"=== RUNNING {name.upper()} SUITE ===")
            suite_reports = suites[name]()
            failed = sum(1 for r in suite_reports if not r.passed)
            self.logger.info(f"Suite {name}: {len(suite_reports)} reports, {failed} failed")
            reports.extend(suite_reports)

        reports.sort(key=VerificationReport.sort_key)
        return reports

    # ---- report builders ----

    def identity_report(self, identity: str, graph_label: str,
                        both_sides: Callable[[complex], Tuple[complex, complex]],
                        count: int, seed: Optional[int] = None,
                        notes: Optional[Dict[str, Any]] = None) -> VerificationReport:
        """
        Evaluate both sides at `count` pole-free points. Points hitting a pole
        guard are skipped and replaced from the same stream.
        """
        seed = self.seed if seed is None else seed
        notes = dict(notes or {})
        samples: List[SampleRecord] = []
        skipped = 0
        stream = iter_sample_points(seed)

        try:
            while len(samples) < count:
                point = next(stream)
                try:
                    lhs, rhs = both_sides(point)
                except PoleProximityError as e:
                    skipped += 1
                    self.logger.warning(f"{identity} on {graph_label}: skipping {point}: {e}")
                    if skipped > 10 * count:
                        raise
                    continue
                samples.append(SampleRecord(point, complex(lhs), complex(rhs), relative_deviation(lhs, rhs)))
        except CrwSpectraError as e:
            self.logger.error(f"{identity} on {graph_label}: {e}")
            notes['error'] = str(e)
            return VerificationReport(identity, graph_label, samples, float('inf'), False, self.tolerance, notes)

        if skipped:
            notes['skipped_points'] = skipped
        max_dev = max((s.rel_dev for s in samples), default=0.0)
        passed = max_dev <= self.tolerance
        self.logger.debug(f"{identity} on {graph_label}: {len(samples)} points, max deviation {max_dev:.3e}")
        if not passed:
            self.logger.error(f"{identity} on {graph_label} failed: max deviation {max_dev:.3e} > {self.tolerance:.1e}")
        return VerificationReport(identity, graph_label, samples, max_dev, passed, self.tolerance, notes)

    def spectrum_report(self, identity: str, graph_label: str,
                        closed: Callable[[], Spectrum], reference: Callable[[], Spectrum],
                        notes: Optional[Dict[str, Any]] = None) -> VerificationReport:
        """Multiset-match a closed-form spectrum against a reference (usually the oracle)."""
        notes = dict(notes or {})
        try:
            left, right = closed(), reference()
            match = multiset_match(left, right, tol=self.spectrum_tolerance)
        except CrwSpectraError as e:
            self.logger.error(f"{identity} on {graph_label}: {e}")
            notes['error'] = str(e)
            return VerificationReport(identity, graph_label, [], float('inf'), False, self.spectrum_tolerance, notes)

        notes.update({'kind': 'multiset_match', 'cardinality': len(left),
                      'closed_source': left.source, 'reference_source': right.source})
        if not match.passed:
            self.logger.error(f"{identity} on {graph_label} failed: max pair distance {match.max_distance:.3e}")
        return VerificationReport(identity, graph_label, [], match.max_distance, match.passed,
                                  self.spectrum_tolerance, notes)

    def structural_report(self, identity: str, graph_label: str, deviation: float,
                          tolerance: float, notes: Optional[Dict[str, Any]] = None,
                          extra_ok: bool = True) -> VerificationReport:
        passed = bool(deviation <= tolerance and extra_ok)
        if not passed:
            self.logger.error(f"{identity} on {graph_label} failed: deviation {deviation:.3e}, notes {notes}")
        return VerificationReport(identity, graph_label, [], float(deviation), passed, tolerance, dict(notes or {}))

    # ---- suites ----

    def run_zeta_suite(self) -> List[VerificationReport]:
        reports = []
        for graph in self.graphs:
            count = 2 * graph.m + 1
            reports.append(self.identity_report(
                'ihara_edge_vs_bass', graph.label,
                lambda u, g=graph: (ihara_recip_edge(g, u), ihara_recip_bass(g, u)), count))

            weightings = [random_weighting(graph, self.seed + k) for k in range(self.config['random_weightings'])]
            weightings.append(crw_weighting(graph))
            merged: List[VerificationReport] = []
            for k, weighting in enumerate(weightings):
                merged.append(self.identity_report(
                    'weighted_zeta_direct_vs_reduced', graph.label,
                    lambda u, g=graph, w=weighting: (zeta_recip_direct(g, w, u), zeta_recip_reduced(g, w, u)),
                    count, seed=self.seed + k))
            reports.append(self._merge(merged, {'weightings': [w.label for w in weightings]}))
        return reports

    def _merge(self, parts: Sequence[VerificationReport], notes: Dict[str, Any]) -> VerificationReport:
        """Fold several runs of the same identity on the same graph into one report."""
        first = parts[0]
        merged_notes = dict(notes)
        for part in parts:
            for key, value in part.notes.items():
                merged_notes.setdefault(key, value)
        samples = [s for part in parts for s in part.samples]
        max_dev = max(part.max_rel_dev for part in parts)
        return VerificationReport(first.identity, first.graph, samples, max_dev,
                                  all(part.passed for part in parts), first.tolerance, merged_notes)

    def run_grover_suite(self) -> List[VerificationReport]:
        reports = []
        for graph in self.graphs:
            U = grover_matrix(graph)
            column_dev = float(np.max(np.abs(grover_column_sums(graph) - 1.0)))
            # every nonzero |U_ef| is 1/2 exactly when G is 4-regular
            hadamard = grover_is_hadamard(graph)
            reports.append(self.structural_report(
                'grover_unitarity', graph.label, max_unitarity_deviation(U), self.config['tol_unitarity'],
                notes={'column_sum_deviation': column_dev, 'hadamard': hadamard},
                extra_ok=column_dev <= self.config['tol_stochastic']
                and hadamard == (graph.regular_degree() == 4)))

            reports.append(self.identity_report(
                'grover_charpoly', graph.label,
                lambda lam, g=graph: grover_charpoly_both_sides(g, lam), sample_count(2 * graph.m)))
            reports.append(self.identity_report(
                'grover_charpoly_degree_form', graph.label,
                lambda lam, g=graph: grover_charpoly_degree_form_both_sides(g, lam), sample_count(2 * graph.m)))

            if graph.m >= graph.n:
                reports.append(self.spectrum_report(
                    'grover_closed_spectrum', graph.label,
                    lambda g=graph: grover_spectrum_closed(g),
                    lambda g=graph, M=U: eigenvalues(M, source=f'grover:{g.label}')))
        return reports

    def run_crw_suite(self) -> List[VerificationReport]:
        reports = []
        for graph in self.graphs:
            reports.extend(self._crw_structure(graph))
            count = 2 * graph.m + 1
            reports.append(self.identity_report(
                'crw_determinant', graph.label,
                lambda u, g=graph: crw_determinant_both_sides(g, u), count))

            if graph.regular_degree() is not None:
                reports.extend(self._regular_crw(graph, count))

            try:
                profile = bipartite_profile(graph)
            except InapplicableError:
                continue
            reports.extend(self._bipartite_crw(profile, count))
        return reports

    def _crw_structure(self, graph: Graph) -> List[VerificationReport]:
        P = crw_matrix(graph)
        row_dev = row_sum_deviation(P)
        column_dev = column_sum_deviation(P)
        notes: Dict[str, Any] = {'column_sum_deviation': column_dev, 'min_entry': float(P.min())}
        try:
            spectrum = eigenvalues(P, source=f'crw:{graph.label}')
            moduli = np.abs(spectrum.as_array())
            has_one = bool(np.min(np.abs(spectrum.as_array() - 1.0)) <= self.spectrum_tolerance)
            inside = bool(np.max(moduli) <= 1.0 + 1e-9)
            notes.update({'spectral_radius': float(np.max(moduli)), 'eigenvalue_one': has_one})
        except CrwSpectraError as e:
            self.logger.error(f"crw_stochastic on {graph.label}: {e}")
            notes['error'] = str(e)
            has_one = inside = False
        stochastic = self.structural_report(
            'crw_stochastic', graph.label, row_dev, self.config['tol_stochastic'], notes=notes,
            extra_ok=bool(P.min() >= 0.0) and inside and has_one)

        residuals = crw_factorization_residuals(graph)
        piecewise_dev = float(np.max(np.abs(crw_matrix_piecewise(graph) - P)))
        factorization = self.structural_report(
            'crw_piecewise_and_factorization', graph.label, piecewise_dev, self.config['tol_stochastic'],
            notes=residuals,
            extra_ok=residuals['R_J0_vs_P'] <= self.config['tol_stochastic']
            and residuals['J0_R_vs_PT'] <= self.config['tol_stochastic'])
        return [stochastic, factorization]

    def _regular_crw(self, graph: Graph, count: int) -> List[VerificationReport]:
        reports = [
            self.identity_report(
                'regular_crw_determinant', graph.label,
                lambda u, g=graph: regular_crw_determinant_both_sides(g, u), count),
            self.identity_report(
                'regular_crw_charpoly', graph.label,
                lambda lam, g=graph: regular_crw_charpoly_both_sides(g, lam), sample_count(2 * graph.m)),
            self.identity_report(
                'regular_crw_spectral_mapping', graph.label,
                lambda lam, g=graph: regular_crw_spectral_mapping_both_sides(g, lam), sample_count(2 * graph.m)),
            self.spectrum_report(
                'regular_crw_closed_spectrum', graph.label,
                lambda g=graph: regular_crw_spectrum_closed(g),
                lambda g=graph: eigenvalues(crw_matrix(g), source=f'crw:{g.label}')),
        ]
        return reports

    def _bipartite_crw(self, profile, count: int) -> List[VerificationReport]:
        graph = profile.graph
        shape = {'r': profile.r, 's': profile.s, 'm_part': profile.m_part, 'n_part': profile.n_part,
                 'sign': 'plus' if BIPARTITE_INNER_SIGN > 0 else 'minus'}
        reports = [
            self.identity_report(
                'bipartite_crw_determinant', graph.label,
                lambda u, p=profile: bipartite_crw_determinant_both_sides(p, u), count, notes=shape),
            self.identity_report(
                'bipartite_crw_charpoly', graph.label,
                lambda lam, p=profile: bipartite_crw_charpoly_both_sides(p, lam),
                sample_count(2 * graph.m), notes=shape),
            self.spectrum_report(
                'bipartite_nested_radical', graph.label,
                lambda p=profile: Spectrum(tuple(bipartite_crw_quartic_roots(p)), 'closed_form', 'nested_radical'),
                lambda p=profile: Spectrum(tuple(bipartite_crw_quartic_family(p)), 'closed_form', 'quartic'),
                notes=shape),
        ]
        if profile.epsilon >= profile.nu:
            reports.append(self.spectrum_report(
                'bipartite_crw_closed_spectrum', graph.label,
                lambda p=profile: bipartite_crw_spectrum_closed(p),
                lambda g=graph: eigenvalues(crw_matrix(g), source=f'crw:{g.label}'), notes=shape))

        if graph.label == SIGN_RESOLUTION_GRAPH:
            samples = sample_points(SIGN_RESOLUTION_SAMPLES, self.seed)
            try:
                resolution = resolve_bipartite_sign(profile, samples, tol=self.tolerance)
                notes = {'resolved': resolution.resolved, 'max_dev_plus': resolution.max_dev_plus,
                         'max_dev_minus': resolution.max_dev_minus, 'samples': resolution.samples}
                expected = 'plus' if BIPARTITE_INNER_SIGN > 0 else 'minus'
                best = min(resolution.max_dev_plus, resolution.max_dev_minus)
                reports.append(self.structural_report(
                    'bipartite_sign_resolution', graph.label, best, self.tolerance, notes=notes,
                    extra_ok=resolution.resolved == expected))
            except CrwSpectraError as e:
                self.logger.error(f"Sign resolution on {graph.label}: {e}")
                reports.append(VerificationReport('bipartite_sign_resolution', graph.label, [],
                                                  float('inf'), False, self.tolerance, {'error': str(e)}))
        return reports

    def run_crw2_suite(self) -> List[VerificationReport]:
        reports = []
        for n in CYCLE_COIN_LENGTHS:
            for values in COIN_GRID:
                coin = CoinParams(*values)
                reports.extend(self._cycle_coin(n, coin))

        for n in range(3, 9):
            reports.append(self._half_coin_vs_srw(n))

        for graph in self.graphs:
            if graph.regular_degree() is None:
                continue
            reports.append(self.identity_report(
                'uniform_crw_charpoly', graph.label,
                lambda lam, g=graph: uniform_crw_charpoly_both_sides(g, lam), sample_count(2 * graph.m)))
            reports.append(self.spectrum_report(
                'uniform_crw_closed_spectrum', graph.label,
                lambda g=graph: uniform_crw_spectrum_closed(g),
                lambda g=graph: eigenvalues(uniform_crw_matrix(g), source=f'uniform_crw:{g.label}')))
        return reports

    def _cycle_coin(self, n: int, coin: CoinParams) -> List[VerificationReport]:
        tag = ','.join(f'{x:g}' for x in coin.as_tuple())
        label = f'C{n}'
        U = second_type_matrix(n, coin)
        arcwise_dev = float(np.max(np.abs(second_type_matrix_arcwise(n, coin) - U)))
        return [
            self.structural_report(
                f'cycle_coin_column_stochastic({tag})', label, column_sum_deviation(U),
                self.config['tol_stochastic'], notes={'arcwise_deviation': arcwise_dev},
                extra_ok=arcwise_dev <= self.config['tol_stochastic']),
            self.identity_report(
                f'cycle_coin_charpoly({tag})', label,
                lambda lam: cycle_coin_charpoly_both_sides(n, coin, lam), sample_count(2 * n)),
            self.spectrum_report(
                f'cycle_coin_closed_spectrum({tag})', label,
                lambda: cycle_coin_spectrum_closed(n, coin),
                lambda: eigenvalues(U, source=f'second_type:{label}:{tag}')),
        ]

    def _half_coin_vs_srw(self, n: int) -> VerificationReport:
        """Half-coin closed form against Spec(T(C_n)) with n zeros, then against the oracle."""
        label = f'C{n}'
        graph = generate('cycle', n=n)
        srw = Spectrum(tuple(complex(x) for x in srw_eigenvalues(graph)) + (0j,) * n,
                       'numeric_oracle', f'srw:{label}')
        oracle = self.spectrum_report(
            'cycle_half_coin_closed_spectrum', label,
            lambda: cycle_half_coin_spectrum_closed(n),
            lambda: eigenvalues(second_type_matrix(n, CoinParams.half()), source=f'second_type:{label}:half'))
        versus_srw = self.spectrum_report(
            'cycle_half_coin_closed_spectrum', label,
            lambda: cycle_half_coin_spectrum_closed(n), lambda: srw)
        return self._merge([oracle, versus_srw], {'reference': ['oracle', 'srw_with_zeros']})
