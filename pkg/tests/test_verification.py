"""
Tests for sample sets, report assembly and the verification suites.
"""
import sys

import pytest

import verification
from config import STANDARD_FAMILY
from errors import ConvergenceError, PoleProximityError
from graph_core import generate
from verification import (
    SampleRecord,
    VerificationReport,
    VerificationRunner,
    iter_sample_points,
    sample_count,
    sample_points,
)


@pytest.fixture(scope='module')
def runner():
    return VerificationRunner(seed=42)


def test_sample_points_are_deterministic():
    assert sample_points(20, 42) == sample_points(20, 42)
    assert sample_points(20, 42) != sample_points(20, 43)


def test_sample_points_layout():
    points = sample_points(30, 7)
    real, rest = points[:8], points[8:]
    assert all(z.imag == 0.0 and -0.9 < z.real < 0.9 for z in real)
    assert all(abs(z) <= 0.9 for z in rest)
    assert any(z.imag != 0.0 for z in rest)


def test_sample_stream_extends_sample_points():
    stream = iter_sample_points(5)
    assert [next(stream) for _ in range(12)] == sample_points(12, 5)


def test_sample_count():
    assert sample_count(6) == 20
    assert sample_count(30) == 61


def test_report_schema():
    report = VerificationReport('demo', 'C3', [SampleRecord(0.5j, 1 + 1j, 1 + 1j, 0.0)], 0.0, True, 1e-9)
    document = report.to_dict()
    assert list(document) == ['identity', 'graph', 'samples', 'max_rel_dev', 'pass', 'tolerance', 'notes']
    assert document['samples'][0] == {'point': [0.0, 0.5], 'lhs': [1.0, 1.0], 'rhs': [1.0, 1.0], 'rel_dev': 0.0}


def test_identity_report_pass_and_fail(runner):
    good = runner.identity_report('same', 'G', lambda u: (u + 1, u + 1), count=10)
    assert good.passed and good.max_rel_dev == 0.0
    assert len(good.samples) == 10
    bad = runner.identity_report('off', 'G', lambda u: (1.0, 1.1), count=5)
    assert not bad.passed
    assert abs(bad.max_rel_dev - 0.1 / 1.1) < 1e-12


def test_identity_report_skips_pole_points(runner):
    def guarded(u):
        if u.real > 0:
            raise PoleProximityError("positive half-plane", point=u)
        return 1.0, 1.0

    report = runner.identity_report('guarded', 'G', guarded, count=20)
    assert len(report.samples) == 20
    assert all(s.point.real <= 0 for s in report.samples)
    assert report.notes['skipped_points'] > 0
    assert report.passed


def test_unknown_suite(runner):
    with pytest.raises(ValueError, match="unknown suite"):
        runner.run('everything')


def test_zeta_suite(runner):
    reports = runner.run('zeta')
    assert len(reports) == 2 * len(STANDARD_FAMILY)
    assert all(r.passed for r in reports), [r.to_dict() for r in reports if not r.passed][:1]
    keys = [r.sort_key() for r in reports]
    assert keys == sorted(keys)
    for report in reports:
        graph = dict((label, params) for label, _, params in STANDARD_FAMILY)
        assert report.graph in graph
        assert len(report.samples) >= 7


def test_zeta_suite_is_deterministic(runner):
    first = [r.to_dict() for r in runner.run('zeta')]
    second = [r.to_dict() for r in VerificationRunner(seed=42).run('zeta')]
    assert first == second


def test_grover_suite(runner):
    reports = runner.run('grover')
    assert all(r.passed for r in reports), [r.to_dict() for r in reports if not r.passed][:1]
    identities = {r.identity for r in reports}
    assert identities == {'grover_unitarity', 'grover_charpoly', 'grover_charpoly_degree_form',
                          'grover_closed_spectrum'}
    unitarity = {r.graph: r for r in reports if r.identity == 'grover_unitarity'}
    assert unitarity['K5'].notes['hadamard'] and unitarity['K4,4'].notes['hadamard']
    assert not unitarity['K4'].notes['hadamard']


def test_crw_suite(runner):
    reports = runner.run('crw')
    failing = [r.to_dict() for r in reports if not r.passed]
    assert not failing, failing[:1]
    sign = [r for r in reports if r.identity == 'bipartite_sign_resolution']
    assert len(sign) == 1
    assert sign[0].graph == 'K2,3'
    assert sign[0].notes['resolved'] == 'plus'
    irregular = [r for r in reports if r.identity == 'crw_determinant' and r.graph.startswith('R')]
    assert len(irregular) == 5
    assert any(r.identity == 'bipartite_crw_closed_spectrum' and r.graph == 'K2,3' for r in reports)
    assert any(r.identity == 'bipartite_nested_radical' and r.graph == 'C6' for r in reports)
    assert any(r.identity == 'bipartite_crw_closed_spectrum' and r.graph == 'K3,3' for r in reports)
    assert {r.graph for r in reports if r.identity == 'regular_crw_spectral_mapping'} >= {'K4', 'K5', 'Petersen'}


def test_crw_structure_reports_oracle_failure(runner, monkeypatch):
    def broken(*args, **kwargs):
        raise ConvergenceError("eigenvalue iteration did not converge")

    monkeypatch.setattr(verification, 'eigenvalues', broken)
    stochastic, factorization = runner._crw_structure(generate('cycle', n=3))
    assert stochastic.identity == 'crw_stochastic'
    assert not stochastic.passed
    assert 'did not converge' in stochastic.notes['error']
    assert factorization.passed


def test_crw2_suite(runner):
    reports = runner.run('crw2')
    failing = [r.to_dict() for r in reports if not r.passed]
    assert not failing, failing[:1]
    assert any(r.identity == 'cycle_coin_closed_spectrum(0.9,0.2,0.1,0.8)' and r.graph == 'C8' for r in reports)
    assert sum(1 for r in reports if r.identity == 'cycle_half_coin_closed_spectrum') == 6
    assert {r.graph for r in reports if r.identity == 'uniform_crw_closed_spectrum'} >= {'K4', 'Petersen'}


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, '-v']))
