"""
Tests for the command-line surface: exit codes and output documents.
"""
import csv
import json
import sys

import pytest

import main


def _run(capsys, argv):
    code = main.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_spectrum_crw_regular_with_oracle(capsys):
    code, out, _ = _run(capsys, ['spectrum', '--family', 'complete', '--n', '4',
                                 '--method', 'crw-regular', '--check-oracle'])
    assert code == 0
    document = json.loads(out)
    assert document['count'] == 12
    assert document['provenance'] == 'closed_form'
    assert document['oracle_match']['pass'] is True
    assert document['operator'] == 'crw'


def test_spectrum_half_coin_on_c4(capsys, tmp_path):
    target = tmp_path / 'c4.csv'
    code, out, _ = _run(capsys, ['spectrum', '--family', 'cycle', '--n', '4', '--method', 'crw2-cycle',
                                 '--coin', '0.5,0.5,0.5,0.5', '--check-oracle', '--csv', str(target)])
    assert code == 0
    document = json.loads(out)
    assert document['coin'] == [0.5, 0.5, 0.5, 0.5]
    real_parts = sorted(round(re, 9) for re, _ in document['eigenvalues'])
    assert real_parts == [-1.0] + [0.0] * 6 + [1.0]
    with open(target, encoding='utf-8') as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == 8
    assert rows[0]['label'] == 'C4'


def test_spectrum_oracle_with_coefficients(capsys):
    code, out, _ = _run(capsys, ['spectrum', '--family', 'cycle', '--n', '3', '--operator', 'adjacency',
                                 '--coefficients'])
    assert code == 0
    document = json.loads(out)
    assert document['provenance'] == 'numeric_oracle'
    # det(x I - A(C3)) = x^3 - 3x - 2
    coefficients = [re for re, _ in document['char_poly']]
    assert coefficients == pytest.approx([-2.0, -3.0, 0.0, 1.0], abs=1e-12)


def test_spectrum_refuses_irregular_file(capsys, tmp_path):
    path = tmp_path / 'star.txt'
    path.write_text("4 3\n1 2\n1 3\n1 4\n", encoding='utf-8')
    code, out, err = _run(capsys, ['spectrum', '--file', str(path), '--method', 'crw-regular'])
    assert code == 2
    assert out == ''
    assert 'not regular' in err


def test_spectrum_reports_bad_edge_list(capsys, tmp_path):
    path = tmp_path / 'broken.txt'
    path.write_text("3 2\n1 2\n2 x\n", encoding='utf-8')
    code, _, err = _run(capsys, ['spectrum', '--file', str(path)])
    assert code == 2
    assert 'error' in err


def test_zeta_ihara_on_triangle(capsys):
    code, out, _ = _run(capsys, ['zeta', '--family', 'cycle', '--n', '3', '--u', '0.5'])
    assert code == 0
    document = json.loads(out)
    point = document['points'][0]
    assert point['direct'][0] == pytest.approx(0.765625, abs=1e-12)
    assert point['reduced'][0] == pytest.approx(0.765625, abs=1e-12)
    assert document['statistics'] == {'evaluated': 1, 'failed': 0, 'pole_errors': 0}


def test_zeta_random_weighting_on_petersen(capsys):
    code, out, _ = _run(capsys, ['zeta', '--family', 'petersen', '--weighting', 'random',
                                 '--seed', '1', '--u', '0.2,0.3i'])
    assert code == 0
    document = json.loads(out)
    assert [p['point'] for p in document['points']] == [[0.2, 0.0], [0.0, 0.3]]
    assert all(p['rel_dev'] <= 1e-9 for p in document['points'])


def test_zeta_pole_on_tree(capsys):
    code, out, _ = _run(capsys, ['zeta', '--family', 'path', '--n', '3', '--u', '0.5,1.0'])
    assert code == 2
    document = json.loads(out)
    assert 'error' not in document['points'][0]
    assert 'pole' in document['points'][1]['error']
    assert document['statistics']['pole_errors'] == 1


def test_zeta_rejects_bad_point(capsys):
    code, _, err = _run(capsys, ['zeta', '--family', 'cycle', '--n', '3', '--u', 'abc'])
    assert code == 2
    assert 'cannot parse' in err


def test_parse_points():
    assert main.parse_points('0.2, 0.3i,0.1+0.2i') == [0.2, 0.3j, 0.1 + 0.2j]


def test_verify_zeta_suite(capsys, tmp_path):
    report = tmp_path / 'verify.json'
    table = tmp_path / 'verify.csv'
    code, out, _ = _run(capsys, ['verify', '--suite', 'zeta', '--seed', '42',
                                 '--output', str(report), '--csv', str(table)])
    assert code == 0
    assert out == ''
    document = json.loads(report.read_text(encoding='utf-8'))
    assert document['suite'] == 'zeta'
    assert document['seed'] == 42
    assert document['summary']['failed'] == 0
    assert document['summary']['total'] == len(document['reports'])
    with open(table, encoding='utf-8') as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == len(document['reports'])
    assert {row['pass'] for row in rows} == {'true'}


def test_verify_output_is_reproducible(capsys, tmp_path):
    first, second = tmp_path / 'a.json', tmp_path / 'b.json'
    assert main.main(['verify', '--suite', 'grover', '--output', str(first)]) == 0
    assert main.main(['verify', '--suite', 'grover', '--output', str(second)]) == 0
    capsys.readouterr()
    assert first.read_bytes() == second.read_bytes()


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, '-v']))
