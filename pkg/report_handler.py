"""
Report writers: JSON documents for spectra, zeta evaluations and verification
runs, plus CSV flattening. Output is deterministic and UTF-8.
"""
import csv
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from numerics import MatchReport, Polynomial, Spectrum

logger = logging.getLogger(__name__)

SPECTRUM_FIELDS = ['label', 're', 'im', 'group']
VERIFY_FIELDS = ['identity', 'graph', 'max_rel_dev', 'pass', 'tolerance', 'samples']


def complex_pair(z: complex) -> List[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def multiplicity_groups(values: Sequence[complex], tol: float = 1e-8) -> List[int]:
    """
    Group ids for values sorted by (re, im): consecutive values within `tol`
    share a group.
    """
    groups: List[int] = []
    previous = None
    current = -1
    for z in values:
        if previous is None or abs(z - previous) > tol:
            current += 1
        groups.append(current)
        previous = z
    return groups


def spectrum_payload(spectrum: Spectrum, graph_label: str, method: str,
                     match: Optional[MatchReport] = None,
                     polynomial: Optional[Polynomial] = None) -> Dict[str, Any]:
    payload: Dict[str, Any] = {
        'graph': graph_label,
        'method': method,
        'provenance': spectrum.provenance,
        'source': spectrum.source,
        'count': len(spectrum),
        'eigenvalues': [complex_pair(z) for z in spectrum.sorted_values()],
    }
    if match is not None:
        payload['oracle_match'] = {
            'max_distance': match.max_distance,
            'pass': match.passed,
            'tolerance': match.tolerance,
        }
    if polynomial is not None:
        payload['char_poly'] = [complex_pair(c) for c in polynomial.coefficients]
    return payload


def _clean(value: Any) -> Any:
    """Make numpy scalars and non-finite floats JSON-safe."""
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not np.isfinite(value):
        return str(value)
    return value


def render_json(document: Any) -> str:
    return json.dumps(_clean(document), indent=2, ensure_ascii=False) + '\n'


def write_json(document: Any, path: Optional[str] = None):
    """Write to `path`, or to stdout when no path is given."""
    text = render_json(document)
    if path is None:
        sys.stdout.write(text)
        return
    Path(path).write_text(text, encoding='utf-8')
    logger.info(f"Wrote JSON report to {path}")


def write_spectrum_csv(spectrum: Spectrum, label: str, path: str, tol: float = 1e-8):
    values = spectrum.sorted_values()
    groups = multiplicity_groups(values, tol)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        writer = csv.DictWriter(f, fieldnames=SPECTRUM_FIELDS, lineterminator='\n')
        writer.writeheader()
        for z, group in zip(values, groups):
            writer.writerow({'label': label, 're': repr(z.real), 'im': repr(z.imag), 'group': group})
    logger.info(f"Wrote {len(values)} eigenvalues to {path}")


def write_verify_csv(reports: Sequence[Dict[str, Any]], path: str):
    """One row per report dict (as produced by VerificationReport.to_dict)."""
    with open(path, 'w', encoding='utf-8', newline='') as f:
        writer = csv.DictWriter(f, fieldnames=VERIFY_FIELDS, lineterminator='\n')
        writer.writeheader()
        for report in reports:
            writer.writerow({
                'identity': report['identity'],
                'graph': report['graph'],
                'max_rel_dev': repr(report['max_rel_dev']),
                'pass': str(report['pass']).lower(),
                'tolerance': repr(report['tolerance']),
                'samples': len(report['samples']),
            })
    logger.info(f"Wrote {len(reports)} report rows to {path}")
