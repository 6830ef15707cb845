"""
Command-line entry point: spectra of arc matrices, zeta evaluations and the
verification suites.

    python main.py spectrum --family complete --n 4 --method crw-regular --check-oracle
    python main.py zeta --family cycle --n 3 --weighting ihara --u 0.5
    python main.py verify --suite all --seed 42
"""
import argparse
import logging
import sys
from typing import Any, Dict, List, Optional, Sequence

from config import EXIT_CODES, get_config
from crw import bipartite_crw_spectrum_closed, bipartite_profile, crw_matrix, regular_crw_spectrum_closed
from crw2 import (
    CoinParams,
    cycle_coin_spectrum_closed,
    second_type_matrix,
    uniform_crw_matrix,
    uniform_crw_spectrum_closed,
)
from errors import CrwSpectraError, InapplicableError, PoleProximityError
from graph_core import (
    Graph,
    adjacency_matrix,
    arc_adjacency_matrix,
    flip_matrix,
    generate,
    load_graph,
    srw_transition_matrix,
)
from grover import grover_matrix, grover_spectrum_closed
from numerics import char_poly, eigenvalues, multiset_match, relative_deviation
from report_handler import (
    complex_pair,
    spectrum_payload,
    write_json,
    write_spectrum_csv,
    write_verify_csv,
)
from verification import SUITES, VerificationRunner
from zeta import (
    crw_weighting,
    ihara_recip_bass,
    ihara_recip_edge,
    random_weighting,
    zeta_recip_direct,
    zeta_recip_reduced,
)

METHODS = ('oracle', 'grover', 'crw-regular', 'crw-bipartite', 'crw2-cycle', 'crw2-uniform')
OPERATORS = ('grover', 'crw', 'uniform-crw', 'second-type', 'adjacency', 'srw', 'edge')
FAMILIES = ('cycle', 'complete', 'complete_bipartite', 'petersen', 'random_connected', 'path', 'star')
WEIGHTINGS = ('ihara', 'random', 'crw-induced')

# Operator each closed-form method describes
METHOD_OPERATORS = {
    'grover': 'grover',
    'crw-regular': 'crw',
    'crw-bipartite': 'crw',
    'crw2-cycle': 'second-type',
    'crw2-uniform': 'uniform-crw',
}


def setup_logging(level: Optional[str] = None):
    """Configure logging; everything goes to stderr so stdout stays JSON."""
    config = get_config()
    logging.basicConfig(
        level=getattr(logging, (level or config['log_level']).upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr
    )


def build_graph(args: argparse.Namespace) -> Graph:
    """Graph from --file, or from --family with its parameters."""
    if args.file:
        return load_graph(args.file)
    if not args.family:
        raise InapplicableError("either --file or --family is required")

    params: Dict[str, Any] = {}
    if args.family in ('cycle', 'complete', 'path', 'random_connected'):
        params['n'] = args.n
    if args.family == 'complete_bipartite':
        params.update(p=args.p, q=args.q)
    if args.family == 'star':
        params['leaves'] = args.leaves
    if args.family == 'random_connected':
        params.update(extra_edges=args.extra_edges, seed=args.seed if args.seed is not None else get_config()['seed'])
    params = {k: v for k, v in params.items() if v is not None}
    return generate(args.family, **params)


def _cycle_length(graph: Graph) -> int:
    if graph.regular_degree() != 2:
        raise InapplicableError(f"{graph.label}: second-type walk needs a cycle graph")
    return graph.n


def operator_matrix(graph: Graph, operator: str, coin: Optional[CoinParams] = None):
    if operator == 'grover':
        return grover_matrix(graph)
    if operator == 'crw':
        return crw_matrix(graph)
    if operator == 'uniform-crw':
        return uniform_crw_matrix(graph)
    if operator == 'second-type':
        return second_type_matrix(_cycle_length(graph), coin or CoinParams.half())
    if operator == 'adjacency':
        return adjacency_matrix(graph)
    if operator == 'srw':
        return srw_transition_matrix(graph)
    if operator == 'edge':
        return arc_adjacency_matrix(graph) - flip_matrix(graph)
    raise InapplicableError(f"unknown operator: {operator}")


def closed_form_spectrum(graph: Graph, method: str, coin: Optional[CoinParams], allow_deficient: bool):
    if method == 'grover':
        return grover_spectrum_closed(graph)
    if method == 'crw-regular':
        return regular_crw_spectrum_closed(graph)
    if method == 'crw-bipartite':
        return bipartite_crw_spectrum_closed(bipartite_profile(graph), allow_deficient=allow_deficient)
    if method == 'crw2-cycle':
        return cycle_coin_spectrum_closed(_cycle_length(graph), coin or CoinParams.half())
    if method == 'crw2-uniform':
        return uniform_crw_spectrum_closed(graph)
    raise InapplicableError(f"unknown method: {method}")


def cmd_spectrum(args: argparse.Namespace) -> int:
    logger = logging.getLogger(__name__)
    try:
        graph = build_graph(args)
        coin = CoinParams.parse(args.coin) if args.coin else None
        operator = args.operator if args.method == 'oracle' else METHOD_OPERATORS[args.method]
        logger.info(f"Spectrum of {graph.label} (n={graph.n}, m={graph.m}) by {args.method}")

        matrix = None
        if args.method == 'oracle' or args.check_oracle or args.coefficients:
            matrix = operator_matrix(graph, operator, coin)

        if args.method == 'oracle':
            spectrum = eigenvalues(matrix, source=f'{operator}:{graph.label}')
            match = None
        else:
            spectrum = closed_form_spectrum(graph, args.method, coin, args.allow_deficient)
            match = None
            if args.check_oracle:
                oracle = eigenvalues(matrix, source=f'{operator}:{graph.label}')
                match = multiset_match(spectrum, oracle)
                logger.info(f"Closed form vs oracle: max pair distance {match.max_distance:.3e}")

        polynomial = char_poly(matrix) if args.coefficients else None
        payload = spectrum_payload(spectrum, graph.label, args.method, match, polynomial)
        payload['operator'] = operator
        if coin is not None:
            payload['coin'] = list(coin.as_tuple())
    except CrwSpectraError as e:
        logger.error(f"Spectrum failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CODES['input_error']

    write_json(payload, args.output)
    if args.csv:
        write_spectrum_csv(spectrum, graph.label, args.csv)

    if match is not None and not match.passed:
        logger.error(f"Closed form disagrees with oracle on {graph.label}")
        return EXIT_CODES['identity_failure']
    return EXIT_CODES['ok']


def parse_points(text: str) -> List[complex]:
    """Comma-separated complex numbers; 'i' is accepted for the imaginary unit (e.g. 0.3i, 0.1+0.2i)."""
    points = []
    for token in text.split(','):
        token = token.strip().replace(' ', '')
        if not token:
            continue
        try:
            points.append(complex(token.replace('i', 'j')))
        except ValueError:
            raise InapplicableError(f"cannot parse sample point {token!r}")
    if not points:
        raise InapplicableError("no sample points given")
    return points


def cmd_zeta(args: argparse.Namespace) -> int:
    logger = logging.getLogger(__name__)
    config = get_config()
    try:
        graph = build_graph(args)
        points = parse_points(args.u)
        seed = args.seed if args.seed is not None else config['seed']
        if args.weighting == 'ihara':
            direct = lambda u: ihara_recip_edge(graph, u)
            reduced = lambda u: ihara_recip_bass(graph, u)
            label = 'ihara'
        else:
            weighting = random_weighting(graph, seed) if args.weighting == 'random' else crw_weighting(graph)
            direct = lambda u: zeta_recip_direct(graph, weighting, u)
            reduced = lambda u: zeta_recip_reduced(graph, weighting, u)
            label = weighting.label
    except CrwSpectraError as e:
        logger.error(f"Zeta evaluation failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CODES['input_error']

    tolerance = args.tol if args.tol is not None else config['tol_identity']
    stats = {'evaluated': 0, 'failed': 0, 'pole_errors': 0}
    results = []
    for i, u in enumerate(points):
        try:
            left, right = direct(u), reduced(u)
            deviation = relative_deviation(left, right)
            results.append({'point': complex_pair(u), 'direct': complex_pair(left),
                            'reduced': complex_pair(right), 'rel_dev': deviation})
            stats['evaluated'] += 1
            if deviation > tolerance:
                stats['failed'] += 1
                logger.error(f"Point {i + 1} (u={u}): deviation {deviation:.3e} > {tolerance:.1e}")
        except PoleProximityError as e:
            logger.error(f"Point {i + 1} (u={u}): {e}")
            results.append({'point': complex_pair(u), 'error': str(e)})
            stats['pole_errors'] += 1
            continue

    write_json({'graph': graph.label, 'weighting': label, 'tolerance': tolerance,
                'points': results, 'statistics': stats}, args.output)

    if stats['pole_errors']:
        return EXIT_CODES['input_error']
    if stats['failed']:
        return EXIT_CODES['identity_failure']
    return EXIT_CODES['ok']


def cmd_verify(args: argparse.Namespace) -> int:
    logger = logging.getLogger(__name__)
    runner = VerificationRunner(tolerance=args.tol, seed=args.seed)
    reports = [r.to_dict() for r in runner.run(args.suite)]
    failed = [r for r in reports if not r['pass']]

    logger.info("=== VERIFICATION SUMMARY ===")
    logger.info(f"Reports: {len(reports)}")
    logger.info(f"Failed: {len(failed)}")

    document = {
        'suite': args.suite,
        'seed': runner.seed,
        'tolerance': runner.tolerance,
        'summary': {'total': len(reports), 'failed': len(failed)},
        'reports': reports,
    }
    write_json(document, args.output)
    if args.csv:
        write_verify_csv(reports, args.csv)

    if failed:
        first = failed[0]
        print(f"first failing report: {first['identity']} on {first['graph']} "
              f"(max_rel_dev {first['max_rel_dev']}, tolerance {first['tolerance']})", file=sys.stderr)
        return EXIT_CODES['identity_failure']
    return EXIT_CODES['ok']


def _add_graph_arguments(parser: argparse.ArgumentParser):
    source = parser.add_argument_group('graph source')
    source.add_argument('--file', help='edge-list file: header "n m", then m lines "u v" (1-based)')
    source.add_argument('--family', choices=FAMILIES)
    source.add_argument('--n', type=int, help='vertex count (cycle, complete, path, random_connected)')
    source.add_argument('--p', type=int, help='first part size (complete_bipartite)')
    source.add_argument('--q', type=int, help='second part size (complete_bipartite)')
    source.add_argument('--leaves', type=int, help='leaf count (star)')
    source.add_argument('--extra-edges', dest='extra_edges', type=int, default=0,
                        help='edges added to the spanning tree (random_connected)')
    source.add_argument('--seed', type=int, default=None, help='generator seed (default CRW_SPECTRA_SEED or 42)')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description='Spectra and zeta identities of arc matrices of graphs.')
    parser.add_argument('--log-level', default=None, help='DEBUG, INFO, WARNING or ERROR')
    subparsers = parser.add_subparsers(dest='command', required=True)

    spectrum = subparsers.add_parser('spectrum', help='eigenvalues of an arc operator')
    _add_graph_arguments(spectrum)
    spectrum.add_argument('--method', choices=METHODS, default='oracle')
    spectrum.add_argument('--operator', choices=OPERATORS, default='crw',
                          help='operator for --method oracle')
    spectrum.add_argument('--coin', help='second-type coin a,b,c,d with a+c = b+d = 1')
    spectrum.add_argument('--check-oracle', dest='check_oracle', action='store_true',
                          help='compare the closed form with the dense eigen-solver')
    spectrum.add_argument('--allow-deficient', dest='allow_deficient', action='store_true',
                          help='accept semiregular bipartite graphs with fewer edges than vertices')
    spectrum.add_argument('--coefficients', action='store_true', help='include char_poly coefficients')
    spectrum.add_argument('--output', help='JSON output path (default stdout)')
    spectrum.add_argument('--csv', help='also write eigenvalues as CSV')
    spectrum.set_defaults(handler=cmd_spectrum)

    zeta = subparsers.add_parser('zeta', help='evaluate both determinant forms of a zeta function')
    _add_graph_arguments(zeta)
    zeta.add_argument('--weighting', choices=WEIGHTINGS, default='ihara')
    zeta.add_argument('--u', required=True, help='comma-separated points, e.g. 0.2,0.3i')
    zeta.add_argument('--tol', type=float, default=None)
    zeta.add_argument('--output', help='JSON output path (default stdout)')
    zeta.set_defaults(handler=cmd_zeta)

    verify = subparsers.add_parser('verify', help='run the identity and spectrum suites')
    verify.add_argument('--suite', choices=SUITES, default='all')
    verify.add_argument('--tol', type=float, default=None, help='relative tolerance for identities')
    verify.add_argument('--seed', type=int, default=None)
    verify.add_argument('--output', help='JSON output path (default stdout)')
    verify.add_argument('--csv', help='also write one CSV row per report')
    verify.set_defaults(handler=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level)
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
