"""
Graph representation, edge-list ingestion, deterministic generators and the
vertex-indexed and arc-indexed structural matrices.

Arcs are ordered canonically: the m forward arcs e_1..e_m in edge order, then
their inverses, so arc j + m is the inverse of arc j.
"""
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from errors import GraphInputError

logger = logging.getLogger(__name__)

# Alias used across the package for dense numpy matrices.
DenseMatrix = np.ndarray


@dataclass(frozen=True)
class Graph:
    """Simple connected graph with its symmetric arc set."""
    n: int
    m: int
    arcs: Tuple[Tuple[int, int], ...]
    degrees: Tuple[int, ...]
    label: str = ''

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise GraphInputError(f"graph needs positive vertex and edge counts, got n={self.n}, m={self.m}")
        if len(self.arcs) != 2 * self.m:
            raise GraphInputError(f"expected {2 * self.m} arcs, got {len(self.arcs)}")
        for j in range(self.m):
            (u, v), (x, y) = self.arcs[j], self.arcs[j + self.m]
            if (x, y) != (v, u):
                raise GraphInputError(f"arc {j + self.m} is not the inverse of arc {j}")
            if u == v:
                raise GraphInputError(f"self-loop at vertex {u + 1}")
        if len(set(self.arcs)) != len(self.arcs):
            raise GraphInputError("parallel edges are not supported")
        counted = [0] * self.n
        for u, _ in self.arcs:
            counted[u] += 1
        if tuple(counted) != tuple(self.degrees):
            raise GraphInputError("degree sequence does not match the arc set")
        components = nx.number_connected_components(self.to_networkx())
        if components != 1:
            raise GraphInputError(f"graph is disconnected ({components} components)", components=components)

    @classmethod
    def from_edges(cls, n: int, edges: Sequence[Tuple[int, int]], label: str = '') -> 'Graph':
        """Build a graph from 0-based edges; arc order follows edge order."""
        if n < 1:
            raise GraphInputError(f"vertex count must be positive, got {n}")
        seen = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphInputError(f"edge ({u + 1}, {v + 1}) out of range 1..{n}")
            if u == v:
                raise GraphInputError(f"self-loop at vertex {u + 1}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphInputError(f"duplicate edge ({u + 1}, {v + 1})")
            seen.add(key)
        forward = [(int(u), int(v)) for u, v in edges]
        arcs = tuple(forward + [(v, u) for u, v in forward])
        degrees = [0] * n
        for u, v in forward:
            degrees[u] += 1
            degrees[v] += 1
        return cls(n=n, m=len(forward), arcs=arcs, degrees=tuple(degrees), label=label)

    def inverse(self, j: int) -> int:
        return (j + self.m) % (2 * self.m)

    def origin(self, j: int) -> int:
        return self.arcs[j][0]

    def terminus(self, j: int) -> int:
        return self.arcs[j][1]

    def edges(self) -> List[Tuple[int, int]]:
        return list(self.arcs[:self.m])

    def origins(self) -> np.ndarray:
        return np.array([u for u, _ in self.arcs], dtype=int)

    def termini(self) -> np.ndarray:
        return np.array([v for _, v in self.arcs], dtype=int)

    def regular_degree(self) -> Optional[int]:
        """Common degree d for a regular graph, None otherwise."""
        return self.degrees[0] if len(set(self.degrees)) == 1 else None

    def is_tree(self) -> bool:
        return self.m == self.n - 1

    def to_networkx(self) -> nx.Graph:
        G = nx.Graph()
        G.add_nodes_from(range(self.n))
        G.add_edges_from(self.arcs[:self.m])
        return G

    def bipartition(self) -> Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
        """Return the two color classes (V, W), V holding vertex 0, or None if not bipartite."""
        try:
            coloring = nx.bipartite.color(self.to_networkx())
        except nx.NetworkXError:
            return None
        first = coloring[0]
        V = tuple(v for v in range(self.n) if coloring[v] == first)
        W = tuple(v for v in range(self.n) if coloring[v] != first)
        return V, W


def parse_edge_list(text: str, label: str = '') -> Graph:
    """
    Parse an edge-list document: header "n m" then m lines "u v", 1-based.
    Lines beginning with '#' and blank lines are ignored.
    """
    header = None
    edges: List[Tuple[int, int]] = []
    seen: Dict[Tuple[int, int], int] = {}

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise GraphInputError(f"expected two integers, got {line!r}", line=number)
        try:
            a, b = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise GraphInputError(f"non-integer token in {line!r}", line=number)

        if header is None:
            if a < 1 or b < 1:
                raise GraphInputError(f"header needs positive n and m, got {a} {b}", line=number)
            header = (a, b)
            continue

        n, m = header
        if len(edges) >= m:
            raise GraphInputError(f"more than the declared {m} edges", line=number)
        if not (1 <= a <= n and 1 <= b <= n):
            raise GraphInputError(f"vertex label out of range 1..{n}: {a} {b}", line=number)
        if a == b:
            raise GraphInputError(f"self-loop at vertex {a}", line=number)
        key = (min(a, b), max(a, b))
        if key in seen:
            raise GraphInputError(f"duplicate edge {a} {b} (first on line {seen[key]})", line=number)
        seen[key] = number
        edges.append((a - 1, b - 1))

    if header is None:
        raise GraphInputError("empty edge list: missing 'n m' header")
    n, m = header
    if len(edges) != m:
        raise GraphInputError(f"header declares {m} edges, found {len(edges)}")

    graph = Graph.from_edges(n, edges, label=label)
    logger.debug(f"Parsed graph {label or '<text>'}: n={graph.n}, m={graph.m}")
    return graph


def load_graph(path: str) -> Graph:
    """Read a UTF-8 edge-list file."""
    file_path = Path(path)
    try:
        text = file_path.read_text(encoding='utf-8')
    except OSError as e:
        raise GraphInputError(f"cannot read {path}: {e}")
    return parse_edge_list(text, label=file_path.stem)


def format_edge_list(graph: Graph) -> str:
    """Render a graph in the edge-list format (1-based)."""
    lines = [f"{graph.n} {graph.m}"]
    lines.extend(f"{u + 1} {v + 1}" for u, v in graph.edges())
    return '\n'.join(lines) + '\n'


def _sorted_edges(G: nx.Graph) -> List[Tuple[int, int]]:
    return sorted((min(u, v), max(u, v)) for u, v in G.edges())


def _random_connected_edges(n: int, extra_edges: int, seed: int) -> List[Tuple[int, int]]:
    """
    Uniform spanning tree of K_n from a random Pruefer sequence, then extra
    edges rejection-sampled from the same generator.
    """
    rng = np.random.default_rng(seed)
    if n == 2:
        tree = [(0, 1)]
    else:
        sequence = [int(x) for x in rng.integers(0, n, size=n - 2)]
        tree = _sorted_edges(nx.from_prufer_sequence(sequence))

    present = set(tree)
    extras: List[Tuple[int, int]] = []
    while len(extras) < extra_edges:
        u, v = (int(x) for x in rng.integers(0, n, size=2))
        key = (min(u, v), max(u, v))
        if u == v or key in present:
            continue
        present.add(key)
        extras.append(key)
    return tree + extras


def generate(family: str, **params: Any) -> Graph:
    """
    Build a graph from a named family.

    Families: cycle(n>=3), complete(n>=3), complete_bipartite(p>=1, q>=1),
    petersen, random_connected(n, extra_edges, seed), path(n>=2), star(leaves>=1).
    """
    def need(name: str, minimum: int) -> int:
        if name not in params:
            raise GraphInputError(f"{family} needs parameter '{name}'")
        value = int(params[name])
        if value < minimum:
            raise GraphInputError(f"{family}: {name} must be >= {minimum}, got {value}")
        return value

    if family == 'cycle':
        n = need('n', 3)
        return Graph.from_edges(n, [(j, (j + 1) % n) for j in range(n)], label=f'C{n}')

    if family == 'complete':
        n = need('n', 3)
        return Graph.from_edges(n, _sorted_edges(nx.complete_graph(n)), label=f'K{n}')

    if family == 'complete_bipartite':
        p, q = need('p', 1), need('q', 1)
        return Graph.from_edges(p + q, _sorted_edges(nx.complete_bipartite_graph(p, q)), label=f'K{p},{q}')

    if family == 'petersen':
        return Graph.from_edges(10, _sorted_edges(nx.petersen_graph()), label='Petersen')

    if family == 'path':
        n = need('n', 2)
        return Graph.from_edges(n, [(j, j + 1) for j in range(n - 1)], label=f'P{n}')

    if family == 'star':
        leaves = need('leaves', 1)
        return Graph.from_edges(leaves + 1, [(0, j) for j in range(1, leaves + 1)], label=f'S{leaves}')

    if family == 'random_connected':
        n = need('n', 2)
        extra = need('extra_edges', 0)
        seed = int(params.get('seed', 0))
        capacity = n * (n - 1) // 2 - (n - 1)
        if extra > capacity:
            raise GraphInputError(f"random_connected: at most {capacity} extra edges fit on {n} vertices, got {extra}")
        edges = _random_connected_edges(n, extra, seed)
        return Graph.from_edges(n, edges, label=f'R{n}-{extra}-s{seed}')

    raise GraphInputError(f"unknown graph family: {family}")


def adjacency_matrix(graph: Graph) -> DenseMatrix:
    """A(G): symmetric 0/1 matrix with A[u, v] = 1 iff (u, v) is an arc."""
    A = np.zeros((graph.n, graph.n))
    A[graph.origins(), graph.termini()] = 1.0
    return A


def degree_matrix(graph: Graph) -> DenseMatrix:
    return np.diag(np.array(graph.degrees, dtype=float))


def srw_transition_matrix(graph: Graph) -> DenseMatrix:
    """T(G) = D^{-1} A: the simple random walk on vertices."""
    return adjacency_matrix(graph) / np.array(graph.degrees, dtype=float)[:, None]


def arc_adjacency_matrix(graph: Graph) -> DenseMatrix:
    """B with B[e, f] = 1 iff t(e) = o(f)."""
    return (graph.termini()[:, None] == graph.origins()[None, :]).astype(float)


def flip_matrix(graph: Graph) -> DenseMatrix:
    """J_0: permutation matrix of the arc involution e -> e^{-1}."""
    size = 2 * graph.m
    J = np.zeros((size, size))
    rows = np.arange(size)
    J[rows, (rows + graph.m) % size] = 1.0
    return J


def semi_edge_matrices(graph: Graph) -> Tuple[DenseMatrix, DenseMatrix]:
    """
    Arc/vertex incidence pair (K, L): K[e, v] = 1 iff t(e) = v and
    L[e, v] = 1 iff o(e) = v, so that B = K L^T and A = L^T K.
    """
    vertices = np.arange(graph.n)
    K = (graph.termini()[:, None] == vertices[None, :]).astype(float)
    L = (graph.origins()[:, None] == vertices[None, :]).astype(float)
    return K, L
