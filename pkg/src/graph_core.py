#!/usr/bin/env python3
"""
🔗 Graph Core
- Immutable simple graphs with labels back to the parent graph
- Graph text format (load / serialize / files)
- Bipartite half and minimum-degree core reductions
- Cycle certificate checker shared by every module
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


class GraphParseError(ValueError):
    """Malformed graph text; carries the 1-based line number"""

    def __init__(self, message: str, line_no: Optional[int] = None):
        self.line_no = line_no
        prefix = f"line {line_no}: " if line_no is not None else ""
        super().__init__(prefix + message)


class PreconditionError(ValueError):
    """An operation's hypotheses do not hold; `item` names the failing one"""

    def __init__(self, message: str, item: Optional[str] = None):
        self.item = item
        super().__init__(message)


class BudgetExceeded(RuntimeError):
    """A size cap or step budget was exhausted"""


class InternalContradiction(RuntimeError):
    """Reached a state the underlying argument rules out"""

    def __init__(self, message: str, state: Optional[Dict] = None):
        self.state = state or {}
        super().__init__(message)


def contradiction(message: str, /, **state) -> InternalContradiction:
    """Log the state dump at ERROR and build the exception for the caller to raise"""
    logger.error(f"Internal contradiction: {message} | state={state}")
    return InternalContradiction(message, state=state)


@dataclass(frozen=True)
class Verdict:
    """Checker result; truthy iff the certificate is valid"""
    ok: bool
    reason: str = 'ok'

    def __bool__(self) -> bool:
        return self.ok


def normalize_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """
    Undirected simple graph on vertices 0..n-1.

    `labels[v]` is the id of v in the graph this one was cut out of
    (identity for graphs built from scratch), so certificates found in
    subgraphs can always be stated in parent-graph ids.
    """
    n: int
    edges: FrozenSet[Edge]
    adjacency: Tuple[Tuple[int, ...], ...]
    labels: Tuple[int, ...]
    _neighbor_sets: Tuple[FrozenSet[int], ...] = field(repr=False, compare=False, default=())
    _index: Dict[int, int] = field(repr=False, compare=False, default_factory=dict)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]],
                   labels: Optional[Sequence[int]] = None) -> 'Graph':
        """
        Build a graph from an edge list

        Args:
            n (int): Vertex count
            edges (Iterable): Unordered vertex pairs
            labels (Sequence[int]): Parent-graph ids, identity when omitted

        Returns:
            Graph: The immutable graph
        """
        if n < 0:
            raise PreconditionError(f"vertex count must be non-negative, got {n}", item='n')
        edge_set = set()
        neighbors: List[List[int]] = [[] for _ in range(n)]
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise PreconditionError(f"edge ({u}, {v}) out of range for n={n}", item='edges')
            if u == v:
                raise PreconditionError(f"self-loop at vertex {u}", item='edges')
            e = normalize_edge(u, v)
            if e in edge_set:
                raise PreconditionError(f"duplicate edge {e}", item='edges')
            edge_set.add(e)
            neighbors[u].append(v)
            neighbors[v].append(u)

        adjacency = tuple(tuple(sorted(nbrs)) for nbrs in neighbors)
        labels = tuple(range(n)) if labels is None else tuple(int(x) for x in labels)
        if len(labels) != n:
            raise PreconditionError(f"expected {n} labels, got {len(labels)}", item='labels')
        return cls(
            n=n,
            edges=frozenset(edge_set),
            adjacency=adjacency,
            labels=labels,
            _neighbor_sets=tuple(frozenset(nbrs) for nbrs in adjacency),
            _index={label: v for v, label in enumerate(labels)},
        )

    @classmethod
    def empty(cls, n: int = 0) -> 'Graph':
        return cls.from_edges(n, [])

    @classmethod
    def from_networkx(cls, nxg: nx.Graph) -> 'Graph':
        """Convert a networkx graph, numbering its nodes in sorted order"""
        relabeled = nx.convert_node_labels_to_integers(nxg, ordering='sorted')
        return cls.from_edges(relabeled.number_of_nodes(), relabeled.edges())

    def to_networkx(self) -> nx.Graph:
        nxg = nx.Graph()
        nxg.add_nodes_from(range(self.n))
        nxg.add_edges_from(self.edges)
        return nxg

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def vertices(self) -> range:
        return range(self.n)

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self.adjacency[v]

    def neighbor_set(self, v: int) -> FrozenSet[int]:
        return self._neighbor_sets[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def degrees(self) -> np.ndarray:
        return np.array([len(nbrs) for nbrs in self.adjacency], dtype=np.int64)

    def min_degree(self) -> int:
        return int(self.degrees().min()) if self.n else 0

    def average_degree(self) -> float:
        return 2.0 * self.num_edges / self.n if self.n else 0.0

    def has_edge(self, u: int, v: int) -> bool:
        return 0 <= u < self.n and v in self._neighbor_sets[u]

    def is_bipartite(self) -> bool:
        return nx.is_bipartite(self.to_networkx())

    def edges_between(self, side_a: Iterable[int], side_b: Iterable[int]) -> int:
        """e(A, B) for disjoint vertex sets A and B"""
        side_b = frozenset(side_b)
        return sum(len(self._neighbor_sets[a] & side_b) for a in side_a)

    def lift(self, v: int) -> int:
        return self.labels[v]

    def lift_all(self, vertices: Iterable[int]) -> Tuple[int, ...]:
        return tuple(self.labels[v] for v in vertices)

    def local_id(self, label: int) -> int:
        """Inverse of `lift`"""
        return self._index[label]

    def induced_subgraph(self, vertices: Iterable[int]) -> 'Graph':
        """
        Induced subgraph, renumbered 0..m-1 in increasing vertex order;
        its labels point at this graph's labels.
        """
        keep = sorted(set(vertices))
        position = {v: i for i, v in enumerate(keep)}
        sub_edges = [
            (position[u], position[v])
            for u in keep
            for v in self.adjacency[u]
            if u < v and v in position
        ]
        return Graph.from_edges(len(keep), sub_edges, labels=[self.labels[v] for v in keep])

    def to_text(self) -> str:
        return serialize_graph(self)


def load_graph(text: str) -> Graph:
    """
    Parse the graph text format: header "n m", then m lines "u v"

    Args:
        text (str): File contents

    Returns:
        Graph: Graph with exactly the listed edges

    Raises:
        GraphParseError: On malformed lines, ids out of range, self-loops, duplicates
    """
    lines = text.split('\n')
    header = lines[0].split() if lines else []
    if len(header) != 2:
        raise GraphParseError("header must be 'n m'", line_no=1)
    try:
        n, m = int(header[0]), int(header[1])
    except ValueError:
        raise GraphParseError(f"header values must be integers, got {lines[0]!r}", line_no=1)
    if n < 0 or m < 0:
        raise GraphParseError("header values must be non-negative", line_no=1)

    seen = set()
    edges: List[Edge] = []
    line_no = 1
    for line_no in range(2, len(lines) + 1):
        raw = lines[line_no - 1]
        if len(edges) == m:
            if raw.strip():
                raise GraphParseError(f"unexpected content after {m} edges: {raw!r}", line_no)
            continue
        parts = raw.split()
        if len(parts) != 2:
            raise GraphParseError(f"expected 'u v', got {raw!r}", line_no)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError(f"vertex ids must be integers, got {raw!r}", line_no)
        for x in (u, v):
            if x < 0 or x >= n:
                raise GraphParseError(f"vertex id {x} out of range for n={n}", line_no)
        if u == v:
            raise GraphParseError(f"self-loop at vertex {u}", line_no)
        e = normalize_edge(u, v)
        if e in seen:
            raise GraphParseError(f"duplicate edge {e[0]} {e[1]}", line_no)
        seen.add(e)
        edges.append(e)

    if len(edges) != m:
        raise GraphParseError(f"expected {m} edges, found {len(edges)}", line_no)
    return Graph.from_edges(n, edges)


def serialize_graph(G: Graph) -> str:
    """Graph text with edges sorted lexicographically"""
    body = ''.join(f"{u} {v}\n" for u, v in sorted(G.edges))
    return f"{G.n} {G.num_edges}\n{body}"


def read_graph_file(path: str) -> Graph:
    with open(path, 'r') as f:
        return load_graph(f.read())


def write_graph_file(G: Graph, path: str):
    with open(path, 'w') as f:
        f.write(serialize_graph(G))


@dataclass(frozen=True)
class Bipartition:
    """Two disjoint vertex sets covering the graph"""
    left: FrozenSet[int]
    right: FrozenSet[int]

    def crosses(self, u: int, v: int) -> bool:
        return (u in self.left) != (v in self.left)


def bipartite_half(G: Graph) -> Tuple[Bipartition, Graph]:
    """
    Bipartite spanning subgraph keeping at least half of the edges

    Starts from a BFS 2-colouring of every component (so bipartite inputs keep
    every edge), then moves single vertices across while that increases the cut.

    Args:
        G (Graph): Input graph

    Returns:
        Tuple[Bipartition, Graph]: Locally optimal cut and its crossing edges
    """
    if G.n == 0:
        raise PreconditionError("graph is empty", item='nonempty')

    side = [0] * G.n
    nxg = G.to_networkx()
    for component in sorted(nx.connected_components(nxg), key=min):
        for u, v in nx.bfs_edges(nxg, min(component), sort_neighbors=sorted):
            side[v] = 1 - side[u]

    moves = 0
    improved = True
    while improved:
        improved = False
        for v in G.vertices():
            same = sum(1 for u in G.neighbors(v) if side[u] == side[v])
            if 2 * same > G.degree(v):
                side[v] = 1 - side[v]
                moves += 1
                improved = True

    crossing = [(u, v) for u, v in G.edges if side[u] != side[v]]
    bipartition = Bipartition(
        left=frozenset(v for v in G.vertices() if side[v] == 0),
        right=frozenset(v for v in G.vertices() if side[v] == 1),
    )
    logger.debug(f"Bipartite half: kept {len(crossing)}/{G.num_edges} edges after {moves} moves")
    return bipartition, Graph.from_edges(G.n, crossing, labels=G.labels)


def min_degree_core(G: Graph, delta: int) -> Graph:
    """
    Maximal induced subgraph of minimum degree at least delta (possibly empty)

    Args:
        G (Graph): Input graph
        delta (int): Degree floor, at least 1

    Returns:
        Graph: The core, labelled back into G
    """
    if delta < 1:
        raise PreconditionError(f"degree floor must be at least 1, got {delta}", item='delta')
    core = nx.k_core(G.to_networkx(), k=delta)
    result = G.induced_subgraph(core.nodes)
    logger.debug(f"Min-degree core (delta={delta}): {result.n}/{G.n} vertices kept")
    return result


@dataclass(frozen=True)
class CycleCert:
    """A cycle given by its vertex sequence"""
    vertices: Tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.vertices)

    def lift(self, G: Graph) -> 'CycleCert':
        return CycleCert(G.lift_all(self.vertices))

    def to_dict(self) -> Dict:
        return {'cycle': list(self.vertices)}


def check_cycle_structure(G: Graph, sequence: Sequence[int]) -> Verdict:
    """Distinct vertices, consecutive and wraparound pairs all edges of G"""
    if len(sequence) < 3:
        return Verdict(False, 'too_short')
    for v in sequence:
        if not 0 <= v < G.n:
            return Verdict(False, f'vertex_out_of_range:{v}')
    if len(set(sequence)) != len(sequence):
        repeated = next(v for v in sequence if list(sequence).count(v) > 1)
        return Verdict(False, f'repeated_vertex:{repeated}')
    for idx, u in enumerate(sequence):
        v = sequence[(idx + 1) % len(sequence)]
        if not G.has_edge(u, v):
            return Verdict(False, f'missing_edge:{u}-{v}')
    return Verdict(True)


def verify_cycle(G: Graph, c: CycleCert, expected_len: int) -> Verdict:
    """
    Check a cycle certificate against its host graph

    Args:
        G (Graph): Host graph
        c (CycleCert): Claimed cycle
        expected_len (int): Claimed length

    Returns:
        Verdict: ok, or the first failure as a reason code
    """
    structure = check_cycle_structure(G, c.vertices)
    if not structure:
        return structure
    if c.length != expected_len:
        return Verdict(False, f'length_mismatch:{c.length}!={expected_len}')
    return Verdict(True)
