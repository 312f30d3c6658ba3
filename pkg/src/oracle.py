#!/usr/bin/env python3
"""
🔮 Brute-Force Oracles & Generators
- Fixed-length cycle detection (complete, lexicographically least)
- ex(n, C_2k) by naive enumeration and by pruned isomorphism-aware search
- Seeded random bipartite / min-degree / trilayered corpora
- Polarity graphs of prime order, planted extraction instances
"""
import itertools
import logging
import math
import threading
from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple, Union

import networkx as nx
import numpy as np

from config.config import Config
from src.exploration import Exploration, ExplorationParams, explore
from src.graph_core import (
    BudgetExceeded,
    CycleCert,
    Graph,
    PreconditionError,
    serialize_graph,
)
from src.theta_search import ThetaGraph
from src.trilayered import Trilayered, WellPlacedCert

logger = logging.getLogger(__name__)


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _distances_to(G: Graph, target: int, floor: int = 0) -> Dict[int, int]:
    """BFS distances to `target` using only vertices >= floor"""
    dist = {target: 0}
    queue = deque([target])
    while queue:
        v = queue.popleft()
        for u in G.neighbors(v):
            if u >= floor and u not in dist:
                dist[u] = dist[v] + 1
                queue.append(u)
    return dist


def contains_cycle(G: Graph, L: int) -> Optional[CycleCert]:
    """
    Lexicographically least simple cycle of length exactly L, or None

    Args:
        G (Graph): Graph to search
        L (int): Cycle length, at least 3

    Returns:
        Optional[CycleCert]: Cycle starting at its least vertex
    """
    if L < 3:
        raise PreconditionError(f"cycle length must be at least 3, got {L}", item='L')
    if L > G.n:
        return None

    for s in G.vertices():
        dist = _distances_to(G, s, floor=s)
        path = [s]
        on_path = {s}

        def extend() -> Optional[CycleCert]:
            tip = path[-1]
            if len(path) == L:
                if G.has_edge(tip, s) and path[1] < tip:
                    return CycleCert(tuple(path))
                return None
            for u in G.neighbors(tip):
                if u <= s or u in on_path or dist.get(u, L + 1) > L - len(path):
                    continue
                path.append(u)
                on_path.add(u)
                found = extend()
                path.pop()
                on_path.discard(u)
                if found is not None:
                    return found
            return None

        found = extend()
        if found is not None:
            return found
    return None


def _has_path_of_length(G: Graph, u: int, v: int, length: int) -> bool:
    """Simple u-v path with exactly `length` edges"""
    dist = _distances_to(G, v)
    if dist.get(u, length + 1) > length:
        return False
    path = [u]
    on_path = {u}

    def extend() -> bool:
        tip = path[-1]
        if len(path) - 1 == length:
            return tip == v
        remaining = length - len(path)
        for w in G.neighbors(tip):
            if w in on_path or dist.get(w, length + 1) > remaining:
                continue
            if w == v and remaining > 0:
                continue
            path.append(w)
            on_path.add(w)
            ok = extend()
            path.pop()
            on_path.discard(w)
            if ok:
                return True
        return False

    return extend()


@dataclass
class ExResult:
    n: int
    k: int
    ex: int
    witness: Graph
    strategy: str

    def to_dict(self) -> Dict:
        return {'n': self.n, 'k': self.k, 'ex': self.ex, 'witness': serialize_graph(self.witness)}


def _complete(n: int, k: int) -> ExResult:
    witness = Graph.from_edges(n, itertools.combinations(range(n), 2))
    return ExResult(n, k, witness.num_edges, witness, 'complete')


def ex_naive(n: int, k: int) -> ExResult:
    """ex(n, C_2k) by trying every edge set, densest first (n <= 6)"""
    if k < 2:
        raise PreconditionError(f"k must be at least 2, got {k}", item='k')
    if n > 6:
        raise BudgetExceeded(f"naive enumeration is limited to n <= 6, got {n}")
    pairs = list(itertools.combinations(range(n), 2))
    for m in range(len(pairs), -1, -1):
        for edges in itertools.combinations(pairs, m):
            G = Graph.from_edges(n, edges)
            if contains_cycle(G, 2 * k) is None:
                return ExResult(n, k, m, G, 'naive')
    return ExResult(n, k, 0, Graph.empty(n), 'naive')


class ExSearch:
    """
    Level-by-level edge augmentation over C_2k-free isomorphism classes

    Children are bucketed by degree sequence plus Weisfeiler-Lehman hash and
    only dropped after an explicit isomorphism check.
    """

    def __init__(self, n: int, k: int, threads: int, state_budget: int):
        self.n = n
        self.k = k
        self.threads = max(1, threads)
        self.state_budget = state_budget
        self.logger = logging.getLogger(__name__)

    def _children(self, shard: List[Graph], out: List, errors: List):
        try:
            for g in shard:
                for u, v in itertools.combinations(range(self.n), 2):
                    if g.has_edge(u, v) or _has_path_of_length(g, u, v, 2 * self.k - 1):
                        continue
                    child = Graph.from_edges(self.n, list(g.edges) + [(u, v)])
                    nxg = child.to_networkx()
                    key = (tuple(sorted(child.degrees().tolist())),
                           nx.weisfeiler_lehman_graph_hash(nxg, iterations=3))
                    out.append((key, child, nxg))
        except Exception as e:
            self.logger.error(f"Shard worker failed: {e}")
            errors.append(e)

    def _expand(self, level: List[Graph]) -> List[Graph]:
        shards = [level[j::self.threads] for j in range(self.threads)]
        outputs: List[List] = [[] for _ in shards]
        errors: List[Exception] = []
        workers = [
            threading.Thread(target=self._children, args=(shard, out, errors), daemon=True)
            for shard, out in zip(shards, outputs)
        ]
        for worker in workers:
            worker.start()
        for worker in workers:
            worker.join()
        if errors:
            raise errors[0]

        buckets: Dict[Tuple, List[nx.Graph]] = {}
        kept: List[Graph] = []
        for out in outputs:
            for key, child, nxg in out:
                bucket = buckets.setdefault(key, [])
                if any(nx.vf2pp_is_isomorphic(nxg, other) for other in bucket):
                    continue
                bucket.append(nxg)
                kept.append(child)
                if len(kept) > self.state_budget:
                    raise BudgetExceeded(
                        f"more than {self.state_budget} classes at one edge count")
        return sorted(kept, key=lambda g: sorted(g.edges))

    def run(self) -> ExResult:
        level = [Graph.empty(self.n)]
        m = 0
        while True:
            children = self._expand(level)
            if not children:
                break
            level = children
            m += 1
            self.logger.debug(f"ex({self.n}, C{2 * self.k}): {len(level)} classes with {m} edges")
        return ExResult(self.n, self.k, m, level[0], 'pruned')


def ex_brute(n: int, k: int, threads: Optional[int] = None, max_n: Optional[int] = None,
             state_budget: Optional[int] = None) -> ExResult:
    """
    Exact ex(n, C_2k) with a C_2k-free witness

    Args:
        n (int): Vertex count
        k (int): Cycle half-length, at least 2
        threads (int): Shard workers, Config.DEFAULT_THREADS by default
        max_n (int): Size limit, Config.EX_MAX_N_K2 for k = 2 else Config.EX_MAX_N
        state_budget (int): Classes kept per edge count

    Returns:
        ExResult: Maximum edge count and one extremal graph
    """
    if k < 2:
        raise PreconditionError(f"k must be at least 2, got {k}", item='k')
    if n < 0:
        raise PreconditionError(f"n must be non-negative, got {n}", item='n')
    if n < 2 * k:
        return _complete(n, k)
    limit = max_n if max_n is not None else (Config.EX_MAX_N_K2 if k == 2 else Config.EX_MAX_N)
    if n > limit:
        raise BudgetExceeded(f"ex_brute limited to n <= {limit} for k={k}, got {n}")
    search = ExSearch(
        n, k,
        threads=Config.DEFAULT_THREADS if threads is None else threads,
        state_budget=Config.EX_STATE_BUDGET if state_budget is None else state_budget,
    )
    result = search.run()
    logger.info(f"ex({n}, C{2 * k}) = {result.ex}")
    return result


def gen_random_bipartite(n1: int, n2: int, p: float, seed: int) -> Graph:
    """Left side 0..n1-1, right side n1..n1+n2-1, each cross pair with probability p"""
    if not 0 <= p <= 1:
        raise PreconditionError(f"probability must lie in [0, 1], got {p}", item='p')
    mask = _rng(seed).random((n1, n2)) < p
    rows, cols = np.nonzero(mask)
    return Graph.from_edges(n1 + n2, zip(rows.tolist(), (cols + n1).tolist()))


def gen_min_degree_bipartite(n1: int, n2: int, delta: int, seed: int) -> Graph:
    """Union of random delta-out choices from both sides; min degree >= delta"""
    if delta < 0 or delta > min(n1, n2):
        raise PreconditionError(f"delta={delta} infeasible for sides {n1}, {n2}", item='delta')
    rng = _rng(seed)
    edges = set()
    for a in range(n1):
        for b in rng.choice(n2, size=delta, replace=False).tolist():
            edges.add((a, n1 + b))
    for b in range(n2):
        for a in rng.choice(n1, size=delta, replace=False).tolist():
            edges.add((a, n1 + b))
    return Graph.from_edges(n1 + n2, sorted(edges))


def gen_random_trilayered(n1: int, n2: int, n3: int, p12: float, p23: float,
                          seed: int) -> Trilayered:
    """Layers V1 = 0.., V2 next, V3 last with independent V1-V2 and V2-V3 edges"""
    for name, p in (('p12', p12), ('p23', p23)):
        if not 0 <= p <= 1:
            raise PreconditionError(f"{name} must lie in [0, 1], got {p}", item=name)
    rng = _rng(seed)
    edges = []
    rows, cols = np.nonzero(rng.random((n1, n2)) < p12)
    edges += zip(rows.tolist(), (cols + n1).tolist())
    rows, cols = np.nonzero(rng.random((n2, n3)) < p23)
    edges += zip((rows + n1).tolist(), (cols + n1 + n2).tolist())
    host = Graph.from_edges(n1 + n2 + n3, edges)
    return Trilayered(host, frozenset(range(n1)), frozenset(range(n1, n1 + n2)),
                      frozenset(range(n1 + n2, n1 + n2 + n3)))


def _is_prime(q: int) -> bool:
    return q >= 2 and all(q % p for p in range(2, int(math.isqrt(q)) + 1))


def gen_polarity_graph(q: int) -> Graph:
    """
    Polarity graph of PG(2, q) for prime q <= 13

    Points are normalized vectors over GF(q); u ~ v iff u.v = 0 and u != v.

    Args:
        q (int): Prime order

    Returns:
        Graph: q^2+q+1 vertices, q(q+1)^2/2 edges, C4-free
    """
    if not _is_prime(q) or q > 13:
        raise PreconditionError(f"q must be a prime <= 13, got {q}", item='q')
    points = [(1, a, b) for a in range(q) for b in range(q)]
    points += [(0, 1, a) for a in range(q)]
    points.append((0, 0, 1))
    P = np.array(points, dtype=np.int64)
    orthogonal = (P @ P.T) % q == 0
    np.fill_diagonal(orthogonal, False)
    rows, cols = np.nonzero(np.triu(orthogonal))
    return Graph.from_edges(len(points), zip(rows.tolist(), cols.tolist()))


def gen_complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_networkx(nx.complete_bipartite_graph(a, b))


def gen_cycle(n: int) -> Graph:
    return Graph.from_networkx(nx.cycle_graph(n))


def gen_path(n: int) -> Graph:
    return Graph.from_networkx(nx.path_graph(n))


def gen_star(leaves: int) -> Graph:
    """Center 0 with `leaves` leaves"""
    return Graph.from_networkx(nx.star_graph(leaves))


def gen_petersen() -> Graph:
    return Graph.from_networkx(nx.petersen_graph())


def gen_complete(n: int) -> Graph:
    return Graph.from_networkx(nx.complete_graph(n))


@dataclass
class PlantedInstance:
    """A graph whose exploration from `root` holds a planted theta at `level`"""
    graph: Graph
    root: int
    k: int
    level: int
    params: ExplorationParams
    cert: Union[ThetaGraph, WellPlacedCert]

    def explore(self) -> Exploration:
        return explore(self.graph, self.root, self.params, depth=self.level + 1)

    def trilayered(self, e: Exploration) -> Trilayered:
        """G[V_{i-1}, V_i, V'_{i+1}] for the planted level i"""
        i = self.level
        return Trilayered(self.graph, e.V(i - 1), e.V(i), e.V_prime(i + 1))


def gen_planted_extraction(k: int, seed: int, well_placed: bool = False) -> PlantedInstance:
    """
    Random tree of depth i with m >= max(k, 3) leaves, plus a theta on those leaves

    The theta is the cycle y1 z1 y2 z2 ... ym zm through fresh vertices z one
    level deeper, with chord y1 z_j. In well-placed mode (i >= 2) the closing
    vertex z_m is replaced by a fresh vertex one level up. The exploration uses
    a cap above every degree so its levels are the BFS levels.

    Args:
        k (int): Cycle half-length, at least 2
        seed (int): Generator seed
        well_placed (bool): Plant a well-placed theta instead of a level-pair one

    Returns:
        PlantedInstance: Graph, root, level and certificate in graph ids
    """
    if k < 2:
        raise PreconditionError(f"k must be at least 2, got {k}", item='k')
    rng = _rng(seed)
    lowest = 2 if well_placed else 1
    if k - 1 < lowest:
        raise PreconditionError(f"well-placed planting needs k >= 3, got {k}", item='k')
    i = int(rng.integers(lowest, k))
    m = max(k, 3) + int(rng.integers(0, 3))

    depth_of = {0: 0}
    parent_of: Dict[int, int] = {}
    levels = [[0]]
    next_id = 1
    # level sizes never shrink so every vertex above keeps a child
    sizes = [1] + sorted(int(rng.integers(1, m + 1)) for _ in range(i - 1)) + [m]
    for depth in range(1, i + 1):
        above = levels[-1]
        count = sizes[depth]
        current = list(range(next_id, next_id + count))
        next_id += count
        for idx, v in enumerate(current):
            parent = above[idx] if idx < len(above) else above[int(rng.integers(len(above)))]
            parent_of[v] = parent
            depth_of[v] = depth
        levels.append(current)

    ys = levels[i]
    z_count = m - 1 if well_placed else m
    zs = list(range(next_id, next_id + z_count))
    next_id += z_count
    edges = list(parent_of.items())
    closing = zs
    if well_placed:
        u = next_id
        next_id += 1
        above = levels[i - 2]
        edges.append((u, above[int(rng.integers(len(above)))]))
        closing = zs + [u]
    cycle: List[int] = []
    for y, z in zip(ys, closing):
        cycle += [y, z]
    for idx in range(len(cycle)):
        edges.append((cycle[idx], cycle[(idx + 1) % len(cycle)]))
    j = int(rng.integers(1, m - 1))
    chord = (ys[0], zs[j])
    edges.append(chord)

    n = next_id
    perm = rng.permutation(n).tolist()
    G = Graph.from_edges(n, [(perm[a], perm[b]) for a, b in edges])
    theta = ThetaGraph(cycle=tuple(cycle), chord=chord).relabel(lambda v: perm[v])
    params = ExplorationParams(k=k, d=1, delta=n + 1)
    root = perm[0]

    cert: Union[ThetaGraph, WellPlacedCert] = theta
    if well_placed:
        instance = PlantedInstance(G, root, k, i, params, theta)
        e = instance.explore()
        T = instance.trilayered(e)
        witnesses = {}
        for y in sorted(theta.vertices & T.v2):
            witnesses[y] = next(w for w in T.neighbors_in(y, T.v1) if w not in theta.vertices)
        cert = WellPlacedCert(theta, witnesses)
    logger.debug(f"Planted {'well-placed' if well_placed else 'level-pair'} theta: "
                 f"k={k} level={i} m={m} n={n}")
    return PlantedInstance(G, root, k, i, params, cert)
