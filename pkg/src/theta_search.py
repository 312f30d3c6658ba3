#!/usr/bin/env python3
"""
🔺 Theta-Graph Search
- Theta certificates (cycle of length >= 2k plus a chord) and their checker
- Maximal-path finder for bipartite graphs of minimum degree >= k
- Average-degree finder via peeling, exhaustive lexicographic oracle
- Paths of a given length between the two sides of a vertex partition
"""
import logging
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from config.config import Config
from src.graph_core import (
    BudgetExceeded,
    Graph,
    PreconditionError,
    Verdict,
    check_cycle_structure,
    contradiction,
    min_degree_core,
    normalize_edge,
)

logger = logging.getLogger(__name__)

BIPARTITION = 'bipartition'


def canonical_cycle(sequence: Sequence[int]) -> Tuple[int, ...]:
    """Rotate to start at the least vertex, then orient toward the smaller neighbor"""
    seq = list(sequence)
    if not seq:
        return ()
    start = seq.index(min(seq))
    rotated = seq[start:] + seq[:start]
    if len(rotated) > 2 and rotated[-1] < rotated[1]:
        rotated = [rotated[0]] + rotated[:0:-1]
    return tuple(rotated)


@dataclass(frozen=True)
class ThetaGraph:
    """A cycle together with a chord between two non-consecutive cycle vertices"""
    cycle: Tuple[int, ...]
    chord: Tuple[int, int]

    @property
    def vertices(self) -> FrozenSet[int]:
        return frozenset(self.cycle)

    @property
    def length(self) -> int:
        return len(self.cycle)

    def edges(self) -> List[Tuple[int, int]]:
        """Cycle edges followed by the chord"""
        L = len(self.cycle)
        ring = [normalize_edge(self.cycle[i], self.cycle[(i + 1) % L]) for i in range(L)]
        return ring + [normalize_edge(*self.chord)]

    def relabel(self, mapping: Callable[[int], int]) -> 'ThetaGraph':
        return ThetaGraph(
            cycle=canonical_cycle([mapping(v) for v in self.cycle]),
            chord=normalize_edge(mapping(self.chord[0]), mapping(self.chord[1])),
        )

    def lift(self, G: Graph) -> 'ThetaGraph':
        """Restate in the ids of the graph G was cut from"""
        return self.relabel(G.lift)

    def to_dict(self) -> Dict:
        return {'cycle': list(self.cycle), 'chord': list(self.chord)}

    @classmethod
    def from_dict(cls, data: Dict) -> 'ThetaGraph':
        a, b = data['chord']
        return cls(cycle=tuple(int(v) for v in data['cycle']), chord=(int(a), int(b)))


def verify_theta(G: Graph, t: ThetaGraph, k: int) -> Verdict:
    """
    Check a theta certificate against its host graph

    Args:
        G (Graph): Host graph
        t (ThetaGraph): Claimed theta-graph
        k (int): Cycle half-length; the cycle needs at least 2k vertices

    Returns:
        Verdict: ok, or the first failing condition
    """
    structure = check_cycle_structure(G, t.cycle)
    if not structure:
        return structure
    L = len(t.cycle)
    if L < 2 * k:
        return Verdict(False, f'cycle_too_short:{L}<{2 * k}')
    a, b = t.chord
    if a not in t.vertices or b not in t.vertices:
        return Verdict(False, f'chord_off_cycle:{a}-{b}')
    ia, ib = t.cycle.index(a), t.cycle.index(b)
    gap = abs(ia - ib)
    if gap in (0, 1, L - 1):
        return Verdict(False, f'chord_not_a_chord:{a}-{b}')
    if not G.has_edge(a, b):
        return Verdict(False, f'chord_missing_edge:{a}-{b}')
    return Verdict(True)


def _require_bipartite(H: Graph, k: int):
    if k < 3:
        raise PreconditionError(f"k must be at least 3, got {k}", item='k')
    if H.n == 0:
        raise PreconditionError("graph is empty", item='nonempty')
    if not H.is_bipartite():
        raise PreconditionError("graph is not bipartite", item='bipartite')


def find_theta_min_degree(H: Graph, k: int) -> ThetaGraph:
    """
    Theta-graph in a bipartite graph of minimum degree at least k

    Grows a path greedily from the least vertex until its endpoint has no
    neighbor off the path. All of the endpoint's neighbors then sit on the
    path at alternating positions, so the farthest one closes a cycle of
    length at least 2k and any neighbor in between gives the chord.

    The result is fixed by vertex order but is not the lexicographically
    least theta-graph of H, which only the exhaustive search guarantees.
    The chord is the one to the nearest back-neighbor past the far end.

    Args:
        H (Graph): Bipartite host graph
        k (int): At least 3

    Returns:
        ThetaGraph: Certificate in H's own vertex ids
    """
    _require_bipartite(H, k)
    for v in H.vertices():
        if H.degree(v) < k:
            raise PreconditionError(
                f"vertex {v} has degree {H.degree(v)} < {k}", item='min_degree')

    path = [0]
    on_path = {0}
    while True:
        tip = path[-1]
        step = next((u for u in H.neighbors(tip) if u not in on_path), None)
        if step is None:
            break
        path.append(step)
        on_path.add(step)

    tip = path[-1]
    position = {v: i for i, v in enumerate(path)}
    back = sorted(position[u] for u in H.neighbors(tip))
    far = back[0]
    inner = [j for j in back if far < j < len(path) - 2]
    if not inner or len(path) - far < 2 * k:
        raise contradiction("maximal path did not expose a theta-graph",
                            path=path, back_positions=back, k=k)
    cycle = path[far:]
    theta = ThetaGraph(cycle=canonical_cycle(cycle), chord=normalize_edge(tip, path[inner[0]]))
    logger.debug(f"Theta via maximal path: cycle length {theta.length}, chord {theta.chord}")
    return theta


def find_theta_avg_degree(H: Graph, k: int) -> ThetaGraph:
    """Theta-graph in a bipartite graph of average degree at least 2k, via its k-core"""
    _require_bipartite(H, k)
    if H.num_edges < k * H.n:
        raise PreconditionError(
            f"average degree {H.average_degree():.3f} < {2 * k}", item='average_degree')
    core = min_degree_core(H, k)
    if core.n == 0:
        raise contradiction("average degree >= 2k but the k-core is empty",
                            n=H.n, edges=H.num_edges, k=k)
    theta = find_theta_min_degree(core, k)
    return theta.relabel(lambda v: H.local_id(core.lift(v)))


def least_chord(H: Graph, cycle: Sequence[int]) -> Optional[Tuple[int, int]]:
    position = {v: i for i, v in enumerate(cycle)}
    L = len(cycle)
    chords = []
    for v in cycle:
        for u in H.neighbors(v):
            if u > v and u in position:
                gap = abs(position[u] - position[v])
                if gap not in (1, L - 1):
                    chords.append((v, u))
    return min(chords) if chords else None


def find_theta_exhaustive(H: Graph, k: int, cap: Optional[int] = None,
                          step_budget: Optional[int] = None) -> Optional[ThetaGraph]:
    """
    Lexicographically least theta-graph by depth-first search

    Cycles are enumerated in canonical form (least vertex first, second
    vertex smaller than the last), so the first hit is the least one.
    Works for any k >= 2 and any graph, bipartite or not.

    Args:
        H (Graph): Host graph, at most `cap` vertices
        k (int): Cycle half-length
        cap (int): Vertex cap, Config.EXHAUSTIVE_CAP by default
        step_budget (int): DFS node budget, Config.EXHAUSTIVE_STEP_BUDGET by default

    Returns:
        Optional[ThetaGraph]: Least certificate, or None when H has none
    """
    cap = Config.EXHAUSTIVE_CAP if cap is None else cap
    budget = Config.EXHAUSTIVE_STEP_BUDGET if step_budget is None else step_budget
    if H.n > cap:
        raise BudgetExceeded(f"exhaustive theta search capped at {cap} vertices, got {H.n}")

    steps = 0
    min_len = max(2 * k, 4)

    def extend(path: List[int], on_path: set, start: int) -> Optional[ThetaGraph]:
        nonlocal steps
        steps += 1
        if steps > budget:
            raise BudgetExceeded(f"exhaustive theta search exceeded {budget} steps")
        tip = path[-1]
        if len(path) >= min_len and H.has_edge(tip, start) and path[1] < tip:
            chord = least_chord(H, path)
            if chord is not None:
                return ThetaGraph(cycle=tuple(path), chord=chord)
        for u in H.neighbors(tip):
            if u > start and u not in on_path:
                path.append(u)
                on_path.add(u)
                found = extend(path, on_path, start)
                path.pop()
                on_path.discard(u)
                if found is not None:
                    return found
        return None

    for s in H.vertices():
        found = extend([s], {s}, s)
        if found is not None:
            logger.debug(f"Exhaustive theta after {steps} steps: {found.to_dict()}")
            return found
    return None


def pair_subgraph(G: Graph, side_a: Iterable[int], side_b: Iterable[int]) -> Graph:
    """G[A, B]: vertices A and B with only the edges running between them"""
    side_a, side_b = frozenset(side_a), frozenset(side_b)
    keep = sorted(side_a | side_b)
    position = {v: i for i, v in enumerate(keep)}
    edges = [
        (position[a], position[b])
        for a in sorted(side_a)
        for b in G.neighbors(a)
        if b in side_b
    ]
    return Graph.from_edges(len(keep), edges, labels=[G.labels[v] for v in keep])


@dataclass(frozen=True)
class PairSearchResult:
    theta: Optional[ThetaGraph]
    route: Optional[str]


def find_theta_in_pair(G: Graph, side_a: Iterable[int], side_b: Iterable[int], k: int,
                       cap: Optional[int] = None) -> PairSearchResult:
    """
    Theta-graph in G[A, B], stated in G's vertex ids

    Tries the average-degree route (threshold max(k, 3)), then the minimum-degree
    route on the max(k, 3)-core, then the exhaustive route on the 2-core when it
    fits under the cap.

    Args:
        G (Graph): Host graph
        side_a (Iterable[int]): First side
        side_b (Iterable[int]): Second side, disjoint from the first
        k (int): Cycle half-length
        cap (int): Exhaustive vertex cap

    Returns:
        PairSearchResult: The theta (or None) and the route that produced it
    """
    cap = Config.EXHAUSTIVE_CAP if cap is None else cap
    H = pair_subgraph(G, side_a, side_b)
    if H.n == 0 or H.num_edges == 0:
        return PairSearchResult(None, None)

    def to_host(t: ThetaGraph, sub: Graph) -> ThetaGraph:
        return t.relabel(lambda v: G.local_id(sub.lift(v)))

    kk = max(k, 3)
    if H.num_edges >= kk * H.n:
        return PairSearchResult(to_host(find_theta_avg_degree(H, kk), H), 'avg_degree')

    core = min_degree_core(H, kk)
    if core.n > 0:
        return PairSearchResult(to_host(find_theta_min_degree(core, kk), core), 'min_degree')

    cyclic = min_degree_core(H, 2)
    if 0 < cyclic.n <= cap:
        theta = find_theta_exhaustive(cyclic, k, cap=cap)
        if theta is not None:
            return PairSearchResult(to_host(theta, cyclic), 'exhaustive')
    elif cyclic.n > cap:
        logger.debug(f"Pair 2-core has {cyclic.n} vertices, over the exhaustive cap {cap}")
    return PairSearchResult(None, None)


def _theta_adjacency(t: ThetaGraph) -> Dict[int, List[int]]:
    adjacency: Dict[int, List[int]] = {v: [] for v in t.cycle}
    for u, v in t.edges():
        adjacency[u].append(v)
        adjacency[v].append(u)
    return {v: sorted(nbrs) for v, nbrs in adjacency.items()}


def path_between_parts(t: ThetaGraph, W: Iterable[int], Z: Iterable[int],
                       l: int) -> Union[Tuple[int, ...], str]:
    """
    Least simple path of length l in t from W to Z, or BIPARTITION

    A theta-graph has such a path unless W and Z are its two colour classes,
    so an empty search over a non-bipartition is a contradiction.

    Args:
        t (ThetaGraph): The theta-graph
        W (Iterable[int]): Starting side
        Z (Iterable[int]): Ending side, W and Z partition V(t)
        l (int): Path length in edges, 1 <= l <= |V(t)| - 1

    Returns:
        Union[Tuple[int, ...], str]: Vertex sequence of l + 1 vertices, or BIPARTITION
    """
    W, Z = frozenset(W), frozenset(Z)
    if not W or not Z:
        raise PreconditionError("both parts must be non-empty", item='partition')
    if W & Z or (W | Z) != t.vertices:
        raise PreconditionError("W and Z must partition the theta vertices", item='partition')
    if not 1 <= l <= len(t.vertices) - 1:
        raise PreconditionError(f"path length {l} outside 1..{len(t.vertices) - 1}", item='l')

    adjacency = _theta_adjacency(t)

    def walk(path: List[int]) -> Optional[Tuple[int, ...]]:
        if len(path) == l + 1:
            return tuple(path) if path[-1] in Z else None
        for u in adjacency[path[-1]]:
            if u not in path:
                path.append(u)
                found = walk(path)
                path.pop()
                if found is not None:
                    return found
        return None

    for w in sorted(W):
        found = walk([w])
        if found is not None:
            return found

    if all((u in W) != (v in W) for u, v in t.edges()):
        return BIPARTITION
    raise contradiction("no W-Z path although W, Z is not a bipartition",
                        theta=t.to_dict(), W=sorted(W), Z=sorted(Z), l=l)
