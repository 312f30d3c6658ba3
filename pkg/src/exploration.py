#!/usr/bin/env python3
"""
🧭 Degree-Capped Exploration
- Breadth-first levels that avoid vertices with too many unexplored neighbors
- Big / normal level classification
- Minimum-degree audit (each level vertex keeps delta neighbors nearby)
- Level growth audit, inequalities (5)-(9) plus the final level bound
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Tuple

from src.graph_core import Graph, PreconditionError

logger = logging.getLogger(__name__)

BIG = 'big'
NORMAL = 'normal'


@dataclass(frozen=True)
class ExplorationParams:
    """Cycle half-length k, density d and degree-cap multiplier delta (default k^3)"""
    k: int
    d: int
    delta: Optional[int] = None

    def __post_init__(self):
        if self.k < 2:
            raise PreconditionError(f"k must be at least 2, got {self.k}", item='k')
        if self.d < 1:
            raise PreconditionError(f"d must be at least 1, got {self.d}", item='d')
        if self.delta is None:
            object.__setattr__(self, 'delta', self.k ** 3)
        if self.delta < 1:
            raise PreconditionError(f"delta must be at least 1, got {self.delta}", item='delta')

    @property
    def cap(self) -> int:
        """Unexplored-degree threshold delta * d"""
        return self.delta * self.d


@dataclass(frozen=True)
class Level:
    """One exploration step: candidates V'_i split into big and small, and the kept V_i"""
    index: int
    candidates: FrozenSet[int]
    big_set: FrozenSet[int]
    small_set: FrozenSet[int]
    chosen: FrozenSet[int]
    tag: str

    @property
    def is_big(self) -> bool:
        return self.tag == BIG

    @property
    def size(self) -> int:
        return len(self.chosen)


@dataclass(frozen=True)
class Exploration:
    """Levels V_0..V_depth, BFS parents of explored vertices, and V'_{depth+1}"""
    root: int
    params: ExplorationParams
    levels: Tuple[Level, ...]
    parent: Dict[int, int] = field(compare=False)
    frontier: FrozenSet[int] = frozenset()

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def V(self, i: int) -> FrozenSet[int]:
        if 0 <= i < len(self.levels):
            return self.levels[i].chosen
        return frozenset()

    def V_prime(self, i: int) -> FrozenSet[int]:
        if 0 <= i < len(self.levels):
            return self.levels[i].candidates
        if i == len(self.levels):
            return self.frontier
        return frozenset()

    def explored(self) -> FrozenSet[int]:
        return frozenset().union(*(level.chosen for level in self.levels))

    def level_of(self, v: int) -> Optional[int]:
        for level in self.levels:
            if v in level.chosen:
                return level.index
        return None

    def root_path(self, v: int) -> Tuple[int, ...]:
        """Parent chain v, parent(v), ..., root"""
        if v != self.root and v not in self.parent:
            raise PreconditionError(f"vertex {v} was never explored", item='root_path')
        chain = [v]
        while chain[-1] != self.root:
            chain.append(self.parent[chain[-1]])
        return tuple(chain)


def _candidates(G: Graph, previous: FrozenSet[int], explored: set) -> FrozenSet[int]:
    return frozenset(
        u for v in previous for u in G.neighbors(v) if u not in explored
    )


def _classify(G: Graph, index: int, candidates: FrozenSet[int], explored: set,
              p: ExplorationParams) -> Level:
    # Unexplored counts use the snapshot taken before this step marks anything.
    big = frozenset(
        v for v in candidates
        if sum(1 for u in G.neighbors(v) if u not in explored) > p.cap
    )
    small = candidates - big
    is_big = 2 * p.k * len(big) > len(candidates)
    return Level(
        index=index,
        candidates=candidates,
        big_set=big,
        small_set=small,
        chosen=candidates if is_big else small,
        tag=BIG if is_big else NORMAL,
    )


def explore(G: Graph, root: int, p: ExplorationParams, depth: int) -> Exploration:
    """
    Run the degree-capped exploration from a root

    Only vertices placed into some V_i count as explored; big-set members of a
    normal level stay unexplored and may show up again later.

    Args:
        G (Graph): Host graph
        root (int): Root vertex x
        p (ExplorationParams): k, d, delta
        depth (int): Number of levels after V_0

    Returns:
        Exploration: Levels V_0..V_depth with parents and the next candidate set
    """
    if not 0 <= root < G.n:
        raise PreconditionError(f"root {root} out of range for n={G.n}", item='root')
    if depth < 1:
        raise PreconditionError(f"depth must be at least 1, got {depth}", item='depth')

    root_set = frozenset({root})
    levels: List[Level] = [Level(0, root_set, frozenset(), root_set, root_set, NORMAL)]
    explored = {root}
    parent: Dict[int, int] = {}
    previous = root_set

    for i in range(1, depth + 1):
        level = _classify(G, i, _candidates(G, previous, explored), explored, p)
        for v in sorted(level.chosen):
            parent[v] = min(u for u in G.neighbors(v) if u in previous)
        explored |= level.chosen
        levels.append(level)
        previous = level.chosen
        logger.debug(f"Level {i}: |V'|={len(level.candidates)} |big|={len(level.big_set)} "
                     f"|V|={level.size} ({level.tag})")

    return Exploration(
        root=root,
        params=p,
        levels=tuple(levels),
        parent=parent,
        frontier=_candidates(G, previous, explored),
    )


@dataclass
class MinDegreeAudit:
    """Neighbor counts of each V_{i+1} vertex inside V_i and V'_{i+2}"""
    delta: int
    hypotheses_satisfied: bool
    reasons: List[str]
    checked: int
    violations: List[Dict]

    def to_dict(self) -> Dict:
        return {
            'delta': self.delta,
            'hypotheses_satisfied': self.hypotheses_satisfied,
            'reasons': list(self.reasons),
            'checked': self.checked,
            'violations': list(self.violations),
        }


def audit_min_degree(G: Graph, e: Exploration, delta: int) -> MinDegreeAudit:
    """
    Count, for every v in V_{i+1}, its neighbors in V_i and V'_{i+2}

    Unmet hypotheses (non-bipartite host, minimum degree below delta, or
    delta above the cap) flag the report instead of raising.

    Args:
        G (Graph): Host graph
        e (Exploration): Exploration of G
        delta (int): Claimed minimum degree

    Returns:
        MinDegreeAudit: Violations, empty whenever the hypotheses hold
    """
    reasons = []
    if not G.is_bipartite():
        reasons.append('graph is not bipartite')
    if G.min_degree() < delta:
        reasons.append(f'minimum degree {G.min_degree()} < delta {delta}')
    if delta > e.params.cap:
        reasons.append(f'delta {delta} > cap {e.params.cap}')

    violations = []
    checked = 0
    for i in range(e.depth):
        nearby = e.V(i) | e.V_prime(i + 2)
        for v in sorted(e.V(i + 1)):
            checked += 1
            count = len(G.neighbor_set(v) & nearby)
            if count < delta:
                violations.append({'i': i, 'vertex': v, 'count': count})

    if violations and not reasons:
        logger.error(f"Min-degree audit found {len(violations)} violations under its hypotheses")
    return MinDegreeAudit(
        delta=delta,
        hypotheses_satisfied=not reasons,
        reasons=reasons,
        checked=checked,
        violations=violations,
    )


@dataclass(frozen=True)
class InequalityRow:
    id: str
    i: int
    lhs: float
    rhs: float
    holds: bool

    def to_dict(self) -> Dict:
        return {'id': self.id, 'i': self.i, 'lhs': self.lhs, 'rhs': self.rhs, 'holds': self.holds}


@dataclass
class GrowthAudit:
    levels: List[Dict]
    inequalities: List[InequalityRow]

    def failures(self) -> List[InequalityRow]:
        return [row for row in self.inequalities if not row.holds]

    def to_dict(self) -> Dict:
        return {
            'levels': list(self.levels),
            'inequalities': [row.to_dict() for row in self.inequalities],
        }


def _row(ident: str, i: int, lhs, rhs, at_least: bool) -> InequalityRow:
    holds = lhs >= rhs if at_least else lhs <= rhs
    return InequalityRow(ident, i, float(lhs), float(rhs), bool(holds))


def audit_growth(G: Graph, e: Exploration, p: ExplorationParams) -> GrowthAudit:
    """
    Evaluate the level growth inequalities at every applicable index

    (5)-(8) apply for 0 <= i < depth, (9) for 1 <= i < depth, and the final
    level bound when depth >= k. Logarithms are natural.

    Args:
        G (Graph): Host graph
        e (Exploration): Exploration of G
        p (ExplorationParams): Parameters supplying k and d

    Returns:
        GrowthAudit: Level table and one row per evaluated inequality
    """
    k, d = p.k, p.d
    log_term = 400 * k * math.log(k)
    rows: List[InequalityRow] = []

    for i in range(e.depth):
        v_i, v_next, v_next_prime = e.V(i), e.V(i + 1), e.V_prime(i + 1)
        e_next = G.edges_between(v_i, v_next)
        e_next_prime = G.edges_between(v_i, v_next_prime)
        rows.append(_row('(5)', i, e_next, d * len(v_i), at_least=True))
        rows.append(_row('(6)', i, e_next, 2 * k * len(v_next), at_least=False))
        rows.append(_row('(7)', i, e_next_prime, 2 * k * len(v_next_prime), at_least=False))
        rows.append(_row('(8)', i, len(v_next), Fraction(d * len(v_i), 2 * k), at_least=True))
        if i >= 1:
            rows.append(_row('(9)', i, len(v_next), d * d * len(e.V(i - 1)) / log_term,
                             at_least=True))

    if e.depth >= k:
        if k % 2 == 0:
            rhs = d ** k / log_term ** (k // 2)
        else:
            rhs = d ** (k - 1) * len(e.V(1)) / log_term ** ((k - 1) // 2)
        rows.append(_row('(final)', k, len(e.V(k)), rhs, at_least=True))

    levels = [{'i': level.index, 'size': level.size, 'tag': level.tag} for level in e.levels]
    return GrowthAudit(levels=levels, inequalities=rows)
