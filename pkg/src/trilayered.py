#!/usr/bin/env python3
"""
🧱 Trilayered Graphs
- Layered subgraphs V1 / V2 / V3 with minimum-degree specs [A:B,C:D]
- Deletion process with the theta / subgraph / shrunken trichotomy
- Iterated pruning with per-step parameters and audit trail
- Well-placed theta search: exhaustive oracle and good-path construction
"""
import heapq
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

import numpy as np

from config.config import Config
from src.graph_core import (
    BudgetExceeded,
    Graph,
    PreconditionError,
    Verdict,
    contradiction,
)
from src.theta_search import (
    ThetaGraph,
    canonical_cycle,
    find_theta_in_pair,
    least_chord,
    verify_theta,
)

logger = logging.getLogger(__name__)

Number = Union[int, float, Fraction]


@dataclass(frozen=True)
class Trilayered:
    """Three disjoint vertex sets of a host graph; edges run only V1-V2 and V2-V3"""
    host: Graph
    v1: FrozenSet[int]
    v2: FrozenSet[int]
    v3: FrozenSet[int]
    _all: FrozenSet[int] = field(init=False, repr=False, compare=False, default=frozenset())

    def __post_init__(self):
        for name in ('v1', 'v2', 'v3'):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        object.__setattr__(self, '_all', self.v1 | self.v2 | self.v3)
        if self.v1 & self.v2 or self.v1 & self.v3 or self.v2 & self.v3:
            raise PreconditionError("layers must be disjoint", item='layers')
        for v in self.vertices:
            if not 0 <= v < self.host.n:
                raise PreconditionError(f"layer vertex {v} out of range", item='layers')
        for layer, forbidden in ((self.v1, self.v1 | self.v3), (self.v2, self.v2), (self.v3, self.v3)):
            for v in layer:
                bad = next((u for u in self.host.neighbors(v) if u in forbidden), None)
                if bad is not None:
                    raise PreconditionError(
                        f"edge {v}-{bad} does not join consecutive layers", item='layers')

    @property
    def vertices(self) -> FrozenSet[int]:
        return self._all

    def layer(self, index: int) -> FrozenSet[int]:
        return (self.v1, self.v2, self.v3)[index - 1]

    def neighbors_in(self, v: int, layer: FrozenSet[int]) -> Tuple[int, ...]:
        return tuple(u for u in self.host.neighbors(v) if u in layer)

    def layer_neighbors(self, v: int) -> Tuple[int, ...]:
        return tuple(u for u in self.host.neighbors(v) if u in self.vertices)

    def e12(self) -> int:
        return self.host.edges_between(self.v1, self.v2)

    def restrict(self, v1, v2, v3) -> 'Trilayered':
        return Trilayered(self.host, frozenset(v1), frozenset(v2), frozenset(v3))

    def local_graph(self) -> Tuple[Graph, List[int]]:
        """G[V1 ∪ V2 ∪ V3] renumbered, plus the local-to-host id list"""
        keep = sorted(self.vertices)
        return self.host.induced_subgraph(keep), keep


@dataclass(frozen=True)
class DegreeSpec:
    """[A:B,C:D]: V1 into V2, V2 into V1, V2 into V3, V3 into V2"""
    A: Number
    B: Number
    C: Number
    D: Number

    def __post_init__(self):
        for name in ('A', 'B', 'C', 'D'):
            if getattr(self, name) < 0:
                raise PreconditionError(f"{name} must be non-negative", item=name)

    def to_dict(self) -> Dict:
        return {name: float(getattr(self, name)) for name in ('A', 'B', 'C', 'D')}


def check_degree_spec(T: Trilayered, s: DegreeSpec) -> Verdict:
    """
    Check the four directional minimum degrees

    Returns:
        Verdict: ok, or the first violation as "V<layer>:<vertex>:<count><<bound>"
    """
    checks = (
        ('V1', T.v1, T.v2, s.A),
        ('V2', T.v2, T.v1, s.B),
        ('V2', T.v2, T.v3, s.C),
        ('V3', T.v3, T.v2, s.D),
    )
    for name, layer, other, bound in checks:
        for v in sorted(layer):
            count = len(T.neighbors_in(v, other))
            if count < bound:
                return Verdict(False, f'{name}:{v}:{count}<{bound}')
    return Verdict(True)


def binds_abd(s: DegreeSpec, k: int, delta: int, bd_target: Optional[int] = None) -> Verdict:
    """B >= 5, (B-4)D >= 2k (or bd_target) and A >= 2k(delta*D)^(D-1)"""
    target = 2 * k if bd_target is None else bd_target
    if s.B < 5:
        return Verdict(False, 'B>=5')
    if (s.B - 4) * s.D < target:
        return Verdict(False, f'(B-4)D>={target}')
    if s.D <= 0 or float(s.A) < 2 * k * (delta * float(s.D)) ** (float(s.D) - 1):
        return Verdict(False, 'A>=2k(delta*D)^(D-1)')
    return Verdict(True)


@dataclass(frozen=True)
class PruneParams:
    """k, d, delta, t and the layer measurements the density F is computed from"""
    k: int
    d: int
    delta: int
    t: int
    e12: int
    n1: int
    n2: int
    n3: int

    def __post_init__(self):
        if self.t < 0:
            raise PreconditionError(f"t must be non-negative, got {self.t}", item='t')

    @classmethod
    def for_trilayered(cls, T: Trilayered, k: int, d: int, delta: int, t: int) -> 'PruneParams':
        return cls(k=k, d=d, delta=delta, t=t, e12=T.e12(),
                   n1=len(T.v1), n2=len(T.v2), n3=len(T.v3))

    @property
    def f_density(self) -> Fraction:
        if self.n3 == 0:
            raise PreconditionError("V3 is empty, density F undefined", item='V3')
        return Fraction(self.d * self.e12, 8 * self.k * self.n3)

    def step_fraction(self, j: int) -> Fraction:
        return Fraction(1, self.t - j + 1)


def evaluate_conditions(p: PruneParams) -> Dict[str, Tuple[float, float, bool]]:
    """Items (a)-(e) as (lhs, rhs, holds)"""
    F = p.f_density
    k, t, e12 = p.k, p.t, p.e12
    rows = {
        '(a)': (F, 2),
        '(b)': (e12, 2 * k * F * p.n1),
        '(c)': (e12, 8 * k * (t + 1) ** 2 * (2 * p.delta * k) ** (2 * k - 1) * p.n1),
        '(d)': (e12, 8 * (math.e * t / float(F)) ** t * k * p.n2),
        '(e)': (e12, 20 * (t + 1) ** 2 * p.n2),
    }
    return {item: (float(lhs), float(rhs), bool(lhs >= rhs)) for item, (lhs, rhs) in rows.items()}


def check_well_placed_conditions(p: PruneParams) -> List[str]:
    """Failing items among (a)-(e), in order"""
    return [item for item, (_, _, holds) in evaluate_conditions(p).items() if not holds]


def _require_conditions(p: PruneParams):
    failing = check_well_placed_conditions(p)
    if failing:
        raise PreconditionError(f"conditions fail: {', '.join(failing)}", item=failing[0])


def _require_v2_degree(T: Trilayered, floor: Number):
    for v in sorted(T.v2):
        degree = len(T.layer_neighbors(v))
        if degree < floor:
            raise PreconditionError(
                f"V2 vertex {v} has degree {degree} < {floor}", item='V2_degree')


@dataclass(frozen=True)
class Removal:
    vertex: int
    layer: int
    cause: str


@dataclass
class PeelResult:
    v1: FrozenSet[int]
    v2: FrozenSet[int]
    v3: FrozenSet[int]
    removals: List[Removal]

    @property
    def empty(self) -> bool:
        return not (self.v1 or self.v2 or self.v3)


def peel(T: Trilayered, s: DegreeSpec, rng: Optional[np.random.Generator] = None) -> PeelResult:
    """
    Delete spec violators one at a time until none remain

    The least violator goes first, or a uniformly random one when `rng` is
    given. A V2 vertex short on both sides is recorded with cause C.

    Args:
        T (Trilayered): Starting layers
        s (DegreeSpec): Minimum degrees to enforce
        rng (np.random.Generator): Optional source for random removal order

    Returns:
        PeelResult: Surviving layers and the removal log
    """
    alive = {1: set(T.v1), 2: set(T.v2), 3: set(T.v3)}
    layer_of = {v: i for i in (1, 2, 3) for v in alive[i]}
    # Which spec value a neighbor in layer j counts toward, for a vertex in layer i.
    slot = {(1, 2): 'A', (2, 1): 'B', (2, 3): 'C', (3, 2): 'D'}

    counts: Dict[int, Dict[str, int]] = {}
    for v, i in layer_of.items():
        counts[v] = {name: 0 for (li, _), name in slot.items() if li == i}
        for u in T.host.neighbors(v):
            if u in layer_of:
                counts[v][slot[(i, layer_of[u])]] += 1

    def cause(v: int) -> Optional[str]:
        c = counts[v]
        for name in ('C', 'A', 'B', 'D'):
            if name in c and c[name] < getattr(s, name):
                return name
        return None

    violators = {v for v in layer_of if cause(v) is not None}
    queue = sorted(violators)
    heapq.heapify(queue)
    removed = set()
    removals: List[Removal] = []
    while violators:
        if rng is None:
            v = heapq.heappop(queue)
            if v in removed:
                continue
        else:
            ordered = sorted(violators)
            v = ordered[int(rng.integers(len(ordered)))]
        violators.discard(v)
        removed.add(v)
        removals.append(Removal(v, layer_of[v], cause(v)))
        alive[layer_of[v]].discard(v)
        for u in T.host.neighbors(v):
            if u not in layer_of or u in removed:
                continue
            counts[u][slot[(layer_of[u], layer_of[v])]] -= 1
            if u not in violators and cause(u) is not None:
                violators.add(u)
                heapq.heappush(queue, u)

    logger.debug(f"Peel removed {len(removals)} of {len(layer_of)} vertices")
    return PeelResult(frozenset(alive[1]), frozenset(alive[2]), frozenset(alive[3]), removals)


@dataclass
class ThetaFound:
    theta: ThetaGraph
    route: str
    pair: str
    flagged: bool = False
    kind: str = field(default='theta', init=False)


@dataclass
class Subgraph:
    trilayered: Trilayered
    spec: DegreeSpec
    kind: str = field(default='subgraph', init=False)


@dataclass
class Shrunken:
    v2_tilde: FrozenSet[int]
    edges: int
    kind: str = field(default='shrunken', init=False)


PruneOutcome = Union[ThetaFound, Subgraph, Shrunken]


def _theta_in_v1_pairs(T: Trilayered, pairs: Sequence[Tuple[str, FrozenSet[int]]],
                       k: int, cap: Optional[int]) -> ThetaFound:
    for name, side in pairs:
        result = find_theta_in_pair(T.host, T.v1, side, k, cap=cap)
        if result.theta is not None:
            flagged = result.route == 'exhaustive'
            if flagged:
                logger.warning(f"Theta in G[{name}] needed the exhaustive escape hatch")
            return ThetaFound(result.theta, result.route, name, flagged)
    raise contradiction("theta forced in G[V1,V2] but none located",
                        n1=len(T.v1), n2=len(T.v2), e12=T.e12(), k=k)


def prune_to_min_degree(T: Trilayered, s: DegreeSpec, a: Number, k: int, d: int,
                        rng: Optional[np.random.Generator] = None,
                        cap: Optional[int] = None) -> PruneOutcome:
    """
    One pruning pass: a theta in G[V1,V2], a subgraph meeting s, or a shrunken V2

    Args:
        T (Trilayered): Layers with every V2 degree >= d + 4k^2 + C
        s (DegreeSpec): Target spec, all four values positive
        a (Number): Edge-loss fraction in (0, 1]
        k (int): Cycle half-length
        d (int): Density parameter
        rng (np.random.Generator): Optional random removal order
        cap (int): Exhaustive cap for the theta fallback

    Returns:
        PruneOutcome: ThetaFound, Subgraph or Shrunken
    """
    for name in ('A', 'B', 'C', 'D'):
        if getattr(s, name) <= 0:
            raise PreconditionError(f"{name} must be positive", item=name)
    if not 0 < a <= 1:
        raise PreconditionError(f"a must lie in (0, 1], got {a}", item='a')
    _require_v2_degree(T, d + 4 * k * k + s.C)
    e12 = T.e12()
    if a * e12 < (s.A + k + 1) * len(T.v1) + s.B * len(T.v2):
        raise PreconditionError(
            f"a*e(V1,V2) = {float(a * e12):.2f} below (A+k+1)|V1| + B|V2|", item='(3)')

    peeled = peel(T, s, rng)
    if not peeled.empty:
        survivor = T.restrict(peeled.v1, peeled.v2, peeled.v3)
        verdict = check_degree_spec(survivor, s)
        if not verdict:
            raise contradiction("peel survivor misses the spec", reason=verdict.reason)
        return Subgraph(survivor, s)

    removed_for_c = frozenset(r.vertex for r in peeled.removals if r.layer == 2 and r.cause == 'C')
    heavy = frozenset(v for v in T.v2 if len(T.neighbors_in(v, T.v1)) >= 4 * k * k)
    v2_tilde = removed_for_c - heavy
    kept = T.host.edges_between(T.v1, v2_tilde)
    if kept >= (1 - a) * e12:
        if len(v2_tilde) * d > s.D * len(T.v3):
            raise contradiction("shrunken V2 exceeds D|V3|/d",
                                size=len(v2_tilde), D=float(s.D), n3=len(T.v3), d=d)
        logger.debug(f"Shrunken V2: {len(v2_tilde)} vertices keep {kept}/{e12} edges")
        return Shrunken(v2_tilde, kept)

    return _theta_in_v1_pairs(T, [('V1,S', heavy), ('V1,V2', T.v2)], k, cap)


@dataclass
class IterationStep:
    i: int
    a: float
    edges: int
    v2_size: int
    d_i: float
    spec: Dict
    next_edges: Optional[int] = None
    iter_large: Optional[bool] = None
    lower_bound: Optional[bool] = None
    density_rhs: Optional[float] = None
    density_holds: Optional[bool] = None

    def to_dict(self) -> Dict:
        return dict(self.__dict__)


@dataclass
class IterationResult:
    outcome: Union[ThetaFound, Subgraph]
    steps: List[IterationStep]


def iterate_prune(T: Trilayered, p: PruneParams, C: Number,
                  rng: Optional[np.random.Generator] = None,
                  cap: Optional[int] = None) -> IterationResult:
    """
    Shrink V2 through t pruning passes until a theta or a dense subgraph appears

    Step i uses a_i = 1/(t-i+1), A_i = a_i e_i/(2|V1|) - k - 1,
    B_i = a_i d_i/4 + 5 and D_i = min(2k, 8k/(a_i d_i)).

    Args:
        T (Trilayered): Layers with every V2 degree >= d + 4k^2 + C
        p (PruneParams): Parameters measured on T, t >= 1
        C (Number): V2-into-V3 degree kept fixed across steps
        rng (np.random.Generator): Optional random removal order
        cap (int): Exhaustive cap for theta fallbacks

    Returns:
        IterationResult: Outcome plus the per-step audit
    """
    if p.t < 1:
        raise PreconditionError(f"t must be at least 1, got {p.t}", item='t')
    _require_conditions(p)
    _require_v2_degree(T, p.d + 4 * p.k * p.k + C)

    k, F = p.k, p.f_density
    e_start = T.e12()
    v2 = T.v2
    survival = Fraction(1)
    steps: List[IterationStep] = []

    for i in range(p.t):
        a = p.step_fraction(i)
        e_i = T.host.edges_between(T.v1, v2)
        d_i = Fraction(e_i, len(v2))
        try:
            spec = DegreeSpec(
                A=a * e_i / (2 * len(T.v1)) - k - 1,
                B=a * d_i / 4 + 5,
                C=C,
                D=min(Fraction(2 * k), 8 * k / (a * d_i)),
            )
            step = IterationStep(i=i, a=float(a), edges=e_i, v2_size=len(v2),
                                 d_i=float(d_i), spec=spec.to_dict())
            steps.append(step)
            logger.debug(f"Prune step {i}: |V2|={len(v2)} e={e_i} spec={spec.to_dict()}")
            outcome = prune_to_min_degree(T.restrict(T.v1, v2, T.v3), spec, a, k, p.d,
                                          rng=rng, cap=cap)
        except PreconditionError as e:
            raise contradiction("pruning step lost its hypotheses",
                                step=i, item=e.item, message=str(e))

        if isinstance(outcome, ThetaFound):
            return IterationResult(outcome, steps)
        if isinstance(outcome, Subgraph):
            if not binds_abd(spec, k, p.delta):
                raise contradiction("subgraph spec misses (4)", spec=spec.to_dict())
            return IterationResult(outcome, steps)

        survival *= 1 - a
        step.next_edges = outcome.edges
        step.iter_large = outcome.edges >= (1 - a) * e_i
        step.lower_bound = outcome.edges * (p.t + 1) >= e_start
        if not step.lower_bound:
            raise contradiction("edge mass fell below e(V1,V2)/(t+1)",
                                step=i, edges=outcome.edges, start=e_start)
        density_rhs = d_i * F * a * survival
        if outcome.v2_tilde:
            step.density_rhs = float(density_rhs)
            step.density_holds = Fraction(outcome.edges, len(outcome.v2_tilde)) >= density_rhs
        v2 = outcome.v2_tilde

    result = find_theta_in_pair(T.host, T.v1, v2, k, cap=cap)
    if result.theta is None:
        raise contradiction("no theta in G[V1,V2^(t)] after all pruning steps",
                            v2_size=len(v2), steps=[s.to_dict() for s in steps])
    flagged = result.route == 'exhaustive'
    return IterationResult(ThetaFound(result.theta, result.route, 'V1,V2^(t)', flagged), steps)


@dataclass(frozen=True)
class WellPlacedCert:
    """Theta plus, for each of its V2 vertices, a V1 neighbor off the theta"""
    theta: ThetaGraph
    witnesses: Dict[int, int]

    def to_dict(self) -> Dict:
        return {
            'theta': self.theta.to_dict(),
            'witnesses': {str(v): w for v, w in sorted(self.witnesses.items())},
        }

    @classmethod
    def from_dict(cls, data: Dict) -> 'WellPlacedCert':
        return cls(
            theta=ThetaGraph.from_dict(data['theta']),
            witnesses={int(v): int(w) for v, w in data['witnesses'].items()},
        )


def verify_well_placed(T: Trilayered, cert: WellPlacedCert, k: int) -> Verdict:
    """Theta checks, containment in T, and one valid outside witness per V2 vertex"""
    theta_ok = verify_theta(T.host, cert.theta, k)
    if not theta_ok:
        return theta_ok
    on_theta = cert.theta.vertices
    outside = sorted(on_theta - T.vertices)
    if outside:
        return Verdict(False, f'theta_outside_layers:{outside[0]}')
    middle = on_theta & T.v2
    extra = sorted(set(cert.witnesses) - middle)
    if extra:
        return Verdict(False, f'witness_for_non_middle:{extra[0]}')
    for v in sorted(middle):
        w = cert.witnesses.get(v)
        if w is None:
            return Verdict(False, f'missing_witness:{v}')
        if w not in T.v1:
            return Verdict(False, f'witness_not_in_V1:{v}->{w}')
        if w in on_theta:
            return Verdict(False, f'witness_on_theta:{v}->{w}')
        if not T.host.has_edge(v, w):
            return Verdict(False, f'witness_missing_edge:{v}-{w}')
    return Verdict(True)


def _witnesses(T: Trilayered, on_theta: FrozenSet[int]) -> Optional[Dict[int, int]]:
    """Least V1 neighbor off the theta for each V2 vertex, None if one has none"""
    witnesses = {}
    for v in sorted(on_theta & T.v2):
        w = next((u for u in T.neighbors_in(v, T.v1) if u not in on_theta), None)
        if w is None:
            return None
        witnesses[v] = w
    return witnesses


def find_well_placed_exhaustive(T: Trilayered, k: int, cap: Optional[int] = None,
                                step_budget: Optional[int] = None) -> Optional[WellPlacedCert]:
    """
    Lexicographically least well-placed theta by depth-first search

    Args:
        T (Trilayered): At most `cap` vertices across the three layers
        k (int): Cycle half-length
        cap (int): Config.EXHAUSTIVE_CAP by default
        step_budget (int): Config.EXHAUSTIVE_STEP_BUDGET by default

    Returns:
        Optional[WellPlacedCert]: Certificate in host ids, or None
    """
    cap = Config.EXHAUSTIVE_CAP if cap is None else cap
    budget = Config.EXHAUSTIVE_STEP_BUDGET if step_budget is None else step_budget
    if len(T.vertices) > cap:
        raise BudgetExceeded(
            f"exhaustive well-placed search capped at {cap} vertices, got {len(T.vertices)}")

    H, keep = T.local_graph()
    min_len = max(2 * k, 4)
    steps = 0

    def accept(path: List[int]) -> Optional[WellPlacedCert]:
        chord = least_chord(H, path)
        if chord is None:
            return None
        witnesses = _witnesses(T, frozenset(keep[v] for v in path))
        if witnesses is None:
            return None
        theta = ThetaGraph(cycle=tuple(path), chord=chord).relabel(lambda v: keep[v])
        return WellPlacedCert(theta, witnesses)

    def extend(path: List[int], on_path: set, start: int) -> Optional[WellPlacedCert]:
        nonlocal steps
        steps += 1
        if steps > budget:
            raise BudgetExceeded(f"exhaustive well-placed search exceeded {budget} steps")
        tip = path[-1]
        if len(path) >= min_len and H.has_edge(tip, start) and path[1] < tip:
            found = accept(path)
            if found is not None:
                return found
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
            logger.debug(f"Well-placed theta after {steps} steps: {found.to_dict()}")
            return found
    return None


def check_constructive_preconditions(T: Trilayered, s: DegreeSpec, d: int, delta: int,
                                     k: int) -> List[str]:
    """Failing hypotheses of the good-path construction, empty when all hold"""
    failing = []
    for name in ('A', 'B', 'D'):
        if getattr(s, name) <= 0:
            failing.append(f'{name}>0')
    abd = binds_abd(s, k, delta, bd_target=2 * k - 2)
    if not abd:
        failing.append(abd.reason)
    degrees = check_degree_spec(T, DegreeSpec(s.A, s.B, d + k, s.D))
    if not degrees:
        failing.append(f'min_degree:{degrees.reason}')
    crowded = next((v for v in sorted(T.v2) if len(T.neighbors_in(v, T.v3)) > delta * d), None)
    if crowded is not None:
        failing.append(f'V3_degree:{crowded}')
    return failing


class ConstructiveSearch:
    """Grows a good path v0 ~ v1 ~ ... whose joints are 2D-long V2/V3 zigzags"""

    def __init__(self, T: Trilayered, s: DegreeSpec, d: int, delta: int, k: int, budget: int):
        self.T = T
        self.s = s
        self.d = d
        self.delta = delta
        self.k = k
        self.budget = budget
        self.hops = max(1, math.ceil(s.D))
        self.steps = 0
        self.audit: List[Dict] = []
        self.logger = logging.getLogger(__name__)

    def _tick(self):
        self.steps += 1
        if self.steps > self.budget:
            raise BudgetExceeded("budget")

    def is_good(self, path: Sequence[int]) -> bool:
        """Every V2 vertex on the path keeps a V1 neighbor off the path"""
        on_path = set(path)
        return all(
            any(u not in on_path for u in self.T.neighbors_in(v, self.T.v1))
            for v in path if v in self.T.v2
        )

    def closure(self, path: Sequence[int]) -> Optional[WellPlacedCert]:
        """Well-placed theta closed by an edge from the tip back into the path"""
        tip = path[-1]
        position = {v: i for i, v in enumerate(path)}
        back = sorted(position[u] for u in self.T.layer_neighbors(tip)
                      if u in position and position[u] < len(path) - 2)
        for j in back:
            cycle = list(path[j:])
            if len(cycle) < 2 * self.k:
                break
            local = {v: i for i, v in enumerate(cycle)}
            chords = sorted(
                (v, u) for v in cycle for u in self.T.layer_neighbors(v)
                if u > v and u in local and abs(local[u] - local[v]) not in (1, len(cycle) - 1)
            )
            if not chords:
                continue
            witnesses = _witnesses(self.T, frozenset(cycle))
            if witnesses is None:
                continue
            return WellPlacedCert(ThetaGraph(canonical_cycle(cycle), chords[0]), witnesses)
        return None

    def _record(self, stage: int, previous: Dict[int, List[int]], family: Dict[int, List[int]]):
        if stage % 2 == 1:
            i = stage // 2
            product = 1.0
            for j in range(1, i + 1):
                product *= 1 - j / float(self.s.D)
            bound = -3 * self.k + float(self.s.A) * (1 / self.delta) ** i * product
            row = {'stage': stage, 'family': len(family), 'doublestar_rhs': bound}
        else:
            edges = self.T.host.edges_between(family.keys(), self.T.v2)
            row = {'stage': stage, 'terminal_edges': edges,
                   'star_rhs': self.d * len(previous)}
        self.audit.append(row)
        self.logger.debug(f"Good-path family {row}")

    def _grow(self, family: Dict[int, List[int]], layer: FrozenSet[int]):
        grown: Dict[int, List[int]] = {}
        for terminal in sorted(family):
            path = family[terminal]
            on_path = set(path)
            for u in self.T.neighbors_in(terminal, layer):
                if u in on_path or u in grown:
                    continue
                self._tick()
                extended = path + [u]
                cert = self.closure(extended)
                if cert is not None:
                    return cert, grown
                if layer is not self.T.v3 and not self.is_good(extended):
                    continue
                grown[u] = extended
        return None, grown

    def run(self) -> WellPlacedCert:
        path = [min(self.T.v1)]
        while True:
            family = {path[-1]: path}
            for stage in range(1, 2 * self.hops):
                layer = self.T.v2 if stage % 2 == 1 else self.T.v3
                cert, grown = self._grow(family, layer)
                if cert is not None:
                    return self._done(cert)
                self._record(stage, family, grown)
                if not grown:
                    raise contradiction("good-path family ran dry",
                                        stage=stage, path=path, steps=self.steps)
                family = grown

            cert, joints = self._grow(family, self.T.v1)
            if cert is not None:
                return self._done(cert)
            if not joints:
                raise contradiction("no good extension back into V1",
                                    path=path, steps=self.steps)
            path = joints[min(joints)]

    def _done(self, cert: WellPlacedCert) -> WellPlacedCert:
        self.logger.info(f"Constructive well-placed theta after {self.steps} steps "
                         f"(cycle length {cert.theta.length})")
        return cert


def find_well_placed_constructive(T: Trilayered, s: DegreeSpec, d: int, delta: int, k: int,
                                  budget_factor: Optional[int] = None) -> WellPlacedCert:
    """
    Well-placed theta by growing good paths under the minimum-degree hypotheses

    Args:
        T (Trilayered): Layers of minimum degree at least [A:B,d+k:D]
        s (DegreeSpec): A, B, D with B >= 5, (B-4)D >= 2k-2, A >= 2k(delta*D)^(D-1)
        d (int): Density parameter
        delta (int): Cap multiplier; V2 vertices have at most delta*d V3-neighbors
        k (int): Cycle half-length
        budget_factor (int): Step budget is factor * |V(T)| * 2D

    Returns:
        WellPlacedCert: Certificate in host ids
    """
    failing = check_constructive_preconditions(T, s, d, delta, k)
    if failing:
        raise PreconditionError(f"constructive preconditions fail: {failing}", item=failing[0])
    factor = Config.CONSTRUCTIVE_BUDGET_FACTOR if budget_factor is None else budget_factor
    hops = max(1, math.ceil(s.D))
    search = ConstructiveSearch(T, s, d, delta, k, budget=factor * len(T.vertices) * 2 * hops)
    cert = search.run()
    verdict = verify_well_placed(T, cert, k)
    if not verdict:
        raise contradiction("constructive certificate fails its checker", reason=verdict.reason)
    return cert


@dataclass
class DichotomyResult:
    kind: str
    theta: Optional[ThetaGraph] = None
    cert: Optional[WellPlacedCert] = None
    route: str = ''
    steps: List[IterationStep] = field(default_factory=list)


def trilayered_dichotomy(T: Trilayered, p: PruneParams, k: int, d: int, delta: int,
                         rng: Optional[np.random.Generator] = None,
                         cap: Optional[int] = None) -> DichotomyResult:
    """
    A theta in G[V1,V2] or a well-placed theta in G[V1,V2,V3]

    Runs iterated pruning with C = d + k, then searches the surviving
    subgraph: exhaustively under the cap, by good-path growth above it.
    """
    cap = Config.EXHAUSTIVE_CAP if cap is None else cap
    _require_conditions(p)
    _require_v2_degree(T, 2 * d + 5 * k * k)
    crowded = next((v for v in sorted(T.v2) if len(T.neighbors_in(v, T.v3)) > delta * d), None)
    if crowded is not None:
        raise PreconditionError(f"V2 vertex {crowded} has more than {delta * d} V3-neighbors",
                                item='V3_degree')

    iteration = iterate_prune(T, p, d + k, rng=rng, cap=cap)
    outcome = iteration.outcome
    if isinstance(outcome, ThetaFound):
        return DichotomyResult('theta', theta=outcome.theta, route=outcome.route,
                               steps=iteration.steps)

    dense = outcome.trilayered
    if len(dense.vertices) <= cap:
        cert = find_well_placed_exhaustive(dense, k, cap=cap)
        route = 'exhaustive'
        if cert is None:
            raise contradiction("dense trilayered subgraph has no well-placed theta",
                                spec=outcome.spec.to_dict(), size=len(dense.vertices))
    else:
        cert = find_well_placed_constructive(dense, outcome.spec, d, delta, k)
        route = 'constructive'
    return DichotomyResult('well_placed', cert=cert, route=route, steps=iteration.steps)


def load_layers(text: str) -> Tuple[FrozenSet[int], FrozenSet[int], FrozenSet[int]]:
    """Layer file: three lines of whitespace-separated vertex ids (lines may be empty)"""
    lines = text.split('\n')
    while len(lines) > 3 and not lines[-1].strip():
        lines.pop()
    if len(lines) != 3:
        raise PreconditionError(f"layer file needs 3 lines, got {len(lines)}", item='layers')
    try:
        layers = [frozenset(int(x) for x in line.split()) for line in lines]
    except ValueError:
        raise PreconditionError("layer ids must be integers", item='layers')
    return layers[0], layers[1], layers[2]


def serialize_layers(T: Trilayered) -> str:
    return ''.join(' '.join(str(v) for v in sorted(layer)) + '\n'
                   for layer in (T.v1, T.v2, T.v3))
