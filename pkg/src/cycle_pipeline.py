#!/usr/bin/env python3
"""
🔁 Even Cycle Pipeline
- Cycle extraction from a theta found between exploration levels
- End-to-end C_2k search: bipartite half, core, exploration, level searches
- Extremal bound calculator and audit
"""
import json
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Union

import numpy as np

from config.config import Config
from src.exploration import Exploration, ExplorationParams, audit_growth, explore
from src.graph_core import (
    BudgetExceeded,
    CycleCert,
    Graph,
    PreconditionError,
    bipartite_half,
    contradiction,
    min_degree_core,
    verify_cycle,
)
from src.oracle import contains_cycle
from src.theta_search import (
    BIPARTITION,
    ThetaGraph,
    canonical_cycle,
    find_theta_in_pair,
    path_between_parts,
    verify_theta,
)
from src.trilayered import (
    PruneParams,
    Trilayered,
    WellPlacedCert,
    find_well_placed_exhaustive,
    trilayered_dichotomy,
)

logger = logging.getLogger(__name__)


def _root_chains(G: Graph, e: Exploration, i: int, theta: ThetaGraph,
                 well_placed: bool) -> Dict[int, List[int]]:
    """For each y in V_i ∩ V(F), the path y, ..., root of length i avoiding the rest of F"""
    on_theta = theta.vertices
    above = e.V(i - 1)
    chains = {}
    for y in sorted(on_theta & e.V(i)):
        if well_placed:
            w = next((u for u in G.neighbors(y) if u in above and u not in on_theta), None)
            if w is None:
                raise PreconditionError(
                    f"vertex {y} has no neighbor in V_{i - 1} off the theta", item='witness')
        else:
            w = e.parent.get(y)
            if w is None:
                raise PreconditionError(f"vertex {y} has no parent", item='root_path')
        chain = [y] + list(e.root_path(w))
        if len(chain) != i + 1 or on_theta & set(chain[1:]):
            raise PreconditionError(f"no root path of length {i} off the theta for {y}",
                                    item='root_path')
        chains[y] = chain
    return chains


def extract_cycle(G: Graph, e: Exploration, i: int, cert: Union[ThetaGraph, WellPlacedCert],
                  k: int) -> CycleCert:
    """
    Turn a theta found near level i into a cycle of length exactly 2k

    A ThetaGraph must lie in G[V_i, V_{i+1}]; a WellPlacedCert must lie in
    G[V_{i-1}, V_i, V'_{i+1}]. Root paths from the attachment layer form a
    tree; a path through the theta between two of its branches closes the cycle.

    Args:
        G (Graph): Explored host graph
        e (Exploration): Exploration of G
        i (int): Level index, 1 <= i <= depth
        cert (Union[ThetaGraph, WellPlacedCert]): The theta
        k (int): Cycle half-length

    Returns:
        CycleCert: Verified 2k-cycle in G's ids
    """
    well_placed = isinstance(cert, WellPlacedCert)
    theta = cert.theta if well_placed else cert
    if not 1 <= i <= e.depth:
        raise PreconditionError(f"level {i} outside 1..{e.depth}", item='i')
    if theta.length < 2 * k:
        raise PreconditionError(f"theta cycle of length {theta.length} < {2 * k}", item='length')
    verdict = verify_theta(G, theta, k)
    if not verdict:
        raise PreconditionError(f"theta does not verify: {verdict.reason}", item='cert')

    on_theta = theta.vertices
    if on_theta <= e.V(i):
        raise contradiction("theta inside a single exploration level",
                            theta=theta.to_dict(), level=i)
    if well_placed:
        allowed = e.V(i - 1) | e.V(i) | e.V_prime(i + 1)
    else:
        allowed = e.V(i) | e.V(i + 1)
    if not on_theta <= allowed:
        raise PreconditionError(f"theta leaves the layers around level {i}", item='layers')

    chains = _root_chains(G, e, i, theta, well_placed)
    if len(chains) < 2:
        raise contradiction("theta meets the attachment layer in fewer than two vertices",
                            theta=theta.to_dict(), level=i, attachment=sorted(chains))

    # chains read downward from the root; y* ends their longest common prefix
    downward = {y: chain[::-1] for y, chain in chains.items()}
    ell = 0
    while all(path[ell + 1] == downward[min(downward)][ell + 1] for path in downward.values()):
        ell += 1
    branches: Dict[int, List[int]] = {}
    for y, path in downward.items():
        branches.setdefault(path[ell + 1], []).append(y)
    child = min(branches, key=lambda c: (len(branches[c]), c))
    W = frozenset(branches[child])
    Z = on_theta - W
    length = 2 * k - 2 * i + 2 * ell

    P = path_between_parts(theta, W, Z, length)
    if P == BIPARTITION:
        raise contradiction("branch split of the attachment layer is a bipartition of the theta",
                            theta=theta.to_dict(), W=sorted(W), level=i, ell=ell)
    w, z = P[0], P[-1]
    if z not in chains:
        raise PreconditionError(f"path ends at {z}, outside the attachment layer", item='parity')

    up_z = chains[z][1:i - ell + 1]
    down_w = chains[w][1:i - ell][::-1]
    cycle = list(P) + up_z + down_w
    cert_out = CycleCert(canonical_cycle(cycle))
    check = verify_cycle(G, cert_out, 2 * k)
    if not check:
        raise contradiction("extracted walk is not a 2k-cycle", cycle=cycle, reason=check.reason,
                            level=i, ell=ell, path=list(P))
    logger.debug(f"Extracted C{2 * k} at level {i} (ell={ell}): {list(cert_out.vertices)}")
    return cert_out


def bound(n: int, k: int) -> float:
    """80 * sqrt(k ln k) * n^(1+1/k) + 10 k^2 n"""
    if k < 2:
        raise PreconditionError(f"k must be at least 2, got {k}", item='k')
    if n < 1:
        raise PreconditionError(f"n must be at least 1, got {n}", item='n')
    return 80 * math.sqrt(k * math.log(k)) * n ** (1 + 1 / k) + 10 * k * k * n


def d_threshold(n: int, k: int) -> float:
    return 20 * math.sqrt(k * math.log(k)) * n ** (1 / k)


def theorem_hypotheses(G: Graph, k: int, d: int) -> Dict[str, bool]:
    """Which hypotheses of the minimum-degree C_2k theorem G meets for (k, d)"""
    floor = 2 * d + 5 * k * k
    n = max(G.n, 1)
    d_large = (d >= d_threshold(n, k)
               and math.log(d) >= 8 * k * math.log(2 * k))
    checks = {
        'k_at_least_4': k >= 4,
        'bipartite': G.is_bipartite(),
        'min_degree': G.n > 0 and G.min_degree() >= floor,
        'd_large': d_large,
    }
    checks['holds'] = all(checks.values())
    return checks


@dataclass
class BoundAudit:
    n: int
    k: int
    edges: int
    bound: float
    c2k_free: Optional[bool]
    within_bound: Optional[bool]
    d_threshold: float
    n_in_regime: bool

    def to_dict(self) -> Dict:
        return {
            'n': self.n,
            'k': self.k,
            'edges': self.edges,
            'bound': self.bound,
            'c2k_free': 'unknown' if self.c2k_free is None else self.c2k_free,
            'within_bound': self.within_bound,
            'd_threshold': self.d_threshold,
            'n_in_regime': self.n_in_regime,
        }


def audit_bound(G: Graph, k: int, oracle_cap: Optional[int] = None) -> BoundAudit:
    """
    Compare e(G) with the extremal bound

    Freeness is decided by the cycle oracle when n <= oracle_cap and left
    unknown above it; the bound claim only applies to C_2k-free graphs.

    Args:
        G (Graph): Graph to audit
        k (int): Cycle half-length
        oracle_cap (int): Config.ORACLE_CAP by default

    Returns:
        BoundAudit: Edge count, bound, freeness and regime flags
    """
    oracle_cap = Config.ORACLE_CAP if oracle_cap is None else oracle_cap
    n = max(G.n, 1)
    limit = bound(n, k)
    free = contains_cycle(G, 2 * k) is None if G.n <= oracle_cap else None
    audit = BoundAudit(
        n=G.n,
        k=k,
        edges=G.num_edges,
        bound=limit,
        c2k_free=free,
        within_bound=(G.num_edges <= limit) if free else None,
        d_threshold=d_threshold(n, k),
        n_in_regime=math.log(n) >= 8 * k * k * math.log(2 * k),
    )
    if free and not audit.within_bound:
        logger.error(f"C{2 * k}-free graph with {G.num_edges} edges exceeds bound {limit:.1f}")
    return audit


@dataclass
class PipelineReport:
    result: str
    cycle: Optional[CycleCert] = None
    route: Optional[str] = None
    level_hits: List[Dict] = field(default_factory=list)
    growth_audit: Dict = field(default_factory=dict)
    bound: Optional[float] = None
    hypotheses: Dict[str, bool] = field(default_factory=dict)
    reason: str = ''

    @property
    def found(self) -> bool:
        return self.cycle is not None

    def to_dict(self) -> Dict:
        return {
            'result': self.result,
            'cycle': list(self.cycle.vertices) if self.cycle else [],
            'route': self.route,
            'level_hits': list(self.level_hits),
            'growth_audit': self.growth_audit,
            'bound': self.bound,
            'hypotheses': dict(self.hypotheses),
            'reason': self.reason,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


class EvenCyclePipeline:
    """
    Search for a C_2k along the minimum-degree route

    Stages: bipartite half, min-degree core at 2d + 5k^2 (the whole half when
    the core is empty), exploration from up to `max_roots` roots, then at each
    level a theta search between V_i and V_{i+1} and a well-placed theta
    search in G[V_{i-1}, V_i, V'_{i+1}]. Every hit goes through extraction.
    """

    def __init__(self, k: int, d: int, cap: Optional[int] = None,
                 oracle_cap: Optional[int] = None, max_roots: Optional[int] = None,
                 use_oracle: bool = True, database=None, seed: Optional[int] = None):
        if k < 2:
            raise PreconditionError(f"k must be at least 2, got {k}", item='k')
        if d < 1:
            raise PreconditionError(f"d must be at least 1, got {d}", item='d')
        self.k = k
        self.d = d
        self.cap = Config.EXHAUSTIVE_CAP if cap is None else cap
        self.oracle_cap = Config.ORACLE_CAP if oracle_cap is None else oracle_cap
        self.max_roots = Config.PIPELINE_MAX_ROOTS if max_roots is None else max_roots
        self.use_oracle = use_oracle
        self.database = database
        self.seed = Config.DEFAULT_SEED if seed is None else seed
        self.params = ExplorationParams(k=k, d=d)
        self.logger = logging.getLogger(__name__)

    def run(self, G: Graph) -> PipelineReport:
        report = PipelineReport(result='none', hypotheses=theorem_hypotheses(G, self.k, self.d))
        if G.n > 0:
            report.bound = bound(G.n, self.k)
        if G.num_edges == 0:
            report.reason = 'graph has no edges'
            return self._finish(G, report)

        _, half = bipartite_half(G)
        floor = 2 * self.d + 5 * self.k * self.k
        work = min_degree_core(half, floor)
        if work.n == 0:
            self.logger.info(f"No {floor}-core in the bipartite half, exploring the half itself")
            work = half
        self.logger.info(f"Pipeline k={self.k} d={self.d}: working graph "
                         f"{work.n} vertices, {work.num_edges} edges")

        roots = [v for v in work.vertices() if work.degree(v) > 0][:self.max_roots]
        for root in roots:
            e = explore(work, root, self.params, depth=self.k)
            if not report.growth_audit:
                report.growth_audit = audit_growth(work, e, self.params).to_dict()
            cycle = self._search_levels(work, e, report)
            if cycle is not None:
                report.cycle = CycleCert(canonical_cycle(G.local_id(work.lift(v))
                                                         for v in cycle.vertices))
                report.route = 'levels'
                break

        if report.cycle is None and self.use_oracle:
            if G.n <= self.oracle_cap:
                self.logger.warning(f"No hit along the levels, running the C{2 * self.k} oracle")
                report.cycle = contains_cycle(G, 2 * self.k)
                if report.cycle is not None:
                    report.route = 'oracle'
            else:
                self.logger.debug(f"Graph exceeds the oracle cap {self.oracle_cap}")

        if report.cycle is not None:
            check = verify_cycle(G, report.cycle, 2 * self.k)
            if not check:
                raise contradiction("pipeline cycle fails its checker",
                                    cycle=list(report.cycle.vertices), reason=check.reason)
            report.result = 'cycle'
            self.logger.info(f"Found C{2 * self.k} via {report.route}: {list(report.cycle.vertices)}")
        else:
            failing = [name for name, ok in report.hypotheses.items() if name != 'holds' and not ok]
            report.reason = 'no theta found at any level'
            if failing:
                report.reason += f"; unmet hypotheses: {', '.join(failing)}"
        return self._finish(G, report)

    def _finish(self, G: Graph, report: PipelineReport) -> PipelineReport:
        if self.database is not None:
            self.database.save_pipeline_run(G, self.k, self.d, report.result, report.to_json())
        return report

    def _search_levels(self, work: Graph, e: Exploration,
                       report: PipelineReport) -> Optional[CycleCert]:
        k = self.k
        for i in range(1, k):
            level = e.V(i)
            if any(u in level for v in level for u in work.neighbors(v)):
                raise contradiction("edge inside a level of a bipartite exploration", level=i)

            pair = find_theta_in_pair(work, level, e.V(i + 1), k, cap=self.cap)
            if pair.theta is not None:
                report.level_hits.append({'root': e.root, 'i': i, 'kind': 'level_pair',
                                          'route': pair.route})
                return extract_cycle(work, e, i, pair.theta, k)

            hit = self._well_placed(work, e, i)
            if hit is not None:
                kind, index, cert, route = hit
                report.level_hits.append({'root': e.root, 'i': index, 'kind': kind,
                                          'route': route})
                return extract_cycle(work, e, index, cert, k)
        return None

    def _trilayered(self, work: Graph, e: Exploration, i: int) -> Trilayered:
        """G[V_{i-1}, V_i, V'_{i+1}] minus candidates that also touch V_{i-1}"""
        first = e.V(i - 1)
        third = frozenset(v for v in e.V_prime(i + 1)
                          if not any(u in first for u in work.neighbors(v)))
        return Trilayered(work, first, e.V(i), third)

    def _well_placed(self, work: Graph, e: Exploration, i: int):
        k, d = self.k, self.d
        T = self._trilayered(work, e, i)
        if not T.v1:
            return None
        if len(T.vertices) <= self.cap:
            try:
                cert = find_well_placed_exhaustive(T, k, cap=self.cap)
            except BudgetExceeded as exc:
                self.logger.warning(f"Level {i}: exhaustive well-placed search gave up: {exc}")
                return None
            return None if cert is None else ('well_placed', i, cert, 'exhaustive')

        if not T.v3:
            return None
        t = max(1, math.ceil(2 * math.log(k)))
        delta = self.params.delta
        try:
            p = PruneParams.for_trilayered(T, k, d, delta, t)
            result = trilayered_dichotomy(T, p, k, d, delta,
                                          rng=np.random.Generator(np.random.PCG64(self.seed)),
                                          cap=self.cap)
        except PreconditionError as exc:
            self.logger.debug(f"Level {i}: dichotomy not applicable ({exc.item})")
            return None
        except BudgetExceeded as exc:
            self.logger.warning(f"Level {i}: constructive search gave up: {exc}")
            return None
        if result.kind == 'theta':
            if i - 1 < 1:
                return None
            return ('level_pair', i - 1, result.theta, result.route)
        return ('well_placed', i, result.cert, result.route)


def find_even_cycle(G: Graph, k: int, d: int, **options) -> PipelineReport:
    """
    Run the C_2k pipeline with default settings

    Args:
        G (Graph): Input graph
        k (int): Cycle half-length, at least 2
        d (int): Density parameter, at least 1
        **options: Keyword overrides for EvenCyclePipeline

    Returns:
        PipelineReport: result "cycle" with a verified certificate, or "none" with reasons
    """
    return EvenCyclePipeline(k, d, **options).run(G)
