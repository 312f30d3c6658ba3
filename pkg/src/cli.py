#!/usr/bin/env python3
"""
🖥️ Command Line
- explore / find-cycle / theta / well-placed on graph files
- ex / bound / audit-bound for extremal numbers
- gen for seeded corpora and named graphs
- Exit codes: 0 found, 1 strict failure, 2 usage, 3 none, 4 budget, 5 contradiction
"""
import argparse
import json
import logging
import os
import sys
from typing import Dict, List, Optional

import colorlog
import pandas as pd

from config.config import Config
from src.cycle_pipeline import EvenCyclePipeline, audit_bound, bound
from src.database import Database
from src.exploration import ExplorationParams, audit_growth, audit_min_degree, explore
from src.graph_core import (
    BudgetExceeded,
    GraphParseError,
    InternalContradiction,
    PreconditionError,
    read_graph_file,
    serialize_graph,
)
from src.oracle import (
    ex_brute,
    ex_naive,
    gen_complete,
    gen_complete_bipartite,
    gen_cycle,
    gen_min_degree_bipartite,
    gen_path,
    gen_petersen,
    gen_planted_extraction,
    gen_polarity_graph,
    gen_random_bipartite,
    gen_random_trilayered,
    gen_star,
)
from src.theta_search import (
    find_theta_avg_degree,
    find_theta_exhaustive,
    find_theta_min_degree,
)
from src.trilayered import (
    DegreeSpec,
    Trilayered,
    find_well_placed_constructive,
    find_well_placed_exhaustive,
    load_layers,
    serialize_layers,
)

logger = logging.getLogger(__name__)

EXIT_FOUND = 0
EXIT_STRICT = 1
EXIT_USAGE = 2
EXIT_NONE = 3
EXIT_BUDGET = 4
EXIT_CONTRADICTION = 5


def setup_logging(level: str = None, log_file: Optional[str] = None):
    """Colored stderr handler plus a plain file handler"""
    level = (level or Config.LOG_LEVEL).upper()
    fmt = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

    stream = colorlog.StreamHandler(sys.stderr)
    stream.setFormatter(colorlog.ColoredFormatter('%(log_color)s' + fmt))
    handlers = [stream]
    if log_file:
        directory = os.path.dirname(log_file)
        if directory:
            os.makedirs(directory, exist_ok=True)
        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(logging.Formatter(fmt))
        handlers.append(file_handler)

    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)
        handler.close()
    for handler in handlers:
        root.addHandler(handler)
    root.setLevel(getattr(logging, level, logging.INFO))


def _write_json(path: Optional[str], payload: Dict):
    if not path:
        return
    with open(path, 'w') as f:
        json.dump(payload, f, indent=2)
    logger.debug(f"Wrote JSON report to {path}")


def _require_k(k: int, minimum: int = 2):
    if k < minimum:
        raise PreconditionError(f"--k must be at least {minimum}, got {k}", item='k')


def cmd_explore(args) -> int:
    G = read_graph_file(args.file)
    params = ExplorationParams(k=args.k, d=args.d, delta=args.delta)
    depth = args.depth if args.depth is not None else args.k
    e = explore(G, args.root, params, depth)
    min_degree = args.min_degree if args.min_degree is not None else G.min_degree()
    degree_audit = audit_min_degree(G, e, min_degree)
    growth = audit_growth(G, e, params)

    table = pd.DataFrame([{
        'level': level.index,
        'candidates': len(level.candidates),
        'big': len(level.big_set),
        'kept': level.size,
        'tag': level.tag,
    } for level in e.levels])
    print(table.to_string(index=False))
    report = growth.to_dict()
    print()
    print(pd.DataFrame(report['inequalities']).to_string(index=False))
    failures = growth.failures()
    print(f"\nmin-degree audit: {len(degree_audit.violations)} violations over "
          f"{degree_audit.checked} vertices (hypotheses satisfied: "
          f"{degree_audit.hypotheses_satisfied})")
    print(f"growth audit: {len(growth.inequalities) - len(failures)}/{len(growth.inequalities)} "
          f"inequalities hold")

    levels = [dict(row, candidates=sorted(level.candidates), big=sorted(level.big_set),
                   chosen=sorted(level.chosen))
              for row, level in zip(report['levels'], e.levels)]
    _write_json(args.json, {
        'root': e.root,
        'params': {'k': params.k, 'd': params.d, 'delta': params.delta},
        'levels': levels,
        'inequalities': report['inequalities'],
        'frontier': sorted(e.frontier),
        'min_degree_audit': degree_audit.to_dict(),
    })
    if args.strict and not degree_audit.hypotheses_satisfied:
        print(f"hypotheses unmet: {'; '.join(degree_audit.reasons)}")
        return EXIT_STRICT
    return EXIT_FOUND


def cmd_find_cycle(args) -> int:
    _require_k(args.k)
    G = read_graph_file(args.file)
    database = None if args.no_cache else Database(args.db)
    pipeline = EvenCyclePipeline(args.k, args.d, use_oracle=not args.no_oracle,
                                 database=database, seed=args.seed)
    report = pipeline.run(G)
    _write_json(args.json, report.to_dict())
    if report.found:
        print(' '.join(str(v) for v in report.cycle.vertices))
        return EXIT_FOUND
    print(f"none ({report.reason})")
    return EXIT_NONE


def cmd_ex(args) -> int:
    _require_k(args.k)
    database = None if args.no_cache else Database(args.db)
    cached = database.get_ex_result(args.n, args.k) if database else None
    if cached is not None and not args.naive:
        logger.info(f"ex({args.n}, C{2 * args.k}) from cache")
        value, witness, strategy = cached['ex'], cached['witness'], cached['strategy']
    else:
        result = ex_naive(args.n, args.k) if args.naive else ex_brute(args.n, args.k,
                                                                      threads=args.threads)
        value, witness, strategy = result.ex, result.witness, result.strategy
        if database is not None and not args.naive:
            database.save_ex_result(args.n, args.k, value, witness, strategy)
    print(value)
    _write_json(args.json, {'n': args.n, 'k': args.k, 'ex': value,
                            'witness': serialize_graph(witness)})
    return EXIT_FOUND


def _generate(args):
    kind = args.kind
    if kind == 'bipartite':
        return gen_random_bipartite(args.n1, args.n2, args.p, args.seed)
    if kind == 'min-degree':
        return gen_min_degree_bipartite(args.n1, args.n2, args.delta, args.seed)
    if kind == 'polarity':
        return gen_polarity_graph(args.q)
    if kind == 'trilayered':
        return gen_random_trilayered(args.n1, args.n2, args.n3, args.p, args.p23, args.seed)
    if kind == 'planted':
        return gen_planted_extraction(args.k, args.seed, well_placed=args.well_placed)
    if kind == 'complete-bipartite':
        return gen_complete_bipartite(args.n1, args.n2)
    if kind == 'cycle':
        return gen_cycle(args.n)
    if kind == 'path':
        return gen_path(args.n)
    if kind == 'star':
        return gen_star(args.n)
    if kind == 'petersen':
        return gen_petersen()
    return gen_complete(args.n)


def cmd_gen(args) -> int:
    generated = _generate(args)
    extra = {}
    if args.kind == 'trilayered':
        G = generated.host
        extra['layers'] = serialize_layers(generated)
    elif args.kind == 'planted':
        G = generated.graph
        extra = {'root': generated.root, 'level': generated.level,
                 'cert': generated.cert.to_dict()}
    else:
        G = generated
    text = serialize_graph(G)
    if args.out:
        with open(args.out, 'w') as f:
            f.write(text)
        if 'layers' in extra:
            with open(args.out + '.layers', 'w') as f:
                f.write(extra['layers'])
        logger.info(f"Wrote {args.kind} graph ({G.n} vertices, {G.num_edges} edges) to {args.out}")
    else:
        sys.stdout.write(text)
    _write_json(args.json, {'kind': args.kind, 'graph': text, **extra})
    return EXIT_FOUND


def cmd_bound(args) -> int:
    value = bound(args.n, args.k)
    print(f"{value:.1f}")
    _write_json(args.json, {'n': args.n, 'k': args.k, 'bound': value})
    return EXIT_FOUND


def cmd_audit_bound(args) -> int:
    _require_k(args.k)
    G = read_graph_file(args.file)
    audit = audit_bound(G, args.k)
    rows = [{'quantity': key, 'value': value} for key, value in audit.to_dict().items()]
    print(pd.DataFrame(rows).to_string(index=False))
    _write_json(args.json, audit.to_dict())
    if args.strict and audit.within_bound is False:
        return EXIT_STRICT
    return EXIT_FOUND


def cmd_theta(args) -> int:
    G = read_graph_file(args.file)
    route = args.route
    if route == 'auto':
        if args.k >= 3 and G.n > 0 and G.is_bipartite() and G.min_degree() >= args.k:
            route = 'min-degree'
        elif args.k >= 3 and G.n > 0 and G.is_bipartite() and G.num_edges >= args.k * G.n:
            route = 'avg-degree'
        else:
            route = 'exhaustive'
    if route == 'min-degree':
        theta = find_theta_min_degree(G, args.k)
    elif route == 'avg-degree':
        theta = find_theta_avg_degree(G, args.k)
    else:
        _require_k(args.k)
        theta = find_theta_exhaustive(G, args.k)
    _write_json(args.json, {'route': route, 'theta': theta.to_dict() if theta else None})
    if theta is None:
        print("none")
        return EXIT_NONE
    print(f"cycle: {' '.join(str(v) for v in theta.cycle)}")
    print(f"chord: {theta.chord[0]} {theta.chord[1]}  (route {route})")
    return EXIT_FOUND


def cmd_well_placed(args) -> int:
    _require_k(args.k)
    G = read_graph_file(args.file)
    with open(args.layers, 'r') as f:
        v1, v2, v3 = load_layers(f.read())
    T = Trilayered(G, v1, v2, v3)
    if args.mode == 'constructive':
        spec = DegreeSpec(args.A, args.B, args.C if args.C is not None else args.d + args.k, args.D)
        cert = find_well_placed_constructive(T, spec, args.d, args.delta, args.k)
    else:
        cert = find_well_placed_exhaustive(T, args.k)
    _write_json(args.json, {'mode': args.mode, 'cert': cert.to_dict() if cert else None})
    if cert is None:
        print("none")
        return EXIT_NONE
    print(f"cycle: {' '.join(str(v) for v in cert.theta.cycle)}")
    print(f"chord: {cert.theta.chord[0]} {cert.theta.chord[1]}")
    print(pd.DataFrame([{'vertex': v, 'witness': w} for v, w in sorted(cert.witnesses.items())])
          .to_string(index=False))
    return EXIT_FOUND


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='even-cycles',
                                     description='Even cycles, theta-graphs and ex(n, C_2k)')
    parser.add_argument('--log-level', default=None, help='DEBUG, INFO, WARNING or ERROR')
    parser.add_argument('--log-file', default=Config.LOG_FILE)
    parser.add_argument('--db', default=Config.DATABASE_PATH, help='sqlite results ledger')
    sub = parser.add_subparsers(dest='command', required=True)

    def with_json(p):
        p.add_argument('--json', metavar='PATH', help='write a JSON report')
        return p

    p = with_json(sub.add_parser('explore', help='degree-capped exploration with audits'))
    p.add_argument('file')
    p.add_argument('--root', type=int, required=True)
    p.add_argument('--k', type=int, required=True)
    p.add_argument('--d', type=int, required=True)
    p.add_argument('--depth', type=int)
    p.add_argument('--delta', type=int)
    p.add_argument('--min-degree', type=int, help='degree claimed by the audit (default: min degree)')
    p.add_argument('--strict', action='store_true')
    p.set_defaults(handler=cmd_explore)

    p = with_json(sub.add_parser('find-cycle', help='search for a C_2k'))
    p.add_argument('file')
    p.add_argument('--k', type=int, required=True)
    p.add_argument('--d', type=int, default=1)
    p.add_argument('--seed', type=int, default=Config.DEFAULT_SEED)
    p.add_argument('--no-oracle', action='store_true')
    p.add_argument('--no-cache', action='store_true')
    p.set_defaults(handler=cmd_find_cycle)

    p = with_json(sub.add_parser('ex', help='exact ex(n, C_2k)'))
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--k', type=int, required=True)
    p.add_argument('--threads', type=int, default=Config.DEFAULT_THREADS)
    p.add_argument('--naive', action='store_true', help='enumerate every edge set (n <= 6)')
    p.add_argument('--no-cache', action='store_true')
    p.set_defaults(handler=cmd_ex)

    p = with_json(sub.add_parser('gen', help='generate a graph file'))
    p.add_argument('kind', choices=['bipartite', 'min-degree', 'polarity', 'trilayered', 'planted',
                                    'complete-bipartite', 'cycle', 'path', 'star', 'petersen',
                                    'complete'])
    p.add_argument('--n', type=int, default=0)
    p.add_argument('--n1', type=int, default=0)
    p.add_argument('--n2', type=int, default=0)
    p.add_argument('--n3', type=int, default=0)
    p.add_argument('--p', type=float, default=0.5)
    p.add_argument('--p23', type=float, default=0.5)
    p.add_argument('--delta', type=int, default=1)
    p.add_argument('--q', type=int, default=2)
    p.add_argument('--k', type=int, default=2)
    p.add_argument('--well-placed', action='store_true')
    p.add_argument('--seed', type=int, default=Config.DEFAULT_SEED)
    p.add_argument('--out', help='graph file path (default: stdout)')
    p.set_defaults(handler=cmd_gen)

    p = with_json(sub.add_parser('bound', help='80 sqrt(k ln k) n^(1+1/k) + 10 k^2 n'))
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--k', type=int, required=True)
    p.set_defaults(handler=cmd_bound)

    p = with_json(sub.add_parser('audit-bound', help='edge count against the extremal bound'))
    p.add_argument('file')
    p.add_argument('--k', type=int, required=True)
    p.add_argument('--strict', action='store_true')
    p.set_defaults(handler=cmd_audit_bound)

    p = with_json(sub.add_parser('theta', help='find a theta-graph'))
    p.add_argument('file')
    p.add_argument('--k', type=int, required=True)
    p.add_argument('--route', choices=['auto', 'min-degree', 'avg-degree', 'exhaustive'],
                   default='auto')
    p.set_defaults(handler=cmd_theta)

    p = with_json(sub.add_parser('well-placed', help='find a well-placed theta-graph'))
    p.add_argument('file')
    p.add_argument('layers', help='three lines: V1, V2, V3 vertex ids')
    p.add_argument('--k', type=int, required=True)
    p.add_argument('--mode', choices=['exhaustive', 'constructive'], default='exhaustive')
    p.add_argument('--A', type=float, default=0)
    p.add_argument('--B', type=float, default=0)
    p.add_argument('--C', type=float)
    p.add_argument('--D', type=float, default=0)
    p.add_argument('--d', type=int, default=1)
    p.add_argument('--delta', type=int, default=1)
    p.set_defaults(handler=cmd_well_placed)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_FOUND if e.code == 0 else EXIT_USAGE

    setup_logging(args.log_level, args.log_file)
    try:
        Config.validate_config()
        return args.handler(args)
    except (GraphParseError, PreconditionError, ValueError, OSError) as e:
        logger.error(f"{args.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as e:
        logger.error(f"{args.command}: budget exceeded: {e}")
        print(f"budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except InternalContradiction as e:
        print(f"internal contradiction: {e}\nstate: {json.dumps(e.state, default=str)}",
              file=sys.stderr)
        return EXIT_CONTRADICTION
