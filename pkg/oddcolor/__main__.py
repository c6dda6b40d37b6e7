#!/usr/bin/env python3
"""
Main entry point for oddcolor - exact odd chromatic numbers from the command line
"""

import argparse
import json
import os
import random
import sys
import time
from collections import Counter, defaultdict
from typing import Any, Dict, List, Optional

import networkx as nx
import yaml

from .core import Coloring, Graph, parse_coloring_json, read_graph, serialize_graph, verify_odd_coloring
from .dispatch import ROUTES, Dispatcher
from .interval import interval_odd_coloring, random_intervals, read_intervals
from .kernel import DcliqueInstance, find_clique_modulator, kernelize, size_bound
from .oracle import ORACLES
from .reductions import KINDS, build_reduction
from .utils import (
    DEFAULT_CONFIG,
    ContractError,
    GraphParseError,
    GuardExceededError,
    OddColorError,
    VerificationError,
    configure_logging,
    format_value,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2
EXIT_GUARD = 3
EXIT_PARSE = 4


def load_config(config_path: Optional[str] = None) -> Dict[str, Any]:
    """Load configuration from YAML file or use defaults"""
    config = dict(DEFAULT_CONFIG)

    if config_path and os.path.exists(config_path):
        with open(config_path, encoding='utf-8') as f:
            user_config = yaml.safe_load(f) or {}

        for key, value in user_config.items():
            if key in config:
                config[key] = value

    return config


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', '-c', type=str, help='Path to YAML configuration file')
    common.add_argument('--format', choices=['dimacs', 'edgelist'], help='Graph file format')
    common.add_argument('--json', action='store_true', default=None, help='Print a single JSON document')
    common.add_argument('--guard-n', type=int, help='Largest instance the exhaustive oracle may search')
    common.add_argument('--seed', type=int, help='Seed for generated instances')

    parser = argparse.ArgumentParser(
        prog='oddcolor',
        description='Exact odd chromatic numbers of small and structured graphs',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Exit codes:
  0  solved
  2  infeasible within --k
  3  guard exceeded
  4  parse error

Examples:
  oddcolor solve graph.col
  oddcolor solve graph.txt --format edgelist --k 4 --json
  oddcolor solve path.col --intervals path.int
  oddcolor reduce graph.col --kind scb --k 3
  oddcolor bench --seed 7
        """,
    )
    sub = parser.add_subparsers(dest='command', required=True)

    solve = sub.add_parser('solve', parents=[common], help='Dispatch to the best applicable exact algorithm')
    solve.add_argument('graph', help='Graph file')
    solve.add_argument('--intervals', type=str, help='Interval model of the graph, one "id l r" line per vertex')
    solve.add_argument('--k', type=int, help='Decide whether the odd chromatic number is at most k')
    solve.add_argument('--algo', choices=ROUTES, help='Force one route')

    verify = sub.add_parser('verify', parents=[common], help='Check a coloring against a graph')
    verify.add_argument('graph', help='Graph file')
    verify.add_argument('--coloring', required=True, help='Coloring in JSON format')

    kern = sub.add_parser('kernelize', parents=[common], help='Kernelize by distance to a clique')
    kern.add_argument('graph', help='Graph file')
    kern.add_argument('--k', type=int, required=True, help='Palette size of the decision instance')

    red = sub.add_parser('reduce', parents=[common], help='Emit a coloring-to-odd-coloring reduction')
    red.add_argument('graph', help='Graph file')
    red.add_argument('--kind', choices=KINDS, required=True, help='Which construction to build')
    red.add_argument('--k', type=int, help='Palette size of the source instance')

    orc = sub.add_parser('oracle', parents=[common], help='Run the exhaustive oracle')
    orc.add_argument('graph', help='Graph file')
    orc.add_argument('--which', choices=sorted(ORACLES), default='chi_odd', help='Invariant to compute')

    bench = sub.add_parser('bench', parents=[common], help='Time the dispatcher on random graphs')
    bench.add_argument('--instances', type=int, help='Number of generated graphs')
    bench.add_argument('--n', type=int, help='Vertices per graph')
    bench.add_argument('--p', type=float, help='Edge probability')
    bench.add_argument('--interval-models', type=int, help='Random interval models checked for greedy fallbacks')

    return parser


def parse_args(argv: Optional[List[str]] = None):
    """Parse command line arguments and return them with the merged configuration"""
    args = build_parser().parse_args(argv)
    config = load_config(args.config)

    if args.format:
        config['format'] = args.format
    if args.json:
        config['json'] = True
    if args.guard_n is not None:
        config['guard_n'] = args.guard_n
    if args.seed is not None:
        config['seed'] = args.seed
    for key in ('instances', 'n', 'p', 'interval_models'):
        if getattr(args, key, None) is not None:
            config[f'bench_{key}'] = getattr(args, key)

    return args, config


def emit(config: Dict[str, Any], data: Dict[str, Any], lines: List[str]) -> None:
    if config['json']:
        print(json.dumps(data, indent=2))
    else:
        for line in lines:
            print(line)


def format_coloring(f: Optional[Coloring]) -> str:
    if f is None:
        return '-'
    return ' '.join(str(c) for c in f.colors)


def cmd_solve(args, config: Dict[str, Any]) -> int:
    g = read_graph(args.graph, config['format'])
    intervals = read_intervals(args.intervals) if args.intervals else None
    report = Dispatcher(config).solve(g, intervals=intervals, k=args.k, algo=args.algo)

    lines = [
        f"algorithm: {report.algorithm}",
        f"chi_odd: {format_value(report.value)}",
        f"coloring: {format_coloring(report.witness)}",
        f"time: {report.elapsed:.4f}s",
    ]
    if args.k is not None:
        lines.append(f"feasible with {args.k} colors: {'yes' if report.feasible else 'no'}")
    emit(config, report.to_dict(g), lines)
    return EXIT_INFEASIBLE if report.feasible is False else EXIT_OK


def cmd_verify(args, config: Dict[str, Any]) -> int:
    g = read_graph(args.graph, config['format'])
    with open(args.coloring, encoding='utf-8') as fh:
        f = parse_coloring_json(fh.read())
    cert = verify_odd_coloring(g, f)
    data = {
        'valid': cert.valid,
        'no_odd': sorted(cert.no_odd),
        'conflicts': sorted(cert.conflicts),
        'odd_color': {str(v): c for v, c in sorted(cert.witness.items())},
    }
    lines = [f"valid: {'yes' if cert.valid else 'no'}"]
    if not cert.valid:
        lines.append(f"vertices without an odd color: {sorted(cert.no_odd)}")
        lines.append(f"vertices in a monochromatic edge: {sorted(cert.conflicts)}")
    emit(config, data, lines)
    return EXIT_OK if cert.valid else EXIT_ERROR


def cmd_kernelize(args, config: Dict[str, Any]) -> int:
    g = read_graph(args.graph, config['format'])
    X = find_clique_modulator(g, config['clique_budget'])
    if X is None:
        raise GuardExceededError(f"no clique modulator with at most {config['clique_budget']} vertices")
    result = kernelize(DcliqueInstance(g, X, args.k))
    reduced = result.reduced
    data = {
        'modulator': list(X),
        'verdict': result.verdict,
        'stop_reason': result.stop_reason,
        'steps': [step.rule for step in result.trace],
        'n': reduced.n,
        'd': reduced.d,
        'k': reduced.k,
        'size_bound': size_bound(reduced.d),
        'size_bound_ok': result.size_bound_ok,
        'dimacs': serialize_graph(reduced.g),
    }
    verdict = {True: 'yes', False: 'no', None: 'undecided'}[result.verdict]
    lines = [
        f"c modulator {' '.join(str(x) for x in X)}",
        f"c verdict {verdict} ({result.stop_reason}) after {len(result.trace)} steps",
        f"c kernel n={reduced.n} d={reduced.d} k={reduced.k} bound={size_bound(reduced.d)}",
        serialize_graph(reduced.g).rstrip('\n'),
    ]
    emit(config, data, lines)
    return EXIT_INFEASIBLE if result.verdict is False else EXIT_OK


def cmd_reduce(args, config: Dict[str, Any]) -> int:
    if args.k is None and args.kind != 'cw':
        raise ContractError(f"reduction '{args.kind}' needs --k")
    g = read_graph(args.graph, config['format'])
    out = build_reduction(g, args.k, args.kind)
    roles = out.role_map()
    emit(
        config,
        {'dimacs': serialize_graph(out.h), 'roles': roles},
        [serialize_graph(out.h).rstrip('\n'), json.dumps(roles)],
    )
    return EXIT_OK


def cmd_oracle(args, config: Dict[str, Any]) -> int:
    g = read_graph(args.graph, config['format'])
    result = ORACLES[args.which](g, guard_n=config['guard_n'])
    data = {'which': args.which, 'value': format_value(result.value)}
    if result.witness is not None:
        data['colors'] = list(result.witness.colors)
    emit(config, data, [f"{args.which}: {format_value(result.value)}", f"coloring: {format_coloring(result.witness)}"])
    return EXIT_OK


def interval_fallback_rate(config: Dict[str, Any]) -> Dict[str, Any]:
    """Run the interval greedy on random models and count components that needed the exhaustive fallback"""
    rng = random.Random(config['seed'])
    models = fallbacks = 0
    while models < config['bench_interval_models']:
        ir = random_intervals(rng.randint(2, config['bench_interval_n']), rng)
        if ir.to_graph().has_isolated_vertex():
            continue
        models += 1
        fallbacks += interval_odd_coloring(ir).fallback
    rate = fallbacks / models if models else 0.0
    return {'models': models, 'fallbacks': fallbacks, 'rate': round(rate, 4)}


def cmd_bench(args, config: Dict[str, Any]) -> int:
    dispatcher = Dispatcher(config)
    counts: Counter = Counter()
    elapsed: Dict[str, float] = defaultdict(float)
    for i in range(config['bench_instances']):
        nxg = nx.gnp_random_graph(config['bench_n'], config['bench_p'], seed=config['seed'] + i)
        g = Graph.from_networkx(nxg)
        start = time.perf_counter()
        try:
            route = dispatcher.solve(g).algorithm
        except GuardExceededError:
            route = 'guard'
        counts[route] += 1
        elapsed[route] += time.perf_counter() - start

    rows = {route: {'instances': counts[route], 'seconds': round(elapsed[route], 6)} for route in sorted(counts)}
    lines = [f"{'route':<10} {'instances':>9} {'seconds':>10}"]
    lines += [f"{route:<10} {row['instances']:>9} {row['seconds']:>10.4f}" for route, row in rows.items()]

    interval = interval_fallback_rate(config)
    lines.append(f"interval fallback: {interval['fallbacks']} of {interval['models']} models ({interval['rate']:.2%})")
    emit(config, {'n': config['bench_n'], 'p': config['bench_p'], 'routes': rows, 'interval': interval}, lines)
    return EXIT_OK


COMMANDS = {
    'solve': cmd_solve,
    'verify': cmd_verify,
    'kernelize': cmd_kernelize,
    'reduce': cmd_reduce,
    'oracle': cmd_oracle,
    'bench': cmd_bench,
}


def main(argv: Optional[List[str]] = None):
    """Main entry point for oddcolor"""
    args, config = parse_args(argv)
    configure_logging(config['log_level'])
    try:
        code = COMMANDS[args.command](args, config)
    except GraphParseError as e:
        print(f"Error: {e}")
        code = EXIT_PARSE
    except GuardExceededError as e:
        print(f"Error: {e}")
        code = EXIT_GUARD
    except VerificationError:
        raise
    except (OddColorError, OSError) as e:
        print(f"Error: {e}")
        code = EXIT_ERROR
    sys.exit(code)


if __name__ == '__main__':
    main()
