"""
structest command line

    structest sample      draw configurations from cw / ising / er / ergm
    structest test        run the canonical test on one observed sample
    structest moments     closed-form sphere moments of a statistic
    structest oracle      exact small-instance checks (tv, moments, bounds, concentration)
    structest experiment  run a JSON-configured experiment and write CSV + JSON

Exit codes: 0 on success, 2 on a configuration error, 3 on any other failure.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from shared.config import config
from structest_core.canonical import ErgmTestConfig, IsingTestConfig, ergm_test, ising_test, threshold_from_rule
from structest_core.errors import ConfigurationError
from structest_core.graphs import (
    build_circulant,
    build_random_regular,
    read_graph,
    read_graph_sample,
    read_spin_config,
    write_graph,
)
from structest_core.harness import load_experiment_config, run_experiment
from structest_core.harness.report import json_default
from structest_core.moments import exact_cut_mean, exact_cut_var, ks_bound, ks_bound_ergm, quad_form_moments, wedge_moments
from structest_core.oracle import (
    conditional_moments_oracle,
    exact_ergm_distribution,
    exact_ising_distribution,
    matched_null_ergm,
    matched_null_ising,
    moment_bound_check,
    super_concentration_report,
    tv_distance,
)
from structest_core.rng import stream
from structest_core.samplers import (
    CurieWeissParams,
    DRegIsingParams,
    ErdosRenyiParams,
    ErgmParams,
    sample_curie_weiss,
    sample_dreg_ising,
    sample_er,
    sample_ergm,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_FAILURE = 3


def _emit(payload, out: Optional[str] = None) -> None:
    text = json.dumps(payload, indent=2, default=json_default)
    if out:
        Path(out).write_text(text + "\n")
        logger.info(f"Wrote {out}")
    else:
        print(text)


def _interaction_graph(args):
    """Graph from --graph FILE, else a circulant or seeded random d-regular graph"""
    if getattr(args, 'graph', None):
        return read_graph(args.graph)
    if args.n is None or args.d is None:
        raise ConfigurationError("Give --graph FILE or both --n and --d")
    if getattr(args, 'family', 'random') == 'circulant':
        return build_circulant(args.n, args.d)
    return build_random_regular(args.n, args.d, seed=args.seed)


# ============================================================================
# Subcommands
# ============================================================================

def _sample_params(args):
    if args.model == 'ising':
        graph = _interaction_graph(args)
        if args.graph_out:
            write_graph(graph, args.graph_out)
            logger.info(f"Wrote interaction graph to {args.graph_out}")
        return DRegIsingParams(graph, args.beta, args.h)
    if args.model == 'cw':
        return CurieWeissParams(args.n, args.beta, args.h)
    if args.model == 'er':
        return ErdosRenyiParams(args.n, args.p)
    beta1 = args.beta1 if args.beta1 is not None else matched_null_ergm(args.beta2, args.p, args.n)
    return ErgmParams(args.n, beta1, args.beta2)


def _draw(args, params, rng) -> str:
    """One sample serialized on one line"""
    if isinstance(params, DRegIsingParams):
        return sample_dreg_ising(params, args.sweeps, rng).dumps()
    if isinstance(params, CurieWeissParams):
        return sample_curie_weiss(params, rng).dumps()
    if isinstance(params, ErdosRenyiParams):
        return sample_er(params.n, params.p, rng).dumps_line()
    return sample_ergm(params, args.sweeps, rng).dumps_line()


def cmd_sample(args) -> int:
    if args.n is None and not (args.model == 'ising' and args.graph):
        raise ConfigurationError("--n is required")
    if args.count < 1:
        raise ConfigurationError(f"--count must be >= 1, got {args.count}")

    params = _sample_params(args)
    lines = [_draw(args, params, stream(args.seed, i)) for i in range(args.count)]
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        logger.info(f"Wrote {len(lines)} {args.model} samples to {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _threshold(args, tau: float) -> float:
    if args.T is not None:
        return args.T
    if args.Ln is None:
        raise ConfigurationError("--auto-threshold needs --Ln")
    return threshold_from_rule(tau, args.Ln, args.c)


def cmd_test(args) -> int:
    if args.T is None and not args.auto_threshold:
        raise ConfigurationError("Give --T or --auto-threshold")

    if args.mode == 'ising':
        if not args.graph:
            raise ConfigurationError("--mode ising needs --graph FILE")
        graph = read_graph(args.graph)
        x = read_spin_config(args.sample, args.index)
        threshold = _threshold(args, ks_bound(graph.n, graph.d, args.ks_constant))
        epsilon = config.epsilon if args.epsilon is None else args.epsilon
        decision = ising_test(x, IsingTestConfig(graph=graph, threshold=threshold, epsilon=epsilon))
    else:
        s = read_graph_sample(args.sample, args.index)
        threshold = _threshold(args, ks_bound_ergm(s.n, args.ks_constant))
        delta = config.delta if args.delta is None else args.delta
        decision = ergm_test(s, ErgmTestConfig(n=s.n, threshold=threshold, delta=delta))

    if args.json:
        _emit(decision.to_dict())
    else:
        z = 'outside band' if decision.standardized_stat is None else f"z={decision.standardized_stat:.4f}"
        print(f"{decision.verdict} (label={decision.sphere_label}, {z}, T={decision.threshold_used:.4f})")
    return EXIT_OK


def cmd_moments(args) -> int:
    if args.statistic == 'wedge':
        payload = wedge_moments(args.n, args.sphere).to_dict()
    elif args.d is None:
        raise ConfigurationError(f"--statistic {args.statistic} needs --d")
    elif args.statistic == 'cut':
        payload = {'mean': exact_cut_mean(args.n, args.d, args.sphere),
                   'variance': exact_cut_var(args.n, args.d, args.sphere),
                   'sphere_size': args.sphere, 'n': args.n, 'd': args.d}
    else:
        payload = quad_form_moments(args.n, args.d, args.sphere).to_dict()
    _emit(payload)
    return EXIT_OK


def cmd_oracle_tv(args) -> int:
    if args.model == 'ising':
        graph = _interaction_graph(args)
        null = matched_null_ising(args.beta, args.h, graph.n, graph.d)
        tv = tv_distance(exact_ising_distribution(DRegIsingParams(graph, args.beta, args.h)),
                         exact_ising_distribution(null))
        payload = {'model': 'ising', 'n': graph.n, 'd': graph.d, 'beta': args.beta, 'h': args.h,
                   'beta_cw': null.beta_cw, 'tv': tv}
    else:
        if args.n is None:
            raise ConfigurationError("--model ergm needs --n")
        beta1 = args.beta1 if args.beta1 is not None else matched_null_ergm(args.beta2, args.p, args.n)
        tv = tv_distance(exact_ergm_distribution(ErgmParams(args.n, beta1, args.beta2)),
                         exact_ergm_distribution((args.n, args.p)))
        payload = {'model': 'ergm', 'n': args.n, 'beta1': beta1, 'beta2': args.beta2, 'p': args.p, 'tv': tv}
    payload['risk_lower_bound'] = 0.5 * (1.0 - payload['tv'])
    _emit(payload, args.out)
    return EXIT_OK


def cmd_oracle_moments(args) -> int:
    if args.statistic == 'wedge':
        if args.n is None:
            raise ConfigurationError("--statistic wedge needs --n")
        enumerated = conditional_moments_oracle('wedge', args.sphere, n=args.n)
        closed = wedge_moments(args.n, args.sphere)
    else:
        graph = _interaction_graph(args)
        enumerated = conditional_moments_oracle(args.statistic, args.sphere, graph=graph)
        if args.statistic == 'cut':
            closed = {'mean': exact_cut_mean(graph.n, graph.d, args.sphere),
                      'variance': exact_cut_var(graph.n, graph.d, args.sphere)}
        else:
            closed = quad_form_moments(graph.n, graph.d, args.sphere)
    closed = closed if isinstance(closed, dict) else closed.to_dict()
    _emit({'statistic': args.statistic, 'sphere': args.sphere,
           'enumerated': enumerated.to_dict(), 'closed_form': closed,
           'abs_error': {k: abs(enumerated.to_dict()[k] - closed[k]) for k in ('mean', 'variance')}},
          args.out)
    return EXIT_OK


def cmd_oracle_bounds(args) -> int:
    graph = read_graph(args.graph) if args.graph else None
    n, d = (graph.n, graph.d) if graph else (args.n, args.d)
    if n is None or d is None:
        raise ConfigurationError("Give --graph FILE or both --n and --d")
    report = moment_bound_check(n, d, l=args.sphere, q_max=args.q_max, slack=args.slack,
                                draws=args.draws, seed=args.seed, graph=graph)
    _emit(report.to_dict(), args.out)
    return EXIT_OK


def cmd_oracle_concentration(args) -> int:
    report = super_concentration_report(args.n, args.p, args.beta2)
    _emit(report.to_dict(), args.out)
    return EXIT_OK


def cmd_experiment(args) -> int:
    cfg = load_experiment_config(args.config)
    overrides = {k: v for k, v in (('workers', args.workers), ('replicates', args.replicates),
                                   ('seed', args.seed), ('output', args.out)) if v is not None}
    if overrides:
        cfg = type(cfg).from_dict({**cfg.to_dict(), **overrides})
    report = run_experiment(cfg)
    csv_path, json_path = report.write(cfg.output_prefix)
    print(csv_path)
    print(json_path)
    return EXIT_OK


# ============================================================================
# Parser
# ============================================================================

def _add_graph_args(p: argparse.ArgumentParser) -> None:
    p.add_argument('--graph', help='Edge-list file of the interaction graph')
    p.add_argument('--n', type=int, help='Number of vertices')
    p.add_argument('--d', type=int, help='Degree')
    p.add_argument('--family', choices=('random', 'circulant'), default='random',
                   help='Graph built when --graph is absent (default: random)')
    p.add_argument('--seed', type=int, default=config.seed, help=f'Random seed (default: {config.seed})')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='structest',
                                     description='Single-sample structure vs mean-field tests')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('sample', help='Draw configurations from a model')
    p.add_argument('--model', choices=('cw', 'ising', 'er', 'ergm'), required=True)
    _add_graph_args(p)
    p.add_argument('--graph-out', help='Write the interaction graph used for --model ising')
    p.add_argument('--beta', type=float, default=0.0, help='Coupling (beta_cw for cw, beta for ising)')
    p.add_argument('--h', type=float, default=0.0, help='External field')
    p.add_argument('--beta1', type=float, help='ERGM edge parameter (default: matched to --p)')
    p.add_argument('--beta2', type=float, default=0.0, help='ERGM wedge parameter')
    p.add_argument('--p', type=float, default=0.5, help='Edge probability (default: 0.5)')
    p.add_argument('--sweeps', type=int, help='Glauber sweeps (default: sweep_factor * ln(sites))')
    p.add_argument('--count', type=int, default=1, help='Number of samples (default: 1)')
    p.add_argument('--out', help='Output file, one sample per line (default: stdout)')
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser('test', help='Canonical test of one observed sample')
    p.add_argument('--mode', choices=('ising', 'ergm'), required=True)
    p.add_argument('--graph', help='Interaction graph (ising mode)')
    p.add_argument('--sample', required=True, help='Sample file written by "structest sample"')
    p.add_argument('--index', type=int, default=0, help='Line of the sample file to test (default: 0)')
    p.add_argument('--epsilon', type=float, help=f'Band margin (default: {config.epsilon})')
    p.add_argument('--delta', type=float, help=f'Edge band margin (default: {config.delta})')
    group = p.add_mutually_exclusive_group()
    group.add_argument('--T', type=float, help='Threshold')
    group.add_argument('--auto-threshold', action='store_true', help='Threshold from the rule with --Ln and --c')
    p.add_argument('--Ln', type=float, help='Scaling product for --auto-threshold')
    p.add_argument('--c', type=float, help=f'Rate constant (default: {config.rate_constant})')
    p.add_argument('--ks-constant', type=float, help=f'KS constant (default: {config.ks_constant})')
    p.add_argument('--json', action='store_true', help='Print the decision as JSON')
    p.set_defaults(func=cmd_test)

    p = sub.add_parser('moments', help='Closed-form moments of a statistic on one sphere')
    p.add_argument('--statistic', choices=('quadratic_form', 'cut', 'wedge'), default='quadratic_form')
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--d', type=int)
    p.add_argument('--l', '--m', dest='sphere', type=int, required=True,
                   help='Sphere: plus-count l, or edge count m for wedge')
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser('oracle', help='Exact small-instance checks')
    oracle = p.add_subparsers(dest='oracle_command', required=True)

    q = oracle.add_parser('tv', help='Exact TV between a model and its matched null')
    q.add_argument('--model', choices=('ising', 'ergm'), default='ising')
    _add_graph_args(q)
    q.add_argument('--beta', type=float, default=0.0)
    q.add_argument('--h', type=float, default=0.0)
    q.add_argument('--beta1', type=float)
    q.add_argument('--beta2', type=float, default=0.0)
    q.add_argument('--p', type=float, default=0.5)
    q.add_argument('--out')
    q.set_defaults(func=cmd_oracle_tv)

    q = oracle.add_parser('moments', help='Enumerated sphere moments next to the closed forms')
    q.add_argument('--statistic', choices=('quadratic_form', 'cut', 'wedge'), default='cut')
    _add_graph_args(q)
    q.add_argument('--l', '--m', dest='sphere', type=int, required=True)
    q.add_argument('--out')
    q.set_defaults(func=cmd_oracle_moments)

    q = oracle.add_parser('bounds', help='Cut-size moment and log-MGF bounds')
    q.add_argument('--graph')
    q.add_argument('--n', type=int)
    q.add_argument('--d', type=int)
    q.add_argument('--l', dest='sphere', type=int, help='Sphere size (default: all subsets)')
    q.add_argument('--q-max', type=int, default=3)
    q.add_argument('--slack', type=float, help=f'Moment constant (default: {config.moment_slack})')
    q.add_argument('--draws', type=int, help=f'Monte Carlo draws (default: {config.mc_draws})')
    q.add_argument('--seed', type=int, default=config.seed)
    q.add_argument('--out')
    q.set_defaults(func=cmd_oracle_bounds)

    q = oracle.add_parser('concentration', help='Matched-ERGM concentration identities')
    q.add_argument('--n', type=int, required=True)
    q.add_argument('--p', type=float, default=0.5)
    q.add_argument('--beta2', type=float, default=0.0)
    q.add_argument('--out')
    q.set_defaults(func=cmd_oracle_concentration)

    p = sub.add_parser('experiment', help='Run a JSON-configured experiment')
    p.add_argument('--config', required=True, help='Experiment JSON file')
    p.add_argument('--out', help='Output prefix (default: <results_dir>/<mode>)')
    p.add_argument('--workers', type=int)
    p.add_argument('--replicates', type=int)
    p.add_argument('--seed', type=int)
    p.set_defaults(func=cmd_experiment)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Parse argv, run the subcommand and map errors to exit codes"""
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG
    except Exception as e:
        logger.exception(f"structest {args.command} failed: {e}")
        return EXIT_FAILURE
