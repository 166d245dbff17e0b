"""
Command-line entry point for the Skellam process toolkit
"""

import argparse
import sys

from src.cli import (
    PROCESSES,
    cmd_lrd,
    cmd_moments,
    cmd_pmf,
    cmd_simulate,
    config_from_args,
    run_verification,
)
from src.utils import (
    ConfigError,
    HypothesisViolationError,
    PmfTableCache,
    write_json_report,
)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2


def show_cache_info():
    """Display pmf table cache information"""
    info = PmfTableCache().info()

    print("\n" + "="*60)
    print("PMF TABLE CACHE")
    print("="*60)
    print(f"Number of cached tables: {info['files']}")
    print(f"Total size: {info['size_mb']} MB")
    if info['oldest']:
        print(f"Oldest cache entry: {info['oldest']}")
        print(f"Newest cache entry: {info['newest']}")
    else:
        print("Cache is empty")
    print("="*60 + "\n")


def clear_cache():
    """Delete every cached pmf table"""
    print("\nClearing cache...")
    PmfTableCache().clear()
    print("✓ Cache cleared successfully\n")


def _add_model_arguments(parser):
    parser.add_argument('--process', choices=PROCESSES, help='Process to work with (default: spok)')
    parser.add_argument('--k', type=int, help='Order k (default: 2)')
    parser.add_argument('--lambda1', type=float, help='Upward rate λ1 (default: 1.0)')
    parser.add_argument('--lambda2', type=float, help='Downward rate λ2 (default: 0.5)')
    parser.add_argument('--alpha', type=float, help='Fractional index α in (0, 1] (default: 1.0)')
    parser.add_argument('--subordinator',
                        help="Time change for tcfspok/inv-tcfspok, e.g. 'gamma:1,1', 'tss:0.5,1', "
                             "'ig:1,1' or 'stable:0.5'")
    parser.add_argument('--seed', type=int, help='Random seed (default: $SPOK_SEED or a fixed value)')
    parser.add_argument('--step', type=float, help='Operational step of the first-passage lattice')
    parser.add_argument('--output', help='Output file (default: results/<command>_<process>.*)')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description='Simulate and analyse Skellam processes of order k and their fractional versions'
    )
    sub = parser.add_subparsers(dest='command', required=True)

    simulate = sub.add_parser('simulate', help='Write replicated sample paths to CSV')
    _add_model_arguments(simulate)
    simulate.add_argument('--t-max', dest='t_max', type=float, help='Grid end (default: 1.0)')
    simulate.add_argument('--points', type=int, help='Uniform grid points (default: 11)')
    simulate.add_argument('--times', type=float, nargs='+', help='Explicit grid times')
    simulate.add_argument('--reps', type=int, help='Replications (default: 1000)')

    pmf = sub.add_parser('pmf', help='Tabulate the pmf at one time')
    _add_model_arguments(pmf)
    pmf.add_argument('--t', type=float, help='Time (default: 1.0)')
    pmf.add_argument('--n-min', dest='n_min', type=int, help='Lower end of the support window')
    pmf.add_argument('--n-max', dest='n_max', type=int, help='Upper end of the support window')
    pmf.add_argument('--compare-mc', dest='compare_mc', type=int,
                     help='Replications for an empirical comparison (default: 0, none)')
    pmf.add_argument('--mc-n', dest='mc_n', type=int, help='Draws for Monte Carlo pmf tables')
    pmf.add_argument('--no-cache', dest='no_cache', action='store_true', help='Bypass the pmf table cache')

    moments = sub.add_parser('moments', help='Compare analytic moments with Monte Carlo')
    _add_model_arguments(moments)
    moments.add_argument('--s', type=float, help='Earlier time s (default: 0.5)')
    moments.add_argument('--t', type=float, help='Later time t (default: 1.0)')
    moments.add_argument('--reps', type=int, help='Replications (default: 1000)')
    moments.add_argument('--mc-n', dest='mc_n', type=int, help='Draws for Monte Carlo subordinator moments')

    lrd = sub.add_parser('lrd', help='Fit the correlation decay and classify LRD/SRD')
    _add_model_arguments(lrd)
    lrd.add_argument('--s', type=float, help='Fixed time s (default: 0.5)')
    lrd.add_argument('--t-min', dest='lrd_t_min', type=float, help='Smallest t (default: 1e2)')
    lrd.add_argument('--t-max', dest='lrd_t_max', type=float, help='Largest t (default: 1e5)')
    lrd.add_argument('--points', dest='lrd_points', type=int, help='Log-spaced points (default: 30)')
    lrd.add_argument('--rho', type=float, help='Growth index ρ of E D^α(t)')
    lrd.add_argument('--k1', type=float, help='Constant k1 in E D^α(t) ~ k1 t^ρ')
    lrd.add_argument('--k2', type=float, help='Constant k2 in E D^{2α}(t) ~ k2 t^{2ρ}')
    lrd.add_argument('--mc-n', dest='mc_n', type=int, help='Draws for Monte Carlo subordinator moments')

    verify = sub.add_parser('verify', help='Run the numerical verification suite')
    verify.add_argument('--seed', type=int, help='Random seed (default: $SPOK_SEED or a fixed value)')
    verify.add_argument('--only', help='Run a single criterion by name')
    verify.add_argument('--scale', type=float, help='Multiplier on Monte Carlo sample sizes (default: 1.0)')
    verify.add_argument('--output', help='Report file (default: results/verify_spok.json)')

    cache = sub.add_parser('cache', help='Manage the pmf table cache')
    cache.add_argument('action', choices=['info', 'clear'],
                       help='Action to perform: info (show cache stats), clear (delete cache)')
    return parser


def cmd_verify(config) -> bool:
    print(f"\n{'='*60}")
    print(f"VERIFICATION (seed {config.seed})")
    print(f"{'='*60}\n")
    report = run_verification(config.seed, config.only, config.scale)
    path = write_json_report(report, config.to_dict(), config.output_path(".json"))

    summary = report['summary']
    print(f"\n{'='*60}")
    print(f"{summary['passed']}/{summary['total']} CRITERIA PASSED")
    print(f"{'='*60}")
    print(f"Report written to {path}\n")
    return report['passed']


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == 'cache':
        if args.action == 'info':
            show_cache_info()
        else:
            clear_cache()
            show_cache_info()
        return EXIT_OK

    try:
        config = config_from_args(args).validate()
        if config.command == 'simulate':
            cmd_simulate(config)
        elif config.command == 'pmf':
            cmd_pmf(config)
        elif config.command == 'moments':
            return EXIT_OK if cmd_moments(config)['passed'] else EXIT_FAILURE
        elif config.command == 'lrd':
            cmd_lrd(config)
        else:
            return EXIT_OK if cmd_verify(config) else EXIT_FAILURE
    except (ConfigError, HypothesisViolationError) as e:
        print(f"✗ {e}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as e:
        print(f"✗ {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == '__main__':
    main()
