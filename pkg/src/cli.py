"""
Command line for the random-unitary channel experiments.

    python -m src depolarizing --n-min 1 --n-max 27 --p 0.5 --shots 1000 --out report.json
    python -m src hamming --n 27 --p 0.5 --shots 10000 --p-flip 0.047
    python -m src tfim --J 1 --h 1 --dt 0.25 --steps 25 --p 0.05 --shots 1000
    python -m src ancilla-compare --n 1..3 --p 0.5 --shots 1000
    python -m src variance-check --channel spec.json --observable ZI --shots 1000 --runs 400

Exit codes: 0 success, 2 invalid input, 3 capacity exceeded.
"""
import argparse
import logging
import sys
from typing import Dict, List, Optional, Tuple

from src import __version__
from src.config import configure_logging, load_sim_config
from src.errors import CapacityError
from src.facades.ExperimentFacade import ExperimentFacade
from src.models.ExperimentConfig import BACKENDS, STATES, ExperimentConfig
from src.pool import close_pool, init_pool

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_CAPACITY = 3


def parse_qubit_range(text: str) -> Tuple[int, int]:
    """'3' -> (3, 3); '1..3' -> (1, 3)."""
    try:
        if '..' in text:
            low, high = text.split('..', 1)
            return int(low), int(high)
        value = int(text)
        return value, value
    except ValueError:
        raise argparse.ArgumentTypeError(f"Expected N or A..B, got {text!r}")


def _add_common(parser: argparse.ArgumentParser, shots: bool = True):
    parser.add_argument('--p', type=float, help='Depolarizing strength')
    if shots:
        parser.add_argument('--shots', type=int, help='Shots per estimate')
    parser.add_argument('--seed', type=int, help='Master seed')
    parser.add_argument('--backend', choices=BACKENDS, help='Simulation backend')
    parser.add_argument('--exact', action='store_true', help='Exact-subcircuit estimator mode')
    parser.add_argument('--out', help='Report file (JSON); stdout when omitted')
    parser.add_argument('--csv', help='Flat CSV of the series')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='sim', description='Random-unitary channel simulation experiments')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    parser.add_argument('--workers', type=int, help='Worker threads (overrides SIM_WORKERS)')
    parser.add_argument('--verbose', action='store_true', help='Debug logging')
    parser.add_argument('--env-file', help='Environment file with SIM_* settings')
    sub = parser.add_subparsers(dest='experiment', required=True)

    dep = sub.add_parser('depolarizing', help='Depolarizing sweep over qubit counts')
    dep.add_argument('--n-min', type=int)
    dep.add_argument('--n-max', type=int)
    dep.add_argument('--state', choices=STATES)
    dep.add_argument('--p-flip', type=float, help='Readout bit-flip rate')
    dep.add_argument('--force-stabilizer', action='store_true', help='Full tableau simulation instead of the basis fast path')
    _add_common(dep)

    ham = sub.add_parser('hamming', help='Hamming-weight histogram of the depolarized zero state')
    ham.add_argument('--n', type=int)
    ham.add_argument('--p-flip', type=float, help='Readout bit-flip rate')
    ham.add_argument('--force-stabilizer', action='store_true')
    _add_common(ham)

    tfim = sub.add_parser('tfim', help='Noisy two-qubit transverse-field Ising evolution')
    tfim.add_argument('--J', type=float)
    tfim.add_argument('--h', type=float)
    tfim.add_argument('--dt', type=float, help='Step duration (free parameter, default 0.25)')
    tfim.add_argument('--steps', type=int)
    _add_common(tfim)

    anc = sub.add_parser('ancilla-compare', help='Ancilla-based baseline against the sampled estimator')
    anc.add_argument('--n', type=parse_qubit_range, help='Qubit count or range A..B (at most 3)')
    _add_common(anc)

    var = sub.add_parser('variance-check', help='Empirical estimator variance over seeded runs')
    var.add_argument('--channel', required=True, help='Channel-spec JSON file')
    var.add_argument('--observable', required=True, help='Pauli string, qubit 0 first')
    var.add_argument('--runs', type=int)
    var.add_argument('--state', choices=STATES)
    _add_common(var)
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    """Map parsed flags onto an ExperimentConfig; absent flags keep the experiment defaults."""
    fields: Dict = {
        'p': args.p,
        'shots': getattr(args, 'shots', None),
        'seed': args.seed,
        'backend': args.backend,
        'mode': 'exact-subcircuit' if args.exact else None,
        'state': getattr(args, 'state', None),
        'p_flip': getattr(args, 'p_flip', None),
        'force_stabilizer': getattr(args, 'force_stabilizer', None) or None,
    }
    if args.experiment == 'depolarizing':
        fields.update(n_min=args.n_min, n_max=args.n_max)
    elif args.experiment == 'hamming':
        fields.update(n_min=args.n, n_max=args.n)
    elif args.experiment == 'tfim':
        fields.update(J=args.J, h=args.h, dt=args.dt, steps=args.steps)
    elif args.experiment == 'ancilla-compare' and args.n is not None:
        fields.update(n_min=args.n[0], n_max=args.n[1])
    elif args.experiment == 'variance-check':
        fields.update(channel_path=args.channel, observable=args.observable, runs=args.runs)
    return ExperimentConfig(args.experiment, **fields)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        sim_config = load_sim_config(args.env_file)
        configure_logging(sim_config, verbose=args.verbose)
        config = config_from_args(args)
        init_pool(args.workers or sim_config.workers)
        report = ExperimentFacade(sim_config).run(config)
        if args.out:
            path = report.write_json(args.out)
            print(f"Report written to {path}")
        else:
            print(report.to_json())
        if args.csv:
            path = report.write_csv(args.csv)
            print(f"Series written to {path}")
        return EXIT_OK
    except CapacityError as e:
        print(f"Capacity exceeded: {e}", file=sys.stderr)
        return EXIT_CAPACITY
    except (ValueError, OSError) as e:
        print(f"Invalid input: {e}", file=sys.stderr)
        return EXIT_INVALID
    finally:
        close_pool()
