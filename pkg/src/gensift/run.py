"""
Main entry point for running from command line
"""

import argparse
import logging
import multiprocessing as mp
import os
import sys

import argcomplete
import yaml

from blackbox.group import BlackBoxGroup, read_generators
from chains.compile import compile_chain
from chains.recipes import list_recipes, load_recipe, validate_recipe
from chains.spec import ChainSpec, load_chain_spec, serialize_chain_spec, write_chain_spec
from chains.validate import MODES, format_claims, has_failures, validate_chain
from common import (CHAINS_DIR, DEFAULT_EPSILON, DEFAULT_SEED, DEFAULT_TRIALS, EXIT_FAIL, EXIT_OK, EXIT_USAGE,
                    default_args, dotdict)
from bench_worker import BenchWorker, compare_strategies
from errors import GensiftError
from oracle.identities import verify_identities
from oracle.reconstruct import BUILDERS, build_chain, shipped_chain, shipped_generators
from randomness import ProductReplacement, make_rng
from sift.engine import Sifter
from slp import StraightLineProgram

# build-chain target that writes every shipped chain
ALL = 'all'

def configure_logger(level: str = 'INFO', log_file: str = None):
    handlers = [logging.StreamHandler(sys.stderr)]  # Log to console
    if log_file is not None:
        handlers.append(logging.FileHandler(log_file))  # Log to file
    logging.basicConfig(
        level=getattr(logging, level.upper()),
        format="%(asctime)s - %(levelname)s - %(threadName)s - %(message)s",
        handlers=handlers,
        force=True
    )

def load_group(name_or_path: str) -> BlackBoxGroup:
    """A generator file, or a shipped name (m11, m11_gf2, m12, m22, s4, s5, s6, and j2 or hs, built on first use)."""
    if os.path.exists(name_or_path):
        return read_generators(name_or_path)
    return shipped_generators(name_or_path)

def load_chain(name_or_path: str, args: dotdict) -> ChainSpec:
    """A .chain file, or the name of a shipped chain (read from data/chains, or reconstructed and cached there)."""
    if os.path.exists(name_or_path):
        return load_chain_spec(name_or_path)
    return shipped_chain(name_or_path, args)

def _chain_and_group(args: dotdict) -> tuple:
    spec = load_chain(args.chain, args)
    group = load_group(args.group if args.get('group') else spec.group)
    return spec, group

def sift_cmd(args: dotdict) -> int:
    spec, group = _chain_and_group(args)
    args.track_words = True
    chain = compile_chain(spec, group, args)

    if args.get('element'):
        with open(args.element) as f:
            element_word = StraightLineProgram.parse(f.read())
        g = element_word.evaluate(group.generators)
    elif args.get('random'):
        g, _ = ProductReplacement(group, rng=make_rng(args.seed), track_words=False,
                                  burn_in=args.burn_in, slots=args.pr_slots).next()
    else:
        raise GensiftError("give an element with --element <slp file> or --random")

    outcome = Sifter(chain, args.seed, args).sift(g)
    if not outcome.success:
        logging.info(f"(sift): FAIL at step {outcome.failed_step} after {outcome.mults} multiplications")
        print("FAIL")
        return EXIT_FAIL

    x = outcome.word.evaluate(group.generators)
    print(outcome.word.to_text())
    if (g * x).is_identity():
        print("VERIFIED gx=1")
        return EXIT_OK
    print("FAIL")
    return EXIT_FAIL

def bench_cmd(args: dotdict) -> int:
    spec, group = _chain_and_group(args)
    report = BenchWorker(spec, group, args).start()
    print(report.to_text())
    return EXIT_OK

def verify_cmd(args: dotdict) -> int:
    claims = []
    if args.get('recipe'):
        names = list_recipes() if args.recipe == ALL else [args.recipe]
        for name in names:
            recipe = load_recipe(name)
            group = load_group(recipe['generators']) if 'generators' in recipe else None
            claims += validate_recipe(recipe, group, args.seed)
    if args.get('chain'):
        spec, group = _chain_and_group(args)
        claims += validate_chain(spec, group, args.mode, args)
    if args.get('identities'):
        claims += verify_identities(args.seed)
    if not claims:
        raise GensiftError("nothing to verify: give --chain, --recipe or --identities")

    print(format_claims(claims))
    return EXIT_FAIL if has_failures(claims) else EXIT_OK

def random_cmd(args: dotdict) -> int:
    group = load_group(args.group)
    sampler = ProductReplacement(group, rng=make_rng(args.seed), burn_in=args.burn_in, slots=args.pr_slots)
    for i in range(args.count):
        g, word = sampler.next()
        print(f"# element {i + 1}: {g}")
        print(word.pruned().to_text())
    return EXIT_OK

def build_chain_cmd(args: dotdict) -> int:
    if args.name == ALL:
        directory = args.get('output') or CHAINS_DIR
        os.makedirs(directory, exist_ok=True)
        for name in sorted(BUILDERS):
            path = os.path.join(directory, f"{name}.chain")
            write_chain_spec(build_chain(name, args=args), path)
            logging.info(f"(chains): wrote {name} to {path}")
        return EXIT_OK

    group = load_group(args.group) if args.get('group') else None
    spec = build_chain(args.name, group=group, args=args)
    if args.get('output'):
        write_chain_spec(spec, args.output)
        logging.info(f"(chains): wrote {spec.name} to {args.output}")
    else:
        print(serialize_chain_spec(spec), end='')
    return EXIT_OK

def compare_cmd(args: dotdict) -> int:
    spec, group = _chain_and_group(args)
    result = compare_strategies(spec, group, args.step, args.invocations, args)
    print(result.to_text())
    return EXIT_OK

COMMANDS = {
    'sift': sift_cmd,
    'bench': bench_cmd,
    'verify': verify_cmd,
    'random': random_cmd,
    'build-chain': build_chain_cmd,
    'compare': compare_cmd,
}

def build_parser() -> argparse.ArgumentParser:
    # Options default to absent so that only explicit flags override the config file
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument('--config', help='YAML file of option defaults')
    common.add_argument('--seed', type=int, help=f'master seed (default {DEFAULT_SEED})')
    common.add_argument('--epsilon', type=float, help=f'overall failure bound (default {DEFAULT_EPSILON})')
    common.add_argument('--burn-in', dest='burn_in', type=int, help='product replacement burn-in')
    common.add_argument('--jobs', type=int, help='worker processes')
    common.add_argument('--progress', action='store_true', help='show progress bars')
    common.add_argument('--log-level', dest='log_level', help='DEBUG, INFO, WARNING or ERROR')
    common.add_argument('--log-file', dest='log_file', help='also log to this file')

    chain = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    chain.add_argument('--group', help='generator file or shipped generator name')
    chain.add_argument('--chain', required=True,
                       help=f"chain file or shipped chain ({', '.join(sorted(BUILDERS))})")

    parser = argparse.ArgumentParser(prog='gensift', description='Generalised sifting in black-box groups')
    commands = parser.add_subparsers(dest='command', required=True)

    p = commands.add_parser('sift', parents=[common, chain], help='sift one element down a chain',
                            argument_default=argparse.SUPPRESS)
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument('--element', help='straight-line program file of the element')
    source.add_argument('--random', action='store_true', help='sift a pseudo-random element')

    p = commands.add_parser('bench', parents=[common, chain], help='sift pseudo-random elements and report costs',
                            argument_default=argparse.SUPPRESS)
    p.add_argument('--trials', type=int, help=f'elements to sift (default {DEFAULT_TRIALS})')

    p = commands.add_parser('verify', parents=[common], help='validate chains, recipes and identities',
                            argument_default=argparse.SUPPRESS)
    p.add_argument('--group', help='generator file or shipped generator name')
    p.add_argument('--chain', help='chain file or shipped chain')
    p.add_argument('--mode', choices=MODES, help='static or oracle (default oracle)')
    p.add_argument('--recipe', help="recipe name, path, or 'all'")
    p.add_argument('--identities', action='store_true', help='run the identity suite')
    p.add_argument('--enumeration-cap', dest='enumeration_cap', type=int, help='largest group to enumerate')

    p = commands.add_parser('random', parents=[common], help='emit pseudo-random elements with their programs',
                            argument_default=argparse.SUPPRESS)
    p.add_argument('--group', required=True, help='generator file or shipped generator name')
    p.add_argument('--count', type=int, help='number of elements (default 1)')

    p = commands.add_parser('build-chain', parents=[common], help='reconstruct a shipped chain',
                            argument_default=argparse.SUPPRESS)
    p.add_argument('name', choices=sorted(BUILDERS) + [ALL], help=f"a shipped chain, or '{ALL}' to write every one")
    p.add_argument('--group', help='generator file to build against')
    p.add_argument('--output', help=f'write the chain here instead of stdout; a directory with {ALL} (default {CHAINS_DIR})')

    p = commands.add_parser('compare', parents=[common, chain], help='random search against coset representatives',
                            argument_default=argparse.SUPPRESS)
    p.add_argument('--step', type=int, required=True, help='1-based coset-reps step')
    p.add_argument('--invocations', type=int, help='inputs to run (default 10000)')

    argcomplete.autocomplete(parser)
    return parser

def make_args(namespace: argparse.Namespace) -> dotdict:
    """Built-in defaults, then the config file, then explicit flags."""
    args = default_args()
    args.update({'mode': 'oracle', 'count': 1, 'invocations': 10**4, 'log_level': 'INFO'})
    options = vars(namespace)
    if options.get('config'):
        with open(options['config']) as f:
            config = yaml.safe_load(f) or {}
        if not isinstance(config, dict):
            raise GensiftError(f"{options['config']}: config must be a mapping")
        args.update({key.replace('-', '_'): value for key, value in config.items()})
    args.update(options)
    return args

def main(argv: list = None) -> int:
    parser = build_parser()
    try:
        namespace = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE

    try:
        args = make_args(namespace)
        configure_logger(args.log_level, args.get('log_file'))
        return COMMANDS[args.command](args)
    except (GensiftError, OSError, yaml.YAMLError) as e:
        logging.error(f"{namespace.command}: {e}")
        return EXIT_USAGE

if __name__ == "__main__":
    # Configure multiprocessing
    mp.set_start_method('spawn')

    sys.exit(main())
