"""
Benchmark worker: sift pseudo-random elements down a chain and report the cost.

Trials are sharded across processes. Each shard gets its own seed spawned from the
master seed, so a run is reproducible for a fixed seed and number of jobs.
"""

import copy
import logging
import multiprocessing as mp
import time
from collections import Counter
from fractions import Fraction

import numpy as np
from tqdm import tqdm

from blackbox.element import counting
from blackbox.group import BlackBoxGroup
from chains.compile import compile_chain
from chains.spec import ChainSpec
from common import COSET_REPS, DEFAULT_BURN_IN, DEFAULT_PR_SLOTS, DEFAULT_SEED, DEFAULT_TRIALS, default_args
from errors import ContractError
from randomness import ProductReplacement, UniformSampler, make_rng
from sift.basic_sift import RandomSiftStep, SiftState
from sift.engine import Sifter
from sift.formulas import expected_trials_coset, expected_trials_random

HEADER = "\t".join(['group', 'chain', 'trials', 'seconds', 'avg_mults', 'failures'])

class BenchReport:
    """ Aggregated result of a bench run.

    Attributes:
        group (str): group label
        chain (str): chain name
        trials (int): elements sifted
        seconds (float): wall time
        mults (int): multiplications over all trials, product replacement included
        failures (int): sifts that returned FAIL
        retries (list[Counter]): per step, how often each number of candidates was tried
        xi (Fraction): measured multiplications per product replacement draw
        xi_prime (int): measured multiplications for a fresh sampler
    """
    def __init__(self, group: str, chain: str, steps: int = 0):
        self.group = group
        self.chain = chain
        self.trials = 0
        self.seconds = 0.0
        self.mults = 0
        self.failures = 0
        self.retries = [Counter() for _ in range(steps)]
        self.xi = None
        self.xi_prime = None

    @property
    def avg_mults(self) -> float:
        return self.mults / self.trials if self.trials else 0.0

    def merge(self, other: 'BenchReport'):
        self.trials += other.trials
        self.mults += other.mults
        self.failures += other.failures
        for mine, theirs in zip(self.retries, other.retries):
            mine.update(theirs)

    def row(self) -> str:
        return "\t".join([self.group, self.chain, str(self.trials), f"{self.seconds:.3f}",
                          f"{self.avg_mults:.2f}", str(self.failures)])

    def to_text(self) -> str:
        lines = [HEADER, self.row()]
        if self.xi is not None:
            lines.append(f"# xi {float(self.xi):.2f} xi' {self.xi_prime} rho 1")
        for i, histogram in enumerate(self.retries, start=1):
            if histogram:
                counts = " ".join(f"{tried}:{n}" for tried, n in sorted(histogram.items()))
                lines.append(f"# step {i} retries {counts}")
        return "\n".join(lines)

    def __repr__(self):
        return f"BenchReport({self.chain}, trials={self.trials}, avg_mults={self.avg_mults:.2f}, failures={self.failures})"

def _run_shard(task: tuple) -> BenchReport:
    """Sift `trials` pseudo-random elements with one sifter; runs in a pool process."""
    spec, group, args, seed, trials, position = task
    chain = compile_chain(spec, group, args)
    sifter_seed, input_seed = seed.spawn(2)
    sifter = Sifter(chain, sifter_seed, args)
    inputs = ProductReplacement(group,
                                rng=make_rng(input_seed),
                                burn_in=args.get('burn_in', DEFAULT_BURN_IN),
                                slots=args.get('pr_slots', DEFAULT_PR_SLOTS),
                                track_words=False)

    report = BenchReport(group.label, spec.name, len(chain.steps))
    for _ in tqdm(range(trials), desc=f"bench {spec.name}", position=position, disable=not args.get('progress', False)):
        g, _ = inputs.next()
        outcome = sifter.sift(g)
        report.trials += 1
        report.mults += outcome.mults
        for histogram, tried in zip(report.retries, outcome.retries):
            if tried:
                histogram[tried] += 1
        if not outcome.success:
            report.failures += 1
            logging.debug(f"(bench): sift failed at step {outcome.failed_step}")
    return report

def measure_sampler_costs(group: BlackBoxGroup, args: dict, draws: int = 100) -> tuple:
    """ Measured xi (per draw) and xi' (fresh sampler) for product replacement over `group`.

    Returns:
        tuple: (Fraction, int)
    """
    rng = make_rng(args.get('seed', DEFAULT_SEED))
    with counting() as fresh:
        sampler = ProductReplacement(group, rng=rng,
                                     burn_in=args.get('burn_in', DEFAULT_BURN_IN),
                                     slots=args.get('pr_slots', DEFAULT_PR_SLOTS),
                                     track_words=False)
    with counting() as drawn:
        for _ in range(draws):
            sampler.next()
    return Fraction(drawn.count, draws), fresh.count

class BenchWorker:
    """ Runs the bench protocol for one chain.

    Args:
        spec (ChainSpec): chain to benchmark
        group (BlackBoxGroup): representation to run it in
        args (dotdict): uses trials, jobs, seed, epsilon, burn_in, pr_slots, progress, track_words
    """
    def __init__(self, spec: ChainSpec, group: BlackBoxGroup, args: dict = None):
        self.spec = spec
        self.group = group
        self.args = args if args is not None else default_args()
        if 'track_words' not in self.args:
            self.args = copy.copy(self.args)
            self.args['track_words'] = False

    def shards(self) -> list:
        trials = self.args.get('trials', DEFAULT_TRIALS)
        if trials < 0:
            raise ContractError(f"trials must be nonnegative, got {trials}")
        jobs = max(1, min(self.args.get('jobs', 1), trials)) if trials else 1
        seeds = np.random.SeedSequence(self.args.get('seed', DEFAULT_SEED)).spawn(jobs)
        sizes = [len(part) for part in np.array_split(np.arange(trials), jobs)]
        return [(self.spec, self.group, self.args, seed, size, i) for i, (seed, size) in enumerate(zip(seeds, sizes))]

    def start(self) -> BenchReport:
        report = BenchReport(self.group.label, self.spec.name, len(self.spec.steps))
        tasks = [t for t in self.shards() if t[4] > 0]
        if not tasks:
            logging.info(f"(bench): no trials requested for {self.spec.name}")
            return report

        logging.info(f"(bench): sifting {sum(t[4] for t in tasks)} elements down {self.spec.name} "
                     f"with {len(tasks)} worker(s)")
        begin = time.perf_counter()
        if len(tasks) == 1:
            report.merge(_run_shard(tasks[0]))
        else:
            with mp.get_context('spawn').Pool(len(tasks)) as pool:
                for shard in pool.imap_unordered(_run_shard, tasks):
                    report.merge(shard)
        report.seconds = time.perf_counter() - begin
        report.xi, report.xi_prime = measure_sampler_costs(self.group, self.args)

        logging.info(f"(bench): {report}")
        return report

def bench(spec: ChainSpec, group: BlackBoxGroup, args: dict = None) -> BenchReport:
    return BenchWorker(spec, group, args).start()

class StrategyComparison:
    """ Mean candidates tried by both strategies on one coset-reps step.

    Attributes:
        step (int): 1-based step index
        k, n (int): transversal size and hits per coset
        invocations (int): states the step was run on
        coset_mean, random_mean (float): empirical mean candidates tried
        coset_expected, random_expected (Fraction): (k+1)/(n+1) and k/n
    """
    def __init__(self, step: int, k: int, n: int):
        self.step = step
        self.k = k
        self.n = n
        self.invocations = 0
        self.coset_total = 0
        self.random_total = 0
        self.coset_expected = expected_trials_coset(k, n)
        self.random_expected = expected_trials_random(Fraction(n, k))

    @property
    def coset_mean(self) -> float:
        return self.coset_total / self.invocations if self.invocations else 0.0

    @property
    def random_mean(self) -> float:
        return self.random_total / self.invocations if self.invocations else 0.0

    def to_text(self) -> str:
        return "\n".join([
            "\t".join(['step', 'k', 'n', 'invocations', 'strategy', 'mean_trials', 'expected_trials']),
            "\t".join([str(self.step), str(self.k), str(self.n), str(self.invocations), COSET_REPS,
                       f"{self.coset_mean:.3f}", f"{float(self.coset_expected):.3f}"]),
            "\t".join([str(self.step), str(self.k), str(self.n), str(self.invocations), 'random',
                       f"{self.random_mean:.3f}", f"{float(self.random_expected):.3f}"]),
        ])

def _state_at(sifter: Sifter, g, target: int, rng):
    """Run the steps before `target` on g; None if g fails or a shortcut jumps past target."""
    steps = sifter.chain.steps
    epsilons = sifter.epsilons()
    state = SiftState(g)
    i = 0
    while i < target:
        step = steps[i]
        key = getattr(step, 'sampler_key', None)
        probe, _ = step.run(state, epsilons[i], rng, sifter.sampler(key) if key is not None else None)
        if probe is None:
            return None
        state.accept(probe, step.conjugate_key)
        shortcut = step.shortcut_for(probe.match)
        if shortcut is None:
            i += 1
            continue
        if shortcut.correction is not None:
            state.correct(shortcut.correction, None)
        i = shortcut.jump - 1
    return state if i == target else None

def compare_strategies(spec: ChainSpec, group: BlackBoxGroup, step: int, invocations: int = 10**4,
                       args: dict = None) -> StrategyComparison:
    """ Run a coset-reps step and its random-search counterpart on the same inputs.

    The random counterpart draws uniformly from the transversal, which has sifting
    parameter n/k. Inputs are pseudo-random elements sifted down the earlier steps.

    Args:
        spec (ChainSpec): chain holding the step
        group (BlackBoxGroup): representation
        step (int): 1-based index of a coset-reps step
        invocations (int): number of inputs
        args (dotdict): uses seed, epsilon, burn_in, pr_slots, progress
    """
    args = copy.copy(args if args is not None else default_args())
    args['track_words'] = False
    chain = compile_chain(spec, group, args)
    if not 1 <= step <= len(chain.steps) or chain.steps[step - 1].strategy != COSET_REPS:
        raise ContractError(f"step {step} of {spec.name} is not a coset-reps step")

    coset_step = chain.steps[step - 1]
    sifter_seed, input_seed, draw_seed = np.random.SeedSequence(args.get('seed', DEFAULT_SEED)).spawn(3)
    sifter = Sifter(chain, sifter_seed, args)
    rng = make_rng(draw_seed)
    inputs = ProductReplacement(group, rng=make_rng(input_seed),
                                burn_in=args.get('burn_in', DEFAULT_BURN_IN),
                                slots=args.get('pr_slots', DEFAULT_PR_SLOTS),
                                track_words=False)
    random_step = RandomSiftStep(coset_step.membership, Fraction(coset_step.n, coset_step.k), 'transversal')
    uniform = UniformSampler([y for y, _ in coset_step.transversal], rng)
    eps = sifter.epsilons()[step - 1]
    random_eps = eps if eps > 0 else args.get('epsilon')

    result = StrategyComparison(step, coset_step.k, coset_step.n)
    progress = tqdm(total=invocations, desc=f"compare step {step}", disable=not args.get('progress', False))
    while result.invocations < invocations:
        g, _ = inputs.next()
        state = _state_at(sifter, g, step - 1, rng)
        if state is None:
            continue
        _, coset_tried = coset_step.run(copy.copy(state), eps, rng)
        _, random_tried = random_step.run(copy.copy(state), random_eps, rng, uniform)
        result.invocations += 1
        result.coset_total += coset_tried
        result.random_total += random_tried
        progress.update(1)
    progress.close()

    logging.info(f"(bench): step {step} mean trials coset-reps {result.coset_mean:.3f}, random {result.random_mean:.3f}")
    return result
