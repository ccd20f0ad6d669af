"""
The generalised sift: run the basic sift steps of a chain in turn and check the result.

The outcome is Las Vegas: SUCCESS is only reported after the explicit test g·x = 1.
"""

import logging
from collections import namedtuple

from blackbox.element import MultCounter, counting
from common import DEFAULT_BURN_IN, DEFAULT_PR_SLOTS, DEFAULT_WORD_TAPE_LIMIT, default_args
from errors import ContractError, StructuralError
from randomness import ProductReplacement, make_rng
from sift.basic_sift import SiftState
from slp import SLPBuilder

SUCCESS = 'SUCCESS'
FAIL = 'FAIL'

# Chain compiled against a concrete group. `stages` holds (first step, last step) index
# pairs, 0-based and inclusive; `samplers` maps a sampler key to (generators, words).
SiftChain = namedtuple('SiftChain', ['name', 'group', 'steps', 'stages', 'samplers', 'spec'])

class SiftOutcome:
    """ Result of one sift.

    Attributes:
        status (str): SUCCESS or FAIL
        word (StraightLineProgram | None): x with g·x = 1, on success with words tracked
        mults (int): multiplications spent, product replacement included
        step_mults (list[int]): multiplications per step
        retries (list[int]): candidates tried per step (0 for skipped steps)
        failed_step (int | None): 1-based step that failed
    """
    def __init__(self, status, word, mults, step_mults, retries, failed_step=None):
        self.status = status
        self.word = word
        self.mults = mults
        self.step_mults = step_mults
        self.retries = retries
        self.failed_step = failed_step

    @property
    def success(self) -> bool:
        return self.status == SUCCESS

    def __repr__(self):
        return f"SiftOutcome({self.status}, mults={self.mults}, retries={self.retries})"

def split_epsilon(total: float, steps: list) -> list:
    """ Error budget per step: 0 for deterministic steps, an equal share for the rest.

    Args:
        total (float): overall failure bound in (0, 1/2)
        steps (list[BasicSiftStep]): steps of the chain, in order

    Returns:
        list[float]: epsilon_i per step, summing to at most total
    """
    if not 0 < total < 0.5:
        raise ContractError(f"total epsilon must lie in (0, 1/2), got {total}")
    randomized = [step.randomized for step in steps]
    if not any(randomized):
        return [0.0] * len(steps)
    share = total / sum(randomized)
    return [share if r else 0.0 for r in randomized]

class Sifter:
    """ Sifts elements down one compiled chain.

    The sifter owns the random stream and the product replacement samplers of the chain's
    random steps. A sampler is created, and its burn-in paid, by the first sift that needs it.
    With words tracked, a sampler whose tape has grown past `word_tape_limit` lines is
    rebuilt before the next sift, so returned words stay short.

    Args:
        chain (SiftChain): compiled chain
        seed (int | np.random.SeedSequence): seed of the random stream
        args (dotdict): options; uses epsilon, burn_in, pr_slots, track_words and word_tape_limit
    """
    def __init__(self, chain: SiftChain, seed=None, args: dict = None):
        self.chain = chain
        self.args = args if args is not None else default_args()
        self.rng = make_rng(seed)
        self.track_words = self.args.get('track_words', True)
        self.word_tape_limit = self.args.get('word_tape_limit', DEFAULT_WORD_TAPE_LIMIT)
        self.samplers = {}

    def _reroot(self):
        for key in [k for k, s in self.samplers.items() if len(s.tape) > self.word_tape_limit]:
            logging.debug(f"(sift): sampler {key} tape reached {len(self.samplers[key].tape)} lines, rebuilding")
            del self.samplers[key]

    def sampler(self, key: str):
        if key not in self.samplers:
            if key not in self.chain.samplers:
                raise StructuralError(f"chain has no sampler {key!r}")
            generators, words = self.chain.samplers[key]
            self.samplers[key] = ProductReplacement(generators,
                                                    rng=self.rng,
                                                    burn_in=self.args.get('burn_in', DEFAULT_BURN_IN),
                                                    slots=self.args.get('pr_slots', DEFAULT_PR_SLOTS),
                                                    track_words=self.track_words,
                                                    generator_words=words if self.track_words else None)
        return self.samplers[key]

    def epsilons(self, total: float = None) -> list:
        total = self.args.get('epsilon') if total is None else total
        return split_epsilon(total, self.chain.steps)

    def sift(self, g, epsilons: list = None) -> SiftOutcome:
        """ Sift g down the chain.

        Args:
            g (GroupElement): element of the chain's group
            epsilons (list[float], optional): per-step budgets; split from args.epsilon if omitted

        Returns:
            SiftOutcome: SUCCESS with x such that g·x = 1, or FAIL
        """
        steps = self.chain.steps
        if epsilons is None:
            epsilons = self.epsilons()
        if len(epsilons) != len(steps):
            raise ContractError(f"{len(epsilons)} epsilons for {len(steps)} steps")
        if any(e < 0 for e in epsilons) or sum(epsilons) >= 0.5:
            raise ContractError(f"epsilons must be nonnegative with sum below 1/2, got {epsilons}")
        self.chain.group.generators[0].check_shape(g)

        builder = None
        if self.track_words:
            self._reroot()
            builder = SLPBuilder(self.chain.group.rank)
        state = SiftState(g, builder)
        counters = [MultCounter() for _ in steps]
        retries = [0] * len(steps)

        with counting() as total:
            i = 0
            while i < len(steps):
                step = steps[i]
                with counting(counters[i]):
                    key = getattr(step, 'sampler_key', None)
                    sampler = self.sampler(key) if key is not None else None
                    probe, tried = step.run(state, epsilons[i], self.rng, sampler)
                    retries[i] = tried

                    if probe is None:
                        logging.debug(f"(sift): step {i + 1} failed after {tried} candidates")
                        return SiftOutcome(FAIL, None, total.count, [c.count for c in counters], retries, i + 1)

                    state.accept(probe, step.conjugate_key)
                    shortcut = step.shortcut_for(probe.match)
                    if shortcut is not None:
                        if shortcut.correction is not None:
                            state.correct(shortcut.correction, shortcut.correction_word)
                        logging.debug(f"(sift): step {i + 1} witness {probe.match} jumps to step {shortcut.jump}")
                        i = shortcut.jump - 1
                    else:
                        i += 1

            verified = state.element.is_identity()

        step_mults = [c.count for c in counters]
        if not verified:
            logging.debug("(sift): final check g·x = 1 failed")
            return SiftOutcome(FAIL, None, total.count, step_mults, retries, len(steps))

        word = builder.program(state.line).pruned() if builder is not None else None
        return SiftOutcome(SUCCESS, word, total.count, step_mults, retries)

def sift(chain: SiftChain, g, epsilons: list = None, seed=None, args: dict = None) -> SiftOutcome:
    """Sift one element with a fresh sifter."""
    return Sifter(chain, seed, args).sift(g, epsilons)
