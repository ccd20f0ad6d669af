"""
Pseudo-random group elements by product replacement, and uniform choice from stored sets.

All randomness comes from numpy's counter-based Philox bit generator, so a seed fixes a
stream on every platform.
"""

import logging

import numpy as np

from blackbox.group import BlackBoxGroup
from common import DEFAULT_BURN_IN, DEFAULT_PR_SLOTS
from errors import ContractError, StructuralError
from slp import IDENTITY_LINE, SLPBuilder, StraightLineProgram

def make_rng(seed) -> np.random.Generator:
    """Counter-based generator for an integer seed or a numpy SeedSequence."""
    return np.random.Generator(np.random.Philox(seed))

class ProductReplacement:
    """ Product replacement generator with a rattle accumulator.

    The state is a tuple of `slots` elements, seeded with the generators repeated cyclically.
    A replacement step picks i != j and a side at random and replaces s_i by s_i·s_j or s_j·s_i
    (one multiplication). Each emitted element is the rattle r <- r·s_i after one further
    replacement step, so every draw costs exactly two multiplications and the burn-in costs
    exactly `burn_in`.

    When `track_words` is on, every slot carries its straight-line program on a shared tape.

    Args:
        generators (BlackBoxGroup | list[GroupElement]): generators of the group to sample
        seed (int, optional): seed for a private Philox stream
        burn_in (int): replacement steps applied on construction
        slots (int): accumulator size, at least 2
        rng (np.random.Generator, optional): shared stream, used instead of `seed`
        track_words (bool): record straight-line programs for emitted elements
        generator_words (list[StraightLineProgram], optional): words of the generators in
            some standard generators. Defaults to the generators themselves as inputs.
    """
    def __init__(self,
                 generators,
                 seed: int = None,
                 burn_in: int = DEFAULT_BURN_IN,
                 slots: int = DEFAULT_PR_SLOTS,
                 rng: np.random.Generator = None,
                 track_words: bool = True,
                 generator_words: list = None):
        if isinstance(generators, BlackBoxGroup):
            generators = generators.generators
        generators = list(generators)
        if not generators:
            raise StructuralError("product replacement needs at least one generator")
        if slots < 2:
            raise ContractError(f"product replacement needs at least 2 slots, got {slots}")
        if burn_in < 0:
            raise ContractError(f"burn-in must be nonnegative, got {burn_in}")

        self.rng = rng if rng is not None else make_rng(seed)
        self.track_words = track_words
        self.size = max(slots, len(generators))

        self.elements = [generators[i % len(generators)] for i in range(self.size)]
        self.rattle = generators[0].identity()

        self.tape = None
        self.words = None
        self.rattle_word = IDENTITY_LINE
        if track_words:
            if generator_words is None:
                self.tape = SLPBuilder(len(generators))
                base = list(range(len(generators)))
            else:
                if len(generator_words) != len(generators):
                    raise StructuralError("one word per generator is required")
                self.tape = SLPBuilder(generator_words[0].slots)
                base = [self.tape.inline(w) for w in generator_words]
            self.words = [base[i % len(base)] for i in range(self.size)]

        for _ in range(burn_in):
            self._step()

        logging.debug(f"(pr): initialised {self.size} slots with burn-in {burn_in}")

    def _step(self) -> int:
        i, j = self.rng.choice(self.size, size=2, replace=False)
        i, j = int(i), int(j)
        if self.rng.integers(2) == 0:
            self.elements[i] = self.elements[i] * self.elements[j]
            if self.track_words:
                self.words[i] = self.tape.mul(self.words[i], self.words[j])
        else:
            self.elements[i] = self.elements[j] * self.elements[i]
            if self.track_words:
                self.words[i] = self.tape.mul(self.words[j], self.words[i])
        return i

    def next(self) -> tuple:
        """ Draw the next pseudo-random element.

        Returns:
            tuple: (element, StraightLineProgram), the program being None when words are not tracked
        """
        i = self._step()
        self.rattle = self.rattle * self.elements[i]
        if not self.track_words:
            return self.rattle, None

        self.rattle_word = self.tape.mul(self.rattle_word, self.words[i])
        return self.rattle, self.tape.program(self.rattle_word)

    def __iter__(self):
        return self

    def __next__(self):
        return self.next()

class UniformSampler:
    """ Exactly uniform sampler over an enumerated set of elements.

    Args:
        elements (list[GroupElement]): the whole set
        rng (np.random.Generator): stream
        word (callable, optional): index -> StraightLineProgram
    """
    def __init__(self, elements: list, rng: np.random.Generator, word=None):
        if not elements:
            raise ContractError("cannot sample from an empty set")
        self.elements = elements
        self.rng = rng
        self.word = word

    def next(self) -> tuple:
        i = int(self.rng.integers(len(self.elements)))
        return self.elements[i], (self.word(i) if self.word is not None else None)

def pr_init(group, seed: int, burn_in: int = DEFAULT_BURN_IN, **kwargs) -> ProductReplacement:
    return ProductReplacement(group, seed=seed, burn_in=burn_in, **kwargs)

def pr_next(state: ProductReplacement) -> tuple:
    return state.next()

def uniform_from_set(items: list, rng: np.random.Generator):
    """Exactly uniform choice of one item by unbiased index sampling."""
    if len(items) == 0:
        raise ContractError("cannot choose from an empty set")
    return items[int(rng.integers(len(items)))]

def without_replacement(items: list, rng: np.random.Generator):
    """ Yield every item once, each time choosing uniformly among those not yet tried.

    Args:
        items (list): finite set to exhaust
        rng (np.random.Generator): stream
    """
    remaining = list(items)
    while remaining:
        i = int(rng.integers(len(remaining)))
        remaining[i], remaining[-1] = remaining[-1], remaining[i]
        yield remaining.pop()
