"""
Basic sift steps: one move from S_i to S_{i+1} of a subset chain.

Given g in H, a step looks for y in L with g·y in K. Three strategies are provided:

- RandomSiftStep: draw y from a sampler of L, at most N times.
- CosetRepsSiftStep: try the stored representatives of L' in L, each once, in random order.
- ExhaustiveFinalStep: look g up in the stored final subset.
"""

import logging
from abc import ABC, abstractmethod
from collections import namedtuple
from fractions import Fraction

from blackbox.operations import conjugate
from common import COSET_REPS, EXHAUSTIVE_FINAL, RANDOM
from errors import ContractError, StructuralError
from randomness import without_replacement
from sift.formulas import coset_step_error, random_step_parameters
from sift.membership import ConjugatesTest, MembershipTest, StoredSetTest
from slp import IDENTITY_LINE, INVERSE_OF_FIRST, slp_compose

# Accepted candidate: y and its word, the witness index reported by the membership test,
# and whichever of g·y / a^(g·y) the test already computed (None otherwise)
Probe = namedtuple('Probe', ['y', 'word', 'match', 'candidate', 'conjugate'])

# On witness `match`, multiply by `correction` (None for none) and continue at step `jump` (1-based)
Shortcut = namedtuple('Shortcut', ['match', 'jump', 'correction', 'correction_word'])

class SiftState:
    """ The running element g·s_0···s_i of one sift, its word, and cached conjugates.

    Args:
        element (GroupElement): the element being sifted
        builder (SLPBuilder, optional): tape recording x = s_0···s_i
    """
    def __init__(self, element, builder=None):
        self.element = element
        self.builder = builder
        self.line = IDENTITY_LINE
        self.conjugates = {}

    def conjugate_of(self, key: str, a):
        """a^(current element), computed at most once per element."""
        if key not in self.conjugates:
            self.conjugates = {key: conjugate(a, self.element)}
        return self.conjugates[key]

    def _record(self, word):
        if self.builder is not None and word is not None:
            self.line = self.builder.mul(self.line, self.builder.inline(word.pruned()))

    def accept(self, probe: Probe, key: str = None):
        self.element = probe.candidate if probe.candidate is not None else self.element * probe.y
        self.conjugates = {key: probe.conjugate} if probe.conjugate is not None else {}
        self._record(probe.word)

    def correct(self, correction, word):
        self.element = self.element * correction
        self.conjugates = {}
        self._record(word)

class BasicSiftStep(ABC):
    """ One step of a compiled chain.

    Args:
        membership (MembershipTest): test for K
        p (Fraction): sifting parameter, trusted as given
        shortcuts (list[Shortcut]): actions keyed by the witness index the test reports
        label (str): description for reports
    """
    strategy = None

    def __init__(self, membership: MembershipTest, p, shortcuts: list = None, label: str = ''):
        p = Fraction(p)
        if not 0 < p <= 1:
            raise ContractError(f"sifting parameter must lie in (0, 1], got {p}")
        self.membership = membership
        self.p = p
        self.shortcuts = {s.match: s for s in (shortcuts or [])}
        self.label = label
        self.index = None

    @property
    def randomized(self) -> bool:
        """Whether the step needs a share of the error budget."""
        return self.strategy == RANDOM or not self.membership.deterministic

    def shortcut_for(self, match: int):
        return self.shortcuts.get(match)

    def probe(self, state: SiftState, y, word, e: float, rng) -> Probe:
        """ Test g·y, reusing the running conjugate a^g when the test conjugates.

        Returns:
            Probe | None: the candidate if accepted
        """
        test = self.membership
        if isinstance(test, ConjugatesTest):
            z = conjugate(state.conjugate_of(test.key, test.a), y)
            match = test.match_conjugate(z, e, rng)
            return Probe(y, word, match, None, z) if match is not None else None

        candidate = state.element * y
        match = test.match(candidate, e, rng)
        return Probe(y, word, match, candidate, None) if match is not None else None

    @property
    def conjugate_key(self):
        return self.membership.key if isinstance(self.membership, ConjugatesTest) else None

    @abstractmethod
    def run(self, state: SiftState, eps: float, rng, sampler=None) -> tuple:
        """ Search for the next factor.

        Args:
            state (SiftState): current element
            eps (float): error budget of this step
            rng (np.random.Generator): stream for random choices
            sampler (optional): source of random elements of L, for random search

        Returns:
            tuple: (Probe or None on failure, number of candidates tried)
        """
        pass

class RandomSiftStep(BasicSiftStep):
    """ Random search: up to N draws y from L, returning the first with g·y accepted.

    Args:
        sampler_key (str): which sampler of the sifter provides elements of L
    """
    strategy = RANDOM

    def __init__(self, membership, p, sampler_key: str, shortcuts=None, label=''):
        super().__init__(membership, p, shortcuts, label)
        self.sampler_key = sampler_key

    def parameters(self, eps: float) -> tuple:
        return random_step_parameters(eps, self.p, self.membership.deterministic)

    def run(self, state, eps, rng, sampler=None):
        if sampler is None:
            raise StructuralError("random search needs a sampler")
        e, trials = self.parameters(eps)
        for t in range(1, trials + 1):
            y, word = sampler.next()
            probe = self.probe(state, y, word, e, rng)
            if probe is not None:
                return probe, t
        return None, trials

class CosetRepsSiftStep(BasicSiftStep):
    """ Transversal search over k stored representatives, without replacement.

    Args:
        transversal (list[tuple]): (element, word) for each representative
        n (int): min over h of the number of representatives landing in K
    """
    strategy = COSET_REPS

    def __init__(self, membership, p, transversal: list, n: int, shortcuts=None, label=''):
        super().__init__(membership, p, shortcuts, label)
        if not transversal:
            raise ContractError("coset-reps step needs a nonempty transversal")
        if not 1 <= n <= len(transversal):
            raise ContractError(f"need 1 <= n <= k, got n = {n}, k = {len(transversal)}")
        self.transversal = list(transversal)
        self.n = n

    @property
    def k(self) -> int:
        return len(self.transversal)

    def error(self, eps: float) -> float:
        return coset_step_error(eps, self.k, self.n, self.membership.deterministic)

    def run(self, state, eps, rng, sampler=None):
        e = self.error(eps)
        tried = 0
        for y, word in without_replacement(self.transversal, rng):
            tried += 1
            probe = self.probe(state, y, word, e, rng)
            if probe is not None:
                return probe, tried
        return None, tried

class ExhaustiveFinalStep(BasicSiftStep):
    """ Final step into {1}: look g up in the stored final subset S_k.

    With 1 in S_k the answer is the stored s with s = g^-1; otherwise g itself must be
    stored and the answer is its inverse. The lookup costs no multiplications.

    Args:
        stored (list[tuple]): (element, word) for every element of S_k
    """
    strategy = EXHAUSTIVE_FINAL

    def __init__(self, stored: list, shortcuts=None, label=''):
        if not stored:
            raise ContractError("exhaustive final step needs a nonempty stored set")
        super().__init__(StoredSetTest([s for s, _ in stored]), Fraction(1, len(stored)), shortcuts, label)

        self.stored = list(stored)
        self.one_in_set = any(s.is_identity() for s, _ in stored)
        if self.one_in_set:
            # g·s = 1 iff g = s^-1
            self.lookup = {s.inverse().key: (s, w) for s, w in reversed(self.stored)}
        else:
            self.lookup = {s.key: (s.inverse(), slp_compose(w, None, INVERSE_OF_FIRST) if w is not None else None)
                           for s, w in reversed(self.stored)}

    @property
    def randomized(self) -> bool:
        return False

    def run(self, state, eps=0.0, rng=None, sampler=None):
        found = self.lookup.get(state.element.key)
        if found is None:
            logging.debug("(sift): element not in the final stored set")
            return None, len(self.stored)
        return Probe(found[0], found[1], 0, None, None), 1

def _single_step(step: BasicSiftStep, g, eps: float, rng, sampler=None):
    probe, _ = step.run(SiftState(g), eps, rng, sampler)
    return probe.y if probe is not None else None

def basic_sift_random(g, eps: float, step: RandomSiftStep, sampler, rng=None):
    """One random-search step on g; returns y with g·y accepted, or None for Fail."""
    if step.strategy != RANDOM:
        raise StructuralError(f"expected a random step, got {step.strategy}")
    return _single_step(step, g, eps, rng, sampler)

def basic_sift_coset_reps(g, eps: float, step: CosetRepsSiftStep, rng):
    """One transversal step on g; returns y with g·y accepted, or None for Fail."""
    if step.strategy != COSET_REPS:
        raise StructuralError(f"expected a coset-reps step, got {step.strategy}")
    return _single_step(step, g, eps, rng)

def exhaustive_final_step(g, stored: list, one_in_set: bool = None):
    """ s in the stored final subset with g·s = 1, or None for Fail.

    Args:
        g (GroupElement): element to finish
        stored (list): elements, or (element, word) pairs, of S_k
        one_in_set (bool, optional): whether 1 is in S_k; detected when omitted
    """
    pairs = [s if isinstance(s, tuple) else (s, None) for s in stored]
    step = ExhaustiveFinalStep(pairs)
    if one_in_set is not None and one_in_set != step.one_in_set:
        raise ContractError(f"one_in_set = {one_in_set} but the stored set says {step.one_in_set}")
    return _single_step(step, g, 0.0, None)
