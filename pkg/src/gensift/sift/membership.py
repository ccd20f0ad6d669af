"""
Membership tests: one-sided decision procedures for "is y in K?" used inside basic sift steps.

A test never rejects a member of K. Deterministic tests are exact and only accept e = 0;
randomized tests accept a non-member with probability at most e.

`match` returns the index of the witness that certified membership (0 for single-witness
tests) or None, so a step can act on which case occurred. `__call__` is the plain boolean.
"""

from abc import ABC, abstractmethod
from fractions import Fraction
from functools import partial

import numpy as np

from blackbox.element import GroupElement
from blackbox.operations import commutes, conjugate, has_order_in, power
from common import DEFAULT_BURN_IN, DEFAULT_PR_SLOTS
from errors import ContractError
from randomness import ProductReplacement, make_rng
from sift.formulas import orders_test_trials

class MembershipTest(ABC):
    deterministic = True

    def check_error(self, e: float):
        if self.deterministic and e != 0:
            raise ContractError(f"{type(self).__name__} is deterministic and only accepts e = 0, got {e}")
        if not self.deterministic and not 0 < e < 0.5:
            raise ContractError(f"{type(self).__name__} needs an error bound in (0, 1/2), got {e}")

    @abstractmethod
    def match(self, y: GroupElement, e: float = 0.0, rng: np.random.Generator = None):
        """ Decide membership of y.

        Args:
            y (GroupElement): element to test
            e (float): error bound, 0 for deterministic tests
            rng (np.random.Generator, optional): stream for randomized tests

        Returns:
            int | None: index of the matching witness, or None for "not a member"
        """
        pass

    def __call__(self, y: GroupElement, e: float = 0.0, rng: np.random.Generator = None) -> bool:
        return self.match(y, e, rng) is not None

class CentralizerTest(MembershipTest):
    """x is accepted iff it commutes with b."""
    def __init__(self, b: GroupElement):
        if b.is_identity():
            raise ContractError("centralizer test of the identity accepts everything")
        self.b = b

    def match(self, y, e=0.0, rng=None):
        self.check_error(e)
        return 0 if commutes(y, self.b) else None

class CentralizerAnyTest(MembershipTest):
    """x is accepted iff it commutes with one of the witnesses; the first such witness is reported."""
    def __init__(self, witnesses: list):
        if not witnesses:
            raise ContractError("centralizer-any test needs at least one witness")
        if any(w.is_identity() for w in witnesses):
            raise ContractError("centralizer-any witnesses must be nontrivial")
        self.witnesses = list(witnesses)

    def match(self, y, e=0.0, rng=None):
        self.check_error(e)
        for index, w in enumerate(self.witnesses):
            if commutes(y, w):
                return index
        return None

class CyclicNormalizerTest(MembershipTest):
    """ x is accepted iff b^x lies in {b, b^2, ..., b^(order-1)}, i.e. x normalises <b>.

    The power set is computed once, on construction.
    """
    def __init__(self, b: GroupElement, order: int):
        if order < 2:
            raise ContractError(f"cyclic normalizer test needs order >= 2, got {order}")
        if not power(b, order).is_identity():
            raise ContractError(f"b^{order} is not the identity")

        self.b = b
        self.order = order
        self.powers = {}
        current = b
        for i in range(1, order):
            self.powers[current.key] = i
            current = current * b

    def match(self, y, e=0.0, rng=None):
        self.check_error(e)
        return 0 if conjugate(self.b, y).key in self.powers else None

class SubgroupNormalizerTest(MembershipTest):
    """ x is accepted iff g^x lies in P for every stored generator g of P, i.e. x normalises P.

    Args:
        generators (list[GroupElement]): generators of P
        elements (list[GroupElement]): all elements of P
    """
    def __init__(self, generators: list, elements: list):
        if not generators:
            raise ContractError("normalizer test needs at least one generator")
        self.generators = list(generators)
        self.members = {x.key for x in elements}
        if any(g.key not in self.members for g in self.generators):
            raise ContractError("normalizer generators must lie in the stored subgroup")

    def match(self, y, e=0.0, rng=None):
        self.check_error(e)
        return 0 if all(conjugate(g, y).key in self.members for g in self.generators) else None

class StoredSetTest(MembershipTest):
    """x is accepted iff it equals a stored element; the index of that element is reported."""
    def __init__(self, elements: list):
        if not elements:
            raise ContractError("stored set test needs a nonempty set")
        self.elements = list(elements)
        self.index = {}
        for i, x in enumerate(self.elements):
            self.index.setdefault(x.key, i)

    def match(self, y, e=0.0, rng=None):
        self.check_error(e)
        return self.index.get(y.key)

class ConjugatesTest(MembershipTest):
    """ Membership of x in C·T·L decided as membership of a^x in L.

    `key` names the conjugating element, so a sifter can carry a^x between steps instead
    of recomputing it.

    Args:
        a (GroupElement): conjugated element
        inner (MembershipTest): test for L
        key (str, optional): name of a
    """
    def __init__(self, a: GroupElement, inner: MembershipTest, key: str = None):
        self.a = a
        self.inner = inner
        self.key = key if key is not None else 'a'
        self.deterministic = inner.deterministic

    def match_conjugate(self, z: GroupElement, e=0.0, rng=None):
        """Decide for an already computed conjugate z = a^x."""
        return self.inner.match(z, e, rng)

    def match(self, y, e=0.0, rng=None):
        return self.inner.match(conjugate(self.a, y), e, rng)

def default_sampler_factory(burn_in: int = DEFAULT_BURN_IN, slots: int = DEFAULT_PR_SLOTS):
    """Fresh product replacement over given generators, without word tracking."""
    return partial(_fresh_sampler, burn_in=burn_in, slots=slots)

def _fresh_sampler(generators, rng, burn_in, slots):
    return ProductReplacement(generators, rng=rng, burn_in=burn_in, slots=slots, track_words=False)

class OrdersTest(MembershipTest):
    """ Randomized test for y in K by element orders.

    Draws N = ceil(ln(1/e) / ln(1/(1 - p0))) elements of <K, y> from a fresh sampler and
    rejects as soon as one has its order in I. No element of K has order in I, so members
    are never rejected; for y outside K at least a proportion p0 of <K, y> has order in I.

    Args:
        generators (list[GroupElement]): generators of K
        orders (iterable[int]): the order set I
        p0 (Fraction): lower bound on the proportion of elements of order in I
        sampler_factory (callable): (generators, rng) -> object with next() -> (element, word)
    """
    deterministic = False

    def __init__(self, generators: list, orders, p0, sampler_factory=None):
        p0 = Fraction(p0)
        if not 0 < p0 <= 1:
            raise ContractError(f"p0 must lie in (0, 1], got {p0}")
        orders = frozenset(int(n) for n in orders)
        if not orders or min(orders) < 1:
            raise ContractError(f"order set must be nonempty and positive, got {sorted(orders)}")

        self.generators = list(generators)
        self.orders = orders
        self.p0 = p0
        self.sampler_factory = sampler_factory if sampler_factory is not None else default_sampler_factory()

    def match(self, y, e=0.01, rng=None):
        self.check_error(e)
        rng = rng if rng is not None else make_rng(None)
        sampler = self.sampler_factory(self.generators + [y], rng)
        for _ in range(orders_test_trials(e, self.p0)):
            h, _ = sampler.next()
            if has_order_in(h, self.orders):
                return None
        return 0

def centralizer_test(b: GroupElement) -> CentralizerTest:
    return CentralizerTest(b)

def centralizer_any_test(witnesses: list) -> CentralizerAnyTest:
    return CentralizerAnyTest(witnesses)

def cyclic_normalizer_test(b: GroupElement, order_of_b: int) -> CyclicNormalizerTest:
    return CyclicNormalizerTest(b, order_of_b)

def stored_set_test(elements: list) -> StoredSetTest:
    return StoredSetTest(elements)

def normalizer_test(generators: list, elements: list) -> SubgroupNormalizerTest:
    return SubgroupNormalizerTest(generators, elements)

def is_member_conjugates(x: GroupElement, e: float, a: GroupElement, inner: MembershipTest, rng=None) -> bool:
    """Membership of x decided by inner(a^x, e)."""
    return inner(conjugate(a, x), e, rng)

def is_member_orders(y: GroupElement, e: float, K_gens: list, orders, p0, sampler_factory=None, rng=None) -> bool:
    return OrdersTest(K_gens, orders, p0, sampler_factory)(y, e, rng)
