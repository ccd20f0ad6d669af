"""
Black-box group elements and multiplication accounting.

An element only supports products, inverses and equality tests. Every product and
every inverse is charged to the multiplication counters active in the current
context, which is how sift and bench measure cost.
"""

from abc import ABC, abstractmethod
from contextlib import contextmanager
from contextvars import ContextVar

from errors import StructuralError

class MultCounter:
    """Nonnegative count of group multiplications (an inverse counts as one)."""
    def __init__(self):
        self.count = 0

    def add(self, n: int = 1):
        self.count += n

    def __repr__(self):
        return f"MultCounter({self.count})"

# Every counter currently in scope, outermost first
_active_counters: ContextVar = ContextVar('active_counters', default=())

@contextmanager
def counting(counter: MultCounter = None):
    """ Charge every product and inverse performed inside the block to `counter`.

    Scopes nest: an operation inside two nested blocks is charged to both counters,
    so a sift-wide counter and a per-step counter can run side by side. The scope is
    a context variable, so concurrent workers never share a count.

    Args:
        counter (MultCounter, optional): counter to charge. A fresh one is made if omitted.

    Yields:
        MultCounter: the counter in effect
    """
    counter = counter if counter is not None else MultCounter()
    token = _active_counters.set(_active_counters.get() + (counter,))
    try:
        yield counter
    finally:
        _active_counters.reset(token)

def charge(n: int = 1):
    for counter in _active_counters.get():
        counter.add(n)

class GroupElement(ABC):
    """ Immutable element of a black-box group, stored in a unique canonical form.

    Subclasses implement the raw arithmetic; this class does the shape checks and the
    multiplication accounting, so `a * b` and `a.inverse()` are the only counted entry points.
    Products follow the right-action convention: `a * b` means apply a, then b.
    """
    __slots__ = ()

    @property
    @abstractmethod
    def kind(self) -> str:
        """'permutation' or 'matrix'"""
        pass

    @property
    @abstractmethod
    def shape(self) -> tuple:
        """Kind plus degree (permutations) or dimension and characteristic (matrices)."""
        pass

    @property
    @abstractmethod
    def key(self):
        """Hashable canonical form. Two elements of equal shape are equal iff their keys are."""
        pass

    @property
    @abstractmethod
    def sort_key(self) -> tuple:
        """Total order used to pick deterministic representatives."""
        pass

    @abstractmethod
    def _multiply(self, other: 'GroupElement') -> 'GroupElement':
        pass

    @abstractmethod
    def _invert(self) -> 'GroupElement':
        pass

    @abstractmethod
    def identity(self) -> 'GroupElement':
        """Identity of the group this element lives in (no cost)."""
        pass

    @abstractmethod
    def is_identity(self) -> bool:
        pass

    def check_shape(self, other: 'GroupElement'):
        if not isinstance(other, GroupElement) or self.shape != other.shape:
            other_shape = other.shape if isinstance(other, GroupElement) else type(other).__name__
            raise StructuralError(f"element mismatch: {self.shape} vs {other_shape}")

    def __mul__(self, other: 'GroupElement') -> 'GroupElement':
        self.check_shape(other)
        charge()
        return self._multiply(other)

    def inverse(self) -> 'GroupElement':
        charge()
        return self._invert()

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        self.check_shape(other)
        return self.key == other.key

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self):
        return hash(self.key)

    def __lt__(self, other: 'GroupElement') -> bool:
        return self.sort_key < other.sort_key
