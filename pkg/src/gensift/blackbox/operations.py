"""
Counted black-box operations: products, inverses, conjugates, powers and order tests.
"""

from functools import lru_cache

import sympy

from blackbox.element import GroupElement
from errors import ContractError

def multiply(a: GroupElement, b: GroupElement) -> GroupElement:
    return a * b

def inverse(a: GroupElement) -> GroupElement:
    return a.inverse()

def equals(a: GroupElement, b: GroupElement) -> bool:
    """Exact equality of canonical forms. Not counted."""
    a.check_shape(b)
    return a.key == b.key

def conjugate(a: GroupElement, x: GroupElement) -> GroupElement:
    """a^x = x^-1 a x, three counted operations."""
    return x.inverse() * a * x

def commutes(u: GroupElement, v: GroupElement) -> bool:
    """[u, v] = 1, tested as uv = vu with two counted products."""
    return u * v == v * u

def power(g: GroupElement, n: int) -> GroupElement:
    """ g^n by left-to-right binary powering.

    Uses one squaring per bit after the leading one and one product per further set bit,
    so at most 2 * floor(log2 n) counted products. power(g, 0) is the identity at no cost.
    """
    if n < 0:
        raise ContractError(f"power exponent must be nonnegative, got {n}")
    if n == 0:
        return g.identity()

    result = g
    for bit in bin(n)[3:]:
        result = result * result
        if bit == '1':
            result = result * g
    return result

@lru_cache(maxsize=None)
def order_closure(orders: frozenset) -> frozenset:
    """ The exponents examined by `has_order_in`: every n in I together with n/q for each prime q | n.

    {11, 15} gives {11, 15, 1, 5, 3}.
    """
    closure = set()
    for n in orders:
        closure.add(n)
        closure.update(n // q for q in sympy.primefactors(n))
    return frozenset(closure)

def has_order_in(g: GroupElement, orders) -> bool:
    """ True iff the exact order of g lies in `orders`.

    g has order n iff g^n = 1 and g^(n/q) != 1 for every prime q dividing n. The squarings
    g^2, g^4, ..., g^(2^m) with 2^m <= max(orders) are computed once and shared by every
    exponent in `order_closure(orders)`; each such power then costs at most m further products.

    Args:
        g (GroupElement): element to test
        orders (iterable[int]): nonempty set of positive integers

    Returns:
        bool: whether |g| is in orders
    """
    orders = frozenset(int(n) for n in orders)
    if not orders or min(orders) < 1:
        raise ContractError(f"order set must be nonempty and positive, got {sorted(orders)}")

    squarings = [g]
    while 2 ** len(squarings) <= max(orders):
        squarings.append(squarings[-1] * squarings[-1])

    powers = {}
    def power_of(d: int) -> GroupElement:
        if d not in powers:
            result = None
            for j, bit in enumerate(reversed(bin(d)[2:])):
                if bit == '1':
                    result = squarings[j] if result is None else result * squarings[j]
            powers[d] = result
        return powers[d]

    for n in sorted(orders):
        if not power_of(n).is_identity():
            continue
        if all(not power_of(n // q).is_identity() for q in sympy.primefactors(n)):
            return True
    return False

def element_order(g: GroupElement, limit: int = None) -> int:
    """ Order of g by repeated multiplication.

    Args:
        g (GroupElement): element
        limit (int, optional): give up and raise ContractError beyond this order

    Returns:
        int: smallest n >= 1 with g^n = 1
    """
    n = 1
    current = g
    while not current.is_identity():
        current = current * g
        n += 1
        if limit is not None and n > limit:
            raise ContractError(f"element order exceeds {limit}")
    return n
