"""
Brute-force subgroup and conjugacy searches inside enumerated groups.

Subsets are plain lists of elements; `keyset` turns one into a set for fast membership.
"""

import itertools
import logging

import numpy as np

from blackbox.element import GroupElement
from blackbox.operations import commutes, conjugate
from common import DEFAULT_ENUMERATION_CAP
from errors import ContractError, EnumerationOverflow
from oracle.enumeration import EnumeratedGroup

def keyset(elements) -> set:
    return {x.key for x in elements}

def closure(gens: list, cap: int = DEFAULT_ENUMERATION_CAP, label: str = '') -> EnumeratedGroup:
    """The subgroup generated by gens (the identity alone for an empty list is not allowed)."""
    return EnumeratedGroup(gens, cap, label)

def is_subgroup(elements: list) -> bool:
    keys = keyset(elements)
    if not elements or not any(x.is_identity() for x in elements):
        return False
    return all((x * y.inverse()).key in keys for x in elements for y in elements)

def centralizer(group, a: GroupElement) -> list:
    """C(a) = {x in group : xa = ax}, in the order of `group`."""
    return [x for x in group if commutes(x, a)]

def cyclic_subgroup(b: GroupElement) -> list:
    """[1, b, b^2, ...] up to the order of b."""
    out = [b.identity()]
    current = b
    while not current.is_identity():
        out.append(current)
        current = current * b
    return out

def normalizer_of_cyclic(group, b: GroupElement) -> list:
    """N(<b>) = {x in group : b^x in <b>}."""
    powers = keyset(cyclic_subgroup(b))
    return [x for x in group if conjugate(b, x).key in powers]

def generators_for(subset: list, rng: np.random.Generator, max_tries: int = 1000) -> list:
    """ A short generating list for a subgroup given by its elements.

    Picks random elements, keeping each one that enlarges the span, until the span is the
    whole subset.

    Raises:
        ContractError: if the subset is not a subgroup (the span overshoots) or no generating
            set is found within max_tries picks
    """
    target = keyset(subset)
    nontrivial = [x for x in subset if not x.is_identity()]
    if not nontrivial:
        return []

    gens = []
    span = {subset[0].identity().key}
    for _ in range(max_tries):
        x = nontrivial[int(rng.integers(len(nontrivial)))]
        if x.key in span:
            continue
        gens.append(x)
        try:
            span = closure(gens, cap=len(target)).keys()
        except EnumerationOverflow:
            raise ContractError("the subset is not closed under multiplication")
        if len(span) == len(target):
            return gens
    raise ContractError(f"no generating set found in {max_tries} picks")

def left_transversal(L: list, L_prime: list) -> list:
    """ One representative from each left coset x·L' in L, chosen greedily in the order of L.

    The identity represents L' itself when L lists the identity first.
    """
    covered = set()
    reps = []
    for x in L:
        if x.key in covered:
            continue
        reps.append(x)
        covered.update((x * y).key for y in L_prime)
    return reps

def conjugation_orbit(z: GroupElement, generators: list) -> dict:
    """ Orbit of z under conjugation by <generators>, by breadth-first search.

    Returns:
        dict: key of w -> (w, u) with z^u = w, u a product of generators (the identity for z)
    """
    identity = z.identity()
    orbit = {z.key: (z, identity)}
    frontier = [(z, identity)]
    while frontier:
        nxt = []
        for w, u in frontier:
            for s in generators:
                v = conjugate(w, s)
                if v.key not in orbit:
                    orbit[v.key] = (v, u * s)
                    nxt.append((v, u * s))
        frontier = nxt
    return orbit

def conjugacy_classes(elements: list, generators: list) -> list:
    """ Partition `elements` into classes under conjugation by <generators>.

    The subset must be closed under that conjugation. Classes come in the order of their
    first element in `elements`; each is a list starting with its minimal element.
    """
    seen = set()
    classes = []
    for x in elements:
        if x.key in seen:
            continue
        cls = [w for w, _ in conjugation_orbit(x, generators).values()]
        seen.update(w.key for w in cls)
        classes.append(sorted(cls, key=lambda w: w.sort_key))
    return classes

def normal_subgroup_by_classes(group: EnumeratedGroup, order: int, predicate=None) -> list:
    """ A normal subgroup of the given order, found as a union of conjugacy classes.

    Tries unions of classes (of elements passing `predicate`, if given) containing the
    identity, smallest combinations first, and returns the first that is closed.

    Returns:
        list | None: the elements of the subgroup, or None if there is none
    """
    classes = [c for c in conjugacy_classes(group.elements, group.generators)
               if not c[0].is_identity() and (predicate is None or all(predicate(x) for x in c))]
    identity = group.elements[0]
    for r in range(1, len(classes) + 1):
        for combo in itertools.combinations(classes, r):
            if 1 + sum(len(c) for c in combo) != order:
                continue
            candidate = [identity] + [x for c in combo for x in c]
            if is_subgroup(candidate):
                logging.debug(f"(oracle): normal subgroup of order {order} from {r} classes")
                return candidate
    return None
