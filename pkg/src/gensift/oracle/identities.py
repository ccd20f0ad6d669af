"""
Randomised and exhaustive checks of the counting identities the sift relies on.

Each check returns a Claim whose expected value is the number of instances examined
and whose computed value is the number that held.
"""

import logging
import math
from fractions import Fraction

import numpy as np
import sympy

from blackbox.permutation import Permutation
from common import DEFAULT_SEED
from errors import SiftingTripleError
from oracle.enumeration import EnumeratedGroup
from oracle.sifting import Claim, exact_claim, sifting_parameter_table
from randomness import make_rng

def symmetric_group(n: int) -> EnumeratedGroup:
    gens = [Permutation.from_cycles(n, [(1, 2)]), Permutation.from_cycles(n, [tuple(range(1, n + 1))])]
    return EnumeratedGroup(gens, label=f"S{n}")

def random_subgroup(group: EnumeratedGroup, rng: np.random.Generator, max_gens: int = 2) -> np.ndarray:
    """Indices of <one or two random elements>, closed up on the Cayley table."""
    table = group.cayley_table()
    gens = rng.integers(len(group), size=int(rng.integers(1, max_gens + 1)))
    members = np.zeros(len(group), dtype=bool)
    members[0] = True
    members[gens] = True
    while True:
        idx = np.flatnonzero(members)
        grown = members.copy()
        grown[table[np.ix_(idx, idx)].ravel()] = True
        if grown.sum() == members.sum():
            return idx
        members = grown

def _product_set(table: np.ndarray, X, Y) -> set:
    if len(X) == 0 or len(Y) == 0:
        return set()
    return set(table[np.ix_(np.asarray(X), np.asarray(Y))].ravel().tolist())

def _left_cosets(table: np.ndarray, Z: np.ndarray, n: int) -> list:
    """Left cosets vZ partitioning the group, as sorted index lists."""
    seen = np.zeros(n, dtype=bool)
    cosets = []
    for v in range(n):
        if not seen[v]:
            coset = table[v, Z]
            seen[coset] = True
            cosets.append(coset)
    return cosets

def check_dedekind(group: EnumeratedGroup, instances: int, rng: np.random.Generator) -> Claim:
    """(V ∩ U)Z = V ∩ (UZ) for Z a subgroup, V a union of left cosets vZ and U arbitrary."""
    table = group.cayley_table()
    n = len(group)
    held = 0
    for trial in range(instances):
        Z = random_subgroup(group, rng)
        cosets = _left_cosets(table, Z, n)
        chosen = rng.random(len(cosets)) < 0.5
        V = set(int(v) for c, pick in zip(cosets, chosen) if pick for v in c)
        U = set(np.flatnonzero(rng.random(n) < 0.5).tolist())

        left = _product_set(table, sorted(V & U), Z)
        right = V & _product_set(table, sorted(U), Z)
        if left == right:
            held += 1
        else:
            logging.warning(f"(oracle): Dedekind law fails for |Z| = {len(Z)}, |V| = {len(V)}, |U| = {len(U)}")
    return exact_claim('identity.dedekind', instances, held)

def check_binomial(max_k: int = 30) -> Claim:
    """sum_{i=1}^{k-n} C(k-i, n) = C(k, n+1) for 1 <= n < k <= max_k."""
    total = held = 0
    for k in range(2, max_k + 1):
        for n in range(1, k):
            total += 1
            lhs = sum(sympy.binomial(k - i, n) for i in range(1, k - n + 1))
            if lhs == sympy.binomial(k, n + 1):
                held += 1
            else:
                logging.warning(f"(oracle): binomial identity fails at k = {k}, n = {n}")
    return exact_claim('identity.binomial', total, held)

def check_log_bound(points: int = 1000) -> Claim:
    """ln(1/(1-x)) >= x on a grid of [0, 1)."""
    x = np.linspace(0.0, 1.0, points, endpoint=False)
    held = int(np.count_nonzero(-np.log1p(-x) >= x))
    return exact_claim('identity.log-bound', points, held)

def check_chain_rule(group: EnumeratedGroup, instances: int, rng: np.random.Generator) -> Claim:
    """ P(x ∈ C | x ∈ A) = P(x ∈ C | x ∈ B)·P(x ∈ B | x ∈ A) for random subgroup chains C ≤ B ≤ A.

    Each probability is 1/index, and each index is counted as the number of left cosets
    partitioning the larger subgroup. This is the product rule for the success of
    consecutive sift steps.
    """
    table = group.cayley_table()
    held = 0
    for _ in range(instances):
        A = random_subgroup(group, rng)
        B = random_subgroup_of(group, A, rng)
        C = random_subgroup_of(group, B, rng)
        a_c, a_b, b_c = (len(_left_cosets_within(table, X, Z)) for X, Z in ((A, C), (A, B), (B, C)))
        if Fraction(1, a_c) == Fraction(1, b_c) * Fraction(1, a_b):
            held += 1
        else:
            logging.warning(f"(oracle): [A:C] = {a_c} but [A:B]·[B:C] = {a_b}·{b_c}")
    return exact_claim('identity.chain-rule', instances, held)

def random_sifting_instance(group: EnumeratedGroup, rng: np.random.Generator, per_coset: int = 1) -> tuple:
    """ A sifting triple (H, K, L) with L' ≤ L, KL' = K, and a left L'-uniform subset S of L.

    H is a random union of left L-cosets. K takes a random nonempty union of left L'-cosets
    inside each of them. S holds `per_coset` elements of each left L'-coset of L.

    Returns:
        tuple: (H, K, L, S) as index arrays of `group`
    """
    table = group.cayley_table()
    n = len(group)
    while True:
        L = random_subgroup(group, rng)
        L_prime = random_subgroup_of(group, L, rng)
        if per_coset <= len(L_prime):
            break

    L_cosets = _left_cosets(table, L, n)
    picked = [c for c in L_cosets if rng.random() < 0.5] or L_cosets[:1]
    H = np.concatenate(picked)

    K = []
    for coset in picked:
        pieces = _left_cosets_within(table, coset, L_prime)
        keep = [p for p in pieces if rng.random() < 0.5] or pieces[:1]
        K.extend(int(v) for p in keep for v in p)

    S = []
    for piece in _left_cosets_within(table, L, L_prime):
        S.extend(int(v) for v in rng.choice(piece, size=per_coset, replace=False))
    return H, np.array(K), L, np.array(S)

def random_subgroup_of(group: EnumeratedGroup, L: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """A subgroup of L generated by one random element of L."""
    table = group.cayley_table()
    g = int(L[rng.integers(len(L))])
    members = [0]
    current = g
    while current != 0:
        members.append(current)
        current = int(table[current, g])
    return np.array(members)

def _left_cosets_within(table: np.ndarray, X: np.ndarray, L_prime: np.ndarray) -> list:
    """Left L'-cosets partitioning X (a union of them)."""
    remaining = set(int(x) for x in X)
    pieces = []
    for x in X:
        x = int(x)
        if x in remaining:
            piece = table[x, L_prime]
            remaining.difference_update(int(v) for v in piece)
            pieces.append(piece)
    return pieces

def check_uniform_subsets(group: EnumeratedGroup, instances: int, rng: np.random.Generator) -> Claim:
    """ p(H, K, S) = p(H, K, L) for S a left L'-uniform subset of L and KL' ⊆ K.

    Alternates between transversals (one element per coset) and two elements per coset.
    """
    held = 0
    elements = group.elements
    for trial in range(instances):
        H, K, L, S = random_sifting_instance(group, rng, per_coset=1 + trial % 2)
        subset = lambda idx: [elements[int(i)] for i in idx]
        try:
            p_L = sifting_parameter_table(group, subset(H), subset(K), subset(L))
            p_S = sifting_parameter_table(group, subset(H), subset(K), subset(S))
        except SiftingTripleError as e:
            logging.warning(f"(oracle): generated instance is not a sifting triple: {e}")
            continue
        if p_L == p_S:
            held += 1
        else:
            logging.warning(f"(oracle): p(H,K,S) = {p_S} but p(H,K,L) = {p_L}")
    return exact_claim('identity.uniform-subset', instances, held)

def verify_identities(seed: int = DEFAULT_SEED, dedekind: int = 1000, uniform: int = 100,
                      chain_rule: int = 1000) -> list:
    """ Run the identity suite.

    Returns:
        list[Claim]: one claim per identity
    """
    rng = make_rng(seed)
    S5 = symmetric_group(5)
    S6 = symmetric_group(6)
    claims = [check_dedekind(S5, dedekind, rng),
              check_binomial(),
              check_log_bound(),
              check_chain_rule(S5, chain_rule, rng),
              check_uniform_subsets(S6, uniform, rng)]
    logging.info(f"(oracle): identity suite ran {sum(c.expected for c in claims)} instances")
    return claims
