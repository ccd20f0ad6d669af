"""
Exact sifting parameters, T-sets and chain certification over enumerated groups.

Subsets are passed as lists of elements, enumerated groups, or dicts key -> element.
Every number produced here is a Fraction.
"""

import logging
from collections import namedtuple
from fractions import Fraction

import numpy as np
import tqdm

from blackbox.operations import conjugate, has_order_in
from common import (COSET_REPS, DEFAULT_PROFILE_CAP, EXHAUSTIVE_FINAL, FAIL, IDENTITY_NAME, ORDERS, PASS,
                    RANDOM, UNCERTIFIED)
from chains.compile import evaluate_elements
from chains.spec import AMBIENT
from errors import ConditionAError, ConsistencyError, ContractError, SiftingTripleError
from oracle.enumeration import EnumeratedGroup
from oracle.subgroups import (centralizer, closure, conjugacy_classes, conjugation_orbit, generators_for,
                              left_transversal)
from randomness import make_rng
from sift.membership import ConjugatesTest

# One line of a validation report. `computed` is None when nothing was computed.
Claim = namedtuple('Claim', ['name', 'expected', 'computed', 'verdict'])

def exact_claim(name: str, expected, computed) -> Claim:
    ok = computed is not None and Fraction(expected) == Fraction(computed)
    return Claim(name, expected, computed, PASS if ok else FAIL)

def lower_bound_claim(name: str, expected, computed) -> Claim:
    """PASS iff the claimed value is at most the computed one."""
    ok = computed is not None and Fraction(expected) <= Fraction(computed)
    return Claim(name, expected, computed, PASS if ok else FAIL)

def uncertified_claim(name: str, expected) -> Claim:
    return Claim(name, expected, None, UNCERTIFIED)

def _subset(X) -> dict:
    if isinstance(X, dict):
        return X
    return {x.key: x for x in X}

def trivial_group(identity) -> EnumeratedGroup:
    return EnumeratedGroup([identity], cap=1, label='1')

def sifting_parameter_exact(H, K, L, subgroup: bool = False, closed: bool = True) -> Fraction:
    """ p(H, K, L) = min over h in H of |hL ∩ K| / |L|, checking that (H, K, L) is a sifting triple.

    Args:
        H, K, L: subsets of one group
        subgroup (bool): L is a subgroup, so |hL ∩ K| is constant on left cosets and only one
            h per coset is examined
        closed (bool): require HL ⊆ H. A list of stored representatives tried once each only
            needs every hL to meet K, so transversal steps pass False.

    Raises:
        SiftingTripleError: naming the clause that fails and a witness h
    """
    H = _subset(H)
    K_keys = set(_subset(K))
    L = list(_subset(L).values())
    if not H or not L:
        raise ContractError("sifting parameter of an empty set")

    best = None
    covered = set()
    for key, h in H.items():
        if key in covered:
            continue
        coset = [h * l for l in L]
        if closed and any(y.key not in H for y in coset):
            raise SiftingTripleError('HL ⊆ H', h)
        hits = sum(1 for y in coset if y.key in K_keys)
        if hits == 0:
            raise SiftingTripleError('hL ∩ K ≠ ∅', h)
        best = hits if best is None else min(best, hits)
        if subgroup:
            covered.update(y.key for y in coset)
    return Fraction(best, len(L))

def sifting_parameter_table(group: EnumeratedGroup, H, K, L) -> Fraction:
    """Same as sifting_parameter_exact, evaluated on the Cayley table of a small group."""
    table = group.cayley_table()
    n = len(group)
    h_idx = np.array([group.index_of(x) for x in _subset(H).values()], dtype=np.int64)
    l_idx = np.array([group.index_of(x) for x in _subset(L).values()], dtype=np.int64)
    in_H = np.zeros(n, dtype=bool)
    in_H[h_idx] = True
    in_K = np.zeros(n, dtype=bool)
    in_K[[group.index_of(x) for x in _subset(K).values()]] = True

    products = table[np.ix_(h_idx, l_idx)]
    closed = in_H[products].all(axis=1)
    if not closed.all():
        raise SiftingTripleError('HL ⊆ H', group.elements[h_idx[np.argmin(closed)]])
    hits = in_K[products].sum(axis=1)
    if (hits == 0).any():
        raise SiftingTripleError('hL ∩ K ≠ ∅', group.elements[h_idx[np.argmin(hits)]])
    return Fraction(int(hits.min()), len(l_idx))

def sifting_parameter_representatives(C_prime, L, L_prime, H) -> Fraction:
    """ min over y of |(yL ∩ C')L'| / |L|, y running over representatives in C' of the left
    L-cosets in H.

    Equal to p(H, C'L', L) when H = C'L and L' ≤ L.
    """
    C_keys = _subset(C_prime)
    H = _subset(H)
    L = list(_subset(L).values())
    L_prime = list(_subset(L_prime).values())

    best = None
    covered = set()
    for y in C_keys.values():
        if y.key in covered:
            continue
        coset = [y * l for l in L]
        covered.update(z.key for z in coset)
        meet = [z for z in coset if z.key in C_keys]
        reach = {(z * l).key for z in meet for l in L_prime}
        best = len(reach) if best is None else min(best, len(reach))

    missed = [h for key, h in H.items() if key not in covered]
    if missed:
        raise SiftingTripleError('hL ∩ K ≠ ∅', missed[0])
    return Fraction(best, len(L))

def conjugate_orbit_ratio(a, x, L: EnumeratedGroup, L_next: EnumeratedGroup) -> Fraction:
    """ |a^(xL) ∩ L'| / |a^(xL)|, cross-checked against the centralizer-order form

        |C_L(a^x)| · sum over u in U(x) of 1/|C_L'(a^(xu))|, divided by |L : L'|,

    where U(x) picks one transporter to the least element of each L'-class in a^(xL) ∩ L'.

    Raises:
        ContractError: a^x is not in L
        ConsistencyError: the two forms disagree
    """
    z = conjugate(a, x)
    if z not in L:
        raise ContractError("a^x does not lie in L_i")

    orbit = conjugation_orbit(z, L.generators)
    hits = sorted((w for w, _ in orbit.values() if w in L_next), key=lambda w: w.sort_key)
    ratio = Fraction(len(hits), len(orbit))

    total = Fraction(0)
    seen = set()
    for w in hits:
        if w.key in seen:
            continue
        seen.update(conjugation_orbit(w, L_next.generators))
        rep = conjugate(z, orbit[w.key][1])
        total += Fraction(1, len(centralizer(L_next, rep)))
    by_centralizers = len(centralizer(L, z)) * total / Fraction(len(L), len(L_next))

    if by_centralizers != ratio:
        raise ConsistencyError(f"orbit form gives {ratio}, centralizer form gives {by_centralizers}")
    return ratio

def next_T_set(a, T: list, L: EnumeratedGroup, L_next: EnumeratedGroup, step: int = None) -> list:
    """ T_(i+1) = union over y in T_i of y·U(y).

    U(y) holds, for each L'-class in a^(yL) ∩ L', the transporter from a^y to the least
    element of that class.

    Raises:
        ConditionAError: some a^(yL) misses L'
    """
    out = []
    for y in T:
        z = conjugate(a, y)
        orbit = conjugation_orbit(z, L.generators)
        meeting = sorted((w for w, _ in orbit.values() if w in L_next), key=lambda w: w.sort_key)
        if not meeting:
            raise ConditionAError(step, z)
        seen = set()
        for w in meeting:
            if w.key in seen:
                continue
            seen.update(conjugation_orbit(w, L_next.generators))
            out.append(y * orbit[w.key][1])
    return out

def build_T_sets(a, subgroups: list) -> list:
    """ T_0 = {1}, T_1, ..., one set per subgroup of the chain L_0 > L_1 > ...

    Checks T_(i+1)L_i = T_iL_i, through t^-1·t' in L_i both ways.

    Raises:
        ConditionAError, ConsistencyError
    """
    T = [[a.identity()]]
    for i in range(len(subgroups) - 1):
        L, L_next = subgroups[i], subgroups[i + 1]
        T_next = next_T_set(a, T[-1], L, L_next, i)
        forward = all(any((t.inverse() * s) in L for t in T[-1]) for s in T_next)
        backward = all(any((t.inverse() * s) in L for s in T_next) for t in T[-1])
        if not (forward and backward):
            raise ConsistencyError(f"T_{i + 1}·L_{i} differs from T_{i}·L_{i}")
        T.append(T_next)
    return T

def final_conjugate_reps(a, T: list, L: EnumeratedGroup) -> list:
    """{(tl)^-1}, one for each distinct a^(tl) with t in T and l in L."""
    seen = set()
    reps = []
    for t in T:
        for key, (w, u) in conjugation_orbit(conjugate(a, t), L.generators).items():
            if key not in seen:
                seen.add(key)
                reps.append((t * u).inverse())
    return reps

def element_order_profile(M, I, cache: dict = None) -> Fraction:
    """ Proportion of the elements of M whose order lies in I.

    Args:
        cache (dict, optional): key -> bool results of has_order_in for this same I
    """
    elements = list(_subset(M).values())
    cache = cache if cache is not None else {}
    hits = 0
    for x in elements:
        if x.key not in cache:
            cache[x.key] = has_order_in(x, I)
        hits += cache[x.key]
    return Fraction(hits, len(elements))

class ChainCertifier:
    """ Walks a compiled chain over an enumerated ambient group and checks every claim it makes.

    The walk keeps S_i as a set: S_0 is the whole group and S_(i+1) is the set the step is
    meant to reach. Deterministic membership tests are run on all of S_i, randomized ones are
    taken to be exact. Shortcut landings are checked where they land.

    Args:
        chain (SiftChain): compiled chain
        G (EnumeratedGroup): the group generated by the chain's standard generators
        args (dotdict): uses profile_cap, seed and progress
    """
    def __init__(self, chain, G: EnumeratedGroup, args: dict = None):
        args = args if args is not None else {}
        self.chain = chain
        self.spec = chain.spec
        self.G = G
        self.values = evaluate_elements(self.spec, chain.group)
        self.profile_cap = args.get('profile_cap', DEFAULT_PROFILE_CAP)
        self.progress = args.get('progress', False)
        self.rng = make_rng(args.get('seed', 1))
        self.claims = []
        self._groups = {}
        self._order_caches = {}
        self._landings = {}
        self._pending = {}

    def element(self, name: str):
        return self.values[name][0]

    def group_of(self, names) -> EnumeratedGroup:
        names = tuple(names)
        if names not in self._groups:
            if names == (AMBIENT,):
                self._groups[names] = self.G
            else:
                gens = [self.element(n) for n in names if n != IDENTITY_NAME]
                gens = [g for g in gens if not g.is_identity()]
                self._groups[names] = (closure(gens, cap=len(self.G), label=' '.join(names)) if gens
                                       else trivial_group(self.G.elements[0]))
        return self._groups[names]

    def profile(self, M, I) -> Fraction:
        cache = self._order_caches.setdefault(frozenset(I), {})
        return element_order_profile(M, I, cache)

    def _land(self, source: int, x, S_keys):
        total, ok = self._landings.get(source, (0, 0))
        self._landings[source] = (total + 1, ok + (x.key in S_keys))

    def run(self) -> list:
        S = {x.key: x for x in self.G}
        stage_group = self.G

        for (first, last), stage in zip(self.chain.stages, self.spec.stages):
            if first > 0:
                try:
                    gens = generators_for(list(S.values()), self.rng)
                    stage_group = closure(gens, cap=len(S)) if gens else trivial_group(self.G.elements[0])
                except ContractError:
                    logging.warning(f"(oracle): S_{first} is not a subgroup, stage {stage.index} checks skipped")
                    stage_group = None

            a = self.element(stage.conjugator) if stage.conjugator is not None else None
            class_of_a = None
            if a is not None and stage_group is not None:
                class_of_a = {key: w for key, (w, _) in conjugation_orbit(a, stage_group.generators).items()}

            previous_L = stage_group
            previous_T = [self.G.elements[0]]
            bar = tqdm.tqdm(range(first, last + 1), desc=f"certify stage {stage.index}", disable=not self.progress)
            for i in bar:
                S, previous_L, previous_T = self.step(i, S, a, class_of_a, previous_L, previous_T)

        for source in sorted(self._landings):
            total, ok = self._landings[source]
            self.claims.append(exact_claim(f"step{source}.landing", total, ok))

        identity_key = self.G.elements[0].key
        self.claims.append(Claim('chain.final', 1, len(S),
                                 PASS if set(S) == {identity_key} else FAIL))
        for c in self.claims:
            if c.verdict == FAIL:
                logging.warning(f"(oracle): claim {c.name} failed, expected {c.expected}, computed {c.computed}")
        return self.claims

    def step(self, i: int, S: dict, a, class_of_a, previous_L, previous_T) -> tuple:
        spec = self.spec.steps[i]
        compiled = self.chain.steps[i]
        n = i + 1
        k = len(self.spec.steps)
        identity = self.G.elements[0]

        for source, x in self._pending.pop(n, []):
            self._land(source, x, S)

        if spec.strategy == EXHAUSTIVE_FINAL:
            found = sum(1 for x in S.values() if compiled.lookup.get(x.key) is not None)
            self.claims.append(exact_claim(f"step{n}.coverage", len(S), found))
            self.claims.append(exact_claim(f"step{n}.p", spec.p, Fraction(1, len(compiled.stored))))
            return {identity.key: identity}, previous_L, previous_T

        target = self.group_of(spec.target)
        conjugates = {key: conjugate(a, x) for key, x in S.items()} if a is not None else None

        if a is not None:
            allowed = {}
            for t in spec.t_set:
                for key, (w, _) in conjugation_orbit(conjugate(a, self.element(t)), target.generators).items():
                    allowed[key] = w
            K_true = {key: x for key, x in S.items() if conjugates[key].key in allowed}
            self._conjugate_claims(n, spec, a, class_of_a, target, allowed)
        else:
            K_true = {key: x for key, x in S.items() if x in target}

        test = compiled.membership
        if test.deterministic:
            matches = {}
            for key, x in S.items():
                m = test.match_conjugate(conjugates[key]) if isinstance(test, ConjugatesTest) else test.match(x)
                if m is not None:
                    matches[key] = m
        else:
            matches = {key: 0 for key in K_true}
        K_raw = {key: S[key] for key in matches}

        if not spec.shortcuts:
            self.claims.append(exact_claim(f"step{n}.membership", len(K_true),
                                           sum(1 for key in K_true if key in K_raw)))
        for key, x in K_raw.items():
            shortcut = compiled.shortcut_for(matches[key])
            if shortcut is None:
                self._land(n, x, K_true)
                continue
            landing = x * shortcut.correction if shortcut.correction is not None else x
            if shortcut.jump == n + 1:
                self._land(n, landing, K_true)
            elif shortcut.jump == k + 1:
                self._land(n, landing, {identity.key})
            else:
                self._pending.setdefault(shortcut.jump, []).append((n, landing))

        self._p_claims(n, spec, compiled, S, K_raw)
        if spec.membership is not None and spec.membership.kind == ORDERS:
            self._orders_claims(n, spec.membership, previous_L, class_of_a)

        multiplier = None
        if spec.strategy == RANDOM:
            multiplier = self.group_of(spec.sampler)
        elif spec.strategy == COSET_REPS:
            multiplier = self.group_of(tuple(spec.transversal) + tuple(spec.target))
        if (a is not None and len(target) > 1 and not spec.shortcuts and previous_L is not None
                and len(multiplier) == len(previous_L) and multiplier.keys() == previous_L.keys()):
            try:
                ratio = min(conjugate_orbit_ratio(a, x, previous_L, target) for x in previous_T)
                self.claims.append(exact_claim(f"step{n}.p-orbit", spec.p, ratio))
            except (ConsistencyError, ContractError) as e:
                logging.warning(f"(oracle): step {n} orbit form unavailable: {e}")
                self.claims.append(Claim(f"step{n}.p-orbit", spec.p, None, FAIL))

        T = [self.element(t) for t in spec.t_set]
        logging.info(f"(oracle): step {n} checked, |S| = {len(S)} -> {len(K_true)}")
        return K_true, target, T

    def _conjugate_claims(self, n: int, spec, a, class_of_a, target, allowed):
        if class_of_a is None:
            return
        if len(target) == 1:
            self.claims.append(exact_claim(f"step{n}.t-size", len(spec.t_set), 1))
            return
        in_target = [w for w in class_of_a.values() if w in target]
        classes = conjugacy_classes(in_target, target.generators)
        self.claims.append(exact_claim(f"step{n}.t-size", len(spec.t_set), len(classes)))
        same = set(allowed) == {w.key for w in in_target}
        self.claims.append(Claim(f"step{n}.conjugates", len(in_target), len(allowed), PASS if same else FAIL))

    def _p_claims(self, n: int, spec, compiled, S: dict, K_raw: dict):
        try:
            if spec.strategy == RANDOM:
                p = sifting_parameter_exact(S, K_raw, self.group_of(spec.sampler), subgroup=True)
                self.claims.append(exact_claim(f"step{n}.p", spec.p, p))
            else:
                transversal = [t for t, _ in compiled.transversal]
                p = sifting_parameter_exact(S, K_raw, transversal, closed=False)
                self.claims.append(exact_claim(f"step{n}.p", spec.p, p))
                self.claims.append(exact_claim(f"step{n}.n", spec.n, p * len(transversal)))
        except SiftingTripleError as e:
            logging.warning(f"(oracle): step {n}: {e}")
            self.claims.append(Claim(f"step{n}.p", spec.p, None, FAIL))

    def _orders_claims(self, n: int, test, previous_L, class_of_a=None):
        """ p0 against <K, y> for y outside K. In a conjugate stage only the cosets yK that
        hold some conjugate of a are reachable, so the others are skipped.
        """
        K = self.group_of(test.generators)
        self.claims.append(exact_claim(f"step{n}.p0-members", 0, self.profile(K, test.orders)))

        H = previous_L if previous_L is not None else self.G
        if len(H) > self.profile_cap:
            self.claims.append(lower_bound_claim(f"step{n}.p0", test.p0, self.profile(H, test.orders)))
            return
        worst = None
        for y in left_transversal(H.elements, K.elements):
            if y in K:
                continue
            if class_of_a is not None and not any((y * k).key in class_of_a for k in K.elements):
                continue
            M = closure(K.generators + [y], cap=len(H))
            value = self.profile(M, test.orders)
            worst = value if worst is None else min(worst, value)
        self.claims.append(lower_bound_claim(f"step{n}.p0", test.p0, worst if worst is not None else Fraction(1)))

def certify_chain(chain, G: EnumeratedGroup, args: dict = None) -> list:
    """ Certify every claim of a compiled chain by brute force.

    Returns:
        list[Claim]
    """
    return ChainCertifier(chain, G, args).run()
