"""
Rebuild concrete chain specs by searching enumerated groups.

The tables only fix subgroup shapes, class sizes and parameters. Each builder finds
witnesses, subgroups, T-sets, transversals and corrections satisfying them inside the
group generated by the shipped standard generators, and raises ReconstructionError
when a shape cannot be matched.
"""

import itertools
import logging
import os
from fractions import Fraction

from blackbox.group import BlackBoxGroup, read_generators, write_generators
from blackbox.operations import commutes, conjugate, element_order, has_order_in, power
from common import (CENTRALIZER, CENTRALIZER_ANY, CHAINS_DIR, COSET_REPS, CYCLIC_NORMALIZER, DEFAULT_ENUMERATION_CAP,
                    DEFAULT_SEED, GENERATORS_DIR, IDENTITY_NAME, NORMALIZER, ORDERS, RANDOM, STORED_SET,
                    default_args)
from chains.spec import (AMBIENT, ChainSpec, ElementSpec, ShortcutSpec, StageSpec, StepSpec, TestSpec,
                         load_chain_spec, parse_chain_spec, serialize_chain_spec, write_chain_spec)
from errors import ConditionAError, EnumerationOverflow, ReconstructionError
from oracle.enumeration import EnumeratedGroup
from oracle.rank3 import hall_janko_group, higman_sims_group
from oracle.sifting import conjugate_orbit_ratio, final_conjugate_reps, next_T_set
from oracle.subgroups import (centralizer, closure, conjugation_orbit, cyclic_subgroup, generators_for,
                              keyset, left_transversal, normal_subgroup_by_classes, normalizer_of_cyclic)
from randomness import make_rng

class ChainBuilder:
    """ Accumulates named elements, stages and steps of one chain spec.

    Every element is named once, with its Schreier-tree word in the enumerated group and its
    order; asking again for the same element returns the same name.

    Args:
        name (str): chain name
        group (BlackBoxGroup): standard generators
        G (EnumeratedGroup): enumeration of <group.generators>, in the same generator order
        description (str): free text for the [chain] section
    """
    def __init__(self, name: str, group: BlackBoxGroup, G: EnumeratedGroup, description: str = ''):
        self.G = G
        self.spec = ChainSpec(name=name, group=group.label or name, slots=group.rank, description=description)
        self._names = {}
        self._counts = {}

    def name(self, x, prefix: str = 'x', name: str = None) -> str:
        if x.is_identity():
            return IDENTITY_NAME
        if x.key in self._names:
            return self._names[x.key]
        while name is None or name in self.spec.elements:
            self._counts[prefix] = self._counts.get(prefix, 0) + 1
            name = f"{prefix}{self._counts[prefix]}"
        word = self.G.word(self.G.index_of(x))
        self.spec.elements[name] = ElementSpec(name, word, element_order(x))
        self._names[x.key] = name
        return name

    def names(self, xs, prefix: str) -> tuple:
        return tuple(self.name(x, prefix) for x in xs)

    def stage(self, conjugator: str = None, label: str = '') -> int:
        index = len(self.spec.stages) + 1
        self.spec.stages.append(StageSpec(index, conjugator, label))
        return index

    def step(self, strategy: str, p, **fields) -> StepSpec:
        step = StepSpec(index=len(self.spec.steps) + 1,
                        stage=len(self.spec.stages),
                        strategy=strategy,
                        p=Fraction(p),
                        **fields)
        self.spec.steps.append(step)
        return step

    def coset_step(self, p, membership: TestSpec, transversal: list, **fields) -> StepSpec:
        """A coset-reps step with n = p·k, which must be a whole number."""
        n = Fraction(p) * len(transversal)
        if n.denominator != 1:
            raise ReconstructionError(f"p = {p} is not a multiple of 1/{len(transversal)}")
        return self.step(COSET_REPS, p, membership=membership, transversal=self.names(transversal, 'r'),
                         n=int(n), **fields)

    def build(self) -> ChainSpec:
        """The chain spec, checked by a serialise-and-parse round trip."""
        spec = parse_chain_spec(serialize_chain_spec(self.spec), f"<{self.spec.name}>")
        logging.info(f"(oracle): built {spec.name} with {len(spec.steps)} steps and {len(spec.elements)} elements")
        return spec

def _expect(what: str, found, expected):
    if found != expected:
        raise ReconstructionError(f"{what}: expected {expected}, found {found}")

def _first_of_order(elements, n: int, where=lambda x: True):
    for x in elements:
        if has_order_in(x, {n}) and where(x):
            return x
    raise ReconstructionError(f"no element of order {n}")

def _subgroup(elements: list, rng, label: str = '') -> EnumeratedGroup:
    return closure(generators_for(elements, rng), cap=len(elements), label=label)

def _ratio(a, T: list, L: EnumeratedGroup, L_next: EnumeratedGroup) -> Fraction:
    return min(conjugate_orbit_ratio(a, x, L, L_next) for x in T)

def _refine(a, T: list, L: EnumeratedGroup, L_next: EnumeratedGroup, t_size: int, p) -> list:
    """T_(i+1) for L_i > L_(i+1), or None when the T-set size or the parameter differs."""
    try:
        T_next = next_T_set(a, T, L, L_next)
    except ConditionAError:
        return None
    if len(T_next) != t_size or _ratio(a, T, L, L_next) != Fraction(p):
        return None
    return T_next

def build_m11_centralizer_chain(group: BlackBoxGroup, G: EnumeratedGroup, rng) -> ChainSpec:
    """M11 through a in 2A, C_G(a) = 2.S4, a Klein four-group, then C_G(a) down to 1."""
    b = ChainBuilder('m11-2s4', group, G, "M11 with a in 2A and C_G(a) = 2.S4")
    identity = G.elements[0]

    a = _first_of_order(G, 2)
    C = _subgroup(centralizer(G, a), rng, 'C(a)')
    _expect('|C_G(a)|', len(C), 48)
    T1 = _refine(a, [identity], G, C, 2, Fraction(13, 165))
    if T1 is None:
        raise ReconstructionError("C_G(a) does not give |T_1| = 2 and p = 13/165")

    for x in C:
        if x == a or not has_order_in(x, {2}):
            continue
        L2_elements = centralizer(C, x)
        if len(L2_elements) != 4:
            continue
        L2 = _subgroup(L2_elements, rng, 'C(a, b)')
        T2 = _refine(a, T1, C, L2, 3, Fraction(1, 6))
        if T2 is not None:
            witness = x
            break
    else:
        raise ReconstructionError("no involution b in C_G(a) with |C(b)| = 4 and |T_2| = 3")

    c = _first_of_order(C, 8)
    L4 = _subgroup(centralizer(C, c), rng, 'C_C(c)')
    _expect('|C_C(c)|', len(L4), 8)

    na = b.name(a, name='a')
    b.stage(conjugator=na, label='C_G(a) = 2.S4')
    b.step(RANDOM, Fraction(13, 165),
           membership=TestSpec(CENTRALIZER, (na,)),
           sampler=(AMBIENT,),
           target=b.names(C.generators, 'g'),
           t_set=b.names(T1, 't'),
           label='L1 = C_G(a)')
    b.coset_step(Fraction(1, 6), TestSpec(CENTRALIZER, (b.name(witness, 'b'),)),
                 left_transversal(C.elements, L2.elements),
                 target=b.names(L2.generators, 'g'),
                 t_set=b.names(T2, 't'),
                 label='L2 = C_L1(b), Klein four')
    b.coset_step(Fraction(1, 3), TestSpec(STORED_SET, (na,)), final_conjugate_reps(a, T2, L2),
                 label='L3 = 1')

    b.stage(label='C_G(a) down to 1')
    b.coset_step(Fraction(1, 6), TestSpec(CENTRALIZER, (b.name(c, 'b'),)),
                 left_transversal(C.elements, L4.elements),
                 target=b.names(L4.generators, 'g'),
                 label='L4 = <c>, c of order 8')
    b.coset_step(Fraction(1, 8), TestSpec(STORED_SET, (IDENTITY_NAME,)), L4.elements, label='L5 = 1')
    return b.build()

def build_m11_sylow_chain(group: BlackBoxGroup, G: EnumeratedGroup, rng) -> ChainSpec:
    """ M11 through a in 11A, L1 = L2(11) and N_G(<a>) = 11:5.

    Step 1 reports which Sylow 11-subgroup of L1 contains a^(xy); the correction moves it
    onto <a> and sifting continues at step 3.
    """
    b = ChainBuilder('m11-l211', group, G, "M11 with a in 11A through L2(11)")
    identity = G.elements[0]

    a = _first_of_order(G, 11)
    N = _subgroup(normalizer_of_cyclic(G, a), rng, 'N(<a>)')
    _expect('|N_G(<a>)|', len(N), 55)

    L1 = None
    for x in G:
        if not has_order_in(x, {2}):
            continue
        try:
            candidate = closure(N.generators + [x], cap=660, label='L2(11)')
        except EnumerationOverflow:
            continue
        if len(candidate) == 660:
            L1 = candidate
            break
    if L1 is None:
        raise ReconstructionError("no L2(11) containing N_G(<a>)")

    T1 = _refine(a, [identity], G, L1, 1, Fraction(1, 12))
    T2 = _refine(a, T1, L1, N, 1, Fraction(1, 12)) if T1 is not None else None
    if T2 is None:
        raise ReconstructionError("L2(11) > 11:5 does not give the tabled T-sets")

    orbit = sorted((w for w, _ in conjugation_orbit(a, L1.generators).values()), key=lambda w: w.sort_key)
    other = next(w for w in orbit if not commutes(w, a))
    z = conjugation_orbit(other, L1.generators)[a.key][1]
    witnesses = [a] + [conjugate(other, power(a, i)) for i in range(11)]
    corrections = [identity] + [power(a, (11 - i) % 11) * z for i in range(11)]

    na = b.name(a, name='a')
    b.stage(conjugator=na, label='C_G(a) = 11')
    b.coset_step(Fraction(1, 12), TestSpec(CENTRALIZER_ANY, b.names(witnesses, 'w')),
                 left_transversal(G.elements, L1.elements),
                 target=b.names(L1.generators, 'g'),
                 t_set=b.names(T1, 't'),
                 shortcuts=tuple(ShortcutSpec(m, 3, b.name(c, 'c')) for m, c in enumerate(corrections)),
                 label='L1 = L2(11)')
    b.coset_step(Fraction(1, 12), TestSpec(CYCLIC_NORMALIZER, (na,), order=11),
                 left_transversal(L1.elements, N.elements),
                 target=b.names(N.generators, 'g'),
                 t_set=b.names(T2, 't'),
                 label='L2 = N_G(<a>) = 11:5')
    b.coset_step(Fraction(1, 5), TestSpec(STORED_SET, (na,)), final_conjugate_reps(a, T2, N), label='L3 = 1')

    b.stage(label='<a> down to 1')
    b.coset_step(Fraction(1, 11), TestSpec(STORED_SET, (IDENTITY_NAME,)), cyclic_subgroup(a), label='L4 = 1')
    return b.build()

def build_m12_chain(group: BlackBoxGroup, G: EnumeratedGroup, rng) -> ChainSpec:
    """M12 through a in 2A, C_G(b) for b in 2B, then 2 x S5 down to 1. 2A and 2B are told apart by class size."""
    b = ChainBuilder('m12', group, G, "M12 with a in 2A and C_G(a) = 2 x S5")
    identity = G.elements[0]
    class_size = lambda x: len(conjugation_orbit(x, G.generators))

    a = _first_of_order(G, 2, lambda x: class_size(x) == 396)
    C = _subgroup(centralizer(G, a), rng, 'C(a)')
    _expect('|C_G(a)|', len(C), 240)

    found = None
    for x in C:
        if not has_order_in(x, {2}) or class_size(x) != 495:
            continue
        L1 = _subgroup(centralizer(G, x), rng, 'C(b)')
        T1 = _refine(a, [identity], G, L1, 1, Fraction(1, 33))
        if T1 is not None:
            found = (x, L1, T1)
            break
    if found is None:
        raise ReconstructionError("no b in 2B commuting with a and giving p = 1/33")
    witness1, L1, T1 = found

    def centralizing_step(L, T, size, t_size, p):
        for x in L:
            if x.is_identity() or not has_order_in(x, {2, 4}) or not commutes(x, a):
                continue
            elements = centralizer(L, x)
            if len(elements) != size:
                continue
            L_next = _subgroup(elements, rng)
            T_next = _refine(a, T, L, L_next, t_size, p)
            if T_next is not None:
                return x, L_next, T_next
        raise ReconstructionError(f"no x with x^4 = 1 and |C(x)| = {size} giving p = {p}")

    witness2, L2, T2 = centralizing_step(L1, T1, 32, 1, Fraction(1, 3))
    witness3, L3, T3 = centralizing_step(L2, T2, 8, 2, Fraction(1, 2))

    z = _first_of_order(C, 5)
    L5 = _subgroup(normalizer_of_cyclic(C, z), rng, 'N_C(<z>)')
    _expect('|N_C(<z>)|', len(L5), 40)
    L6 = _subgroup(centralizer(L5, z), rng, 'C_C(z)')
    _expect('|C_C(z)|', len(L6), 10)

    na = b.name(a, name='a')
    b.stage(conjugator=na, label='C_G(a) = 2 x S5')
    b.step(RANDOM, Fraction(1, 33),
           membership=TestSpec(CENTRALIZER, (b.name(witness1, 'b'),)),
           sampler=(AMBIENT,),
           target=b.names(L1.generators, 'g'),
           t_set=b.names(T1, 't'),
           label='L1 = C_G(b), b in 2B')
    b.coset_step(Fraction(1, 3), TestSpec(CENTRALIZER, (b.name(witness2, 'b'),)),
                 left_transversal(L1.elements, L2.elements),
                 target=b.names(L2.generators, 'g'),
                 t_set=b.names(T2, 't'),
                 label='L2 = C_L1(x), |L2| = 32')
    b.coset_step(Fraction(1, 2), TestSpec(CENTRALIZER, (b.name(witness3, 'b'),)),
                 left_transversal(L2.elements, L3.elements),
                 target=b.names(L3.generators, 'g'),
                 t_set=b.names(T3, 't'),
                 label='L3 = C_L2(y), |L3| = 8')
    b.coset_step(Fraction(1, 2), TestSpec(STORED_SET, (na,)), final_conjugate_reps(a, T3, L3), label='L4 = 1')

    b.stage(label='2 x S5 down to 1')
    nz = b.name(z, 'b')
    b.coset_step(Fraction(1, 6), TestSpec(CYCLIC_NORMALIZER, (nz,), order=5),
                 left_transversal(C.elements, L5.elements),
                 target=b.names(L5.generators, 'g'),
                 label='N_C(<z>), z of order 5')
    b.coset_step(Fraction(1, 4), TestSpec(CENTRALIZER, (nz,)),
                 left_transversal(L5.elements, L6.elements),
                 target=b.names(L6.generators, 'g'),
                 label='C_C(z)')
    b.coset_step(Fraction(1, 10), TestSpec(STORED_SET, (IDENTITY_NAME,)), L6.elements, label='1')
    return b.build()

def build_m22_chain(group: BlackBoxGroup, G: EnumeratedGroup, rng) -> ChainSpec:
    """ M22 through a in 2A, the stabilizers L3(4) and 2^4:A5 of points fixed by a, then
    C_G(a) = 2^4:S4 through its normal 2^4.

    The last stage-1 step compares a^(xy) with the stored conjugates a^t, t in T_2, and
    corrects by t^-1.
    """
    if group.kind != 'permutation':
        raise ReconstructionError("the M22 chain is found through point stabilizers of the permutation generators")
    b = ChainBuilder('m22', group, G, "M22 with a in 2A through L3(4) and 2^4:A5")
    identity = G.elements[0]
    degree = group.generators[0].degree

    a = _first_of_order(G, 2)
    fixed = [pt for pt in range(1, degree + 1) if a(pt) == pt]

    found = None
    for pt in fixed:
        L1 = _subgroup([x for x in G if x(pt) == pt], rng, f'stab({pt})')
        T1 = _refine(a, [identity], G, L1, 1, Fraction(3, 11))
        if T1 is None:
            continue
        for q in fixed:
            if q == pt:
                continue
            L2 = _subgroup([x for x in L1 if x(q) == q], rng, f'stab({pt}, {q})')
            T2 = _refine(a, T1, L1, L2, 2, Fraction(5, 21))
            if T2 is not None:
                found = (L1, T1, L2, T2)
                break
        if found is not None:
            break
    if found is None:
        raise ReconstructionError("no pair of points fixed by a giving p = 3/11 and p = 5/21")
    L1, T1, L2, T2 = found
    _expect('|L1|', len(L1), 20160)
    _expect('|L2|', len(L2), 960)

    stored = [conjugate(a, t) for t in T2]
    p3 = min(Fraction(1, len(conjugation_orbit(w, L2.generators))) for w in stored)
    _expect('p_3', p3, Fraction(1, 60))

    C = _subgroup(centralizer(G, a), rng, 'C(a)')
    _expect('|C_G(a)|', len(C), 384)
    V = normal_subgroup_by_classes(C, 16, lambda x: (x * x).is_identity())
    if V is None:
        raise ReconstructionError("C_G(a) has no normal elementary abelian subgroup of order 16")

    na = b.name(a, name='a')
    g1 = b.names(L1.generators, 'g')
    g2 = b.names(L2.generators, 'g')
    b.stage(conjugator=na, label='C_G(a) = 2^4:S4')
    b.step(RANDOM, Fraction(3, 11),
           membership=TestSpec(ORDERS, orders=(6, 8, 11), p0=Fraction(103, 264), generators=g1),
           sampler=(AMBIENT,),
           target=g1,
           t_set=b.names(T1, 't'),
           label='L1 = L3(4)')
    b.step(RANDOM, Fraction(5, 21),
           membership=TestSpec(ORDERS, orders=(7,), p0=Fraction(2, 7), generators=g2),
           sampler=g1,
           target=g2,
           t_set=b.names(T2, 't'),
           label='L2 = 2^4:A5')
    b.step(RANDOM, Fraction(1, 60),
           membership=TestSpec(STORED_SET, b.names(stored, 'w')),
           sampler=g2,
           shortcuts=tuple(ShortcutSpec(m, 4, b.name(t.inverse(), 'c')) for m, t in enumerate(T2)),
           label='L3 = 1, corrected by T_2')

    b.stage(label='2^4:S4 down to 1')
    b.coset_step(Fraction(1, 24), TestSpec(STORED_SET, b.names(V, 'v')),
                 left_transversal(C.elements, V),
                 target=b.names(generators_for(V, rng), 'g'),
                 label='L4 = 2^4')
    b.coset_step(Fraction(1, 16), TestSpec(STORED_SET, (IDENTITY_NAME,)), V, label='L5 = 1')
    return b.build()

def _class_size(G: EnumeratedGroup):
    return lambda x: len(conjugation_orbit(x, G.generators))

def _normalizer_of_3a(G: EnumeratedGroup, rng) -> tuple:
    """c in 3A (560 conjugates) and L1 = N_G(<c>) = 3.A6.2."""
    c = _first_of_order(G, 3, lambda x: _class_size(G)(x) == 560)
    L1 = _subgroup(normalizer_of_cyclic(G, c), rng, 'N(<c>)')
    _expect('|N_G(<c>)|', len(L1), 2160)
    return c, L1

def build_j2_normalizer_chain(group: BlackBoxGroup, G: EnumeratedGroup, rng) -> ChainSpec:
    """ J2 through a in 8A, L1 = N_G(<c>) = 3.A6.2 for c in 3A, L2 = N_L1(P) = 3^(1+2):8 for a
    Sylow 3-subgroup P of L1, and L3 = C_G(a) = <a>. Every membership test is deterministic.
    """
    b = ChainBuilder('j2-1', group, G, "J2 with a in 8A through 3.A6.2 and 3^(1+2):8")
    identity = G.elements[0]

    c, L1 = _normalizer_of_3a(G, rng)

    # P is generated by c and two 3-elements of C_L1(c) = 3.A6 lying over one Sylow 3-subgroup of A6
    threes = [x for x in L1 if has_order_in(x, {3, 9}) and commutes(x, c)]
    P = None
    for x, y in itertools.combinations(threes, 2):
        try:
            candidate = closure([c, x, y], cap=27)
        except EnumerationOverflow:
            continue
        if len(candidate) == 27:
            P = candidate
            break
    if P is None:
        raise ReconstructionError("no subgroup of order 27 in N_G(<c>)")
    members = keyset(P)
    L2 = _subgroup([x for x in L1 if all(conjugate(g, x).key in members for g in P.generators)], rng, 'N(P)')
    _expect('|N_L1(P)|', len(L2), 216)

    a = _first_of_order(L2, 8)
    _expect('|a^G|', _class_size(G)(a), 75600)
    L3 = _subgroup(cyclic_subgroup(a), rng, '<a>')

    T1 = _refine(a, [identity], G, L1, 2, Fraction(1, 140))
    T2 = _refine(a, T1, L1, L2, 4, Fraction(1, 5)) if T1 is not None else None
    T3 = _refine(a, T2, L2, L3, 4, Fraction(1, 27)) if T2 is not None else None
    if T3 is None:
        raise ReconstructionError("3.A6.2 > 3^(1+2):8 > <a> does not give the tabled T-sets")

    na = b.name(a, name='a')
    b.stage(conjugator=na, label='C_G(a) = <a>')
    b.step(RANDOM, Fraction(1, 140),
           membership=TestSpec(CYCLIC_NORMALIZER, (b.name(c, 'b'),), order=3),
           sampler=(AMBIENT,),
           target=b.names(L1.generators, 'g'),
           t_set=b.names(T1, 't'),
           label='L1 = N_G(<c>) = 3.A6.2, c in 3A')
    b.coset_step(Fraction(1, 5), TestSpec(NORMALIZER, b.names(P.elements, 's'), generators=b.names(P.generators, 'g')),
                 left_transversal(L1.elements, L2.elements),
                 target=b.names(L2.generators, 'g'),
                 t_set=b.names(T2, 't'),
                 label='L2 = N_L1(P) = 3^(1+2):8')
    b.coset_step(Fraction(1, 27), TestSpec(CENTRALIZER, (na,)),
                 left_transversal(L2.elements, L3.elements),
                 target=(na,),
                 t_set=b.names(T3, 't'),
                 label='L3 = C_G(a) = <a>')
    b.coset_step(Fraction(1, 4), TestSpec(STORED_SET, (na,)), final_conjugate_reps(a, T3, L3), label='L4 = 1')

    b.stage(label='<a> down to 1')
    b.coset_step(Fraction(1, 8), TestSpec(STORED_SET, (IDENTITY_NAME,)), cyclic_subgroup(a), label='L5 = 1')
    return b.build()

def build_j2_orders_chain(group: BlackBoxGroup, G: EnumeratedGroup, rng) -> ChainSpec:
    """ J2 through a in 2A, L1 = N_G(<c>) = 3.A6.2, L2 = <c> x A5 and L3 = A4, with element-order
    tests for L2 and L3, then C_G(a) = 2^(1+4):A5 through a centralizer, a normalizer and a
    centralizer again.

    Step 1's parameter is |a^G ∩ L1|/|a^G| as found; the involutions of 3.A6 alone give 45/315.
    """
    b = ChainBuilder('j2-2', group, G, "J2 with a in 2A through 3.A6.2, 3 x A5 and A4")
    identity = G.elements[0]

    c, L1 = _normalizer_of_3a(G, rng)
    a = _first_of_order(L1, 2, lambda x: commutes(x, c) and _class_size(G)(x) == 315)

    powers_of_c = keyset(cyclic_subgroup(c))
    A5 = None
    for w in L1:
        if w.key in powers_of_c or not has_order_in(w, {3}) or not commutes(w, c):
            continue
        try:
            candidate = closure([a, w], cap=60)
        except EnumerationOverflow:
            continue
        if len(candidate) == 60:
            A5 = candidate
            break
    if A5 is None:
        raise ReconstructionError("no A5 through a in C_G(c)")
    L2 = closure(A5.generators + [c], cap=180, label='3 x A5')
    _expect('|<c> x A5|', len(L2), 180)

    V = centralizer(A5, a)
    _expect('|C_A5(a)|', len(V), 4)
    v_keys = keyset(V)
    L3 = _subgroup([x for x in A5 if all(conjugate(v, x).key in v_keys for v in V)], rng, 'A4')
    _expect('|N_A5(V)|', len(L3), 12)

    T1 = next_T_set(a, [identity], G, L1)
    p1 = _ratio(a, [identity], G, L1)
    logging.info(f"(oracle): j2-2 step 1 has |T_1| = {len(T1)} and p = {p1}")
    T2 = _refine(a, T1, L1, L2, 1, Fraction(1, 3))
    T3 = _refine(a, T2, L2, L3, 1, Fraction(1, 5)) if T2 is not None else None
    if T3 is None:
        raise ReconstructionError("3 x A5 > A4 does not give the tabled T-sets")

    C1 = _subgroup(centralizer(G, a), rng, 'C(a)')
    _expect('|C_G(a)|', len(C1), 1920)

    found = None
    for y in C1:
        if not has_order_in(y, {2}) or y == a:
            continue
        L5_elements = centralizer(C1, y)
        if len(L5_elements) != 192:
            continue
        L5 = _subgroup(L5_elements, rng, 'C_C1(y)')
        for u in L5:
            if not has_order_in(u, {4}):
                continue
            L6_elements = normalizer_of_cyclic(L5, u)
            if len(L6_elements) != 32:
                continue
            L6 = _subgroup(L6_elements, rng, 'N_L5(<u>)')
            L7_elements = centralizer(L6, u)
            if len(L7_elements) == 16:
                found = (y, L5, u, L6, _subgroup(L7_elements, rng, 'C_L6(u)'))
                break
        if found is not None:
            break
    if found is None:
        raise ReconstructionError("no 192 > 32 > 16 chain of centralizers and normalizers in C_G(a)")
    y, L5, u, L6, L7 = found

    na = b.name(a, name='a')
    g2 = b.names(L2.generators, 'g')
    g3 = b.names(L3.generators, 'g')
    b.stage(conjugator=na, label='C_G(a) = 2^(1+4):A5')
    b.step(RANDOM, p1,
           membership=TestSpec(CYCLIC_NORMALIZER, (b.name(c, 'b'),), order=3),
           sampler=(AMBIENT,),
           target=b.names(L1.generators, 'g'),
           t_set=b.names(T1, 't'),
           label='L1 = N_G(<c>) = 3.A6.2, c in 3A')
    b.coset_step(Fraction(1, 3), TestSpec(ORDERS, orders=(4, 12), p0=Fraction(1, 4), generators=g2),
                 left_transversal(L1.elements, L2.elements),
                 target=g2,
                 t_set=b.names(T2, 't'),
                 label='L2 = 3 x A5')
    b.coset_step(Fraction(1, 5), TestSpec(ORDERS, orders=(5,), p0=Fraction(2, 5), generators=g3),
                 left_transversal(L2.elements, L3.elements),
                 target=g3,
                 t_set=b.names(T3, 't'),
                 label='L3 = A4')
    b.coset_step(Fraction(1, 3), TestSpec(STORED_SET, (na,)), final_conjugate_reps(a, T3, L3), label='L4 = 1')

    b.stage(label='2^(1+4):A5 down to 1')
    nu = b.name(u, 'b')
    b.coset_step(Fraction(1, 10), TestSpec(CENTRALIZER, (b.name(y, 'b'),)),
                 left_transversal(C1.elements, L5.elements),
                 target=b.names(L5.generators, 'g'),
                 label='L5 = C_C1(y), |L5| = 192')
    b.coset_step(Fraction(1, 6), TestSpec(CYCLIC_NORMALIZER, (nu,), order=4),
                 left_transversal(L5.elements, L6.elements),
                 target=b.names(L6.generators, 'g'),
                 label='L6 = N_L5(<u>), |L6| = 32')
    b.coset_step(Fraction(1, 2), TestSpec(CENTRALIZER, (nu,)),
                 left_transversal(L6.elements, L7.elements),
                 target=b.names(L7.generators, 'g'),
                 label='L7 = C_L6(u), |L7| = 16')
    b.coset_step(Fraction(1, 16), TestSpec(STORED_SET, (IDENTITY_NAME,)), L7.elements, label='L8 = 1')
    return b.build()

def subgroup_chain_spec(name: str, group: BlackBoxGroup, G: EnumeratedGroup, subgroups: list,
                        seed: int = DEFAULT_SEED, description: str = '') -> ChainSpec:
    """ A one-stage chain through subgroups[0] > subgroups[1] > ... > 1.

    Each link is a coset-reps step over a left transversal with the lower subgroup stored
    as its membership test, so p = 1/index and n = 1. subgroups[0] may be a proper subgroup
    of G, in which case elements outside it fail.

    Args:
        subgroups (list): element lists (or enumerated groups), largest first
    """
    rng = make_rng(seed)
    b = ChainBuilder(name, group, G, description)
    b.stage(label='subgroup chain')

    identity = G.elements[0]
    links = [list(s) for s in subgroups]
    if len(links[-1]) > 1:
        links.append([identity])

    for upper, lower in zip(links, links[1:]):
        reps = left_transversal(upper, lower)
        target = b.names(generators_for(lower, rng), 'g') if len(lower) > 1 else ()
        b.coset_step(Fraction(1, len(reps)), TestSpec(STORED_SET, b.names(lower, 's')), reps,
                     target=target, label=f"index {len(reps)}")
    return b.build()

# chain name -> (generator set, builder)
BUILDERS = {
    'm11-2s4': ('m11', build_m11_centralizer_chain),
    'm11-l211': ('m11', build_m11_sylow_chain),
    'm12': ('m12', build_m12_chain),
    'm22': ('m22', build_m22_chain),
    'j2-1': ('j2', build_j2_normalizer_chain),
    'j2-2': ('j2', build_j2_orders_chain),
}

# Generator sets without a shipped file, built on first use
CONSTRUCTIONS = {
    'j2': hall_janko_group,
    'hs': higman_sims_group,
}

def _cache(write, path: str, what: str):
    try:
        os.makedirs(os.path.dirname(path), exist_ok=True)
        write(path)
        logging.info(f"(oracle): cached {what} in {path}")
    except OSError as e:
        logging.warning(f"(oracle): could not cache {what} in {path}: {e}")

def shipped_generators(name: str) -> BlackBoxGroup:
    """ Standard generators by name, from data/generators.

    J2 and HS are constructed the first time they are asked for and written there, so that
    chains built against them keep matching generators in later runs.
    """
    path = os.path.join(GENERATORS_DIR, f"{name}.gens")
    if not os.path.exists(path) and name in CONSTRUCTIONS:
        group = CONSTRUCTIONS[name]()
        _cache(lambda p: write_generators(group, p), path, f"{name} generators")
        return group
    return read_generators(path, label=name)

def build_chain(name: str, group: BlackBoxGroup = None, G: EnumeratedGroup = None, args: dict = None) -> ChainSpec:
    """ Reconstruct a shipped chain.

    Args:
        name (str): one of BUILDERS
        group (BlackBoxGroup, optional): standard generators; the shipped ones by default
        G (EnumeratedGroup, optional): enumeration of group, computed if omitted
        args (dotdict): uses seed, enumeration_cap, jobs and progress
    """
    args = args if args is not None else default_args()
    if name not in BUILDERS:
        raise ReconstructionError(f"no builder for chain {name!r}; known: {', '.join(sorted(BUILDERS))}")
    generators_name, builder = BUILDERS[name]
    group = group if group is not None else shipped_generators(generators_name)
    if G is None:
        G = EnumeratedGroup(group.generators,
                            cap=args.get('enumeration_cap', DEFAULT_ENUMERATION_CAP),
                            label=group.label,
                            jobs=args.get('jobs', 1),
                            progress=args.get('progress', False))
    return builder(group, G, make_rng(args.get('seed', DEFAULT_SEED)))

def shipped_chain(name: str, args: dict = None) -> ChainSpec:
    """A shipped chain: data/chains/<name>.chain if present, else reconstructed and written there."""
    path = os.path.join(CHAINS_DIR, f"{name}.chain")
    if os.path.exists(path):
        return load_chain_spec(path)
    spec = build_chain(name, args=args)
    _cache(lambda p: write_chain_spec(spec, p), path, f"chain {name}")
    return spec
