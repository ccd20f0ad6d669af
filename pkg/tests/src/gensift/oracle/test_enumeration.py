import numpy as np
import pytest

from blackbox.permutation import Permutation
from errors import ContractError, EnumerationOverflow
from oracle.enumeration import EnumeratedGroup, enumerate_group
from slp import SLPBuilder

def test_orders(s4, s5, s6, m11_enumerated):
    assert(len(s4) == 24)
    assert(len(s5) == 120)
    assert(len(s6) == 720)
    assert(m11_enumerated.order == 7920)

def test_identity_first(s5):
    assert(s5.elements[0].is_identity())
    assert(s5.index_of(s5.elements[0]) == 0)
    assert(s5.word(0).evaluate(s5.generators).is_identity())

def test_membership(s4, s5):
    assert(all(Permutation(x.images + [5]) in s5 for x in s4))
    assert(not any(x in s5 for x in s4))
    five_cycle = Permutation.from_cycles(5, [(1, 2, 3, 4, 5)])
    assert(five_cycle in s5)
    assert(len(s5.keys()) == 120)

def test_cap():
    gens = [Permutation.from_cycles(4, [(1, 2)]), Permutation.from_cycles(4, [(1, 2, 3, 4)])]
    assert(len(EnumeratedGroup(gens, cap=24)) == 24)
    with pytest.raises(EnumerationOverflow) as info:
        EnumeratedGroup(gens, cap=23)
    assert(info.value.cap == 23)

def test_m11_overflow(m11):
    with pytest.raises(EnumerationOverflow):
        enumerate_group(m11.generators, cap=100)

def test_contract():
    with pytest.raises(ContractError):
        EnumeratedGroup([])
    with pytest.raises(ContractError):
        EnumeratedGroup([Permutation.from_cycles(3, [(1, 2)])], cap=0)

def test_words_are_shortest_paths(s5):
    for i, x in enumerate(s5):
        assert(s5.word(i).evaluate(s5.generators) == x)
        if i > 0:
            parent = s5.elements[s5.parents[i]]
            assert(parent * s5.generators[s5.via[i]] == x)
            assert(len(s5.path(i)) == len(s5.path(s5.parents[i])) + 1)

def test_words_in_other_generators(m11, m11_enumerated):
    # The enumeration of <g1^-1> as words in the standard generators
    g = m11.generators[0]
    H = EnumeratedGroup([g.inverse()], label='<g^-1>')
    builder = SLPBuilder(2)
    inverse_word = builder.program(builder.inv(0))
    for i, x in enumerate(H):
        assert(H.word(i, [inverse_word]).evaluate(m11.generators) == x)

def test_cayley_table(s4):
    table = s4.cayley_table()
    assert(table.shape == (24, 24))
    rng = np.random.default_rng(0)
    for _ in range(100):
        i, j = rng.integers(24, size=2)
        assert(s4.elements[table[i, j]] == s4.elements[i] * s4.elements[j])
    assert(all(sorted(row) == list(range(24)) for row in table.tolist()))
    assert(s4.cayley_table() is table)

def test_cayley_table_limit(m11_enumerated):
    with pytest.raises(ContractError):
        m11_enumerated.cayley_table()
