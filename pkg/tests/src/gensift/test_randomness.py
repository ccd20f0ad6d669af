import math
from collections import Counter

import pytest
from scipy import stats

from blackbox.element import counting
from errors import ContractError, StructuralError
from randomness import (ProductReplacement, UniformSampler, make_rng, pr_init, pr_next, uniform_from_set,
                        without_replacement)

def test_burn_in_cost(s4_group):
    with counting() as c:
        pr_init(s4_group, seed=1, burn_in=100)
    assert(c.count == 100)

def test_no_burn_in_pads_generators_cyclically(s4_group):
    state = pr_init(s4_group, seed=1, burn_in=0)
    assert(state.elements == [s4_group.generators[i % 2] for i in range(10)])

def test_same_seed_same_state(s4_group):
    a = pr_init(s4_group, seed=1)
    b = pr_init(s4_group, seed=1)
    assert(a.elements == b.elements)
    for _ in range(50):
        assert(pr_next(a)[0] == pr_next(b)[0])

def test_draw_costs_two(s4_group):
    state = pr_init(s4_group, seed=3)
    with counting() as c:
        pr_next(state)
    assert(c.count == 2)

def test_words_evaluate_to_elements(m11):
    state = pr_init(m11, seed=5)
    for _ in range(100):
        g, word = pr_next(state)
        assert(word.evaluate(m11.generators) == g)

def test_untracked_words(s4_group):
    g, word = pr_init(s4_group, seed=5, track_words=False).next()
    assert(word is None)

def test_bad_parameters(s4_group):
    with pytest.raises(StructuralError):
        ProductReplacement([], seed=1)
    with pytest.raises(ContractError):
        ProductReplacement(s4_group, seed=1, slots=1)
    with pytest.raises(ContractError):
        ProductReplacement(s4_group, seed=1, burn_in=-1)

def test_approximately_uniform_on_s4(s4, s4_group):
    state = pr_init(s4_group, seed=11, track_words=False)
    counts = Counter(pr_next(state)[0].key for _ in range(10**4))
    observed = [counts.get(g.key, 0) for g in s4.elements]
    assert(sum(observed) == 10**4)
    assert(stats.chisquare(observed).pvalue > 0.001)

def test_uniform_from_singleton():
    assert(uniform_from_set(['only'], make_rng(1)) == 'only')
    with pytest.raises(ContractError):
        uniform_from_set([], make_rng(1))

def test_uniform_from_set_frequencies():
    rng = make_rng(2)
    items = list(range(6))
    counts = Counter(uniform_from_set(items, rng) for _ in range(10**4))
    sigma = math.sqrt(10**4 * (1 / 6) * (5 / 6))
    for item in items:
        assert(abs(counts[item] - 10**4 / 6) <= 4 * sigma)

def test_without_replacement_visits_each_once():
    items = list(range(12))
    seen = list(without_replacement(items, make_rng(3)))
    assert(sorted(seen) == items)

def test_uniform_sampler(s4):
    sampler = UniformSampler(s4.elements, make_rng(4), word=s4.word)
    g, word = sampler.next()
    assert(g in s4)
    assert(word.evaluate(s4.generators) == g)
