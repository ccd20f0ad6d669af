from fractions import Fraction

import pytest

from blackbox.permutation import Permutation
from errors import ContractError, StructuralError
from randomness import make_rng
from sift.basic_sift import (CosetRepsSiftStep, ExhaustiveFinalStep, RandomSiftStep, SiftState, basic_sift_coset_reps,
                             basic_sift_random, exhaustive_final_step)
from sift.engine import Sifter
from sift.membership import stored_set_test

s3 = [Permutation(p) for p in [[1, 2, 3], [2, 1, 3], [1, 3, 2], [3, 2, 1], [2, 3, 1], [3, 1, 2]]]
identity = s3[0]
swap = s3[1]

def test_coset_reps_all_representatives_work():
    step = CosetRepsSiftStep(stored_set_test(s3), 1, [(x, None) for x in s3[:3]], n=3)
    rng = make_rng(1)
    for g in s3:
        probe, tried = step.run(SiftState(g), 0.0, rng)
        assert(probe is not None)
        assert(tried == 1)

def test_coset_reps_finds_the_coset(s4):
    # K = Stab(4); r_i sends i to 4, so g·r_i fixes 4 for i = g(4)
    K = [x for x in s4 if x(4) == 4]
    reps = [next(x for x in s4 if x(i) == 4) for i in range(1, 5)]
    step = CosetRepsSiftStep(stored_set_test(K), Fraction(1, 4), [(r, None) for r in reps], n=1)
    rng = make_rng(2)
    for g in s4:
        y = basic_sift_coset_reps(g, 0.0, step, rng)
        assert(y is not None)
        assert((g * y)(4) == 4)

def test_coset_reps_checks_n():
    with pytest.raises(ContractError):
        CosetRepsSiftStep(stored_set_test(s3), 1, [(identity, None)], n=2)
    with pytest.raises(ContractError):
        CosetRepsSiftStep(stored_set_test(s3), 1, [], n=1)

def test_strategy_mismatch():
    step = CosetRepsSiftStep(stored_set_test(s3), 1, [(identity, None)], n=1)
    with pytest.raises(StructuralError):
        basic_sift_random(identity, 0.01, step, sampler=None)

def test_random_search_needs_a_sampler():
    step = RandomSiftStep(stored_set_test(s3), 1, 'ambient')
    with pytest.raises(StructuralError):
        basic_sift_random(identity, 0.01, step, sampler=None)

def test_sifting_parameter_range():
    with pytest.raises(ContractError):
        RandomSiftStep(stored_set_test(s3), 0, 'ambient')
    with pytest.raises(ContractError):
        RandomSiftStep(stored_set_test(s3), Fraction(7, 6), 'ambient')

def test_random_search_success_rate_on_m11(m11_centralizer_chain, m11):
    step = m11_centralizer_chain.steps[0]
    assert(step.p == Fraction(13, 165))
    sifter = Sifter(m11_centralizer_chain, seed=3)
    sampler = sifter.sampler(step.sampler_key)
    inputs = Sifter(m11_centralizer_chain, seed=4).sampler(step.sampler_key)
    rng = make_rng(5)
    found = sum(basic_sift_random(inputs.next()[0], 0.001, step, sampler, rng) is not None for _ in range(500))
    assert(found / 500 >= 0.99)

def test_exhaustive_final_step_with_identity_stored():
    stored = [identity, swap, s3[4]]
    assert(exhaustive_final_step(identity, stored).is_identity())
    assert(exhaustive_final_step(s3[4].inverse(), stored) == s3[4])
    assert(exhaustive_final_step(s3[2], stored) is None)

def test_exhaustive_final_step_without_identity():
    stored = [swap, s3[4]]
    # g itself stored: answer is g^-1
    assert(exhaustive_final_step(s3[4], stored) == s3[4].inverse())
    assert(exhaustive_final_step(identity, stored) is None)

def test_exhaustive_final_step_is_deterministic():
    step = ExhaustiveFinalStep([(x, None) for x in s3])
    assert(not step.randomized)
    assert(step.p == Fraction(1, 6))
