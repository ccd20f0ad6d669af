from collections import namedtuple

import pytest

from blackbox.permutation import Permutation
from chains.compile import compile_chain
from common import default_args
from errors import ContractError
from oracle.reconstruct import subgroup_chain_spec
from randomness import ProductReplacement
from sift.engine import FAIL, SUCCESS, Sifter, sift, split_epsilon

Step = namedtuple('Step', ['randomized'])

def test_split_epsilon():
    steps = [Step(True), Step(True), Step(False), Step(False), Step(False)]
    assert(split_epsilon(0.01, steps) == [0.005, 0.005, 0.0, 0.0, 0.0])
    assert(split_epsilon(0.01, [Step(False)] * 3) == [0.0, 0.0, 0.0])
    assert(split_epsilon(0.01, [Step(True)]) == [0.01])
    with pytest.raises(ContractError):
        split_epsilon(0.5, steps)

def test_identity_sifts(m11_centralizer_chain, m11):
    outcome = sift(m11_centralizer_chain, m11.identity(), seed=1)
    assert(outcome.status == SUCCESS)
    assert(outcome.word.evaluate(m11.generators).is_identity())

def test_epsilon_checks(m11_centralizer_chain, m11):
    sifter = Sifter(m11_centralizer_chain, seed=1)
    with pytest.raises(ContractError):
        sifter.sift(m11.identity(), [0.01])
    with pytest.raises(ContractError):
        sifter.sift(m11.identity(), [0.2] * len(m11_centralizer_chain.steps))

def test_las_vegas_soundness_on_m11(m11_centralizer_chain, m11):
    sifter = Sifter(m11_centralizer_chain, seed=1)
    inputs = ProductReplacement(m11, seed=2, track_words=False)
    failures = 0
    for _ in range(1000):
        g, _ = inputs.next()
        outcome = sifter.sift(g)
        if outcome.success:
            assert((g * outcome.word.evaluate(m11.generators)).is_identity())
        else:
            failures += 1
    assert(failures / 1000 <= 0.03)

def test_outcome_accounting(m11_centralizer_chain, m11):
    sifter = Sifter(m11_centralizer_chain, seed=5)
    g, _ = ProductReplacement(m11, seed=6, track_words=False).next()
    outcome = sifter.sift(g)
    assert(len(outcome.step_mults) == len(m11_centralizer_chain.steps))
    assert(sum(outcome.step_mults) <= outcome.mults)
    assert(all(r >= 1 for r in outcome.retries) or not outcome.success)

def test_same_seed_same_word(m11_centralizer_chain, m11):
    g, _ = ProductReplacement(m11, seed=7, track_words=False).next()
    a = Sifter(m11_centralizer_chain, seed=8).sift(g)
    b = Sifter(m11_centralizer_chain, seed=8).sift(g)
    assert(a.status == b.status)
    assert(a.mults == b.mults)
    if a.success:
        assert(a.word.to_text() == b.word.to_text())

def test_shortcut_chain_sifts(m11_sylow_chain, m11):
    sifter = Sifter(m11_sylow_chain, seed=9)
    inputs = ProductReplacement(m11, seed=10, track_words=False)
    successes = 0
    for _ in range(200):
        g, _ = inputs.next()
        outcome = sifter.sift(g)
        if outcome.success:
            successes += 1
            assert((g * outcome.word.evaluate(m11.generators)).is_identity())
    # every step of this chain is deterministic
    assert(successes == 200)

def test_element_outside_restricted_chain_fails(s5, s5_group):
    stabilizer = [x for x in s5 if x(5) == 5]
    pointwise = [x for x in stabilizer if x(4) == 4]
    spec = subgroup_chain_spec('s4-in-s5', s5_group, s5, [stabilizer, pointwise])
    chain = compile_chain(spec, s5_group)
    sifter = Sifter(chain, seed=1)

    outside = Permutation.from_cycles(5, [(1, 2, 3, 4, 5)])
    assert(sifter.sift(outside).status == FAIL)
    for g in stabilizer:
        outcome = sifter.sift(g)
        assert(outcome.status == SUCCESS)
        assert((g * outcome.word.evaluate(s5_group.generators)).is_identity())

def test_representation_independence(m11_centralizer_spec, m11, m11_gf2):
    perm_chain = compile_chain(m11_centralizer_spec, m11)
    matrix_chain = compile_chain(m11_centralizer_spec, m11_gf2)
    successes = 0
    for seed in range(100):
        g_perm, word = ProductReplacement(m11, seed=1000 + seed).next()
        g_matrix = word.evaluate(m11_gf2.generators)
        perm = Sifter(perm_chain, seed=seed).sift(g_perm)
        matrix = Sifter(matrix_chain, seed=seed).sift(g_matrix)
        if perm.success and matrix.success:
            successes += 1
            assert((g_perm * perm.word.evaluate(m11.generators)).is_identity())
            assert((g_matrix * matrix.word.evaluate(m11_gf2.generators)).is_identity())
            assert((g_matrix * perm.word.evaluate(m11_gf2.generators)).is_identity())
    assert(successes >= 95)

def test_words_stay_short_over_many_sifts(m11_centralizer_chain, m11):
    args = default_args()
    args.word_tape_limit = 400
    sifter = Sifter(m11_centralizer_chain, seed=12, args=args)
    inputs = ProductReplacement(m11, seed=13, track_words=False)
    longest = 0
    for _ in range(300):
        g, _ = inputs.next()
        outcome = sifter.sift(g)
        if outcome.success:
            longest = max(longest, len(outcome.word))
            assert((g * outcome.word.evaluate(m11.generators)).is_identity())
    assert(0 < longest <= 1400)
    assert(all(len(s.tape) <= 1400 for s in sifter.samplers.values()))
