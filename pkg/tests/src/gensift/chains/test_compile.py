import copy
import dataclasses

import pytest

from blackbox.group import BlackBoxGroup
from blackbox.operations import has_order_in
from chains.compile import compile_chain, evaluate_elements
from common import COSET_REPS, IDENTITY_NAME, RANDOM
from errors import CompileError
from sift.basic_sift import CosetRepsSiftStep, RandomSiftStep
from sift.engine import Sifter
from sift.membership import ConjugatesTest

def test_evaluate_elements(m11_centralizer_spec, m11):
    values = evaluate_elements(m11_centralizer_spec, m11)
    assert(set(values) == set(m11_centralizer_spec.elements) | {IDENTITY_NAME})
    assert(values[IDENTITY_NAME][0].is_identity())
    for name, element in m11_centralizer_spec.elements.items():
        g, word = values[name]
        assert(word.evaluate(m11.generators) == g)
        if element.order is not None:
            assert(has_order_in(g, {element.order}))

def test_compiled_shape(m11_centralizer_chain, m11_centralizer_spec):
    chain = m11_centralizer_chain
    assert(chain.name == m11_centralizer_spec.name)
    assert(len(chain.steps) == 5)
    assert(chain.stages == [(0, 2), (3, 4)])
    assert(isinstance(chain.steps[0], RandomSiftStep))
    assert(all(isinstance(s, CosetRepsSiftStep) for s in chain.steps[1:]))
    assert([s.strategy for s in chain.steps] == [RANDOM] + [COSET_REPS] * 4)

def test_first_stage_conjugates(m11_centralizer_chain, m11):
    first = m11_centralizer_chain.steps[0].membership
    assert(isinstance(first, ConjugatesTest))
    assert(not first.a.is_identity())
    assert((first.a * first.a).is_identity())
    assert(not isinstance(m11_centralizer_chain.steps[3].membership, ConjugatesTest))

def test_compiles_in_matrix_representation(m11_centralizer_spec, m11_gf2):
    chain = compile_chain(m11_centralizer_spec, m11_gf2)
    assert(len(chain.steps) == 5)
    outcome = Sifter(chain, seed=3).sift(m11_gf2.identity())
    assert(outcome.success)

def test_rank_mismatch(m11_centralizer_spec, s5_group):
    three = BlackBoxGroup(list(s5_group.generators) + [s5_group.identity()], label='s5+1')
    with pytest.raises(CompileError):
        compile_chain(m11_centralizer_spec, three)

def test_wrong_group(m11_centralizer_spec, s5_group):
    # Same rank, different group: the declared orders no longer hold
    with pytest.raises(CompileError):
        compile_chain(m11_centralizer_spec, s5_group)

def test_declared_order_checked(m11_centralizer_spec, m11):
    spec = copy.deepcopy(m11_centralizer_spec)
    name = spec.stages[0].conjugator
    spec.elements[name] = dataclasses.replace(spec.elements[name], order=3)
    with pytest.raises(CompileError) as info:
        compile_chain(spec, m11)
    assert(info.value.step == 1)
