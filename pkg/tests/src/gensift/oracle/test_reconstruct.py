from fractions import Fraction

import pytest

import os

from chains.spec import load_chain_spec
from chains.validate import ORACLE, has_failures, validate_chain
from common import CENTRALIZER, COSET_REPS, CYCLIC_NORMALIZER, NORMALIZER, ORDERS, RANDOM, STORED_SET
from errors import ReconstructionError
import oracle.reconstruct as reconstruct
from oracle.reconstruct import BUILDERS, build_chain, shipped_chain, shipped_generators, subgroup_chain_spec

def test_builders():
    assert(sorted(BUILDERS) == ['j2-1', 'j2-2', 'm11-2s4', 'm11-l211', 'm12', 'm22'])
    with pytest.raises(ReconstructionError):
        build_chain('hs-1')

def test_shipped_generators():
    assert(shipped_generators('m11').rank == 2)
    assert(shipped_generators('m22').rank == 3)

def test_m11_centralizer_chain(m11_centralizer_spec):
    spec = m11_centralizer_spec
    assert(spec.name == 'm11-2s4')
    assert([len(s.t_set) for s in spec.steps[:3]] == [2, 3, 1])
    assert(spec.steps[0].strategy == RANDOM)
    assert(spec.steps[2].membership.kind == STORED_SET)
    assert(spec.steps[4].n == 1)
    assert(len(spec.steps[4].transversal) == 8)

def test_m11_sylow_chain(m11_sylow_spec):
    spec = m11_sylow_spec
    assert(spec.name == 'm11-l211')
    assert(spec.elements[spec.stages[0].conjugator].order == 11)
    assert(all(s.p > 0 for s in spec.steps))

def test_build_is_deterministic(m11, m11_enumerated, m11_centralizer_spec):
    again = build_chain('m11-2s4', m11, m11_enumerated)
    assert(again.steps == m11_centralizer_spec.steps)

def test_subgroup_chain_spec(s4_group, s4):
    stabilizer = [x for x in s4 if x(4) == 4]
    spec = subgroup_chain_spec('s4-points', s4_group, s4, [s4.elements, stabilizer])
    assert([s.p for s in spec.steps] == [Fraction(1, 4), Fraction(1, 6)])
    assert(all(s.strategy == COSET_REPS and s.n == 1 for s in spec.steps))

@pytest.mark.slow
def test_m12_chain():
    spec = build_chain('m12')
    assert([s.p for s in spec.steps] == [Fraction(1, 33), Fraction(1, 3), Fraction(1, 2), Fraction(1, 2),
                                         Fraction(1, 6), Fraction(1, 4), Fraction(1, 10)])
    assert(len(spec.stages) == 2)

@pytest.mark.slow
def test_m22_chain():
    spec = build_chain('m22')
    assert([s.p for s in spec.steps[:2]] == [Fraction(3, 11), Fraction(5, 21)])
    assert([s.membership.kind for s in spec.steps[:3]] == [ORDERS, ORDERS, STORED_SET])
    assert(len(spec.steps[2].shortcuts) == 2)

def test_shipped_chain_is_cached(tmp_path, monkeypatch):
    monkeypatch.setattr(reconstruct, 'CHAINS_DIR', str(tmp_path))
    built = shipped_chain('m11-l211')
    path = tmp_path / 'm11-l211.chain'
    assert(path.exists())
    assert(load_chain_spec(str(path)).steps == built.steps)

    # A cached file wins over reconstruction
    monkeypatch.setattr(reconstruct, 'build_chain', None)
    assert(shipped_chain('m11-l211').steps == built.steps)

def test_unwritable_chain_cache_still_builds(tmp_path, monkeypatch):
    blocker = tmp_path / 'file'
    blocker.write_text('')
    monkeypatch.setattr(reconstruct, 'CHAINS_DIR', str(blocker / 'chains'))
    assert(shipped_chain('m11-l211').name == 'm11-l211')
    assert(not os.path.exists(blocker / 'chains'))

@pytest.mark.slow
def test_j2_normalizer_chain(j2_normalizer_spec):
    spec = j2_normalizer_spec
    assert([s.p for s in spec.steps] == [Fraction(1, 140), Fraction(1, 5), Fraction(1, 27), Fraction(1, 4),
                                         Fraction(1, 8)])
    assert([len(s.t_set) for s in spec.steps[:3]] == [2, 4, 4])
    assert([s.membership.kind for s in spec.steps[:3]] == [CYCLIC_NORMALIZER, NORMALIZER, CENTRALIZER])
    assert(spec.steps[0].strategy == RANDOM)
    assert(spec.steps[1].n == 2 and len(spec.steps[1].transversal) == 10)
    assert(spec.elements[spec.stages[0].conjugator].order == 8)
    assert(len(spec.steps[1].membership.witnesses) == 27)

@pytest.mark.slow
def test_j2_orders_chain(j2_orders_spec):
    spec = j2_orders_spec
    assert([s.p for s in spec.steps] == [Fraction(1, 7), Fraction(1, 3), Fraction(1, 5), Fraction(1, 3),
                                         Fraction(1, 10), Fraction(1, 6), Fraction(1, 2), Fraction(1, 16)])
    assert([s.membership.kind for s in spec.steps[1:3]] == [ORDERS, ORDERS])
    assert(spec.steps[1].membership.orders == (4, 12))
    assert(spec.steps[2].membership.p0 == Fraction(2, 5))
    assert([s.n for s in spec.steps[1:3]] == [4, 3])
    assert(len(spec.stages) == 2)

@pytest.mark.slow
def test_j2_chains_certify(j2, j2_enumerated, j2_normalizer_spec, j2_orders_spec):
    for spec in (j2_normalizer_spec, j2_orders_spec):
        claims = validate_chain(spec, j2, ORACLE, G=j2_enumerated)
        assert(not has_failures(claims))
        assert({c.name: c for c in claims}['chain.final'].computed == 1)
