import pytest

from chains.compile import compile_chain
from oracle.enumeration import EnumeratedGroup
from oracle.rank3 import hall_janko_group
from oracle.reconstruct import build_chain, shipped_generators

# Groups

@pytest.fixture(scope="session")
def s4_group():
    return shipped_generators('s4')

@pytest.fixture(scope="session")
def s5_group():
    return shipped_generators('s5')

@pytest.fixture(scope="session")
def s4(s4_group):
    return EnumeratedGroup(s4_group.generators, label='s4')

@pytest.fixture(scope="session")
def s5(s5_group):
    return EnumeratedGroup(s5_group.generators, label='s5')

@pytest.fixture(scope="session")
def s6():
    return EnumeratedGroup(shipped_generators('s6').generators, label='s6')

@pytest.fixture(scope="session")
def m11():
    return shipped_generators('m11')

@pytest.fixture(scope="session")
def m11_gf2():
    return shipped_generators('m11_gf2')

@pytest.fixture(scope="session")
def m11_enumerated(m11):
    return EnumeratedGroup(m11.generators, label='m11')

# J2 on 100 points, constructed in memory
@pytest.fixture(scope="session")
def j2():
    return hall_janko_group()

@pytest.fixture(scope="session")
def j2_enumerated(j2):
    return EnumeratedGroup(j2.generators, label='j2')

# Chains

@pytest.fixture(scope="session")
def m11_centralizer_spec(m11, m11_enumerated):
    return build_chain('m11-2s4', m11, m11_enumerated)

@pytest.fixture(scope="session")
def m11_sylow_spec(m11, m11_enumerated):
    return build_chain('m11-l211', m11, m11_enumerated)

@pytest.fixture(scope="session")
def m11_centralizer_chain(m11_centralizer_spec, m11):
    return compile_chain(m11_centralizer_spec, m11)

@pytest.fixture(scope="session")
def m11_sylow_chain(m11_sylow_spec, m11):
    return compile_chain(m11_sylow_spec, m11)

@pytest.fixture(scope="session")
def j2_normalizer_spec(j2, j2_enumerated):
    return build_chain('j2-1', j2, j2_enumerated)

@pytest.fixture(scope="session")
def j2_orders_spec(j2, j2_enumerated):
    return build_chain('j2-2', j2, j2_enumerated)
