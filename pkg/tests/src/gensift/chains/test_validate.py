import copy
from fractions import Fraction

import pytest

from chains.validate import ORACLE, STATIC, format_claim, format_claims, has_failures, validate_chain
from common import FAIL, PASS, UNCERTIFIED, default_args
from errors import ContractError
from oracle.sifting import Claim

def _by_name(claims: list) -> dict:
    return {c.name: c for c in claims}

def test_format_claim():
    assert(format_claim(Claim('step1.p', Fraction(13, 165), Fraction(13, 165), PASS))
           == "CLAIM step1.p EXPECTED 13/165 COMPUTED 13/165 PASS")
    assert(format_claim(Claim('hs-1.step2.p', Fraction(1, 63), None, UNCERTIFIED))
           == "CLAIM hs-1.step2.p EXPECTED 1/63 COMPUTED - UNCERTIFIED")
    assert(format_claim(Claim('step2.n', 2, 1, FAIL)) == "CLAIM step2.n EXPECTED 2 COMPUTED 1 FAIL")
    claims = [Claim('a', 1, 1, PASS), Claim('b', 1, 0, FAIL)]
    assert(format_claims(claims).splitlines()[1] == "CLAIM b EXPECTED 1 COMPUTED 0 FAIL")
    assert(has_failures(claims))
    assert(not has_failures(claims[:1]))

def test_static_mode(m11_centralizer_spec, m11):
    claims = validate_chain(m11_centralizer_spec, m11, STATIC)
    named = _by_name(claims)
    assert(named['chain.compile'].verdict == PASS)
    assert(named['step1.p'].verdict == UNCERTIFIED)
    assert(named['step1.p'].expected == Fraction(13, 165))
    assert(named['step2.k'].verdict == PASS)
    assert(all(c.verdict != FAIL for c in claims))
    assert(any(c.name.startswith('element.') for c in claims))

def test_oracle_mode_certifies_m11(m11_centralizer_spec, m11, m11_enumerated):
    claims = validate_chain(m11_centralizer_spec, m11, ORACLE, G=m11_enumerated)
    assert(all(c.verdict == PASS for c in claims))
    named = _by_name(claims)
    for i, p in enumerate([Fraction(13, 165), Fraction(1, 6), Fraction(1, 3), Fraction(1, 6), Fraction(1, 8)], 1):
        assert(named[f"step{i}.p"].computed == p)
    assert(named['chain.final'].computed == 1)

def test_tampered_parameter_fails(m11_centralizer_spec, m11, m11_enumerated):
    spec = copy.deepcopy(m11_centralizer_spec)
    spec.steps[0].p = Fraction(1, 5)
    claims = validate_chain(spec, m11, ORACLE, G=m11_enumerated)
    named = _by_name(claims)
    assert(named['step1.p'].verdict == FAIL)
    assert(named['step1.p'].computed == Fraction(13, 165))
    assert(has_failures(claims))
    assert("CLAIM step1.p EXPECTED 1/5 COMPUTED 13/165 FAIL" in format_claims(claims))

def test_overflow_reports_uncertified(m11_centralizer_spec, m11):
    args = default_args()
    args.enumeration_cap = 100
    claims = validate_chain(m11_centralizer_spec, m11, ORACLE, args)
    named = _by_name(claims)
    assert(named['step1.p'].verdict == UNCERTIFIED)
    assert(not has_failures(claims))

def test_compile_failure_is_a_claim(m11_centralizer_spec, s5_group):
    claims = validate_chain(m11_centralizer_spec, s5_group, STATIC)
    assert(claims == [Claim('chain.compile', 1, 0, FAIL)])

def test_unknown_mode(m11_centralizer_spec, m11):
    with pytest.raises(ContractError):
        validate_chain(m11_centralizer_spec, m11, 'thorough')
