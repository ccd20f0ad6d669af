from fractions import Fraction

import pytest

from chains.spec import AMBIENT, load_chain_spec, parse_chain_spec, serialize_chain_spec, write_chain_spec
from common import CENTRALIZER, EXHAUSTIVE_FINAL, NORMALIZER, RANDOM
from errors import ChainSpecError

TOY = """\
# centralizer of a transposition, then a lookup
[chain]
name s4-toy
group s4
generators 2

[element t]
order 2
slots=2 result=0

[element c]
slots=2 result=1

[element c2]
slots=2 result=2
MUL 1 1

[stage 1]
label whole group

[step 1]
stage 1
strategy random
p 1/6
membership centralizer t
sampler ambient

[step 2]
stage 1
strategy exhaustive-final
p 1/2
stored 1 t
"""

def _with(old: str, new: str) -> str:
    assert(old in TOY)
    return TOY.replace(old, new)

def test_parse_toy():
    spec = parse_chain_spec(TOY)
    assert(spec.name == 's4-toy')
    assert(spec.group == 's4')
    assert(spec.slots == 2)
    assert(list(spec.elements) == ['t', 'c', 'c2'])
    assert(spec.elements['t'].order == 2)
    assert(spec.elements['c'].order is None)
    assert(len(spec.stages) == 1)
    assert(spec.stages[0].conjugator is None)
    assert(spec.stages[0].label == 'whole group')

    first, second = spec.steps
    assert(first.strategy == RANDOM)
    assert(first.p == Fraction(1, 6))
    assert(first.membership.kind == CENTRALIZER)
    assert(first.membership.witnesses == ('t',))
    assert(first.sampler_key == AMBIENT)
    assert(second.strategy == EXHAUSTIVE_FINAL)
    assert(second.stored == ('1', 't'))
    assert(spec.stage_steps(1) == [first, second])

def test_m11_spec_shape(m11_centralizer_spec):
    spec = m11_centralizer_spec
    assert(spec.slots == 2)
    assert(len(spec.stages) == 2)
    assert(len(spec.steps) == 5)
    assert([s.stage for s in spec.steps] == [1, 1, 1, 2, 2])
    assert([s.p for s in spec.steps] == [Fraction(13, 165), Fraction(1, 6), Fraction(1, 3),
                                         Fraction(1, 6), Fraction(1, 8)])
    assert(spec.stages[0].conjugator is not None)
    assert(spec.elements[spec.stages[0].conjugator].order == 2)

def test_serialize_round_trip(m11_centralizer_spec, m11_sylow_spec, tmp_path):
    for spec in (m11_centralizer_spec, m11_sylow_spec):
        text = serialize_chain_spec(spec)
        again = parse_chain_spec(text)
        assert(serialize_chain_spec(again) == text)
        assert(again.steps == spec.steps)

        path = tmp_path / f"{spec.name}.chain"
        write_chain_spec(spec, str(path))
        assert(load_chain_spec(str(path)).steps == spec.steps)

    toy = parse_chain_spec(TOY)
    again = parse_chain_spec(serialize_chain_spec(toy))
    assert(again.steps == toy.steps)
    assert(again.stages == toy.stages)

def test_normalizer_membership():
    spec = parse_chain_spec(_with("membership centralizer t", "membership normalizer gens=c 1 c c2"))
    test = spec.steps[0].membership
    assert(test.kind == NORMALIZER)
    assert(test.generators == ('c',))
    assert(test.witnesses == ('1', 'c', 'c2'))
    text = serialize_chain_spec(spec)
    assert("membership normalizer gens=c 1 c c2" in text)
    assert(parse_chain_spec(text).steps == spec.steps)

@pytest.mark.parametrize("old,new,field", [
    ("p 1/6", "p 0", 'p'),
    ("p 1/6", "p 7/6", 'p'),
    ("p 1/6", "p one", 'p'),
    ("label whole group", "conjugator t\nt0 c", 't0'),
    ("label whole group", "conjugator t", 't0'),
    ("membership centralizer t", "membership centralizer nobody", 'membership'),
    ("membership centralizer t", "membership sideways t", 'membership'),
    ("membership centralizer t", "membership normalizer c", 'membership'),
    ("membership centralizer t", "membership normalizer gens=nobody 1 c", 'membership'),
    ("membership centralizer t", "membership normalizer gens=c 1 nobody", 'membership'),
    ("strategy random", "strategy guess", 'strategy'),
    ("stored 1 t", "stored", 'stored'),
    ("slots=2 result=0", "slots=3 result=0", 'element'),
    ("[element c2]", "[element 1]", 'element'),
])
def test_rejections(old, new, field):
    with pytest.raises(ChainSpecError) as info:
        parse_chain_spec(_with(old, new), 'toy.chain')
    assert(info.value.path == 'toy.chain')
    assert(info.value.field == field)

def test_rejected_sampler_has_line():
    with pytest.raises(ChainSpecError) as info:
        parse_chain_spec(_with("sampler ambient\n", ""))
    assert(info.value.field == 'sampler')
    assert(info.value.line == 21)

def test_exhaustive_final_must_be_last():
    text = TOY + "\n[step 3]\nstage 1\nstrategy random\np 1/2\nmembership centralizer t\nsampler t\n"
    with pytest.raises(ChainSpecError):
        parse_chain_spec(text)

def test_stage_numbering():
    with pytest.raises(ChainSpecError):
        parse_chain_spec(TOY.replace("[stage 1]", "[stage 2]"))
    with pytest.raises(ChainSpecError):
        parse_chain_spec(TOY + "\n[stage 2]\nlabel empty\n")

def test_missing_chain_section():
    with pytest.raises(ChainSpecError):
        parse_chain_spec(TOY.replace("[chain]", "[nonsense]"))
    with pytest.raises(ChainSpecError):
        parse_chain_spec("")
