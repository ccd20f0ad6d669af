"""
Chain-spec files: a group-independent description of a subset chain.

Every element is a straight-line program in the standard generators. The grammar is
documented in docs/chain_format.md; in short, a file is a sequence of sections

    [chain]            name, group, generators, description
    [element NAME]     optional 'order n', then a program ('slots=k result=r' + instructions)
    [stage N]          conjugator, t0, label
    [step N]           stage, strategy, p, membership, sampler, transversal, n, stored,
                       target, t-set, shortcut (repeatable), label

Names are looked up in the element sections; '1' always means the identity.
"""

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction

from common import (CENTRALIZER, CENTRALIZER_ANY, COSET_REPS, CYCLIC_NORMALIZER, EXHAUSTIVE_FINAL,
                    IDENTITY_NAME, NORMALIZER, ORDERS, RANDOM, STORED_SET, STRATEGIES, TEST_KINDS)
from errors import ChainSpecError, StructuralError
from slp import StraightLineProgram

AMBIENT = 'ambient'

@dataclass
class TestSpec:
    """ Membership test description.

    `witnesses` are element names. Orders tests use `orders`, `p0` and `generators`
    (names of generators of K); cyclic-normalizer tests use `order`. Normalizer tests use
    `generators` for the generators of P and `witnesses` for all of its elements.
    """
    kind: str
    witnesses: tuple = ()
    order: int = None
    orders: tuple = ()
    p0: Fraction = None
    generators: tuple = ()

@dataclass
class ShortcutSpec:
    match: int
    jump: int
    correction: str = IDENTITY_NAME

@dataclass
class ElementSpec:
    name: str
    word: StraightLineProgram
    order: int = None

@dataclass
class StageSpec:
    index: int
    conjugator: str = None
    label: str = ''

@dataclass
class StepSpec:
    index: int
    stage: int
    strategy: str
    p: Fraction
    membership: TestSpec = None
    sampler: tuple = None
    transversal: tuple = ()
    n: int = None
    stored: tuple = ()
    target: tuple = ()
    t_set: tuple = (IDENTITY_NAME,)
    shortcuts: tuple = ()
    label: str = ''

    @property
    def sampler_key(self):
        if self.sampler is None:
            return None
        return AMBIENT if self.sampler == (AMBIENT,) else ",".join(self.sampler)

@dataclass
class ChainSpec:
    name: str
    group: str
    slots: int
    description: str = ''
    elements: dict = field(default_factory=dict)
    stages: list = field(default_factory=list)
    steps: list = field(default_factory=list)

    def stage_steps(self, stage: int) -> list:
        return [s for s in self.steps if s.stage == stage]

    def stage_of(self, step: StepSpec) -> StageSpec:
        return self.stages[step.stage - 1]

_SECTION = re.compile(r'^\[(chain|element|stage|step)(?:\s+(\S+))?\]$')

def _fraction(text: str, path, line, name) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ChainSpecError(f"not a rational number: {text!r}", path, line, name)

def _int(text: str, path, line, name) -> int:
    try:
        return int(text)
    except ValueError:
        raise ChainSpecError(f"not an integer: {text!r}", path, line, name)

def _parse_test(values: list, path, line) -> TestSpec:
    if not values or values[0] not in TEST_KINDS:
        raise ChainSpecError(f"membership kind must be one of {', '.join(TEST_KINDS)}", path, line, 'membership')
    kind, rest = values[0], values[1:]

    if kind == CENTRALIZER:
        if len(rest) != 1:
            raise ChainSpecError("centralizer takes one witness", path, line, 'membership')
        return TestSpec(kind, tuple(rest))
    if kind in (CENTRALIZER_ANY, STORED_SET):
        if not rest:
            raise ChainSpecError(f"{kind} takes at least one element", path, line, 'membership')
        return TestSpec(kind, tuple(rest))
    if kind == CYCLIC_NORMALIZER:
        if len(rest) != 2:
            raise ChainSpecError("cyclic-normalizer takes a witness and its order", path, line, 'membership')
        return TestSpec(kind, (rest[0],), order=_int(rest[1], path, line, 'membership'))
    if kind == NORMALIZER:
        if len(rest) < 2 or not rest[0].startswith('gens='):
            raise ChainSpecError("normalizer takes gens=... and the elements of the subgroup", path, line, 'membership')
        return TestSpec(kind, tuple(rest[1:]), generators=tuple(rest[0][len('gens='):].split(',')))

    options = dict(v.split('=', 1) for v in rest if '=' in v)
    if set(options) != {'I', 'p0', 'gens'} or len(rest) != 3:
        raise ChainSpecError("orders takes I=..., p0=... and gens=...", path, line, 'membership')
    orders = tuple(_int(n, path, line, 'membership') for n in options['I'].split(','))
    return TestSpec(kind,
                    orders=orders,
                    p0=_fraction(options['p0'], path, line, 'membership'),
                    generators=tuple(options['gens'].split(',')))

def parse_chain_spec(text: str, path: str = '<string>') -> ChainSpec:
    """ Parse and validate a chain spec.

    Raises:
        ChainSpecError: with the path, line and field of the first problem
    """
    sections = []
    current = None
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        header = _SECTION.match(line)
        if header:
            current = (header.group(1), header.group(2), number, [])
            sections.append(current)
        elif line.startswith('['):
            raise ChainSpecError(f"unknown section header {line!r}", path, number)
        elif current is None:
            raise ChainSpecError("content before the first section", path, number)
        else:
            current[3].append((number, line))

    chain = None
    elements = {}
    stages = {}
    steps = {}

    for kind, name, number, body in sections:
        if kind == 'chain':
            if chain is not None:
                raise ChainSpecError("duplicate [chain] section", path, number)
            values = {}
            for n, line in body:
                key, _, value = line.partition(' ')
                values[key] = (n, value.strip())
            for required in ('name', 'group', 'generators'):
                if required not in values:
                    raise ChainSpecError("missing field", path, number, required)
            n, slots = values['generators']
            chain = ChainSpec(name=values['name'][1],
                              group=values['group'][1],
                              slots=_int(slots, path, n, 'generators'),
                              description=values.get('description', (0, ''))[1])

        elif kind == 'element':
            if name is None:
                raise ChainSpecError("element section needs a name", path, number)
            if name == IDENTITY_NAME:
                raise ChainSpecError(f"the name {IDENTITY_NAME!r} is reserved for the identity", path, number, 'element')
            if name in elements:
                raise ChainSpecError(f"element {name!r} defined twice", path, number, 'element')
            order = None
            lines = list(body)
            if lines and lines[0][1].startswith('order '):
                order = _int(lines[0][1].split()[1], path, lines[0][0], 'order')
                lines = lines[1:]
            if not lines:
                raise ChainSpecError(f"element {name!r} has no program", path, number, 'element')
            try:
                word = StraightLineProgram.from_lines([l for _, l in lines])
            except StructuralError as e:
                raise ChainSpecError(str(e), path, lines[0][0], 'element')
            elements[name] = (number, ElementSpec(name, word, order))

        elif kind == 'stage':
            index = _int(name or '', path, number, 'stage')
            if index in stages:
                raise ChainSpecError(f"stage {index} defined twice", path, number, 'stage')
            stage = StageSpec(index)
            t0 = None
            for n, line in body:
                key, _, value = line.partition(' ')
                value = value.strip()
                if key == 'conjugator':
                    stage.conjugator = value
                elif key == 't0':
                    t0 = (n, value)
                elif key == 'label':
                    stage.label = value
                else:
                    raise ChainSpecError("unknown stage field", path, n, key)
            if stage.conjugator is not None and t0 is None:
                raise ChainSpecError("a conjugate stage must state t0 1", path, number, 't0')
            if t0 is not None and t0[1] != IDENTITY_NAME:
                raise ChainSpecError(f"T_0 must be {{1}}, got {t0[1]!r}", path, t0[0], 't0')
            stages[index] = (number, stage)

        else:
            index = _int(name or '', path, number, 'step')
            if index in steps:
                raise ChainSpecError(f"step {index} defined twice", path, number, 'step')
            values = {}
            shortcuts = []
            for n, line in body:
                key, _, value = line.partition(' ')
                value = value.strip()
                if key == 'shortcut':
                    parts = value.split()
                    if len(parts) != 3:
                        raise ChainSpecError("shortcut takes <match> <jump> <correction>", path, n, key)
                    shortcuts.append((n, ShortcutSpec(_int(parts[0], path, n, key), _int(parts[1], path, n, key), parts[2])))
                elif key in ('stage', 'strategy', 'p', 'membership', 'sampler', 'transversal', 'n',
                             'stored', 'target', 't-set', 'label'):
                    if key in values:
                        raise ChainSpecError("field given twice", path, n, key)
                    values[key] = (n, value)
                else:
                    raise ChainSpecError("unknown step field", path, n, key)

            for required in ('stage', 'strategy', 'p'):
                if required not in values:
                    raise ChainSpecError("missing field", path, number, required)

            def names(key, default=()):
                return tuple(values[key][1].split()) if key in values else default

            step = StepSpec(index=index,
                            stage=_int(values['stage'][1], path, values['stage'][0], 'stage'),
                            strategy=values['strategy'][1],
                            p=_fraction(values['p'][1], path, values['p'][0], 'p'),
                            sampler=names('sampler', None),
                            transversal=names('transversal'),
                            stored=names('stored'),
                            target=names('target'),
                            t_set=names('t-set', (IDENTITY_NAME,)),
                            shortcuts=tuple(s for _, s in shortcuts),
                            label=values.get('label', (0, ''))[1])
            if 'membership' in values:
                step.membership = _parse_test(values['membership'][1].split(), path, values['membership'][0])
            if 'n' in values:
                step.n = _int(values['n'][1], path, values['n'][0], 'n')
            steps[index] = (number, values, shortcuts, step)

    if chain is None:
        raise ChainSpecError("missing [chain] section", path)

    chain.elements = {name: e for name, (_, e) in elements.items()}
    chain.stages = [stages[i][1] for i in sorted(stages)]
    chain.steps = [steps[i][3] for i in sorted(steps)]
    _validate(chain, path, elements, stages, steps)

    logging.debug(f"(chains): parsed {chain.name} with {len(chain.steps)} steps in {len(chain.stages)} stages")
    return chain

def _validate(chain: ChainSpec, path, elements, stages, steps):
    if chain.slots < 1:
        raise ChainSpecError("a chain needs at least one generator", path, None, 'generators')

    for name, (number, element) in elements.items():
        if element.word.slots != chain.slots:
            raise ChainSpecError(f"element {name!r} has {element.word.slots} slots, the chain has {chain.slots}",
                                 path, number, 'element')
        if element.order is not None and element.order < 1:
            raise ChainSpecError(f"element {name!r} has order {element.order}", path, number, 'order')

    if sorted(stages) != list(range(1, len(stages) + 1)) or not stages:
        raise ChainSpecError(f"stages must be numbered 1..m, got {sorted(stages)}", path, None, 'stage')
    if sorted(steps) != list(range(1, len(steps) + 1)) or not steps:
        raise ChainSpecError(f"steps must be numbered 1..k, got {sorted(steps)}", path, None, 'step')

    def defined(name, number, key, allow_identity=True):
        if name == IDENTITY_NAME and allow_identity:
            return
        if name not in chain.elements:
            raise ChainSpecError(f"undefined element {name!r}", path, number, key)

    for number, stage in stages.values():
        if stage.conjugator is not None:
            defined(stage.conjugator, number, 'conjugator', allow_identity=False)

    k = len(chain.steps)
    previous_stage = 1
    for index in sorted(steps):
        number, values, shortcuts, step = steps[index]
        line = lambda key: values[key][0] if key in values else number

        if step.stage not in stages:
            raise ChainSpecError(f"step {index} refers to missing stage {step.stage}", path, line('stage'), 'stage')
        if step.stage not in (previous_stage, previous_stage + 1) or (index == 1 and step.stage != 1):
            raise ChainSpecError("stages must partition the steps into consecutive runs", path, line('stage'), 'stage')
        previous_stage = step.stage

        if step.strategy not in STRATEGIES:
            raise ChainSpecError(f"strategy must be one of {', '.join(STRATEGIES)}", path, line('strategy'), 'strategy')
        if not 0 < step.p <= 1:
            raise ChainSpecError(f"p must lie in (0, 1], got {step.p}", path, line('p'), 'p')

        if step.strategy == EXHAUSTIVE_FINAL:
            if not step.stored:
                raise ChainSpecError("exhaustive-final needs a stored set", path, number, 'stored')
            if index != k:
                raise ChainSpecError("exhaustive-final must be the last step", path, line('strategy'), 'strategy')
        elif step.membership is None:
            raise ChainSpecError("missing field", path, number, 'membership')

        if step.strategy == RANDOM and step.sampler is None:
            raise ChainSpecError("random search needs a sampler", path, number, 'sampler')
        if step.strategy == COSET_REPS:
            if not step.transversal:
                raise ChainSpecError("coset-reps needs a transversal", path, number, 'transversal')
            if step.n is None or not 1 <= step.n <= len(step.transversal):
                raise ChainSpecError(f"need 1 <= n <= k = {len(step.transversal)}, got n = {step.n}",
                                     path, line('n'), 'n')

        test = step.membership
        if test is not None:
            for w in test.witnesses:
                defined(w, line('membership'), 'membership', allow_identity=test.kind in (STORED_SET, NORMALIZER))
            if test.kind == CYCLIC_NORMALIZER and test.order < 2:
                raise ChainSpecError(f"cyclic-normalizer order must be at least 2, got {test.order}",
                                     path, line('membership'), 'membership')
            if test.kind == NORMALIZER:
                for g in test.generators:
                    defined(g, line('membership'), 'membership')
            if test.kind == ORDERS:
                if not 0 < test.p0 <= 1:
                    raise ChainSpecError(f"p0 must lie in (0, 1], got {test.p0}", path, line('membership'), 'membership')
                if min(test.orders) < 1:
                    raise ChainSpecError("orders must be positive", path, line('membership'), 'membership')
                for g in test.generators:
                    defined(g, line('membership'), 'membership')

        if step.sampler is not None and step.sampler != (AMBIENT,):
            for g in step.sampler:
                defined(g, line('sampler'), 'sampler')
        for key, group in (('transversal', step.transversal), ('stored', step.stored),
                           ('target', step.target), ('t-set', step.t_set)):
            for g in group:
                defined(g, line(key), key)

        for n, shortcut in shortcuts:
            if not index < shortcut.jump <= k + 1:
                raise ChainSpecError(f"shortcut must jump forward to a step in {index + 1}..{k + 1}, got {shortcut.jump}",
                                     path, n, 'shortcut')
            defined(shortcut.correction, n, 'shortcut')

    if previous_stage != len(stages):
        raise ChainSpecError(f"stage {previous_stage + 1} has no steps", path, None, 'stage')

def load_chain_spec(path: str) -> ChainSpec:
    with open(path) as f:
        return parse_chain_spec(f.read(), path)

def _fraction_text(p: Fraction) -> str:
    return str(Fraction(p))

def serialize_chain_spec(spec: ChainSpec) -> str:
    out = ["[chain]", f"name {spec.name}", f"group {spec.group}", f"generators {spec.slots}"]
    if spec.description:
        out.append(f"description {spec.description}")

    for name, element in spec.elements.items():
        out += ["", f"[element {name}]"]
        if element.order is not None:
            out.append(f"order {element.order}")
        out.append(element.word.to_text())

    for stage in spec.stages:
        out += ["", f"[stage {stage.index}]"]
        if stage.conjugator is not None:
            out += [f"conjugator {stage.conjugator}", f"t0 {IDENTITY_NAME}"]
        if stage.label:
            out.append(f"label {stage.label}")

    for step in spec.steps:
        out += ["", f"[step {step.index}]", f"stage {step.stage}", f"strategy {step.strategy}",
                f"p {_fraction_text(step.p)}"]
        test = step.membership
        if test is not None:
            if test.kind == ORDERS:
                out.append(f"membership {ORDERS} I={','.join(map(str, test.orders))} "
                           f"p0={_fraction_text(test.p0)} gens={','.join(test.generators)}")
            elif test.kind == CYCLIC_NORMALIZER:
                out.append(f"membership {test.kind} {test.witnesses[0]} {test.order}")
            elif test.kind == NORMALIZER:
                out.append(f"membership {NORMALIZER} gens={','.join(test.generators)} {' '.join(test.witnesses)}")
            else:
                out.append(f"membership {test.kind} {' '.join(test.witnesses)}")
        if step.sampler is not None:
            out.append(f"sampler {' '.join(step.sampler)}")
        if step.transversal:
            out.append(f"transversal {' '.join(step.transversal)}")
        if step.n is not None:
            out.append(f"n {step.n}")
        if step.stored:
            out.append(f"stored {' '.join(step.stored)}")
        if step.target:
            out.append(f"target {' '.join(step.target)}")
        if step.t_set != (IDENTITY_NAME,):
            out.append(f"t-set {' '.join(step.t_set)}")
        for s in step.shortcuts:
            out.append(f"shortcut {s.match} {s.jump} {s.correction}")
        if step.label:
            out.append(f"label {step.label}")

    return "\n".join(out) + "\n"

def write_chain_spec(spec: ChainSpec, path: str):
    with open(path, 'w') as f:
        f.write(serialize_chain_spec(spec))
