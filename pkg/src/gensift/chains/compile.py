"""
Compile a chain spec against concrete standard generators.
"""

import logging

from blackbox.group import BlackBoxGroup
from blackbox.operations import has_order_in
from common import (CENTRALIZER, CENTRALIZER_ANY, COSET_REPS, CYCLIC_NORMALIZER, DEFAULT_BURN_IN,
                    DEFAULT_PR_SLOTS, IDENTITY_NAME, NORMALIZER, ORDERS, RANDOM, STORED_SET)
from chains.spec import AMBIENT, ChainSpec, StepSpec
from errors import CompileError, ContractError, StructuralError
from sift.basic_sift import CosetRepsSiftStep, ExhaustiveFinalStep, RandomSiftStep, Shortcut
from sift.engine import SiftChain
from sift.membership import (CentralizerAnyTest, CentralizerTest, ConjugatesTest, CyclicNormalizerTest,
                             OrdersTest, StoredSetTest, SubgroupNormalizerTest, default_sampler_factory)
from slp import StraightLineProgram

def evaluate_elements(spec: ChainSpec, group: BlackBoxGroup) -> dict:
    """ Evaluate every named element once.

    Returns:
        dict: name -> (element, word), including '1'
    """
    if group.rank != spec.slots:
        raise CompileError(f"chain {spec.name} expects {spec.slots} generators, the group has {group.rank}")

    values = {IDENTITY_NAME: (group.identity(), StraightLineProgram.identity(spec.slots))}
    for name, element in spec.elements.items():
        try:
            values[name] = (element.word.evaluate(group.generators), element.word)
        except StructuralError as e:
            raise CompileError(f"element {name!r}: {e}")
    return values

def _referenced(spec: ChainSpec, step: StepSpec) -> list:
    names = list(step.transversal) + list(step.stored) + list(step.target) + list(step.t_set)
    names += [s.correction for s in step.shortcuts]
    if step.membership is not None:
        names += list(step.membership.witnesses) + list(step.membership.generators)
    if step.sampler is not None and step.sampler != (AMBIENT,):
        names += list(step.sampler)
    conjugator = spec.stage_of(step).conjugator
    if conjugator is not None:
        names.append(conjugator)
    return names

def _membership(step: StepSpec, values: dict, args: dict):
    test = step.membership
    element = lambda name: values[name][0]

    if test.kind in (CENTRALIZER, CENTRALIZER_ANY, CYCLIC_NORMALIZER):
        if any(element(w).is_identity() for w in test.witnesses):
            raise CompileError(f"{test.kind} witness evaluates to the identity", step.index)

    if test.kind == CENTRALIZER:
        return CentralizerTest(element(test.witnesses[0]))
    if test.kind == CENTRALIZER_ANY:
        return CentralizerAnyTest([element(w) for w in test.witnesses])
    if test.kind == CYCLIC_NORMALIZER:
        b = element(test.witnesses[0])
        if not has_order_in(b, {test.order}):
            raise CompileError(f"witness {test.witnesses[0]!r} does not have order {test.order}", step.index)
        return CyclicNormalizerTest(b, test.order)
    if test.kind == STORED_SET:
        return StoredSetTest([element(w) for w in test.witnesses])
    if test.kind == NORMALIZER:
        return SubgroupNormalizerTest([element(g) for g in test.generators], [element(w) for w in test.witnesses])

    factory = default_sampler_factory(args.get('burn_in', DEFAULT_BURN_IN), args.get('pr_slots', DEFAULT_PR_SLOTS))
    return OrdersTest([element(g) for g in test.generators], test.orders, test.p0, factory)

def compile_chain(spec: ChainSpec, group: BlackBoxGroup, args: dict = None) -> SiftChain:
    """ Turn a spec into an executable chain over `group`.

    All programs are evaluated once; declared element orders are checked; witnesses,
    transversals and stored sets are materialised as element lists.

    Raises:
        CompileError: naming the step whose data does not evaluate as declared
    """
    args = args if args is not None else {}
    values = evaluate_elements(spec, group)

    checked = set()
    def check_order(name: str, step: int = None):
        if name in checked or name == IDENTITY_NAME:
            return
        declared = spec.elements[name].order
        if declared is not None and not has_order_in(values[name][0], {declared}):
            raise CompileError(f"element {name!r} does not have its declared order {declared}", step)
        checked.add(name)

    samplers = {AMBIENT: (list(group.generators),
                          [StraightLineProgram.generator(spec.slots, i) for i in range(spec.slots)])}
    steps = []
    for step in spec.steps:
        for name in _referenced(spec, step):
            check_order(name, step.index)

        stage = spec.stage_of(step)
        shortcuts = [Shortcut(s.match,
                              s.jump,
                              None if s.correction == IDENTITY_NAME else values[s.correction][0],
                              None if s.correction == IDENTITY_NAME else values[s.correction][1])
                     for s in step.shortcuts]

        try:
            if step.strategy == RANDOM or step.strategy == COSET_REPS:
                test = _membership(step, values, args)
                if stage.conjugator is not None:
                    a = values[stage.conjugator][0]
                    if a.is_identity():
                        raise CompileError(f"conjugator {stage.conjugator!r} evaluates to the identity", step.index)
                    test = ConjugatesTest(a, test, key=stage.conjugator)

            if step.strategy == RANDOM:
                key = step.sampler_key
                if key not in samplers:
                    samplers[key] = ([values[g][0] for g in step.sampler], [values[g][1] for g in step.sampler])
                compiled = RandomSiftStep(test, step.p, key, shortcuts, step.label)
            elif step.strategy == COSET_REPS:
                compiled = CosetRepsSiftStep(test, step.p, [values[t] for t in step.transversal], step.n,
                                             shortcuts, step.label)
            else:
                compiled = ExhaustiveFinalStep([values[s] for s in step.stored], shortcuts, step.label)
        except ContractError as e:
            raise CompileError(str(e), step.index)

        compiled.index = step.index
        steps.append(compiled)

    for name in spec.elements:
        check_order(name)

    stages = []
    for stage in spec.stages:
        indices = [s.index - 1 for s in spec.stage_steps(stage.index)]
        stages.append((indices[0], indices[-1]))

    logging.info(f"(chains): compiled {spec.name} against {group.label or 'group'} with {len(steps)} steps")
    return SiftChain(spec.name, group, steps, stages, samplers, spec)
