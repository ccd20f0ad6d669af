"""
Chain recipes: YAML transcriptions of the published chain tables.

A recipe records, per step, the subgroup shape, |T_i|, p, the strategy (R or C), a
description of the membership test and, for element-order tests, I, p0 and the number
of exponents the test examines. Recipes are data for reports; they carry no words.
"""

import logging
import os
from fractions import Fraction

import yaml

from blackbox.group import BlackBoxGroup
from blackbox.operations import element_order, order_closure, power
from blackbox.permutation import PERMUTATION, sympy_group
from common import DEFAULT_SEED, FAIL, PASS, RECIPES_DIR
from errors import ChainSpecError, ContractError
from oracle.sifting import Claim, exact_claim, uncertified_claim
from randomness import ProductReplacement, make_rng

STRATEGY_CODES = {'R': 'random', 'C': 'coset-reps'}

# Pseudo-random elements examined per conjugating class
DEFAULT_WITNESS_TRIES = 200

def list_recipes() -> list:
    return sorted(os.path.splitext(f)[0] for f in os.listdir(RECIPES_DIR) if f.endswith('.yaml'))

def recipe_path(name_or_path: str) -> str:
    if os.path.exists(name_or_path):
        return name_or_path
    return os.path.join(RECIPES_DIR, f"{name_or_path}.yaml")

def _require(mapping: dict, key: str, path: str, where: str):
    if key not in mapping:
        raise ChainSpecError(f"{where}: missing field", path, field=key)
    return mapping[key]

def _fraction(value, path: str, field: str) -> Fraction:
    try:
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError):
        raise ChainSpecError(f"not a rational number: {value!r}", path, field=field)

def load_recipe(name_or_path: str) -> dict:
    """ Read and check a recipe.

    Returns:
        dict: the YAML mapping, with every p and p0 converted to Fraction and each step
            tagged with its 1-based 'stage'

    Raises:
        ChainSpecError: for a missing file or field, or a malformed value
    """
    path = recipe_path(name_or_path)
    try:
        with open(path) as f:
            recipe = yaml.safe_load(f)
    except OSError as e:
        raise ChainSpecError(f"cannot read recipe: {e}", path)
    except yaml.YAMLError as e:
        raise ChainSpecError(f"not valid YAML: {e}", path)

    if not isinstance(recipe, dict):
        raise ChainSpecError("a recipe is a mapping", path)
    for key in ('name', 'group', 'stages'):
        _require(recipe, key, path, 'recipe')

    steps = []
    for number, stage in enumerate(recipe['stages'], start=1):
        for step in _require(stage, 'steps', path, f"stage {number}"):
            for key in ('index', 'strategy', 'p'):
                _require(step, key, path, f"stage {number}")
            if step['strategy'] not in STRATEGY_CODES:
                raise ChainSpecError(f"strategy must be one of {', '.join(STRATEGY_CODES)}", path, field='strategy')
            step['p'] = _fraction(step['p'], path, 'p')
            if 'p0' in step:
                step['p0'] = _fraction(step['p0'], path, 'p0')
                _require(step, 'orders', path, f"step {step['index']}")
            step['stage'] = number
            steps.append(step)

    if [s['index'] for s in steps] != list(range(1, len(steps) + 1)):
        raise ChainSpecError("steps must be numbered 1..k", path, field='index')
    recipe['steps'] = steps
    logging.debug(f"(chains): loaded recipe {recipe['name']} with {len(steps)} steps")
    return recipe

def class_witness(group: BlackBoxGroup, order: int, centralizer_order: int, rng,
                  tries: int = DEFAULT_WITNESS_TRIES) -> tuple:
    """ Look among powers of pseudo-random elements for one of the given order whose
    centralizer has the given order.

    Centralizer orders come from sympy's Schreier-Sims machinery, so the generators must
    be permutations.

    Returns:
        tuple: (the witness or None, sorted centralizer orders seen for elements of that order)

    Raises:
        ContractError: for matrix generators
    """
    if group.kind != PERMUTATION:
        raise ContractError(f"class witnesses need permutation generators, got {group.kind}")
    G = sympy_group(group.generators)
    sampler = ProductReplacement(group, rng=rng, track_words=False)
    seen = {}
    for _ in range(tries):
        g, _ = sampler.next()
        n = element_order(g)
        if n % order:
            continue
        x = power(g, n // order)
        if x.key not in seen:
            seen[x.key] = G.centralizer(sympy_group([x])).order()
        if seen[x.key] == centralizer_order:
            return x, sorted(set(seen.values()))
    return None, sorted(set(seen.values()))

def _in_unit_interval(name: str, value: Fraction) -> Claim:
    return Claim(name, value, value, PASS if 0 < value <= 1 else FAIL)

def validate_recipe(recipe: dict, group: BlackBoxGroup = None, seed: int = DEFAULT_SEED) -> list:
    """ Report a recipe: parameters UNCERTIFIED, arithmetic sanity checks certified.

    With the group's generators, each conjugating class is checked to exist: some element
    of the stated order must have a centralizer of the stated order. Without them that
    check is UNCERTIFIED too.

    Returns:
        list[Claim]
    """
    name = recipe['name']
    rng = make_rng(seed)
    claims = []
    for number, stage in enumerate(recipe['stages'], start=1):
        conjugator = stage.get('conjugator')
        if conjugator is None:
            continue
        claim = f"{name}.stage{number}.witness-centralizer"
        expected = conjugator.get('centralizer_order')
        if group is None or expected is None:
            claims.append(uncertified_claim(claim, expected))
            continue
        witness, seen = class_witness(group, conjugator['order'], expected, rng)
        if witness is None:
            logging.warning(f"(chains): {name}: no {conjugator['class']} witness; centralizer orders seen {seen}")
        claims.append(exact_claim(claim, expected, expected if witness is not None else (seen[-1] if seen else None)))

    for step in recipe['steps']:
        prefix = f"{name}.step{step['index']}"
        claims.append(uncertified_claim(f"{prefix}.p", step['p']))
        claims.append(_in_unit_interval(f"{prefix}.p-range", step['p']))
        if 'p0' in step:
            claims.append(uncertified_claim(f"{prefix}.p0", step['p0']))
            claims.append(_in_unit_interval(f"{prefix}.p0-range", step['p0']))
            if 'ibar' in step:
                claims.append(exact_claim(f"{prefix}.ibar", step['ibar'],
                                          len(order_closure(frozenset(step['orders'])))))
    return claims
