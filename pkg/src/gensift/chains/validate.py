"""
Chain validation reports.

Static mode compiles the chain and checks what is cheap: declared element orders and
duplicate-free transversals. Oracle mode adds brute-force certification of every p, p0,
n, T-set and landing claim when the group can be enumerated; otherwise those claims are
reported UNCERTIFIED.
"""

import logging
from fractions import Fraction

from blackbox.group import BlackBoxGroup
from blackbox.operations import has_order_in
from common import COSET_REPS, DEFAULT_ENUMERATION_CAP, FAIL, ORDERS, PASS, default_args
from chains.compile import compile_chain, evaluate_elements
from chains.spec import ChainSpec
from errors import CompileError, ContractError, EnumerationOverflow
from oracle.enumeration import EnumeratedGroup
from oracle.sifting import Claim, certify_chain, exact_claim, uncertified_claim

STATIC = 'static'
ORACLE = 'oracle'
MODES = (STATIC, ORACLE)

def _text(value) -> str:
    if value is None:
        return '-'
    return str(Fraction(value))

def format_claim(claim: Claim) -> str:
    return f"CLAIM {claim.name} EXPECTED {_text(claim.expected)} COMPUTED {_text(claim.computed)} {claim.verdict}"

def format_claims(claims: list) -> str:
    return "\n".join(format_claim(c) for c in claims)

def has_failures(claims: list) -> bool:
    return any(c.verdict == FAIL for c in claims)

def _uncertified_parameters(spec: ChainSpec) -> list:
    claims = []
    for step in spec.steps:
        claims.append(uncertified_claim(f"step{step.index}.p", step.p))
        if step.membership is not None and step.membership.kind == ORDERS:
            claims.append(uncertified_claim(f"step{step.index}.p0", step.membership.p0))
    return claims

def static_claims(spec: ChainSpec, group: BlackBoxGroup, args: dict = None):
    """ Compile and check declared orders and transversals.

    Returns:
        tuple: (claims, compiled chain or None)
    """
    try:
        chain = compile_chain(spec, group, args)
    except CompileError as e:
        logging.warning(f"(chains): {spec.name} does not compile: {e}")
        return [Claim('chain.compile', 1, 0, FAIL)], None

    claims = [Claim('chain.compile', 1, 1, PASS)]
    values = evaluate_elements(spec, group)
    for name, element in spec.elements.items():
        if element.order is not None:
            ok = has_order_in(values[name][0], {element.order})
            claims.append(exact_claim(f"element.{name}.order", element.order, element.order if ok else None))

    for step in spec.steps:
        if step.strategy == COSET_REPS:
            distinct = len({values[t][0].key for t in step.transversal})
            claims.append(exact_claim(f"step{step.index}.k", len(step.transversal), distinct))
    return claims, chain

def validate_chain(spec: ChainSpec, group: BlackBoxGroup, mode: str = STATIC, args: dict = None,
                   G: EnumeratedGroup = None) -> list:
    """ Validation report for a chain.

    Args:
        spec (ChainSpec): chain to check
        group (BlackBoxGroup): standard generators it is compiled against
        mode (str): 'static' or 'oracle'
        args (dotdict): uses enumeration_cap, profile_cap, jobs, progress and seed
        G (EnumeratedGroup, optional): enumeration of the group, to reuse one already built

    Returns:
        list[Claim]: never empty; FAIL claims are never dropped
    """
    if mode not in MODES:
        raise ContractError(f"mode must be one of {', '.join(MODES)}, got {mode!r}")
    args = args if args is not None else default_args()

    claims, chain = static_claims(spec, group, args)
    if chain is None:
        return claims
    if mode == STATIC:
        return claims + _uncertified_parameters(spec)

    try:
        if G is None:
            G = EnumeratedGroup(group.generators,
                                cap=args.get('enumeration_cap', DEFAULT_ENUMERATION_CAP),
                                label=group.label,
                                jobs=args.get('jobs', 1),
                                progress=args.get('progress', False))
        claims += certify_chain(chain, G, args)
    except EnumerationOverflow as e:
        logging.warning(f"(chains): {spec.name}: {e}; enumeration skipped, parameters uncertified")
        claims += _uncertified_parameters(spec)

    failed = sum(c.verdict == FAIL for c in claims)
    logging.info(f"(chains): {spec.name} validated in {mode} mode, {len(claims)} claims, {failed} failed")
    return claims
