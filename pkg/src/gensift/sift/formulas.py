"""
Error-budget and cost arithmetic for the basic sift steps.

Sifting parameters stay exact (Fraction); floats only appear inside the logarithms.
Logarithms are natural and ceilings are taken as written.
"""

import math
from fractions import Fraction

from blackbox.operations import order_closure
from errors import ContractError

def _check_p(p, name: str = 'p') -> Fraction:
    p = Fraction(p)
    if not 0 < p <= 1:
        raise ContractError(f"{name} must lie in (0, 1], got {p}")
    return p

def _check_epsilon(eps: float, allow_zero: bool = False):
    if not (0 <= eps < 0.5 if allow_zero else 0 < eps < 0.5):
        bounds = "[0, 1/2)" if allow_zero else "(0, 1/2)"
        raise ContractError(f"epsilon must lie in {bounds}, got {eps}")

def random_step_parameters(eps: float, p, deterministic: bool) -> tuple:
    """ Membership error e and trial budget N for random search.

    Deterministic membership: e = 0 and N = ceil(ln eps / ln(1 - p)).
    Randomized membership: e = eps·p / (2(1 - p)) and N = ceil(ln(eps/2) / ln(1 - p)).
    p = 1 always gives N = 1 (and e = eps/2 for randomized membership).

    Args:
        eps (float): step failure budget in (0, 1/2)
        p (Fraction): sifting parameter
        deterministic (bool): whether the membership test is exact

    Returns:
        tuple: (e, N)
    """
    _check_epsilon(eps)
    p = _check_p(p)

    if p == 1:
        return (0.0 if deterministic else eps / 2), 1

    log_miss = math.log(1 - float(p))
    if deterministic:
        return 0.0, math.ceil(math.log(eps) / log_miss)

    e = eps * float(p) / (2 * (1 - float(p)))
    return e, math.ceil(math.log(eps / 2) / log_miss)

def coset_step_error(eps: float, k: int, n: int, deterministic: bool) -> float:
    """ Membership error for the transversal step: 0, or min(eps·(n+1)/(k-n), 1/3).

    k = n means every representative works and the error is 1/3.
    """
    _check_epsilon(eps, allow_zero=True)
    if not 1 <= n <= k:
        raise ContractError(f"need 1 <= n <= k, got n = {n}, k = {k}")
    if deterministic:
        return 0.0
    if k == n:
        return 1 / 3
    return min(eps * (n + 1) / (k - n), 1 / 3)

def orders_test_trials(e: float, p0) -> int:
    """N = ceil(ln(1/e) / ln(1/(1 - p0))) draws for the element-order test."""
    if not 0 < e < 0.5:
        raise ContractError(f"order test error must lie in (0, 1/2), got {e}")
    p0 = _check_p(p0, 'p0')
    if p0 == 1:
        return 1
    return math.ceil(math.log(1 / e) / math.log(1 / (1 - float(p0))))

def expected_trials_random(p) -> Fraction:
    """Expected draws until success for random search, 1/p (k/n when p = n/k)."""
    return 1 / _check_p(p)

def expected_trials_coset(k: int, n: int) -> Fraction:
    """Expected representatives tried without replacement before the first hit, (k+1)/(n+1)."""
    if not 1 <= n <= k:
        raise ContractError(f"need 1 <= n <= k, got n = {n}, k = {k}")
    return Fraction(k + 1, n + 1)

def random_step_cost_bound(eps: float, p, xi: float, rho: float, nu: float = 0.0, deterministic: bool = True) -> float:
    """N·(xi + rho + nu): draw, multiply and test, N times."""
    _, trials = random_step_parameters(eps, p, deterministic)
    return trials * (xi + rho + nu)

def orders_test_cost_bound(e: float, p0, orders, xi_prime: float, rho: float) -> float:
    """ N·(xi' + log2(max I)·|closure(I)|·rho) for one element-order membership call.

    xi' is the cost of one draw from a fresh sampler of <K, y>.
    """
    orders = frozenset(orders)
    return orders_test_trials(e, p0) * (xi_prime + math.log2(max(orders)) * len(order_closure(orders)) * rho)

def orders_sift_cost_bound(eps: float, u: int, p0, orders, xi: float, xi_prime: float, rho: float) -> float:
    """ Random search from H to K = a subgroup of index u, with the element-order test as membership.

    Here p = 1/u, and the membership error is the randomized-step value of e for that p.
    """
    p = Fraction(1, u)
    e, trials = random_step_parameters(eps, p, deterministic=False)
    return trials * (xi + rho + orders_test_cost_bound(e, p0, orders, xi_prime, rho))
