from fractions import Fraction

import pytest

from bench_worker import HEADER, BenchReport, BenchWorker, bench, compare_strategies, measure_sampler_costs
from common import default_args
from errors import ContractError

def _args(**kwargs):
    args = default_args()
    args.update(kwargs)
    return args

def test_report_text():
    report = BenchReport('M11', 'm11-2s4', 2)
    report.trials = 4
    report.mults = 500
    report.retries[0][3] = 4
    report.xi, report.xi_prime = Fraction(2), 100
    lines = report.to_text().splitlines()
    assert(lines[0] == HEADER)
    assert(lines[1].split('\t') == ['M11', 'm11-2s4', '4', '0.000', '125.00', '0'])
    assert(lines[2] == "# xi 2.00 xi' 100 rho 1")
    assert(lines[3] == "# step 1 retries 3:4")
    assert(len(lines) == 4)

def test_merge():
    a = BenchReport('G', 'c', 1)
    b = BenchReport('G', 'c', 1)
    a.trials, a.mults, a.failures = 3, 30, 1
    b.trials, b.mults = 2, 20
    a.retries[0][1] = 3
    b.retries[0][1] = 1
    b.retries[0][2] = 1
    a.merge(b)
    assert((a.trials, a.mults, a.failures) == (5, 50, 1))
    assert(a.avg_mults == 10)
    assert(dict(a.retries[0]) == {1: 4, 2: 1})

def test_zero_trials(m11_centralizer_spec, m11):
    report = bench(m11_centralizer_spec, m11, _args(trials=0))
    assert(report.trials == 0)
    assert(report.avg_mults == 0.0)
    assert(report.xi is None)
    assert(report.to_text().splitlines()[0] == HEADER)

def test_negative_trials(m11_centralizer_spec, m11):
    with pytest.raises(ContractError):
        bench(m11_centralizer_spec, m11, _args(trials=-1))

def test_shards(m11_centralizer_spec, m11):
    shards = BenchWorker(m11_centralizer_spec, m11, _args(trials=10, jobs=3)).shards()
    assert([s[4] for s in shards] == [4, 3, 3])
    assert(len({s[3].entropy for s in shards}) == 1)
    assert(len({tuple(s[3].spawn_key) for s in shards}) == 3)
    assert([s[4] for s in BenchWorker(m11_centralizer_spec, m11, _args(trials=2, jobs=8)).shards()] == [1, 1])

def test_sampler_costs(m11):
    xi, xi_prime = measure_sampler_costs(m11, _args())
    assert(xi == 2)
    assert(xi_prime == 100)

def test_small_bench(m11_centralizer_spec, m11):
    report = bench(m11_centralizer_spec, m11, _args(trials=50, seed=5))
    assert(report.trials == 50)
    assert(report.failures <= 3)
    assert(report.mults > 0)
    assert(sum(report.retries[0].values()) == 50)
    again = bench(m11_centralizer_spec, m11, _args(trials=50, seed=5))
    assert((again.mults, again.failures) == (report.mults, report.failures))
    assert(again.retries == report.retries)

def test_compare_strategies(m11_centralizer_spec, m11):
    result = compare_strategies(m11_centralizer_spec, m11, 2, invocations=500, args=_args(seed=2))
    assert(result.invocations == 500)
    assert((result.k, result.n) == (12, 2))
    assert(result.coset_expected == Fraction(13, 3))
    assert(result.random_expected == 6)
    assert(result.coset_mean < result.random_mean)
    assert(result.coset_mean <= 12)
    assert(result.to_text().splitlines()[1].split('\t')[4] == 'coset-reps')

def test_compare_needs_coset_step(m11_centralizer_spec, m11):
    with pytest.raises(ContractError):
        compare_strategies(m11_centralizer_spec, m11, 1, invocations=1)
    with pytest.raises(ContractError):
        compare_strategies(m11_centralizer_spec, m11, 9, invocations=1)

@pytest.mark.slow
def test_m11_centralizer_bench_cost(m11_centralizer_spec, m11):
    report = bench(m11_centralizer_spec, m11, _args(trials=1000))
    assert(report.failures <= 30)
    assert(116 * 0.65 <= report.avg_mults <= 116 * 1.35)

@pytest.mark.slow
def test_m11_sylow_bench_cost(m11_sylow_spec, m11):
    report = bench(m11_sylow_spec, m11, _args(trials=1000))
    assert(report.failures == 0)
    assert(187 * 0.65 <= report.avg_mults <= 187 * 1.35)

@pytest.mark.slow
def test_parallel_bench(m11_centralizer_spec, m11):
    report = bench(m11_centralizer_spec, m11, _args(trials=200, jobs=2))
    assert(report.trials == 200)
    assert(report.failures <= 10)

def test_m11_centralizer_cost_in_band(m11_centralizer_spec, m11):
    report = bench(m11_centralizer_spec, m11, _args(trials=200, seed=31))
    assert(report.failures <= 10)
    assert(116 * 0.65 <= report.avg_mults <= 116 * 1.35)

def test_m11_sylow_cost_in_band(m11_sylow_spec, m11):
    report = bench(m11_sylow_spec, m11, _args(trials=200, seed=32))
    assert(report.failures == 0)
    assert(187 * 0.65 <= report.avg_mults <= 187 * 1.35)

@pytest.mark.slow
def test_compare_strategies_full(m11_centralizer_spec, m11):
    result = compare_strategies(m11_centralizer_spec, m11, 2, args=_args(seed=3))
    assert(result.invocations == 10**4)
    assert(abs(result.coset_mean - 13 / 3) <= 0.1 * 13 / 3)
    assert(abs(result.random_mean - 6) <= 0.6)
