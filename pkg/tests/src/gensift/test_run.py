import pytest

from bench_worker import HEADER
from chains.spec import load_chain_spec
from common import DEFAULT_EPSILON, EXIT_OK, EXIT_USAGE
from oracle.reconstruct import BUILDERS
from run import build_parser, main, make_args

def test_usage_errors():
    assert(main([]) == EXIT_USAGE)
    assert(main(['sift', '--random']) == EXIT_USAGE)
    assert(main(['sift', '--chain', 'm11-2s4']) == EXIT_USAGE)
    assert(main(['bench', '--chain', 'm11-2s4', '--trials', 'many']) == EXIT_USAGE)
    assert(main(['--help']) == EXIT_OK)

def test_unknown_chain_and_group():
    assert(main(['bench', '--chain', 'hs-1', '--trials', '1']) == EXIT_USAGE)
    assert(main(['random', '--group', 'no-such-group']) == EXIT_USAGE)

def test_make_args(tmp_path):
    config = tmp_path / 'gensift.yaml'
    config.write_text("seed: 5\nburn-in: 50\ntrials: 7\n")
    namespace = build_parser().parse_args(['bench', '--chain', 'm11-2s4', '--config', str(config), '--seed', '9'])
    args = make_args(namespace)
    assert(args.seed == 9)
    assert(args.burn_in == 50)
    assert(args.trials == 7)
    assert(args.epsilon == DEFAULT_EPSILON)
    assert(args.chain == 'm11-2s4')

def test_bad_config(tmp_path):
    config = tmp_path / 'bad.yaml'
    config.write_text("- just\n- a list\n")
    assert(main(['random', '--group', 's5', '--config', str(config)]) == EXIT_USAGE)

def test_random_is_deterministic(capsys):
    assert(main(['random', '--group', 's5', '--count', '3', '--seed', '4']) == EXIT_OK)
    first = capsys.readouterr().out
    assert(main(['random', '--group', 's5', '--count', '3', '--seed', '4']) == EXIT_OK)
    assert(capsys.readouterr().out == first)
    assert(sum(line.startswith('# element') for line in first.splitlines()) == 3)
    assert(main(['random', '--group', 's5', '--count', '3', '--seed', '5']) == EXIT_OK)
    assert(capsys.readouterr().out != first)

def test_sift_random(capsys):
    assert(main(['sift', '--chain', 'm11-2s4', '--random', '--seed', '3', '--epsilon', '0.0001']) == EXIT_OK)
    out = capsys.readouterr().out.strip().splitlines()
    assert(out[0].startswith('slots=2 result='))
    assert(out[-1] == 'VERIFIED gx=1')

def test_sift_element(tmp_path, capsys):
    element = tmp_path / 'g.slp'
    element.write_text("slots=2 result=2\nMUL 0 1\n")
    assert(main(['sift', '--chain', 'm11-l211', '--element', str(element)]) == EXIT_OK)
    assert(capsys.readouterr().out.strip().endswith('VERIFIED gx=1'))

def test_bench(capsys):
    assert(main(['bench', '--chain', 'm11-l211', '--trials', '10', '--seed', '2']) == EXIT_OK)
    lines = capsys.readouterr().out.splitlines()
    assert(lines[0] == HEADER)
    assert(lines[1].split('\t')[:3] == ['m11', 'm11-l211', '10'])

def test_verify(capsys):
    assert(main(['verify', '--recipe', 'm11-2s4']) == EXIT_OK)
    out = capsys.readouterr().out
    assert("CLAIM m11-2s4.stage1.witness-centralizer EXPECTED 48 COMPUTED 48 PASS" in out)
    assert("CLAIM m11-2s4.step1.p EXPECTED 13/165 COMPUTED - UNCERTIFIED" in out)
    assert(main(['verify', '--identities']) == EXIT_OK)
    assert(len(capsys.readouterr().out.splitlines()) == 5)
    assert(main(['verify']) == EXIT_USAGE)

def test_build_chain(tmp_path, m11_sylow_spec):
    path = tmp_path / 'sylow.chain'
    assert(main(['build-chain', 'm11-l211', '--output', str(path)]) == EXIT_OK)
    assert(load_chain_spec(str(path)).steps == m11_sylow_spec.steps)
    assert(main(['verify', '--chain', str(path), '--mode', 'static']) == EXIT_OK)

@pytest.mark.slow
def test_verify_hs_recipe(capsys):
    assert(main(['verify', '--recipe', 'hs-1']) == EXIT_OK)
    out = capsys.readouterr().out
    assert("CLAIM hs-1.stage1.witness-centralizer EXPECTED 16 COMPUTED 16 PASS" in out)
    assert("CLAIM hs-1.step1.p EXPECTED 1/88 COMPUTED - UNCERTIFIED" in out)

@pytest.mark.slow
def test_build_every_chain(tmp_path):
    assert(main(['build-chain', 'all', '--output', str(tmp_path)]) == EXIT_OK)
    assert(sorted(p.name for p in tmp_path.iterdir()) == sorted(f"{name}.chain" for name in BUILDERS))
    assert(load_chain_spec(str(tmp_path / 'j2-1.chain')).group == 'j2')

def test_compare(capsys):
    assert(main(['compare', '--chain', 'm11-2s4', '--step', '2', '--invocations', '50']) == EXIT_OK)
    lines = capsys.readouterr().out.splitlines()
    assert(len(lines) == 3)
    assert(lines[1].split('\t')[:3] == ['2', '12', '2'])
