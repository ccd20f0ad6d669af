import os

import pytest

from blackbox.group import BlackBoxGroup, format_generators, parse_generators, read_generators, write_generators
from blackbox.permutation import Permutation
from common import GENERATORS_DIR
from errors import StructuralError

s3_text = """
# S3
perm 3
2 1 3
2 3 1
"""

def test_parse_permutations():
    group = parse_generators(s3_text, 's3')
    assert(group.rank == 2)
    assert(group.kind == 'permutation')
    assert(group.generators[0] == Permutation.from_cycles(3, [(1, 2)]))

def test_parse_matrices():
    group = parse_generators("mat 2 2\n1 1 0 1\n0 1 1 0\n")
    assert(group.rank == 2)
    assert(group.kind == 'matrix')

def test_bad_header():
    with pytest.raises(StructuralError):
        parse_generators("perms 3\n1 2 3\n")

def test_wrong_width():
    with pytest.raises(StructuralError):
        parse_generators("perm 3\n1 2\n")

def test_empty_file():
    with pytest.raises(StructuralError):
        parse_generators("# nothing\n")

def test_mixed_generators():
    with pytest.raises(StructuralError):
        BlackBoxGroup([Permutation([2, 1]), Permutation([2, 1, 3])])
    with pytest.raises(StructuralError):
        BlackBoxGroup([])

def test_write_and_read(tmp_path):
    group = parse_generators(s3_text, 's3')
    path = os.path.join(tmp_path, 's3.gens')
    write_generators(group, path)
    again = read_generators(path)
    assert(again.label == 's3')
    assert(again.generators == group.generators)
    assert(format_generators(again) == format_generators(group))

def test_shipped_generator_files():
    for name, degree in [('m11', 11), ('m12', 12), ('m22', 22), ('s4', 4), ('s5', 5), ('s6', 6)]:
        group = read_generators(os.path.join(GENERATORS_DIR, f"{name}.gens"))
        assert(group.shape == ('permutation', degree))
