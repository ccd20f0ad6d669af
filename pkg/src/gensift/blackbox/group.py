"""
Black-box groups given by standard generators, and the generator file format.

    perm <degree>          mat <dim> <p>
    <images of gen 0>      <row-major entries of gen 0>
    <images of gen 1>      ...

Blank lines and anything after '#' are ignored.
"""

import logging
import os

from blackbox.element import GroupElement
from blackbox.matrix import MatrixElement
from blackbox.permutation import Permutation
from errors import StructuralError

class BlackBoxGroup:
    """ Group given by an ordered, nonempty list of standard generators.

    Generator order matters: slot i of every straight-line program refers to generators[i].

    Args:
        generators (list[GroupElement]): elements sharing one kind and shape
        label (str): display name
    """
    def __init__(self, generators: list, label: str = ''):
        generators = list(generators)
        if not generators:
            raise StructuralError("a black-box group needs at least one generator")
        for g in generators:
            if not isinstance(g, GroupElement):
                raise StructuralError(f"not a group element: {g!r}")
            generators[0].check_shape(g)

        self.generators = generators
        self.label = label

    @property
    def rank(self) -> int:
        """Number of standard generators (the slot count of its SLPs)."""
        return len(self.generators)

    @property
    def kind(self) -> str:
        return self.generators[0].kind

    @property
    def shape(self) -> tuple:
        return self.generators[0].shape

    def identity(self) -> GroupElement:
        return self.generators[0].identity()

    def __len__(self):
        return len(self.generators)

    def __repr__(self):
        return f"BlackBoxGroup({self.label!r}, {self.shape}, {self.rank} generators)"

def _content_lines(text: str):
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if line:
            yield number, line

def parse_generators(text: str, label: str = '', source: str = '<string>') -> BlackBoxGroup:
    lines = list(_content_lines(text))
    if not lines:
        raise StructuralError(f"{source}: empty generator file")

    number, header = lines[0]
    fields = header.split()
    try:
        if fields[0] == 'perm' and len(fields) == 2:
            degree = int(fields[1])
            make = lambda values: Permutation(values)
            width = degree
        elif fields[0] == 'mat' and len(fields) == 3:
            dim, p = int(fields[1]), int(fields[2])
            make = lambda values: MatrixElement([values[r * dim:(r + 1) * dim] for r in range(dim)], p)
            width = dim * dim
        else:
            raise ValueError
    except ValueError:
        raise StructuralError(f"{source}: line {number}: expected 'perm <degree>' or 'mat <dim> <p>', got {header!r}")

    generators = []
    for number, line in lines[1:]:
        try:
            values = [int(v) for v in line.split()]
        except ValueError:
            raise StructuralError(f"{source}: line {number}: non-integer entry")
        if len(values) != width:
            raise StructuralError(f"{source}: line {number}: expected {width} entries, got {len(values)}")
        try:
            generators.append(make(values))
        except StructuralError as e:
            raise StructuralError(f"{source}: line {number}: {e}")

    return BlackBoxGroup(generators, label)

def read_generators(path: str, label: str = None) -> BlackBoxGroup:
    with open(path) as f:
        text = f.read()
    if label is None:
        label = os.path.splitext(os.path.basename(path))[0]
    group = parse_generators(text, label, source=path)
    logging.debug(f"(blackbox): read {group.rank} generators of shape {group.shape} from {path}")
    return group

def format_generators(group: BlackBoxGroup) -> str:
    if group.kind == 'permutation':
        lines = [f"perm {group.generators[0].degree}"]
        lines += [" ".join(map(str, g.images)) for g in group.generators]
    else:
        first = group.generators[0]
        lines = [f"mat {first.dimension} {first.characteristic}"]
        lines += [" ".join(map(str, g.entries.ravel().tolist())) for g in group.generators]
    return "\n".join(lines) + "\n"

def write_generators(group: BlackBoxGroup, path: str):
    with open(path, 'w') as f:
        f.write(format_generators(group))

def permutation_module_gf2(group: BlackBoxGroup, p: int = 2) -> BlackBoxGroup:
    """ Matrix representation on the natural permutation module modulo the all-ones vector.

    Basis vectors are e_1..e_{n-1}; e_n is identified with -(e_1 + ... + e_{n-1}). Row i of
    the image of a permutation s is therefore e_{s(i)}, or the constant row p - 1 when s(i) = n.
    For M11 on 11 points this is the 10-dimensional representation over GF(2).

    Args:
        group (BlackBoxGroup): permutation group of degree n >= 2
        p (int): characteristic, 2 by default

    Returns:
        BlackBoxGroup: same generators, in the same order, as (n-1) x (n-1) matrices
    """
    if group.kind != 'permutation':
        raise StructuralError("the permutation module needs permutation generators")

    n = group.generators[0].degree
    if n < 2:
        raise StructuralError("the permutation module needs degree at least 2")

    matrices = []
    for g in group.generators:
        rows = []
        for i in range(1, n):
            image = g(i)
            if image == n:
                rows.append([p - 1] * (n - 1))
            else:
                rows.append([1 if j == image else 0 for j in range(1, n)])
        matrices.append(MatrixElement(rows, p))

    label = f"{group.label}_gf{p}" if group.label else f"gf{p}"
    return BlackBoxGroup(matrices, label)
