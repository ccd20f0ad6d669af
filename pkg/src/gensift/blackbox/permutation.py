"""
Permutations on {1..n} as black-box elements.
"""

from sympy.combinatorics import Permutation as SympyPermutation, PermutationGroup

from blackbox.element import GroupElement
from errors import StructuralError

PERMUTATION = 'permutation'

# Degrees up to this bound keep their images in one byte each
_BYTE_DEGREE = 256

def _pack(images, degree: int = None):
    degree = len(images) if degree is None else degree
    return bytes(images) if degree <= _BYTE_DEGREE else tuple(images)

class Permutation(GroupElement):
    """ Permutation stored as its 0-based images: bytes up to degree 256, a tuple beyond.

    Externally everything is 1-based: `Permutation([2, 1, 3])` swaps the points 1 and 2,
    and `p(1)` returns 2.

    Args:
        images: image of each point 1..n, 1-based.
    """
    __slots__ = ('_img',)

    def __init__(self, images, one_based: bool = True):
        shift = 1 if one_based else 0
        try:
            img = tuple(int(i) - shift for i in images)
        except (TypeError, ValueError):
            raise StructuralError(f"permutation images must be integers: {images!r}")

        if len(img) == 0:
            raise StructuralError("permutation of degree 0")
        if sorted(img) != list(range(len(img))):
            raise StructuralError(f"images are not a bijection on 1..{len(img)}: {list(images)}")

        self._img = _pack(img)

    @classmethod
    def _trusted(cls, img: tuple) -> 'Permutation':
        p = cls.__new__(cls)
        p._img = img
        return p

    @classmethod
    def from_cycles(cls, degree: int, cycles) -> 'Permutation':
        """Build from 1-based cycles, e.g. `from_cycles(4, [(1, 2, 3, 4)])`."""
        img = list(range(degree))
        seen = set()
        for cycle in cycles:
            for point in cycle:
                if not 1 <= point <= degree or point in seen:
                    raise StructuralError(f"bad cycle {cycle} for degree {degree}")
                seen.add(point)
            for u, v in zip(cycle, cycle[1:] + cycle[:1]):
                img[u - 1] = v - 1
        return cls._trusted(_pack(img))

    @property
    def kind(self) -> str:
        return PERMUTATION

    @property
    def degree(self) -> int:
        return len(self._img)

    @property
    def shape(self) -> tuple:
        return (PERMUTATION, len(self._img))

    @property
    def key(self):
        return self._img

    @property
    def sort_key(self):
        return self._img

    @property
    def images(self) -> list:
        return [i + 1 for i in self._img]

    def __call__(self, point: int) -> int:
        return self._img[point - 1] + 1

    def _multiply(self, other: 'Permutation') -> 'Permutation':
        # Apply self, then other
        return Permutation._trusted(_pack(map(other._img.__getitem__, self._img), len(self._img)))

    def _invert(self) -> 'Permutation':
        inv = [0] * len(self._img)
        for i, j in enumerate(self._img):
            inv[j] = i
        return Permutation._trusted(_pack(inv))

    def identity(self) -> 'Permutation':
        return Permutation._trusted(_pack(range(len(self._img))))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self._img))

    def cycles(self) -> list:
        """Nontrivial cycles, 1-based, each starting at its smallest point."""
        seen = set()
        out = []
        for start in range(len(self._img)):
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            nxt = self._img[start]
            while nxt != start:
                cycle.append(nxt)
                seen.add(nxt)
                nxt = self._img[nxt]
            if len(cycle) > 1:
                out.append(tuple(i + 1 for i in cycle))
        return out

    def __str__(self):
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)

    def __repr__(self):
        return f"Permutation({self.images})"

    def __getstate__(self):
        return self._img

    def __setstate__(self, state):
        self._img = state

def sympy_permutation(p: Permutation) -> SympyPermutation:
    return SympyPermutation(list(p.key))

def sympy_group(perms: list) -> PermutationGroup:
    """The sympy group generated by perms, on the points 0..n-1, for Schreier-Sims orders and centralizers."""
    return PermutationGroup([sympy_permutation(p) for p in perms])
