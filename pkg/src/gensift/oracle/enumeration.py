"""
Breadth-first enumeration of small groups, the substrate for every exact check.
"""

import logging
import multiprocessing as mp

import numpy as np
import tqdm

from blackbox.element import GroupElement
from common import DEFAULT_ENUMERATION_CAP
from errors import ContractError, EnumerationOverflow
from slp import IDENTITY_LINE, SLPBuilder

# Cayley tables are only built for groups up to this order
CAYLEY_TABLE_LIMIT = 5000

def _expand_chunk(task: tuple) -> list:
    """Right-multiply a chunk of the frontier by every generator (runs in a worker)."""
    elements, generators = task
    return [x * s for x in elements for s in generators]

class EnumeratedGroup:
    """ All elements of <generators>, listed in breadth-first order from the identity.

    Element i > 0 was first reached as elements[parents[i]] * generators[via[i]], so the
    parent links form a Schreier tree and `word(i)` is a shortest word in the generators.

    Args:
        generators (list[GroupElement]): generators, all of one shape
        cap (int): maximum order; EnumerationOverflow beyond it
        label (str): display name
        jobs (int): worker processes for expanding large frontiers (same result for any value)
        progress (bool): show a tqdm progress bar
    """
    def __init__(self, generators: list, cap: int = DEFAULT_ENUMERATION_CAP, label: str = '',
                 jobs: int = 1, progress: bool = False):
        generators = list(generators)
        if not generators:
            raise ContractError("cannot enumerate a group without generators")
        if cap < 1:
            raise ContractError(f"enumeration cap must be positive, got {cap}")

        self.generators = generators
        self.label = label
        self.cap = cap

        identity = generators[0].identity()
        self.elements = [identity]
        self.index = {identity.key: 0}
        self.parents = [-1]
        self.via = [-1]
        self._table = None

        bar = tqdm.tqdm(desc=f"enumerate {label}".strip(), unit='elt', disable=not progress)
        pool = mp.Pool(jobs) if jobs > 1 else None
        try:
            start = 0
            while start < len(self.elements):
                end = len(self.elements)
                frontier = self.elements[start:end]
                products = self._expand(frontier, pool, jobs)

                # Merge in frontier order, generator order: identical for any number of jobs
                r = len(generators)
                for offset, h in enumerate(products):
                    if h.key not in self.index:
                        if len(self.elements) >= cap:
                            raise EnumerationOverflow(cap)
                        self.index[h.key] = len(self.elements)
                        self.elements.append(h)
                        self.parents.append(start + offset // r)
                        self.via.append(offset % r)
                bar.update(len(self.elements) - end)
                start = end
        finally:
            bar.close()
            if pool is not None:
                pool.close()
                pool.join()

        logging.debug(f"(oracle): enumerated {label or 'group'} of order {len(self.elements)}")

    def _expand(self, frontier: list, pool, jobs: int) -> list:
        if pool is None or len(frontier) < 1000:
            return _expand_chunk((frontier, self.generators))
        size = -(-len(frontier) // jobs)
        chunks = [(frontier[i:i + size], self.generators) for i in range(0, len(frontier), size)]
        return [h for part in pool.map(_expand_chunk, chunks) for h in part]

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x: GroupElement) -> bool:
        return x.key in self.index

    def index_of(self, x: GroupElement) -> int:
        return self.index[x.key]

    @property
    def order(self) -> int:
        return len(self.elements)

    def keys(self) -> set:
        return set(self.index)

    def path(self, i: int) -> list:
        """Generator indices along the Schreier tree from the identity to element i."""
        out = []
        while i > 0:
            out.append(self.via[i])
            i = self.parents[i]
        return out[::-1]

    def word(self, i: int, generator_words: list = None):
        """ Straight-line program for element i.

        Args:
            i (int): element index
            generator_words (list[StraightLineProgram], optional): words of the generators in
                some standard generators; by default the generators are the inputs

        Returns:
            StraightLineProgram
        """
        slots = generator_words[0].slots if generator_words else len(self.generators)
        builder = SLPBuilder(slots)
        bases = {}
        line = IDENTITY_LINE
        for g in self.path(i):
            if g not in bases:
                bases[g] = builder.inline(generator_words[g]) if generator_words else g
            line = builder.mul(line, bases[g])
        return builder.program(line)

    def cayley_table(self) -> np.ndarray:
        """ table[i, j] = index of elements[i] * elements[j], for groups up to CAYLEY_TABLE_LIMIT.

        Built column by column along the Schreier tree: column j is column parents[j]
        composed with right multiplication by generators[via[j]].
        """
        if self._table is not None:
            return self._table
        n = len(self.elements)
        if n > CAYLEY_TABLE_LIMIT:
            raise ContractError(f"Cayley table limited to order {CAYLEY_TABLE_LIMIT}, group has order {n}")

        right = np.array([[self.index[(x * s).key] for x in self.elements] for s in self.generators], dtype=np.int64)
        table = np.empty((n, n), dtype=np.int64)
        table[:, 0] = np.arange(n)
        for j in range(1, n):
            table[:, j] = right[self.via[j]][table[:, self.parents[j]]]
        self._table = table
        return table

    def __repr__(self):
        return f"EnumeratedGroup({self.label!r}, order={len(self.elements)})"

def enumerate_group(gens: list, cap: int = DEFAULT_ENUMERATION_CAP, **kwargs) -> EnumeratedGroup:
    return EnumeratedGroup(gens, cap, **kwargs)
