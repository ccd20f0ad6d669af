"""
Invertible square matrices over a prime field GF(p) as black-box elements.
"""

import numpy as np
import sympy

from blackbox.element import GroupElement
from errors import StructuralError

MATRIX = 'matrix'

# Largest value an int64 product-sum may reach without overflowing
_INT64_BOUND = 2 ** 63 - 1

def _dtype(d: int, p: int):
    """int64 while a row-by-column sum of d products stays in range, Python ints beyond."""
    return np.int64 if d * (p - 1) ** 2 <= _INT64_BOUND else object

def _row_reduce_inverse(a: np.ndarray, p: int):
    """ Gauss-Jordan elimination mod p on [a | I].

    Returns:
        np.ndarray | None: inverse of a mod p, or None if a is singular
    """
    d = a.shape[0]
    work = np.concatenate([a % p, np.eye(d, dtype=_dtype(d, p))], axis=1)

    for col in range(d):
        pivots = np.nonzero(work[col:, col])[0]
        if pivots.size == 0:
            return None
        pivot = col + int(pivots[0])
        if pivot != col:
            work[[col, pivot]] = work[[pivot, col]]

        work[col] = (work[col] * pow(int(work[col, col]), -1, p)) % p

        # Clear the column everywhere else in one vectorised step
        factors = work[:, col].copy()
        factors[col] = 0
        work = (work - np.outer(factors, work[col])) % p

    return work[:, d:]

class MatrixElement(GroupElement):
    """ d x d invertible matrix over GF(p), entries reduced into [0, p).

    Matrices act on row vectors from the right, so `A * B` is "apply A, then B" and
    is computed as `(A @ B) % p`.

    Args:
        entries: d x d nested sequence or array of integers
        p (int): prime characteristic
    """
    __slots__ = ('_m', '_p')

    def __init__(self, entries, p: int):
        p = int(p)
        if p < 2 or not sympy.isprime(p):
            raise StructuralError(f"characteristic {p} is not prime")

        raw = np.array(entries, dtype=object)
        if raw.ndim != 2 or raw.shape[0] != raw.shape[1] or raw.shape[0] == 0:
            raise StructuralError(f"matrix must be square and nonempty, got shape {raw.shape}")
        try:
            rows = [[int(v) % p for v in row] for row in raw.tolist()]
        except (TypeError, ValueError):
            raise StructuralError("matrix entries must be integers")

        m = np.array(rows, dtype=_dtype(len(rows), p))
        if _row_reduce_inverse(m, p) is None:
            raise StructuralError("matrix is singular")

        m.setflags(write=False)
        self._m = m
        self._p = p

    @classmethod
    def _trusted(cls, m: np.ndarray, p: int) -> 'MatrixElement':
        e = cls.__new__(cls)
        m.setflags(write=False)
        e._m = m
        e._p = p
        return e

    @classmethod
    def identity_matrix(cls, d: int, p: int) -> 'MatrixElement':
        return cls(np.eye(d, dtype=_dtype(d, p)), p)

    @property
    def kind(self) -> str:
        return MATRIX

    @property
    def dimension(self) -> int:
        return self._m.shape[0]

    @property
    def characteristic(self) -> int:
        return self._p

    @property
    def shape(self) -> tuple:
        return (MATRIX, self._m.shape[0], self._p)

    @property
    def key(self):
        if self._m.dtype == object:
            return tuple(self._m.ravel().tolist())
        return self._m.tobytes()

    @property
    def sort_key(self) -> tuple:
        return tuple(self._m.ravel().tolist())

    @property
    def entries(self) -> np.ndarray:
        """Read-only view of the entries."""
        return self._m

    def _multiply(self, other: 'MatrixElement') -> 'MatrixElement':
        return MatrixElement._trusted((self._m @ other._m) % self._p, self._p)

    def _invert(self) -> 'MatrixElement':
        inv = _row_reduce_inverse(self._m, self._p)
        if inv is None:
            raise StructuralError("matrix is singular")
        return MatrixElement._trusted(inv, self._p)

    def identity(self) -> 'MatrixElement':
        return MatrixElement._trusted(np.eye(self.dimension, dtype=self._m.dtype), self._p)

    def is_identity(self) -> bool:
        return bool(np.array_equal(self._m, np.eye(self.dimension, dtype=self._m.dtype)))

    def __str__(self):
        return "\n".join(" ".join(str(v) for v in row) for row in self._m.tolist())

    def __repr__(self):
        return f"MatrixElement({self._m.tolist()}, p={self._p})"

    def __getstate__(self):
        return (self._m.tolist(), self._p)

    def __setstate__(self, state):
        rows, p = state
        m = np.array(rows, dtype=_dtype(len(rows), p))
        m.setflags(write=False)
        self._m = m
        self._p = p
