
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from blackbox.element import counting
from blackbox.group import permutation_module_gf2
from blackbox.matrix import MatrixElement
from blackbox.operations import element_order
from errors import StructuralError

upper = MatrixElement([[1, 1], [0, 1]], 2)

def test_gf2_product():
    assert(upper * upper == MatrixElement([[1, 0], [0, 1]], 2))
    assert((upper * upper).is_identity())

def test_entries_are_reduced():
    assert(MatrixElement([[3, 5], [0, 1]], 2) == upper)

def test_inverse_gf3():
    m = MatrixElement([[1, 2], [0, 1]], 3)
    assert((m * m.inverse()).is_identity())
    assert(m.inverse() == MatrixElement([[1, 1], [0, 1]], 3))

def test_singular_matrix():
    with pytest.raises(StructuralError):
        MatrixElement([[1, 1], [1, 1]], 2)

def test_non_prime_characteristic():
    with pytest.raises(StructuralError):
        MatrixElement([[1, 0], [0, 1]], 4)

def test_shape_mismatch():
    with pytest.raises(StructuralError):
        upper * MatrixElement([[1, 1], [0, 1]], 3)

def test_inverse_is_counted_once():
    with counting() as c:
        upper.inverse()
    assert(c.count == 1)

unitriangular = st.lists(st.integers(min_value=0, max_value=4), min_size=3, max_size=3).map(
    lambda v: MatrixElement([[1, v[0], v[1]], [0, 1, v[2]], [0, 0, 1]], 5))

@settings(max_examples=1000)
@given(unitriangular, unitriangular, unitriangular)
def test_associativity(a, b, c):
    assert((a * b) * c == a * (b * c))

def test_shipped_gf2_generators_are_the_permutation_module(m11, m11_gf2):
    derived = permutation_module_gf2(m11)
    assert(len(derived.generators) == len(m11_gf2.generators))
    for a, b in zip(derived.generators, m11_gf2.generators):
        assert(a == b)

def test_permutation_module_preserves_orders(m11, m11_gf2):
    for perm, mat in zip(m11.generators, m11_gf2.generators):
        assert(element_order(perm) == element_order(mat))
    product_perm = m11.generators[0] * m11.generators[1]
    product_mat = m11_gf2.generators[0] * m11_gf2.generators[1]
    assert(element_order(product_perm) == element_order(product_mat))

def test_large_prime_products_are_exact():
    p = 2 ** 61 - 1
    rows = [[p - 1, p - 2], [p - 3, 1]]
    a = MatrixElement(rows, p)
    expected = [[sum(rows[i][k] * rows[k][j] for k in range(2)) % p for j in range(2)] for i in range(2)]
    assert(a * a == MatrixElement(expected, p))
    assert((a * a.inverse()).is_identity())
    assert(all(0 <= v < p for v in (a * a).entries.ravel().tolist()))

def test_word_size_primes_near_the_int64_limit():
    p = sympy.prevprime(3037000499)
    a = MatrixElement([[p - 1, 1, 0], [0, p - 1, 1], [1, 0, 1]], p)
    b = a.inverse()
    assert((a * b).is_identity())
    assert(a.key == MatrixElement(a.entries.tolist(), p).key)
