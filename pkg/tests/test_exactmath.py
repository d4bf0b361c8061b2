from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from unicover.exactmath import (
    DimensionError,
    NonUniqueSolution,
    hermite_normal_form,
    identity,
    integer_determinant,
    mat_vec,
    matmul,
    primitive_vector,
    smith_normal_form,
    solve_linear_rational,
)
from conftest import int_matrix, small_ints


def test_determinant_examples():
    assert integer_determinant(identity(3)) == 1
    assert integer_determinant([[1, 0], [1, 2]]) == 2
    assert integer_determinant([[1, 0, 0], [0, 1, 0], [1, 1, 2]]) == 2
    assert integer_determinant([[0, 1], [1, 0]]) == -1


def test_determinant_rejects_non_square():
    with pytest.raises(DimensionError):
        integer_determinant([[1, 2]])


def test_determinant_is_arbitrary_precision():
    big = 10**40
    assert integer_determinant([[big, 1], [1, big]]) == big * big - 1


def test_smith_examples():
    diag, left, right = smith_normal_form(identity(3))
    assert diag == [1, 1, 1]
    assert smith_normal_form([[2, 0], [0, 3]])[0] == [1, 6]
    assert smith_normal_form([[1, 0], [1, 2]])[0] == [1, 2]


def test_hermite_examples():
    h, u = hermite_normal_form(identity(2))
    assert h == identity(2) and u == identity(2)
    h, u = hermite_normal_form([[0, 1], [1, 0]])
    assert h == identity(2) and u == [[0, 1], [1, 0]]
    h, u = hermite_normal_form([[2, 4], [1, 3]])
    assert (h[0][0], h[1][1]) == (1, 2)


def test_solve_examples():
    assert solve_linear_rational(identity(2), [Fraction(1, 3), 2]) == (Fraction(1, 3), 2)
    assert solve_linear_rational([[1, 0], [1, 2]], [1, 3]) == (1, 1)
    assert solve_linear_rational([[1, 1], [2, 2]], [1, 3]) is None


def test_primitive_examples():
    assert primitive_vector((2, 4, 6)) == (1, 2, 3)
    assert primitive_vector((1, 0)) == (1, 0)
    assert primitive_vector((-3, 6)) == (-1, 2)
    with pytest.raises(ValueError):
        primitive_vector((0, 0))


@st.composite
def square(draw):
    n = draw(st.integers(1, 4))
    return draw(int_matrix(n))


@given(square())
def test_smith_product_is_abs_determinant(m):
    diag, left, right = smith_normal_form(m)
    det = integer_determinant(m)
    prod = 1
    for x in diag:
        prod *= x
    assert abs(prod) == abs(det)
    s = matmul(matmul(left, m), right)
    n = len(m)
    assert all(s[i][j] == (diag[i] if i == j else 0) for i in range(n) for j in range(n))
    assert abs(integer_determinant(left)) == 1 and abs(integer_determinant(right)) == 1
    nz = [x for x in diag if x]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, 4))).flatmap(
    lambda nm: int_matrix(nm[0], nm[1])))
def test_hermite_reconstructs(m):
    h, u = hermite_normal_form(m)
    assert matmul(u, m) == h
    assert abs(integer_determinant(u)) == 1
    # row echelon with positive pivots and reduced entries above each pivot
    col = -1
    for i, row in enumerate(h):
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            assert all(not any(r) for r in h[i:])
            break
        j = nz[0]
        assert j > col and row[j] > 0
        assert all(0 <= h[k][j] < row[j] for k in range(i))
        col = j


@given(square(), st.lists(small_ints, min_size=4, max_size=4))
def test_solve_resubstitutes(m, b):
    b = b[: len(m)]
    try:
        x = solve_linear_rational(m, b)
    except NonUniqueSolution:
        assert integer_determinant(m) == 0
        return
    if x is not None:
        assert list(mat_vec(m, x)) == b
    elif integer_determinant(m) != 0:
        pytest.fail("nonsingular system reported inconsistent")


@given(st.lists(small_ints, min_size=1, max_size=5).filter(any))
def test_primitive_idempotent_and_same_ray(v):
    p = primitive_vector(v)
    assert primitive_vector(p) == p
    ratios = {Fraction(a, b) for a, b in zip(v, p) if b}
    assert len(ratios) == 1 and ratios.pop() > 0
