import random
from fractions import Fraction

import pytest

from hallalg.linalg import (BudgetError, Matrix, PrimeField, QQ, enumerate_gl,
                            enumerate_matrices, enumerate_subspaces,
                            enumerate_vectors, gaussian_binomial, gl_order,
                            rank_kernel, solve_linear)

F2 = PrimeField(2)
F3 = PrimeField(3)
F5 = PrimeField(5)


def test_prime_validation():
    with pytest.raises(ValueError):
        PrimeField(4)
    with pytest.raises(ValueError):
        PrimeField(1)


def test_rank_kernel_identity():
    r, k = rank_kernel(Matrix.identity(F2, 2))
    assert r == 2 and k == []


def test_rank_kernel_zero_map():
    r, k = rank_kernel(Matrix.zero(F3, 1, 2))
    assert r == 0 and len(k) == 2


def test_rank_kernel_rank_one():
    # oracle: multiply every vector of F_2^2 through the matrix
    m = Matrix(F2, [[1, 1], [1, 1]])
    kernel_oracle = [v for v in enumerate_vectors(F2, 2)
                     if all(x == 0 for x in m.apply(v))]
    r, k = rank_kernel(m)
    assert r == 1
    assert set(k) == set(kernel_oracle) - {(0, 0)}
    assert k == [(1, 1)]


def test_degenerate_shapes_legal():
    m = Matrix.zero(F2, 0, 3)
    r, k = rank_kernel(m)
    assert r == 0 and len(k) == 3
    m2 = Matrix.zero(F2, 3, 0)
    assert rank_kernel(m2) == (0, [])


def test_solve_identity():
    assert solve_linear(Matrix.identity(F2, 2), (1, 0)) == (1, 0)


def test_solve_no_solution():
    assert solve_linear(Matrix.zero(F2, 2, 2), (1, 0)) is None


def test_solve_f5_by_substitution():
    m = Matrix(F5, [[1, 2], [0, 1]])
    x = solve_linear(m, (0, 1))
    assert x == (3, 1)
    assert m.apply(x) == (0, 1)


def test_enumerate_matrices_counts_and_order():
    ms = list(enumerate_matrices(1, 1, 2))
    assert [m.entries for m in ms] == [((0,),), ((1,),)]
    assert len(list(enumerate_matrices(2, 1, 2))) == 4
    ms33 = list(enumerate_matrices(2, 2, 3))
    assert len(ms33) == 81
    assert ms33[0].is_zero()
    # direct odometer oracle for the ordering
    flats = [tuple(x for row in m.entries for x in row) for m in ms33]
    assert flats == sorted(flats)
    assert len(set(flats)) == 81


def test_enumeration_budget_error_names_count():
    with pytest.raises(BudgetError) as err:
        list(enumerate_matrices(4, 4, 5, budget=1000))
    assert err.value.count == 5 ** 16


def test_rank_equals_transpose_rank_and_rank_nullity():
    rng = random.Random(20260808)
    for p in (2, 3, 5):
        f = PrimeField(p)
        for _ in range(200):
            rows = rng.randint(0, 4)
            cols = rng.randint(0, 4)
            m = Matrix(f, [[rng.randrange(p) for _ in range(cols)]
                           for _ in range(rows)], rows, cols)
            r, k = rank_kernel(m)
            assert r == m.transpose().rank()
            assert r + len(k) == cols
            for v in k:
                assert all(x == 0 for x in m.apply(v))


def test_rational_arithmetic_is_exact():
    rng = random.Random(7)
    for _ in range(200):
        a = Fraction(rng.randint(-999, 999), rng.randint(1, 999))
        b = Fraction(rng.randint(-999, 999), rng.randint(1, 999))
        if b == 0:
            b = Fraction(1, 3)
        assert (a + b) - b == a
        assert (a * b) / b == a
    assert QQ.inv(Fraction(3, 7)) == Fraction(7, 3)


def test_matrix_inverse_and_product():
    m = Matrix(F5, [[1, 2], [3, 4]])
    inv = m.inverse()
    assert m * inv == Matrix.identity(F5, 2)
    with pytest.raises(ValueError):
        Matrix(F2, [[1, 1], [1, 1]]).inverse()


def test_gl_enumeration_matches_order_formula():
    assert gl_order(2, 2) == 6
    assert gl_order(3, 2) == 168
    assert gl_order(2, 3) == 48
    for d, p in ((0, 2), (1, 3), (2, 2), (2, 3), (3, 2)):
        mats = list(enumerate_gl(PrimeField(p), d))
        assert len(mats) == gl_order(d, p)
        assert all(m.is_invertible() for m in mats)
        assert len(set(mats)) == len(mats)


def test_subspace_enumeration_matches_gaussian_binomial():
    assert gaussian_binomial(4, 2, 2) == 35
    for n, k, p in ((3, 1, 2), (4, 2, 2), (3, 2, 3), (2, 0, 5)):
        f = PrimeField(p)
        subs = list(enumerate_subspaces(f, n, k))
        assert len(subs) == gaussian_binomial(n, k, p)
        for b in subs:
            assert b.rows == n and b.cols == k and b.rank() == k


def test_rational_matrix_rref():
    m = Matrix(QQ, [[Fraction(1, 2), Fraction(1)], [Fraction(1), Fraction(2)]])
    assert m.rank() == 1
