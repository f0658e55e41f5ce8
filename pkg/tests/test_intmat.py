import random

from hypothesis import given, settings, strategies as st

from quatforms.intmat import (
    hnf_rows,
    hnf_with_transform,
    identity_int,
    int_kernel,
    lattice_contains,
    lattice_index,
    mat_mul_int,
    solve_int_rows,
    rational_row_space_solve,
)

small_int = st.integers(min_value=-30, max_value=30)


def square_mats(n):
    return st.lists(st.lists(small_int, min_size=n, max_size=n), min_size=n, max_size=n)


def test_hnf_known():
    h = hnf_rows([[2, 0], [0, 2], [1, 1]])
    assert h == [[1, 1], [0, 2]]


def test_hnf_zero_matrix():
    assert hnf_rows([[0, 0], [0, 0]]) == []


@given(square_mats(3))
@settings(max_examples=60, deadline=None)
def test_hnf_transform_identity(mat):
    h, u = hnf_with_transform(mat)
    assert mat_mul_int(u, mat) == h
    # u unimodular: integer square matrix whose rows span Z^n
    assert hnf_rows(u) == identity_int(3)


@given(square_mats(3), st.lists(small_int, min_size=3, max_size=3))
@settings(max_examples=60, deadline=None)
def test_membership_of_row_combinations(mat, coeffs):
    h = hnf_rows(mat)
    v = [0, 0, 0]
    for c, row in zip(coeffs, mat):
        v = [a + c * b for a, b in zip(v, row)]
    if h and len(h) == 3:
        assert lattice_contains(h, v)
    sol = solve_int_rows(mat, v)
    assert sol is not None
    w = [0, 0, 0]
    for c, row in zip(sol, mat):
        w = [a + c * b for a, b in zip(w, row)]
    assert w == v


def test_membership_negative():
    h = hnf_rows([[2, 0], [0, 2]])
    assert not lattice_contains(h, [1, 0])
    assert lattice_contains(h, [4, -2])


def test_kernel():
    ker = hnf_rows(int_kernel([[1, 2], [2, 4], [3, 6]]))
    # rank-1 matrix with 3 rows: kernel is rank 2
    assert len(ker) == 2
    for row in ker:
        assert row[0] * 1 + row[1] * 2 + row[2] * 3 == 0
        assert row[0] * 2 + row[1] * 4 + row[2] * 6 == 0


def test_lattice_index():
    sup = hnf_rows([[1, 0], [0, 1]])
    sub = hnf_rows([[2, 1], [0, 3]])
    assert lattice_index(sub, sup) == 6


def test_rational_solve():
    rows = [[2, 0, 0], [0, 3, 0]]
    x = rational_row_space_solve(rows, [1, 1, 0])
    assert x is not None
    assert [x[0] * 2, x[1] * 3, 0] == [1, 1, 0]
    assert rational_row_space_solve(rows, [0, 0, 1]) is None


def test_solve_against_random_unimodular():
    rng = random.Random(7)
    base = identity_int(4)
    for _ in range(20):
        i, j = rng.randrange(4), rng.randrange(4)
        if i != j:
            c = rng.randint(-3, 3)
            base[i] = [a + c * b for a, b in zip(base[i], base[j])]
    h = hnf_rows(base)
    assert h == identity_int(4)


# --- rational preimage lattices ---

from fractions import Fraction

from quatforms.intmat import denominator_scale, integral_preimage_rows


def test_preimage_scalar_and_diagonal():
    assert integral_preimage_rows([[2]]) == [[Fraction(1, 2)]]
    got = integral_preimage_rows([[1, 0], [0, 3]])
    assert got == [[1, 0], [0, Fraction(1, 3)]]


def test_preimage_wide_matrix():
    # x must be integral against both columns blocks
    rows = integral_preimage_rows([[2, 0, 1], [0, 2, 1]])
    for r in rows:
        for c in range(3):
            v = r[0] * Fraction([[2, 0, 1], [0, 2, 1]][0][c]) + r[1] * Fraction(
                [[2, 0, 1], [0, 2, 1]][1][c]
            )
            assert v.denominator == 1


def test_preimage_random_square():
    rng = random.Random(23)
    for _ in range(20):
        while True:
            m = [[rng.randint(-4, 4) for _ in range(3)] for _ in range(3)]
            h = hnf_rows(m)
            if len(h) == 3:
                break
        pre = integral_preimage_rows(m)
        den = denominator_scale(pre)
        # every basis row of the preimage really maps into Z^3
        for r in pre:
            for c in range(3):
                v = sum(r[k] * m[k][c] for k in range(3))
                assert Fraction(v).denominator == 1
        # maximality: any integer vector y gives x = y * m^-1 in the preimage
        scaled = hnf_rows([[int(v * den) for v in row] for row in pre])
        for _ in range(5):
            y = [rng.randint(-6, 6) for _ in range(3)]
            x = _solve_left(m, y)
            target = [v * den for v in x]
            assert all(Fraction(t).denominator == 1 for t in target)
            from quatforms.intmat import lattice_contains

            assert lattice_contains(scaled, [int(t) for t in target])


def _solve_left(m, y):
    # x with x * m = y, over Q
    n = len(m)
    cols = [[Fraction(m[i][j]) for i in range(n)] for j in range(n)]
    aug = [cols[j] + [Fraction(y[j])] for j in range(n)]
    for c in range(n):
        piv = next(i for i in range(c, n) if aug[i][c])
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [v * inv for v in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [v - f * w for v, w in zip(aug[i], aug[c])]
    return [aug[i][n] for i in range(n)]
