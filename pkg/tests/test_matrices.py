import random
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from quatforms.matrices import Matrix, poly_at_matrix
from quatforms.polynomials import Poly

small = st.integers(min_value=-9, max_value=9)


def mats(n):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n).map(Matrix)


def charpoly_oracle(m: Matrix) -> Poly:
    """det(x*I - A) by cofactor expansion over Poly entries.  Dim <= 5 only."""
    n = m.nrows
    entries = [
        [Poly([-m.rows[i][j], 1]) if i == j else Poly([-m.rows[i][j]]) for j in range(n)]
        for i in range(n)
    ]

    def det(rows, cols):
        if len(cols) == 1:
            return rows[0][cols[0]]
        total = Poly([])
        for k, c in enumerate(cols):
            minor = det(rows[1:], cols[:k] + cols[k + 1 :])
            term = rows[0][c] * minor
            total = total + term if k % 2 == 0 else total - term
        return total

    return det(entries, list(range(n)))


def companion(f: Poly) -> Matrix:
    assert f.is_monic()
    n = f.degree
    rows = [[0] * n for _ in range(n)]
    for i in range(1, n):
        rows[i][i - 1] = 1
    for i in range(n):
        rows[i][n - 1] = -f.coeffs[i]
    return Matrix(rows)


@given(mats(3))
@settings(max_examples=50, deadline=None)
def test_charpoly_against_cofactor_oracle(m):
    assert m.charpoly() == charpoly_oracle(m)


@given(mats(4))
@settings(max_examples=25, deadline=None)
def test_charpoly_oracle_dim4(m):
    assert m.charpoly() == charpoly_oracle(m)


@given(mats(3))
@settings(max_examples=30, deadline=None)
def test_cayley_hamilton(m):
    assert poly_at_matrix(m.charpoly(), m).is_zero()


def test_charpoly_companion_small():
    f = Poly([2, 0, -6, 0, 1])
    assert companion(f).charpoly() == f


def test_charpoly_companion_crt_path():
    # degree 12 exceeds the rational cutoff, forcing the modular route
    rng = random.Random(3)
    f = Poly([rng.randint(-40, 40) for _ in range(12)] + [1])
    assert companion(f).charpoly() == f


def test_charpoly_block_matches_factor_product():
    from quatforms.polynomials import factor_poly

    parts = [Poly([-4, 1]), Poly([4, 1]), Poly([4, 0, 1]), Poly([2, 0, -6, 0, 1])]
    n = sum(p.degree for p in parts)
    rows = [[Fraction(0)] * n for _ in range(n)]
    off = 0
    for p in parts:
        c = companion(p)
        for i in range(p.degree):
            for j in range(p.degree):
                rows[off + i][off + j] = c.rows[i][j]
        off += p.degree
    m = Matrix(rows)
    cp = m.charpoly()
    prod = Poly([1])
    for p in parts:
        prod = prod * p
    assert cp == prod
    _, fs = factor_poly(cp)
    assert [(g, mult) for g, mult in fs] == [(p, 1) for p in sorted(parts, key=lambda q: (q.degree, q.coeffs))]


def test_charpoly_rational_entries():
    m = Matrix([[Fraction(1, 2), 0], [0, Fraction(1, 3)]])
    assert m.charpoly() == Poly([Fraction(1, 6), Fraction(-5, 6), 1])


def test_charpoly_rational_entries_crt():
    n = 10
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = Fraction(1, i + 1)
    cp = Matrix(rows).charpoly()
    prod = Poly([1])
    for i in range(n):
        prod = prod * Poly([Fraction(-1, i + 1), 1])
    assert cp == prod


@given(mats(3), mats(3))
@settings(max_examples=40, deadline=None)
def test_det_multiplicative(a, b):
    assert (a * b).det() == a.det() * b.det()


@given(mats(4))
@settings(max_examples=40, deadline=None)
def test_rank_nullity_and_kernel(m):
    ker = m.right_kernel()
    assert m.rank() + len(ker) == 4
    for v in ker:
        assert all(x == 0 for x in m.apply(v))


@given(mats(3), st.lists(small, min_size=3, max_size=3))
@settings(max_examples=40, deadline=None)
def test_solve_right(m, x):
    b = m.apply(x)
    sol = m.solve_right(b)
    assert sol is not None
    assert m.apply(sol) == b


def test_solve_right_inconsistent():
    m = Matrix([[1, 0], [1, 0]])
    assert m.solve_right([1, 2]) is None


def test_trace_is_charpoly_coefficient():
    m = Matrix([[1, 2], [3, 4]])
    cp = m.charpoly()
    assert cp.coeffs[1] == -m.trace()
