"""Integer matrix routines: Hermite normal form, kernels, lattice solves.

All matrices are lists of lists of python ints, row-major.  Rows span the
lattice.  The HNF used here is the row-style lower-left echelon: pivots move
right as you go down, pivot entries are positive, and entries above a pivot
are reduced into [0, pivot).
"""

from __future__ import annotations

from fractions import Fraction


def mat_copy(m):
    return [row[:] for row in m]


def identity_int(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul_int(a, b):
    n, k = len(a), len(b)
    assert all(len(row) == k for row in a)
    cols = len(b[0]) if k else 0
    out = [[0] * cols for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            x = ai[t]
            if x:
                bt = b[t]
                for j in range(cols):
                    oi[j] += x * bt[j]
    return out


def hnf_with_transform(mat):
    """Row HNF of an integer matrix.

    Returns (H, U) with U unimodular, U * mat = H, H in row Hermite form
    with zero rows (if any) at the bottom.
    """
    h = mat_copy(mat)
    n = len(h)
    m = len(h[0]) if n else 0
    u = identity_int(n)
    row = 0
    for col in range(m):
        # find a pivot at or below `row` in this column
        piv = None
        for i in range(row, n):
            if h[i][col]:
                piv = i
                break
        if piv is None:
            continue
        h[row], h[piv] = h[piv], h[row]
        u[row], u[piv] = u[piv], u[row]
        # kill entries below via extended gcd steps
        for i in range(row + 1, n):
            while h[i][col]:
                q = h[row][col] // h[i][col]
                if q:
                    h[row] = [a - q * b for a, b in zip(h[row], h[i])]
                    u[row] = [a - q * b for a, b in zip(u[row], u[i])]
                h[row], h[i] = h[i], h[row]
                u[row], u[i] = u[i], u[row]
        if h[row][col] < 0:
            h[row] = [-a for a in h[row]]
            u[row] = [-a for a in u[row]]
        # reduce entries above the pivot
        p = h[row][col]
        for i in range(row):
            q = h[i][col] // p
            if q:
                h[i] = [a - q * b for a, b in zip(h[i], h[row])]
                u[i] = [a - q * b for a, b in zip(u[i], u[row])]
        row += 1
        if row == n:
            break
    return h, u


def hnf_rows(mat):
    """Row HNF with zero rows dropped; canonical basis of the row lattice."""
    h, _ = hnf_with_transform(mat)
    return [row for row in h if any(row)]


def int_kernel(mat):
    """Basis (rows) of the left integer kernel {x : x * mat = 0}."""
    h, u = hnf_with_transform(mat)
    return [u[i] for i in range(len(h)) if not any(h[i])]


def hnf_solve(hnf, target):
    """Coordinates of `target` over HNF basis rows, or None if not in lattice.

    `hnf` must be the output of hnf_rows (full set of nonzero echelon rows).
    """
    t = list(target)
    coords = []
    for row in hnf:
        # pivot column of this row
        col = next(j for j, v in enumerate(row) if v)
        q, r = divmod(t[col], row[col])
        if r:
            return None
        coords.append(q)
        t = [a - q * b for a, b in zip(t, row)]
    if any(t):
        return None
    return coords


def lattice_contains(hnf, target):
    return hnf_solve(hnf, target) is not None


def lattice_index(hnf_sub, hnf_sup):
    """Index [sup : sub] for full-rank nested row lattices in HNF."""
    assert len(hnf_sub) == len(hnf_sup)
    num = 1
    for row in hnf_sub:
        num *= row[next(j for j, v in enumerate(row) if v)]
    den = 1
    for row in hnf_sup:
        den *= row[next(j for j, v in enumerate(row) if v)]
    q, r = divmod(num, den)
    assert r == 0, "lattices not nested"
    return q


def solve_int_rows(rows, target):
    """Integer combination x with x * rows = target, or None."""
    h, u = hnf_with_transform(rows)
    nz = [i for i in range(len(h)) if any(h[i])]
    coords = hnf_solve([h[i] for i in nz], target)
    if coords is None:
        return None
    x = [0] * len(rows)
    for c, i in zip(coords, nz):
        if c:
            x = [a + c * b for a, b in zip(x, u[i])]
    return x


def rational_row_space_solve(rows, target):
    """Rational combination x with x * rows = target, or None.

    rows entries may be ints or Fractions; target likewise.
    """
    n = len(rows)
    m = len(rows[0]) if n else 0
    aug = [[Fraction(rows[i][j]) for i in range(n)] for j in range(m)]
    rhs = [Fraction(t) for t in target]
    # Gaussian elimination on the m x n system aug * x = rhs
    x = [Fraction(0)] * n
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        rhs[r], rhs[piv] = rhs[piv], rhs[r]
        inv = 1 / aug[r][c]
        aug[r] = [v * inv for v in aug[r]]
        rhs[r] *= inv
        for i in range(m):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [v - f * w for v, w in zip(aug[i], aug[r])]
                rhs[i] -= f * rhs[r]
        pivots.append(c)
        r += 1
    for i in range(r, m):
        if rhs[i] != 0:
            return None
    for i, c in enumerate(pivots):
        x[c] = rhs[i]
    return x


def integral_preimage_rows(mat):
    """Basis rows of the lattice {x in Q^n : x * mat is integral}.

    `mat` is an n x m rational matrix of full row rank n (so the preimage
    is itself a rank-n lattice in Q^n).  The condition says x pairs
    integrally with every column, so the preimage is the dual of the
    lattice the columns generate; that dual is the inverse transpose of a
    column lattice basis.
    """
    n = len(mat)
    e = denominator_scale(mat)
    cols = [
        [int(Fraction(mat[i][j]) * e) for i in range(n)]
        for j in range(len(mat[0]))
    ]
    basis = hnf_rows(cols)
    assert len(basis) == n, "matrix does not have full row rank"
    inv = _invert_frac([[Fraction(v) for v in row] for row in basis])
    # dual of rowspan(basis/e) has basis rows e * inv^T
    return [[e * inv[k][i] for k in range(n)] for i in range(n)]


def _invert_frac(mat):
    n = len(mat)
    aug = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(mat)]
    for c in range(n):
        piv = next(i for i in range(c, n) if aug[i][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [v * inv for v in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [v - f * w for v, w in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


def denominator_scale(rows):
    """lcm of denominators over a matrix of Fractions/ints."""
    d = 1
    for row in rows:
        for v in row:
            f = Fraction(v)
            d = d * f.denominator // _gcd(d, f.denominator)
    return d


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a
