"""Exact dense linear algebra over Q.

Matrix wraps a list of Fraction rows.  The characteristic polynomial runs
over Q directly in small dimension and otherwise switches to a modular
Hessenberg computation recombined by CRT under a Hadamard-style coefficient
bound, which keeps the cost polynomial instead of letting rational
intermediates blow up.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

from .arith import inv_mod, next_prime, symmetric_mod
from .polynomials import Poly

_RATIONAL_CUTOFF = 8


class Matrix:
    __slots__ = ("rows",)

    def __init__(self, rows):
        self.rows = [[Fraction(v) for v in row] for row in rows]
        assert all(len(r) == len(self.rows[0]) for r in self.rows)

    @staticmethod
    def identity(n: int) -> "Matrix":
        return Matrix([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def zero(n: int, m: int | None = None) -> "Matrix":
        m = n if m is None else m
        return Matrix([[0] * m for _ in range(n)])

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.rows == other.rows

    def __hash__(self):
        return hash(tuple(tuple(r) for r in self.rows))

    def __add__(self, other):
        assert self.nrows == other.nrows and self.ncols == other.ncols
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        assert self.nrows == other.nrows and self.ncols == other.ncols
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return Matrix([[-a for a in r] for r in self.rows])

    def scale(self, c) -> "Matrix":
        c = Fraction(c)
        return Matrix([[a * c for a in r] for r in self.rows])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        assert self.ncols == other.nrows
        bt = list(zip(*other.rows))
        return Matrix([[sum(a * b for a, b in zip(row, col)) for col in bt] for row in self.rows])

    __rmul__ = scale

    def apply(self, vec: list) -> list[Fraction]:
        """Matrix times column vector."""
        assert len(vec) == self.ncols
        return [sum(a * Fraction(b) for a, b in zip(row, vec)) for row in self.rows]

    def transpose(self) -> "Matrix":
        return Matrix([list(c) for c in zip(*self.rows)])

    def trace(self) -> Fraction:
        assert self.is_square()
        return sum(self.rows[i][i] for i in range(self.nrows))

    def is_zero(self) -> bool:
        return all(v == 0 for r in self.rows for v in r)

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols})"

    # -- elimination ------------------------------------------------------

    def rref(self) -> tuple["Matrix", list[int]]:
        """Reduced row echelon form and its pivot column list."""
        m = [row[:] for row in self.rows]
        nr, nc = len(m), len(m[0]) if m else 0
        pivots = []
        r = 0
        for c in range(nc):
            piv = next((i for i in range(r, nr) if m[i][c] != 0), None)
            if piv is None:
                continue
            m[r], m[piv] = m[piv], m[r]
            inv = 1 / m[r][c]
            m[r] = [v * inv for v in m[r]]
            for i in range(nr):
                if i != r and m[i][c] != 0:
                    f = m[i][c]
                    m[i] = [v - f * w for v, w in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
            if r == nr:
                break
        return Matrix(m), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def det(self) -> Fraction:
        assert self.is_square()
        m = [row[:] for row in self.rows]
        n = len(m)
        out = Fraction(1)
        for c in range(n):
            piv = next((i for i in range(c, n) if m[i][c] != 0), None)
            if piv is None:
                return Fraction(0)
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                out = -out
            out *= m[c][c]
            inv = 1 / m[c][c]
            for i in range(c + 1, n):
                if m[i][c] != 0:
                    f = m[i][c] * inv
                    m[i] = [v - f * w for v, w in zip(m[i], m[c])]
        return out

    def right_kernel(self) -> list[list[Fraction]]:
        """Basis of {v : A v = 0}, echelonized, free variables set to 1."""
        red, pivots = self.rref()
        nc = self.ncols
        free = [c for c in range(nc) if c not in pivots]
        basis = []
        for fc in free:
            v = [Fraction(0)] * nc
            v[fc] = Fraction(1)
            for r, pc in enumerate(pivots):
                v[pc] = -red.rows[r][fc]
            basis.append(v)
        return basis

    def solve_right(self, b: list) -> list[Fraction] | None:
        """One solution x of A x = b, or None."""
        nr, nc = self.nrows, self.ncols
        aug = Matrix([row + [Fraction(bv)] for row, bv in zip(self.rows, b)])
        red, pivots = aug.rref()
        if nc in pivots:
            return None
        x = [Fraction(0)] * nc
        for r, pc in enumerate(pivots):
            x[pc] = red.rows[r][nc]
        return x

    def column_space_coords(self, vecs: list[list[Fraction]], target: list) -> list[Fraction] | None:
        """Coordinates of target in span(vecs), or None.  Columns given as lists."""
        m = Matrix([list(col) for col in zip(*vecs)]) if vecs else Matrix([[ ] for _ in target])
        return m.solve_right(target) if vecs else None

    # -- characteristic polynomial ----------------------------------------

    def charpoly(self) -> Poly:
        """det(x*I - A), computed exactly."""
        assert self.is_square()
        n = self.nrows
        if n == 0:
            return Poly([1])
        if n <= _RATIONAL_CUTOFF:
            return _charpoly_rational(self.rows)
        return _charpoly_crt(self.rows)

    def minimal_poly_bound(self) -> Poly:
        # the charpoly always annihilates; callers refine per factor
        return self.charpoly()


def poly_at_matrix(p: Poly, a: Matrix) -> Matrix:
    """Evaluate a polynomial at a square matrix (Horner)."""
    assert a.is_square()
    n = a.nrows
    out = Matrix.zero(n)
    for c in reversed(p.coeffs):
        out = out * a + Matrix.identity(n).scale(c)
    return out


def _hessenberg_charpoly_generic(h, n, mul, sub, one, zero):
    """Characteristic polynomial of a Hessenberg matrix via the classic
    leading-minor recurrence; arithmetic supplied by callbacks."""
    polys = [[one]]
    for m in range(1, n + 1):
        prev = polys[m - 1]
        # (x - h[m-1][m-1]) * prev
        cur = [zero] + list(prev)
        t = h[m - 1][m - 1]
        cur = [sub(c, mul(t, p)) for c, p in zip(cur, list(prev) + [zero])]
        coef = one
        for i in range(m - 1, 0, -1):
            coef = mul(coef, h[i][i - 1])
            t = mul(h[i - 1][m - 1], coef)
            pi = polys[i - 1]
            for k in range(len(pi)):
                cur[k] = sub(cur[k], mul(t, pi[k]))
        polys.append(cur)
    return polys[n]


def _charpoly_rational(rows) -> Poly:
    n = len(rows)
    h = [row[:] for row in rows]
    for m in range(1, n - 1):
        piv = next((i for i in range(m, n) if h[i][m - 1] != 0), None)
        if piv is None:
            continue
        if piv != m:
            h[m], h[piv] = h[piv], h[m]
            for row in h:
                row[m], row[piv] = row[piv], row[m]
        inv = 1 / h[m][m - 1]
        for i in range(m + 1, n):
            if h[i][m - 1] != 0:
                u = h[i][m - 1] * inv
                h[i] = [a - u * b for a, b in zip(h[i], h[m])]
                for row in h:
                    row[m] += u * row[i]
    coeffs = _hessenberg_charpoly_generic(
        h, n, lambda a, b: a * b, lambda a, b: a - b, Fraction(1), Fraction(0)
    )
    return Poly(coeffs)


def _charpoly_mod_p(int_rows, p) -> list[int]:
    n = len(int_rows)
    h = [[v % p for v in row] for row in int_rows]
    for m in range(1, n - 1):
        piv = next((i for i in range(m, n) if h[i][m - 1]), None)
        if piv is None:
            continue
        if piv != m:
            h[m], h[piv] = h[piv], h[m]
            for row in h:
                row[m], row[piv] = row[piv], row[m]
        inv = inv_mod(h[m][m - 1], p)
        for i in range(m + 1, n):
            if h[i][m - 1]:
                u = h[i][m - 1] * inv % p
                h[i] = [(a - u * b) % p for a, b in zip(h[i], h[m])]
                for row in h:
                    row[m] = (row[m] + u * row[i]) % p
    return _hessenberg_charpoly_generic(
        h, n, lambda a, b: a * b % p, lambda a, b: (a - b) % p, 1, 0
    )


def _charpoly_crt(rows) -> Poly:
    n = len(rows)
    den = 1
    for row in rows:
        for v in row:
            den = den * v.denominator // gcd(den, v.denominator)
    int_rows = [[int(v * den) for v in row] for row in rows]
    bmax = max((abs(v) for row in int_rows for v in row), default=0)
    if bmax == 0:
        return Poly([0] * n + [1])
    # |c_k| <= C(n,k) (sqrt(n) B)^n <= 2^n (sqrt(n)+1)^n B^n
    bound = (2 * (isqrt(n) + 1) * bmax) ** n
    modulus = 1
    residues: list[int] | None = None
    p = 1 << 61
    while modulus <= 2 * bound:
        p = next_prime(p)
        if den % p == 0:
            continue
        cp = _charpoly_mod_p(int_rows, p)
        if residues is None:
            residues, modulus = cp, p
        else:
            inv = inv_mod(modulus % p, p)
            new_mod = modulus * p
            residues = [
                (a + (b - a) * inv % p * modulus) % new_mod for a, b in zip(residues, cp)
            ]
            modulus = new_mod
    coeffs = [symmetric_mod(c, modulus) for c in residues]
    # scale back: charpoly(A) coefficients from charpoly(den*A)
    return Poly([Fraction(c, den ** (n - k)) for k, c in enumerate(coeffs)])
