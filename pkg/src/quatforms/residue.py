"""Finite algebras over F_p arising as quotients of integer lattices.

This module carries the characteristic-p workhorses: dense linear algebra
mod p, quotient constructions L/M for p-elementary lattice pairs, primary
decomposition of commutative quotients (used to factor rational primes in
a number field), and the explicit splitting of a rank-4 quotient algebra
as 2x2 matrices over its center (used to build projective-line actions on
quaternion orders).

Vectors are tuples of ints mod p; matrices are tuples of row tuples.
Randomized searches take explicit seeds, so every run is reproducible.
"""

from fractions import Fraction
import itertools
import random

from .intmat import hnf_rows
from .polynomials import _poly_xgcd_mod, _zdivmod_monic, _zgcd_mod, _zmod, _zmul, factor_mod_p


# ---------------------------------------------------------------------------
# dense linear algebra mod p


def vec_mod(v, p):
    return tuple(int(c) % p for c in v)


def rref_mod(rows, p):
    """Row-reduce mod p. Returns (rref rows, pivot column list)."""
    mat = [list(r) for r in rows]
    nrows = len(mat)
    ncols = len(mat[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if mat[i][c] % p:
                pr = i
                break
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        inv = pow(mat[r][c] % p, p - 2, p)
        mat[r] = [(x * inv) % p for x in mat[r]]
        for i in range(nrows):
            if i != r and mat[i][c] % p:
                f = mat[i][c] % p
                mat[i] = [(a - f * b) % p for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return tuple(tuple(row) for row in mat), pivots


def rank_mod(rows, p):
    return len(rref_mod(rows, p)[1])


def kernel_mod(rows, p):
    """Basis of the right kernel {x : rows . x = 0}."""
    ncols = len(rows[0]) if rows else 0
    red, pivots = rref_mod(rows, p)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        x = [0] * ncols
        x[fc] = 1
        for r, pc in enumerate(pivots):
            x[pc] = (-red[r][fc]) % p
        basis.append(tuple(x))
    return basis


def solve_right_mod(rows, target, p):
    """One solution x of rows . x = target, or None."""
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    aug = [list(rows[i]) + [target[i] % p] for i in range(nrows)]
    red, pivots = rref_mod(aug, p)
    x = [0] * ncols
    for r, pc in enumerate(pivots):
        if pc == ncols:
            return None
        x[pc] = red[r][ncols]
    return tuple(x)


def in_span_mod(rows, v, p):
    if not rows:
        return all(c % p == 0 for c in v)
    return rank_mod(list(rows) + [v], p) == rank_mod(rows, p)


def span_basis_mod(rows, p):
    """Canonical (rref) basis of the row span."""
    red, piv = rref_mod(rows, p)
    return [red[i] for i in range(len(piv))]


def matmul_mod(a, b, p):
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) % p for col in bt) for row in a
    )


# ---------------------------------------------------------------------------
# algebras


class FpAlgebra:
    """Associative unital algebra over F_p with explicit structure constants.

    mult[i][j] is the coordinate vector of e_i * e_j; one is the identity.
    """

    def __init__(self, p, mult, one):
        self.p = p
        self.dim = len(mult)
        self.mult = tuple(tuple(vec_mod(v, p) for v in row) for row in mult)
        self.one = vec_mod(one, p)

    def zero(self):
        return (0,) * self.dim

    def unit(self, j):
        return tuple(1 if t == j else 0 for t in range(self.dim))

    def add(self, x, y):
        p = self.p
        return tuple((a + b) % p for a, b in zip(x, y))

    def sub(self, x, y):
        p = self.p
        return tuple((a - b) % p for a, b in zip(x, y))

    def smul(self, c, x):
        p = self.p
        c %= p
        return tuple((c * a) % p for a in x)

    def mul(self, x, y):
        p = self.p
        out = [0] * self.dim
        for i, xi in enumerate(x):
            if not xi:
                continue
            mi = self.mult[i]
            for j, yj in enumerate(y):
                if not yj:
                    continue
                c = (xi * yj) % p
                row = mi[j]
                for k, rk in enumerate(row):
                    if rk:
                        out[k] = (out[k] + c * rk) % p
        return tuple(out)

    def pow(self, x, e):
        result = self.one
        base = x
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def rep_left(self, x):
        """Matrix of y -> x*y on coordinate columns."""
        cols = [self.mul(x, self.unit(j)) for j in range(self.dim)]
        return tuple(tuple(cols[j][i] for j in range(self.dim)) for i in range(self.dim))

    def rep_right(self, x):
        cols = [self.mul(self.unit(j), x) for j in range(self.dim)]
        return tuple(tuple(cols[j][i] for j in range(self.dim)) for i in range(self.dim))

    def minpoly(self, x):
        """Monic minimal polynomial of x, low-degree-first int coefficients."""
        rows = []
        power = self.one
        while True:
            if rows:
                sol = solve_right_mod(tuple(zip(*rows)), power, self.p)
                if sol is not None:
                    return [(-c) % self.p for c in sol] + [1]
            rows.append(power)
            power = self.mul(power, x)

    def evaluate(self, coeffs, x):
        """Evaluate an integer polynomial (low-first) at x."""
        out = self.zero()
        power = self.one
        for c in coeffs:
            if c % self.p:
                out = self.add(out, self.smul(c, power))
            power = self.mul(power, x)
        return out

    def is_invertible(self, x):
        return rank_mod(self.rep_left(x), self.p) == self.dim

    def inv(self, x):
        sol = solve_right_mod(self.rep_left(x), self.one, self.p)
        if sol is None:
            raise ZeroDivisionError("element is a zero divisor")
        return sol

    def elements(self):
        """All p^dim coordinate vectors, lexicographic. Only for tiny algebras."""
        return itertools.product(range(self.p), repeat=self.dim)

    def frobenius_matrix(self):
        cols = [self.pow(self.unit(j), self.p) for j in range(self.dim)]
        return tuple(tuple(cols[j][i] for j in range(self.dim)) for i in range(self.dim))


def subalgebra(A, basis_rows, identity):
    """Algebra structure on a multiplicatively closed independent span.

    identity is the unit of the subalgebra (an idempotent of A) in A
    coordinates. Coordinates of the result are w.r.t. basis_rows.
    """
    p = A.p
    cols = tuple(zip(*basis_rows))
    mult = []
    for x in basis_rows:
        row = []
        for y in basis_rows:
            c = solve_right_mod(cols, A.mul(x, y), p)
            if c is None:
                raise ValueError("span not multiplicatively closed")
            row.append(c)
        mult.append(row)
    one = solve_right_mod(cols, identity, p)
    if one is None:
        raise ValueError("identity not in span")
    return FpAlgebra(p, mult, one)


# ---------------------------------------------------------------------------
# quotients of integer lattices


class QuotientSpace:
    """The F_p-vector space L/M for lattices M <= L with pL <= M <= L.

    Lattices are (rows, den) pairs in a common ambient coordinate system.
    Elementary divisors of M in L must all be 1 or p.  No multiplicative
    structure is assumed; LatticeQuotient adds one.
    """

    def __init__(self, L_rows, L_den, M_rows, M_den, p):
        n = len(L_rows)
        self.p = p
        self.L_rows = L_rows
        self.L_den = L_den
        c_rows = [
            [
                int(c)
                for c in _express_vector(
                    tuple(Fraction(x, M_den) for x in r), L_rows, L_den, integral=True
                )
            ]
            for r in M_rows
        ]
        H = hnf_rows(tuple(tuple(r) for r in c_rows))
        if len(H) != n:
            raise ValueError("sublattice not full rank")
        H = [list(r) for r in H]
        for i, row in enumerate(H):
            if row[i] not in (1, p):
                raise ValueError("quotient is not p-elementary")
        self.H = H
        self.positions = [i for i in range(n) if H[i][i] == p]
        self.dim = len(self.positions)
        self.basis_ambient = [
            tuple(Fraction(c, L_den) for c in L_rows[pos]) for pos in self.positions
        ]

    def proj(self, vec_ambient):
        """Reduce an ambient rational vector lying in L to quotient coordinates."""
        w = [
            int(c)
            for c in _express_vector(vec_ambient, self.L_rows, self.L_den, integral=True)
        ]
        H = self.H
        for j in range(len(w)):
            q = w[j] // H[j][j]
            if q:
                for t in range(j, len(w)):
                    w[t] -= q * H[j][t]
        return tuple(w[pos] % self.p for pos in self.positions)

    def lift(self, coords):
        """A representative in ambient coordinates (Fractions)."""
        n = len(self.L_rows)
        out = [Fraction(0)] * n
        for c, pos in zip(coords, self.positions):
            if c % self.p:
                row = self.L_rows[pos]
                for t in range(n):
                    out[t] += Fraction(c * row[t], self.L_den)
        return tuple(out)


class LatticeQuotient(QuotientSpace):
    """QuotientSpace carrying the induced F_p-algebra structure.

    mul_ambient multiplies ambient vectors (tuples of Fractions) and
    one_ambient is the multiplicative unit; both L and M must be closed
    enough for the products of basis representatives to land back in L.
    """

    def __init__(self, L_rows, L_den, M_rows, M_den, p, mul_ambient, one_ambient):
        super().__init__(L_rows, L_den, M_rows, M_den, p)
        mult = [
            [self.proj(mul_ambient(x, y)) for y in self.basis_ambient]
            for x in self.basis_ambient
        ]
        self.algebra = FpAlgebra(p, mult, self.proj(one_ambient))


def _express_vector(vec, basis_rows, basis_den, integral=False):
    """Solve vec = w . basis/basis_den exactly; basis is square invertible."""
    n = len(basis_rows)
    mat = [[Fraction(basis_rows[j][i]) for j in range(n)] for i in range(n)]
    rhs = [Fraction(v) * basis_den for v in vec]
    w = _solve_square(mat, rhs)
    if integral:
        for c in w:
            if c.denominator != 1:
                raise ValueError("vector not in lattice")
    return w


def _solve_square(mat, rhs):
    n = len(mat)
    a = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for c in range(n):
        pr = next(i for i in range(c, n) if a[i][c])
        a[c], a[pr] = a[pr], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [a[i][n] for i in range(n)]


# ---------------------------------------------------------------------------
# primary decomposition of commutative algebras


def _radical_commutative(A):
    """Basis of the nilradical: kernel of a high power of Frobenius."""
    fr = A.frobenius_matrix()
    q, m = A.p, 1
    while q < A.dim:
        q *= A.p
        m += 1
    mat = fr
    for _ in range(m - 1):
        mat = matmul_mod(mat, fr, A.p)
    return kernel_mod(mat, A.p)


def _int_mat_pow(m, e):
    n = len(m)
    result = [[int(i == j) for j in range(n)] for i in range(n)]
    base = [list(r) for r in m]

    def mul(a, b):
        bt = list(zip(*b))
        return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]

    while e:
        if e & 1:
            result = mul(result, base)
        base = mul(base, base)
        e >>= 1
    return result


def algebra_radical(A):
    """Canonical basis rows of the Jacobson radical of A.

    Works for noncommutative algebras and in small characteristic, where
    the plain trace form is degenerate: a descending chain of ideals is
    cut out by divided power traces.  At stage i the functional sends z
    to Tr(M^(p^i)) / p^i mod p, with M an integer lift of the left
    multiplication matrix of z; on the previous stage's ideal this value
    is well defined and linear in z (Friedl-Ronyai), and the chain
    reaches the radical once p^i >= dim A.
    """
    p, n = A.p, A.dim

    def lifted_left_matrix(z):
        m = [[0] * n for _ in range(n)]
        for r, zr in enumerate(z):
            if not zr:
                continue
            for s in range(n):
                row = A.mult[r][s]
                for t, c in enumerate(row):
                    if c:
                        m[t][s] += zr * c
        return m

    def divided_trace(z, i):
        q = p**i
        mp = _int_mat_pow(lifted_left_matrix(z), q)
        tr = sum(mp[t][t] for t in range(n))
        quo, rem = divmod(tr, q)
        assert rem == 0, "divided trace undefined on the current ideal"
        return quo % p

    V = [A.unit(j) for j in range(n)]
    i = 0
    while True:
        # stage 0 pairs against all of A, later stages against the ideal
        tests = [A.unit(l) for l in range(n)] if i == 0 else list(V)
        mat = tuple(
            tuple(divided_trace(A.mul(v, y), i) for y in tests) for v in V
        )
        ker = kernel_mod(tuple(zip(*mat)), p)
        new = []
        for coeffs in ker:
            w = [0] * n
            for c, v in zip(coeffs, V):
                if c:
                    for j, vj in enumerate(v):
                        w[j] = (w[j] + c * vj) % p
            new.append(tuple(w))
        V = span_basis_mod(new, p) if new else []
        if not V or p**i >= n:
            break
        i += 1
    rad = [tuple(r) for r in V]
    # the chain's output must be a nilpotent two-sided ideal; cheap to verify
    for r in rad:
        for l in range(n):
            assert in_span_mod(rad, A.mul(r, A.unit(l)), p)
            assert in_span_mod(rad, A.mul(A.unit(l), r), p)
    power = rad
    for _ in range(n):
        if not power:
            break
        power = span_basis_mod(
            [A.mul(x, y) for x in power for y in rad], p
        )
    assert not power, "radical candidate is not nilpotent"
    return rad


def quotient_by_ideal(A, ideal_rows):
    """(A/I, projection matrix quot-coords x A-coords) for an ideal I."""
    p = A.p
    ideal_basis = span_basis_mod(ideal_rows, p) if ideal_rows else []
    piv = [next(j for j, c in enumerate(row) if c) for row in ideal_basis]
    pivset = set(piv)
    comp_positions = [j for j in range(A.dim) if j not in pivset]

    def proj(v):
        w = list(v)
        for r, pc in zip(ideal_basis, piv):
            f = w[pc] % p
            if f:
                w = [(a - f * b) % p for a, b in zip(w, r)]
        return tuple(w[j] % p for j in comp_positions)

    lift_rows = [A.unit(pos) for pos in comp_positions]
    mult = [[proj(A.mul(x, y)) for y in lift_rows] for x in lift_rows]
    quot = FpAlgebra(p, mult, proj(A.one))
    proj_cols = [proj(A.unit(j)) for j in range(A.dim)]
    proj_mat = tuple(
        tuple(proj_cols[j][i] for j in range(A.dim)) for i in range(quot.dim)
    )
    return quot, proj_mat


class LocalComponent:
    """One local factor of a commutative F_p-algebra.

    Carries the embedding basis, the identity idempotent, the residue field
    component/radical, and a matrix reducing parent coordinates to residue
    field coordinates (a ring map on the component; other components are
    first projected through the idempotent).
    """

    def __init__(self, parent, emb_rows, unit):
        self.parent = parent
        self.emb_rows = emb_rows
        self.unit = unit
        alg = subalgebra(parent, emb_rows, unit)
        self.algebra = alg
        rad = _radical_commutative(alg)
        self.rad_dim = len(rad)
        self.f = alg.dim - len(rad)
        res, proj_comp = quotient_by_ideal(alg, rad)
        self.res_field = res
        p = parent.p
        cols = tuple(zip(*emb_rows))
        comp_of_parent = [
            solve_right_mod(cols, parent.mul(unit, parent.unit(j)), p)
            for j in range(parent.dim)
        ]
        self.res_proj = tuple(
            tuple(
                sum(proj_comp[i][k] * comp_of_parent[j][k] for k in range(alg.dim)) % p
                for j in range(parent.dim)
            )
            for i in range(res.dim)
        )
        self.res_kernel = kernel_mod(self.res_proj, p)

    def reduce(self, parent_coords):
        p = self.parent.p
        return tuple(
            sum(r * c for r, c in zip(row, parent_coords)) % p for row in self.res_proj
        )


def local_components(A):
    """Local factors of a commutative F_p-algebra, deterministically.

    Splitting idempotents come from the fixed space of Frobenius on the
    semisimple quotient; such elements have split squarefree minimal
    polynomials downstairs, so a coprime factor pair always exists.
    """
    out = []
    _split_local(A, [A.unit(j) for j in range(A.dim)], A.one, out)
    out.sort(key=lambda c: c.emb_rows)
    return out


def _split_local(top, emb_rows, unit, out):
    A = subalgebra(top, emb_rows, unit)
    p = A.p
    rad = _radical_commutative(A)
    ss, proj_ss = quotient_by_ideal(A, rad)
    fr = ss.frobenius_matrix()
    delta = tuple(
        tuple((fr[i][j] - (1 if i == j else 0)) % p for j in range(ss.dim))
        for i in range(ss.dim)
    )
    fixed = kernel_mod(delta, p)
    if len(fixed) <= 1:
        out.append(LocalComponent(top, emb_rows, unit))
        return
    splitter_ss = next(v for v in fixed if not in_span_mod([ss.one], v, p))
    splitter = solve_right_mod(proj_ss, splitter_ss, p)
    mp = A.minpoly(splitter)
    fac = factor_mod_p(mp, p)
    q0, e0 = fac[0]
    g = [1]
    for _ in range(e0):
        g = _zmod(_zmul(g, list(q0)), p)
    e = _coprime_idempotent(A, splitter, mp, g)
    if e is None or e == A.zero() or e == A.one:
        raise ArithmeticError("primary splitting failed")
    for idem in (e, A.sub(A.one, e)):
        rows = [A.mul(idem, A.unit(j)) for j in range(A.dim)]
        basis = span_basis_mod(rows, p)
        emb_top = []
        for b in basis:
            vec = [0] * top.dim
            for c, row in zip(b, emb_rows):
                if c:
                    for t in range(top.dim):
                        vec[t] = (vec[t] + c * row[t]) % p
            emb_top.append(tuple(vec))
        unit_top = [0] * top.dim
        for c, row in zip(idem, emb_rows):
            if c:
                for t in range(top.dim):
                    unit_top[t] = (unit_top[t] + c * row[t]) % p
        _split_local(top, emb_top, tuple(unit_top), out)


def _coprime_idempotent(A, a, mp, g):
    """Idempotent acting as 1 on the g-primary part: needs mp = g*h, (g,h)=1."""
    p = A.p
    h, rem = _zdivmod_monic(list(mp), list(g), p)
    if rem or len(h) < 2:
        return None
    if len(_zgcd_mod(g, h, p)) != 1:
        return None
    s, _ = _poly_xgcd_mod(h, g, p)
    e = A.evaluate(_zmod(_zmul(s, h), p), a)
    for _ in range(2 * A.dim + 4):
        e2 = A.mul(e, e)
        if e2 == e:
            return e
        if p == 2:
            e = e2
        else:
            e = A.sub(A.smul(3, e2), A.smul(2, A.mul(e2, e)))
    return None


# ---------------------------------------------------------------------------
# splitting a quotient order as a matrix algebra


class MatrixSplitting:
    """Isomorphism A -> M_2(k) for a 4f-dimensional algebra with center k.

    Entry coordinates refer to the caller-fixed basis of k supplied as
    unit_embedding (images in A of that basis), so the identification of
    the center is pinned once and shared by every consumer.
    """

    def __init__(self, A, unit_embedding, seed=0):
        p = A.p
        self.A = A
        self.p = p
        f = len(unit_embedding)
        self.f = f
        if A.dim != 4 * f:
            raise ValueError("dimension is not 4 over the supposed center")
        cond = []
        for j in range(A.dim):
            ej = A.unit(j)
            l = A.rep_left(ej)
            r = A.rep_right(ej)
            for i in range(A.dim):
                cond.append(tuple((l[i][t] - r[i][t]) % p for t in range(A.dim)))
        center = kernel_mod(cond, p)
        if len(center) != f:
            raise ArithmeticError("center has unexpected dimension")
        for row in unit_embedding:
            if not in_span_mod(center, row, p):
                raise ArithmeticError("unit embedding does not centralize")
        self.k_basis = [vec_mod(r, p) for r in unit_embedding]
        self._build_units(self._find_idempotent(seed))

    def _find_idempotent(self, seed):
        A, p = self.A, self.p
        rng = random.Random(seed)
        for _ in range(500):
            v = tuple(rng.randrange(p) for _ in range(A.dim))
            mp = A.minpoly(v)
            fac = factor_mod_p(mp, p, seed=seed)
            if len(fac) < 2:
                continue
            q0, e0 = fac[0]
            g = [1]
            for _ in range(e0):
                g = _zmod(_zmul(g, list(q0)), p)
            e = _coprime_idempotent(A, v, mp, g)
            if e is None or e == A.zero() or e == A.one:
                continue
            return e
        raise ArithmeticError("no splitting idempotent found")

    def _build_units(self, e):
        A, p, f = self.A, self.p, self.f
        e11, e22 = e, A.sub(A.one, e)
        corner = self._corner_basis(e11, e11)
        if len(corner) != f:
            raise ArithmeticError("idempotent corner has wrong dimension")
        p12 = self._corner_basis(e11, e22)
        p21 = self._corner_basis(e22, e11)
        u = p12[0]
        cols = tuple(zip(*[A.mul(u, b) for b in p21]))
        sol = solve_right_mod(cols, e11, p)
        if sol is None:
            raise ArithmeticError("matrix unit completion failed")
        v = A.zero()
        for c, b in zip(sol, p21):
            v = A.add(v, A.smul(c, b))
        if A.mul(v, u) != e22:
            raise ArithmeticError("matrix unit relations fail")
        self.e = (e11, u, v, e22)
        self.corner_basis = [A.mul(z, e11) for z in self.k_basis]
        self._corner_cols = tuple(zip(*self.corner_basis))

    def _corner_basis(self, el, er):
        A, p = self.A, self.p
        rows = [A.mul(el, A.mul(A.unit(j), er)) for j in range(A.dim)]
        return span_basis_mod(rows, p)

    def image(self, x):
        """2x2 matrix over k; entries are coordinate tuples in the k basis."""
        A, p = self.A, self.p
        e11, u, v, e22 = self.e
        pre = (e11, u)
        post = (e11, v)
        out = []
        for i in range(2):
            row = []
            for j in range(2):
                y = A.mul(pre[i], A.mul(x, post[j]))
                c = solve_right_mod(self._corner_cols, y, p)
                if c is None:
                    raise ArithmeticError("element does not reduce into the corner")
                row.append(tuple(c))
            out.append(tuple(row))
        return tuple(out)


# ---------------------------------------------------------------------------
# 2x2 matrices over an FpAlgebra field, and its projective line


def mat2_mul(k, M, N):
    out = []
    for i in range(2):
        row = []
        for j in range(2):
            row.append(k.add(k.mul(M[i][0], N[0][j]), k.mul(M[i][1], N[1][j])))
        out.append(tuple(row))
    return tuple(out)


def mat2_det(k, M):
    return k.sub(k.mul(M[0][0], M[1][1]), k.mul(M[0][1], M[1][0]))


def p1_normalize(k, x, y):
    """Canonical representative of (x : y): leading invertible coordinate 1."""
    if k.is_invertible(x):
        xi = k.inv(x)
        return (k.one, k.mul(xi, y))
    if k.is_invertible(y):
        yi = k.inv(y)
        return (k.mul(yi, x), k.one)
    raise ValueError("not a projective point over a field")


def p1_points(k):
    """All points of P^1(k) in canonical order: (1 : y) by lex y, then (0 : 1)."""
    pts = [(k.one, tuple(y)) for y in k.elements()]
    pts.append((k.zero(), k.one))
    return pts


def mat2_act(k, M, pt):
    """Column action: (x, y) -> (a x + b y, c x + d y), normalized."""
    x, y = pt
    nx = k.add(k.mul(M[0][0], x), k.mul(M[0][1], y))
    ny = k.add(k.mul(M[1][0], x), k.mul(M[1][1], y))
    return p1_normalize(k, nx, ny)
