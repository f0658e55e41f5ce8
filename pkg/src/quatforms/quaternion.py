"""Totally definite quaternion algebras over a totally real field.

An algebra is presented by structure constants a, b (both totally
negative integers of the base field): i^2 = a, j^2 = b, k = ij = -ji.
Elements are flat coordinate tuples of length 4n over Q, n the field
degree, blocks ordered (1, i, j, k) and each block holding coordinates
over the field's integral basis.  Lattices of full rank 4n carry the
order and ideal arithmetic; maximal orders come out of `maximalize`,
whose certificate is the reduced discriminant dropping to the unit
ideal (norm 1).
"""

from fractions import Fraction
from math import gcd, isqrt
import logging

from .arith import factor_int
from .intmat import hnf_rows, int_kernel, integral_preimage_rows
from .latticetools import TraceFormLattice, enumerate_norm, rescale_multiplier
from .matrices import Matrix
from .residue import (
    LatticeQuotient,
    algebra_radical,
    kernel_mod,
    local_components,
    matmul_mod,
    quotient_by_ideal,
    span_basis_mod,
    subalgebra,
)

log = logging.getLogger(__name__)

_ZERO = Fraction(0)


class QuatAlgebra:
    """B = (a, b | F) with a, b totally negative; definite at every real place."""

    def __init__(self, base, a, b):
        self.base = base
        n = base.degree
        a = base.from_int(a) if isinstance(a, (int, Fraction)) else base.el(a)
        b = base.from_int(b) if isinstance(b, (int, Fraction)) else base.el(b)
        if not (base.is_integral(a) and base.is_integral(b)):
            raise ValueError("structure constants must be integral")
        allneg = (-1,) * n
        if base.sign_vector(a) != allneg or base.sign_vector(b) != allneg:
            raise ValueError("structure constants must be totally negative")
        self.a = a
        self.b = b
        self._ab = base.mul(a, b)
        self.dim = 4 * n
        self.one = tuple(
            Fraction(1) if t == 0 else _ZERO for t in range(self.dim)
        )
        self.zero = (_ZERO,) * self.dim
        self._maximal_order = None

    def __repr__(self):
        return "QuatAlgebra(%r, a=%s, b=%s)" % (self.base, self.a, self.b)

    # -- elements ----------------------------------------------------------

    def el(self, c0, c1=0, c2=0, c3=0):
        """Element from four field components (ints or coordinate seqs)."""
        out = []
        for c in (c0, c1, c2, c3):
            if isinstance(c, (int, Fraction)):
                out.extend(Fraction(c) if t == 0 else _ZERO
                           for t in range(self.base.degree))
            else:
                out.extend(self.base.el(c))
        return tuple(out)

    def parts(self, x):
        n = self.base.degree
        return tuple(tuple(Fraction(c) for c in x[q * n:(q + 1) * n])
                     for q in range(4))

    def gens(self):
        """The standard generators (i, j, k)."""
        one = self.base.from_int(1)
        return (self.el(0, one), self.el(0, 0, one), self.el(0, 0, 0, one))

    def add(self, x, y):
        return tuple(Fraction(u) + Fraction(v) for u, v in zip(x, y))

    def sub(self, x, y):
        return tuple(Fraction(u) - Fraction(v) for u, v in zip(x, y))

    def neg(self, x):
        return tuple(-Fraction(u) for u in x)

    def smul(self, c, x):
        c = Fraction(c)
        return tuple(c * Fraction(u) for u in x)

    def fmul(self, c, x):
        """Multiply by a central field element (coordinate seq)."""
        F = self.base
        return tuple(v for part in self.parts(x) for v in F.mul(c, part))

    def mul(self, x, y):
        F = self.base
        a, b, ab = self.a, self.b, self._ab
        x0, x1, x2, x3 = self.parts(x)
        y0, y1, y2, y3 = self.parts(y)
        m = F.mul
        z0 = F.sub(
            F.add(m(x0, y0), m(a, m(x1, y1))),
            F.sub(m(ab, m(x3, y3)), m(b, m(x2, y2))),
        )
        z1 = F.add(
            F.add(m(x0, y1), m(x1, y0)),
            m(b, F.sub(m(x3, y2), m(x2, y3))),
        )
        z2 = F.add(
            F.add(m(x0, y2), m(x2, y0)),
            m(a, F.sub(m(x1, y3), m(x3, y1))),
        )
        z3 = F.add(
            F.add(m(x0, y3), m(x3, y0)),
            F.sub(m(x1, y2), m(x2, y1)),
        )
        return z0 + z1 + z2 + z3

    def conj(self, x):
        n = self.base.degree
        return tuple(Fraction(c) if t < n else -Fraction(c)
                     for t, c in enumerate(x))

    def trd(self, x):
        """Reduced trace, as a field element."""
        x0 = self.parts(x)[0]
        return tuple(2 * c for c in x0)

    def nr(self, x):
        """Reduced norm x * conj(x), as a field element."""
        F = self.base
        x0, x1, x2, x3 = self.parts(x)
        out = F.sub(F.mul(x0, x0), F.mul(self.a, F.mul(x1, x1)))
        out = F.sub(out, F.mul(self.b, F.mul(x2, x2)))
        return F.add(out, F.mul(self._ab, F.mul(x3, x3)))

    def pair(self, x, y):
        """trd(x * conj(y)); the trace form over F, positive definite here."""
        F = self.base
        x0, x1, x2, x3 = self.parts(x)
        y0, y1, y2, y3 = self.parts(y)
        out = F.sub(F.mul(x0, y0), F.mul(self.a, F.mul(x1, y1)))
        out = F.sub(out, F.mul(self.b, F.mul(x2, y2)))
        out = F.add(out, F.mul(self._ab, F.mul(x3, y3)))
        return tuple(2 * c for c in out)

    def inv(self, x):
        nrm = self.nr(x)
        if not any(nrm):
            raise ZeroDivisionError("zero has no inverse")
        return self.fmul(self.base.inv(nrm), self.conj(x))

    def is_integral_elem(self, x):
        return self.base.is_integral(self.trd(x)) and \
            self.base.is_integral(self.nr(x))

    # -- lattices ----------------------------------------------------------

    def lattice(self, vectors):
        return QuatLattice(self, vectors)

    def standard_order(self):
        """O_F-span of 1, i, j, k: the identity lattice in these coordinates."""
        N = self.dim
        return QuatLattice(
            self, [[int(r == c) for c in range(N)] for r in range(N)]
        )

    def maximal_order(self):
        if self._maximal_order is None:
            self._maximal_order = maximalize(self.standard_order())
        return self._maximal_order


class QuatLattice:
    """Full-rank Z-lattice in B: integer HNF rows over a common denominator."""

    __slots__ = ("alg", "rows", "den", "_left", "_right", "_nr", "_disc")

    def __init__(self, alg, vectors):
        den = 1
        vecs = []
        for v in vectors:
            row = [Fraction(c) for c in v]
            vecs.append(row)
            for c in row:
                den = den * c.denominator // gcd(den, c.denominator)
        ints = tuple(
            tuple(int(c * den) for c in row) for row in vecs
        )
        rows = tuple(tuple(int(c) for c in row) for row in hnf_rows(ints))
        if len(rows) != alg.dim:
            raise ValueError("lattice does not have full rank")
        g = den
        for row in rows:
            for c in row:
                g = gcd(g, c)
        if g > 1:
            rows = tuple(tuple(c // g for c in row) for row in rows)
            den //= g
        self.alg = alg
        self.rows = rows
        self.den = den
        self._left = self._right = self._nr = self._disc = None

    def basis_vectors(self):
        d = self.den
        return [tuple(Fraction(c, d) for c in row) for row in self.rows]

    def _coords(self, vec):
        """Coordinates of vec over the basis rows (exact, possibly fractional)."""
        t = [Fraction(v) * self.den for v in vec]
        out = []
        for row in self.rows:
            j = next(i for i, c in enumerate(row) if c)
            c = t[j] / row[j]
            out.append(c)
            if c:
                for i in range(j, len(t)):
                    t[i] -= c * row[i]
        assert not any(t), "vector outside the ambient span"
        return out

    def contains(self, vec):
        return all(c.denominator == 1 for c in self._coords(vec))

    def contains_lattice(self, other):
        return all(self.contains(v) for v in other.basis_vectors())

    def covolume(self):
        num = 1
        for i, row in enumerate(self.rows):
            num *= row[i]
        return Fraction(num, self.den ** self.alg.dim)

    def index_in(self, sup):
        """[sup : self] as a Fraction of covolumes (integer when nested)."""
        return self.covolume() / sup.covolume()

    def __eq__(self, other):
        return (
            isinstance(other, QuatLattice)
            and self.alg is other.alg
            and self.den == other.den
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((id(self.alg), self.den, self.rows))

    def __repr__(self):
        return "QuatLattice(den=%d, rank=%d)" % (self.den, len(self.rows))

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        assert self.alg is other.alg
        return QuatLattice(
            self.alg, self.basis_vectors() + other.basis_vectors()
        )

    def __mul__(self, other):
        alg = self.alg
        if isinstance(other, QuatLattice):
            assert alg is other.alg
            bs = other.basis_vectors()
            return QuatLattice(
                alg,
                [alg.mul(x, y) for x in self.basis_vectors() for y in bs],
            )
        c = Fraction(other)
        return QuatLattice(alg, [alg.smul(c, v) for v in self.basis_vectors()])

    __rmul__ = __mul__

    def fscale(self, c):
        """Scale by a field element."""
        alg = self.alg
        return QuatLattice(alg, [alg.fmul(c, v) for v in self.basis_vectors()])

    def iscale(self, ideal):
        """Scale by a fractional ideal of the base field."""
        alg = self.alg
        return QuatLattice(
            alg,
            [
                alg.fmul(x, v)
                for x in ideal.basis_vectors()
                for v in self.basis_vectors()
            ],
        )

    def lmul_element(self, x):
        alg = self.alg
        return QuatLattice(alg, [alg.mul(x, v) for v in self.basis_vectors()])

    def rmul_element(self, x):
        alg = self.alg
        return QuatLattice(alg, [alg.mul(v, x) for v in self.basis_vectors()])

    def compose(self, other):
        """Ideal product; the factors' inner orders must match."""
        if self.right_order() != other.left_order():
            raise ValueError("ideals have incompatible orders for composition")
        return self * other

    def conjugate(self):
        alg = self.alg
        return QuatLattice(alg, [alg.conj(v) for v in self.basis_vectors()])

    def intersect(self, other):
        assert self.alg is other.alg
        m = self.den * other.den // gcd(self.den, other.den)
        a2 = [[c * (m // self.den) for c in r] for r in self.rows]
        b2 = [[c * (m // other.den) for c in r] for r in other.rows]
        vecs = []
        for k in int_kernel(a2 + b2):
            x = [0] * self.alg.dim
            for ci, ri in zip(k[: len(a2)], a2):
                if ci:
                    for j, v in enumerate(ri):
                        x[j] += ci * v
            if any(x):
                vecs.append([Fraction(c, m) for c in x])
        return QuatLattice(self.alg, vecs)

    # -- invariants --------------------------------------------------------

    def left_order(self):
        if self._left is None:
            self._left = self._stabilizer(left=True)
        return self._left

    def right_order(self):
        if self._right is None:
            self._right = self._stabilizer(left=False)
        return self._right

    def _stabilizer(self, left):
        alg = self.alg
        N = alg.dim
        bs = self.basis_vectors()
        mat = []
        for r in range(N):
            u = tuple(Fraction(int(t == r)) for t in range(N))
            row = []
            for b in bs:
                prod = alg.mul(u, b) if left else alg.mul(b, u)
                row.extend(self._coords(prod))
            mat.append(row)
        return QuatLattice(alg, integral_preimage_rows(mat))

    def nr_ideal(self):
        """Field ideal generated by reduced norms of lattice elements."""
        if self._nr is None:
            alg = self.alg
            bs = self.basis_vectors()
            gens = [alg.nr(b) for b in bs]
            for s in range(len(bs)):
                for t in range(s + 1, len(bs)):
                    both = alg.nr(alg.add(bs[s], bs[t]))
                    gens.append(
                        alg.base.sub(alg.base.sub(both, gens[s]), gens[t])
                    )
            self._nr = alg.base.ideal(*gens)
        return self._nr

    def inverse(self):
        """conj(I) / nr(I); inverts locally principal ideals, which is every
        lattice whose left (equivalently right) order is maximal."""
        alg = self.alg
        ninv = self.nr_ideal().inverse()
        cb = self.conjugate().basis_vectors()
        return QuatLattice(
            alg, [alg.fmul(g, v) for g in ninv.basis_vectors() for v in cb]
        )

    def disc_z(self):
        """Determinant of the Z-Gram of Tr_{F/Q}(trd(x * conj(y)))."""
        if self._disc is None:
            alg = self.alg
            bs = self.basis_vectors()
            gram = [
                [alg.base.trace(alg.pair(x, y)) for y in bs] for x in bs
            ]
            self._disc = Matrix(gram).det()
        return self._disc


def is_order(lat):
    """1 in the lattice, closed under products, basis integral over O_F."""
    alg = lat.alg
    if not lat.contains(alg.one):
        return False
    bs = lat.basis_vectors()
    if not all(alg.is_integral_elem(x) for x in bs):
        return False
    return all(lat.contains(alg.mul(x, y)) for x in bs for y in bs)


def reduced_discriminant_norm(order):
    """N(discrd(O)), from det Gram = N(disc O) * disc(F)^4 and disc = discrd^2.

    The value 1 certifies a maximal order in an everywhere-unramified
    algebra: an integral ideal of norm 1 is the unit ideal.
    """
    q = Fraction(order.disc_z(), order.alg.base.disc ** 4)
    assert q.denominator == 1 and q > 0, "not the discriminant of an order"
    s = isqrt(int(q))
    assert s * s == int(q), "discriminant norm is not a square"
    return s


# ---------------------------------------------------------------------------
# maximal orders


def _center_rows(S):
    p = S.p
    stack = []
    for l in range(S.dim):
        lm = S.rep_left(S.unit(l))
        rm = S.rep_right(S.unit(l))
        for i in range(S.dim):
            stack.append(
                tuple((lm[i][j] - rm[i][j]) % p for j in range(S.dim))
            )
    return span_basis_mod(kernel_mod(tuple(stack), p), p)


def _idealizer_growth(order, quo, ideal_rows, p):
    """Left/right order of the lifted ideal, when strictly larger."""
    alg = order.alg
    vecs = [
        tuple(Fraction(p * c, order.den) for c in row) for row in order.rows
    ]
    vecs += [quo.lift(r) for r in ideal_rows]
    lat = alg.lattice(vecs)
    for cand in (lat.left_order(), lat.right_order()):
        if cand != order:
            assert cand.contains_lattice(order)
            return cand
    return None


def _enlarge_at(order, p):
    """One strictly larger order locally at p, or None if maximal there.

    First pass: idealizer of the radical of O/pO.  When that stalls the
    order is hereditary at p; the kernels of the projections onto the
    simple factors of (O/pO)/rad are then maximal two-sided ideals whose
    idealizers realize the maximal overorders.
    """
    alg = order.alg
    quo = LatticeQuotient(
        [list(r) for r in order.rows],
        order.den,
        [[p * c for c in row] for row in order.rows],
        order.den,
        p,
        alg.mul,
        alg.one,
    )
    A = quo.algebra
    rad = algebra_radical(A)
    grown = _idealizer_growth(order, quo, rad, p)
    if grown is not None:
        return grown
    S, proj = quotient_by_ideal(A, rad)
    cen = _center_rows(S)
    if len(cen) < 2:
        return None
    comps = local_components(subalgebra(S, cen, S.one))
    if len(comps) < 2:
        return None
    for comp in comps:
        e = [0] * S.dim
        for c, row in zip(comp.unit, cen):
            if c:
                for j, v in enumerate(row):
                    e[j] = (e[j] + c * v) % S.p
        ker = kernel_mod(matmul_mod(S.rep_left(tuple(e)), proj, S.p), S.p)
        grown = _idealizer_growth(order, quo, list(ker), p)
        if grown is not None:
            return grown
    return None


def maximalize(order, trail=None):
    """A maximal order containing the input.

    Enlarges prime by prime until the reduced discriminant norm stops
    dropping; `trail` (a list, when given) collects the strictly
    decreasing norms along the way.
    """
    if not is_order(order):
        raise ValueError("input lattice is not an order")
    O = order
    settled = set()
    while True:
        nd = reduced_discriminant_norm(O)
        if trail is not None and (not trail or trail[-1] != nd):
            trail.append(nd)
        if nd == 1:
            break
        ps = sorted(p for p in factor_int(nd) if p not in settled)
        if not ps:
            break
        O2 = _enlarge_at(O, ps[0])
        if O2 is None:
            settled.add(ps[0])
            log.debug("maximalize: settled at p=%d, residual norm %d", ps[0], nd)
        else:
            O = O2
    return O


def _structure_candidates(F, budget):
    minus_one = F.from_int(-1)
    yield (minus_one, minus_one)
    count = 1
    seen = {tuple(minus_one)}
    for radius in (1, 2, 3):
        box = [range(-radius, radius + 1)] * F.degree
        cands = []
        stack = [[]]
        for axis in box:
            stack = [pre + [c] for pre in stack for c in axis]
        for coords in stack:
            if not any(coords):
                continue
            v = F.el(coords)
            if tuple(v) in seen:
                continue
            if F.sign_vector(v) == (-1,) * F.degree:
                cands.append(v)
                seen.add(tuple(v))
        cands.sort(key=lambda v: (F.trace(F.neg(v)), v))
        for v in cands:
            if count >= budget:
                return
            count += 1
            yield (minus_one, v)


def hilbert_ramification_free_algebra(F, budget=24):
    """The definite quaternion algebra over F with no finite ramification.

    Requires even degree (odd-degree fields have none); tries (-1, -1)
    and then (-1, u) over small totally negative u, accepting the first
    pair whose maximalized standard order certifies norm-1 reduced
    discriminant.
    """
    if F.degree % 2:
        raise ValueError("field degree must be even")
    for a, b in _structure_candidates(F, budget):
        alg = QuatAlgebra(F, a, b)
        R = maximalize(alg.standard_order())
        if reduced_discriminant_norm(R) == 1:
            alg._maximal_order = R
            return alg
        log.debug("structure constants %s, %s leave ramification", a, b)
    raise ValueError("structure constant search budget exhausted")


# ---------------------------------------------------------------------------
# norm equations


def trace_form_lattice(lat):
    """The positive definite Gram of b(x,y) = Tr(trd(x conj(y))) on a basis."""
    alg = lat.alg
    bs = lat.basis_vectors()
    gram = [[alg.base.trace(alg.pair(x, y)) for y in bs] for x in bs]
    return TraceFormLattice(gram=gram, basis=[list(b) for b in bs], ambient=alg)


def norm_equation_solutions(lat, alpha):
    """All x in the lattice with nr(x) = alpha, one per +-pair, sorted.

    Rescales by a field multiplier so the quadratic form Tr(trd(x conj x))
    stays balanced across the real places, enumerates the finite shell,
    and keeps exactly the vectors whose reduced norm matches.  alpha must
    be totally positive; the form is definite so the shell is finite.
    """
    alg = lat.alg
    F = alg.base
    alpha = F.el(alpha) if not isinstance(alpha, int) else F.from_int(alpha)
    if not F.is_totally_positive(alpha):
        raise ValueError("norm target must be totally positive")
    c = rescale_multiplier(F, alpha).c
    beta = F.mul(F.mul(c, c), alpha)
    scaled = lat.fscale(c)
    shell = enumerate_norm(trace_form_lattice(scaled), 2 * F.trace(beta))
    c_inv = F.inv(c)
    out = []
    for y in shell.vectors:
        if F.el(alg.nr(y)) != beta:
            continue
        x = alg.fmul(c_inv, y)
        lead = next(v for v in x if v)
        if lead < 0:
            x = alg.neg(x)
        out.append(x)
    out.sort()
    return out
