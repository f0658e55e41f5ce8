"""Dense univariate polynomials over Q, and factorization over Z.

The public Poly class keeps Fraction coefficients, lowest degree first.
The factorization pipeline (squarefree split, distinct/equal degree
factorization mod p, Hensel lifting, subset recombination) works on plain
integer coefficient lists and only accepts monic integer input; the
rational wrapper reduces the general case to that one by the substitution
x -> x/d with d a common denominator.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import gcd, isqrt

from .arith import inv_mod, is_probable_prime, next_prime, symmetric_mod, xgcd


class Poly:
    """Polynomial with Fraction coefficients, coeffs[i] is the x^i term."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @staticmethod
    def constant(c) -> "Poly":
        return Poly([c])

    @staticmethod
    def x() -> "Poly":
        return Poly([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> Fraction:
        assert self.coeffs, "zero polynomial has no leading coefficient"
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __add__(self, other):
        other = _coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [Fraction(0)] * (n - len(self.coeffs))
        b = list(other.coeffs) + [Fraction(0)] * (n - len(other.coeffs))
        return Poly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly([c * other for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return Poly([])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        assert n >= 0
        out = Poly([1])
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        assert not other.is_zero(), "division by zero polynomial"
        q = [Fraction(0)] * max(0, len(self.coeffs) - len(other.coeffs) + 1)
        r = list(self.coeffs)
        dlead = other.coeffs[-1]
        dn = len(other.coeffs)
        while len(r) >= dn and any(r):
            while r and r[-1] == 0:
                r.pop()
            if len(r) < dn:
                break
            c = r[-1] / dlead
            k = len(r) - dn
            q[k] = c
            for j, b in enumerate(other.coeffs):
                r[k + j] -= c * b
            r.pop()
        return Poly(q), Poly(r)

    def __floordiv__(self, other):
        return self.divmod(_coerce(other))[0]

    def __mod__(self, other):
        return self.divmod(_coerce(other))[1]

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        lc = self.coeffs[-1]
        return Poly([c / lc for c in self.coeffs])

    def int_coeffs(self) -> list[int]:
        assert all(c.denominator == 1 for c in self.coeffs), "not integral"
        return [c.numerator for c in self.coeffs]

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(other)
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if self.is_zero():
            return "Poly(0)"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            if i == 0:
                terms.append(f"{c}")
            else:
                xs = "x" if i == 1 else f"x^{i}"
                if c == 1:
                    terms.append(xs)
                elif c == -1:
                    terms.append(f"-{xs}")
                else:
                    terms.append(f"{c}*{xs}")
        return "Poly(" + " + ".join(terms).replace("+ -", "- ") + ")"


def _coerce(v) -> Poly:
    if isinstance(v, Poly):
        return v
    return Poly.constant(v)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over Q.

    Integer inputs go through the modular gcd to dodge coefficient blowup;
    anything else falls back to the Euclidean algorithm on Fractions.
    """
    if a.is_zero():
        return b.monic() if not b.is_zero() else b
    if b.is_zero():
        return a.monic()
    try:
        fa, fb = a.int_coeffs(), b.int_coeffs()
    except AssertionError:
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()
    g = gcd_int_poly(fa, fb)
    lc = g[-1]
    return Poly([Fraction(c, lc) for c in g])


# ---------------------------------------------------------------------------
# integer coefficient lists (low degree first), helpers for the factor code


def _ztrim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _zmul(f, g):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return out


def _zcontent(f) -> int:
    c = 0
    for v in f:
        c = gcd(c, v)
    return c


def _zderiv(f):
    return [i * c for i, c in enumerate(f)][1:]


def _zmod(f, m):
    return _ztrim([c % m for c in f])


def _zdivmod_monic(f, g, m):
    """(q, r) with f = q*g + r mod m; g monic mod m."""
    assert g and g[-1] % m == 1
    r = [c % m for c in f]
    q = [0] * max(0, len(r) - len(g) + 1)
    dn = len(g)
    for k in range(len(r) - dn, -1, -1):
        c = r[k + dn - 1] % m
        if c:
            q[k] = c
            for j, b in enumerate(g):
                r[k + j] = (r[k + j] - c * b) % m
    return _ztrim(q), _ztrim(r[: dn - 1])


def _zmulmod(f, g, h, m):
    return _zdivmod_monic(_zmul(f, g), h, m)[1]


def _zpowmod(f, e, h, m):
    out = [1]
    base = _zdivmod_monic(f, h, m)[1]
    while e:
        if e & 1:
            out = _zmulmod(out, base, h, m)
        base = _zmulmod(base, base, h, m)
        e >>= 1
    return out


def _zgcd_mod(f, g, p):
    """Monic gcd of f, g mod prime p."""
    f, g = _zmod(f, p), _zmod(g, p)
    while g:
        inv = inv_mod(g[-1], p)
        gm = [c * inv % p for c in g]
        _, r = _zdivmod_monic(f, gm, p)
        f, g = gm, r
    if f:
        inv = inv_mod(f[-1], p)
        f = [c * inv % p for c in f]
    return f


def gcd_int_poly(f: list[int], g: list[int]) -> list[int]:
    """gcd in Z[x] (primitive, positive leading coefficient), modular CRT."""
    f, g = _ztrim(list(f)), _ztrim(list(g))
    if not f:
        return _make_primitive(g)
    if not g:
        return _make_primitive(f)
    cf, cg = abs(_zcontent(f)), abs(_zcontent(g))
    cont = gcd(cf, cg)
    f = [c // cf for c in f]
    g = [c // cg for c in g]
    lc = gcd(f[-1], g[-1])
    p = 1 << 30
    best_deg = None
    res_mod = 0
    res_coeffs: list[int] = []
    stable = 0
    while True:
        p = next_prime(p)
        if f[-1] % p == 0 or g[-1] % p == 0:
            continue
        hp = _zgcd_mod(f, g, p)
        d = len(hp) - 1
        if d == 0:
            return [cont] if cont else [1]
        if best_deg is None or d < best_deg:
            best_deg = d
            scaled = [c * lc % p for c in hp]
            res_mod, res_coeffs, stable = p, scaled, 0
        elif d == best_deg:
            scaled = [c * lc % p for c in hp]
            new = []
            m = res_mod * p
            for a, b in zip(res_coeffs, scaled):
                # CRT then store reduced; symmetric lift only when testing
                x = (a + (b - a) * inv_mod(res_mod % p, p) % p * res_mod) % m
                new.append(x)
            if [symmetric_mod(c, m) for c in new] == [
                symmetric_mod(c, res_mod) for c in res_coeffs
            ]:
                stable += 1
            else:
                stable = 0
            res_mod, res_coeffs = m, new
        else:
            continue
        if stable >= 1 or res_mod > (1 << 128):
            cand = _make_primitive([symmetric_mod(c, res_mod) for c in res_coeffs])
            if cand and _zdivides(cand, f) and _zdivides(cand, g):
                return [cont * c for c in cand] if cont else cand
            stable = 0


def _make_primitive(f):
    f = _ztrim(list(f))
    if not f:
        return []
    c = abs(_zcontent(f))
    f = [v // c for v in f]
    if f[-1] < 0:
        f = [-v for v in f]
    return f


def _zdivides(g, f) -> bool:
    """g | f in Q[x] with both primitive integer: test exact division in Z[x]."""
    if not g:
        return not f
    r = list(f)
    dn = len(g)
    lc = g[-1]
    while len(r) >= dn:
        if r[-1] % lc:
            return False
        c = r[-1] // lc
        k = len(r) - dn
        for j, b in enumerate(g):
            r[k + j] -= c * b
        r.pop()
        _ztrim(r)
        if not r:
            return True
    return not _ztrim(r)


# ---------------------------------------------------------------------------
# squarefree decomposition (Yun)


def squarefree_decomposition(f: Poly) -> tuple[Fraction, list[tuple[Poly, int]]]:
    """f = lc * prod g_i^i with g_i monic squarefree pairwise coprime."""
    assert not f.is_zero()
    lc = f.leading()
    f = f.monic()
    if f.degree == 0:
        return lc, []
    out: list[tuple[Poly, int]] = []
    df = f.derivative()
    a = poly_gcd(f, df)
    b = f // a
    c = df // a
    i = 1
    while b.degree > 0:
        d = c - b.derivative()
        g = poly_gcd(b, d)
        if g.degree > 0:
            out.append((g, i))
        b = b // g
        c = d // g
        i += 1
    return lc, out


# ---------------------------------------------------------------------------
# factorization mod p (distinct degree + Cantor-Zassenhaus), p odd prime


_F2_IRR: dict[int, list[list[int]]] = {}


def _f2_irreducibles(d: int) -> list[list[int]]:
    """Monic irreducible polynomials of degree d over F_2, cached."""
    if d in _F2_IRR:
        return _F2_IRR[d]
    if d == 1:
        out = [[0, 1], [1, 1]]
    else:
        out = []
        for bits in range(1 << (d - 1)):
            # constant term 1, else divisible by x
            cand = [1] + [(bits >> i) & 1 for i in range(d - 1)] + [1]
            ok = True
            for e in range(1, d // 2 + 1):
                for q in _f2_irreducibles(e):
                    if len(q) > 2 or q[0] == 1:  # skip x, cand has constant 1
                        if not _zdivmod_monic(cand, q, 2)[1]:
                            ok = False
                            break
                if not ok:
                    break
            if ok:
                out.append(cand)
    _F2_IRR[d] = out
    return out


def _factor2_squarefree(w: list[int]) -> list[list[int]]:
    """Deterministic irreducible factors of squarefree monic w mod 2."""
    out = []
    rem = _zmod(w, 2)
    d = 1
    while len(rem) - 1 >= 2 * d:
        for q in _f2_irreducibles(d):
            quo, r = _zdivmod_monic(rem, q, 2)
            if not r:
                out.append(q)
                rem = quo
                if len(rem) - 1 < 2 * d:
                    break
        d += 1
    if len(rem) > 1:
        out.append(rem)
    return out


def factor_mod_p(f: list[int], p: int, seed: int = 0) -> list[tuple[tuple[int, ...], int]]:
    """Full factorization of f mod p: sorted [(monic irreducible coeffs, multiplicity)].

    Handles every prime; randomized splitting (seeded) for odd p, exhaustive
    trial division for p = 2 where the usual Cantor-Zassenhaus step degenerates.
    """
    f = _zmod(f, p)
    if not f:
        raise ValueError("zero polynomial mod p")
    inv = inv_mod(f[-1] % p, p)
    f = [c * inv % p for c in f]
    out: dict[tuple[int, ...], int] = {}
    _factor_mod_p_rec(f, p, random.Random(seed), out, 1)
    return sorted(out.items())


def _factor_mod_p_rec(f, p, rng, out, scale):
    if len(f) <= 1:
        return
    deriv = _zmod(_zderiv(f), p)
    if not deriv:
        # f = g(x^p) = (coefficient-wise root of g)(x)^p over F_p
        g = [f[i] for i in range(0, len(f), p)]
        _factor_mod_p_rec(g, p, rng, out, scale * p)
        return
    gcd_fd = _zgcd_mod(f, deriv, p)
    w = _zdivmod_monic(f, gcd_fd, p)[0]
    irr = _factor2_squarefree(w) if p == 2 else factor_squarefree_mod_p(w, p, rng)
    rem = f
    for q in irr:
        e = 0
        while True:
            quo, r = _zdivmod_monic(rem, q, p)
            if r:
                break
            rem, e = quo, e + 1
        out[tuple(q)] = out.get(tuple(q), 0) + e * scale
    _factor_mod_p_rec(rem, p, rng, out, scale)


def factor_squarefree_mod_p(f: list[int], p: int, rng: random.Random) -> list[list[int]]:
    """Monic irreducible factors of a monic squarefree f mod odd prime p."""
    assert p > 2 and f and f[-1] % p == 1
    rem = _zmod(f, p)
    found: list[list[int]] = []
    xq = _zpowmod([0, 1], p, rem, p)
    d = 1
    while len(rem) - 1 >= 2 * d:
        sub = list(xq)
        # xq holds x^(p^d) mod rem; gcd with x^(p^d) - x catches degree-d parts
        sub0 = sub[:]
        if len(sub0) < 2:
            sub0 += [0] * (2 - len(sub0))
        sub0[1] = (sub0[1] - 1) % p
        g = _zgcd_mod(sub0, rem, p)
        if len(g) > 1:
            found += _equal_degree_split(g, d, p, rng)
            rem = _zdivmod_monic(rem, g, p)[0]
            if len(rem) - 1 < 2 * (d + 1) and len(rem) > 1:
                break
            xq = _zdivmod_monic(xq, rem, p)[1] if len(rem) > 1 else []
        d += 1
        if len(rem) > 1 and len(rem) - 1 >= 2 * d:
            xq = _zpowmod(xq, p, rem, p)
    if len(rem) > 1:
        found.append(rem)
    assert sum(len(g) - 1 for g in found) == len(_zmod(f, p)) - 1
    return sorted(found)


def _equal_degree_split(g: list[int], d: int, p: int, rng: random.Random) -> list[list[int]]:
    """All irreducible factors of g, which is a product of degree-d primes mod p."""
    n = len(g) - 1
    if n == d:
        return [g]
    e = (pow(p, d) - 1) // 2
    while True:
        a = [rng.randrange(p) for _ in range(n)]
        if not _ztrim(list(a)):
            continue
        b = _zpowmod(a, e, g, p)
        b0 = list(b) if b else [0]
        b0[0] = (b0[0] - 1) % p
        h = _zgcd_mod(_ztrim(b0), g, p)
        if 0 < len(h) - 1 < n:
            rest = _zdivmod_monic(g, h, p)[0]
            return _equal_degree_split(h, d, p, rng) + _equal_degree_split(rest, d, p, rng)


# ---------------------------------------------------------------------------
# Hensel lifting (quadratic, factor-tree)


def _hensel_step(f, g, h, s, t, m):
    """One quadratic step: from f=gh, sg+th=1 (mod m) to the same mod m^2.

    All polynomials integer lists; g, h monic; degrees are preserved.
    """
    m2 = m * m
    e = _zmod([a - b for a, b in _zip_pad(f, _zmul(g, h))], m2)
    q, r = _zdivmod_monic(_zmul(s, e), h, m2)
    g1 = _zmod([a + b for a, b in _zip_pad(g, [x + y for x, y in _zip_pad(_zmul(t, e), _zmul(q, g))])], m2)
    h1 = _zmod([a + b for a, b in _zip_pad(h, r)], m2)
    b = _zmod([a - c for a, c in _zip_pad([x + y for x, y in _zip_pad(_zmul(s, g1), _zmul(t, h1))], [1])], m2)
    c, dpoly = _zdivmod_monic(_zmul(s, b), h1, m2)
    s1 = _zmod([a - b2 for a, b2 in _zip_pad(s, dpoly)], m2)
    t1 = _zmod([a - b2 for a, b2 in _zip_pad(t, [x + y for x, y in _zip_pad(_zmul(t, b), _zmul(c, g1))])], m2)
    return g1, h1, s1, t1


def _zip_pad(f, g):
    n = max(len(f), len(g))
    return zip(f + [0] * (n - len(f)), g + [0] * (n - len(g)))


def _poly_xgcd_mod(f, g, p):
    """(s, t) with s*f + t*g = 1 mod p for coprime f, g mod p."""
    r0, r1 = _zmod(f, p), _zmod(g, p)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        inv = inv_mod(r1[-1], p)
        r1m = [c * inv % p for c in r1]
        q, r = _zdivmod_monic(r0, r1m, p)
        q = _zmod(_zmul(q, [inv]), p)
        r0, r1 = r1, r
        s0, s1 = s1, _zmod([a - b for a, b in _zip_pad(s0, _zmul(q, s1))], p)
        t0, t1 = t1, _zmod([a - b for a, b in _zip_pad(t0, _zmul(q, t1))], p)
    assert len(r0) == 1, "inputs not coprime"
    inv = inv_mod(r0[0], p)
    return _zmod(_zmul(s0, [inv]), p), _zmod(_zmul(t0, [inv]), p)


def hensel_lift_factors(f: list[int], factors: list[list[int]], p: int, target: int) -> tuple[list[list[int]], int]:
    """Lift monic factors of f mod p to mod p^(2^k) >= target.

    Returns (lifted factors, modulus).  f monic with f = prod(factors) mod p,
    factors pairwise coprime mod p.
    """
    k = 1
    m = p
    while m < target:
        m *= m
        k *= 2
    modulus = p ** k

    def lift(fcur, facs):
        if len(facs) == 1:
            return [_zmod(fcur, modulus)]
        half = len(facs) // 2
        left, right = facs[:half], facs[half:]
        g = [1]
        for q in left:
            g = _zmulmodfree(g, q, p)
        h = [1]
        for q in right:
            h = _zmulmodfree(h, q, p)
        s, t = _poly_xgcd_mod(g, h, p)
        m_cur = p
        while m_cur < modulus:
            g, h, s, t = _hensel_step(fcur, g, h, s, t, m_cur)
            m_cur *= m_cur
        return lift(g, left) + lift(h, right)

    return lift(_zmod(f, modulus), factors), modulus


def _zmulmodfree(f, g, m):
    return _zmod(_zmul(f, g), m)


# ---------------------------------------------------------------------------
# factorization over Z / Q


def _coeff_bound(f: list[int]) -> int:
    """Bound on coefficient size of any monic factor of monic f (Mignotte-ish)."""
    norm2 = isqrt(sum(c * c for c in f)) + 1
    return (1 << (len(f))) * norm2


def _factor_degree_sets(f: list[int], tries: int = 5) -> set[int] | None:
    """Possible degrees of factors of squarefree monic f, from several primes.

    Returns None when not enough good primes were found quickly.
    """
    n = len(f) - 1
    possible = set(range(n + 1))
    p = 101
    good = 0
    attempts = 0
    rng = random.Random(1)
    while good < tries and attempts < 60:
        p = next_prime(p)
        attempts += 1
        if f[-1] % p == 0:
            continue
        if len(_zgcd_mod(f, _zderiv(f), p)) != 1:
            continue
        degs = [len(g) - 1 for g in factor_squarefree_mod_p(f, p, rng)]
        sums = {0}
        for d in degs:
            sums |= {s + d for s in sums}
        possible &= sums
        good += 1
        if possible == {0, n}:
            return possible
    return possible if good else None


def factor_squarefree_monic_int(f: list[int]) -> list[list[int]]:
    """Irreducible monic integer factors of a squarefree monic f in Z[x]."""
    n = len(f) - 1
    if n <= 1:
        return [list(f)]
    degset = _factor_degree_sets(f)
    if degset == {0, n}:
        return [list(f)]
    # pick the odd prime giving the fewest modular factors
    rng = random.Random(2)
    best = None
    p = 1000
    good = 0
    while good < 4:
        p = next_prime(p)
        if f[-1] % p == 0 or len(_zgcd_mod(f, _zderiv(f), p)) != 1:
            continue
        facs = factor_squarefree_mod_p(f, p, rng)
        good += 1
        if best is None or len(facs) < len(best[1]):
            best = (p, facs)
        if len(facs) == 1:
            break
    p, modular = best
    if len(modular) == 1:
        return [list(f)]
    lifted, modulus = hensel_lift_factors(f, modular, p, 2 * _coeff_bound(f) + 1)
    return _recombine(f, lifted, modulus, degset)


def _recombine(f, lifted, modulus, degset):
    """Search products of lifted modular factors that divide f over Z."""
    out = []
    remaining = list(range(len(lifted)))
    fcur = list(f)
    card = 1
    while 2 * card <= len(remaining):
        hit = False
        for subset in _subsets(remaining, card):
            deg = sum(len(lifted[i]) - 1 for i in subset)
            if degset is not None and deg not in degset:
                continue
            cand = [1]
            for i in subset:
                cand = _zmod(_zmul(cand, lifted[i]), modulus)
            cand = [symmetric_mod(c, modulus) for c in cand]
            # cheap test first: constant term must divide f(0) when nonzero
            if fcur[0] and cand[0] and fcur[0] % cand[0]:
                continue
            if _zdivides(cand, fcur):
                out.append(cand)
                fcur = _zdivexact(fcur, cand)
                remaining = [i for i in remaining if i not in subset]
                hit = True
                break
        if not hit:
            card += 1
    if len(fcur) > 1:
        out.append(fcur)
    assert sorted(len(g) - 1 for g in out) and _ztrim(_zsubtract(_zprod(out), f)) == []
    return sorted(out)


def _subsets(items, k):
    from itertools import combinations

    return combinations(items, k)


def _zdivexact(f, g):
    q, r = [], list(f)
    dn = len(g)
    qc = [0] * (len(f) - dn + 1)
    while len(r) >= dn:
        c = r[-1] // g[-1]
        k = len(r) - dn
        qc[k] = c
        for j, b in enumerate(g):
            r[k + j] -= c * b
        assert r[-1] == 0
        r.pop()
    assert not _ztrim(r)
    return qc


def _zprod(fs):
    out = [1]
    for f in fs:
        out = _zmul(out, f)
    return out


def _zsubtract(f, g):
    return _ztrim([a - b for a, b in _zip_pad(list(f), list(g))])


def factor_poly(f: Poly) -> tuple[Fraction, list[tuple[Poly, int]]]:
    """Full factorization over Q: f = unit * prod factor_i^mult_i.

    Factors are monic irreducible over Q with integer coefficients after
    scaling (returned monic, so coefficients may be rational).  Sorted by
    (degree, coefficient tuple) for reproducible output.
    """
    assert not f.is_zero()
    unit, sqfree = squarefree_decomposition(f)
    out: list[tuple[Poly, int]] = []
    for g, mult in sqfree:
        for h in _factor_monic_rational(g):
            out.append((h, mult))
    out.sort(key=lambda fm: (fm[0].degree, fm[0].coeffs))
    return unit, out


def _factor_monic_rational(g: Poly) -> list[Poly]:
    """Irreducible monic factors of monic squarefree g over Q."""
    if g.degree <= 1:
        return [g]
    d = 1
    for c in g.coeffs:
        d = d * c.denominator // gcd(d, c.denominator)
    # y = d*x turns g into a monic integer polynomial in y
    n = g.degree
    h = [0] * (n + 1)
    for i, c in enumerate(g.coeffs):
        v = c * d ** (n - i)
        assert v.denominator == 1
        h[i] = v.numerator
    facs = factor_squarefree_monic_int(h)
    out = []
    for fc in facs:
        m = len(fc) - 1
        out.append(Poly([Fraction(c, d ** (m - i)) for i, c in enumerate(fc)]))
    return out


# ---------------------------------------------------------------------------
# real root isolation (Sturm)


def sturm_chain(f: Poly) -> list[Poly]:
    chain = [f, f.derivative()]
    while not chain[-1].is_zero() and chain[-1].degree > 0:
        chain.append(-(chain[-2] % chain[-1]))
    if chain[-1].is_zero():
        chain.pop()
    return chain


def _sign_changes(chain: list[Poly], x: Fraction) -> int:
    signs = []
    for p in chain:
        v = p(x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def root_bound(f: Poly) -> Fraction:
    """Cauchy bound: all real roots lie in (-B, B)."""
    lc = abs(f.leading())
    return 1 + max((abs(c) for c in f.coeffs[:-1]), default=Fraction(0)) / lc


def isolate_real_roots(f: Poly) -> list[tuple[Fraction, Fraction]]:
    """Disjoint open intervals (a, b), each containing exactly one real root.

    Requires f squarefree.  Interval endpoints are never roots.
    """
    assert not f.is_zero()
    if f.degree == 0:
        return []
    g = poly_gcd(f, f.derivative())
    assert g.degree == 0, "input must be squarefree"
    chain = sturm_chain(f.monic())
    bound = root_bound(f)
    lo, hi = -bound, bound
    while f(lo) == 0:
        lo -= 1
    while f(hi) == 0:
        hi += 1
    out: list[tuple[Fraction, Fraction]] = []
    stack = [(lo, hi, _sign_changes(chain, lo), _sign_changes(chain, hi))]
    while stack:
        a, b, va, vb = stack.pop()
        count = va - vb
        if count == 0:
            continue
        if count == 1:
            out.append((a, b))
            continue
        mid = (a + b) / 2
        while f(mid) == 0:
            mid = (a + mid) / 2
        vm = _sign_changes(chain, mid)
        stack.append((a, mid, va, vm))
        stack.append((mid, b, vm, vb))
    out.sort()
    return out


def refine_root(f: Poly, lo: Fraction, hi: Fraction, width: Fraction) -> tuple[Fraction, Fraction]:
    """Shrink an isolating interval by bisection until hi - lo < width."""
    slo = f(lo)
    assert slo != 0 and f(hi) != 0 and (slo > 0) != (f(hi) > 0)
    neg = slo < 0
    while hi - lo >= width:
        mid = (lo + hi) / 2
        v = f(mid)
        if v == 0:
            # nudge: return a tiny interval straddling the exact root
            eps = width / 4
            return mid - eps, mid + eps
        if (v < 0) == neg:
            lo = mid
        else:
            hi = mid
    return lo, hi
