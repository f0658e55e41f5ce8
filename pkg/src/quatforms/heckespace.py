"""Level structure and block Hecke operators in parallel weight 2.

The space at level N is assembled class by class: each unit group acts on
P^1(O/N) through a 2x2 splitting of the order at the level primes, and the
operator at a prime p transports orbits along the stored isomorphism
witnesses.  All matrices have integer entries and everything is exact.
"""

import itertools
import logging
import math
from dataclasses import dataclass

from .classset import split_residue_matrix
from .eigen import decompose, flag_eisenstein
from .intmat import hnf_solve, hnf_with_transform
from .matrices import Matrix
from .numberfield import PrimeIdeal
from .residue import LatticeQuotient, mat2_act, mat2_det, mat2_mul, p1_points

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class WeightSpec:
    """Weight vector, one integer >= 2 per real place, all the same parity.

    The normalization data follows from k alone: m = k - 2, mu lifts to
    the largest component and v fills the gaps, so m + 2v = mu * (1,..,1).
    """

    k: tuple

    def __post_init__(self):
        ks = tuple(int(c) for c in self.k)
        object.__setattr__(self, "k", ks)
        if not ks:
            raise ValueError("weight vector is empty")
        if any(c < 2 for c in ks):
            raise ValueError("weight components must be at least 2")
        if len({c % 2 for c in ks}) != 1:
            raise ValueError("weight components must share parity")

    @property
    def m(self):
        return tuple(c - 2 for c in self.k)

    @property
    def mu(self):
        return max(self.m)

    @property
    def v(self):
        mu = self.mu
        return tuple((mu - c) // 2 for c in self.m)

    @property
    def is_parallel_two(self):
        return all(c == 2 for c in self.k)


def parallel_weight_two(F):
    return WeightSpec((2,) * F.degree)


# ---------------------------------------------------------------------------
# the projective line over O/N


@dataclass
class P1Space:
    """Points of P^1 over O/N for squarefree N.

    factors holds (prime, residue field) pairs in canonical order; a point
    is a tuple with one normalized (x : y) pair per factor, so the level
    (1) space is the single empty tuple.
    """

    modulus: object
    factors: list
    points: list
    index: dict

    @property
    def size(self):
        return len(self.points)


def build_p1(N):
    """Enumerate P^1(O/N); exactly prod (Nq + 1) points over the factors."""
    F = N.field
    if N.den != 1:
        raise ValueError("level must be an integral ideal")
    factors = []
    for q, e in N.factor():
        if e != 1:
            raise ValueError("only squarefree levels are supported")
        factors.append((q, F.residue_field(q)))
    per_factor = [p1_points(kq.algebra) for _, kq in factors]
    points = list(itertools.product(*per_factor))
    count = 1
    for _, kq in factors:
        count *= kq.algebra.p ** kq.algebra.dim + 1
    assert len(points) == count == len(set(points))
    return P1Space(N, factors, points, {pt: i for i, pt in enumerate(points)})


# ---------------------------------------------------------------------------
# splitting the order at the level primes


class _LevelComponent:
    """Splitting data of the base order at one level prime.

    Reduction accepts any element that is integral at the prime: a field
    multiplier congruent to 1 there clears denominators supported away
    from it.  Unit group elements and transport witnesses are of this
    kind, their norms being units or neighbor steps at the prime.
    """

    def __init__(self, order, prime, kq, seed=0):
        alg = order.alg
        self.order = order
        self.prime = prime
        self.kq = kq
        self.k = kq.algebra
        pR = order.iscale(prime)
        self.quo = LatticeQuotient(
            [list(r) for r in order.rows], order.den,
            [list(r) for r in pR.rows], pR.den,
            self.k.p, alg.mul, alg.one,
        )
        # embedding rows follow the residue field's own coordinate order,
        # so splitting image entries are residue field coordinates as is
        embed = [
            self.quo.proj(alg.el(kq.lift(self.k.unit(t))))
            for t in range(self.k.dim)
        ]
        self.split = split_residue_matrix(self.quo.algebra, embed, seed=seed)
        self._mult_cache = {}

    def _one_mod_prime(self, d):
        """A field element of (d) / gcd((d), prime-part) congruent to 1."""
        if d in self._mult_cache:
            return self._mult_cache[d]
        F = self.order.alg.base
        J = F.ideal(d)
        v = J.valuation(self.prime)
        if v:
            J = J * self.prime.inverse() ** v
        assert J.den == 1
        n = F.degree
        stacked = [list(r) for r in J.rows] + [list(r) for r in self.prime.rows]
        H, U = hnf_with_transform(stacked)
        ident = [[int(i == j) for j in range(n)] for i in range(n)]
        assert H[:n] == ident, "multiplier ideal is not coprime to the prime"
        one_vec = [int(c) for c in F.one]
        coeffs = [0] * n
        for j, cj in enumerate(one_vec):
            if cj:
                for t in range(n):
                    coeffs[t] += cj * U[j][t]
        alpha = [0] * n
        for t, ct in enumerate(coeffs):
            if ct:
                for s in range(n):
                    alpha[s] += ct * J.rows[t][s]
        t_el = F.el(alpha)
        gap = F.sub(F.one, t_el)
        assert hnf_solve([list(r) for r in self.prime.rows],
                         [int(c) for c in gap]) is not None
        self._mult_cache[d] = t_el
        return t_el

    def _clear(self, denoms, x, mul):
        d = math.lcm(*denoms)
        if d == 1:
            return x
        return mul(self._one_mod_prime(d), x)

    def reduce(self, x):
        """2x2 residue matrix of an element integral at the prime."""
        alg = self.order.alg
        coords = self.order._coords(x)
        x = self._clear([c.denominator for c in coords], x, alg.fmul)
        return self.split.image(self.quo.proj(x))

    def reduce_scalar(self, c):
        """Residue field image of a field element integral at the prime."""
        F = self.order.alg.base
        c = self._clear([v.denominator for v in c], c, F.mul)
        return self.kq.proj(c)


@dataclass
class SplittingMap:
    """Reduction of the order into 2x2 matrices at the level primes.

    The class representatives keep their norms inside the class set
    support, which is coprime to the level, so every left order agrees
    with the base order locally at the level: one map serves all classes
    and the conjugation ambiguity between classes collapses.
    """

    level: object
    components: list

    def image(self, x):
        return tuple(c.reduce(x) for c in self.components)

    def act(self, mats, pt):
        return tuple(
            mat2_act(c.k, m, xy)
            for c, m, xy in zip(self.components, mats, pt)
        )

    def identity_image(self):
        out = []
        for c in self.components:
            k = c.k
            out.append(((k.one, k.zero()), (k.zero(), k.one)))
        return tuple(out)


def build_splitting(cs, N, seed=0):
    """Split the order at every level prime and check the resulting maps.

    Checks: the level avoids the support, the identity maps to the
    identity, determinants match reduced norms on every stored unit, and
    multiplicativity holds on a sample of unit products.
    """
    R = cs.order
    alg = R.alg
    F = alg.base
    if N.den != 1:
        raise ValueError("level must be an integral ideal")
    support = {s.ideal if isinstance(s, PrimeIdeal) else s for s in cs.support}
    factors = []
    for q, e in N.factor():
        if e != 1:
            raise ValueError("only squarefree levels are supported")
        if q in support:
            raise ValueError("level shares a prime with the class set support")
        factors.append((q, F.residue_field(q)))
    sm = SplittingMap(N, [
        _LevelComponent(R, q, kq, seed=seed) for q, kq in factors
    ])
    if sm.image(alg.one) != sm.identity_image():
        raise ArithmeticError("splitting does not fix the identity")
    sample = []
    for units in cs.unit_groups:
        for u in units.elements:
            mats = sm.image(u)
            nr = alg.nr(u)
            for comp, m in zip(sm.components, mats):
                if mat2_det(comp.k, m) != comp.reduce_scalar(nr):
                    raise ArithmeticError("splitting determinant mismatch")
            sample.append((u, mats))
    for (u, mu), (v, mv) in zip(sample, sample[1:9]):
        mats = sm.image(alg.mul(u, v))
        for comp, m1, m2, m3 in zip(sm.components, mu, mv, mats):
            if mat2_mul(comp.k, m1, m2) != m3:
                raise ArithmeticError("splitting is not multiplicative")
    return sm


# ---------------------------------------------------------------------------
# coinvariant spaces and Hecke blocks


@dataclass
class CoinvariantSpace:
    """Orbit bases of the class unit groups acting on P^1(O/N).

    orbits[a] lists each orbit of class a as a sorted tuple of point
    indices; the global basis is their concatenation in class order,
    starting at offsets[a].  lookups[a] sends a point index to its orbit
    position within the class.
    """

    level: object
    weight: WeightSpec
    p1: P1Space
    splitting: SplittingMap
    orbits: list
    stabilizer_orders: list
    offsets: list
    lookups: list
    dim: int


def build_space(cs, N, w, seed=0):
    """Orbit decomposition of P^1(O/N) under every class unit group."""
    if not w.is_parallel_two:
        raise ValueError("only parallel weight 2 is supported")
    p1 = build_p1(N)
    sm = build_splitting(cs, N, seed=seed)
    orbits = []
    stabs = []
    lookups = []
    offsets = []
    total = 0
    for units in cs.unit_groups:
        gens = [sm.image(u) for u in units.elements]
        seen = {}
        orbs = []
        for start in range(p1.size):
            if start in seen:
                continue
            orbit = {start}
            frontier = [p1.points[start]]
            while frontier:
                pt = frontier.pop()
                for mats in gens:
                    qi = p1.index[sm.act(mats, pt)]
                    if qi not in orbit:
                        orbit.add(qi)
                        frontier.append(p1.points[qi])
            orb = tuple(sorted(orbit))
            for i in orb:
                seen[i] = len(orbs)
            orbs.append(orb)
        assert sum(len(o) for o in orbs) == p1.size
        ostab = []
        for orb in orbs:
            q, r = divmod(units.order, len(orb))
            assert r == 0, "orbit size must divide the unit group order"
            ostab.append(q)
        orbits.append(orbs)
        stabs.append(ostab)
        lookups.append(seen)
        offsets.append(total)
        total += len(orbs)
    return CoinvariantSpace(N, w, p1, sm, orbits, stabs, offsets, lookups, total)


@dataclass
class HeckeBlock:
    """Block matrix of one Hecke operator on the orbit basis.

    The matrix is indexed by the concatenated orbit basis of the space;
    the (a, b) block sits at the offset rectangle of classes a and b.
    """

    prime: PrimeIdeal
    space: CoinvariantSpace
    matrix: Matrix

    def charpoly(self):
        return self.matrix.charpoly()


def hecke_operator(cs, th, sp, p):
    """Transport action at p on the orbit basis, as a block matrix.

    Each stored witness u into class a moves a source orbit of class b to
    the orbit of the splitting image of u applied to its representative
    point.  p must be coprime to the level; every column sums to Np + 1
    because the witnesses partition the Np + 1 neighbors.
    """
    ideal = p.ideal if isinstance(p, PrimeIdeal) else p
    pi = None
    for i, pr in enumerate(th.primes):
        if pr.ideal == ideal:
            pi = i
            break
    if pi is None:
        raise ValueError("prime is outside the tabulated walk; extend the bound")
    for q, _ in sp.p1.factors:
        if q == ideal:
            raise ValueError("Hecke prime divides the level")
    pr = th.primes[pi]
    size = sp.dim
    rows = [[0] * size for _ in range(size)]
    ncls = len(cs.representatives)
    for bi in range(ncls):
        reps = [orb[0] for orb in sp.orbits[bi]]
        for ai in range(ncls):
            for u in th.entries.get((pi, ai, bi), ()):
                mats = sp.splitting.image(u)
                for j, ri in enumerate(reps):
                    qt = sp.splitting.act(mats, sp.p1.points[ri])
                    oi = sp.lookups[ai][sp.p1.index[qt]]
                    rows[sp.offsets[ai] + oi][sp.offsets[bi] + j] += 1
    degree = pr.norm + 1
    for j in range(size):
        if sum(rows[i][j] for i in range(size)) != degree:
            raise ArithmeticError("column sum differs from the neighbor count")
    return HeckeBlock(pr, sp, Matrix(rows))


# ---------------------------------------------------------------------------
# dimension bookkeeping


@dataclass
class DimensionReport:
    """Weight 2 dimension split at one level.

    The new cuspidal dimension is reported two ways: new_strict discounts
    lower levels once per divisor pair (the degeneracy map count), while
    new_above_one is the plain difference against level (1).  At level
    (1) both equal the full cuspidal dimension.
    """

    level: object
    total: int
    eisenstein: int
    cusp: int
    new_strict: int
    new_above_one: int


def dimension_report(cs, th, N):
    """Dimensions (total, Eisenstein, cusp, new) at the squarefree level N.

    Eisenstein constituents are identified by their eigenvalue pattern
    across the tabulated primes coprime to the level, so the table bound
    must leave enough primes to split the space.
    """
    F = cs.order.alg.base
    w = parallel_weight_two(F)
    level_primes = [q for q, _ in N.factor()]

    def split_dims(level):
        sp = build_space(cs, level, w)
        lp = [q for q, _ in level.factor()]
        blocks = [
            hecke_operator(cs, th, sp, pr.ideal)
            for pr in th.primes
            if all(q != pr.ideal for q in lp)
        ]
        if not blocks:
            raise ArithmeticError("no tabulated primes are coprime to the level")
        eis = 0
        for c in decompose(blocks):
            if flag_eisenstein(c, F, level):
                eis += c.dimension
        return sp.dim, eis

    # strict new dimensions by recursion over the divisor lattice
    cusp_cache = {}

    def cusp_at(subset):
        if subset not in cusp_cache:
            level = F.unit_ideal()
            for i in subset:
                level = level * level_primes[i]
            total, eis = split_dims(level)
            cusp_cache[subset] = (total, eis)
        return cusp_cache[subset]

    idx = frozenset(range(len(level_primes)))
    strict = {}
    for r in range(len(level_primes) + 1):
        for subset in itertools.combinations(sorted(idx), r):
            key = frozenset(subset)
            _, eis_d = cusp_at(key)
            s_d = cusp_at(key)[0] - eis_d
            if not key:
                strict[key] = s_d
                continue
            acc = s_d
            for rr in range(len(subset)):
                for sub in itertools.combinations(subset, rr):
                    acc -= 2 ** (len(subset) - rr) * strict[frozenset(sub)]
            strict[key] = acc

    total, eis = cusp_at(idx)
    cusp = total - eis
    s_one = cusp_at(frozenset())[0] - cusp_at(frozenset())[1]
    if not idx:
        return DimensionReport(N, total, eis, cusp, cusp, cusp)
    return DimensionReport(N, total, eis, cusp, strict[idx], cusp - s_one)
