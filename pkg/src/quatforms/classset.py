"""Right ideal classes of a maximal quaternion order.

The class set is grown by prime neighbor steps and certified complete
against the exact Eichler mass.  Unit groups, isomorphism witnesses and
the neighbor orbit tables that feed Brandt matrices all live here.
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction

from .arith import factor_int
from .numberfield import PrimeIdeal
from .quaternion import QuatLattice, norm_equation_solutions
from .residue import (
    LatticeQuotient,
    MatrixSplitting,
    QuotientSpace,
    in_span_mod,
    p1_points,
    span_basis_mod,
    subalgebra,
)

log = logging.getLogger(__name__)

# fresh seeds tried when the random idempotent search inside a residue
# splitting fails before its own internal budget is declared hopeless
_SPLIT_SEEDS = 16


def split_residue_matrix(A, embed_rows, seed=0):
    """A 2x2 matrix splitting of A over the embedded field, with retries.

    The idempotent search inside MatrixSplitting is randomized; fresh
    seeds are tried before the failure is reported as hard.
    """
    failure = None
    for s in range(seed, seed + _SPLIT_SEEDS):
        try:
            return MatrixSplitting(A, embed_rows, seed=s)
        except ArithmeticError as exc:
            failure = exc
    raise ArithmeticError(f"residue algebra splitting failed: {failure}")


def eichler_mass(F):
    """Mass of the maximal order class set: 2^(1-n) |zeta_F(-1)| h_F.

    Valid for the everywhere unramified totally definite algebra, which
    is the only kind this package constructs; finite ramification would
    contribute local factors.
    """
    if F.zeta_minus_one is None or F.class_number is None:
        raise ValueError("field context lacks zeta or class number data")
    return abs(F.zeta_minus_one) * F.class_number / Fraction(2 ** (F.degree - 1))


def _prime_parts(p):
    """(ideal, residue characteristic, residue degree) for a prime input."""
    if isinstance(p, PrimeIdeal):
        return p.ideal, p.p, p.f
    nrm = p.norm()
    if nrm.denominator != 1:
        raise ValueError("not an integral ideal")
    fac = factor_int(int(nrm))
    if len(fac) != 1:
        raise ValueError("ideal norm is not a prime power")
    ((ell, f),) = fac.items()
    return p, ell, f


def _field_basis_rows(Aq, alg):
    """Rows spanning the image of the base ring inside the residue algebra."""
    F = alg.base
    rows = []
    for t in range(F.degree):
        e = tuple(int(s == t) for s in range(F.degree))
        rows.append(Aq.proj(alg.el(e)))
    return span_basis_mod(rows, Aq.algebra.p)


def neighbors(b, p, seed=0):
    """The Np+1 right ideals c containing b with nr(b) = nr(c) * p.

    c/b runs over the simple right submodules of the residue module
    (p^-1 b)/b, located by pulling back the projective line over the
    residue field through a 2x2 matrix splitting of R/pR.  The random
    idempotent search inside the splitting is retried with fresh seeds
    and only then reported as a hard failure.
    """
    alg = b.alg
    ideal, ell, f = _prime_parts(p)
    npn = ell ** f
    R = b.right_order()

    big = b.iscale(ideal.inverse())
    V = QuotientSpace(
        [list(r) for r in big.rows], big.den,
        [list(r) for r in b.rows], b.den,
        ell,
    )
    assert V.dim == 4 * f

    pR = R.iscale(ideal)
    Aq = LatticeQuotient(
        [list(r) for r in R.rows], R.den,
        [list(r) for r in pR.rows], pR.den,
        ell, alg.mul, alg.one,
    )
    A = Aq.algebra
    k_rows = _field_basis_rows(Aq, alg)
    if len(k_rows) != f:
        raise ArithmeticError("residue field image has wrong dimension")

    sp = split_residue_matrix(A, k_rows, seed=seed)

    def act(v, x_amb):
        # right multiplication of V by an ambient element of R; this is
        # well defined because V.lift is unique mod b and b * R = b
        return V.proj(alg.mul(V.lift(v), x_amb))

    e11 = Aq.lift(sp.e[0])
    corner = span_basis_mod(
        [act(tuple(int(s == t) for s in range(V.dim)), e11) for t in range(V.dim)],
        ell,
    )
    assert len(corner) == 2 * f, "corner module has unexpected dimension"

    # split corner into two k-lines: corner = k*w1 + k*w2
    k_amb = [Aq.lift(r) for r in k_rows]
    w1 = corner[0]
    line1 = span_basis_mod([act(w1, x) for x in k_amb], ell)
    w2 = next(w for w in corner if not in_span_mod(line1, w, ell))

    def scalar_lift(coords):
        # k-subalgebra coordinates -> ambient representative in R
        acc = [0] * A.dim
        for c, row in zip(coords, k_rows):
            for t, rt in enumerate(row):
                acc[t] = (acc[t] + c * rt) % ell
        return Aq.lift(tuple(acc))

    k_sub = subalgebra(A, k_rows, A.one)
    r_basis = R.basis_vectors()
    base = list(b.basis_vectors())
    out = []
    for x, y in p1_points(k_sub):
        wx = act(w1, scalar_lift(x))
        wy = act(w2, scalar_lift(y))
        w = tuple((u + v) % ell for u, v in zip(wx, wy))
        u_rows = span_basis_mod([act(w, r) for r in r_basis], ell)
        assert len(u_rows) == 2 * f, "cyclic submodule has unexpected dimension"
        lat = QuatLattice(alg, base + [V.lift(u) for u in u_rows])
        assert b.covolume() / lat.covolume() == npn ** 2
        out.append(lat)
    assert len(set(out)) == npn + 1
    return out


def is_isomorphic(a, b):
    """A witness u with a = u * b as right ideals, or a certified None.

    The class of the reduced norm in the narrow class group is an
    isomorphism invariant and filters first.  When it passes, any witness
    can be scaled by a base unit so that its reduced norm is beta * e for
    beta one fixed totally positive generator of nr(a)/nr(b) and e one of
    the finitely many totally positive units mod squares, so searching
    those norm equations over a * b^-1 is exhaustive.
    """
    alg = a.alg
    F = alg.base
    if a.right_order() != b.right_order():
        raise ValueError("ideals do not share a right order")
    if a == b:
        return alg.one
    beta = F.narrowly_principal_generator(a.nr_ideal() * b.nr_ideal().inverse())
    if beta is None:
        return None
    L = a.compose(b.inverse())
    for e in F.totally_positive_units():
        sols = norm_equation_solutions(L, F.mul(beta, e))
        if sols:
            u = sols[0]
            assert b.lmul_element(u) == a
            return u
    return None


@dataclass
class UnitGroup:
    """Unit group of an order modulo the units of the base ring.

    elements holds one representative per coset; order is its size.
    """

    elements: list
    order: int


def same_up_to_units(alg, x, y):
    """Whether x = c * y for a unit c of the base ring."""
    F = alg.base
    if not any(y):
        return not any(x)
    z = alg.mul(x, alg.inv(y))
    n = F.degree
    if any(c != 0 for c in z[n:]):
        return False
    c = F.el(z[:n])
    if not any(c):
        return False
    return F.is_integral(c) and F.is_integral(F.inv(c))


def unit_group(O):
    """Units of the order O modulo base ring units.

    Every coset contains an element whose reduced norm equals one of the
    stored totally positive unit representatives on the nose, so solving
    those norm equations lists all cosets.  The representatives can repeat
    modulo unit squares, which duplicates cosets, hence the merge.
    """
    alg = O.alg
    F = alg.base
    found = []
    for e in F.totally_positive_units():
        for x in norm_equation_solutions(O, e):
            if not any(same_up_to_units(alg, x, y) for y in found):
                found.append(x)
    assert any(same_up_to_units(alg, alg.one, y) for y in found)
    return UnitGroup(elements=found, order=len(found))


@dataclass
class ClassSet:
    """Representatives of the right ideal classes of a maximal order.

    representatives[0] is the order itself.  left_orders[i] and
    unit_groups[i] belong to representatives[i]; mass is the verified
    sum of 1/|unit group| and support the primes used for the walk.
    """

    order: QuatLattice
    representatives: list
    left_orders: list
    unit_groups: list
    support: list
    mass: Fraction

    @property
    def size(self):
        return len(self.representatives)


def auxiliary_split_prime(F, support):
    """Smallest degree one unramified prime outside the given support."""
    used = {_prime_parts(p)[0] for p in support}
    bound = 20
    while bound <= 20000:
        for pr in F.prime_ideals_up_to(bound):
            if pr.f == 1 and pr.e == 1 and pr.ideal not in used:
                return pr
        bound *= 4
    raise ArithmeticError("no auxiliary split prime found")


def narrow_support(F, bound=200):
    """A minimal prime list generating the narrow class group.

    Primes are scanned in canonical order and kept only when their class
    enlarges the subgroup generated so far, so the result is deterministic
    and empty when the narrow class number is 1.
    """
    k = len(F.narrow_gens)
    have = []
    out = []
    for pr in F.prime_ideals_up_to(bound):
        if len(out) == k:
            break
        bits = F.narrow_dlog(pr.ideal)
        if not any(bits):
            continue
        if in_span_mod(span_basis_mod(have, 2), bits, 2):
            continue
        have.append(list(bits))
        out.append(pr)
    if len(out) < k:
        raise ArithmeticError("primes up to the bound do not generate the narrow class group")
    return out


def _small_exponent_vectors(n, budget):
    count = 0
    for total in itertools.count(0):
        for v in itertools.product(range(total + 1), repeat=n):
            if sum(v) != total:
                continue
            yield v
            count += 1
            if count >= budget:
                return
        if n == 0:
            return


def _support_normalize(c, support, budget=40):
    """An ideal isomorphic to c whose reduced norm is supported in support.

    Multiplies c by a quaternion whose reduced norm clears the factors of
    nr(c) outside the support; such a norm exists once the class of the
    outside part lies in the subgroup generated by the support, which the
    caller guarantees.
    """
    F = c.alg.base
    supp = {_prime_parts(p)[0] for p in support}
    outside = [(q, e) for q, e in c.nr_ideal().factor() if q not in supp]
    if not outside:
        return c
    base = F.unit_ideal()
    for q, e in outside:
        base = base * q ** (-e)
    s_ideals = sorted(supp, key=lambda i: (i.norm(), i.rows))
    R = c.right_order()
    for exps in _small_exponent_vectors(len(s_ideals), budget):
        target = base
        for s, e in zip(s_ideals, exps):
            target = target * s ** e
        gamma = F.narrowly_principal_generator(target)
        if gamma is None:
            continue
        sols = norm_equation_solutions(R, gamma)
        if sols:
            return c.lmul_element(sols[0])
    raise ArithmeticError("could not move the norm into the support")


def compute_class_set(R, support):
    """Breadth first closure of the neighbor walk, certified by the mass.

    Starting from the trivial class, representatives are expanded at the
    support primes; the walk terminates exactly when sum 1/|unit group|
    equals the Eichler mass.  If the support alone stalls below the mass,
    one auxiliary small split prime joins the walk (and any class first
    reached through it is renormalized back into the support); stalling
    even then means the support cannot generate the narrow class group.
    """
    alg = R.alg
    F = alg.base
    target = eichler_mass(F)
    reps = [R]
    lefts = [R]
    units = [unit_group(R)]
    mass = Fraction(1, units[0].order)
    primes = list(support)
    pending = [(0, t) for t in range(len(primes))]
    pos = 0
    via_aux = set()
    while mass != target:
        if mass > target:
            raise ArithmeticError(
                "unit masses exceed the Eichler mass; class identification is broken"
            )
        if pos == len(pending):
            if len(primes) == len(support):
                aux = auxiliary_split_prime(F, support)
                log.info(
                    "walk stalled at mass %s of %s; adding a split prime of norm %d",
                    mass, target, aux.norm,
                )
                primes.append(aux)
                pending.extend((ci, len(support)) for ci in range(len(reps)))
                continue
            raise ArithmeticError(
                "neighbor walk closed below the Eichler mass; "
                "the support does not generate the narrow class group"
            )
        ci, ti = pending[pos]
        pos += 1
        for c in neighbors(reps[ci], primes[ti]):
            if any(is_isomorphic(a, c) is not None for a in reps):
                continue
            reps.append(c)
            lefts.append(c.left_order())
            units.append(unit_group(lefts[-1]))
            mass += Fraction(1, units[-1].order)
            pending.extend((len(reps) - 1, t) for t in range(len(primes)))
            if ti >= len(support):
                via_aux.add(len(reps) - 1)
            if mass == target:
                break
    for ci in sorted(via_aux):
        reps[ci] = _support_normalize(reps[ci], support)
        lefts[ci] = reps[ci].left_order()
        before = units[ci].order
        units[ci] = unit_group(lefts[ci])
        assert units[ci].order == before
    return ClassSet(
        order=R,
        representatives=reps,
        left_orders=lefts,
        unit_groups=units,
        support=list(support),
        mass=mass,
    )


@dataclass
class ThetaTable:
    """Isomorphism witnesses for all neighbor steps between classes.

    entries[(pi, ai, bi)] lists the u with representative[ai] = u * c,
    one per neighbor c of representative[bi] at primes[pi] in class ai.
    Column sums over ai equal Np + 1.
    """

    bound: int
    primes: list
    entries: dict


def _walk_prime(cs, pi, pr, entries):
    """Classify every neighbor of every representative at one prime."""
    for bi, b in enumerate(cs.representatives):
        count = 0
        for c in neighbors(b, pr):
            for ai, a in enumerate(cs.representatives):
                u = is_isomorphic(a, c)
                if u is not None:
                    entries.setdefault((pi, ai, bi), []).append(u)
                    count += 1
                    break
            else:
                raise ArithmeticError("neighbor missed every representative")
        if count != pr.norm + 1:
            raise ArithmeticError("orbit table column does not sum to Np + 1")


def compute_theta(cs, bound):
    """Tabulate neighbor orbits of the class set at all primes up to bound."""
    F = cs.order.alg.base
    primes = F.prime_ideals_up_to(bound)
    entries = {}
    for pi, pr in enumerate(primes):
        _walk_prime(cs, pi, pr, entries)
    return ThetaTable(bound=bound, primes=primes, entries=entries)


def extend_theta(cs, th, bound):
    """Grow a neighbor table to a larger prime bound.

    Existing entries are kept untouched; only primes beyond the old list
    are walked.  Returns th itself when the bound does not increase.
    """
    if bound <= th.bound:
        return th
    F = cs.order.alg.base
    primes = F.prime_ideals_up_to(bound)
    for old, new in zip(th.primes, primes):
        if old.ideal != new.ideal:
            raise ArithmeticError("prime list is not a prefix of the extension")
    entries = dict(th.entries)
    for pi in range(len(th.primes), len(primes)):
        _walk_prime(cs, pi, primes[pi], entries)
    return ThetaTable(bound=bound, primes=primes, entries=entries)
