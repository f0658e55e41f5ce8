import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from quatforms.numberfield import (
    FieldIdeal,
    field_from_spec,
    load_field_descriptor,
    make_quadratic_field,
    siegel_zeta_quadratic,
)


def F85():
    return make_quadratic_field(85)


def F10():
    return make_quadratic_field(10)


# -- construction and basic invariants --------------------------------


def test_rejects_bad_d():
    for d in (0, 1, -5, 12, 45, 99):
        with pytest.raises(ValueError):
            make_quadratic_field(d)


def test_field_from_spec():
    F = field_from_spec("quad:85")
    assert F.name == "quad:85" and F.degree == 2 and F.disc == 85
    with pytest.raises(ValueError):
        field_from_spec("cubic:7")


def test_zeta_values():
    assert make_quadratic_field(5).zeta_minus_one == Fraction(1, 30)
    assert make_quadratic_field(10).zeta_minus_one == Fraction(7, 6)
    assert make_quadratic_field(85).zeta_minus_one == 3
    assert siegel_zeta_quadratic(8) == Fraction(1, 12)


def test_fundamental_units():
    # basis (1, omega): (9+sqrt85)/2 = 4 + omega, 3+sqrt10, (1+sqrt5)/2 = omega
    assert make_quadratic_field(85).fundamental_units[0] == (4, 1)
    assert make_quadratic_field(10).fundamental_units[0] == (3, 1)
    assert make_quadratic_field(5).fundamental_units[0] == (0, 1)
    assert make_quadratic_field(13).fundamental_units[0] == (1, 1)
    for d in (5, 10, 13, 85):
        F = make_quadratic_field(d)
        assert abs(F.norm(F.fundamental_units[0])) == 1


def test_class_numbers():
    known = {2: (1, 1), 3: (1, 2), 5: (1, 1), 10: (2, 2), 13: (1, 1), 85: (2, 2)}
    for d, (h, hp) in known.items():
        F = make_quadratic_field(d)
        assert F.class_number == h, d
        assert F.narrow_class_number == hp, d


def test_element_arithmetic():
    F = F85()
    w = F.el((0, 1))
    assert F.mul(w, w) == F.el((21, 1))  # omega^2 = 21 + omega
    assert F.trace(w) == 1 and F.norm(w) == -21
    x = F.el((3, Fraction(1, 2)))
    assert F.mul(x, F.inv(x)) == F.one
    embs = F.embeddings(w)
    assert embs[0].hi < embs[1].lo  # ascending embedding order
    assert F.sign_vector(w) == (-1, 1)
    assert F.is_totally_positive(F.el((5, 1)))
    assert not F.is_totally_positive(w)


# -- primes ------------------------------------------------------------


def test_primes_above_85():
    F = F85()
    above3 = F.primes_above(3)
    assert [(f, e) for _, f, e in above3] == [(1, 1), (1, 1)]
    P1, P2 = above3[0][0], above3[1][0]
    assert P1 != P2 and P1.norm() == 3 and P2.norm() == 3
    assert P1 * P2 == F.ideal(3)
    # (3, 2*omega) is the second prime in canonical order
    assert F.ideal(3, (0, 2)) == P2
    assert P2.rows == ((3, 0), (0, 1))

    above2 = F.primes_above(2)
    assert [(f, e) for _, f, e in above2] == [(2, 1)]  # inert
    for p in (5, 17):  # ramified divisors of 85
        above = F.primes_above(p)
        assert [(f, e) for _, f, e in above] == [(1, 2)]
        assert above[0][0] ** 2 == F.ideal(p)


def test_primes_above_10():
    F = F10()
    above2 = F.primes_above(2)
    assert [(f, e) for _, f, e in above2] == [(1, 2)]
    assert above2[0][0].rows == ((2, 0), (0, 1))
    assert len(F.primes_above(3)) == 2  # 10 is a square mod 3
    assert [(f, e) for _, f, e in F.primes_above(7)] == [(2, 1)]


def test_prime_ideals_up_to():
    norms = [pr.norm for pr in F85().prime_ideals_up_to(20)]
    assert norms == [3, 3, 4, 5, 7, 7, 17, 19, 19]


def test_residue_fields():
    F = F85()
    rng = random.Random(3)
    inert2 = F.primes_above(2)[0][0]
    q = F.residue_field(inert2)
    assert q.algebra.dim == 2
    for _ in range(10):
        x = F.el((rng.randint(-9, 9), rng.randint(-9, 9)))
        y = F.el((rng.randint(-9, 9), rng.randint(-9, 9)))
        assert q.proj(F.mul(x, y)) == q.algebra.mul(q.proj(x), q.proj(y))
    ram5 = F.primes_above(5)[0][0]
    assert F.residue_field(ram5).algebra.dim == 1


# -- ideal arithmetic ---------------------------------------------------


def _random_ideal(F, rng):
    return F.ideal(
        (rng.randint(-9, 9), rng.randint(1, 9)),
        rng.randint(2, 40),
    )


def test_ideal_norm_and_inverse_random():
    rng = random.Random(11)
    for F in (F85(), F10()):
        for _ in range(8):
            a = _random_ideal(F, rng)
            b = _random_ideal(F, rng)
            assert (a * b).norm() == a.norm() * b.norm()
            assert a * a.inverse() == F.unit_ideal()
            i, s = a.intersect(b), a + b
            assert a.divides(i) and b.divides(i)
            assert s.divides(a) and s.divides(b)
            assert s * i == a * b


small = st.integers(min_value=-6, max_value=6)


@given(small, st.integers(min_value=1, max_value=6), st.integers(min_value=2, max_value=20))
@settings(max_examples=40, deadline=None)
def test_ideal_inverse_matches_conjugate(a, b, m):
    # for quadratic fields the inverse is the conjugate over the norm
    F = make_quadratic_field(85)
    ideal = F.ideal((a, b), m)
    t = F.trace(F.el((0, 1)))

    def conj(v):
        return (v[0] + t * v[1], -v[1])

    conj_ideal = F.ideal(*[conj(v) for v in ideal.basis_vectors()])
    assert ideal.inverse() == conj_ideal * (1 / ideal.norm())


def test_ideal_factor():
    F = F10()
    P2 = F.primes_above(2)[0][0]
    assert F.ideal(2).factor() == [(P2, 2)]
    fac = F.ideal(30).factor()
    assert sorted(e for _, e in fac) == [1, 1, 2, 2]
    assert F.ideal(2).valuation(P2) == 2
    frac = F.ideal(Fraction(1, 2))
    assert frac.valuation(P2) == -2


def test_contains_and_integrality():
    F = F85()
    P = F.primes_above(3)[0][0]
    assert P.is_integral()
    assert P.contains(F.el((1, 2)))
    assert not P.contains(F.one)
    assert not F.ideal(3).contains(F.el((1, 2)))


# -- principality -------------------------------------------------------


def test_principality_certified():
    F = F85()
    P3 = F.primes_above(3)[0][0]
    assert F.principal_generator(P3) is None
    g = F.principal_generator(P3 * P3)
    assert g is not None
    assert F.principal_ideal(g) == P3 * P3
    assert abs(F.norm(g)) == 9


def test_principal_generator_random():
    rng = random.Random(5)
    for F in (F85(), F10()):
        for _ in range(8):
            x = F.el((rng.randint(-9, 9), rng.choice([-3, -2, -1, 1, 2, 3])))
            a = F.principal_ideal(x)
            g = F.principal_generator(a)
            assert g is not None and F.principal_ideal(g) == a


def test_narrow_principality():
    F = F10()
    P2 = F.primes_above(2)[0][0]
    assert F.narrowly_principal_generator(P2) is None
    P31 = F.ideal(31, (14, 1))
    g = F.narrowly_principal_generator(P31)
    assert g is not None and F.is_totally_positive(g)
    assert F.principal_ideal(g) == P31 == F.principal_ideal((11, 3))


def test_narrow_strictly_finer_than_wide():
    # (sqrt 3) is principal but has no totally positive generator
    F = make_quadratic_field(3)
    sq3 = F.principal_ideal((0, 1))
    assert F.principal_generator(sq3) is not None
    assert F.narrowly_principal_generator(sq3) is None


def test_class_and_narrow_dlog():
    F = F10()
    P2 = F.primes_above(2)[0][0]
    P31 = F.ideal(31, (14, 1))
    assert F.class_of(F.unit_ideal()) == 0
    assert F.class_of(P2) == 1
    assert F.narrow_dlog(P2) == (1,)
    assert F.narrow_dlog(P31) == (0,)
    # genus signs used by the Eisenstein tables: chi = -1 at 2,3,5,13,37
    for p, res in ((3, 1), (5, 0), (13, 6), (37, 11)):
        P = F.ideal(p, (res, 1)) if res else F.primes_above(p)[0][0]
        assert F.narrow_dlog(P) == (1,), p


def test_minkowski_pool_covered():
    for d in (10, 85):
        F = make_quadratic_field(d)
        for pr in F.prime_ideals_up_to(10):
            assert F.class_of(pr.ideal) in range(F.class_number)


def test_coprime_class_reps():
    F = F85()
    P3 = F.primes_above(3)[0][0]
    reps = F.coprime_class_reps(F.ideal(3))
    assert len(reps) == 2
    for r in reps:
        assert (r + F.ideal(3)) == F.unit_ideal()
    assert F.principal_generator(reps[1] * P3.inverse()) is not None or \
        F.class_of(reps[1]) == F.class_of(P3)


# -- units ---------------------------------------------------------------


def test_totally_positive_units():
    assert make_quadratic_field(10).totally_positive_units() == [(1, 0), (19, 6)]
    assert make_quadratic_field(5).totally_positive_units() == [(1, 0), (1, 1)]
    assert make_quadratic_field(3).totally_positive_units() == [(1, 0), (2, 1)]
    for d in (3, 5, 10, 85):
        F = make_quadratic_field(d)
        for u in F.totally_positive_units():
            assert F.is_totally_positive(u)
            assert abs(F.norm(u)) == 1


# -- descriptor ----------------------------------------------------------


def test_descriptor_round_trip():
    F = F10()
    doc = F.descriptor()
    G = load_field_descriptor(doc)
    assert G.trusted
    assert G.class_number == 2 and G.narrow_class_number == 2
    assert G.zeta_minus_one == Fraction(7, 6)
    assert G.fundamental_units == [(3, 1)]
    assert [(f, e) for _, f, e in G.primes_above(2)] == [(1, 2)]


def test_descriptor_rejects_corruption():
    F = F10()
    good = F.descriptor()

    bad = F.descriptor()
    bad["mult_table"][1][1] = [11, 0]
    with pytest.raises(ValueError):
        load_field_descriptor(bad)

    bad = F.descriptor()
    bad["schema"] = "fieldctx/2"
    with pytest.raises(ValueError):
        load_field_descriptor(bad)

    bad = F.descriptor()
    del bad["units"]
    with pytest.raises(ValueError):
        load_field_descriptor(bad)

    bad = F.descriptor()
    bad["units"] = [["2", "0"]]
    with pytest.raises(ValueError):
        load_field_descriptor(bad)

    bad = F.descriptor()
    bad["narrow_class_group"]["order"] = 4
    with pytest.raises(ValueError):
        load_field_descriptor(bad)

    # degree-1 document: even-degree requirement
    with pytest.raises(ValueError):
        load_field_descriptor({
            "schema": "fieldctx/1", "name": "q", "degree": 1,
            "mult_table": [[[1]]], "disc": 1,
            "embeddings": [[["0", "2"]]], "units": [],
            "class_group": {"order": 1, "generators": []},
            "narrow_class_group": {"order": 1, "generators": []},
            "zeta_minus_one": "0",
        })

    # swapped embedding rows must still match bijectively, so corrupt one
    bad = F.descriptor()
    bad["embeddings"][0][1] = ["7/2", "4"]
    with pytest.raises(ValueError):
        load_field_descriptor(bad)

    # a non-stable lattice offered as a class group generator
    bad = F.descriptor()
    bad["class_group"]["generators"] = [{"rows": [[1, 0], [0, 2]], "den": 1}]
    with pytest.raises(ValueError):
        load_field_descriptor(bad)

    assert load_field_descriptor(good).name == F.name
