import random
import types
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from quatforms.numberfield import field_from_spec
from quatforms.quaternion import (
    QuatAlgebra,
    QuatLattice,
    hilbert_ramification_free_algebra,
    is_order,
    maximalize,
    norm_equation_solutions,
    reduced_discriminant_norm,
    trace_form_lattice,
)

F85 = field_from_spec("quad:85")
F10 = field_from_spec("quad:10")
F5 = field_from_spec("quad:5")


def _alg(F):
    return QuatAlgebra(F, -1, -1)


def test_rejects_indefinite_structure_constants():
    with pytest.raises(ValueError):
        QuatAlgebra(F85, 1, -1)
    with pytest.raises(ValueError):
        QuatAlgebra(F85, -1, 1)
    # omega = (1 + sqrt(85))/2 is positive at one real place, negative at
    # the other; mixed signs must be rejected just like positive ones
    w = F85.el((0, 1))
    with pytest.raises(ValueError):
        QuatAlgebra(F85, F85.neg(w), -1)
    with pytest.raises(ValueError):
        QuatAlgebra(F85, Fraction(-1, 2), -1)


def test_element_arithmetic():
    alg = _alg(F85)
    i, j, k = alg.gens()
    assert alg.mul(i, j) == k
    assert alg.mul(j, i) == alg.neg(k)
    assert alg.mul(i, i) == alg.neg(alg.one)
    assert alg.mul(k, k) == alg.neg(alg.one)
    x = alg.el(2, 1, 0, 3)
    assert F85.el(alg.trd(x)) == F85.from_int(4)
    # nr(2 + i + 3k) = 4 + 1 + 9
    assert alg.base.el(alg.nr(x)) == F85.from_int(14)
    xbar = alg.conj(x)
    assert alg.add(x, xbar) == alg.el(alg.trd(x))
    prod = alg.mul(x, xbar)
    assert prod == alg.el(14)
    xi = alg.inv(x)
    assert alg.mul(x, xi) == alg.one
    assert alg.mul(xi, x) == alg.one
    with pytest.raises(ZeroDivisionError):
        alg.inv(alg.zero)


def _random_elems(alg, rng, count, span=5):
    out = []
    for _ in range(count):
        out.append(
            tuple(Fraction(rng.randint(-span, span)) for _ in range(alg.dim))
        )
    return out


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_norm_is_multiplicative(seed):
    alg = _alg(F10)
    rng = random.Random(seed)
    x, y = _random_elems(alg, rng, 2)
    lhs = alg.nr(alg.mul(x, y))
    rhs = alg.base.mul(alg.nr(x), alg.nr(y))
    assert alg.base.el(lhs) == alg.base.el(rhs)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_multiplication_is_associative(seed):
    alg = _alg(F85)
    rng = random.Random(seed)
    x, y, z = _random_elems(alg, rng, 3, span=3)
    assert alg.mul(alg.mul(x, y), z) == alg.mul(x, alg.mul(y, z))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_conjugation_reverses_products(seed):
    alg = _alg(F5)
    rng = random.Random(seed)
    x, y = _random_elems(alg, rng, 2)
    assert alg.conj(alg.mul(x, y)) == alg.mul(alg.conj(y), alg.conj(x))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_totally_definite_norm(seed):
    # nonzero elements have totally positive reduced norm
    alg = _alg(F10)
    rng = random.Random(seed)
    (x,) = _random_elems(alg, rng, 1)
    if any(x):
        assert alg.base.is_totally_positive(alg.nr(x))


def test_standard_order_discriminant():
    # disc of O_F<1,i,j,k> is (2ab)^2 = (4), so the reduced discriminant
    # has norm 16 over any real quadratic field
    for F in (F85, F10):
        order = _alg(F).standard_order()
        assert reduced_discriminant_norm(order) == 16


def test_maximalize_reaches_unit_discriminant():
    expected_trails = {
        "quad:85": [16, 4, 1],
        "quad:10": [16, 8, 1],
        "quad:5": [16, 4, 1],
    }
    for spec, want in expected_trails.items():
        alg = _alg(field_from_spec(spec))
        start = alg.standard_order()
        trail = []
        top = maximalize(start, trail=trail)
        assert trail == want
        assert all(a > b for a, b in zip(trail, trail[1:]))
        assert reduced_discriminant_norm(top) == 1
        assert is_order(top)
        assert top.contains_lattice(start)
        assert maximalize(top) == top


def test_maximalize_rejects_non_orders():
    alg = _alg(F85)
    rows = [list(r) for r in alg.standard_order().basis_vectors()]
    # halve the i block; nr(i/2) = 1/4 is not integral
    for t in range(2, 4):
        rows[t] = [c / 2 for c in rows[t]]
    lat = alg.lattice(rows)
    assert not is_order(lat)
    with pytest.raises(ValueError):
        maximalize(lat)


def test_lattice_requires_full_rank():
    alg = _alg(F85)
    i, j, k = alg.gens()
    with pytest.raises(ValueError):
        alg.lattice([alg.one, i, j, alg.add(alg.one, i)])


def test_ramification_free_search_quadratic():
    alg = hilbert_ramification_free_algebra(F85)
    assert alg.base is F85
    assert alg.a == F85.from_int(-1) and alg.b == F85.from_int(-1)
    top = alg.maximal_order()
    assert reduced_discriminant_norm(top) == 1
    # the cached order is reused
    assert alg.maximal_order() is top


def test_ramification_free_search_rejects_odd_degree():
    fake = types.SimpleNamespace(degree=3)
    with pytest.raises(ValueError):
        hilbert_ramification_free_algebra(fake)


def test_principal_ideal_identities():
    alg = hilbert_ramification_free_algebra(F85)
    R = alg.maximal_order()
    i, j, k = alg.gens()
    x = alg.el(1, 1, 1, 0)  # nr = 3
    assert alg.base.el(alg.nr(x)) == F85.from_int(3)
    I = R.lmul_element(x)
    assert I.nr_ideal() == F85.ideal(F85.from_int(3))
    assert I.right_order() == R
    conj_order = R.lmul_element(x).rmul_element(alg.inv(x))
    assert I.left_order() == conj_order
    assert conj_order != R
    Iinv = I.inverse()
    assert I.compose(Iinv) == I.left_order()
    assert Iinv.compose(I) == R
    assert R.compose(R) == R
    assert R.inverse() == R
    assert R.nr_ideal() == F85.unit_ideal()


def test_compose_requires_matching_orders():
    alg = hilbert_ramification_free_algebra(F85)
    R = alg.maximal_order()
    x = alg.el(1, 1, 1, 0)
    I = R.lmul_element(x)
    assert I.left_order() != I.right_order()
    with pytest.raises(ValueError, match="incompatible orders"):
        I.compose(I)


def test_lattice_sum_and_intersection():
    alg = hilbert_ramification_free_algebra(F85)
    R = alg.maximal_order()
    x = alg.el(1, 1, 1, 0)
    y = alg.el(1, 0, 1, 1)
    I = R.lmul_element(x)
    J = R.lmul_element(y)
    S = I + J
    M = I.intersect(J)
    for lat in (S, M):
        assert lat.right_order() == R
    for b in I.basis_vectors():
        assert S.contains(b)
        assert M.contains(b) == J.contains(b)
    assert S.contains_lattice(I) and S.contains_lattice(J)
    assert I.contains_lattice(M) and J.contains_lattice(M)
    # modularity of the norm under sum/intersection of these two
    assert S.nr_ideal().divides(I.nr_ideal())


def test_ideal_scaling_and_conjugate():
    alg = hilbert_ramification_free_algebra(F10)
    R = alg.maximal_order()
    two = R * Fraction(2)
    assert two.index_in(R) == 2 ** alg.dim
    assert two.nr_ideal() == F10.ideal(F10.from_int(4))
    w = F10.el((0, 1))  # sqrt(10)
    scaled = R.fscale(w)
    assert scaled.nr_ideal() == F10.ideal(F10.from_int(10))
    assert R.conjugate() == R


def test_norm_equation_recovers_witness():
    alg = hilbert_ramification_free_algebra(F85)
    R = alg.maximal_order()
    x = alg.el(1, 1, 1, 0)
    sols = norm_equation_solutions(R, 3)
    assert len(sols) == 48
    tx = tuple(Fraction(c) for c in x)
    neg = tuple(-c for c in tx)
    assert any(s == tx or s == neg for s in sols)
    for s in sols:
        assert alg.base.el(alg.nr(s)) == F85.from_int(3)
        assert R.contains(s)


def test_norm_equation_rejects_not_totally_positive():
    alg = hilbert_ramification_free_algebra(F85)
    R = alg.maximal_order()
    with pytest.raises(ValueError):
        norm_equation_solutions(R, -1)
    w = F85.el((0, 1))  # mixed signs
    with pytest.raises(ValueError):
        norm_equation_solutions(R, w)


def test_unit_counts_of_maximal_orders():
    # norm one elements up to sign; 60 pairs is the icosian group over
    # Q(sqrt 5), and the order the search lands on over Q(sqrt 10) has a
    # Hurwitz unit group (12 pairs, consistent with Eichler mass 7/6)
    alg5 = hilbert_ramification_free_algebra(F5)
    assert len(norm_equation_solutions(alg5.maximal_order(), 1)) == 60
    alg10 = hilbert_ramification_free_algebra(F10)
    assert len(norm_equation_solutions(alg10.maximal_order(), 1)) == 12


def test_trace_form_is_positive_definite():
    alg = hilbert_ramification_free_algebra(F10)
    R = alg.maximal_order()
    tf = trace_form_lattice(R)
    n = len(tf.gram)
    # leading principal minors all positive
    from quatforms.matrices import Matrix

    for t in range(1, n + 1):
        sub = Matrix([row[:t] for row in tf.gram[:t]])
        assert sub.det() > 0
