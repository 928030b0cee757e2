from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from depth2pit import algebra as alg
from depth2pit import linalg
from depth2pit.algebra import ElementClass
from depth2pit.suites import algebra_zoo

p = 101
dual = alg.quotient_algebra(p, [0, 0, 1])  # F[y]/(y^2), basis 1, y
FxF = alg.direct_product(alg.field_algebra(p), alg.field_algebra(p))


def test_validate_examples():
    assert alg.validate_basis(dual) is dual
    assert dual.commutative
    u2 = alg.validate_basis(alg.upper_triangular_2x2(p))
    assert not u2.commutative


def test_bad_identity():
    # e1 e1 = e2 while e1 is declared the identity
    structure = (((0, 1), (0, 1)), ((0, 1), (0, 0)))
    with pytest.raises(alg.BadIdentity):
        alg.validate_basis(alg.AlgebraBasis(5, structure, (1, 0)))


def test_not_associative_reports_triple():
    # identity e1, e2 e2 = e3, e2 e3 = e3 e2 = e2, e3 e3 = 0;
    # then (e2 e3) e3 = e2 e3 = e2 but e2 (e3 e3) = 0
    k = 3
    table = [[[0] * k for _ in range(k)] for _ in range(k)]
    for j in range(k):
        table[0][j][j] = table[j][0][j] = 1
    table[1][1] = [0, 0, 1]
    table[2][1] = [0, 1, 0]
    table[1][2] = [0, 1, 0]
    structure = tuple(tuple(tuple(v) for v in row) for row in table)
    with pytest.raises(alg.NotAssociative) as info:
        alg.validate_basis(alg.AlgebraBasis(p, structure, (1, 0, 0)))
    i, j, m = info.value.triple
    b = alg.AlgebraBasis(p, structure, (1, 0, 0))
    lhs = alg.algebra_mul(b, b.structure[i][j], b.basis_element(m))
    rhs = alg.algebra_mul(b, b.basis_element(i), b.structure[j][m])
    assert lhs != rhs


def test_regular_rep_examples():
    assert alg.regular_rep(dual, dual.one()) == linalg.identity(2)
    assert alg.regular_rep(dual, (0, 1)) == [[0, 0], [1, 0]]
    b, to_new = alg.change_basis(FxF, [(1, 1), (1, 0)])
    e = tuple(linalg.mat_vec(to_new, [1, 0], p))
    assert e == (0, 1)
    assert alg.regular_rep(b, e) == [[0, 0], [1, 1]]


def test_classify_examples():
    assert alg.classify(dual, (0, 1)) is ElementClass.NILPOTENT
    assert alg.classify(dual, (1, 1)) is ElementClass.INVERTIBLE
    assert alg.classify(FxF, (1, 0)) is ElementClass.ZERO_DIVISOR
    assert alg.classify(FxF, (0, 0)) is ElementClass.NILPOTENT
    assert alg.inverse(dual, (1, 1)) == (1, p - 1)
    assert alg.inverse(dual, (0, 1)) is None


def test_find_idempotent_examples():
    assert alg.find_idempotent(FxF, (1, 0)) == (1, 0)
    assert alg.find_idempotent(FxF, (5, 0)) == (1, 0)
    idem = alg.quotient_algebra(p, [0, -1, 1])  # y^2 = y
    assert alg.find_idempotent(idem, (0, 1)) == (0, 1)
    with pytest.raises(alg.NotAZeroDivisor):
        alg.find_idempotent(dual, (0, 1))


def test_find_idempotent_needs_higher_power():
    # F[y]/(y^3 - y^2): y is a zero divisor, y^2 is the idempotent
    b = alg.quotient_algebra(p, [0, 0, -1, 1])
    assert alg.find_idempotent(b, (0, 1, 0)) == (0, 0, 1)


def test_split_examples():
    sr = alg.split(FxF, (1, 0))
    assert sr.left.algebra.k == 1 and sr.right.algebra.k == 1
    three = alg.direct_product(dual, alg.field_algebra(p))
    sr = alg.split(three, (0, 0, 1))
    assert {sr.left.algebra.k, sr.right.algebra.k} == {2, 1}
    with pytest.raises(alg.TrivialIdempotent):
        alg.split(FxF, (1, 1))
    with pytest.raises(alg.NotIdempotent):
        alg.split(FxF, (2, 0))


def test_split_components_are_valid_algebras():
    for z in algebra_zoo(p):
        for x in _zero_divisors(z.basis):
            v = alg.find_idempotent(z.basis, x)
            sr = alg.split(z.basis, v)
            for part in (sr.left, sr.right):
                alg.validate_basis(part.algebra)
            break


def _zero_divisors(b):
    return [b.basis_element(i) for i in range(b.k) if alg.classify(b, b.basis_element(i)) is ElementClass.ZERO_DIVISOR]


def test_algebra_mul_examples():
    x = (3, 7)
    assert alg.algebra_mul(dual, x, dual.one()) == x
    assert alg.algebra_mul(dual, (0, 1), (0, 1)) == (0, 0)
    assert alg.algebra_pow(dual, (1, 1), 3) == (1, 3)


def test_local_ring_dimensions():
    for s, d in ((2, 2), (3, 3), (1, 3), (2, 3), (3, 2)):
        b, labels = alg.local_ring(p, s, d)
        assert b.k == s * (d - 1) + 2
        alg.validate_basis(b)
        assert b.commutative
        for i in range(1, s + 1):
            y = alg.y_element(b, labels, i)
            assert alg.classify(b, y) is ElementClass.NILPOTENT
    b, labels = alg.local_ring(p, 2, 2)
    assert labels == [(0, 0), (1, 1), (1, 2), (2, 1)]
    y1, y2 = (alg.y_element(b, labels, i) for i in (1, 2))
    assert alg.algebra_mul(b, y1, y2) == b.zero()
    assert alg.algebra_pow(b, y1, 2) == alg.algebra_pow(b, y2, 2) != b.zero()
    assert alg.algebra_pow(b, y1, 3) == b.zero()


def test_nilradical_of_zoo():
    for z in algebra_zoo(p):
        nil = alg.nilradical(z.basis)
        # an element is nilpotent iff it lies in the span of the radical
        rng = random.Random(1)
        for _ in range(20):
            x = z.sample(rng)
            in_span = linalg.rank(nil + [x], p) == len(nil)
            assert in_span == (alg.classify(z.basis, x) is ElementClass.NILPOTENT)


def test_change_basis_round_trip():
    rng = random.Random(2)
    b3 = alg.quotient_algebra(p, [0, 0, 0, 1])
    new, to_new = alg.change_basis(b3, [(1, 2, 3), (0, 1, 5), (0, 0, 7)])
    alg.validate_basis(new)
    for _ in range(10):
        x = tuple(rng.randrange(p) for _ in range(3))
        y = tuple(rng.randrange(p) for _ in range(3))
        conv = lambda v: tuple(linalg.mat_vec(to_new, v, p))  # noqa: E731
        assert conv(alg.algebra_mul(b3, x, y)) == alg.algebra_mul(new, conv(x), conv(y))


# ---------------------------------------------------------------------------
# properties over the zoo

zoo = algebra_zoo(p)
elements = st.tuples(st.sampled_from(range(len(zoo))), st.integers(0, 2**32), st.integers(0, 2**32))


def _pair(sample):
    idx, s1, s2 = sample
    z = zoo[idx]
    k = z.basis.k
    r1, r2 = random.Random(s1), random.Random(s2)
    return z.basis, tuple(r1.randrange(p) for _ in range(k)), tuple(r2.randrange(p) for _ in range(k))


@settings(max_examples=80, deadline=None)
@given(elements)
def test_rep_is_a_homomorphism(sample):
    b, x, y = _pair(sample)
    lhs = alg.regular_rep(b, alg.algebra_mul(b, x, y))
    rhs = linalg.mat_mul(alg.regular_rep(b, x), alg.regular_rep(b, y), p)
    assert lhs == rhs


@settings(max_examples=80, deadline=None)
@given(elements)
def test_mul_commutative_and_associative(sample):
    b, x, y = _pair(sample)
    assert alg.algebra_mul(b, x, y) == alg.algebra_mul(b, y, x)
    w = alg.algebra_mul(b, x, x)
    assert alg.algebra_mul(b, alg.algebra_mul(b, w, y), x) == alg.algebra_mul(b, w, alg.algebra_mul(b, y, x))


@settings(max_examples=80, deadline=None)
@given(elements)
def test_split_round_trip(sample):
    b, x, y = _pair(sample)
    zd = _zero_divisors(b)
    if not zd:
        return
    sr = alg.split(b, alg.find_idempotent(b, zd[0]))
    # x = lift(project_left x) + lift(project_right x) and projections are multiplicative
    back = b.add(sr.lift_left(sr.project_left(x)), sr.lift_right(sr.project_right(x)))
    assert back == x
    xy = alg.algebra_mul(b, x, y)
    left = sr.left.algebra
    assert sr.project_left(xy) == alg.algebra_mul(left, sr.project_left(x), sr.project_left(y))
