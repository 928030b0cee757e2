from __future__ import annotations

import random

import pytest

from depth2pit.algebra import ElementClass, classify, validate_basis, y_element
from depth2pit.circuits import (
    Add,
    FormulaCircuit,
    Leaf,
    LinearMatrix,
    LinearMatrixSequence,
    Mul,
    abp_from_sequence,
    formula_to_poly,
)
from depth2pit.field import LinearFunction, SparsePoly, product
from depth2pit.pit import expand_algebra_terms
from depth2pit.suites import random_formula, random_sps, zero_sps
from depth2pit.textio import parse_circuit, parse_linear, parse_poly
from depth2pit.transforms import (
    NotUpperTriangular,
    ben_or_cleve,
    homogenize_and_abp,
    is_transvection,
    local_ring_reduction,
    mask_offdiagonal,
    sps_to_u2,
    u2_to_sps,
)

p = 101


def sps(text):
    return parse_circuit(f"field {p}\nsps {{ {text} }}")


def poly(text):
    return parse_poly(text, p)


def lin(text):
    return parse_linear(text, p)


def top_right(lowered):
    return lowered.seq.expand()[0][1]


def test_single_product_lowering():
    lo = sps_to_u2(sps("(x1)(x2)"))
    want = (
        LinearMatrix.from_rows(p, [[lin("x1"), 0], [0, 1]]),
        LinearMatrix.from_rows(p, [[1, lin("x2")], [0, 1]]),
    )
    assert lo.seq.matrices == want
    assert lo.l_factors == ()
    assert top_right(lo) == poly("x1*x2")


def test_two_linear_summands():
    lo = sps_to_u2(sps("(x1) ; (x2)"))
    assert top_right(lo) == poly("x1 + x2")
    assert lo.l_factors == ()


def test_two_quadratic_summands():
    c = sps("(x1)(x2) ; (x3)(x4)")
    lo = sps_to_u2(c)
    # merging (x1)(x2) with (x3)(x4): the first summand's diagonal factor x1 is
    # the only non-empty part of the certificate
    assert lo.l_factors == (lin("x1"),)
    assert top_right(lo) == poly("x1") * poly("x1*x2 + x3*x4")
    assert lo.within_bound()


def test_lowering_on_random_circuits():
    rng = random.Random(7)
    for _ in range(60):
        c = random_sps(rng, p, rng.randint(1, 4), rng.randint(1, 4), rng.randint(1, 5))
        lo = sps_to_u2(c)
        cert = product((lf.to_poly() for lf in lo.l_factors), p)
        assert top_right(lo) == cert * c.expand()
        assert all(not lf.is_zero() for lf in lo.l_factors)
        assert lo.within_bound(), (len(lo.seq), lo.size_bound())
        assert lo.seq.is_upper_triangular()


def test_zero_circuits_lower_to_zero():
    rng = random.Random(8)
    for kind in range(4):
        c = zero_sps(rng, p, 3, 3, kind)
        assert c.expand().is_zero()
        grid = mask_offdiagonal(sps_to_u2(c)).expand()
        assert all(e.is_zero() for row in grid for e in row)


def test_mask_examples():
    grid = mask_offdiagonal(sps_to_u2(sps("(x1)(x2)"))).expand()
    assert grid[0][1] == poly("x1*x2")
    assert grid[0][0].is_zero() and grid[1][0].is_zero() and grid[1][1].is_zero()
    syn = sps_to_u2(sps("(0)(x1) ; (x2)(0)"))
    assert syn.syntactic_zero
    assert all(e.is_zero() for row in mask_offdiagonal(syn).expand() for e in row)
    cancel = sps_to_u2(sps("(x1) ; (-1*x1)"))
    assert not cancel.syntactic_zero
    assert all(e.is_zero() for row in mask_offdiagonal(cancel).expand() for e in row)


def test_u2_to_sps_examples():
    seq = sps_to_u2(sps("(x1)(x2)")).seq
    a, b, off = u2_to_sps(seq)
    assert off.s == 2 and off.expand() == poly("x1*x2")
    assert any(any(lf.is_zero() for lf in prod) for prod in off.products)
    diag = LinearMatrixSequence(p, 2, (LinearMatrix.diagonal(p, [lin("x1"), lin("x2")]),) * 3)
    assert u2_to_sps(diag)[2].expand().is_zero()
    one = LinearMatrixSequence(p, 2, (LinearMatrix.from_rows(p, [[lin("x1 + 1"), lin("x3")], [0, lin("x2")]]),))
    a, b, off = u2_to_sps(one)
    assert a.expand() == poly("x1 + 1") and b.expand() == poly("x2") and off.expand() == poly("x3")


def test_u2_to_sps_agrees_with_expansion():
    rng = random.Random(9)
    for _ in range(20):
        lo = sps_to_u2(random_sps(rng, p, 3, 3, 3))
        grid = lo.seq.expand()
        a, b, off = u2_to_sps(lo.seq)
        assert (a.expand(), b.expand(), off.expand()) == (grid[0][0], grid[1][1], grid[0][1])


def test_u2_to_sps_rejects_lower_entries():
    bad = LinearMatrixSequence(p, 2, (LinearMatrix.from_rows(p, [[1, 0], [lin("x1"), 1]]),))
    with pytest.raises(NotUpperTriangular):
        u2_to_sps(bad)


def test_abp_example():
    a = homogenize_and_abp(sps_to_u2(sps("(x1)(x2)")))
    assert a.levels == (1, 2, 2, 2, 1)
    assert a.gap_kind(1) == "parallel" and a.gap_kind(2) == "shear"
    labels = {(u, v): str(lf) for u, v, lf in a.edges[1]}
    assert labels == {(0, 0): "x1", (1, 1): "z"}
    labels = {(u, v): str(lf) for u, v, lf in a.edges[2]}
    assert labels == {(0, 0): "z", (1, 1): "z", (0, 1): "x2"}
    assert a.evaluate([2, 3], z=1) == 6
    assert a.is_planar()


def test_abp_of_diagonal_sequence():
    diag = LinearMatrixSequence(p, 2, (LinearMatrix.diagonal(p, [lin("x1"), lin("x2")]),) * 3)
    a = abp_from_sequence(diag, 0, 1)
    assert all(a.gap_kind(g) == "parallel" for g in range(1, len(a.edges) - 1))
    assert a.expand().is_zero()


def test_abp_matches_homogenized_product():
    rng = random.Random(10)
    for _ in range(25):
        c = random_sps(rng, p, 3, 3, 3)
        lo = sps_to_u2(c)
        a = homogenize_and_abp(lo)
        target = product((lf.to_poly() for lf in lo.l_factors), p) * c.expand()
        assert a.expand() == target.homogenize(a.degree - 2)
        for _ in range(10):
            pt = [rng.randrange(p) for _ in range(3)]
            assert a.evaluate(pt, z=1) == target.evaluate(pt)


def test_boc_examples():
    seq = ben_or_cleve(Leaf(1, 1), p)
    assert len(seq) == 1
    (m,) = seq.matrices
    assert [[str(e) for e in row] for row in m.entries] == [["1", "0", "0"], ["0", "1", "0"], ["x1", "0", "1"]]

    for e, want, length in (
        (Mul(Leaf(1, 1), Leaf(1, 2)), "x1*x2", 4),
        (Add(Leaf(1, 1), Leaf(1, 2)), "x1 + x2", 2),
    ):
        seq = ben_or_cleve(e, p)
        assert len(seq) == length
        assert all(is_transvection(m) for m in seq.matrices)
        grid = seq.expand()
        for r in range(3):
            for c in range(3):
                expected = poly(want) if (r, c) == (2, 0) else SparsePoly.const(p, int(r == c))
                assert grid[r][c] == expected


def test_boc_random_formulas():
    rng = random.Random(12)
    for _ in range(40):
        e = random_formula(rng, 3, rng.randint(0, 4))
        seq = ben_or_cleve(FormulaCircuit(p, e))
        assert len(seq) <= 4 ** e.depth()
        assert seq.expand()[2][0] == formula_to_poly(e, p)


def test_local_ring_example():
    basis, terms, labels = local_ring_reduction(sps("(x1)(x2) ; (x3)(x4)"))
    assert basis.k == 4
    assert labels == [(0, 0), (1, 1), (1, 2), (2, 1)]
    coords = expand_algebra_terms(terms)
    top = labels.index((1, 2))
    assert coords[top] == poly("x1*x2 + x3*x4")
    assert all(coords[i].is_zero() for i in range(4) if i != top)


def test_local_ring_single_summand():
    c = sps("(x1 + 2)(x2)(x3 - 1)")
    basis, terms, labels = local_ring_reduction(c)
    validate_basis(basis)
    coords = expand_algebra_terms(terms)
    assert coords[labels.index((1, 3))] == c.expand()
    assert classify(basis, y_element(basis, labels, 1)) is ElementClass.NILPOTENT


def test_local_ring_random():
    rng = random.Random(13)
    for s in (2, 3):
        for d in (2, 3):
            c = random_sps(rng, p, 3, d, s)
            basis, terms, labels = local_ring_reduction(c)
            assert basis.k == s * (max(c.d, 1) - 1) + 2
            coords = expand_algebra_terms(terms)
            top = labels.index((1, c.d))
            assert coords[top] == c.expand()


def test_shear_expansion_of_constant_last_factor():
    lo = sps_to_u2(sps("(x1)(5) ; (x2)(x3 + 4)"))
    cert = product((lf.to_poly() for lf in lo.l_factors), p)
    assert top_right(lo) == cert * poly("5*x1 + x2*x3 + 4*x2")
    assert all(lf != LinearFunction(p) for lf in lo.l_factors)
