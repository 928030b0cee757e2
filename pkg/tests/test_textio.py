from __future__ import annotations

import random

import pytest

from depth2pit import algebra as alg
from depth2pit.circuits import DepthThreeCircuit, FormulaCircuit
from depth2pit.suites import random_formula, random_sps
from depth2pit.textio import (
    ParseError,
    format_linear,
    parse_algebra,
    parse_circuit,
    parse_circuit_file,
    parse_linear,
    parse_poly,
    serialize,
    serialize_algebra,
)
from depth2pit.transforms import ben_or_cleve, homogenize_and_abp, mask_offdiagonal, sps_to_u2

p = 101


def test_parse_sps_one_product():
    c = parse_circuit("sps { (x1)(x2) }")
    assert isinstance(c, DepthThreeCircuit)
    assert c.s == 1 and c.d == 2


def test_parse_error_location():
    with pytest.raises(ParseError) as info:
        parse_circuit("field 101\nsps { (x1 }")
    assert info.value.line == 2
    with pytest.raises(ParseError):
        parse_linear("(x1", p)


@pytest.mark.parametrize(
    "text",
    [
        "sps { (x1)(x2) ",
        "sps { }",
        "field 100\nsps { (x1) }",
        "sps { (x1 * x2) }",
        "seq k=2 { [x1, 0; 0] }",
        "bogus { }",
        "sps { (x1) } extra",
        "formula (* x1)",
    ],
)
def test_malformed_inputs(text):
    with pytest.raises(ParseError):
        parse_circuit(text)


def test_poly_parser():
    assert parse_poly("3*x1^2*x2 - x3 + 7", p) == parse_poly("7 - x3 + x2*x1^2*3", p)
    with pytest.raises(ParseError):
        parse_poly("3*", p)
    with pytest.raises(ParseError):
        parse_poly("x1 + + x2", p)


def test_linear_round_trip():
    lf = parse_linear("5 + 3*x2 - x7", p)
    assert parse_linear(format_linear(lf), p) == lf
    with pytest.raises(ParseError):
        parse_linear("x1*x2", p)


def test_comments_are_ignored():
    c = parse_circuit("# header\nfield 101  # modulus\nsps { (x1) # first\n ; (x2) }")
    assert c.s == 2


def _round_trip(c, factors=None):
    text = serialize(c, factors)
    back, back_factors = parse_circuit_file(text)
    assert back == c
    assert back_factors == (tuple(factors) if factors is not None else None)
    assert serialize(back, back_factors) == text


def test_round_trip_random_circuits():
    rng = random.Random(5)
    for _ in range(40):
        c = random_sps(rng, p, rng.randint(1, 4), rng.randint(1, 3), rng.randint(1, 3))
        _round_trip(c)
        lo = sps_to_u2(c)
        _round_trip(lo.seq)
        _round_trip(mask_offdiagonal(lo), lo.l_factors)
        _round_trip(homogenize_and_abp(lo))
        e = FormulaCircuit(p, random_formula(rng, 3, 3))
        _round_trip(e)
        _round_trip(ben_or_cleve(e))


def test_algebra_round_trip():
    b = alg.direct_product(alg.quotient_algebra(p, [0, 0, 1]), alg.field_algebra(p))
    terms = (((1, 0, 0), (0, 1, 0)), ((0, 0, 1), (1, 1, 1)))
    text = serialize_algebra(b, terms)
    af = parse_algebra(text)
    assert af.basis == b and af.terms == terms


def test_algebra_file_needs_full_table():
    text = "field 5\nalgebra k=2\nidentity 1 0\nmult 1 1 : 1 0\nmult 1 2 : 0 1\nmult 2 1 : 0 1\n"
    with pytest.raises(ParseError):
        parse_algebra(text)
    af = parse_algebra(text + "mult 2 2 : 0 0\n")
    assert af.basis.k == 2 and af.terms is None
