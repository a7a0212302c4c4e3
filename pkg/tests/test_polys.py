from __future__ import annotations

from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from mdentropy.polys import DPoly, P, RationalPoly, as_fraction, fmt_fraction, solve_exact

fractions = st.fractions(max_denominator=50).filter(lambda x: abs(x) < 100)
polys = st.dictionaries(st.integers(0, 6), fractions, max_size=5).map(RationalPoly)


def test_parse_and_format():
    assert as_fraction("3/64") == F(3, 64)
    assert fmt_fraction(F(-5, 192)) == "-5/192"
    assert fmt_fraction(F(4)) == "4"
    with pytest.raises(TypeError):
        as_fraction(0.5)


def test_zero_coefficients_dropped():
    p = RationalPoly({0: 0, 2: F(1, 8), 3: 0})
    assert p.powers() == (2,)
    assert str(p) == "1/8 * p^2"
    assert str(RationalPoly()) == "0"


def test_product_example():
    assert (1 + P) * (1 - P) == 1 - P**2


def test_div_pow():
    assert (P**3 * 5).div_pow(2) == P * 5
    with pytest.raises(ValueError):
        (1 + P).div_pow(1)


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert (a - a).is_zero()


@given(polys, polys, fractions)
def test_evaluation_is_homomorphic(a, b, x):
    assert (a * b)(x) == a(x) * b(x)
    assert (a + b)(x) == a(x) + b(x)


def test_dpoly_eval_and_text():
    j4 = DPoly({2: F(-3, 32), 3: F(3, 64)})
    assert j4(2) == F(-9, 512)
    assert str(j4) == "-3/32 * 1/d^2 + 3/64 * 1/d^3"
    assert j4.to_json() == {"2": "-3/32", "3": "3/64"}
    assert DPoly.from_strings({"1": "1/8"}) == DPoly({1: F(1, 8)})
    assert abs(j4(2.0) - float(F(-9, 512))) < 1e-15


def test_solve_exact():
    rows = [[F(1), F(1)], [F(1, 2), F(1, 4)]]
    assert solve_exact(rows, [F(3), F(1)]) == [F(1), F(2)]
    with pytest.raises(ZeroDivisionError):
        solve_exact([[1, 2], [2, 4]], [1, 2])
