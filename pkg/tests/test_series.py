from __future__ import annotations

from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from mdentropy import closed_forms as cf
from mdentropy import series as S
from mdentropy.constants import A_K, C_K, JBAR
from mdentropy.polys import DPoly, P, RationalPoly

eps = S.DSeries.inv_d(4)


def test_arith_examples():
    assert S.series_arith(S.DSeries({}, 3), None, "exp") == S.DSeries.const(1, 3)
    x = S.DSeries({1: P}, 3)
    log1p = S.series_arith(1 + x, None, "log")
    assert log1p.coeff(1) == P and log1p.coeff(2) == P**2 * F(-1, 2) and log1p.coeff(3) == P**3 * F(1, 3)
    assert S.series_arith(1 + x, 1 - x, "mul") == 1 - S.DSeries({2: P**2}, 3)
    with pytest.raises(S.SeriesError):
        S.series_arith(x, x, "pow")
    with pytest.raises(S.SeriesError):
        (x + 2).log()


fr = st.fractions(min_value=-20, max_value=20, max_denominator=20)


@settings(max_examples=30, deadline=None)
@given(fr, fr)
def test_exp_log_roundtrip(a, b):
    x = S.DSeries({1: RationalPoly({1: a}), 2: RationalPoly({0: b})}, 4)
    assert x.exp().log() == x
    assert (x.exp() * (-x).exp()) == S.DSeries.const(1, 4)


def test_order_propagates():
    a = S.DSeries.inv_d(2)
    b = S.DSeries.inv_d(4)
    assert (a * b).order == 2 and (a + b).order == 2


def test_saddle_c_coefficients():
    s = S.saddle_solve()
    for k in (1, 2, 3):
        assert s.coeff(k) == C_K[k]
    assert s.head == "mean_field"


@pytest.mark.parametrize("K", [1, 2, 3])
def test_saddle_truncations(K):
    s = S.saddle_solve(K=K)
    for k in range(1, K + 1):
        assert s.coeff(k) == C_K[k]


def test_power_window():
    s = S.saddle_solve()
    for k in (1, 2, 3):
        assert all(k < p <= 2 * k for p in s.coeff(k).powers())


def test_fixed_point_idempotent():
    state = S.saddle_state()
    series = {k: S.DSeries.from_dpoly(v, 3) for k, v in JBAR.items() if k >= 2 and v.coeffs}
    again = S.saddle_iterate(series, state)
    assert again.alphas == state.alphas and again.j == state.j


def test_alpha_orders():
    state = S.saddle_state()
    for k, a in state.alphas.items():
        lead = min(JBAR[k].powers())
        assert a.valuation() >= lead
    assert state.j.valuation() >= 1


def test_exp_F_matches_H_slope():
    # exp(F_k) = exp(k dH/dj) evaluated on a concrete small j
    state = S.saddle_state()
    d, p = 400.0, 0.6
    j = state.j.evaluate(d, p)
    for k, ef in state.exp_F.items():
        ref = pow(2.718281828459045, k * cf.H_slope(p, j))
        assert abs(ef.evaluate(d, p) - ref) < 1e-9


def test_insufficient_orders():
    with pytest.raises(S.InsufficientOrdersError):
        S.saddle_solve(K=4)
    with pytest.raises(S.InsufficientOrdersError):
        S.saddle_solve({2: JBAR[2], 3: JBAR[3]}, K=2)
    with pytest.raises(S.InsufficientOrdersError):
        S.rearrange_in_p(S.saddle_solve(K=3), 6)


def test_rearrange_examples():
    a = S.expansion_coefficients(6)
    assert a[2] == DPoly({1: F(1, 8)})
    assert a[4] == DPoly({2: F(1, 32), 3: F(-5, 192)})
    assert a[6] == DPoly({3: F(1, 24), 4: F(-1, 32), 5: F(-19, 1920)})
    for k in range(2, 7):
        assert a[k] == A_K[k]
        assert a[k](1) == cf.lambda1_series_coeff(k)


def test_printing_and_json():
    s = S.saddle_solve(K=1)
    assert str(s) == "mean_field(d, p) + 1/8 * p^2 / d"
    doc = s.to_json()
    assert doc["schema"] == "1" and doc["terms"] == [{"d_power": 1, "p_power": 2, "coef": "1/8"}]


def test_evaluate_matches_expansion_at_large_d():
    s = S.saddle_solve()
    d, p = 50, 0.4
    assert abs(s.evaluate(d, p) - cf.expansion_eval(d, p, 6)) < 1e-6


def test_residual_examples():
    r = S.residual_check(F(1, 8), 7, 2)
    assert r.coeff(2).is_zero()
    assert r.coeff(3).coeff(3) == 0
    assert r.coeff(3) == RationalPoly({4: F(-7, 48)})
    r0 = S.residual_check(0, 0, 0)
    assert r0.coeff(2) == RationalPoly({2: F(1, 8)})
    assert S.residual_check(F(1, 8), 3, 2).coeff(3) == RationalPoly({4: F(-1, 16)})


@settings(max_examples=40, deadline=None)
@given(fr, fr, fr)
def test_residual_general_form(a, b, c):
    r = S.residual_check(a, b, c)
    assert r.coeff(0).is_zero() and r.coeff(1).is_zero()
    assert r.coeff(2) == RationalPoly({2: -(8 * a - 1) / 8})
    assert r.coeff(3) == RationalPoly({3: -(c - 2) / 96, 4: -2 * b / 96})


def test_ansatz_sign_conditions():
    assert S.theorem62_conditions(F(1, 8), 3, 2).all_pass
    v = S.theorem62_conditions(0, 0, 0)
    assert not v.A
    assert not S.theorem62_conditions(F(1, 8), -1, 2).C
    assert not S.theorem62_conditions(F(1, 8), 0, 1).B
    assert S.theorem62_conditions("1/8", "3", "2").as_dict()["a"] == "1/8"
