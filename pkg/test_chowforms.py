#!/usr/bin/env python3
"""
Test script for the curve, Bezout matrices and both Chow forms
"""

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from algebra_core import UniPoly, determinant, matrix_rank, poly_gcd, sylvester_resultant
from chowforms import (
    bezout_corank, bezout_entries_from_dual, bezout_matrix, bezout_sign, chow_form_curve, chow_form_secant,
    curve_derivative, curve_point, generalized_vandermonde_det, generalized_vandermonde_direct,
    meets_secant_line, osculating_plane, stacked_osculating_rank,
)
from exceptions import DimensionError, ParameterError
from grassmann import plane_from_pair, plane_from_primal

R = sp.Rational
SMALL_INTS = st.integers(min_value=-5, max_value=5)


def _poly_product(*factors):
    t = sp.Symbol("t")
    expr = sp.expand(sp.Mul(*[sum(c * t ** i for i, c in enumerate(f)) for f in factors]))
    return [R(c) for c in reversed(sp.Poly(expr, t).all_coeffs())]


def test_curve_derivatives():
    print("🧪 Testing curve derivatives...")
    assert curve_point(R(1, 2), 1) == (1, R(1, 2), R(1, 4))
    assert curve_derivative(2, 1, 2) == (0, 1, 4, 12)
    assert curve_derivative(0, 3, 2) == (0, 0, 0, 6)
    with pytest.raises(ParameterError):
        curve_derivative(0, 5, 2)
    with pytest.raises(ParameterError):
        osculating_plane(0, 0, 2)
    print("✅ Curve derivative tests passed!")


def test_k1_chart_chow_form():
    x, y = R(1, 2), R(1, 3)
    V = plane_from_pair([[1, x, y]], [[-x, 1, 0], [-y, 0, 1]])
    assert chow_form_curve(V) == y - x ** 2
    assert chow_form_secant(V) == y - x
    assert bezout_matrix(V).is_symmetric()


def test_bezout_sign_pattern():
    assert [bezout_sign(k) for k in range(1, 6)] == [-1, -1, 1, 1, -1]


def test_reference_pair_resultant():
    dual = [[0, 0, 1], [1, 0, 0]]
    assert determinant(bezout_entries_from_dual(dual)) == -1
    f, g = UniPoly.from_coeffs(dual[0]), UniPoly.from_coeffs(dual[1])
    assert sylvester_resultant(f, g, 2) == 1


@settings(max_examples=40, deadline=None)
@given(
    k=st.integers(min_value=1, max_value=5),
    entries=st.lists(SMALL_INTS, min_size=14, max_size=14),
)
def test_bezout_determinant_is_signed_resultant(k, entries):
    f = entries[:k + 2]
    g = entries[7:7 + k + 2]
    B = bezout_entries_from_dual([f, g])
    expected = bezout_sign(k) * sylvester_resultant(UniPoly.from_coeffs(f), UniPoly.from_coeffs(g), k + 1)
    assert determinant(B) == expected


@settings(max_examples=30, deadline=None)
@given(
    roots=st.lists(st.fractions(min_value=-2, max_value=2, max_denominator=7), min_size=1, max_size=3),
    u=st.lists(SMALL_INTS, min_size=1, max_size=2), u_lead=st.integers(1, 4),
    v=st.lists(SMALL_INTS, min_size=1, max_size=2), v_lead=st.integers(1, 4),
)
def test_corank_counts_common_roots(roots, u, u_lead, v, v_lead):
    h = _poly_product(*[[-R(r.numerator, r.denominator), 1] for r in roots])
    size = min(len(u), len(v))
    f = _poly_product(h, u[:size] + [u_lead])
    g = _poly_product(h, v[:size] + [v_lead])
    n = len(f) - 1  # formal degree k + 1
    B = bezout_entries_from_dual([f, g])
    common = poly_gcd(UniPoly.from_coeffs(f), UniPoly.from_coeffs(g)).degree
    assert n - matrix_rank(B) == common


def test_secant_line_incidence():
    V = plane_from_primal([[2, 1, 1, 1], [0, 1, 0, 0]])  # gamma(0) + gamma(1) and e_1
    assert meets_secant_line(V)
    assert chow_form_secant(V) == 0
    W = plane_from_primal([[0, 1, 0, 0], [0, 0, 1, 0]])
    assert not meets_secant_line(W)


def test_corank_of_two_curve_points():
    V = plane_from_primal([list(curve_point(R(1, 3), 2)), list(curve_point(R(3, 4), 2))])
    assert bezout_corank(V) == 2
    assert chow_form_curve(V) == 0


def test_vandermonde_small_case():
    t0, t1 = R(1, 5), R(2, 3)
    assert generalized_vandermonde_direct([t0, t1], [2, 1]) == (t1 - t0) ** 2
    assert generalized_vandermonde_det([t0, t1], [2, 1], k=1) == (t1 - t0) ** 2
    with pytest.raises(DimensionError):
        generalized_vandermonde_det([t0, t1], [2, 2], k=1)


@settings(max_examples=25, deadline=None)
@given(
    nodes=st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=9), min_size=1, max_size=4, unique=True),
    mults=st.lists(st.integers(min_value=1, max_value=3), min_size=4, max_size=4),
)
def test_vandermonde_closed_form(nodes, mults):
    mults = mults[:len(nodes)]
    if sum(mults) < 2:
        mults = [2] + mults[1:]
    values = [R(t.numerator, t.denominator) for t in nodes]
    assert generalized_vandermonde_det(values, mults) == generalized_vandermonde_direct(values, mults)


@settings(max_examples=30, deadline=None)
@given(
    k=st.integers(min_value=1, max_value=4),
    nodes=st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=9), min_size=1, max_size=4, unique=True),
    mults=st.lists(st.integers(min_value=1, max_value=3), min_size=4, max_size=4),
)
def test_stacked_osculating_spaces_have_full_rank(k, nodes, mults):
    """Hermite interpolation: distinct nodes give independent derivative rows up to the ambient dimension"""
    mults = mults[:len(nodes)]
    values = [R(t.numerator, t.denominator) for t in nodes]
    assert stacked_osculating_rank(values, mults, k) == min(sum(mults), k + 2)


def main():
    """Run all tests"""
    print("🎯 Starting Chow form tests")
    print("=" * 50)

    tests = [
        test_curve_derivatives,
        test_k1_chart_chow_form,
        test_bezout_sign_pattern,
        test_reference_pair_resultant,
        test_bezout_determinant_is_signed_resultant,
        test_corank_counts_common_roots,
        test_secant_line_incidence,
        test_corank_of_two_curve_points,
        test_vandermonde_small_case,
        test_vandermonde_closed_form,
        test_stacked_osculating_spaces_have_full_rank,
    ]

    passed = 0
    for test_func in tests:
        try:
            test_func()
            passed += 1
        except Exception as e:
            print(f"❌ Test {test_func.__name__} failed with error: {e}")

    print("=" * 50)
    print(f"📊 Test Results: {passed}/{len(tests)} tests passed")
    return passed == len(tests)


if __name__ == "__main__":
    success = main()
    exit(0 if success else 1)
