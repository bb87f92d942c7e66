#!/usr/bin/env python3
"""
Test script for the exact/float algebra layer
Scalars, matrices, polynomial gcd, resultants and real root isolation
"""

from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from algebra_core import (
    Mode, RootKind, UniPoly, determinant, format_scalar, matrix_rank, nullspace_rows, poly_gcd,
    relative_rank, sturm_count, isolate_real_roots, sylvester_resultant, to_scalar,
)
from exceptions import DomainError

R = sp.Rational
SMALL_INTS = st.integers(min_value=-6, max_value=6)
LEADING = st.integers(min_value=1, max_value=5)


def test_scalar_conversion():
    print("🧪 Testing scalar conversion...")
    assert to_scalar("3/4") == R(3, 4)
    assert to_scalar(Fraction(-2, 6)) == R(-1, 3)
    assert to_scalar(5) == sp.Integer(5)
    assert to_scalar("1/8", Mode.FLOAT) == 0.125
    assert format_scalar(R(7, 3)) == "7/3"
    with pytest.raises(DomainError):
        to_scalar(float("inf"))
    print("✅ Scalar conversion tests passed!")


def test_exact_and_float_rank():
    print("🧪 Testing matrix rank...")
    assert matrix_rank([[1, 2, 3], [2, 4, 6]]) == 1
    assert matrix_rank([[1, 0], [0, 1]], Mode.FLOAT) == 2
    assert relative_rank(np.array([[1.0, 0.0], [0.0, 1e-12]])) == 1
    assert determinant([[2, 1], [R(1, 2), 3]]) == R(11, 2)
    print("✅ Rank tests passed!")


def test_exact_nullspace_annihilates():
    rows = [[1, 2, 3, 4], [0, 1, R(1, 2), -1]]
    basis = nullspace_rows(rows)
    assert len(basis) == 2
    for vector in basis:
        for row in rows:
            assert sum(to_scalar(a) * b for a, b in zip(row, vector)) == 0


def test_gcd_of_shared_factor():
    print("🧪 Testing polynomial gcd...")
    f = UniPoly.from_coeffs([R(1, 4), -1, 1])  # (t - 1/2)^2
    g = UniPoly.from_coeffs([R(-3, 2), R(5, 2), 1])  # (t - 1/2)(t + 3)
    h = poly_gcd(f, g)
    assert h.coeffs == (R(-1, 2), 1)
    with pytest.raises(DomainError):
        poly_gcd(UniPoly.from_coeffs([]), UniPoly.from_coeffs([0, 0]))
    print("✅ Gcd tests passed!")


def test_zero_polynomial_degree():
    assert UniPoly.from_coeffs([0, 0, 0]).degree == -1
    assert UniPoly.from_coeffs([3]).degree == 0


def test_sturm_count_on_unit_window():
    print("🧪 Testing Sturm counts...")
    # t (t - 1/2) (t - 1)
    p = UniPoly.from_coeffs([0, R(1, 2), R(-3, 2), 1])
    assert sturm_count(p) == 3
    assert sturm_count(UniPoly.from_coeffs([1, 0, 1])) == 0
    # (t - 2)^2 has no root in [0, 1]
    assert sturm_count(UniPoly.from_coeffs([4, -4, 1])) == 0
    print("✅ Sturm tests passed!")


def test_root_isolation_classifies_every_root():
    # (t - 1/3)^2 (t - 2) (t^2 + 1)
    t = sp.Symbol("t")
    expr = sp.expand((t - R(1, 3)) ** 2 * (t - 2) * (t ** 2 + 1))
    coeffs = list(reversed(sp.Poly(expr, t).all_coeffs()))
    roots = isolate_real_roots(UniPoly.from_coeffs(coeffs))
    assert roots.total_multiplicity() == 5
    assert roots.window_multiplicity() == 2
    kinds = sorted(e.kind.value for e in roots.entries)
    assert kinds == sorted([RootKind.IN_WINDOW.value, RootKind.REAL_OUTSIDE.value, RootKind.COMPLEX_PAIR.value])


def test_float_double_root_split_is_merged():
    print("🧪 Testing float clustering of a split double root...")
    # (t - 1/2)^2 (t - 2) with the double root pulled apart by 2e-8
    split = np.poly([0.5 + 1e-8, 0.5 - 1e-8, 2.0])
    p = UniPoly.from_coeffs(list(reversed(split.tolist())), Mode.FLOAT)
    inside = isolate_real_roots(p).in_window()
    assert len(inside) == 1
    assert inside[0].multiplicity == 2
    assert abs(inside[0].approx.real - 0.5) < 1e-6
    q = UniPoly.from_coeffs(list(reversed(np.poly([0.5, 0.5, -1.0]).tolist())), Mode.FLOAT)
    h = poly_gcd(p, q)
    assert h.degree == 2
    assert np.allclose(np.roots(h.high_first()), [0.5, 0.5], atol=1e-6)
    print("✅ Float clustering tests passed!")


@settings(max_examples=40, deadline=None)
@given(
    a=st.lists(SMALL_INTS, min_size=2, max_size=4), a_lead=LEADING,
    b=st.lists(SMALL_INTS, min_size=2, max_size=4), b_lead=LEADING,
)
def test_sylvester_matches_sympy_resultant(a, a_lead, b, b_lead):
    size = min(len(a), len(b))
    fa = UniPoly.from_coeffs(a[:size] + [a_lead])
    fb = UniPoly.from_coeffs(b[:size] + [b_lead])
    t = sp.Symbol("t")
    expected = sp.resultant(fa.to_sympy().as_expr(), fb.to_sympy().as_expr(), t)
    assert sylvester_resultant(fa, fb, size) == expected


def main():
    """Run all tests"""
    print("🎯 Starting algebra core tests")
    print("=" * 50)

    tests = [
        test_scalar_conversion,
        test_exact_and_float_rank,
        test_exact_nullspace_annihilates,
        test_gcd_of_shared_factor,
        test_zero_polynomial_degree,
        test_sturm_count_on_unit_window,
        test_root_isolation_classifies_every_root,
        test_float_double_root_split_is_merged,
        test_sylvester_matches_sympy_resultant,
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
