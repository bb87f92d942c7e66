#!/usr/bin/env python3
"""
Test script for k-planes, dual pairs and Pluecker coordinates
"""

import pytest
import sympy as sp
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from algebra_core import Mode
from exceptions import DegenerateInputError, DimensionError
from grassmann import (
    as_mode, bracket, change_basis, contains_subspace, plane_from_pair, plane_from_primal, plucker_dual, same_subspace,
)

R = sp.Rational


def _annihilates(V) -> bool:
    return all(sum(x * y for x, y in zip(row, d)) == 0 for row in V.primal for d in V.dual)


def test_plane_from_primal_builds_dual_pair():
    print("🧪 Testing plane construction...")
    V = plane_from_primal([[1, 0, 0, 0], [0, 1, R(1, 2), 3]])
    assert V.k == 2 and V.ambient == 4
    assert len(V.dual) == 2
    assert _annihilates(V)
    assert plucker_dual(V).relations_hold()
    print("✅ Plane construction tests passed!")


def test_rank_deficient_rows_rejected():
    with pytest.raises(DegenerateInputError):
        plane_from_primal([[1, 2, 3, 4], [2, 4, 6, 8]])
    with pytest.raises(DimensionError):
        plane_from_primal([[1, 2, 3, 4], [1, 2]])
    with pytest.raises(DimensionError):
        plane_from_primal([[1, 2, 3, 4]])


def test_pair_must_annihilate():
    with pytest.raises(DegenerateInputError):
        plane_from_pair([[1, 0, 0]], [[1, 0, 0], [0, 1, 0]])
    V = plane_from_pair([[1, 0, 0]], [[0, 1, 0], [0, 0, 1]])
    assert V.k == 1


def test_bracket_vanishes_on_contained_vectors():
    V = plane_from_primal([[1, 1, 1, 1], [0, 1, 2, 3]])
    assert bracket(V, [1, 1, 1, 1], [0, 0, 1, 0]) == 0
    assert bracket(V, [1, 0, 0, 0], [0, 0, 0, 1]) != 0
    assert contains_subspace(V, [[1, 2, 3, 4]])
    assert not contains_subspace(V, [[1, 0, 0, 0]])


def test_change_basis_keeps_subspace():
    V = plane_from_primal([[1, 2, 0, 1], [0, 1, 1, 1]])
    W = change_basis(V, [[2, 1], [1, -1]])
    assert same_subspace(V, W)


def test_float_mode_plane():
    V = plane_from_primal([[1.0, 0.5, 0.25]], Mode.FLOAT)
    assert V.mode == Mode.FLOAT
    for d in V.dual:
        assert abs(sum(x * y for x, y in zip(V.primal[0], d))) < 1e-12


def test_as_mode_keeps_representatives():
    V = plane_from_primal([[1, R(1, 2), 0, R(1, 4)], [0, 1, 1, 1]])
    assert as_mode(V, Mode.EXACT) is V
    W = as_mode(V, Mode.FLOAT)
    assert W.mode == Mode.FLOAT
    assert W.primal[0][1] == 0.5
    assert [float(x) for x in V.dual[1]] == list(W.dual[1])
    assert same_subspace(V, as_mode(W, Mode.EXACT))


@settings(max_examples=30, deadline=None)
@given(
    k=st.integers(min_value=1, max_value=3),
    entries=st.lists(st.integers(min_value=-4, max_value=4), min_size=15, max_size=15),
)
def test_random_planes_have_consistent_duals(k, entries):
    width = k + 2
    rows = [entries[r * width:(r + 1) * width] for r in range(k)]
    try:
        V = plane_from_primal(rows)
    except DegenerateInputError:
        assume(False)
    assert _annihilates(V)
    assert plucker_dual(V).relations_hold()


def main():
    """Run all tests"""
    print("🎯 Starting Grassmannian tests")
    print("=" * 50)

    tests = [
        test_plane_from_primal_builds_dual_pair,
        test_rank_deficient_rows_rejected,
        test_pair_must_annihilate,
        test_bracket_vanishes_on_contained_vectors,
        test_change_basis_keeps_subspace,
        test_float_mode_plane,
        test_as_mode_keeps_representatives,
        test_random_planes_have_consistent_duals,
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
