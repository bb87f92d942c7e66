#!/usr/bin/env python3
"""
Test script for partitions, the amplituhedron map, facet families and membership
"""

import pytest
import sympy as sp

from amplituhedron import (
    MembershipStatus, Partition, PositivityLevel, amplituhedron_map, boundary_family_matrix,
    boundary_family_sample, boundary_incidence, maximal_minors, membership, membership_from_preimage,
    pad_tnn, projection_minor_identity_check, reference_plane, sample_tnn, z_matrix,
)
from chowforms import curve_point
from commands.figure_cmd import pizza_slice_rows
from exceptions import DegenerateInputError, ParameterError
from grassmann import bracket, plane_from_primal, same_subspace

R = sp.Rational


def _k1_point(x, y):
    return plane_from_primal([[1, x, y]])


def _inside_k1(x, y) -> bool:
    """Convex hull of the arc (t, t^2), 0 <= t <= 1"""
    return x ** 2 < y < x


def test_partitions():
    print("🧪 Testing partitions...")
    I = Partition.uniform(5)
    assert I.values == (0, R(1, 4), R(1, 2), R(3, 4), 1)
    assert I.is_refined_by(I.refine())
    assert I.interval_of(R(3, 5)) == 3
    assert Partition.dyadic(3).n == 9
    with pytest.raises(ParameterError):
        Partition((0, R(1, 2), R(1, 2), 1))
    with pytest.raises(ParameterError):
        Partition((R(1, 3), 1))
    print("✅ Partition tests passed!")


def test_z_matrix_needs_enough_points():
    with pytest.raises(DegenerateInputError):
        z_matrix(Partition.uniform(3), 2)
    Z = z_matrix(Partition.uniform(4), 2)
    assert all(m > 0 for m in maximal_minors([list(col) for col in zip(*Z.rows)]).values())


def test_tnn_samples_and_padding():
    C = sample_tnn(2, 5, PositivityLevel.STRICTLY_POSITIVE, seed=1)
    assert C.verify()
    I, J = Partition.uniform(5), Partition.uniform(9)
    padded = pad_tnn(C, I, J)
    assert padded.n == 9 and padded.verify()
    D = sample_tnn(2, 6, PositivityLevel.NONNEGATIVE, seed=2)
    assert D.verify()


def test_image_is_the_same_after_refinement():
    C = sample_tnn(2, 5, PositivityLevel.STRICTLY_POSITIVE, seed=3)
    I, J = Partition.uniform(5), Partition.uniform(9)
    A = amplituhedron_map(C, z_matrix(I, 2))
    B = amplituhedron_map(pad_tnn(C, I, J), z_matrix(J, 2))
    assert same_subspace(A, B)


def test_projection_minor_identity_is_exact():
    for k, n in [(1, 4), (2, 5), (3, 7)]:
        C = sample_tnn(k, n, PositivityLevel.STRICTLY_POSITIVE, seed=k)
        Z = z_matrix(Partition.uniform(n), k)
        A = amplituhedron_map(C, Z)
        assert projection_minor_identity_check(A, Z) == 0


def test_facet_family_lies_on_its_facet():
    print("🧪 Testing facet families...")
    I = Partition.uniform(6)
    for i in range(1, I.n):
        A = boundary_family_sample(i, I, 2, seed=i)
        assert bracket(A, curve_point(I.values[i - 1], 2), curve_point(I.values[i], 2)) == 0
    rows = boundary_family_matrix(2, 6, 2, seed=0)
    assert rows[0][1] == 1 and all(x == 0 for x in rows[0][3:])
    print("✅ Facet family tests passed!")


def test_reference_plane_k1():
    assert same_subspace(reference_plane(1), plane_from_primal([[36, 18, 14]]))


def test_boundary_certificates_k1():
    arc = membership(_k1_point(R(1, 2), R(1, 4)))
    assert arc.status == MembershipStatus.BOUNDARY
    assert arc.certificate.kind == "curve"
    chord = membership(_k1_point(R(1, 2), R(1, 2)))
    assert chord.status == MembershipStatus.BOUNDARY
    assert chord.certificate.kind == "segment"
    assert boundary_incidence(_k1_point(2, 2)) is None


def test_k1_membership_matches_convex_hull():
    print("🧪 Testing k=1 membership against the convex hull...")
    points = [
        (R(1, 2), R(3, 8)), (R(1, 4), R(1, 8)), (R(3, 4), R(2, 3)),
        (R(1, 2), R(1, 10)), (R(1, 2), R(9, 10)), (2, 3), (R(-1, 2), R(1, 2)), (2, 2),
    ]
    for index, (x, y) in enumerate(points):
        verdict = membership(_k1_point(x, y), seed=index)
        expected = MembershipStatus.INTERIOR if _inside_k1(x, y) else MembershipStatus.EXTERIOR
        assert verdict.status == expected, (x, y, verdict.status)
    print("✅ Convex hull agreement passed!")


def test_exterior_verdict_has_crossings():
    verdict = membership(_k1_point(R(1, 2), R(1, 10)), seed=0)
    assert verdict.status == MembershipStatus.EXTERIOR
    assert verdict.certificate.kind == "crossings"
    assert all(p.outcome == "crossed" for p in verdict.paths)


def test_preimage_gives_member_verdict():
    for k in (1, 2, 3):
        n = k + 3
        C = sample_tnn(k, n, PositivityLevel.STRICTLY_POSITIVE, seed=10 + k)
        verdict = membership_from_preimage(C, Partition.uniform(n), k)
        assert verdict.status.is_member


def test_exact_zero_grid_node_still_counts_as_crossing():
    """(7/10, 13/10) puts the chord form exactly at zero on a path node"""
    print("🧪 Testing exterior points whose paths hit a grid node on the chord...")
    for x, y in [(R(7, 10), R(13, 10)), (R(139, 200), R(259, 200))]:
        verdict = membership(_k1_point(x, y), seed=0)
        assert verdict.status == MembershipStatus.EXTERIOR, (x, y, verdict.status)
        assert verdict.certificate.kind == "crossings"
    print("✅ Zero grid node tests passed!")


def test_k1_dense_grid_matches_convex_hull():
    print("🧪 Testing a dense k=1 grid against the convex hull...")
    rows = [r for r in pizza_slice_rows(21, seed=3) if r["kind"] == "grid"]
    assert len(rows) == 21 * 21
    assert any(r["x"] == 0.5 and abs(r["y"] - 1.1) < 1e-12 for r in rows)
    undetermined = [r for r in rows if r["status"] == MembershipStatus.UNDETERMINED.value]
    assert len(undetermined) <= len(rows) // 50
    for r in rows:
        if r["status"] == MembershipStatus.UNDETERMINED.value:
            continue
        member = r["status"] in (MembershipStatus.INTERIOR.value, MembershipStatus.BOUNDARY.value)
        assert member == r["oracle"], r
    print("✅ Dense grid agreement passed!")


@pytest.mark.parametrize("k, n", [(1, 4), (2, 5)])
@pytest.mark.parametrize("level", [PositivityLevel.STRICTLY_POSITIVE, PositivityLevel.NONNEGATIVE])
def test_images_of_nonnegative_points_are_never_exterior(k, n, level):
    Z = z_matrix(Partition.uniform(n), k)
    for draw in range(3):
        C = sample_tnn(k, n, level, seed=100 * k + draw)
        V = amplituhedron_map(C, Z)
        verdict = membership(V, seed=draw)
        assert verdict.status != MembershipStatus.EXTERIOR, (k, level, draw, verdict.certificate)
        if k == 1:
            assert verdict.status.is_member


def main():
    """Run all tests"""
    print("🎯 Starting amplituhedron tests")
    print("=" * 50)

    tests = [
        test_partitions,
        test_z_matrix_needs_enough_points,
        test_tnn_samples_and_padding,
        test_image_is_the_same_after_refinement,
        test_projection_minor_identity_is_exact,
        test_facet_family_lies_on_its_facet,
        test_reference_plane_k1,
        test_boundary_certificates_k1,
        test_k1_membership_matches_convex_hull,
        test_exterior_verdict_has_crossings,
        test_preimage_gives_member_verdict,
        test_exact_zero_grid_node_still_counts_as_crossing,
        test_k1_dense_grid_matches_convex_hull,
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
