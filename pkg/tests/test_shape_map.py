import math

import numpy as np
import pytest
from hypothesis import assume, example, given
from hypothesis import strategies as st

from triangleland import kinematics as kin
from triangleland import shape_map as sm
from triangleland.kinematics import AngleKind, TotalCollision, Triangle
from triangleland.shape_map import ShapePoint

S3 = math.sqrt(3.0)
coord = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
triangles = st.tuples(*[st.tuples(coord, coord)] * 3).map(lambda v: Triangle(*v))
unit = st.tuples(st.floats(-1, 1), st.floats(0, 2 * math.pi)).map(
    lambda zp: (math.sqrt(1 - zp[0] ** 2) * math.cos(zp[1]),
                math.sqrt(1 - zp[0] ** 2) * math.sin(zp[1]), zp[0]))


def sized(t):
    return float(kin.rms_size(t)) > 1e-3


def test_landmark_examples():
    p = sm.shape_point(Triangle((0, S3 / 2), (-0.5, 0), (0.5, 0)), 1)
    assert p.xyz == pytest.approx((0, 1, 0), abs=1e-12)
    p = sm.shape_point(Triangle((0, 1), (0.3, 0.3), (0.3, 0.3)), 1)
    assert p.xyz == pytest.approx((0, 0, -1), abs=1e-12)
    assert sm.spherical_coords(p).theta == pytest.approx(math.pi)
    p = sm.shape_point(Triangle((0.5, 0.25), (-1, 0), (2, 0.5)), 1)
    assert p.xyz == pytest.approx((0, 0, 1), abs=1e-12)
    with pytest.raises(TotalCollision):
        sm.shape_point(Triangle((1, 1), (1, 1), (1, 1)))


def test_spherical_examples():
    sc = sm.spherical_coords(ShapePoint(0, 1, 0))
    assert (sc.theta, sc.phi) == pytest.approx((math.pi / 2, math.pi / 2))
    assert sm.spherical_coords(ShapePoint(0, 0, 1)).theta == 0
    assert sm.spherical_coords(ShapePoint(0, 0, 1)).phi == 0
    right = sm.shape_point(Triangle((0, 1), (-1, 0), (1, 0)), 1)
    assert right.theta == pytest.approx(math.pi / 3)
    for k in kin.CLUSTERS:
        # right angle at vertex k, seen from cluster k
        P = np.array([[-1.0, 0.0], [1.0, 0.0], [0.6, 0.8]])
        P = np.roll(P, k % 3, axis=0)
        t = Triangle.from_array(P)
        assert kin.classify_angle(t).vertex == k
        assert sm.shape_point(t, k).theta == pytest.approx(math.pi / 3)


def test_representative_examples():
    t = sm.representative_triangle(ShapePoint(0, 1, 0))
    s = kin.side_lengths(t)
    assert max(s) - min(s) < 1e-9
    p = sm.from_spherical(math.pi / 3, math.pi / 2)
    t = sm.representative_triangle(p)
    c = kin.classify_angle(t)
    assert c.kind is AngleKind.RIGHT and c.vertex == 1
    assert kin.is_isosceles(t, 1)
    t = sm.representative_triangle(ShapePoint(0, 0, 1))
    P = t.vertices
    assert P[0] == pytest.approx((P[1] + P[2]) / 2, abs=1e-12)
    assert kin.is_collinear(t)
    with pytest.raises(ValueError):
        sm.representative_triangle(ShapePoint(0, 0, 2))


def test_cluster_rotate_examples():
    E = ShapePoint(0, 1, 0)
    for a in kin.CLUSTERS:
        for b in kin.CLUSTERS:
            assert sm.cluster_rotate(E, a, b).xyz == pytest.approx((0, 1, 0), abs=1e-15)
    B1_in_2 = sm.cluster_rotate(ShapePoint(0, 0, -1, 1), 1, 2)
    assert sm.geodesic_distance(B1_in_2, ShapePoint(0, 0, -1, 2)) == pytest.approx(2 * math.pi / 3)


def test_geodesic_examples():
    p = ShapePoint(0.6, 0, 0.8)
    assert sm.geodesic_distance(p, p) == 0
    assert sm.geodesic_distance(ShapePoint(0, 1, 0), ShapePoint(0, -1, 0)) == pytest.approx(math.pi)
    L = sm.landmarks(1)
    assert sm.geodesic_distance(L["B1"], L["B2"]) == pytest.approx(2 * math.pi / 3)
    assert sm.geodesic_distance(L["B1"], L["M1"]) == pytest.approx(math.pi)


def test_landmarks():
    for k in kin.CLUSTERS:
        L = sm.landmarks(k)
        assert L[f"M{int(k)}"].xyz == pytest.approx((0, 0, 1), abs=1e-15)
        assert L[f"B{int(k)}"].xyz == pytest.approx((0, 0, -1), abs=1e-15)
        assert L["E"].xyz == pytest.approx((0, 1, 0))
        assert L["Ebar"].xyz == pytest.approx((0, -1, 0))
        for name in ("B1", "B2", "B3", "M1", "M2", "M3"):
            assert L[name].Y == 0
    # landmark coordinates agree with the triangles they name
    for k in kin.CLUSTERS:
        i, j = k.base
        P = np.zeros((3, 2))
        P[k.apex] = (0.2, 1.0)
        B = sm.shape_point(Triangle.from_array(P), 1)
        assert B.xyz == pytest.approx(sm.landmarks(1)[f"B{int(k)}"].xyz, abs=1e-12)
        P = np.array([[0.0, 0.0]] * 3)
        P[i], P[j], P[k.apex] = (-1, 0), (1, 0), (0, 0)
        M = sm.shape_point(Triangle.from_array(P), 1)
        assert M.xyz == pytest.approx(sm.landmarks(1)[f"M{int(k)}"].xyz, abs=1e-12)


def test_json_round_trip():
    p = ShapePoint(0.6, 0.0, -0.8, 3)
    assert ShapePoint.from_json(p.to_json()) == p
    assert p.in_frame(1).cluster == 1


# --- properties ---------------------------------------------------------------

@given(triangles, st.integers(1, 3))
def test_unit_norm(t, k):
    assume(sized(t))
    p = sm.shape_point(t, k)
    assert abs(p.X ** 2 + p.Y ** 2 + p.Z ** 2 - 1) <= 1e-12


@given(triangles, st.floats(0, 2 * math.pi), st.floats(0.01, 100), st.tuples(coord, coord))
def test_similarity_invariant(t, angle, scale, shift):
    assume(sized(t))
    c, s = math.cos(angle), math.sin(angle)
    u = Triangle.from_array(scale * t.vertices @ np.array([[c, s], [-s, c]]) + shift)
    assert sm.shape_point(u, 1).xyz == pytest.approx(sm.shape_point(t, 1).xyz, abs=1e-9)


@given(triangles)
def test_base_swap_and_reflection(t):
    assume(sized(t))
    p = sm.shape_point(t, 1)
    swapped = sm.shape_point(Triangle(t.v1, t.v3, t.v2), 1)
    assert swapped.xyz == pytest.approx((-p.X, -p.Y, p.Z), abs=1e-12)
    mirrored = sm.shape_point(Triangle.from_array(t.vertices * (1.0, -1.0)), 1)
    assert mirrored.xyz == pytest.approx((p.X, -p.Y, p.Z), abs=1e-12)


@given(triangles)
def test_cross_frame_consistency(t):
    assume(sized(t))
    for a in kin.CLUSTERS:
        for b in kin.CLUSTERS:
            direct = sm.shape_point(t, b)
            rotated = sm.cluster_rotate(sm.shape_point(t, a), a, b)
            assert rotated.xyz == pytest.approx(direct.xyz, abs=1e-9)


@given(unit)
def test_rotation_cycle_identity(xyz):
    p = ShapePoint(*xyz, 1)
    q = sm.cluster_rotate(sm.cluster_rotate(sm.cluster_rotate(p, 1, 2), 2, 3), 3, 1)
    assert q.xyz == pytest.approx(p.xyz, abs=1e-12)


@given(triangles)
def test_stereographic_ratio(t):
    assume(sized(t))
    for k in kin.CLUSTERS:
        j = kin.jacobi(t, k)
        n1 = np.linalg.norm(j.rho1)
        assume(n1 > 1e-6 * float(kin.rms_size(t)))
        ratio = sm.stereographic_ratio(sm.shape_point(t, k))
        assert ratio == pytest.approx(np.linalg.norm(j.rho2) / n1, rel=1e-9, abs=1e-9)


@given(unit)
@example((1.0, -2.4492935982947064e-16, 0.0))
def test_spherical_round_trip(xyz):
    p = ShapePoint(*xyz)
    sc = sm.spherical_coords(p)
    assert 0 <= sc.theta <= math.pi and 0 <= sc.phi < 2 * math.pi
    assume(math.hypot(p.X, p.Y) > 1e-9)
    assert sm.from_spherical(sc.theta, sc.phi).xyz == pytest.approx(p.xyz, abs=1e-12)


def test_round_trip_bulk(sphere_samples):
    # 10^5 samples through representative_triangle and back, in every frame
    for k in kin.CLUSTERS:
        xyz_k = sm.rotate_array(sphere_samples, 1, k)
        P = sm.representative_array(xyz_k, k)
        back = sm.hopf_array(P, k)
        assert np.abs(back - xyz_k).max() <= 1e-9
        # unit moment of inertia, centroid at the origin
        assert np.abs(((P ** 2).sum(axis=(-1, -2))) - 1).max() < 1e-12
        assert np.abs(P.mean(axis=-2)).max() < 1e-12


def test_unit_norm_bulk(gaussian_triangles):
    P = gaussian_triangles[:100_000]
    for k in kin.CLUSTERS:
        xyz = sm.hopf_array(P, k)
        assert np.abs((xyz ** 2).sum(axis=-1) - 1).max() <= 1e-12


def test_cross_frame_bulk(gaussian_triangles):
    P = gaussian_triangles[:100_000]
    one = sm.hopf_array(P, 1)
    for k in (2, 3):
        assert np.abs(sm.rotate_array(one, 1, k) - sm.hopf_array(P, k)).max() <= 1e-9
