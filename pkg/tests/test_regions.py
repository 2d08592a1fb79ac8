import itertools
import math

import numpy as np
import pytest

from triangleland import kinematics as kin
from triangleland import regions as rg
from triangleland import shape_map as sm
from triangleland.kinematics import AngleKind, Triangle
from triangleland.regions import Convention
from triangleland.shape_map import ShapePoint

L = sm.landmarks(1)
E, EBAR = L["E"], L["Ebar"]


def at(name):
    return L[name]


def test_obtuse_examples():
    assert rg.predicate_obtuse_at(1)(at("M1"))
    assert rg.predicate_obtuse()(at("M2"))
    for k in kin.CLUSTERS:
        assert not rg.predicate_obtuse_at(k)(E)
    assert rg.predicate_acute()(E)
    p = sm.shape_point(Triangle((0, 1), (-1, 0), (1, 0)), 1)
    assert p.Z == pytest.approx(0.5, abs=1e-12)


def test_aspect_examples():
    assert rg.predicate_tall(1)(at("B1"))
    assert rg.predicate_flat(1)(at("M1"))
    for k in kin.CLUSTERS:
        assert rg.predicate_regular(k)(E)
        assert rg.predicate_isosceles(k)(E)
    assert rg.predicate_collinear()(at("B2"))
    assert rg.predicate_orientation()(E) and not rg.predicate_orientation()(EBAR)


def test_predicates_read_other_frames():
    # a point given in frame 2 is moved to frame 1 before the test
    p = ShapePoint(0, 0, 1, 2)
    assert rg.predicate_obtuse_at(2)(p)
    assert not rg.predicate_obtuse_at(1)(p)


def test_predicate_algebra():
    a, b = rg.predicate_tall(1), rg.predicate_obtuse_at(1)
    x = np.array([at("M1").xyz, at("B1").xyz, E.xyz])
    assert list((a | b).contains(x)) == [True, True, False]
    assert list((a & b).contains(x)) == [False, False, False]
    assert list((~b).contains(x)) == [False, True, True]
    assert set((a & b).atom_list) == {a, b}
    with pytest.raises(ValueError):
        ~rg.predicate_collinear()


def test_canonical_aspect_atoms_match():
    # median Z < 0 agrees with "at least two of the Z_k are negative"
    xyz = np.random.default_rng(3).standard_normal((20_000, 3))
    xyz /= np.linalg.norm(xyz, axis=1, keepdims=True)
    votes = sum(rg.predicate_tall(k).contains(xyz).astype(int) for k in kin.CLUSTERS)
    assert np.array_equal(rg.predicate_tall().contains(xyz), votes >= 2)


def test_conventions():
    assert Convention.parse("fixed") is Convention.FIXED1
    assert Convention.parse("symmetrized") is Convention.SYMMETRIZED
    terms = rg.aspect_terms("tall", "symmetrized")
    assert [w for w, _ in terms] == pytest.approx([1 / 3] * 3)
    assert rg.aspect_terms("flat", "fixed2")[0][1].name == "flat_2"
    with pytest.raises(ValueError):
        Convention.parse("nope")


def test_named_predicate():
    assert rg.named_predicate("obtuse").name == "obtuse"
    assert rg.named_predicate("tall", 2).name == "tall_2"
    assert rg.named_predicate("obtuse_at_3").name == "obtuse_at_3"
    with pytest.raises(ValueError):
        rg.named_predicate("wobbly")


# --- curves -------------------------------------------------------------------

def test_cap_circle():
    for k in kin.CLUSTERS:
        c = rg.right_cap_boundary(k)
        assert c.total_length == pytest.approx(math.pi * math.sqrt(3))
        assert c.arc_length(0, 1) == pytest.approx(c.total_length, abs=1e-9)
        t = np.linspace(0, 1, 97)
        pts = c.param(t)
        assert np.allclose(rg.frame_coords(pts, k)[2], 0.5)
        # t = 0 and t = 1/2 are the two B points on the cap circle
        ends = c.param(np.array([0.0, 0.5]))
        others = sorted(f"B{int(j)}" for j in kin.CLUSTERS if j != k)
        for j in others:
            B = at(j).xyz
            assert rg.frame_coords(B, k)[2] == pytest.approx(0.5, abs=1e-12)
            assert np.abs(ends - B).sum(axis=1).min() < 1e-12


def test_cap_points_are_right_triangles():
    for k in kin.CLUSTERS:
        pts = rg.right_cap_boundary(k).param(np.linspace(0, 1, 50, endpoint=False) + 0.003)
        for xyz in pts:
            t = sm.representative_triangle(ShapePoint(*xyz, 1))
            c = kin.classify_angle(t, 1e-9)
            assert c.kind is AngleKind.RIGHT and c.vertex == k


def test_caps_only_touch_at_b_points():
    # the gap Z_j - 1/2 along cap k's circle has a single double root
    for k, j in itertools.permutations(kin.CLUSTERS, 2):
        c = rg.right_cap_boundary(k)
        t = np.linspace(0, 1, 20001)
        gap = rg.frame_coords(c.param(t), j)[2] - 0.5
        assert gap.max() < 1e-9
        i = int(gap.argmax())
        touch = c.param(t[i:i + 1])[0]
        l = ({1, 2, 3} - {int(k), int(j)}).pop()
        assert touch == pytest.approx(at(f"B{l}").xyz, abs=1e-3)
        assert np.sum(gap > -1e-6) < 20


def tangent_at_e(curve, t_e):
    h = 1e-6
    a, b = curve.param(np.array([t_e - h, t_e + h]))
    v = b - a
    v -= (v @ E.xyz) * E.xyz
    return v / np.linalg.norm(v)


def test_meridians():
    for k in kin.CLUSTERS:
        iso, reg = rg.meridian(k, "isosceles"), rg.meridian(k, "regular")
        for c in (iso, reg):
            assert c.total_length == pytest.approx(2 * math.pi)
            assert c.arc_length(0, 1) == pytest.approx(2 * math.pi, abs=1e-9)
            assert c.param(np.array([0.25]))[0] == pytest.approx(E.xyz, abs=1e-12)
            assert c.param(np.array([0.75]))[0] == pytest.approx(EBAR.xyz, abs=1e-12)
        assert iso.param(np.array([0.0]))[0] == pytest.approx(at(f"M{int(k)}").xyz, abs=1e-12)
        assert iso.param(np.array([0.5]))[0] == pytest.approx(at(f"B{int(k)}").xyz, abs=1e-12)
        ti, tr = tangent_at_e(iso, 0.25), tangent_at_e(reg, 0.25)
        assert abs(ti @ tr) < 1e-9
    # the six meridian directions at E are pi/6 apart
    dirs = []
    for k in kin.CLUSTERS:
        for kind in ("isosceles", "regular"):
            v = tangent_at_e(rg.meridian(k, kind), 0.25)
            dirs += [v, -v]
    ang = sorted(math.atan2(v[0], v[2]) % (2 * math.pi) for v in dirs)
    gaps = np.diff(ang + [ang[0] + 2 * math.pi])
    assert gaps == pytest.approx([math.pi / 6] * 12, abs=1e-6)


def test_equator_and_families():
    eq = rg.equator()
    assert np.allclose(eq.param(np.linspace(0, 1, 9))[:, 1], 0)
    assert len(rg.curve_family("right")) == 3
    assert rg.curve_family("right_cap_2")[0].name == "right_cap_2"
    assert rg.curve_family("isosceles_meridian_3")[0].name == "isosceles_meridian_3"
    with pytest.raises(ValueError):
        rg.curve_family("spiral")


# --- cells --------------------------------------------------------------------

def test_cell_of_e_is_flagged():
    c = rg.cell_of(E)
    assert c.boundary and c.id == 1
    c = rg.cell_of(EBAR)
    assert c.boundary and c.id == 13


def ordering(t):
    return tuple(np.argsort(kin.side_lengths(t)))


def test_relabelings_visit_six_cells():
    rng = np.random.default_rng(11)
    for _ in range(20):
        P = rng.standard_normal((3, 2))
        cells = set()
        for perm in itertools.permutations(range(3)):
            t = Triangle.from_array(P[list(perm)])
            cells.add(rg.cell_of(sm.shape_point(t, 1)).id)
        assert len(cells) == 6
        # relabelling keeps the unlabelled shape and so its aspect; a mirror
        # relabelling sends segment s to 11 - s in the other hemisphere
        aspects = {((c - 1) % 12) % 2 ^ (c > 12) for c in cells}
        assert len(aspects) == 1


def test_cells_partition_by_ordering_orientation_aspect(gaussian_triangles):
    P = gaussian_triangles
    xyz = sm.hopf_array(P, 1)
    ids = rg.cell_ids(xyz)
    assert set(np.unique(ids)) == set(range(1, 25))
    s = kin.side_lengths_array(P)
    order = np.argsort(s, axis=1) @ np.array([9, 3, 1])
    ccw = kin.signed_area_array(P) > 0
    tall = rg.predicate_tall().contains(xyz)
    key = order * 4 + ccw * 2 + tall
    pairs = set(zip(ids.tolist(), key.tolist()))
    assert len(pairs) == 24                      # each cell gets exactly one label triple
    assert len({k for _, k in pairs}) == 24      # and no two cells share one


def test_exactly_one_cap(sphere_samples):
    n = sum(rg.predicate_obtuse_at(k).contains(sphere_samples).astype(int) for k in kin.CLUSTERS)
    assert n.max() == 1


def test_boundary_distance():
    d = rg.boundary_distance(np.array([E.xyz, at("M1").xyz, [0.6, 0.0, 0.8]]))
    assert d == pytest.approx([0, 0, 0], abs=1e-12)
    p = sm.from_spherical(0.3, 1.0).xyz
    assert rg.boundary_distance(p[None])[0] > 0.05
