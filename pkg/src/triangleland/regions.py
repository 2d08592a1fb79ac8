"""Events and curves on the shape sphere, in closed form.

Membership tests work on Hopf coordinates in the frame of cluster 1.  Writing
``(X_k, Y, Z_k)`` for the same point in frame ``k``:

* obtuse at vertex k:  ``Z_k > 1/2``.  A right angle at the apex puts the
  median at half the base (Thales), so ``|rho2|/|rho1| = 1/sqrt(3)``, which
  gives ``theta_k = pi/3`` and ``cos(theta_k) = 1/2``.  A shorter median
  gives an obtuse apex, which is the cap around ``M_k``.
* tall(k): ``Z_k < 0``, flat(k): ``Z_k > 0``, regular(k): ``Z_k = 0``.
* isosceles(k): ``X_k = 0``; collinear: ``Y = 0``.

Side lengths follow from ``s_k^2 = 1 + Z_k`` at unit moment of inertia, so
sorting sides is the same as sorting the ``Z_k``.  The canonical cluster
(base = median side) is the one holding the median ``Z_k``.

The three caps touch pairwise at the B points and never overlap.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .kinematics import CLUSTERS, as_cluster
from .shape_map import ShapePoint, cluster_rotate, frame_coords, rotate_array

CAP_Z = 0.5
CAP_THETA = math.pi / 3.0

Membership = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class EventPredicate:
    """A named membership test on the shape sphere.

    ``membership`` maps an ``(N, 3)`` array of frame-1 Hopf coordinates to a
    boolean array.  Calling the predicate on a :class:`ShapePoint` handles the
    frame change.  ``codimension`` is 0 for regions and 1 for curves.

    ``atoms`` lists the simple predicates (one smooth boundary each) that the
    membership is a boolean function of.  Quadrature uses them to find places
    where two boundaries pinch together, such as the cusps between kissing
    caps, which coarse sampling would otherwise step over.
    """

    name: str
    membership: Membership = field(repr=False, compare=False)
    codimension: int = 0
    atoms: tuple = field(default=(), repr=False, compare=False)

    def __call__(self, p: ShapePoint) -> bool:
        q = cluster_rotate(p, p.cluster, 1)
        return bool(self.membership(q.xyz[None, :])[0])

    @property
    def atom_list(self) -> tuple:
        return self.atoms or (self,)

    def contains(self, xyz) -> np.ndarray:
        xyz = np.asarray(xyz, dtype=float)
        return np.asarray(self.membership(xyz.reshape(-1, 3))).reshape(xyz.shape[:-1])

    def _combined_atoms(self, other):
        out = []
        for a in self.atom_list + other.atom_list:
            if all(a is not b for b in out):
                out.append(a)
        return tuple(out)

    def __and__(self, other: EventPredicate) -> EventPredicate:
        f, g = self.membership, other.membership
        return EventPredicate(f"{self.name} & {other.name}", lambda x: f(x) & g(x),
                              max(self.codimension, other.codimension),
                              self._combined_atoms(other))

    def __or__(self, other: EventPredicate) -> EventPredicate:
        f, g = self.membership, other.membership
        return EventPredicate(f"{self.name} | {other.name}", lambda x: f(x) | g(x),
                              max(self.codimension, other.codimension),
                              self._combined_atoms(other))

    def __invert__(self) -> EventPredicate:
        if self.codimension:
            raise ValueError("complement of a curve is not a region event here")
        f = self.membership
        return EventPredicate(f"~{self.name}", lambda x: ~f(x), 0, self.atom_list)


_ROT = {k: (math.cos((k - 1) * 2.0 * math.pi / 3.0), math.sin((k - 1) * 2.0 * math.pi / 3.0))
        for k in (1, 2, 3)}


def _zk(xyz, k):
    if k == 1:
        return xyz[..., 2]
    c, s = _ROT[int(k)]
    return c * xyz[..., 2] - s * xyz[..., 0]


def _xk(xyz, k):
    if k == 1:
        return xyz[..., 0]
    c, s = _ROT[int(k)]
    return s * xyz[..., 2] + c * xyz[..., 0]


def median_z(xyz) -> np.ndarray:
    """``Z`` in the canonical (median-side) frame of each point."""
    zs = np.stack([_zk(xyz, k) for k in CLUSTERS], axis=-1)
    return np.sort(zs, axis=-1)[..., 1]


def whole_sphere() -> EventPredicate:
    return EventPredicate("sphere", lambda x: np.ones(len(x), dtype=bool))


def predicate_obtuse_at(k) -> EventPredicate:
    k = as_cluster(k)
    return EventPredicate(f"obtuse_at_{int(k)}", lambda x: _zk(x, k) > CAP_Z)


def _caps():
    return tuple(predicate_obtuse_at(k) for k in CLUSTERS)


def predicate_obtuse() -> EventPredicate:
    def member(x):
        return (_zk(x, 1) > CAP_Z) | (_zk(x, 2) > CAP_Z) | (_zk(x, 3) > CAP_Z)
    return EventPredicate("obtuse", member, 0, _caps())


def predicate_acute() -> EventPredicate:
    def member(x):
        return (_zk(x, 1) < CAP_Z) & (_zk(x, 2) < CAP_Z) & (_zk(x, 3) < CAP_Z)
    return EventPredicate("acute", member, 0, _caps())


def predicate_right() -> EventPredicate:
    def member(x):
        return ((_zk(x, 1) == CAP_Z) | (_zk(x, 2) == CAP_Z) | (_zk(x, 3) == CAP_Z))
    return EventPredicate("right", member, 1)


def _hemispheres():
    # median Z_k < 0 exactly when at least two Z_k < 0
    return tuple(predicate_tall(k) for k in CLUSTERS)


def predicate_tall(k="canonical") -> EventPredicate:
    if k == "canonical":
        return EventPredicate("tall", lambda x: median_z(x) < 0.0, 0, _hemispheres())
    k = as_cluster(k)
    return EventPredicate(f"tall_{int(k)}", lambda x: _zk(x, k) < 0.0)


def predicate_flat(k="canonical") -> EventPredicate:
    if k == "canonical":
        return EventPredicate("flat", lambda x: median_z(x) > 0.0, 0, _hemispheres())
    k = as_cluster(k)
    return EventPredicate(f"flat_{int(k)}", lambda x: _zk(x, k) > 0.0)


def predicate_regular(k="canonical") -> EventPredicate:
    if k == "canonical":
        return EventPredicate("regular", lambda x: median_z(x) == 0.0, 1)
    k = as_cluster(k)
    return EventPredicate(f"regular_{int(k)}", lambda x: _zk(x, k) == 0.0, 1)


def predicate_isosceles(k=None) -> EventPredicate:
    if k is None:
        def member(x):
            return (_xk(x, 1) == 0.0) | (_xk(x, 2) == 0.0) | (_xk(x, 3) == 0.0)
        return EventPredicate("isosceles", member, 1)
    k = as_cluster(k)
    return EventPredicate(f"isosceles_{int(k)}", lambda x: _xk(x, k) == 0.0, 1)


def predicate_collinear() -> EventPredicate:
    return EventPredicate("collinear", lambda x: x[..., 1] == 0.0, 1)


def predicate_orientation() -> EventPredicate:
    """Counterclockwise triangles, the hemisphere ``Y > 0`` around E."""
    return EventPredicate("counterclockwise", lambda x: x[..., 1] > 0.0)


# --- cluster conventions for tall/flat --------------------------------------

class Convention(str, enum.Enum):
    FIXED1 = "fixed1"
    FIXED2 = "fixed2"
    FIXED3 = "fixed3"
    CANONICAL = "canonical"
    SYMMETRIZED = "symmetrized"

    @classmethod
    def parse(cls, value) -> Convention:
        if isinstance(value, cls):
            return value
        value = str(value).lower()
        aliases = {"fixed": "fixed1", "1": "fixed1", "2": "fixed2", "3": "fixed3",
                   "median": "canonical", "symmetric": "symmetrized"}
        return cls(aliases.get(value, value))


def aspect_terms(kind: str, convention) -> list[tuple[float, EventPredicate]]:
    """Weighted predicates whose weighted measure is the tall or flat measure.

    Fixed and canonical conventions are a single predicate.  The symmetrized
    convention averages over the three cluster labellings.
    """
    make = {"tall": predicate_tall, "flat": predicate_flat}[kind]
    convention = Convention.parse(convention)
    if convention is Convention.CANONICAL:
        return [(1.0, make("canonical"))]
    if convention is Convention.SYMMETRIZED:
        return [(1.0 / 3.0, make(k)) for k in CLUSTERS]
    return [(1.0, make(int(convention.value[-1])))]


# --- curves ------------------------------------------------------------------

@dataclass(frozen=True)
class SphereCurve:
    """Closed or open curve ``t in [0, 1] -> frame-1 unit vectors``.

    ``param`` is vectorised over ``t``.
    """

    name: str
    param: Callable[[np.ndarray], np.ndarray] = field(repr=False, compare=False)
    total_length: float = 0.0

    def __call__(self, t: float) -> ShapePoint:
        X, Y, Z = self.param(np.array([t], dtype=float))[0]
        return ShapePoint(X, Y, Z, 1)

    def arc_length(self, a: float = 0.0, b: float = 1.0, n: int = 256) -> float:
        """Arc length between parameters ``a`` and ``b`` from the round metric.

        Sums great-circle chords at ``n`` and ``2n`` pieces and applies one
        Richardson step; the chord error is even in the step size.
        """
        def chords(m):
            pts = self.param(np.linspace(a, b, m + 1))
            u, v = pts[:-1], pts[1:]
            cross = np.linalg.norm(np.cross(u, v), axis=-1)
            dot = (u * v).sum(axis=-1)
            return math.fsum(np.arctan2(cross, dot))
        coarse, fine = chords(n), chords(2 * n)
        return (4.0 * fine - coarse) / 3.0


def _in_frame(k, pts_k: np.ndarray) -> np.ndarray:
    return rotate_array(pts_k, k, 1)


def right_cap_boundary(k) -> SphereCurve:
    """The small circle ``Z_k = 1/2`` of triangles right-angled at vertex ``k``.

    Parameterised by longitude about ``M_k``; ``t = 0`` sits on the ``Y = 0``
    side with positive ``X_k``.
    """
    k = as_cluster(k)
    r = math.sin(CAP_THETA)

    def param(t):
        a = 2.0 * math.pi * np.asarray(t, dtype=float)
        pts = np.stack([r * np.cos(a), r * np.sin(a), np.full_like(a, CAP_Z)], axis=-1)
        return _in_frame(k, pts)

    return SphereCurve(f"right_cap_{int(k)}", param, 2.0 * math.pi * r)


class MeridianKind(str, enum.Enum):
    ISOSCELES = "isosceles"
    REGULAR = "regular"


def meridian(k, kind) -> SphereCurve:
    """Great-circle bimeridian through E and Ebar.

    The isosceles bimeridian ``X_k = 0`` runs ``M_k (t=0) -> E (1/4) -> B_k
    (1/2) -> Ebar (3/4)``.  The regular bimeridian ``Z_k = 0`` runs through
    ``X_k = 1`` at ``t = 0`` and reaches E at ``t = 1/4``.
    """
    k = as_cluster(k)
    kind = MeridianKind(kind)

    def param(t):
        a = 2.0 * math.pi * np.asarray(t, dtype=float)
        c, s, z = np.cos(a), np.sin(a), np.zeros_like(a)
        if kind is MeridianKind.ISOSCELES:
            pts = np.stack([z, s, c], axis=-1)
        else:
            pts = np.stack([c, s, z], axis=-1)
        return _in_frame(k, pts)

    return SphereCurve(f"{kind.value}_meridian_{int(k)}", param, 2.0 * math.pi)


def equator() -> SphereCurve:
    """The collinearity equator ``Y = 0``, starting at ``M_1``."""
    def param(t):
        a = 2.0 * math.pi * np.asarray(t, dtype=float)
        return np.stack([np.sin(a), np.zeros_like(a), np.cos(a)], axis=-1)
    return SphereCurve("equator", param, 2.0 * math.pi)


def curve_family(name: str) -> list[SphereCurve]:
    """Resolve a curve name such as ``right``, ``right_cap_2`` or ``equator``."""
    name = name.lower()
    families = {
        "right": [right_cap_boundary(k) for k in CLUSTERS],
        "isosceles": [meridian(k, "isosceles") for k in CLUSTERS],
        "regular": [meridian(k, "regular") for k in CLUSTERS],
        "collinear": [equator()],
        "equator": [equator()],
    }
    if name in families:
        return families[name]
    for prefix, make in (("right_cap_", right_cap_boundary),
                         ("isosceles_meridian_", lambda k: meridian(k, "isosceles")),
                         ("regular_meridian_", lambda k: meridian(k, "regular"))):
        if name.startswith(prefix):
            return [make(int(name[len(prefix):]))]
    raise ValueError(f"unknown curve {name!r}")


# --- the 24-cell tessellation -----------------------------------------------

SEGMENT_ANGLE = math.pi / 6.0


@dataclass(frozen=True)
class Cell:
    """One of 24 cells: 12 segments around E times the two hemispheres.

    ``segment`` 0..11 counts pi/6 sectors of longitude about E, measured from
    ``M_1`` towards ``+X``.  Segments ``2m`` and ``2m+1`` share a side-length
    ordering; the regular meridian between them splits it into a tall and a
    flat half.  ``id = 1 + segment + 12 * (Y < 0)``.
    """

    id: int
    segment: int
    upper: bool
    boundary: bool = False


def longitude_about_e(xyz) -> np.ndarray:
    xyz = np.asarray(xyz, dtype=float)
    return np.mod(np.arctan2(xyz[..., 0], xyz[..., 2]), 2.0 * math.pi)


def cell_ids(xyz) -> np.ndarray:
    """Vectorised cell id (ignores boundaries)."""
    seg = np.minimum((longitude_about_e(xyz) // SEGMENT_ANGLE).astype(int), 11)
    return 1 + seg + 12 * (np.asarray(xyz)[..., 1] < 0)


def cell_of(p: ShapePoint, tol: float = 1e-9) -> Cell:
    """Cell containing ``p``.

    Points within ``tol`` (geodesic) of a bounding arc are flagged and
    assigned the lowest-numbered adjacent cell.
    """
    X, Y, Z = cluster_rotate(p, p.cluster, 1).xyz
    rho = math.hypot(X, Z)
    hemis = [Y >= 0.0] if abs(Y) > math.sin(tol) else [True, False]
    if rho <= math.sin(tol):
        segs = list(range(12))
    else:
        lon = math.atan2(X, Z) % (2.0 * math.pi)
        seg = min(int(lon // SEGMENT_ANGLE), 11)
        segs = {seg}
        lo, hi = seg * SEGMENT_ANGLE, (seg + 1) * SEGMENT_ANGLE
        # distance to a meridian plane is asin(rho * sin(dlon))
        if rho * math.sin(lon - lo) <= math.sin(tol):
            segs.add((seg - 1) % 12)
        if rho * math.sin(hi - lon) <= math.sin(tol):
            segs.add((seg + 1) % 12)
        segs = sorted(segs)
    candidates = [(1 + s + (0 if up else 12), s, up) for up in hemis for s in segs]
    boundary = len(candidates) > 1
    cid, seg, up = min(candidates)
    return Cell(cid, seg, up, boundary)


def boundary_distance(xyz) -> np.ndarray:
    """Geodesic distance to the nearest codimension-1 decoration.

    Covers the three cap circles, the isosceles and regular bimeridians and
    the collinearity equator, which also contain every landmark.
    """
    xyz = np.asarray(xyz, dtype=float)
    d = np.abs(np.arcsin(np.clip(xyz[..., 1], -1.0, 1.0)))
    for k in CLUSTERS:
        X, _, Z = frame_coords(xyz, k)
        theta = np.arccos(np.clip(Z, -1.0, 1.0))
        d = np.minimum(d, np.abs(theta - CAP_THETA))
        d = np.minimum(d, np.abs(np.arcsin(np.clip(X, -1.0, 1.0))))
        d = np.minimum(d, np.abs(np.arcsin(np.clip(Z, -1.0, 1.0))))
    return d


def named_predicate(name: str, cluster="canonical") -> EventPredicate:
    """Region events by CLI name."""
    name = name.lower()
    if name == "obtuse":
        return predicate_obtuse()
    if name == "acute":
        return predicate_acute()
    if name.startswith("obtuse_at_"):
        return predicate_obtuse_at(int(name.rsplit("_", 1)[1]))
    if name == "tall":
        return predicate_tall(cluster)
    if name == "flat":
        return predicate_flat(cluster)
    if name in ("sphere", "all"):
        return whole_sphere()
    if name in ("ccw", "counterclockwise", "orientation"):
        return predicate_orientation()
    if name == "regular":
        return predicate_regular(cluster)
    if name == "isosceles":
        return predicate_isosceles(None if cluster == "canonical" else cluster)
    if name == "collinear":
        return predicate_collinear()
    if name == "right":
        return predicate_right()
    raise ValueError(f"unknown event {name!r}")
