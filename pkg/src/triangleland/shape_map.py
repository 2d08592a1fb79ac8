"""Map from labelled triangles to points of the shape sphere and back.

A triangle is reduced to its mass-weighted Jacobi pair ``(rho1, rho2)`` for a
cluster ``k``, normalised to unit moment of inertia, and sent through the
Hopf map

    X = 2 rho1 . rho2,   Y = 2 (rho1 x rho2)_3,   Z = |rho1|^2 - |rho2|^2

to a unit 3-vector.  ``Y`` is four times the mass-weighted area per unit
moment of inertia and does not depend on the cluster; ``X`` and ``Z`` do.

Landmarks in the frame of cluster ``k``:

    ======  ===========  ==============================================
    name    (X, Y, Z)    configuration
    ======  ===========  ==============================================
    E       (0, 1, 0)    equilateral, counterclockwise
    Ebar    (0, -1, 0)   equilateral, clockwise
    M_k     (0, 0, 1)    apex k at the midpoint of its base (theta = 0)
    B_k     (0, 0, -1)   base vertices of cluster k coincide (theta = pi)
    ======  ===========  ==============================================

Spherical coordinates put ``theta`` at the angle from ``M_k`` so that
``cos(theta) = Z`` and ``tan(theta/2) = |rho2|/|rho1|``; ``phi`` is the
two-argument angle ``atan2(Y, X)`` and is 0 at the poles.

Changing the cluster rotates the sphere about the Y axis by 2pi/3 in the
(Z, X) plane.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .kinematics import (
    ABS_FLOOR,
    CLUSTERS,
    SQRT_MU_BASE,
    SQRT_MU_MEDIAN,
    ClusterId,
    TotalCollision,
    Triangle,
    as_cluster,
    jacobi_array,
)

POLE_TOL = 1e-12


@dataclass(frozen=True)
class ShapePoint:
    """Unit vector on the shape sphere, expressed in the frame of ``cluster``."""

    X: float
    Y: float
    Z: float
    cluster: ClusterId = ClusterId.ONE

    def __post_init__(self):
        object.__setattr__(self, "cluster", as_cluster(self.cluster))
        for name in ("X", "Y", "Z"):
            object.__setattr__(self, name, float(getattr(self, name)))

    @property
    def xyz(self) -> np.ndarray:
        return np.array([self.X, self.Y, self.Z])

    @property
    def theta(self) -> float:
        return spherical_coords(self).theta

    @property
    def phi(self) -> float:
        return spherical_coords(self).phi

    def in_frame(self, k) -> ShapePoint:
        return cluster_rotate(self, self.cluster, k)

    def to_json(self) -> str:
        return json.dumps({"cluster": int(self.cluster), "xyz": [self.X, self.Y, self.Z]})

    @classmethod
    def from_json(cls, text: str) -> ShapePoint:
        data = json.loads(text)
        X, Y, Z = data["xyz"]
        return cls(X, Y, Z, data.get("cluster", 1))


@dataclass(frozen=True)
class SphericalCoords:
    theta: float
    phi: float


# --- array kernels -----------------------------------------------------------

def hopf_array(P, k=1) -> np.ndarray:
    """Hopf coordinates ``(..., 3)`` in the frame of cluster ``k``.

    Total collisions produce NaN rows; the scalar API raises instead.
    """
    R1, R2 = jacobi_array(P, k)
    r1 = SQRT_MU_BASE * R1
    r2 = SQRT_MU_MEDIAN * R2
    n1 = (r1 * r1).sum(axis=-1)
    n2 = (r2 * r2).sum(axis=-1)
    total = n1 + n2
    with np.errstate(invalid="ignore", divide="ignore"):
        X = 2.0 * (r1 * r2).sum(axis=-1) / total
        Y = 2.0 * (r1[..., 0] * r2[..., 1] - r1[..., 1] * r2[..., 0]) / total
        Z = (n1 - n2) / total
    return np.stack([X, Y, Z], axis=-1)


def rotation_angle(src, dst) -> float:
    """Angle of the (Z, X) rotation taking frame ``src`` coordinates to frame ``dst``."""
    steps = (int(as_cluster(dst)) - int(as_cluster(src))) % 3
    return steps * 2.0 * math.pi / 3.0


def rotate_array(xyz, src, dst) -> np.ndarray:
    xyz = np.asarray(xyz, dtype=float)
    steps = (int(as_cluster(dst)) - int(as_cluster(src))) % 3
    if steps == 0:
        return xyz.copy()
    a = rotation_angle(src, dst)
    c, s = math.cos(a), math.sin(a)
    X, Y, Z = xyz[..., 0], xyz[..., 1], xyz[..., 2]
    return np.stack([s * Z + c * X, Y, c * Z - s * X], axis=-1)


def frame_coords(xyz, k) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(X_k, Y, Z_k)`` for frame-1 coordinates ``xyz``."""
    r = rotate_array(xyz, 1, k)
    return r[..., 0], r[..., 1], r[..., 2]


def representative_array(xyz, k=1) -> np.ndarray:
    """Vertex arrays ``(..., 3, 2)`` of unit moment of inertia, centroid at the origin."""
    k = as_cluster(k)
    xyz = np.asarray(xyz, dtype=float)
    X, Y, Z = xyz[..., 0], xyz[..., 1], xyz[..., 2]
    half = 0.5 * np.arctan2(np.hypot(X, Y), Z)
    phi = np.arctan2(Y, X)
    c, s = np.cos(half), np.sin(half)
    zero = np.zeros_like(c)
    rho1 = np.stack([c, zero], axis=-1)
    rho2 = np.stack([s * np.cos(phi), s * np.sin(phi)], axis=-1)
    R1 = rho1 / SQRT_MU_BASE
    R2 = rho2 / SQRT_MU_MEDIAN
    i, j = k.base
    P = np.empty(xyz.shape[:-1] + (3, 2))
    P[..., k.apex, :] = (2.0 / 3.0) * R2
    P[..., i, :] = -R2 / 3.0 - 0.5 * R1
    P[..., j, :] = -R2 / 3.0 + 0.5 * R1
    return P


# --- scalar API --------------------------------------------------------------

def shape_point(t: Triangle, k=1) -> ShapePoint:
    k = as_cluster(k)
    R1, R2 = jacobi_array(t, k)
    if 0.5 * (R1 @ R1) + (2.0 / 3.0) * (R2 @ R2) <= ABS_FLOOR:
        raise TotalCollision(f"all vertices coincide in {t}")
    X, Y, Z = hopf_array(t, k)
    return ShapePoint(X, Y, Z, k)


def spherical_coords(p: ShapePoint) -> SphericalCoords:
    theta = math.atan2(math.hypot(p.X, p.Y), p.Z)
    if math.hypot(p.X, p.Y) <= POLE_TOL:
        return SphericalCoords(theta, 0.0)
    phi = math.atan2(p.Y, p.X) % (2.0 * math.pi)
    # a tiny negative angle rounds up to exactly 2pi
    return SphericalCoords(theta, 0.0 if phi >= 2.0 * math.pi else phi)


def from_spherical(theta: float, phi: float, k=1) -> ShapePoint:
    st = math.sin(theta)
    return ShapePoint(st * math.cos(phi), st * math.sin(phi), math.cos(theta), k)


def stereographic_ratio(p: ShapePoint) -> float:
    """``tan(theta/2)``, which equals ``|rho2|/|rho1|`` for the source triangle."""
    return math.tan(0.5 * spherical_coords(p).theta)


def representative_triangle(p: ShapePoint, k=None) -> Triangle:
    """A triangle of unit moment of inertia whose shape point in frame ``k`` is ``p``.

    ``rho1`` lies along the x axis with length ``cos(theta/2)`` and ``rho2``
    has length ``sin(theta/2)`` at angle ``phi``.  ``k`` defaults to the
    point's own frame.
    """
    k = p.cluster if k is None else as_cluster(k)
    if abs(p.X * p.X + p.Y * p.Y + p.Z * p.Z - 1.0) > 1e-9:
        raise ValueError(f"not a unit vector: {p}")
    q = cluster_rotate(p, p.cluster, k)
    return Triangle.from_array(representative_array(q.xyz, k))


def cluster_rotate(p: ShapePoint, src=None, dst=1) -> ShapePoint:
    """Re-express ``p`` (given in frame ``src``) in the frame of cluster ``dst``."""
    src = p.cluster if src is None else as_cluster(src)
    X, Y, Z = rotate_array(p.xyz, src, dst)
    return ShapePoint(X, Y, Z, dst)


def geodesic_distance(p: ShapePoint, q: ShapePoint) -> float:
    """Great-circle distance in radians, after moving ``q`` into ``p``'s frame."""
    a = p.xyz
    b = cluster_rotate(q, q.cluster, p.cluster).xyz
    # atan2 form stays accurate near 0 and pi where arccos loses digits
    return math.atan2(np.linalg.norm(np.cross(a, b)), float(a @ b))


def landmarks(k=1) -> dict[str, ShapePoint]:
    """E, Ebar and the B and M points of all three clusters, in frame ``k``."""
    k = as_cluster(k)
    out = {"E": ShapePoint(0.0, 1.0, 0.0, k), "Ebar": ShapePoint(0.0, -1.0, 0.0, k)}
    for j in CLUSTERS:
        out[f"B{int(j)}"] = cluster_rotate(ShapePoint(0.0, 0.0, -1.0, j), j, k)
    for j in CLUSTERS:
        out[f"M{int(j)}"] = cluster_rotate(ShapePoint(0.0, 0.0, 1.0, j), j, k)
    return out
