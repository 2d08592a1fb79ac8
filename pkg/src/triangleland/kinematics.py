"""Labelled planar triangles, Jacobi coordinates and space-side classifiers.

Everything here works directly on vertex coordinates and never touches the
shape sphere, so these classifiers serve as the ground truth that the sphere
predicates in :mod:`triangleland.regions` are checked against.

All three point masses are 1, which makes the reduced masses 1/2 for the base
pair and 2/3 for the apex against the base pair.

Cluster ``k`` has apex vertex ``k`` and its base is the opposite side.  The
base vertices are taken cyclically, ``(i, j) = (k+1, k+2) mod 3``, and the
base separation is ``v_j - v_i``.  For ``k=1`` this is ``v3 - v2``.  With the
cyclic order the cross product of the two Jacobi vectors has the same sign in
every cluster, so orientation is label independent.

Array kernels take vertex arrays of shape ``(..., 3, 2)``.  The scalar
functions wrap them for a single :class:`Triangle`.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass

import numpy as np

MU_BASE = 0.5
MU_MEDIAN = 2.0 / 3.0
SQRT_MU_BASE = math.sqrt(MU_BASE)
SQRT_MU_MEDIAN = math.sqrt(MU_MEDIAN)

DEFAULT_TOL = 1e-9
ABS_FLOOR = 1e-300


class DegenerateTriangle(ValueError):
    """Two vertices coincide, so some interior angle is undefined."""


class TotalCollision(ValueError):
    """All three vertices coincide; the configuration has no shape."""


class ClusterId(enum.IntEnum):
    """Choice of apex vertex; the base is the side opposite it."""

    ONE = 1
    TWO = 2
    THREE = 3

    @property
    def apex(self) -> int:
        return int(self) - 1

    @property
    def base(self) -> tuple[int, int]:
        a = int(self) - 1
        return (a + 1) % 3, (a + 2) % 3


CLUSTERS = (ClusterId.ONE, ClusterId.TWO, ClusterId.THREE)


def as_cluster(k) -> ClusterId:
    try:
        return ClusterId(int(k))
    except (TypeError, ValueError):
        raise ValueError(f"cluster must be 1, 2 or 3, got {k!r}") from None


@dataclass(frozen=True)
class Triangle:
    """Three labelled vertices in the plane."""

    v1: tuple[float, float]
    v2: tuple[float, float]
    v3: tuple[float, float]

    def __post_init__(self):
        for name in ("v1", "v2", "v3"):
            v = tuple(float(c) for c in getattr(self, name))
            if len(v) != 2:
                raise ValueError(f"{name} must have two coordinates")
            if not all(math.isfinite(c) for c in v):
                raise ValueError(f"{name} has non-finite coordinates: {v}")
            object.__setattr__(self, name, v)

    @classmethod
    def from_array(cls, arr) -> Triangle:
        arr = np.asarray(arr, dtype=float)
        if arr.shape != (3, 2):
            raise ValueError(f"expected a 3x2 vertex array, got shape {arr.shape}")
        return cls(tuple(arr[0]), tuple(arr[1]), tuple(arr[2]))

    @property
    def vertices(self) -> np.ndarray:
        return np.array([self.v1, self.v2, self.v3], dtype=float)

    def to_json(self) -> str:
        # repr() of a float is the shortest string that round-trips exactly
        return json.dumps({"vertices": [list(self.v1), list(self.v2), list(self.v3)]})

    @classmethod
    def from_json(cls, text: str) -> Triangle:
        data = json.loads(text)
        if isinstance(data, dict):
            data = data.get("vertices")
        if data is None:
            raise ValueError("triangle JSON needs a 'vertices' list")
        return cls.from_array(data)


@dataclass(frozen=True)
class JacobiPair:
    """Raw and mass-weighted Jacobi vectors for one cluster."""

    R1: np.ndarray
    R2: np.ndarray
    rho1: np.ndarray
    rho2: np.ndarray
    cluster: ClusterId


class AngleKind(str, enum.Enum):
    ACUTE = "acute"
    RIGHT = "right"
    OBTUSE = "obtuse"
    DEGENERATE = "degenerate"


class AspectKind(str, enum.Enum):
    TALL = "tall"
    REGULAR = "regular"
    FLAT = "flat"


@dataclass(frozen=True)
class AngleClass:
    kind: AngleKind
    vertex: ClusterId | None = None


@dataclass(frozen=True)
class AspectClass:
    kind: AspectKind
    cluster: ClusterId


# --- array kernels -----------------------------------------------------------

def _vertices(t) -> np.ndarray:
    if isinstance(t, Triangle):
        return t.vertices
    return np.asarray(t, dtype=float)


def rms_size(P) -> np.ndarray:
    """Root-mean-square distance of the vertices from their centroid."""
    P = _vertices(P)
    c = P.mean(axis=-2, keepdims=True)
    return np.sqrt(((P - c) ** 2).sum(axis=(-1, -2)) / 3.0)


def signed_area_array(P) -> np.ndarray:
    """Signed area, positive for counterclockwise vertex order."""
    P = _vertices(P)
    a = P[..., 1, :] - P[..., 0, :]
    b = P[..., 2, :] - P[..., 0, :]
    return 0.5 * (a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0])


def side_lengths_array(P) -> np.ndarray:
    P = _vertices(P)
    return np.stack(
        [np.linalg.norm(P[..., (k + 2) % 3, :] - P[..., (k + 1) % 3, :], axis=-1) for k in range(3)],
        axis=-1,
    )


def interior_angles_array(P) -> np.ndarray:
    """Interior angles via atan2(|cross|, dot); NaN where a side has zero length."""
    P = _vertices(P)
    out = []
    for k in range(3):
        u = P[..., (k + 1) % 3, :] - P[..., k, :]
        v = P[..., (k + 2) % 3, :] - P[..., k, :]
        cross = np.abs(u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0])
        dot = (u * v).sum(axis=-1)
        ang = np.arctan2(cross, dot)
        degenerate = (np.hypot(*np.moveaxis(u, -1, 0)) == 0) | (np.hypot(*np.moveaxis(v, -1, 0)) == 0)
        out.append(np.where(degenerate, np.nan, ang))
    return np.stack(out, axis=-1)


def jacobi_array(P, k) -> tuple[np.ndarray, np.ndarray]:
    """Raw Jacobi vectors ``(R1, R2)`` for cluster ``k``, each of shape ``(..., 2)``."""
    k = as_cluster(k)
    P = _vertices(P)
    i, j = k.base
    a = k.apex
    R1 = P[..., j, :] - P[..., i, :]
    R2 = P[..., a, :] - 0.5 * (P[..., i, :] + P[..., j, :])
    return R1, R2


def partial_moments_array(P, k) -> tuple[np.ndarray, np.ndarray]:
    R1, R2 = jacobi_array(P, k)
    return MU_BASE * (R1 * R1).sum(axis=-1), MU_MEDIAN * (R2 * R2).sum(axis=-1)


# Integer codes used by the batch classifiers.
ACUTE, RIGHT, OBTUSE, DEGENERATE = 0, 1, 2, 3
TALL, REGULAR, FLAT = -1, 0, 1


def angle_codes(P, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Batch angle classification.

    Returns ``(code, vertex)`` where ``code`` is one of ACUTE, RIGHT, OBTUSE,
    DEGENERATE and ``vertex`` is the 1-based vertex of the largest angle
    (0 for acute and degenerate shapes).
    """
    P = _vertices(P)
    scale = np.maximum(rms_size(P), ABS_FLOOR)
    sides = side_lengths_array(P)
    area = np.abs(signed_area_array(P))
    degenerate = (sides.min(axis=-1) <= tol * scale) | (area <= tol * scale * scale)
    with np.errstate(invalid="ignore"):
        ang = interior_angles_array(P)
    big = np.nanargmax(np.where(np.isnan(ang), -1.0, ang), axis=-1)
    top = np.take_along_axis(np.nan_to_num(ang, nan=0.0), big[..., None], axis=-1)[..., 0]
    dev = top - 0.5 * math.pi
    code = np.where(dev > tol, OBTUSE, np.where(dev >= -tol, RIGHT, ACUTE))
    code = np.where(degenerate, DEGENERATE, code)
    vertex = np.where((code == RIGHT) | (code == OBTUSE), big + 1, 0)
    return code, vertex


def aspect_codes(P, k, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Batch tall/regular/flat classification for cluster ``k``.

    Total collisions come back as REGULAR; the scalar wrapper raises instead.
    """
    base, median = partial_moments_array(P, k)
    tall = median > base * (1.0 + tol)
    flat = base > median * (1.0 + tol)
    return np.where(tall, TALL, np.where(flat, FLAT, REGULAR))


# --- scalar API --------------------------------------------------------------

def side_lengths(t: Triangle) -> tuple[float, float, float]:
    """Side lengths ``(s1, s2, s3)``; ``s_k`` is opposite vertex ``k``."""
    return tuple(float(s) for s in side_lengths_array(t))


def _coincident(t: Triangle, tol: float) -> bool:
    scale = max(float(rms_size(t)), ABS_FLOOR)
    return min(side_lengths(t)) <= tol * scale


def interior_angles(t: Triangle, tol: float = DEFAULT_TOL) -> tuple[float, float, float]:
    """Interior angles in radians, ``angle_k`` at vertex ``k``.

    Collinear but distinct vertices give the (0, pi, 0) pattern with pi at the
    middle vertex.  Coincident vertices raise :class:`DegenerateTriangle`.
    """
    if _coincident(t, tol):
        raise DegenerateTriangle(f"coincident vertices in {t}")
    return tuple(float(a) for a in interior_angles_array(t))


def jacobi(t: Triangle, k) -> JacobiPair:
    k = as_cluster(k)
    R1, R2 = jacobi_array(t, k)
    return JacobiPair(R1=R1, R2=R2, rho1=SQRT_MU_BASE * R1, rho2=SQRT_MU_MEDIAN * R2, cluster=k)


def moment_of_inertia(j: JacobiPair) -> tuple[float, float]:
    """Partial moments ``(|rho1|^2, |rho2|^2)`` of the base and the median."""
    return float(j.rho1 @ j.rho1), float(j.rho2 @ j.rho2)


def classify_angle(t: Triangle, tol: float = DEFAULT_TOL) -> AngleClass:
    """Acute, right or obtuse, with the vertex of the right or obtuse angle.

    A shape counts as right when its largest angle is within ``tol`` radians
    of pi/2.  Coincident or collinear vertices (relative to the RMS size) are
    reported as degenerate.
    """
    code, vertex = angle_codes(t, tol)
    kind = {ACUTE: AngleKind.ACUTE, RIGHT: AngleKind.RIGHT,
            OBTUSE: AngleKind.OBTUSE, DEGENERATE: AngleKind.DEGENERATE}[int(code)]
    return AngleClass(kind, ClusterId(int(vertex)) if vertex else None)


def classify_aspect(t: Triangle, k, tol: float = DEFAULT_TOL) -> AspectClass:
    """Tall if the median's partial moment exceeds the base's, flat if the reverse.

    Both moments are compared with relative tolerance ``tol``, so the regular
    band is scale invariant.
    """
    k = as_cluster(k)
    base, median = moment_of_inertia(jacobi(t, k))
    if base + median <= ABS_FLOOR:
        raise TotalCollision(f"all vertices coincide in {t}")
    code = int(aspect_codes(t, k, tol))
    kind = {TALL: AspectKind.TALL, REGULAR: AspectKind.REGULAR, FLAT: AspectKind.FLAT}[code]
    return AspectClass(kind, k)


def canonical_cluster(t: Triangle, tol: float = DEFAULT_TOL) -> ClusterId:
    """Cluster whose base is the median-length side; ties go to the lowest index."""
    s = side_lengths(t)
    scale = max(float(rms_size(t)), ABS_FLOOR)
    mid = sorted(s)[1]
    for k in CLUSTERS:
        if abs(s[k - 1] - mid) <= tol * scale:
            return k
    raise AssertionError("unreachable")


def is_isosceles(t: Triangle, k, tol: float = DEFAULT_TOL) -> bool:
    """True when the two sides meeting at vertex ``k`` are equal."""
    k = as_cluster(k)
    s = side_lengths(t)
    i, j = k.base
    scale = max(float(rms_size(t)), ABS_FLOOR)
    return abs(s[i] - s[j]) <= tol * scale


def is_collinear(t: Triangle, tol: float = DEFAULT_TOL) -> bool:
    scale = max(float(rms_size(t)), ABS_FLOOR)
    return abs(float(signed_area_array(t))) <= tol * scale * scale
