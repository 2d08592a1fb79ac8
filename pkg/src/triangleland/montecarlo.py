"""Seeded Monte Carlo on the uniform shape-sphere measure.

Sample ``i`` is a pure function of ``(seed, i)``: it comes from counter block
``i`` of a Philox4x64 generator keyed by the seed.  Shards are contiguous
index ranges, so any shard count reproduces the same samples, and the
estimators reduce integer counts, which makes every estimate bit-identical
for a given ``(seed, n_samples)``.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import kinematics as kin
from . import regions
from .measure import CatalogEntry, Terms, as_terms, event_terms, intersect
from .regions import Convention, EventPredicate
from .shape_map import ShapePoint, representative_array

_TWO53 = 2.0 ** -53
MIN_CONDITION_SAMPLES = 100


class InsufficientConditionSamples(RuntimeError):
    pass


@dataclass(frozen=True)
class McConfig:
    seed: int = 42
    n_samples: int = 1_000_000
    shards: int = 1

    def __post_init__(self):
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.n_samples < 1 or self.shards < 1:
            raise ValueError("n_samples and shards must be positive")

    def shard_ranges(self) -> list[tuple[int, int]]:
        edges = [self.n_samples * s // self.shards for s in range(self.shards + 1)]
        return list(zip(edges[:-1], edges[1:]))


@dataclass(frozen=True)
class McEstimate:
    p_hat: float
    stderr: float
    n: int
    n_boundary_excluded: int = 0

    def as_dict(self) -> dict:
        return {"p_hat": self.p_hat, "stderr": self.stderr, "n": self.n,
                "n_boundary_excluded": self.n_boundary_excluded}


def sample_block(seed: int, start: int, stop: int) -> np.ndarray:
    """Frame-1 unit vectors for sample indices ``start <= i < stop``.

    ``Z`` is uniform on ``(-1, 1]`` and ``phi`` on ``[0, 2pi)``, which is the
    uniform area measure (Archimedes).
    """
    bg = np.random.Philox(key=int(seed))
    bg.advance(start)
    raw = bg.random_raw(4 * (stop - start)).reshape(-1, 4)
    u1 = (raw[:, 0] >> np.uint64(11)).astype(np.float64) * _TWO53
    u2 = (raw[:, 1] >> np.uint64(11)).astype(np.float64) * _TWO53
    z = 1.0 - 2.0 * u1
    phi = 2.0 * math.pi * u2
    r = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=-1)


def sample_array(cfg: McConfig) -> np.ndarray:
    return np.concatenate([sample_block(cfg.seed, a, b) for a, b in cfg.shard_ranges()])


def sample_uniform_sphere(cfg: McConfig) -> Iterator[ShapePoint]:
    """Stream of uniform shape points, shard by shard."""
    for a, b in cfg.shard_ranges():
        for X, Y, Z in sample_block(cfg.seed, a, b):
            yield ShapePoint(X, Y, Z, 1)


def _pair_counts(preds: list[EventPredicate], xyz: np.ndarray) -> np.ndarray:
    ind = np.stack([p.contains(xyz) for p in preds], axis=0).astype(np.int64)
    return ind @ ind.T


def _counts(preds, cfg: McConfig, samples=None) -> np.ndarray:
    if samples is not None:
        return _pair_counts(preds, samples)

    def run(rng):
        return _pair_counts(preds, sample_block(cfg.seed, *rng))

    ranges = cfg.shard_ranges()
    if len(ranges) == 1:
        return run(ranges[0])
    with ThreadPoolExecutor(max_workers=min(len(ranges), 8)) as pool:
        parts = list(pool.map(run, ranges))
    return np.sum(parts, axis=0)


def _moments(a: Terms, b: Terms | None, preds, C):
    idx = {id(p): i for i, p in enumerate(preds)}

    def s1(t):
        return sum(w * C[idx[id(p)], idx[id(p)]] for w, p in t)

    def s2(t, u):
        return sum(w * v * C[idx[id(p)], idx[id(q)]] for w, p in t for v, q in u)

    return s1, s2


def estimate(pred, cfg: McConfig, samples=None) -> McEstimate:
    """Frequency estimate of a region event with its binomial standard error.

    ``pred`` may also be weighted terms, in which case the standard error is
    that of the weighted indicator mean.
    """
    terms = as_terms(pred)
    for _, p in terms:
        if p.codimension:
            raise ValueError(f"{p.name} is a curve; use measure.arc_fraction")
    preds = [p for _, p in terms]
    C = _counts(preds, cfg, samples)
    n = cfg.n_samples if samples is None else len(samples)
    s1, s2 = _moments(terms, None, preds, C)
    p = float(s1(terms)) / n
    if len(terms) == 1:
        var = p * (1.0 - p)
    else:
        var = max(float(s2(terms, terms)) / n - p * p, 0.0)
    return McEstimate(p, math.sqrt(var / n), n)


def estimate_conditional(a, b, cfg: McConfig, samples=None) -> McEstimate:
    """Ratio estimate of ``P(a | b)`` with a delta-method standard error."""
    num = intersect(a, b)
    den = as_terms(b)
    preds = [p for _, p in num] + [p for _, p in den]
    C = _counts(preds, cfg, samples)
    s1, s2 = _moments(num, den, preds, C)
    sb = float(s1(den))
    if sb < MIN_CONDITION_SAMPLES:
        raise InsufficientConditionSamples(f"only {sb:g} samples satisfy the condition")
    sa = float(s1(num))
    p = sa / sb
    if len(num) == 1 and len(den) == 1:
        var = p * (1.0 - p) / sb
    else:
        resid = float(s2(num, num)) - 2.0 * p * float(s2(num, den)) + p * p * float(s2(den, den))
        var = max(resid, 0.0) / (sb * sb)
    return McEstimate(p, math.sqrt(var), int(round(sb)))


def estimate_entry(entry: CatalogEntry, convention, samples: np.ndarray) -> McEstimate:
    """Monte Carlo value for a region catalog entry on pre-drawn samples."""
    convention = Convention.parse(convention)
    cfg = McConfig(0, len(samples), 1)
    num = event_terms(entry.numerator, convention)
    if entry.kind == "delta":
        acute = event_terms("acute", convention)
        tall = event_terms("tall", convention)
        # per-sample value a_i b_i - ... is not an indicator; combine marginals
        pa = estimate(acute, cfg, samples).p_hat
        pb = estimate(tall, cfg, samples).p_hat
        joint = estimate(num, cfg, samples)
        d = pa * pb - joint.p_hat
        return McEstimate(d, joint.stderr, len(samples))
    if entry.denominator is None:
        return estimate(num, cfg, samples)
    return estimate_conditional(num, event_terms(entry.denominator, convention), cfg, samples)


# --- space <-> sphere consistency -------------------------------------------

def default_checks():
    """Pairs of (sphere predicate, space-side classifier) over frame-1 points.

    Each space classifier takes a ``(N, 3, 2)`` vertex array and returns a
    boolean array.
    """
    checks = {}

    def angle_is(code, vertex=None):
        def f(P):
            c, v = kin.angle_codes(P)
            return (c == code) if vertex is None else (c == code) & (v == vertex)
        return f

    checks["obtuse"] = (regions.predicate_obtuse(), angle_is(kin.OBTUSE))
    checks["acute"] = (regions.predicate_acute(), angle_is(kin.ACUTE))
    for k in kin.CLUSTERS:
        checks[f"obtuse_at_{int(k)}"] = (regions.predicate_obtuse_at(k), angle_is(kin.OBTUSE, int(k)))
        checks[f"tall_{int(k)}"] = (regions.predicate_tall(k),
                                    lambda P, k=k: kin.aspect_codes(P, k) == kin.TALL)
        checks[f"flat_{int(k)}"] = (regions.predicate_flat(k),
                                    lambda P, k=k: kin.aspect_codes(P, k) == kin.FLAT)
        checks[f"isosceles_{int(k)}"] = (regions.predicate_isosceles(k), _space_isosceles(k))
    checks["tall_canonical"] = (regions.predicate_tall("canonical"), _space_canonical_tall)
    checks["collinear"] = (regions.predicate_collinear(), _space_collinear)
    return checks


def _space_isosceles(k, tol=kin.DEFAULT_TOL):
    def f(P):
        s = kin.side_lengths_array(P)
        i, j = kin.ClusterId(k).base
        return np.abs(s[..., i] - s[..., j]) <= tol * kin.rms_size(P)
    return f


def _space_collinear(P, tol=kin.DEFAULT_TOL):
    return np.abs(kin.signed_area_array(P)) <= tol * kin.rms_size(P) ** 2


def _space_canonical_tall(P):
    # median-length side, lowest index on ties, as in kinematics.canonical_cluster
    s = kin.side_lengths_array(P)
    mid = np.sort(s, axis=-1)[..., 1:2]
    k = np.argmax(s == mid, axis=-1)
    codes = np.stack([kin.aspect_codes(P, c) for c in kin.CLUSTERS], axis=-1)
    return np.take_along_axis(codes, k[..., None], axis=-1)[..., 0] == kin.TALL


@dataclass
class SweepReport:
    n: int
    n_boundary_excluded: int
    disagreements: dict
    disagreements_in_band: dict
    eps: float

    @property
    def passed(self) -> bool:
        return all(v == 0 for v in self.disagreements.values())

    def as_dict(self) -> dict:
        return {"n": self.n, "eps": self.eps, "n_boundary_excluded": self.n_boundary_excluded,
                "disagreements": self.disagreements,
                "disagreements_in_band": self.disagreements_in_band, "passed": self.passed}


def consistency_check(xyz: np.ndarray, eps: float = 1e-6, checks=None) -> SweepReport:
    """Compare sphere predicates with space classifiers on given frame-1 points.

    Each point is turned into its representative triangle.  Points within
    ``eps`` of a cap circle, bimeridian or the equator are excluded from the
    pass/fail count, and their disagreements are reported separately.
    """
    checks = default_checks() if checks is None else checks
    xyz = np.asarray(xyz, dtype=float).reshape(-1, 3)
    P = representative_array(xyz, 1)
    band = regions.boundary_distance(xyz) < eps
    out, in_band = {}, {}
    for name, (pred, space) in checks.items():
        differ = pred.contains(xyz) != space(P)
        out[name] = int((differ & ~band).sum())
        in_band[name] = int((differ & band).sum())
    return SweepReport(len(xyz), int(band.sum()), out, in_band, eps)


def consistency_sweep(cfg: McConfig, eps: float = 1e-6, checks=None) -> SweepReport:
    return consistency_check(sample_array(cfg), eps, checks)
