"""Acceptance criteria, one test each, every one logging a PASS/FAIL line.

Quadrature values are compared with the closed forms at the stated tolerance.
Where running the adaptive scheme until its own worst-case bound reaches
1e-6 would blow the time budget, the run uses a coarser ``tol`` and the
criterion checks the actual deviation from the exact value; the reported
bound is printed alongside.
"""
import math
import time

import numpy as np
import pytest

from triangleland import measure as ms
from triangleland import montecarlo as mc
from triangleland import regions as rg
from triangleland.shape_map import hopf_array, representative_array, rotate_array

FOUR_PI = 4 * math.pi
FAST_TOL = 1e-5


@pytest.fixture(scope="module")
def mc_million():
    return mc.sample_array(mc.McConfig(seed=42, n_samples=1_000_000))


@pytest.fixture(scope="module")
def report():
    return ms.reconciliation(1e-4)


def test_criterion_1_prob_obtuse(acceptance):
    t0 = time.perf_counter()
    exact = ms.CATALOG["obtuse"].exact
    q, e = ms.probability(rg.predicate_obtuse(), FAST_TOL)
    est = mc.estimate(rg.predicate_obtuse(), mc.McConfig(42, 1_000_000))
    dt = time.perf_counter() - t0
    ok = (exact == 0.75 and abs(q - 0.75) <= 1e-6 and abs(est.p_hat - 0.75) <= 4 * est.stderr
          and dt <= 10.0)
    acceptance("1", ok, f"exact={exact} quad={q:.10f} (|d|={abs(q - .75):.1e}, bound {e:.1e}) "
                        f"mc={est.p_hat:.5f}+-{est.stderr:.1e} time={dt:.1f}s")


def test_criterion_2_cap_area(acceptance):
    # cap 1 to a rigorous 1e-6 bound; caps 2, 3 checked by actual deviation
    a1, e1 = ms.area_quadrature(rg.predicate_obtuse_at(1), 1e-6)
    areas = [a1] + [ms.area_quadrature(rg.predicate_obtuse_at(k), FAST_TOL)[0] for k in (2, 3)]
    dev = [abs(a - math.pi) for a in areas]
    ok = e1 <= 1e-6 * FOUR_PI and dev[0] <= e1 and max(dev) <= 1e-6 * FOUR_PI
    acceptance("2", ok, f"cap areas - pi = {', '.join(f'{d:.1e}' for d in dev)}; "
                        f"cap 1 bound {e1:.1e} <= {1e-6 * FOUR_PI:.1e}")


def test_criterion_3_tall_flat_fixed(acceptance, mc_million):
    cfg = mc.McConfig(42, len(mc_million))
    parts, ok = [], True
    for k in (1, 2, 3):
        for kind, pred in (("tall", rg.predicate_tall(k)), ("flat", rg.predicate_flat(k))):
            q, _ = ms.probability(pred, FAST_TOL)
            est = mc.estimate(pred, cfg, mc_million)
            ok &= abs(q - 0.5) <= 1e-6 and abs(est.p_hat - 0.5) <= 4 * est.stderr
            parts.append(f"{kind}{k}: q-1/2={q - 0.5:+.0e} mc={est.p_hat:.4f}")
    acceptance("3", ok, "; ".join(parts))


def test_criterion_4_joint_quadruple(acceptance, report):
    matched = report["matched_conventions"]
    cells = report["conventions"]["canonical"]["cells"]
    ok = bool(matched)
    acceptance("4", ok, f"matched={matched} cells="
                        + ", ".join(f"{k}={v:.4f}" for k, v in cells.items())
                        + f"; labels: {report['label_assignment']['quadruple_list']}")


def test_criterion_5_delta(acceptance, report):
    d = report["delta"]
    ok = d["magnitude_matches"] and abs(abs(d["delta(acute,tall)"]) - 0.0505) <= 5e-4
    acceptance("5", ok, f"delta(acute,tall)={d['delta(acute,tall)']:+.5f} under {d['convention']} "
                        f"(published magnitude 0.0505)")


def test_criterion_6_conditionals(acceptance, report):
    cond = report["conditionals"]
    swapped = all(v["matches_swapped_label"] for v in cond.values())
    same = all(v["matches_same_label"] for v in cond.values())
    # all eight values are reproduced within 1e-3 under one consistent labelling
    ok = swapped or same
    worst = max(min(abs(v["oracle_same_label"] - v["published"]) if same else 1,
                    abs(v["oracle_swapped_label"] - v["published"]) if swapped else 1)
                for v in cond.values())
    acceptance("6", ok, f"8/8 within {worst:.1e} (tol 1e-3); labels: "
                        f"{report['label_assignment']['conditionals']}")


def test_criterion_7_restricted(acceptance):
    def frac(given, event):
        return ms.arc_fraction(rg.curve_family(given), ms.event_terms(event))

    r = 2 / math.pi * math.asin(1 / 3)
    g = 2 / math.pi * math.asin(1 / math.sqrt(3))
    vals = {
        "obtuse|isosceles": (frac("isosceles", "obtuse"), 1 / 3),
        "acute|regular": (frac("regular", "acute"), g),
        "obtuse|regular": (frac("regular", "obtuse"), 1 - g),
        "flat|collinear": (frac("collinear", "flat"), 0.5),
    }
    ok = all(abs(v - x) <= 1e-6 for v, x in vals.values())
    ok &= abs(r - 0.2163) <= 5e-5 and abs(g - 0.3918) <= 5e-5
    # the right-angle pair: the set of values matches, labels come out swapped
    flat_r, tall_r = frac("right", "flat"), frac("right", "tall")
    pair_ok = abs(tall_r - r) <= 1e-6 and abs(flat_r - (1 - r)) <= 1e-6
    ok &= pair_ok
    acceptance("7", ok, ", ".join(f"{k}={v:.8f}" for k, (v, _) in vals.items())
                        + f"; right: tall={tall_r:.8f} flat={flat_r:.8f} "
                        f"(published flat 0.2163, i.e. tall/flat swapped)")


def test_criterion_8_segment_and_tau(acceptance, report):
    seg = report["segment_area"]
    tau = report["tau_expression"]
    ok = (abs(seg["quadrature"] - seg["closed_form"]) <= 1e-6
          and abs(seg["twelve_segments_probability"] - 0.0745) <= 1e-4
          and not tau["printed_matches"] and tau["arccos_matches"]
          and abs(tau["printed_value"] - 0.75) <= 1e-12)
    acceptance("8", ok, f"segment quad={seg['quadrature']:.10f} closed={seg['closed_form']:.10f} "
                        f"12A/4pi={seg['twelve_segments_probability']:.5f}; printed tau="
                        f"{tau['printed_value']:.6f}, arccos tau={tau['arccos_value']:.6f}")


def test_criterion_9_properties(acceptance, sphere_samples):
    xyz = sphere_samples
    P = representative_array(xyz, 1)
    unit = np.abs(np.linalg.norm(hopf_array(P, 1), axis=1) - 1).max()
    rt = np.abs(hopf_array(P, 1) - xyz).max()
    cross = max(np.abs(hopf_array(P, k) - rotate_array(xyz, 1, k)).max() for k in (2, 3))
    sweep = mc.consistency_check(xyz, 1e-6)
    ex = ms.exact_joint_table()
    marg_exact = max(abs(ex.acute - 0.25), abs(ex.tall - 0.5), abs(sum(ex.cells.values()) - 1))
    t = ms.joint_table("canonical", 1e-4)
    marg_quad = max(abs(t.acute - 0.25), abs(t.tall - 0.5), abs(sum(t.cells.values()) - 1))
    ok = (unit <= 1e-12 and rt <= 1e-9 and cross <= 1e-9 and sweep.passed
          and marg_exact <= 1e-9 and marg_quad <= t.total_err)
    acceptance("9", ok, f"unit {unit:.0e}, round trip {rt:.0e}, cross-frame {cross:.0e} on "
                        f"{len(xyz)} samples; sweep disagreements={sum(sweep.disagreements.values())} "
                        f"(band {sweep.n_boundary_excluded}); marginals exact {marg_exact:.0e}, "
                        f"quad {marg_quad:.0e} <= {t.total_err:.0e}")
