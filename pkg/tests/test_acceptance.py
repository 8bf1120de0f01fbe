"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line that is repeated in the pytest summary.
Run on its own with ``pytest tests/test_acceptance.py -v``.
"""

import time

import numpy as np
import pytest

from pappus.body import (ConvexBody, SectionPlane, cap_volume_ball, cross_section, disk_profile, ellipse_profile,
                         halfspace_volume, monte_carlo_centroid, monte_carlo_volume)
from pappus.curve import (SegmentOracle, boundary_approach_angle, ellipsoid_centroid_curve, trace_centroid_curve)
from pappus.frames import CircleRibbon, HelixRibbon, LineRibbon
from pappus.rod import (arc_rod, bent_rod_centroid, disk, polygon, polygon_area_moments,
                        revolution_segment_centroid)
from pappus.surface import BoundaryTrace, area_lower_bound, equality_defect, refined_mesh_area
from pappus.volume import SliceSeries, body_centroid_along_ribbon, centroid_curve_volume, pappus_volume

ABC = (1.0, 0.625, 0.5)
P0 = np.array([0.8, -0.3, 0.18])
MC_N = 10 ** 7


def closed_form_error(tr):
    x = tr.gamma[:, 0]
    keep = (x >= 0.05) & (x <= 0.8)
    y, z = ellipsoid_centroid_curve(*ABC, P0, x[keep])
    return max(np.max(np.abs(tr.gamma[keep, 1] - y)), np.max(np.abs(tr.gamma[keep, 2] - z)))


def test_criterion_1_ellipsoid_trace_reproduction(report):
    ell = ConvexBody.ellipsoid(ABC)
    t0 = time.perf_counter()
    tr = trace_centroid_curve(ell, P0, h=1e-3)
    runtime = time.perf_counter() - t0
    errs = [closed_form_error(tr)]
    for h in (5e-4, 2.5e-4):
        errs.append(closed_form_error(trace_centroid_curve(ell, P0, h=h)))
    ratios = [errs[0] / errs[1], errs[1] / errs[2]]
    covered = tr.gamma[:, 0].min() <= 0.05
    ok = errs[0] < 1e-4 and min(ratios) >= 8 and runtime < 60 and covered
    report(1, ok, f"sup error {errs[0]:.3e} at h=1e-3, reduction ratios {ratios[0]:.2f}, {ratios[1]:.2f}, "
                  f"runtime {runtime:.1f} s")
    assert ok


def test_criterion_2_ball_cap_law(report):
    ball = ConvexBody.ball()
    worst = 0.0
    for r in (0.1, 0.3, 0.5, 0.7, 0.9):
        v = halfspace_volume(ball, [0.0, 0.0, -1.0], [0.0, 0.0, r], method="quadrature")
        worst = max(worst, abs(v - cap_volume_ball(r)))
    ok = worst < 1e-8
    report(2, ok, f"max |V - delta(r)| = {worst:.2e}")
    assert ok


def test_criterion_3_torus_two_ways(report):
    exact = 2 * np.pi ** 2 * 0.09
    # (i) centroid circle, areas taken from the computed sections
    rib = CircleRibbon(1.0)
    series = SliceSeries.from_sections(rib, lambda s, pl: disk_profile(pl, 0.3), 64)
    v1 = centroid_curve_volume(rib, lambda s: np.interp(s % rib.length, series.s, series.area, period=rib.length))
    # (ii) concentric circle R' = 1.2, slices centered at u = 0.2
    off = CircleRibbon(1.2)
    series2 = SliceSeries.from_sections(off, lambda s, pl: disk_profile(pl, 0.3, (0.2, 0.0)), 64)
    assert np.allclose(series2.local_centroids[:, 0], 0.2)
    v2 = pappus_volume(series2)
    rel = max(abs(v1 - exact), abs(v2 - exact), abs(v1 - v2)) / exact
    ok = rel < 1e-8
    report(3, ok, f"centroid circle {v1:.12f}, offset circle {v2:.12f}, exact {exact:.12f}, rel {rel:.1e}")
    assert ok


def _section_shapes():
    r = lambda s: 0.25 + 0.08 * np.sin(3 * s)
    k = lambda s: 1.4 + 0.2 * np.cos(2 * s)
    theta = lambda s: 1.5 * s
    return r, k, theta


def test_criterion_4_equal_area_sections(report):
    r, k, theta = _section_shapes()
    rib = CircleRibbon(1.0)
    planes = {}

    def plane(s):
        if s not in planes:
            T, N, _ = rib.frame(s)
            planes[s] = SectionPlane.through(rib.point(s), T, N)
        return planes[s]

    disk_area = lambda s: disk_profile(plane(float(s)), r(s)).area
    ell_area = lambda s: ellipse_profile(plane(float(s)), r(s) * k(s), r(s) / k(s), theta(s)).area
    v_disk = centroid_curve_volume(rib, disk_area)
    v_ell = centroid_curve_volume(rib, ell_area)
    rel = abs(v_disk - v_ell) / v_disk

    def disks(x):
        s = np.mod(np.arctan2(x[:, 1], x[:, 0]), 2 * np.pi)
        u, v = 1.0 - np.hypot(x[:, 0], x[:, 1]), x[:, 2]
        return u * u + v * v <= r(s) ** 2

    def ellipses(x):
        s = np.mod(np.arctan2(x[:, 1], x[:, 0]), 2 * np.pi)
        u, v = 1.0 - np.hypot(x[:, 0], x[:, 1]), x[:, 2]
        th = theta(s)
        p = np.cos(th) * u + np.sin(th) * v
        q = -np.sin(th) * u + np.cos(th) * v
        return (p / (r(s) * k(s))) ** 2 + (q * k(s) / r(s)) ** 2 <= 1

    box = (np.array([-1.6, -1.6, -0.6]), np.array([1.6, 1.6, 0.6]))
    mc_d, se_d = monte_carlo_volume(disks, MC_N, seed=101, box=box)
    mc_e, se_e = monte_carlo_volume(ellipses, MC_N, seed=102, box=box)
    zd, ze = abs(mc_d - v_disk) / se_d, abs(mc_e - v_ell) / se_e
    ok = rel < 1e-8 and zd < 4 and ze < 4
    report(4, ok, f"disk {v_disk:.10f} vs ellipse {v_ell:.10f} (rel {rel:.1e}); "
                  f"Monte Carlo z-scores {zd:.2f}, {ze:.2f}")
    assert ok


def _trace_checks(body, tr):
    """Worst values of the trace invariants."""
    R = body.bounding_radius
    inc = bool(np.all(np.diff(tr.delta) > 0))
    slope = np.gradient(tr.delta, tr.s)
    inner = slice(2, -2)
    ratio = np.max(np.abs(slope[inner] / tr.A[inner] - 1))
    oracle = SegmentOracle(body)
    res = max(np.linalg.norm(oracle.section(n, g)[1] - g) for g, n, a in zip(tr.gamma, tr.n, tr.A) if a > 0)
    sec_res = max(np.linalg.norm(cross_section(body, SectionPlane.through(tr.gamma[k], tr.n[k]), 256).centroid
                                 - tr.gamma[k]) for k in range(1, len(tr), 10))
    return inc, ratio, max(res, sec_res) / R


def test_criterion_5_trace_invariants(report):
    ell = ConvexBody.ellipsoid(ABC)
    ball = ConvexBody.ball()
    x0 = 0.6
    start = np.array([x0, *ellipsoid_centroid_curve(*ABC, P0, x0)])
    cases = [
        ("ellipsoid", ell, trace_centroid_curve(ell, start, h=1e-3, delta_min=1e-6)),
        ("ball", ball, trace_centroid_curve(ball, [0.2, -0.3, 0.4], h=1e-3, delta_min=1e-6)),
    ]
    ok = True
    parts = []
    for name, body, tr in cases:
        inc, ratio, res = _trace_checks(body, tr)
        angle = boundary_approach_angle(tr, body)
        end_delta = tr.delta[0]
        good = inc and ratio < 0.02 and res < 1e-6 and angle < 0.02 and end_delta <= 1e-6
        ok &= good
        parts.append(f"{name}: increasing={inc}, max|delta'/A-1|={ratio:.1e}, residual/R={res:.1e}, "
                     f"angle={angle:.1e} at delta={end_delta:.1e}")
    report(5, ok, "; ".join(parts))
    assert ok


def test_criterion_6_bent_rod_centroid(report):
    rod = arc_rod(1.0, np.pi / 2, disk(0.1))
    vol, c = bent_rod_centroid(rod)
    expect = (2 / np.pi + 0.01 / (2 * np.pi)) * np.array([1.0, 1.0, 0.0])
    series = SliceSeries.from_sections(rod.ribbon, lambda s, pl: disk_profile(pl, 0.1), 64)
    c_slices = body_centroid_along_ribbon(series, symmetric=True)

    def tube(x):
        rho = np.hypot(x[:, 0], x[:, 1])
        return ((rho - 1.0) ** 2 + x[:, 2] ** 2 <= 0.01) & (x[:, 0] >= 0) & (x[:, 1] >= 0)

    mc, se = monte_carlo_centroid(tube, MC_N, seed=606, box=([0, 0, -0.1], [1.1, 1.1, 0.1]))
    z = np.max(np.abs(mc - c)[:2] / se[:2])
    zz = abs(mc[2] - c[2]) / se[2]
    vol_exact = np.pi * 0.01 * np.pi / 2
    ok = (np.max(np.abs(c - expect)) < 1e-12 and np.max(np.abs(c - c_slices)) < 1e-8 and max(z, zz) < 4
          and abs(vol - vol_exact) <= 1e-15 * vol_exact)
    report(6, ok, f"c = {c[0]:.9f}(1,1,0), |closed form - slice integral| = {np.max(np.abs(c - c_slices)):.1e}, MC z-score {max(z, zz):.2f}, "
                  f"volume {vol:.15f}")
    assert ok


def test_criterion_7_revolution_segment(report):
    hexagon = polygon([[-0.12, 0.0], [-0.06, -0.09], [0.08, -0.07], [0.14, 0.0], [0.08, 0.07], [-0.06, 0.09]])
    assert "u-axis" in hexagon.symmetry
    r_bar = 1.3
    worst = 0.0
    for alpha in (0.4, 1.0, np.pi / 2, 2.5, np.pi, 5.0, 2 * np.pi):
        _, c = bent_rod_centroid(arc_rod(r_bar, alpha, hexagon))
        c_rev = revolution_segment_centroid(hexagon.area, r_bar, hexagon.Iv, alpha)
        worst = max(worst, np.max(np.abs(c - c_rev)))
    # the profile placed in the (x, z) half-plane at distance r_bar from the z-axis
    V = np.column_stack([r_bar - hexagon.vertices[:, 0], hexagon.vertices[:, 1]])[::-1]
    _, _, _, _, I_axis, _ = polygon_area_moments(V)
    steiner = abs(I_axis - (hexagon.area * r_bar ** 2 + hexagon.Iv)) / I_axis
    ok = worst < 1e-10 * r_bar and steiner < 1e-12
    report(7, ok, f"max |bent rod - revolution| = {worst:.1e}, Steiner rel error {steiner:.1e}")
    assert ok


def _random_tube(seed):
    rng = np.random.default_rng(seed)
    if seed % 2:
        rib = HelixRibbon(rng.uniform(0.8, 1.5), rng.uniform(0.1, 0.6), rng.uniform(2.0, 5.0))
    else:
        rib = CircleRibbon(rng.uniform(0.8, 1.5), angle=rng.uniform(1.0, 2 * np.pi))
    a0, b0 = rng.uniform(0.08, 0.2, 2)
    da, db, w, d = rng.uniform(0.0, 0.05, 4)
    f1, f2, f3 = rng.uniform(0.5, 3.0, 3)

    def uv(s, t):
        a = a0 + da * np.sin(f1 * s)
        b = b0 + db * np.cos(f2 * s)
        th = w * 20 * s
        x, y = a * np.cos(t), b * np.sin(t)
        off = d * np.sin(f3 * s)
        return off + x * np.cos(th) - y * np.sin(th), x * np.sin(th) + y * np.cos(th)

    return rib, uv


def test_criterion_8_surface_bound(report):
    line = LineRibbon([0, 0, 0], [0, 0, 1], 2.0)
    circ = lambda s, t: (0.3 * np.cos(t) + 0 * s, 0.3 * np.sin(t) + 0 * s)
    cyl = area_lower_bound(BoundaryTrace.from_function(line, circ))
    cyl_err = abs(cyl - 2 * np.pi * 0.3 * 2.0) / (2 * np.pi * 0.3 * 2.0)
    torus = BoundaryTrace.from_function(CircleRibbon(1.0), circ)
    tor = area_lower_bound(torus)
    tor_err = abs(tor - 4 * np.pi ** 2 * 0.3) / (4 * np.pi ** 2 * 0.3)
    tor_def = equality_defect(torus)
    slacks = []
    for seed in range(3):
        rib, uv = _random_tube(seed)
        bound = area_lower_bound(BoundaryTrace.from_function(rib, uv, panels=64))
        mesh, change = refined_mesh_area(rib, uv, rtol=1e-6)
        assert change < 1e-6
        slacks.append((mesh - bound) / mesh)
    ok = cyl_err < 1e-12 and tor_err < 1e-8 and tor_def < 1e-8 and min(slacks) > -1e-6
    report(8, ok, f"cylinder rel {cyl_err:.1e}, torus rel {tor_err:.1e} defect {tor_def:.1e}, "
                  f"random-tube slack {', '.join(f'{x:.2e}' for x in slacks)}")
    assert ok


def test_criterion_9_full_ellipsoid_volume(report):
    ell = ConvexBody.ellipsoid(ABC)
    line = LineRibbon([-1.0, 0.0, 0.0], [1.0, 0.0, 0.0], 2.0)

    def area(s):
        T, N, _ = line.frame(s)
        return cross_section(ell, SectionPlane.through(line.point(s), T, N), 256).area

    vol = centroid_curve_volume(line, lambda s: area(float(s)))
    exact = 4 * np.pi * np.prod(ABC) / 3
    rel = abs(vol - exact) / exact
    ok = rel < 1e-8
    report(9, ok, f"volume {vol:.12f} vs {exact:.12f}, rel {rel:.1e}")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
