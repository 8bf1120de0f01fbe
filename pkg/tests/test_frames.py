import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.spatial.transform import Rotation

from pappus.frames import (CircleRibbon, CurveError, Curvatures, Frame, HelixRibbon, IntegrationError,
                           LineRibbon, SampledRibbon, evolve_frame, frame_derivative, frenet_ribbon,
                           ribbon_from_spec)

I3 = np.eye(3)


def identity_frame():
    return Frame(I3[0], I3[1], I3[2])


def test_frame_derivative_zero_curvature():
    rng = np.random.default_rng(1)
    f = Frame.from_tn(rng.normal(size=3), rng.normal(size=3))
    for d in frame_derivative(f, Curvatures(0.0, 0.0, 0.0)):
        assert np.all(d == 0)


def test_frame_derivative_normal_curvature():
    dT, dN, dB = frame_derivative(identity_frame(), Curvatures(1.0, 0.0, 0.0))
    np.testing.assert_array_equal(dT, I3[1])
    np.testing.assert_array_equal(dN, -I3[0])
    np.testing.assert_array_equal(dB, 0)


def test_frame_derivative_geodesic_and_torsion():
    dT, dN, dB = frame_derivative(identity_frame(), Curvatures(0.0, 2.0, 3.0))
    np.testing.assert_array_equal(dT, -2 * I3[2])
    np.testing.assert_array_equal(dN, 3 * I3[2])
    np.testing.assert_array_equal(dB, 2 * I3[0] - 3 * I3[1])


def test_frame_derivative_is_skew():
    # d/ds (F^T F) = 0 for any curvatures
    rng = np.random.default_rng(7)
    for _ in range(5):
        f = Frame.from_tn(rng.normal(size=3), rng.normal(size=3))
        D = np.column_stack(frame_derivative(f, Curvatures(*rng.normal(size=3))))
        F = f.matrix()
        S = F.T @ D
        np.testing.assert_allclose(S + S.T, 0, atol=1e-14)


def test_frame_from_tn_orthonormal():
    f = Frame.from_tn([1.0, 2.0, 0.5], [0.0, 1.0, 3.0])
    assert f.orthonormality_error() < 1e-14
    np.testing.assert_allclose(f.B, np.cross(f.T, f.N), atol=1e-15)


@pytest.mark.parametrize("R", [0.5, 1.0, 10.0])
def test_circle_closure(R):
    f0 = Frame(I3[1], -I3[0], I3[2])
    rib = evolve_frame(lambda s: (1.0 / R, 0.0, 0.0), f0, [R, 0.0, 0.0], (0.0, 2 * np.pi * R),
                       2 * np.pi * R / 1000)
    assert np.linalg.norm(rib.gamma[-1] - rib.gamma[0]) < 1e-8 * R
    assert rib.max_orthonormality_error() < 1e-9
    np.testing.assert_allclose(np.linalg.norm(rib.gamma, axis=1), R, atol=1e-9 * R)


def test_zero_curvature_is_straight_line():
    f0 = Frame.from_tn([1.0, 1.0, 0.0], [0.0, 0.0, 1.0])
    g0 = np.array([0.3, -0.2, 1.0])
    rib = evolve_frame(lambda s: (0.0, 0.0, 0.0), f0, g0, (0.0, 2.0), 0.1)
    np.testing.assert_allclose(rib.gamma, g0 + rib.s[:, None] * f0.T, atol=1e-14)


def test_constant_curvature_torsion_gives_helix():
    kappa, tau = 0.8, 0.3
    h = HelixRibbon(kappa / (kappa ** 2 + tau ** 2), tau / (kappa ** 2 + tau ** 2), 6.0)
    assert h.curvature == pytest.approx(kappa, rel=1e-14)
    assert h.torsion == pytest.approx(tau, rel=1e-14)
    f0 = h.frame_at(0.0)
    rib = evolve_frame(lambda s: (kappa, 0.0, tau), f0, h.point(0.0), (0.0, 6.0), 1e-3)
    np.testing.assert_allclose(rib.gamma, h.point(rib.s), atol=1e-8)
    T, N, B = h.frame(rib.s)
    np.testing.assert_allclose(rib.N, N, atol=1e-8)


def test_helix_frame_system_by_finite_differences():
    h = HelixRibbon(1.2, 0.4, 5.0)
    s = np.linspace(0.5, 4.5, 9)
    eps = 1e-5
    Fp = np.stack(h.frame(s + eps), axis=-1)
    Fm = np.stack(h.frame(s - eps), axis=-1)
    dF = (Fp - Fm) / (2 * eps)
    for k, sk in enumerate(s):
        f = h.frame_at(sk)
        D = np.column_stack(frame_derivative(f, h.curvatures_at(sk)))
        np.testing.assert_allclose(dF[k], D, atol=1e-8)


def test_evolve_rejects_nonfinite_curvature():
    with pytest.raises(IntegrationError, match="s="):
        evolve_frame(lambda s: (np.inf if s > 0.5 else 0.0, 0.0, 0.0), identity_frame(), np.zeros(3),
                     (0.0, 1.0), 0.1)


def test_evolve_orthonormality_with_varying_curvatures():
    curv = lambda s: (1 + 0.5 * np.sin(3 * s), 0.3 * np.cos(s), 0.7 * np.sin(2 * s))
    rib = evolve_frame(curv, identity_frame(), np.zeros(3), (0.0, 10.0), 0.01)
    assert rib.max_orthonormality_error() < 1e-9


@settings(max_examples=20, deadline=None)
@given(st.lists(st.floats(-1, 1), min_size=6, max_size=6), st.lists(st.floats(-2, 2), min_size=3, max_size=3))
def test_rigid_motion_equivariance(rot, shift):
    rv = np.array(rot[:3])
    Q = Rotation.from_rotvec(rv).as_matrix()
    t = np.array(shift)
    curv = lambda s: (1.0 + 0.3 * np.sin(s), 0.2, 0.5 * np.cos(s))
    f0 = Frame.from_tn([1.0, 0.2, 0.0], [0.0, 1.0, 0.3])
    g0 = np.array(rot[3:])
    a = evolve_frame(curv, f0, g0, (0.0, 3.0), 0.01)
    fq = Frame(Q @ f0.T, Q @ f0.N, Q @ f0.B)
    b = evolve_frame(curv, fq, Q @ g0 + t, (0.0, 3.0), 0.01)
    np.testing.assert_allclose(b.gamma, a.gamma @ Q.T + t, atol=1e-9)
    np.testing.assert_allclose(b.B, a.B @ Q.T, atol=1e-9)


def test_circle_ribbon_tangent_matches_finite_difference():
    c = CircleRibbon(2.0)
    h = 1e-3
    s = np.linspace(0.1, 12.0, 40)
    fd = (c.point(s + h) - c.point(s - h)) / (2 * h)
    T, _, _ = c.frame(s)
    assert np.max(np.linalg.norm(fd - T, axis=1)) < 1e-6 * (1 + 0.5 * h)


def test_frenet_ribbon_planar_circle():
    R = 1.5
    s = np.linspace(0.0, 2 * np.pi * R * 0.9, 400)
    P = np.column_stack([R * np.cos(s / R), R * np.sin(s / R), np.zeros_like(s)])
    rib = frenet_ribbon(P, s)
    inward = -P / R
    np.testing.assert_allclose(rib.N[5:-5], inward[5:-5], atol=1e-6)
    np.testing.assert_allclose(rib.kn[5:-5], 1 / R, atol=1e-6)
    assert np.max(np.abs(rib.kg)) < 1e-8
    assert np.max(np.abs(rib.tg[5:-5])) < 1e-5


def test_frenet_ribbon_quarter_circle_radius_two():
    s = np.linspace(0.0, np.pi, 300)
    P = np.column_stack([2 * np.cos(s / 2), 2 * np.sin(s / 2), np.zeros_like(s)])
    rib = frenet_ribbon(P, s)
    np.testing.assert_allclose(rib.kn, 0.5, atol=1e-6)


def test_frenet_ribbon_straight_segment():
    s = np.linspace(0.0, 1.0, 20)
    P = np.column_stack([s, 2 * s, np.zeros_like(s)]) / np.sqrt(5)
    rib = frenet_ribbon(P, normal0=[0.0, 0.0, 1.0])
    np.testing.assert_allclose(rib.N, np.tile([0.0, 0.0, 1.0], (20, 1)), atol=1e-12)
    for k in (rib.kn, rib.kg, rib.tg):
        assert np.max(np.abs(k)) < 1e-8


def test_frenet_ribbon_helix_torsion_sign():
    h = HelixRibbon(1.0, 0.5, 8.0)
    s = np.linspace(0.0, 8.0, 800)
    rib = frenet_ribbon(h.point(s), s)
    np.testing.assert_allclose(rib.kn[10:-10], h.curvature, atol=1e-6)
    np.testing.assert_allclose(rib.tg[10:-10], h.torsion, atol=1e-4)


def test_frenet_ribbon_detects_corner():
    t = np.linspace(0, 1, 30)
    P = np.vstack([np.column_stack([t, 0 * t, 0 * t]), np.column_stack([1 + 0 * t[1:], t[1:], 0 * t[1:]])])
    with pytest.raises(CurveError, match="corner"):
        frenet_ribbon(P)


def test_frenet_ribbon_rejects_repeated_points():
    P = np.array([[0, 0, 0], [1, 0, 0], [1, 0, 0], [2, 0, 0], [3, 0, 0.0]])
    with pytest.raises(CurveError):
        frenet_ribbon(P)


def test_sampled_ribbon_csv_round_trip(tmp_path):
    rib = HelixRibbon(1.0, 0.3, 4.0).sample(101)
    path = tmp_path / "ribbon.csv"
    rib.to_csv(path)
    back = SampledRibbon.from_csv(path)
    for name in ("s", "gamma", "T", "N", "B", "kn", "kg", "tg"):
        np.testing.assert_array_equal(getattr(back, name), getattr(rib, name))


def test_sampled_ribbon_interpolates_frame():
    h = HelixRibbon(1.0, 0.3, 4.0)
    rib = h.sample(2001)
    s = np.linspace(0.01, 3.99, 37)
    np.testing.assert_allclose(rib.point(s), h.point(s), atol=1e-10)
    for a, b in zip(rib.frame(s), h.frame(s)):
        np.testing.assert_allclose(a, b, atol=1e-6)


def test_line_ribbon_centroid_is_midpoint():
    line = LineRibbon([1.0, 0.0, 0.0], [0.0, 1.0, 1.0], 2.0)
    np.testing.assert_allclose(line.centroid(), line.point(1.0), atol=1e-15)


def test_ribbon_from_spec_types():
    arc = ribbon_from_spec({"type": "arc", "radius": 2.0, "angle": np.pi})
    assert arc.length == pytest.approx(2 * np.pi)
    line = ribbon_from_spec({"type": "line", "length": 3.0, "direction": [0, 0, 1]})
    np.testing.assert_allclose(line.point(3.0), [0, 0, 3])
    with pytest.raises(ValueError):
        ribbon_from_spec({"type": "spiral"})
