"""Ribbons: arc-length curves with an orthonormal moving frame.

A ribbon is a unit-speed curve ``gamma`` together with a unit normal
field ``N``.  With ``B = T x N`` the frame ``(T, N, B)`` obeys

    T' =  kn N - kg B
    N' = -kn T + tg B
    B' =  kg T - tg N

where ``kn``, ``kg`` and ``tg`` are the normal curvature, geodesic
curvature and geodesic torsion.  For ``kg == 0`` this is the Frenet
system with ``tg`` equal to the torsion.

All ribbon classes evaluate vectorized: ``point(s)`` returns an array of
shape ``s.shape + (3,)`` and ``frame(s)`` a tuple of three such arrays.
"""

import csv
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline, make_interp_spline

from . import quadrature


class IntegrationError(RuntimeError):
    pass


class CurveError(ValueError):
    pass


@dataclass(frozen=True)
class Frame:
    T: np.ndarray
    N: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        for name in ("T", "N", "B"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))

    @classmethod
    def from_tn(cls, T, N):
        """Orthonormalize ``(T, N)`` and complete with ``B = T x N``."""
        T, N = orthonormalize(np.asarray(T, float), np.asarray(N, float))
        return cls(T, N, np.cross(T, N))

    def matrix(self):
        """3x3 matrix with columns T, N, B."""
        return np.column_stack([self.T, self.N, self.B])

    def orthonormality_error(self):
        M = self.matrix()
        return float(np.max(np.abs(M.T @ M - np.eye(3))))


@dataclass(frozen=True)
class Curvatures:
    kappa_n: float
    kappa_g: float
    tau_g: float

    def __iter__(self):
        return iter((self.kappa_n, self.kappa_g, self.tau_g))


def frame_derivative(frame, curv):
    """Right-hand side of the frame system.

    Returns ``(dT, dN, dB)``.
    """
    kn, kg, tg = curv
    T, N, B = frame.T, frame.N, frame.B
    dT = kn * N - kg * B
    dN = -kn * T + tg * B
    dB = kg * T - tg * N
    return dT, dN, dB


def orthonormalize(T, N):
    """Gram-Schmidt on the last axis; returns unit ``T`` and unit ``N`` perpendicular to it."""
    T = T / np.linalg.norm(T, axis=-1, keepdims=True)
    N = N - np.sum(N * T, axis=-1, keepdims=True) * T
    N = N / np.linalg.norm(N, axis=-1, keepdims=True)
    return T, N


def _perpendicular(v):
    """Some unit vector orthogonal to ``v``."""
    v = np.asarray(v, float)
    axis = np.eye(3)[np.argmin(np.abs(v))]
    w = np.cross(v, axis)
    return w / np.linalg.norm(w)


class Ribbon:
    """Base class.  Subclasses define ``length``, ``point``, ``frame``, ``curvatures``."""

    length = 0.0
    kind = "abstract"

    def point(self, s):
        raise NotImplementedError

    def frame(self, s):
        raise NotImplementedError

    def curvatures(self, s):
        raise NotImplementedError

    def frame_at(self, s):
        T, N, B = self.frame(float(s))
        return Frame(T, N, B)

    def curvatures_at(self, s):
        kn, kg, tg = self.curvatures(float(s))
        return Curvatures(float(kn), float(kg), float(tg))

    def tangent(self, s):
        return self.frame(s)[0]

    def centroid(self, panels=64, order=4):
        """Arc-length centroid of the curve, ``(1/L) int gamma ds``."""
        total = quadrature.composite(self.point, 0.0, self.length, panels, order)
        return total / self.length

    def sample(self, n):
        """Tabulate ``n`` equally spaced samples as a :class:`SampledRibbon`."""
        s = np.linspace(0.0, self.length, n)
        T, N, B = self.frame(s)
        kn, kg, tg = self.curvatures(s)
        ones = np.ones_like(s)
        return SampledRibbon(s, self.point(s), T, N, B, kn * ones, kg * ones, tg * ones)


class LineRibbon(Ribbon):
    """Straight segment ``origin + s * direction`` with a constant normal."""

    kind = "line"

    def __init__(self, origin, direction, length, normal=None):
        self.origin = np.asarray(origin, float)
        d = np.asarray(direction, float)
        self.direction = d / np.linalg.norm(d)
        if normal is None:
            normal = _perpendicular(self.direction)
        _, self.normal = orthonormalize(self.direction, np.asarray(normal, float))
        self.binormal = np.cross(self.direction, self.normal)
        self.length = float(length)

    def point(self, s):
        s = np.asarray(s, float)
        return self.origin + s[..., None] * self.direction

    def frame(self, s):
        shape = np.shape(s) + (3,)
        return (np.broadcast_to(self.direction, shape).copy(),
                np.broadcast_to(self.normal, shape).copy(),
                np.broadcast_to(self.binormal, shape).copy())

    def curvatures(self, s):
        z = np.zeros(np.shape(s))
        return z, z.copy(), z.copy()


class CircleRibbon(Ribbon):
    """Arc of a circle with the inward radial normal.

    ``gamma(s) = center + R (cos(phi0 + s/R) e1 + sin(phi0 + s/R) e2)`` where
    ``e1, e2`` span the circle's plane and ``B = e1 x e2`` is constant.
    ``kn = 1/R`` and ``kg = tg = 0``.
    """

    kind = "circle"

    def __init__(self, radius, center=(0.0, 0.0, 0.0), angle=2 * np.pi, start=0.0,
                 e1=(1.0, 0.0, 0.0), e2=(0.0, 1.0, 0.0)):
        if radius <= 0:
            raise ValueError("radius must be positive")
        self.radius = float(radius)
        self.center = np.asarray(center, float)
        self.e1, self.e2 = orthonormalize(np.asarray(e1, float), np.asarray(e2, float))
        self.start = float(start)
        self.angle = float(angle)
        self.length = self.radius * self.angle

    def _theta(self, s):
        return self.start + np.asarray(s, float) / self.radius

    def point(self, s):
        th = self._theta(s)[..., None]
        return self.center + self.radius * (np.cos(th) * self.e1 + np.sin(th) * self.e2)

    def frame(self, s):
        th = self._theta(s)[..., None]
        T = -np.sin(th) * self.e1 + np.cos(th) * self.e2
        N = -np.cos(th) * self.e1 - np.sin(th) * self.e2
        B = np.cross(T, N)
        return T, N, B

    def curvatures(self, s):
        shape = np.shape(s)
        return np.full(shape, 1.0 / self.radius), np.zeros(shape), np.zeros(shape)


class HelixRibbon(Ribbon):
    """Circular helix about the z-axis with its Frenet frame.

    ``(r cos t, r sin t, c t)`` with ``t = s / sqrt(r^2 + c^2)``; curvature
    ``r / (r^2 + c^2)`` and torsion ``c / (r^2 + c^2)``.
    """

    kind = "helix"

    def __init__(self, radius, pitch_rate, length):
        self.radius = float(radius)
        self.pitch_rate = float(pitch_rate)
        self.length = float(length)
        self._speed = np.hypot(self.radius, self.pitch_rate)

    @property
    def curvature(self):
        return self.radius / self._speed ** 2

    @property
    def torsion(self):
        return self.pitch_rate / self._speed ** 2

    def point(self, s):
        t = np.asarray(s, float) / self._speed
        return np.stack([self.radius * np.cos(t), self.radius * np.sin(t), self.pitch_rate * t], axis=-1)

    def frame(self, s):
        t = np.asarray(s, float) / self._speed
        r, c, w = self.radius, self.pitch_rate, self._speed
        T = np.stack([-r * np.sin(t), r * np.cos(t), np.full_like(t, c)], axis=-1) / w
        N = np.stack([-np.cos(t), -np.sin(t), np.zeros_like(t)], axis=-1)
        B = np.cross(T, N)
        return T, N, B

    def curvatures(self, s):
        shape = np.shape(s)
        return np.full(shape, self.curvature), np.zeros(shape), np.full(shape, self.torsion)


class SampledRibbon(Ribbon):
    """Tabulated ribbon.

    The curve is interpolated with a cubic spline, the frame linearly and
    re-orthonormalized, the curvatures linearly.
    """

    kind = "sampled"

    def __init__(self, s, gamma, T, N, B, kn, kg, tg):
        self.s = np.asarray(s, float)
        if self.s.ndim != 1 or self.s.size < 2 or np.any(np.diff(self.s) <= 0):
            raise CurveError("sample parameters must be strictly increasing")
        self.gamma = np.asarray(gamma, float)
        self.T = np.asarray(T, float)
        self.N = np.asarray(N, float)
        self.B = np.asarray(B, float)
        self.kn = np.asarray(kn, float)
        self.kg = np.asarray(kg, float)
        self.tg = np.asarray(tg, float)
        self.s0 = float(self.s[0])
        self.length = float(self.s[-1] - self.s[0])
        self._spline = CubicSpline(self.s - self.s0, self.gamma, axis=0)

    def _abs(self, s):
        return np.clip(np.asarray(s, float), 0.0, self.length) + self.s0

    def point(self, s):
        return self._spline(np.asarray(s, float))

    def frame(self, s):
        sa = self._abs(s)
        interp = lambda A: np.stack([np.interp(sa, self.s, A[:, k]) for k in range(3)], axis=-1)
        T, N = orthonormalize(interp(self.T), interp(self.N))
        return T, N, np.cross(T, N)

    def curvatures(self, s):
        sa = self._abs(s)
        return np.interp(sa, self.s, self.kn), np.interp(sa, self.s, self.kg), np.interp(sa, self.s, self.tg)

    def max_orthonormality_error(self):
        F = np.stack([self.T, self.N, self.B], axis=-1)
        G = np.einsum("nki,nkj->nij", F, F) - np.eye(3)
        return float(np.max(np.abs(G)))

    # CSV columns: s, gx, gy, gz, Tx..Tz, Nx..Nz, Bx..Bz, kn, kg, tg
    CSV_COLUMNS = (["s", "gx", "gy", "gz"] + [f"{v}{c}" for v in "TNB" for c in "xyz"]
                   + ["kn", "kg", "tg"])

    def to_csv(self, path):
        table = np.column_stack([self.s, self.gamma, self.T, self.N, self.B, self.kn, self.kg, self.tg])
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(self.CSV_COLUMNS)
            for row in table:
                w.writerow([repr(float(x)) for x in row])

    @classmethod
    def from_csv(cls, path):
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            if header != cls.CSV_COLUMNS:
                raise ValueError(f"unexpected ribbon CSV header: {header}")
            table = np.array([[float(x) for x in row] for row in reader])
        return cls(table[:, 0], table[:, 1:4], table[:, 4:7], table[:, 7:10], table[:, 10:13],
                   table[:, 13], table[:, 14], table[:, 15])


def evolve_frame(curvatures, frame0, gamma0, s_span, h):
    """Integrate the frame system with fixed-step RK4.

    Parameters
    ----------
    curvatures : callable
        ``s -> (kn, kg, tg)``.
    frame0 : Frame
        Frame at ``s_span[0]``.
    gamma0 : array_like
        Curve point at ``s_span[0]``.
    s_span : (float, float)
    h : float
        Target step; the span is divided into ``ceil(length / h)`` equal steps.

    Returns
    -------
    SampledRibbon
        The frame is re-orthonormalized after every step.
    """
    if h <= 0:
        raise ValueError("step must be positive")
    s0, s1 = map(float, s_span)
    nsteps = max(1, int(np.ceil((s1 - s0) / h - 1e-9)))
    hs = (s1 - s0) / nsteps

    def curv(s):
        k = np.array([float(x) for x in curvatures(s)])
        if not np.all(np.isfinite(k)):
            raise IntegrationError(f"non-finite curvature {k} at s={s}")
        return k

    def rhs(s, y):
        g, T, N, B = y
        kn, kg, tg = curv(s)
        return np.array([T, kn * N - kg * B, -kn * T + tg * B, kg * T - tg * N])

    y = np.array([np.asarray(gamma0, float), frame0.T, frame0.N, frame0.B])
    s_vals = s0 + hs * np.arange(nsteps + 1)
    out = np.empty((nsteps + 1, 4, 3))
    out[0] = y
    for i in range(nsteps):
        s = s_vals[i]
        k1 = rhs(s, y)
        k2 = rhs(s + hs / 2, y + hs / 2 * k1)
        k3 = rhs(s + hs / 2, y + hs / 2 * k2)
        k4 = rhs(s + hs, y + hs * k3)
        y = y + hs / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        T, N = orthonormalize(y[1], y[2])
        y = np.array([y[0], T, N, np.cross(T, N)])
        out[i + 1] = y
    ks = np.array([curv(s) for s in s_vals])
    return SampledRibbon(s_vals, out[:, 0], out[:, 1], out[:, 2], out[:, 3], ks[:, 0], ks[:, 1], ks[:, 2])


def _turning_angles(points):
    chords = np.diff(points, axis=0)
    chords /= np.linalg.norm(chords, axis=1, keepdims=True)
    cosang = np.clip(np.sum(chords[1:] * chords[:-1], axis=1), -1.0, 1.0)
    return np.arccos(cosang)


def frenet_ribbon(points, s=None, corner_tol=1e-3, flat_tol=1e-8, normal0=None):
    """Build a ribbon with zero geodesic curvature from curve samples.

    The normal is the Frenet principal normal where the curve bends and is
    parallel-transported (double reflection) across straight stretches.

    Parameters
    ----------
    points : (n, 3) array
        Samples of a regular curve.
    s : (n,) array, optional
        Arc-length parameters of the samples; chord lengths are used when
        omitted.
    corner_tol : float
        A sample whose turning angle exceeds the average of its neighbours'
        by more than this many radians is treated as a corner.
    normal0 : array_like, optional
        Initial normal used when the curve starts straight.
    """
    P = np.asarray(points, float)
    if P.ndim != 2 or P.shape[1] != 3 or len(P) < 4:
        raise CurveError("need at least 4 samples of a space curve")
    seg = np.linalg.norm(np.diff(P, axis=0), axis=1)
    if np.any(seg <= 0):
        raise CurveError("repeated sample points")
    if s is None:
        s = np.concatenate([[0.0], np.cumsum(seg)])
    s = np.asarray(s, float)
    theta = _turning_angles(P)
    if theta.size >= 3:
        padded = np.concatenate([[theta[1]], theta, [theta[-2]]])
        spike = theta - 0.5 * (padded[:-2] + padded[2:])
        bad = np.flatnonzero(spike > corner_tol)
        if bad.size:
            raise CurveError(f"corner in curve near s={s[bad[0] + 1]:.6g} "
                             f"(tangent jump {theta[bad[0]]:.3g} rad)")

    k = 5 if len(P) >= 6 else 3
    spline = make_interp_spline(s, P, k=k, axis=0)
    d1 = spline.derivative(1)(s)
    d2 = spline.derivative(2)(s)
    T = d1 / np.linalg.norm(d1, axis=1, keepdims=True)
    # derivative of the unit tangent, valid for any speed
    speed = np.linalg.norm(d1, axis=1, keepdims=True)
    dT = (d2 - np.sum(d2 * T, axis=1, keepdims=True) * T) / speed ** 2
    kappa = np.linalg.norm(dT, axis=1)

    N = np.empty_like(T)
    for i in range(len(P)):
        if kappa[i] > flat_tol:
            N[i] = dT[i] / kappa[i]
        elif i == 0:
            n0 = _perpendicular(T[0]) if normal0 is None else np.asarray(normal0, float)
            N[0] = orthonormalize(T[0], n0)[1]
        else:
            N[i] = _double_reflection(P[i - 1], P[i], T[i - 1], T[i], N[i - 1])
    # a straight start takes the first available Frenet normal, transported back
    bent = np.flatnonzero(kappa > flat_tol)
    if normal0 is None and bent.size and bent[0] > 0:
        for i in range(bent[0] - 1, -1, -1):
            N[i] = _double_reflection(P[i + 1], P[i], T[i + 1], T[i], N[i + 1])
    T, N = orthonormalize(T, N)
    B = np.cross(T, N)
    kn = np.sum(dT * N, axis=1)
    kg = -np.sum(dT * B, axis=1)
    dN = np.gradient(N, s, axis=0)
    tg = np.sum(dN * B, axis=1)
    return SampledRibbon(s, P, T, N, B, kn, kg, tg)


def _double_reflection(x0, x1, t0, t1, r0):
    """Rotation-minimizing transport of ``r0`` from ``x0`` to ``x1``."""
    v1 = x1 - x0
    c1 = v1 @ v1
    rL = r0 - (2.0 / c1) * (v1 @ r0) * v1
    tL = t0 - (2.0 / c1) * (v1 @ t0) * v1
    v2 = t1 - tL
    c2 = v2 @ v2
    if c2 < 1e-300:
        return rL
    return rL - (2.0 / c2) * (v2 @ rL) * v2


def ribbon_from_spec(spec):
    """Ribbon from a JSON-style dict.

    Types: ``arc`` (radius, angle, optional center/start), ``line``
    (length, optional origin/direction/normal), ``helix`` (radius,
    pitch_rate, length), ``points`` (points, optional s; Frenet framing)
    and ``csv`` (path of a sampled-ribbon CSV).
    """
    kind = spec.get("type")
    if kind == "arc":
        return CircleRibbon(float(spec["radius"]), spec.get("center", (0.0, 0.0, 0.0)),
                            float(spec.get("angle", 2 * np.pi)), float(spec.get("start", 0.0)))
    if kind == "line":
        return LineRibbon(spec.get("origin", (0.0, 0.0, 0.0)), spec.get("direction", (1.0, 0.0, 0.0)),
                          float(spec["length"]), spec.get("normal"))
    if kind == "helix":
        return HelixRibbon(float(spec["radius"]), float(spec["pitch_rate"]), float(spec["length"]))
    if kind == "points":
        return frenet_ribbon(np.asarray(spec["points"], float), spec.get("s"))
    if kind == "csv":
        return SampledRibbon.from_csv(spec["path"])
    raise ValueError(f"unknown ribbon type {kind!r}")
