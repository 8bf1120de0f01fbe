"""Smooth convex bodies given by implicit functions.

A body is ``{x : F(x) <= 0}`` for a smooth convex ``F``.  Everything here
works from membership and the gradient of ``F``: boundary distances come
from bracketed root finding along rays, plane sections are described in
polar form ``r(phi)`` about an interior pole, and half-space volumes are
integrals of section areas.

Balls and ellipsoids additionally carry closed-form segment data (cap
volume, section area and centroid) through the affine map onto the unit
ball; see :func:`segment_oracle`.
"""

import csv
import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import optimize

from . import quadrature


class BodyError(ValueError):
    """Inconsistent body description or a query outside the body."""


# ---------------------------------------------------------------------------
# bodies
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ConvexBody:
    """Implicit convex body.

    Attributes
    ----------
    F, grad : callable
        Vectorized over the last axis (shape ``(..., 3)``).
    interior_hint : ndarray
        A point with ``F < 0``.
    bounding_radius : float
        The ball of this radius about ``interior_hint`` contains the body.
    rho : float or None
        Minimal principal radius of curvature of the boundary, if known.
    kind : str
        ``"ball"``, ``"ellipsoid"``, ``"superquadric"`` or ``"generic"``.
    params : dict
        Shape parameters for the analytic kinds.
    centrally_symmetric : bool
        Symmetric about ``interior_hint``.
    """

    F: object
    grad: object
    interior_hint: np.ndarray
    bounding_radius: float
    rho: float = None
    kind: str = "generic"
    params: dict = field(default_factory=dict)
    centrally_symmetric: bool = False
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "interior_hint", np.asarray(self.interior_hint, float))
        if not self.F(self.interior_hint) < 0:
            raise BodyError("interior_hint is not inside the body")
        if self.validate:
            self._check_convexity()

    # -- constructors -------------------------------------------------------

    @classmethod
    def ball(cls, radius=1.0, center=(0.0, 0.0, 0.0)):
        return cls.ellipsoid((radius, radius, radius), center, _kind="ball")

    @classmethod
    def ellipsoid(cls, semi_axes, center=(0.0, 0.0, 0.0), _kind="ellipsoid"):
        D = np.asarray(semi_axes, float)
        m = np.asarray(center, float)
        if D.shape != (3,) or np.any(D <= 0):
            raise BodyError("semi-axes must be three positive numbers")

        def F(x):
            return np.sum(((np.asarray(x, float) - m) / D) ** 2, axis=-1) - 1.0

        def grad(x):
            return 2.0 * (np.asarray(x, float) - m) / D ** 2

        params = {"semi_axes": D, "center": m}
        if _kind == "ball":
            params["radius"] = float(D[0])
        return cls(F, grad, m, float(D.max()), rho=float(D.min() ** 2 / D.max()), kind=_kind,
                   params=params, centrally_symmetric=True, validate=False)

    @classmethod
    def superquadric(cls, semi_axes, exponents, center=(0.0, 0.0, 0.0)):
        """``sum |x_i / a_i|^e_i <= 1`` with all exponents >= 2."""
        D = np.asarray(semi_axes, float)
        E = np.asarray(exponents, float)
        m = np.asarray(center, float)
        if np.any(D <= 0) or np.any(E < 2):
            raise BodyError("superquadric needs positive semi-axes and exponents >= 2")

        def F(x):
            return np.sum(np.abs((np.asarray(x, float) - m) / D) ** E, axis=-1) - 1.0

        def grad(x):
            y = (np.asarray(x, float) - m) / D
            return E * np.sign(y) * np.abs(y) ** (E - 1) / D

        R = float(np.linalg.norm(D))
        rho = float(D.min() ** 2 / D.max()) if np.all(E == 2) else None
        return cls(F, grad, m, R, rho=rho, kind="superquadric",
                   params={"semi_axes": D, "exponents": E, "center": m}, centrally_symmetric=True)

    @classmethod
    def from_spec(cls, spec):
        """Build from a JSON-style dict (see :meth:`to_spec`)."""
        kind = spec.get("type")
        center = spec.get("center", [0.0, 0.0, 0.0])
        if kind == "ball":
            return cls.ball(float(spec["radius"]), center)
        if kind == "ellipsoid":
            return cls.ellipsoid(spec["semi_axes"], center)
        if kind == "superquadric":
            return cls.superquadric(spec["semi_axes"], spec["exponents"], center)
        raise BodyError(f"unknown body type {kind!r}")

    @classmethod
    def from_json(cls, path):
        with open(path) as fh:
            return cls.from_spec(json.load(fh))

    def to_spec(self):
        p = self.params
        if self.kind == "ball":
            return {"type": "ball", "center": p["center"].tolist(), "radius": p["radius"]}
        if self.kind == "ellipsoid":
            return {"type": "ellipsoid", "semi_axes": p["semi_axes"].tolist(), "center": p["center"].tolist()}
        if self.kind == "superquadric":
            return {"type": "superquadric", "semi_axes": p["semi_axes"].tolist(),
                    "exponents": p["exponents"].tolist(), "center": p["center"].tolist()}
        raise BodyError("generic bodies have no JSON form")

    # -- queries ------------------------------------------------------------

    @property
    def is_quadric(self):
        return self.kind in ("ball", "ellipsoid")

    @property
    def sigma(self):
        """``2 pi rho^3 / 3``, the floating-body range guaranteed by curvature, or None."""
        return None if self.rho is None else 2.0 * np.pi * self.rho ** 3 / 3.0

    def contains(self, x):
        return self.F(x) <= 0

    def inner_normal(self, x):
        g = self.grad(x)
        return -g / np.linalg.norm(g, axis=-1, keepdims=True)

    @cached_property
    def volume(self):
        if self.is_quadric:
            return 4.0 * np.pi * float(np.prod(self.params["semi_axes"])) / 3.0
        n = np.array([0.0, 0.0, 1.0])
        lo, hi = self.support_point(-n), self.support_point(n)
        return halfspace_volume(self, n, hi + n * self.bounding_radius)

    def support_point(self, u):
        """Boundary point maximizing ``<x, u>``."""
        u = np.asarray(u, float)
        u = u / np.linalg.norm(u)
        if self.is_quadric:
            D2 = self.params["semi_axes"] ** 2
            return self.params["center"] + D2 * u / np.sqrt(np.sum(D2 * u * u))
        o = self.interior_hint
        res = optimize.minimize(
            lambda x: -(x @ u), o, jac=lambda x: -u, method="SLSQP",
            constraints=[{"type": "ineq", "fun": lambda x: -self.F(x), "jac": lambda x: -self.grad(x)}],
            options={"ftol": 1e-15, "maxiter": 200})
        x = res.x
        d = x - o
        if np.linalg.norm(d) < 1e-12 * self.bounding_radius:
            d = u
        d = d / np.linalg.norm(d)
        return o + ray_boundary_distance(self, o, d) * d

    def random_boundary_points(self, n, rng):
        d = rng.normal(size=(n, 3))
        d /= np.linalg.norm(d, axis=1, keepdims=True)
        o = np.broadcast_to(self.interior_hint, d.shape)
        return o + _ray_batch(self, o, d)[:, None] * d

    def _check_convexity(self, pairs=100, seed=12345):
        rng = np.random.default_rng(seed)
        P = self.random_boundary_points(2 * pairs, rng)
        mid = 0.5 * (P[:pairs] + P[pairs:])
        if np.any(self.F(mid) > 1e-9):
            raise BodyError("convexity check failed: boundary midpoint outside the body")


def cap_volume_ball(r):
    """Volume cut from the unit ball by a plane at distance ``r`` from its center."""
    r = float(r)
    if not 0.0 < r < 1.0:
        raise ValueError("r must lie in (0, 1)")
    return np.pi / 3.0 * (1.0 - r) ** 2 * (2.0 + r)


# ---------------------------------------------------------------------------
# rays
# ---------------------------------------------------------------------------


def _ray_batch(body, origins, dirs, newton_steps=3):
    """Distances from interior ``origins`` along unit ``dirs`` to the boundary."""
    origins = np.asarray(origins, float)
    dirs = np.asarray(dirs, float)
    R = body.bounding_radius
    if np.any(body.F(origins) >= 0):
        raise BodyError("ray origin is not an interior point")
    lo = np.zeros(origins.shape[:-1])
    hi = np.full(origins.shape[:-1], 2.0 * R * (1 + 1e-12))
    if np.any(body.F(origins + hi[..., None] * dirs) <= 0):
        raise BodyError("no boundary crossing within twice the bounding radius")
    width = 1e-13 * R
    iters = int(np.ceil(np.log2(2.0 * R / width)))
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        inside = body.F(origins + mid[..., None] * dirs) <= 0
        lo = np.where(inside, mid, lo)
        hi = np.where(inside, hi, mid)
    t = 0.5 * (lo + hi)
    for _ in range(newton_steps):
        x = origins + t[..., None] * dirs
        slope = np.sum(body.grad(x) * dirs, axis=-1)
        step = np.divide(body.F(x), slope, out=np.zeros_like(t), where=slope > 0)
        t = np.clip(t - step, lo - width, hi + width)
    return t


def ray_boundary_distance(body, origin, direction):
    """Distance from an interior ``origin`` along ``direction`` to the boundary."""
    d = np.asarray(direction, float)
    d = d / np.linalg.norm(d)
    return float(_ray_batch(body, np.asarray(origin, float)[None], d[None])[0])


# ---------------------------------------------------------------------------
# plane sections
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SectionPlane:
    """Plane through ``p`` with unit normal ``n``; ``(x1, x2, n)`` is right-handed."""

    n: np.ndarray
    p: np.ndarray
    x1: np.ndarray
    x2: np.ndarray

    @classmethod
    def through(cls, p, n, x1=None):
        n = np.asarray(n, float)
        n = n / np.linalg.norm(n)
        if x1 is None:
            x1 = np.cross(n, np.eye(3)[np.argmin(np.abs(n))])
        x1 = np.asarray(x1, float)
        x1 = x1 - (x1 @ n) * n
        x1 = x1 / np.linalg.norm(x1)
        return cls(n, np.asarray(p, float), x1, np.cross(n, x1))

    def to_local(self, x):
        d = np.asarray(x, float) - self.p
        return np.stack([d @ self.x1, d @ self.x2], axis=-1)

    def to_world(self, uv):
        uv = np.asarray(uv, float)
        return self.p + uv[..., :1] * self.x1 + uv[..., 1:2] * self.x2


@dataclass(frozen=True, eq=False)
class SectionProfile:
    """A plane section described by its boundary ``r(phi)`` about a pole.

    Local coordinates ``(u, v)`` are taken along ``plane.x1, plane.x2`` with
    origin at ``plane.p``.  ``Iu`` integrates ``v^2`` and ``Iv`` integrates
    ``u^2``, both about centroidal axes; ``Iuv`` integrates ``u v``.
    """

    plane: SectionPlane
    pole: np.ndarray
    phi: np.ndarray
    r: np.ndarray
    area: float
    centroid: np.ndarray
    local_centroid: np.ndarray
    Iu: float
    Iv: float
    Iuv: float
    perimeter: float
    boundary_line_centroid: np.ndarray

    @property
    def pole_uv(self):
        return self.plane.to_local(self.pole)

    def boundary_uv(self):
        """Boundary samples in local coordinates, shape ``(M, 2)``."""
        c = self.pole_uv
        return np.column_stack([c[0] + self.r * np.cos(self.phi), c[1] + self.r * np.sin(self.phi)])

    def to_csv(self, path):
        uv = self.boundary_uv()
        with open(path, "w", newline="") as fh:
            fh.write(f"# area={self.area!r}\n")
            fh.write(f"# centroid={','.join(repr(float(x)) for x in self.centroid)}\n")
            fh.write(f"# local_centroid={','.join(repr(float(x)) for x in self.local_centroid)}\n")
            fh.write(f"# Iu={self.Iu!r}\n# Iv={self.Iv!r}\n# Iuv={self.Iuv!r}\n")
            fh.write(f"# perimeter={self.perimeter!r}\n")
            fh.write(f"# boundary_line_centroid={','.join(repr(float(x)) for x in self.boundary_line_centroid)}\n")
            w = csv.writer(fh)
            w.writerow(["phi", "r", "u", "v"])
            for row in zip(self.phi, self.r, uv[:, 0], uv[:, 1]):
                w.writerow([repr(float(x)) for x in row])


def read_section_csv(path):
    """Parse a section CSV into ``(summary dict, table)``; table columns phi, r, u, v."""
    summary, rows = {}, []
    with open(path) as fh:
        for line in fh:
            if line.startswith("#"):
                key, val = line[1:].strip().split("=", 1)
                vals = [float(x) for x in val.split(",")]
                summary[key] = vals[0] if len(vals) == 1 else np.array(vals)
            elif line.startswith("phi"):
                continue
            elif line.strip():
                rows.append([float(x) for x in line.split(",")])
    return summary, np.array(rows)


def _spectral_derivative(r):
    """d r / d phi for samples on a uniform periodic grid over [0, 2 pi)."""
    M = r.shape[-1]
    k = np.fft.rfftfreq(M, 1.0 / M)
    if M % 2 == 0:
        k[-1] = 0.0
    return np.fft.irfft(1j * k * np.fft.rfft(r, axis=-1), n=M, axis=-1)


def polar_moments(r, phi):
    """Area, centroid and pole-based second moments from polar radii.

    ``r`` may be batched along leading axes.  Returns a dict of arrays with
    keys area, cu, cv (centroid relative to the pole), Juu, Jvv, Juv
    (moments about the pole), perimeter, lu, lv (line centroid relative to
    the pole).
    """
    M = phi.size
    dphi = 2.0 * np.pi / M
    c, s = np.cos(phi), np.sin(phi)
    r2, r3, r4 = r ** 2, r ** 3, r ** 4
    area = 0.5 * r2.sum(-1) * dphi
    safe = np.where(area > 0, area, 1.0)
    cu = np.where(area > 0, (r3 @ c) * dphi / 3.0 / safe, 0.0)
    cv = np.where(area > 0, (r3 @ s) * dphi / 3.0 / safe, 0.0)
    Juu = (r4 @ (c * c)) * dphi / 4.0
    Jvv = (r4 @ (s * s)) * dphi / 4.0
    Juv = (r4 @ (c * s)) * dphi / 4.0
    ds = np.sqrt(r2 + _spectral_derivative(r) ** 2) * dphi
    perim = ds.sum(-1)
    safeL = np.where(perim > 0, perim, 1.0)
    lu = np.where(perim > 0, ((r * ds) @ c) / safeL, 0.0)
    lv = np.where(perim > 0, ((r * ds) @ s) / safeL, 0.0)
    return dict(area=area, cu=cu, cv=cv, Juu=Juu, Jvv=Jvv, Juv=Juv, perimeter=perim, lu=lu, lv=lv)


def profile_from_polar(plane, pole, r, phi=None):
    """Assemble a :class:`SectionProfile` from radii sampled about ``pole``."""
    r = np.asarray(r, float)
    if phi is None:
        phi = 2.0 * np.pi * np.arange(r.size) / r.size
    pole = np.asarray(pole, float)
    m = polar_moments(r, phi)
    area = float(m["area"])
    pu, pv = plane.to_local(pole)
    cu, cv = float(m["cu"]), float(m["cv"])
    Iv = float(m["Juu"]) - area * cu * cu
    Iu = float(m["Jvv"]) - area * cv * cv
    Iuv = float(m["Juv"]) - area * cu * cv
    local = np.array([pu + cu, pv + cv])
    line = np.array([pu + float(m["lu"]), pv + float(m["lv"])])
    return SectionProfile(plane, pole, phi, r, area, plane.to_world(local), local, Iu, Iv, Iuv,
                          float(m["perimeter"]), line)


def empty_profile(plane):
    z2 = np.zeros(2)
    return SectionProfile(plane, plane.p.copy(), np.zeros(0), np.zeros(0), 0.0, plane.p.copy(), z2,
                          0.0, 0.0, 0.0, 0.0, z2.copy())


def planar_profile(plane, radius_fn, center_uv=(0.0, 0.0), M=256):
    """Section given by a polar boundary ``radius_fn(phi)`` about ``center_uv``.

    Used for solids defined slice by slice rather than by an implicit body.
    """
    phi = 2.0 * np.pi * np.arange(M) / M
    pole = plane.to_world(np.asarray(center_uv, float))
    return profile_from_polar(plane, pole, np.asarray(radius_fn(phi), float) * np.ones(M), phi)


def disk_profile(plane, radius, center_uv=(0.0, 0.0), M=256):
    return planar_profile(plane, lambda phi: np.full_like(phi, radius), center_uv, M)


def ellipse_profile(plane, a, b, angle=0.0, center_uv=(0.0, 0.0), M=256):
    """Ellipse with semi-axes ``a`` (rotated by ``angle`` from ``x1``) and ``b``."""
    def radius(phi):
        t = phi - angle
        return 1.0 / np.sqrt((np.cos(t) / a) ** 2 + (np.sin(t) / b) ** 2)
    return planar_profile(plane, radius, center_uv, M)


def _find_pole(body, plane):
    hint = body.interior_hint
    q = hint - ((hint - plane.p) @ plane.n) * plane.n
    if body.F(q) < 0:
        return q
    R = body.bounding_radius
    ang = 2.0 * np.pi * np.arange(32) / 32
    dirs = np.cos(ang)[:, None] * plane.x1 + np.sin(ang)[:, None] * plane.x2
    t = 2.0 * R * np.arange(1, 65) / 64
    pts = q + t[None, :, None] * dirs[:, None, :]
    Fv = body.F(pts)
    inside = Fv < 0
    if inside.any():
        i, j = np.unravel_index(np.argmin(np.where(inside, Fv, np.inf)), Fv.shape)
        return pts[i, j]
    # the chord between the two support points meets every slice strictly inside
    lo, hi = body.support_point(-plane.n), body.support_point(plane.n)
    zlo, zhi = (lo - plane.p) @ plane.n, (hi - plane.p) @ plane.n
    if zlo < 0 < zhi:
        cand = lo + (-zlo / (zhi - zlo)) * (hi - lo)
        if body.F(cand) < 0:
            return cand
    return None


def cross_section(body, plane, M=256, pole=None, recenter=True):
    """Section of ``body`` by ``plane`` in polar form.

    The boundary is sampled along ``M`` equally spaced rays from an interior
    pole; with ``recenter`` the pole is then moved to the computed centroid
    and the boundary resampled.  Empty or tangent sections return a profile
    with zero area.
    """
    if M < 16 or M % 2:
        raise ValueError("M must be an even number >= 16")
    if pole is None:
        pole = _find_pole(body, plane)
        if pole is None:
            return empty_profile(plane)
    pole = np.asarray(pole, float)
    phi = 2.0 * np.pi * np.arange(M) / M
    dirs = np.cos(phi)[:, None] * plane.x1 + np.sin(phi)[:, None] * plane.x2
    r = _ray_batch(body, np.broadcast_to(pole, dirs.shape), dirs)
    prof = profile_from_polar(plane, pole, r, phi)
    if recenter and body.F(prof.centroid) < 0:
        r = _ray_batch(body, np.broadcast_to(prof.centroid, dirs.shape), dirs)
        prof = profile_from_polar(plane, prof.centroid, r, phi)
    return prof


def _slice_areas(body, n, p, x1, x2, z, lo, hi, M):
    """Areas of the slices ``<x - p, n> = z`` (batched), poles on the chord lo-hi."""
    z = np.asarray(z, float)
    zlo, zhi = (lo - p) @ n, (hi - p) @ n
    frac = np.clip((z - zlo) / (zhi - zlo), 0.0, 1.0)
    poles = lo + frac[:, None] * (hi - lo)
    # keep poles on their slice plane (the chord need not be parallel to n)
    poles = poles + (z - (poles - p) @ n)[:, None] * n
    phi = 2.0 * np.pi * np.arange(M) / M
    dirs = np.cos(phi)[:, None] * x1 + np.sin(phi)[:, None] * x2
    ok = body.F(poles) < 0
    area = np.zeros(z.shape)
    if not ok.any():
        return area
    P = poles[ok]
    r = _ray_batch(body, np.broadcast_to(P[:, None, :], (P.shape[0], M, 3)),
                   np.broadcast_to(dirs, (P.shape[0], M, 3)))
    m = polar_moments(r, phi)
    C = P + m["cu"][:, None] * x1 + m["cv"][:, None] * x2
    good = body.F(C) < 0
    if good.any():
        r2 = _ray_batch(body, np.broadcast_to(C[good][:, None, :], (good.sum(), M, 3)),
                        np.broadcast_to(dirs, (good.sum(), M, 3)))
        a2 = polar_moments(r2, phi)["area"]
        a = m["area"].copy()
        a[good] = a2
    else:
        a = m["area"]
    area[ok] = a
    return area


def halfspace_volume(body, n, p, rtol=1e-9, M=128, method="quadrature"):
    """Volume of ``{x in K : <x - p, n> <= 0}``.

    ``method="quadrature"`` integrates slice areas with adaptive
    Gauss-Legendre panels; ``"analytic"`` uses the closed form for balls and
    ellipsoids; ``"auto"`` picks the closed form when available.
    """
    n = np.asarray(n, float)
    n = n / np.linalg.norm(n)
    p = np.asarray(p, float)
    if method == "auto":
        method = "analytic" if body.is_quadric else "quadrature"
    if method == "analytic":
        return segment_oracle(body, n, p)[0]
    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}")
    lo, hi = body.support_point(-n), body.support_point(n)
    zlo, zhi = (lo - p) @ n, (hi - p) @ n
    if zlo >= 0:
        return 0.0
    x1 = np.cross(n, np.eye(3)[np.argmin(np.abs(n))])
    x1 /= np.linalg.norm(x1)
    x2 = np.cross(n, x1)
    top = min(0.0, zhi)
    f = lambda z: _slice_areas(body, n, p, x1, x2, z, lo, hi, M)
    val, _ = quadrature.adaptive(f, zlo, top, rtol=rtol, atol=1e-15 * body.bounding_radius ** 3)
    return float(val)


def segment_oracle(body, n, p):
    """Closed-form ``(V, A, c)`` for the cut through ``p`` with normal ``n``.

    Only for balls and ellipsoids: the body is the image of the unit ball
    under ``x = m + D y`` and the plane maps to ``<y, e> = d`` with
    ``e = D n / |D n|`` and ``d = <p - m, n> / |D n|``.
    """
    if not body.is_quadric:
        raise BodyError("closed-form segments need a ball or ellipsoid")
    D = body.params["semi_axes"]
    m = body.params["center"]
    n = np.asarray(n, float)
    Dn = D * n
    norm = np.sqrt(Dn @ Dn)
    d = ((np.asarray(p, float) - m) @ n) / norm
    det = D[0] * D[1] * D[2]
    if d <= -1.0:
        return 0.0, 0.0, m + d * D * Dn / norm
    if d >= 1.0:
        return 4.0 * np.pi * det / 3.0, 0.0, m + d * D * Dn / norm
    V = det * np.pi * (1.0 + d) ** 2 * (2.0 - d) / 3.0
    A = np.pi * (1.0 - d) * (1.0 + d) * det / norm
    c = m + d * D * Dn / norm
    return float(V), float(A), c


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------


def _box_for(target, box):
    if isinstance(target, ConvexBody):
        pred = lambda x: target.F(x) <= 0
        if box is None:
            R = target.bounding_radius
            box = (target.interior_hint - R, target.interior_hint + R)
    else:
        pred = target
        if box is None:
            raise ValueError("a bounding box is required for a bare predicate")
    lo, hi = (np.asarray(b, float) for b in box)
    return pred, lo, hi


def _mc_chunks(N, seed, chunk):
    if N <= 0:
        raise ValueError("N must be positive")
    nchunks = -(-N // chunk)
    streams = np.random.SeedSequence(seed).spawn(nchunks)
    for k, ss in enumerate(streams):
        yield np.random.Generator(np.random.Philox(ss)), min(chunk, N - k * chunk)


def monte_carlo_volume(target, N, seed=0, box=None, chunk=1_000_000):
    """Rejection-sampling volume estimate.

    ``target`` is a :class:`ConvexBody` or a vectorized predicate
    ``x -> bool`` (then ``box=(lo, hi)`` is required).  Chunks draw from
    independent Philox substreams, so the result depends only on ``seed``,
    ``N`` and ``chunk``.

    Returns
    -------
    (float, float)
        Estimate and standard error ``box_volume * sqrt(p (1 - p) / N)``.
    """
    pred, lo, hi = _box_for(target, box)
    box_vol = float(np.prod(hi - lo))
    hits = 0
    for rng, n in _mc_chunks(N, seed, chunk):
        x = lo + (hi - lo) * rng.random((n, 3))
        hits += int(np.count_nonzero(pred(x)))
    frac = hits / N
    return box_vol * frac, box_vol * np.sqrt(frac * (1.0 - frac) / N)


def monte_carlo_centroid(target, N, seed=0, box=None, chunk=1_000_000):
    """Sample-mean centroid of accepted points and its per-axis standard error."""
    pred, lo, hi = _box_for(target, box)
    count = 0
    s1 = np.zeros(3)
    s2 = np.zeros(3)
    for rng, n in _mc_chunks(N, seed, chunk):
        x = lo + (hi - lo) * rng.random((n, 3))
        acc = x[pred(x)]
        count += len(acc)
        s1 += acc.sum(axis=0)
        s2 += (acc ** 2).sum(axis=0)
    if count < 2:
        raise ValueError("too few accepted samples")
    mean = s1 / count
    var = s2 / count - mean ** 2
    return mean, np.sqrt(var / count)
