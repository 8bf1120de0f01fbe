"""Centroids of bent rods.

A rod is a planar profile ``D0`` (centroid at the origin of the
``(u, v)`` plane) carried along a ribbon with zero geodesic curvature:
``K = {gamma(s) + u N(s) + v B(s) : (u, v) in D0}``.  If the profile is
mirror symmetric and ``|u| max|kn| < 1`` on it, then

    vol(K) = A L,    c(K) = c(gamma) + Iv / (A L) * (T(0) - T(L))

with ``Iv`` the second moment of ``u^2`` over the profile.
"""

import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from .frames import SampledRibbon, CircleRibbon, ribbon_from_spec


class RodConditionError(ValueError):
    pass


class ProfileError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Profile:
    """Rod cross-section in centroidal coordinates.

    ``Iu`` integrates ``v^2``, ``Iv`` integrates ``u^2`` and ``Iuv``
    integrates ``u v``.  ``symmetry`` is a tuple drawn from
    ``("u-axis", "v-axis")``; ``extent`` is ``max |u|`` and ``extent_pos``
    is ``max u``.
    """

    shape: str
    params: dict
    area: float
    Iu: float
    Iv: float
    Iuv: float
    symmetry: tuple
    extent: float
    extent_pos: float
    perimeter: float
    vertices: np.ndarray = field(default=None, repr=False)

    @property
    def local_centroid(self):
        return np.zeros(2)

    def boundary_uv(self, M=256):
        t = 2.0 * np.pi * np.arange(M) / M
        if self.shape == "disk":
            r = self.params["r"]
            return np.column_stack([r * np.cos(t), r * np.sin(t)])
        if self.shape == "ellipse":
            return np.column_stack([self.params["a"] * np.cos(t), self.params["b"] * np.sin(t)])
        V = self.vertices
        # vertices plus evenly spread points along the edges
        per_edge = max(1, M // len(V))
        f = np.arange(per_edge) / per_edge
        W = np.roll(V, -1, axis=0)
        return (V[:, None, :] + f[None, :, None] * (W - V)[:, None, :]).reshape(-1, 2)

    def contains(self, uv):
        """Vectorized membership test for points ``(..., 2)``."""
        uv = np.asarray(uv, float)
        u, v = uv[..., 0], uv[..., 1]
        if self.shape == "disk":
            return u * u + v * v <= self.params["r"] ** 2
        if self.shape == "ellipse":
            return (u / self.params["a"]) ** 2 + (v / self.params["b"]) ** 2 <= 1.0
        inside = np.zeros(u.shape, bool)
        V = self.vertices
        for (x0, y0), (x1, y1) in zip(V, np.roll(V, -1, axis=0)):
            crosses = (y0 > v) != (y1 > v)
            with np.errstate(divide="ignore", invalid="ignore"):
                xint = x0 + (v - y0) * (x1 - x0) / (y1 - y0)
            inside ^= crosses & (u < xint)
        return inside

    def to_spec(self):
        if self.shape == "polygon":
            return {"type": "polygon", "vertices": self.vertices.tolist()}
        return {"type": self.shape, **self.params}


def disk(r):
    r = float(r)
    A = np.pi * r * r
    I = np.pi * r ** 4 / 4.0
    return Profile("disk", {"r": r}, A, I, I, 0.0, ("u-axis", "v-axis"), r, r, 2 * np.pi * r)


def ellipse(a, b):
    """Ellipse with semi-axis ``a`` along ``u`` and ``b`` along ``v``."""
    a, b = float(a), float(b)
    A = np.pi * a * b
    h = ((a - b) / (a + b)) ** 2
    perim = np.pi * (a + b) * (1 + 3 * h / (10 + np.sqrt(4 - 3 * h)))
    return Profile("ellipse", {"a": a, "b": b}, A, np.pi * a * b ** 3 / 4.0, np.pi * a ** 3 * b / 4.0, 0.0,
                   ("u-axis", "v-axis"), a, a, perim)


def rectangle(w, h):
    """Rectangle of width ``w`` along ``u`` and height ``h`` along ``v``."""
    w, h = float(w), float(h)
    V = np.array([[-w / 2, -h / 2], [w / 2, -h / 2], [w / 2, h / 2], [-w / 2, h / 2]])
    return Profile("rectangle", {"w": w, "h": h}, w * h, w * h ** 3 / 12.0, h * w ** 3 / 12.0, 0.0,
                   ("u-axis", "v-axis"), w / 2, w / 2, 2 * (w + h), V)


def polygon_area_moments(V):
    """Area, first moments and second moments of a counterclockwise polygon about the origin.

    Returns ``(A, Sx, Sy, Ixx, Iyy, Ixy)`` with ``Ixx = int y^2``,
    ``Iyy = int x^2`` and ``Ixy = int x y``.
    """
    x, y = V[:, 0], V[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cr = x * yn - xn * y
    A = cr.sum() / 2.0
    Sx = ((x + xn) * cr).sum() / 6.0
    Sy = ((y + yn) * cr).sum() / 6.0
    Ixx = ((y * y + y * yn + yn * yn) * cr).sum() / 12.0
    Iyy = ((x * x + x * xn + xn * xn) * cr).sum() / 12.0
    Ixy = ((x * yn + 2 * x * y + 2 * xn * yn + xn * y) * cr).sum() / 24.0
    return A, Sx, Sy, Ixx, Iyy, Ixy


def _segments_cross(p, q, r, s):
    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    d1, d2 = orient(p, q, r), orient(p, q, s)
    d3, d4 = orient(r, s, p), orient(r, s, q)
    return d1 * d2 < 0 and d3 * d4 < 0


def polygon(vertices, tol=1e-10):
    """Polygon profile, recentered on its centroid.

    Clockwise input is reversed with a warning; self-intersecting input
    raises :class:`ProfileError`.
    """
    V = np.asarray(vertices, float)
    if V.ndim != 2 or V.shape[1] != 2 or len(V) < 3:
        raise ProfileError("a polygon needs at least 3 vertices (u, v)")
    n = len(V)
    for i in range(n):
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue
            if _segments_cross(V[i], V[(i + 1) % n], V[j], V[(j + 1) % n]):
                raise ProfileError("self-intersecting polygon")
    A = polygon_area_moments(V)[0]
    if A < 0:
        warnings.warn("clockwise polygon reversed", stacklevel=2)
        V = V[::-1]
        A = -A
    if A == 0:
        raise ProfileError("degenerate polygon")
    _, Sx, Sy, _, _, _ = polygon_area_moments(V)
    V = V - np.array([Sx, Sy]) / A
    A, _, _, Ixx, Iyy, Ixy = polygon_area_moments(V)
    scale = np.sqrt(A)
    sym = []
    for name, mirror in (("u-axis", np.array([1.0, -1.0])), ("v-axis", np.array([-1.0, 1.0]))):
        W = V * mirror
        d = np.min(np.linalg.norm(V[:, None, :] - W[None, :, :], axis=2), axis=1)
        if np.all(d <= tol * max(scale, 1.0)):
            sym.append(name)
    perim = np.linalg.norm(np.roll(V, -1, axis=0) - V, axis=1).sum()
    return Profile("polygon", {}, float(A), float(Ixx), float(Iyy), float(Ixy), tuple(sym),
                   float(np.abs(V[:, 0]).max()), float(V[:, 0].max()), float(perim), V)


def profile_moments(shape):
    """Profile from a dict such as ``{"type": "rectangle", "w": 1, "h": 2}``."""
    if isinstance(shape, Profile):
        return shape
    kind = shape.get("type")
    if kind == "disk":
        return disk(shape["r"])
    if kind == "ellipse":
        return ellipse(shape["a"], shape["b"])
    if kind == "rectangle":
        return rectangle(shape["w"], shape["h"])
    if kind == "polygon":
        return polygon(shape["vertices"])
    raise ProfileError(f"unknown profile type {kind!r}")


@dataclass(frozen=True, eq=False)
class RodSpec:
    """A profile swept along a ribbon."""

    ribbon: object
    profile: Profile
    one_sided_kappa: bool = False
    samples: int = 2001
    kg_tol: float = 1e-8

    def _curvature_samples(self):
        if isinstance(self.ribbon, SampledRibbon):
            return self.ribbon.kn, self.ribbon.kg
        s = np.linspace(0.0, self.ribbon.length, self.samples)
        kn, kg, _ = self.ribbon.curvatures(s)
        return kn * np.ones_like(s), kg * np.ones_like(s)

    @property
    def mu(self):
        return float(np.max(np.abs(self._curvature_samples()[0])))

    def conditions(self):
        """Which of the rod conditions hold: geodesic ribbon, symmetric profile, no overlap."""
        kn, kg = self._curvature_samples()
        a = bool(np.max(np.abs(kg)) <= self.kg_tol)
        b = bool(self.profile.symmetry) and abs(self.profile.Iuv) <= 1e-12 * (self.profile.Iu + self.profile.Iv)
        mu = float(np.max(np.abs(kn)))
        if self.one_sided_kappa and np.all(kn > 0):
            c = self.profile.extent_pos * mu < 1.0
        else:
            c = self.profile.extent * mu < 1.0
        return {"a": a, "b": bool(b), "c": bool(c)}

    def check(self):
        cond = self.conditions()
        if not cond["a"]:
            raise RodConditionError("condition (a): the ribbon has nonzero geodesic curvature")
        if not cond["b"]:
            raise RodConditionError("condition (b): the profile is not symmetric about the u- or v-axis")
        if not cond["c"]:
            raise RodConditionError(f"condition (c): profile extent times max |kn| = "
                                    f"{self.profile.extent * self.mu:.6g} is not below 1")
        return cond

    @classmethod
    def from_spec(cls, spec):
        return cls(ribbon_from_spec(spec["curve"]), profile_moments(spec["profile"]),
                   bool(spec.get("one_sided_kappa", False)))

    @classmethod
    def from_json(cls, path):
        with open(path) as fh:
            return cls.from_spec(json.load(fh))


def arc_rod(r_bar, alpha, profile, center=(0.0, 0.0, 0.0)):
    """Rod along the arc ``r_bar (cos t, sin t, 0)``, ``t in [0, alpha]``, normal toward the axis."""
    return RodSpec(CircleRibbon(r_bar, center, alpha), profile, one_sided_kappa=True)


def bent_rod_centroid(rod, panels=64, order=4):
    """Volume ``A L`` and centroid of a bent rod.

    Raises
    ------
    RodConditionError
        Naming the first violated condition.
    """
    rod.check()
    prof, rib = rod.profile, rod.ribbon
    L = rib.length
    volume = prof.area * L
    T0 = rib.tangent(0.0)
    T1 = rib.tangent(L)
    centroid = rib.centroid(panels, order) + prof.Iv / (prof.area * L) * (T0 - T1)
    return volume, centroid


def revolution_segment_centroid(A, r_bar, I_zbar, alpha):
    """Centroid of a profile of area ``A`` revolved by ``alpha`` about the z-axis.

    The profile's centroid sits at distance ``r_bar`` from the axis on the
    x-axis; ``I_zbar`` is its second moment about its own centroidal axis
    parallel to z.  The profile must be symmetric so that its product
    moment vanishes.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if A <= 0 or r_bar <= 0:
        raise ValueError("A and r_bar must be positive")
    I_z = A * r_bar ** 2 + I_zbar
    return I_z / (A * r_bar * alpha) * np.array([np.sin(alpha), 1.0 - np.cos(alpha), 0.0])


def rod_report(rod):
    """JSON-ready dict with volume, centroid and condition flags."""
    volume, centroid = bent_rod_centroid(rod)
    return {"volume": float(volume), "centroid": [float(x) for x in centroid],
            "conditions": rod.conditions()}
