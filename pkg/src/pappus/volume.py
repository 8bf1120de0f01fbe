"""Volumes and centroids of solids sliced perpendicular to a ribbon.

With slices ``Gamma(s)`` in the planes through ``gamma(s)`` normal to
``T(s)`` and local coordinates ``(u, v)`` along ``(N, B)``,

    vol(K) = int A(s) (1 - (ubar kn - vbar kg)) ds

provided the map ``(s, u, v) -> gamma + u N + v B`` is an
orientation-preserving diffeomorphism.  Only the pointwise Jacobian
condition ``1 - u kn + v kg > 0`` is checked; global injectivity is the
caller's responsibility.

A slice only has to provide ``area``, ``local_centroid``, ``Iu``, ``Iv``,
``Iuv``, ``perimeter`` and ``boundary_uv()``; :class:`pappus.body.SectionProfile`
and :class:`pappus.rod.Profile` both do.
"""

import csv
from dataclasses import dataclass

import numpy as np

from . import quadrature
from .body import SectionPlane, cross_section


class DiffeoError(ValueError):
    """The Jacobian condition ``1 - u kn + v kg > 0`` fails somewhere."""

    def __init__(self, report):
        s, u, v = report.where
        super().__init__(f"condition (3): 1-u*kn+v*kg = {report.margin:.6g} <= 0 "
                         f"at s={s:.6g}, u={u:.6g}, v={v:.6g}")
        self.report = report


class NotCentroidCurveError(ValueError):
    pass


@dataclass(frozen=True)
class DiffeoReport:
    ok: bool
    margin: float
    where: tuple


@dataclass(frozen=True, eq=False)
class SliceSeries:
    """Slices of a solid at quadrature nodes along a ribbon."""

    ribbon: object
    s: np.ndarray
    weights: np.ndarray
    sections: tuple

    @classmethod
    def from_sections(cls, ribbon, section, panels=64, order=4):
        """Build from ``section(s, plane) -> slice`` at composite Gauss-Legendre nodes.

        ``plane`` passes through ``gamma(s)`` with normal ``T`` and in-plane
        axes ``(N, B)``.
        """
        s, w = quadrature.composite_nodes(0.0, ribbon.length, panels, order)
        planes = slice_planes(ribbon, s)
        return cls(ribbon, s, w, tuple(section(si, pl) for si, pl in zip(s, planes)))

    @classmethod
    def from_body(cls, ribbon, body, panels=64, order=4, M=256):
        """Cross-sections of a :class:`~pappus.body.ConvexBody` along ``ribbon``."""
        return cls.from_sections(ribbon, lambda s, plane: cross_section(body, plane, M), panels, order)

    def _field(self, name):
        return np.array([getattr(sec, name) for sec in self.sections], dtype=float)

    @property
    def area(self):
        return self._field("area")

    @property
    def local_centroids(self):
        return np.array([sec.local_centroid for sec in self.sections], dtype=float).reshape(-1, 2)

    @property
    def Iu(self):
        return self._field("Iu")

    @property
    def Iv(self):
        return self._field("Iv")

    @property
    def Iuv(self):
        return self._field("Iuv")

    @property
    def perimeter(self):
        return self._field("perimeter")

    def curvatures(self):
        kn, kg, tg = self.ribbon.curvatures(self.s)
        ones = np.ones_like(self.s)
        return kn * ones, kg * ones, tg * ones

    CSV_COLUMNS = ["s", "A", "u_bar", "v_bar", "kn", "kg", "Iu", "Iv", "Iuv", "L"]

    def table(self):
        kn, kg, _ = self.curvatures()
        c = self.local_centroids
        return np.column_stack([self.s, self.area, c[:, 0], c[:, 1], kn, kg,
                                self.Iu, self.Iv, self.Iuv, self.perimeter])

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(self.CSV_COLUMNS)
            for row in self.table():
                w.writerow([repr(float(x)) for x in row])


def read_slices_csv(path):
    """Parse a slice-series CSV into a dict of column arrays."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        data = np.array([[float(x) for x in row] for row in reader]).reshape(-1, len(header))
    return {name: data[:, k] for k, name in enumerate(header)}


def slice_planes(ribbon, s):
    T, N, _ = ribbon.frame(np.asarray(s, float))
    P = ribbon.point(np.asarray(s, float))
    return [SectionPlane.through(P[k], T[k], N[k]) for k in range(len(P))]


def check_diffeo(series):
    """Evaluate ``1 - u kn + v kg`` on every boundary sample of every slice."""
    kn, kg, _ = series.curvatures()
    worst = (1.0, (float(series.s[0]) if len(series.s) else 0.0, 0.0, 0.0))
    for k, sec in enumerate(series.sections):
        if sec.area <= 0:
            continue
        uv = sec.boundary_uv()
        margin = 1.0 - uv[:, 0] * kn[k] + uv[:, 1] * kg[k]
        i = int(np.argmin(margin))
        if margin[i] < worst[0]:
            worst = (float(margin[i]), (float(series.s[k]), float(uv[i, 0]), float(uv[i, 1])))
    return DiffeoReport(worst[0] > 0, worst[0], worst[1])


def pappus_integrand(series, ubar=None, vbar=None):
    """``A (1 - (ubar kn - vbar kg))`` at the nodes; centroids may be overridden."""
    kn, kg, _ = series.curvatures()
    c = series.local_centroids
    u = c[:, 0] if ubar is None else np.asarray(ubar, float)
    v = c[:, 1] if vbar is None else np.asarray(vbar, float)
    return series.area * (1.0 - (u * kn - v * kg))


def pappus_volume(series, check=True):
    """Volume of the sliced solid from areas and slice centroids."""
    if check:
        report = check_diffeo(series)
        if not report.ok:
            raise DiffeoError(report)
    return float(np.sum(series.weights * pappus_integrand(series)))


def centroid_curve_volume(ribbon, area, rtol=1e-12):
    """``int A(s) ds`` along a centroid curve, by adaptive quadrature.

    ``area`` is a callable ``s -> A``; it is called with arrays when it
    accepts them and element-wise otherwise.
    """
    def f(s):
        try:
            out = np.asarray(area(s), float)
            if out.shape == np.shape(s):
                return out
        except (TypeError, ValueError):
            pass
        return np.array([float(area(x)) for x in s])

    val, _ = quadrature.adaptive(f, 0.0, ribbon.length, rtol=rtol, atol=1e-300, order=10,
                                 initial_panels=16)
    return float(val)


def body_centroid_along_ribbon(series, symmetric=False, tol=1e-6):
    """Centroid of the solid from slice moments along a centroid curve.

    Integrates ``A gamma - Iv kn N + Iu kg B + Iuv (kg N - kn B)``
    and divides by ``int A ds``.  With ``symmetric=True`` the product
    moments are asserted to vanish.

    Raises
    ------
    NotCentroidCurveError
        If some slice centroid is off the curve by more than ``tol * sqrt(A)``.
    DiffeoError
        If the Jacobian condition fails.
    """
    A = series.area
    c = series.local_centroids
    off = np.hypot(c[:, 0], c[:, 1])
    bad = (A > 0) & (off > tol * np.sqrt(np.maximum(A, 0.0)))
    if bad.any():
        k = int(np.flatnonzero(bad)[0])
        raise NotCentroidCurveError(f"slice centroid off the curve by {off[k]:.3g} at s={series.s[k]:.6g}; "
                                    "the centroid formula needs a centroid curve")
    report = check_diffeo(series)
    if not report.ok:
        raise DiffeoError(report)
    Iu, Iv, Iuv = series.Iu, series.Iv, series.Iuv
    if symmetric and np.any(np.abs(Iuv) > tol * (Iu + Iv)):
        raise ValueError("slices declared symmetric but the product moment does not vanish")
    kn, kg, _ = series.curvatures()
    _, N, B = series.ribbon.frame(series.s)
    gam = series.ribbon.point(series.s)
    integrand = (A[:, None] * gam - (Iv * kn)[:, None] * N + (Iu * kg)[:, None] * B
                 + Iuv[:, None] * (kg[:, None] * N - kn[:, None] * B))
    vol = np.sum(series.weights * A)
    return np.tensordot(series.weights, integrand, axes=(0, 0)) / vol
