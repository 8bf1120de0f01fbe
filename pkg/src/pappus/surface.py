"""Lower bound for the lateral surface area of a sliced solid.

The boundary is ``p(s, t) = gamma(s) + u(s, t) N(s) + v(s, t) B(s)`` with
``t`` periodic.  Dropping the tangential part of ``p_s x p_t`` gives

    area >= int L(s) (1 - (ubar_L kn - vbar_L kg)) ds

where ``L(s)`` is the perimeter of the slice boundary and
``(ubar_L, vbar_L)`` the centroid of the boundary *line* (not of the
slice area).  The bound is tight iff
``(u_s - tg v) v_t - (v_s + tg u) u_t`` vanishes identically.
End caps of open tubes are not included.
"""

import csv
from dataclasses import dataclass

import numpy as np

from . import quadrature
from .volume import DiffeoError, DiffeoReport


def _periodic_derivative(f, period, axis=-1):
    M = f.shape[axis]
    k = np.fft.rfftfreq(M, period / M) * 2.0 * np.pi
    if M % 2 == 0:
        k[-1] = 0.0
    shape = [1] * f.ndim
    shape[axis] = -1
    return np.fft.irfft(1j * k.reshape(shape) * np.fft.rfft(f, axis=axis), n=M, axis=axis)


@dataclass(frozen=True, eq=False)
class BoundaryTrace:
    """Boundary curves of the slices on an ``(s, t)`` grid.

    ``u`` and ``v`` have shape ``(len(s), len(t))``; ``t`` is uniform on
    ``[0, period)``.  ``s_weights`` are quadrature weights for integrals
    over ``s``.
    """

    ribbon: object
    s: np.ndarray
    t: np.ndarray
    u: np.ndarray
    v: np.ndarray
    period: float
    s_weights: np.ndarray

    @classmethod
    def from_function(cls, ribbon, uv, M=256, panels=32, order=4, period=2 * np.pi, nodes="gauss", ns=None):
        """Sample ``uv(s, t) -> (u, v)`` (broadcasting) on Gauss-Legendre or uniform ``s`` nodes."""
        if nodes == "gauss":
            s, w = quadrature.composite_nodes(0.0, ribbon.length, panels, order)
        elif nodes == "uniform":
            ns = ns or panels * order + 1
            s = np.linspace(0.0, ribbon.length, ns)
            w = _trapezoid_weights(s)
        else:
            raise ValueError(f"unknown node type {nodes!r}")
        t = period * np.arange(M) / M
        u, v = uv(s[:, None], t[None, :])
        shape = (len(s), M)
        return cls(ribbon, s, t, np.broadcast_to(u, shape).astype(float),
                   np.broadcast_to(v, shape).astype(float), float(period), w)

    @classmethod
    def from_slices(cls, series):
        """Boundaries of the cross-sections in a :class:`~pappus.volume.SliceSeries` (``t = phi``)."""
        uv = np.array([sec.boundary_uv() for sec in series.sections])
        M = uv.shape[1]
        return cls(series.ribbon, series.s, 2 * np.pi * np.arange(M) / M, uv[:, :, 0], uv[:, :, 1],
                   2 * np.pi, series.weights)

    def simple(self):
        """No self-intersection of each boundary polygon at sample resolution."""
        from .rod import _segments_cross
        for k in range(len(self.s)):
            P = np.column_stack([self.u[k], self.v[k]])
            n = len(P)
            # cheap screen: the polygon's signed area must match its absolute area
            x, y = P[:, 0], P[:, 1]
            a = 0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)
            if abs(a) == 0:
                return False
            for i in range(0, n, max(1, n // 64)):
                for j in range(i + 2, n):
                    if i == 0 and j == n - 1:
                        continue
                    if _segments_cross(P[i], P[(i + 1) % n], P[j], P[(j + 1) % n]):
                        return False
        return True

    CSV_COLUMNS = ["s", "t", "u", "v"]

    def to_csv(self, path):
        S, Tt = np.meshgrid(self.s, self.t, indexing="ij")
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(self.CSV_COLUMNS)
            for row in zip(S.ravel(), Tt.ravel(), self.u.ravel(), self.v.ravel()):
                w.writerow([repr(float(x)) for x in row])

    @classmethod
    def from_csv(cls, path, ribbon, period=2 * np.pi, s_weights=None):
        """Read an ``(s, t, u, v)`` grid; ``s`` weights default to the trapezoid rule."""
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            if [h.strip() for h in header] != cls.CSV_COLUMNS:
                raise ValueError(f"unexpected boundary CSV header: {header}")
            data = np.array([[float(x) for x in row] for row in reader])
        s = np.unique(data[:, 0])
        t = np.unique(data[:, 1])
        order = np.lexsort((data[:, 1], data[:, 0]))
        data = data[order]
        u = data[:, 2].reshape(len(s), len(t))
        v = data[:, 3].reshape(len(s), len(t))
        w = _trapezoid_weights(s) if s_weights is None else np.asarray(s_weights, float)
        return cls(ribbon, s, t, u, v, float(period), w)


def _trapezoid_weights(s):
    w = np.zeros_like(s)
    d = np.diff(s)
    w[:-1] += d / 2
    w[1:] += d / 2
    return w


def _line_stats(trace):
    ut = _periodic_derivative(trace.u, trace.period)
    vt = _periodic_derivative(trace.v, trace.period)
    speed = np.hypot(ut, vt)
    dt = trace.period / trace.t.size
    L = speed.sum(axis=1) * dt
    safe = np.where(L > 0, L, 1.0)
    ubar = (trace.u * speed).sum(axis=1) * dt / safe
    vbar = (trace.v * speed).sum(axis=1) * dt / safe
    return L, ubar, vbar, ut, vt


def boundary_line_stats(trace, k):
    """Perimeter and line centroid ``(L, ubar_L, vbar_L)`` of the boundary at ``s[k]``."""
    L, ubar, vbar, _, _ = _line_stats(trace)
    if L[k] < 1e-12:
        raise ValueError(f"degenerate boundary curve at s={trace.s[k]:.6g}")
    return float(L[k]), float(ubar[k]), float(vbar[k])


def _curvatures(trace):
    kn, kg, tg = trace.ribbon.curvatures(trace.s)
    ones = np.ones_like(trace.s)
    return kn * ones, kg * ones, tg * ones


def area_lower_bound(trace):
    """``int L (1 - (ubar_L kn - vbar_L kg)) ds`` over the trace.

    Raises
    ------
    DiffeoError
        If ``1 - u kn + v kg <= 0`` at some boundary sample.
    """
    kn, kg, _ = _curvatures(trace)
    margin = 1.0 - trace.u * kn[:, None] + trace.v * kg[:, None]
    i, j = np.unravel_index(np.argmin(margin), margin.shape)
    if margin[i, j] <= 0:
        raise DiffeoError(DiffeoReport(False, float(margin[i, j]),
                                       (float(trace.s[i]), float(trace.u[i, j]), float(trace.v[i, j]))))
    L, ubar, vbar, _, _ = _line_stats(trace)
    return float(np.sum(trace.s_weights * L * (1.0 - (ubar * kn - vbar * kg))))


def equality_defect(trace):
    """Largest normalized ``|(u_s - tg v) v_t - (v_s + tg u) u_t|`` on the grid.

    Each row is divided by ``L(s) * max_t |(u_t, v_t)|``; zero means the
    lower bound is attained.
    """
    _, _, tg = _curvatures(trace)
    L, _, _, ut, vt = _line_stats(trace)
    us = np.gradient(trace.u, trace.s, axis=0, edge_order=2)
    vs = np.gradient(trace.v, trace.s, axis=0, edge_order=2)
    D = (us - tg[:, None] * trace.v) * vt - (vs + tg[:, None] * trace.u) * ut
    scale = L * np.max(np.hypot(ut, vt), axis=1)
    return float(np.max(np.abs(D).max(axis=1) / np.where(scale > 0, scale, np.inf)))


def swept_mesh_area(ribbon, uv, ns, nt, period=2 * np.pi):
    """Area of the triangulated surface on a uniform ``ns x nt`` grid (``t`` periodic)."""
    s = np.linspace(0.0, ribbon.length, ns)
    t = period * np.arange(nt) / nt
    u, v = uv(s[:, None], t[None, :])
    u = np.broadcast_to(u, (ns, nt))
    v = np.broadcast_to(v, (ns, nt))
    _, N, B = ribbon.frame(s)
    P = ribbon.point(s)[:, None, :] + u[..., None] * N[:, None, :] + v[..., None] * B[:, None, :]
    Q = np.concatenate([P, P[:, :1]], axis=1)
    a, b = Q[:-1, :-1], Q[1:, :-1]
    c, d = Q[1:, 1:], Q[:-1, 1:]
    t1 = 0.5 * np.linalg.norm(np.cross(b - a, c - a), axis=-1)
    t2 = 0.5 * np.linalg.norm(np.cross(c - a, d - a), axis=-1)
    return float(t1.sum() + t2.sum())


def refined_mesh_area(ribbon, uv, ns=32, nt=32, rtol=1e-6, max_levels=8, period=2 * np.pi):
    """Mesh area with grid doubling and Richardson extrapolation.

    Returns ``(area, relative change of the last two extrapolations)``.
    """
    prev_raw = swept_mesh_area(ribbon, uv, ns, nt, period)
    prev_ext = None
    change = np.inf
    for _ in range(max_levels):
        ns, nt = 2 * ns - 1, 2 * nt
        raw = swept_mesh_area(ribbon, uv, ns, nt, period)
        ext = raw + (raw - prev_raw) / 3.0
        if prev_ext is not None:
            change = abs(ext - prev_ext) / abs(ext)
            if change < rtol:
                return ext, change
        prev_raw, prev_ext = raw, ext
    return prev_ext, change
