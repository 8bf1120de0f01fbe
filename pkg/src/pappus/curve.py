"""Centroid curves of convex bodies.

For an interior point ``p`` let ``V(n, p)`` be the volume cut off by the
plane through ``p`` with normal ``n`` (``n`` pointing away from the cut
piece).  Its sphere gradient is ``A(n, p) (p - c(n, p))``, so minimizers
are barycentric cuts: ``p`` is the centroid of the section.  The minimum
``v(p)`` is the volume distance of ``p``.

A centroid curve follows ``gamma' = n(gamma)``, the minimizing normal.
Along it ``delta(s) = v(gamma(s))`` increases with ``delta' = A``; going
backwards the curve runs into the boundary, which it meets orthogonally.
"""

import csv
from dataclasses import dataclass, field

import numpy as np

from .body import BodyError, SectionPlane, cross_section, halfspace_volume, segment_oracle

REACHED_BOUNDARY = "reached_boundary"
REACHED_SIGMA = "reached_sigma"
AREA_FLOOR = "area_floor"
STEP_FAILURE = "step_failure"
MAX_STEPS = "max_steps"


class CutError(RuntimeError):
    """The sphere minimization did not converge."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class TraceError(RuntimeError):
    pass


def icosahedron_directions():
    """The 12 vertices of a regular icosahedron as unit vectors, in a fixed order."""
    g = (1.0 + np.sqrt(5.0)) / 2.0
    v = []
    for a in (-1.0, 1.0):
        for b in (-g, g):
            v += [(0.0, a, b), (a, b, 0.0), (b, 0.0, a)]
    v = np.array(v)
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def _tangent_basis(n):
    e1 = np.cross(n, np.eye(3)[np.argmin(np.abs(n))])
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(n, e1)


class SegmentOracle:
    """``(V, A, c)`` of the cut through ``p`` with normal ``n``.

    ``method="analytic"`` uses the closed forms of balls and ellipsoids,
    ``"numeric"`` uses slice quadrature and polar sections, ``"auto"``
    chooses the closed form when the body has one.
    """

    def __init__(self, body, method="auto", M=256, rtol=1e-11):
        if method == "auto":
            method = "analytic" if body.is_quadric else "numeric"
        if method not in ("analytic", "numeric"):
            raise ValueError(f"unknown oracle {method!r}")
        self.body = body
        self.method = method
        self.M = M
        self.rtol = rtol
        self.evaluations = 0

    @property
    def tolerance(self):
        """Centroid residual regarded as converged."""
        scale = self.body.bounding_radius
        return (1e-15 if self.method == "analytic" else 1e-10) * scale

    def section(self, n, p):
        """``(A, c)`` only."""
        self.evaluations += 1
        if self.method == "analytic":
            _, A, c = segment_oracle(self.body, n, p)
            return A, c
        prof = cross_section(self.body, SectionPlane.through(p, n), self.M)
        return prof.area, prof.centroid

    def volume(self, n, p):
        if self.method == "analytic":
            return segment_oracle(self.body, n, p)[0]
        return halfspace_volume(self.body, n, p, rtol=self.rtol)

    def __call__(self, n, p):
        A, c = self.section(n, p)
        return self.volume(n, p), A, c


@dataclass
class _Local:
    n: np.ndarray
    V: float
    A: float
    c: np.ndarray
    residual: float
    iterations: int
    converged: bool


def _minimize_cut(oracle, p, n0, max_iter=500, fd_step=None):
    """Minimize ``V(., p)`` on the sphere from ``n0``.

    Newton steps on the centroid residual, expressed in a tangent basis,
    are tried first; a step that does not lower both the residual and
    the volume is replaced by a Riemannian gradient step with Armijo
    backtracking.
    """
    tol = oracle.tolerance
    if fd_step is None:
        fd_step = 1e-7 if oracle.method == "analytic" else 1e-5
    n = np.asarray(n0, float)
    n = n / np.linalg.norm(n)
    V, A, c = oracle(n, p)
    res = np.linalg.norm(p - c)
    stalls = 0
    for it in range(max_iter):
        if res <= tol or A <= 0:
            return _Local(n, V, A, c, res, it, A > 0)
        e1, e2 = _tangent_basis(n)
        E = np.array([e1, e2])
        r0 = E @ (c - p)
        J = np.empty((2, 2))
        for k, e in enumerate((e1, e2)):
            nk = n + fd_step * e
            nk /= np.linalg.norm(nk)
            _, ck = oracle.section(nk, p)
            J[:, k] = (E @ (ck - p) - r0) / fd_step
        accepted = False
        try:
            xi = -np.linalg.solve(J, r0)
        except np.linalg.LinAlgError:
            xi = None
        if xi is not None and np.all(np.isfinite(xi)) and np.linalg.norm(xi) < 0.5:
            n_new = n + xi @ E
            n_new /= np.linalg.norm(n_new)
            V_new, A_new, c_new = oracle(n_new, p)
            res_new = np.linalg.norm(p - c_new)
            if res_new < res and V_new <= V + 1e-12 * max(abs(V), 1e-300) + 1e-15 * oracle.body.volume:
                n, V, A, c, res = n_new, V_new, A_new, c_new, res_new
                accepted = True
        if not accepted:
            g = A * (p - c)
            gnorm2 = g @ g
            t = 0.5 / (A * np.sqrt(A))
            while t * np.sqrt(gnorm2) > 1e-18:
                n_new = n - t * g
                n_new /= np.linalg.norm(n_new)
                V_new, A_new, c_new = oracle(n_new, p)
                if V_new <= V - 1e-4 * t * gnorm2:
                    break
                t *= 0.5
            else:
                stalls += 1
                if stalls > 2:
                    return _Local(n, V, A, c, res, it, res <= 1e3 * tol)
                continue
            n, V, A, c = n_new, V_new, A_new, c_new
            res = np.linalg.norm(p - c)
    return _Local(n, V, A, c, res, max_iter, res <= tol)


@dataclass(frozen=True)
class BarycentricCut:
    """Minimizing cut through ``p``.

    ``minima`` lists every distinct local minimum found from the starts as
    ``(n, V)`` pairs (more than 5 degrees apart), best first.
    """

    p: np.ndarray
    n: np.ndarray
    delta: float
    A: float
    residual: float
    minima: tuple = ()
    certified: bool = True

    @property
    def unique(self):
        if len(self.minima) < 2:
            return True
        return self.minima[1][1] - self.minima[0][1] > 1e-9 * max(self.minima[0][1], 1e-300)


def volume_distance(body, p, starts=None, oracle="auto", max_iter=500):
    """Volume distance of ``p`` and the minimizing barycentric cut.

    The sphere is searched from the 12 icosahedral directions (or
    ``starts``); the lowest local minimum wins, ties going to the earliest
    start.

    Raises
    ------
    BodyError
        If ``p`` is not interior.
    CutError
        If no start converges.
    """
    p = np.asarray(p, float)
    if not body.F(p) < 0:
        raise BodyError("volume distance needs an interior point")
    orc = oracle if isinstance(oracle, SegmentOracle) else SegmentOracle(body, oracle)
    starts = icosahedron_directions() if starts is None else np.atleast_2d(np.asarray(starts, float))
    probe_V = [orc.volume(u / np.linalg.norm(u), p) for u in starts]
    found = [_minimize_cut(orc, p, u, max_iter) for u in starts]
    good = [f for f in found if f.converged]
    if not good:
        best = min(found, key=lambda f: f.residual)
        raise CutError(f"no start converged (best residual {best.residual:.3g})", best)
    vol = body.volume
    best = good[0]
    for f in good[1:]:
        if f.V < best.V - 1e-12 * vol:
            best = f
    cos5 = np.cos(np.radians(5.0))
    distinct = []
    for f in sorted(good, key=lambda f: f.V):
        if all(f.n @ g.n < cos5 for g in distinct):
            distinct.append(f)
    if distinct[0] is not best and best.n @ distinct[0].n < cos5:
        distinct = [best] + [f for f in distinct if f is not best]
    minima = tuple((f.n, f.V) for f in distinct)
    certified = all(best.V <= v + 1e-12 * vol for v in probe_V)
    return BarycentricCut(p, best.n, best.V, best.A, best.residual, minima, certified)


def refine_cut(body, p, n0, oracle="auto", max_iter=500):
    """Single-start cut from a nearby normal (warm start)."""
    p = np.asarray(p, float)
    orc = oracle if isinstance(oracle, SegmentOracle) else SegmentOracle(body, oracle)
    f = _minimize_cut(orc, p, n0, max_iter)
    if not f.converged:
        raise CutError(f"warm-started cut did not converge (residual {f.residual:.3g})", f)
    return BarycentricCut(p, f.n, f.V, f.A, f.residual, ((f.n, f.V),))


# ---------------------------------------------------------------------------
# tracing
# ---------------------------------------------------------------------------


@dataclass
class CentroidCurveTrace:
    """Samples of a traced centroid curve, ordered by signed arc length.

    ``n`` is the unit tangent in the direction of increasing ``delta``.
    """

    s: np.ndarray
    gamma: np.ndarray
    n: np.ndarray
    delta: np.ndarray
    A: np.ndarray
    stop_reasons: dict = field(default_factory=dict)
    messages: dict = field(default_factory=dict)

    @property
    def stop_reason(self):
        return self.stop_reasons.get("forward")

    def __len__(self):
        return len(self.s)

    def forward(self):
        keep = self.s >= 0
        return CentroidCurveTrace(self.s[keep], self.gamma[keep], self.n[keep], self.delta[keep],
                                  self.A[keep], dict(self.stop_reasons), dict(self.messages))

    CSV_COLUMNS = ["s", "x", "y", "z", "nx", "ny", "nz", "delta", "A"]

    def to_csv(self, path, two_sided=True):
        tr = self if two_sided else self.forward()
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(self.CSV_COLUMNS)
            for row in np.column_stack([tr.s, tr.gamma, tr.n, tr.delta, tr.A]) + 0.0:
                w.writerow([repr(float(x)) for x in row])

    @classmethod
    def from_csv(cls, path):
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            if header != cls.CSV_COLUMNS:
                raise ValueError(f"unexpected trace CSV header: {header}")
            t = np.array([[float(x) for x in row] for row in reader]).reshape(-1, 9)
        return cls(t[:, 0], t[:, 1:4], t[:, 4:7], t[:, 7], t[:, 8])


class _StepFailure(Exception):
    pass


class _LeftBody(Exception):
    pass


def _run(body, orc, p0, n0, delta0, A0, h, sign, limits, max_steps, basin_every):
    """Integrate ``gamma' = sign * n(gamma)`` with RK4 from ``p0``."""
    delta_min, delta_max, area_floor = limits
    P, Nn, D, Ar = [p0], [n0], [delta0], [A0]
    cos30 = np.cos(np.radians(30.0))

    def field_at(x, n_prev):
        if not body.F(x) < 0:
            raise _LeftBody()
        f = _minimize_cut(orc, x, n_prev)
        if not f.converged:
            raise _StepFailure(f"cut did not converge at {x} (residual {f.residual:.3g})")
        if f.n @ n_prev < cos30:
            raise _StepFailure(f"cut normal turned by {np.degrees(np.arccos(np.clip(f.n @ n_prev, -1, 1))):.1f} "
                               f"degrees near {x}")
        return f

    reason, message = MAX_STEPS, ""
    p, n = p0, n0
    for step in range(max_steps):
        try:
            k1 = n
            f2 = field_at(p + 0.5 * h * sign * k1, n)
            f3 = field_at(p + 0.5 * h * sign * f2.n, f2.n)
            f4 = field_at(p + h * sign * f3.n, f3.n)
            p_new = p + h * sign * (k1 + 2 * f2.n + 2 * f3.n + f4.n) / 6.0
            f = field_at(p_new, f4.n)
        except _LeftBody:
            reason = REACHED_BOUNDARY
            break
        except _StepFailure as exc:
            reason, message = STEP_FAILURE, str(exc)
            break
        stopping = sign > 0 and delta_max is not None and f.V + h * f.A >= delta_max
        if basin_every and (step + 1) % basin_every == 0 and not stopping:
            try:
                cut = volume_distance(body, p_new, oracle=orc)
            except CutError as exc:
                reason, message = STEP_FAILURE, f"basin check failed: {exc}"
                break
            if cut.n @ f.n < np.cos(np.radians(5.0)) and cut.delta < f.V - 1e-9 * body.volume:
                reason, message = STEP_FAILURE, f"warm start left the global basin near {p_new}"
                break
        if sign > 0 and not f.V > D[-1]:
            reason, message = STEP_FAILURE, f"delta not increasing at {p_new}"
            break
        if sign < 0 and not f.V < D[-1]:
            reason, message = STEP_FAILURE, f"delta not decreasing at {p_new}"
            break
        P.append(p_new)
        Nn.append(f.n)
        D.append(f.V)
        Ar.append(f.A)
        p, n = p_new, f.n
        if sign < 0 and f.V <= delta_min:
            reason = REACHED_BOUNDARY
            break
        if area_floor is not None and f.A < area_floor:
            reason = AREA_FLOOR
            break
        if stopping:
            reason = REACHED_SIGMA
            break
    return np.array(P), np.array(Nn), np.array(D), np.array(Ar), reason, message


def trace_centroid_curve(body, p0, h=None, delta_min=None, delta_max=None, area_floor=None,
                         direction="both", oracle="auto", max_steps=200_000, basin_check_every=25,
                         boundary_tol=1e-9):
    """Trace the centroid curve through ``p0`` with fixed arc-length steps.

    Every RK4 stage solves for the barycentric cut, warm-started from the
    previous stage.  Forward (``delta`` increasing) the trace stops when the
    next step could pass ``delta_max``; backward it stops at
    ``delta <= delta_min``, when a stage leaves the body, or when the
    section area drops under ``area_floor``.

    Defaults: ``h = R / 500`` with ``R`` the bounding radius;
    ``delta_max = vol / 2`` for centrally symmetric bodies, else
    ``2 pi rho^3 / 3`` when ``rho`` is known; ``area_floor = 1e-6 R^2``.

    A ``p0`` on the boundary starts along the inner surface normal with
    ``delta = 0``.

    Raises
    ------
    TraceError
        If ``p0`` is outside, already beyond ``delta_max``, or has several
        equally good barycentric cuts.
    """
    R = body.bounding_radius
    p0 = np.asarray(p0, float)
    h = R / 500.0 if h is None else float(h)
    if h <= 0:
        raise ValueError("step must be positive")
    if delta_min is None:
        delta_min = 1e-12 * body.volume
    if delta_max is None:
        if body.centrally_symmetric:
            delta_max = body.volume / 2.0
        elif body.sigma is not None:
            delta_max = body.sigma
    if area_floor is None:
        area_floor = 1e-6 * R * R
    orc = oracle if isinstance(oracle, SegmentOracle) else SegmentOracle(body, oracle)
    F0 = float(body.F(p0))
    on_boundary = abs(F0) <= boundary_tol
    if F0 > boundary_tol:
        raise TraceError("p0 lies outside the body")
    if on_boundary:
        n0 = body.inner_normal(p0)
        delta0, A0 = 0.0, 0.0
    else:
        cut = volume_distance(body, p0, oracle=orc)
        if not cut.unique:
            raise TraceError("p0 has several barycentric cuts of equal volume; choose a point "
                             "closer to the boundary")
        n0, delta0, A0 = cut.n, cut.delta, cut.A
        if delta_max is not None and delta0 >= delta_max:
            raise TraceError(f"delta(p0) = {delta0:.6g} is not below delta_max = {delta_max:.6g}")
    limits = (delta_min, delta_max, area_floor)
    reasons, messages = {}, {}
    fwd = bwd = None
    if direction in ("both", "forward"):
        fwd = _run(body, orc, p0, n0, delta0, A0, h, +1, limits, max_steps, basin_check_every)
        reasons["forward"], messages["forward"] = fwd[4], fwd[5]
    if direction in ("both", "backward"):
        if on_boundary:
            bwd = (p0[None], n0[None], np.array([0.0]), np.array([0.0]), REACHED_BOUNDARY, "")
        else:
            bwd = _run(body, orc, p0, n0, delta0, A0, h, -1, limits, max_steps, basin_check_every)
        reasons["backward"], messages["backward"] = bwd[4], bwd[5]
    parts = []
    if bwd is not None:
        k = len(bwd[0])
        parts.append((-h * np.arange(k)[::-1],) + tuple(a[::-1] for a in bwd[:4]))
    if fwd is not None:
        k = len(fwd[0])
        sl = slice(1, None) if bwd is not None else slice(None)
        parts.append((h * np.arange(k)[sl],) + tuple(a[sl] for a in fwd[:4]))
    s, g, n, d, A = (np.concatenate([p[i] for p in parts]) for i in range(5))
    return CentroidCurveTrace(s, g, n, d, A, reasons, messages)


def ellipsoid_centroid_curve(a, b, c, p0, x):
    """Closed-form centroid curve of the ellipsoid with semi-axes ``a, b, c``.

    ``y = y0 (x / x0)^(a^2/b^2)`` and ``z = z0 (x / x0)^(a^2/c^2)`` through
    ``p0 = (x0, y0, z0)`` with ``x0 > 0``.
    """
    x0, y0, z0 = map(float, p0)
    x = np.asarray(x, float)
    if x0 <= 0:
        raise ValueError("x0 must be positive")
    if np.any(x <= 0):
        raise ValueError("the closed form holds for x > 0 only")
    t = x / x0
    return y0 * t ** (a * a / (b * b)), z0 * t ** (a * a / (c * c))


def nearest_boundary_point(body, x, direction=None, iterations=50):
    """Boundary point closest to interior ``x`` (fixed-point on the normal direction)."""
    x = np.asarray(x, float)
    if body.F(x) >= 0:
        return x.copy()
    from .body import ray_boundary_distance
    d = -body.inner_normal(x) if direction is None else np.asarray(direction, float)
    d = d / np.linalg.norm(d)
    q = x + ray_boundary_distance(body, x, d) * d
    for _ in range(iterations):
        d_new = -body.inner_normal(q)
        q_new = x + ray_boundary_distance(body, x, d_new) * d_new
        if np.linalg.norm(q_new - q) < 1e-15 * body.bounding_radius:
            return q_new
        q, d = q_new, d_new
    return q


def boundary_approach_angle(trace, body, tol=None):
    """Angle between the terminal tangent and the inner surface normal.

    Uses the backward (``delta -> 0``) end of the trace.  The terminal
    point must lie within ``tol`` of the boundary; the default allows one
    step or ``1e-3 R``, whichever is larger.
    """
    if trace.stop_reasons.get("backward") != REACHED_BOUNDARY:
        raise TraceError("trace did not reach the boundary side")
    x, n = trace.gamma[0], trace.n[0]
    q = nearest_boundary_point(body, x, -n)
    if tol is None:
        step = float(np.min(np.diff(trace.s))) if len(trace) > 1 else 0.0
        tol = max(1e-3 * body.bounding_radius, 1.01 * step)
    if np.linalg.norm(q - x) > tol:
        raise TraceError(f"terminal point is {np.linalg.norm(q - x):.3g} from the boundary")
    nu = body.inner_normal(q)
    return float(np.arctan2(np.linalg.norm(np.cross(n, nu)), n @ nu))
