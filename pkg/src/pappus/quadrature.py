"""Gauss-Legendre quadrature helpers.

Composite rules for smooth integrands along a ribbon and an adaptive
panel scheme for slice-area integrals, which may have kinks at the
ends of a body.  Integrands are always called with a 1-D array of
abscissae so that expensive evaluations can be batched.
"""

import numpy as np


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""

    def __init__(self, message, estimate, error):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


def gauss_legendre(n):
    """Nodes and weights of the ``n``-point rule on [-1, 1]."""
    return np.polynomial.legendre.leggauss(n)


def composite_nodes(a, b, panels=64, order=4):
    """Nodes and weights of a composite Gauss-Legendre rule on [a, b].

    Returns arrays of length ``panels * order`` sorted by abscissa.
    """
    if panels < 1 or order < 1:
        raise ValueError("panels and order must be positive")
    x, w = gauss_legendre(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def composite(f, a, b, panels=64, order=4):
    """Integrate a vectorized ``f`` over [a, b] with a fixed composite rule.

    ``f`` may return an array with trailing dimensions; the integral is
    taken over the leading axis.
    """
    nodes, weights = composite_nodes(a, b, panels, order)
    values = np.asarray(f(nodes), dtype=float)
    return np.tensordot(weights, values, axes=(0, 0))


def adaptive(f, a, b, rtol=1e-9, atol=1e-14, order=8, initial_panels=4, max_depth=40,
             max_panels=4096):
    """Adaptive Gauss-Legendre integration of a vectorized scalar ``f``.

    Each panel is estimated once with the ``order``-point rule and once as
    the sum over its two halves; panels whose halves disagree by more than
    their share of the tolerance are split until the summed disagreement
    meets the tolerance.  All nodes of one refinement
    level are evaluated in a single call to ``f``.

    Returns
    -------
    (float, float)
        The integral estimate and an error estimate.

    Raises
    ------
    QuadratureError
        If the panel budget or depth is exhausted before convergence.
    """
    if b == a:
        return 0.0, 0.0
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0
    x, w = gauss_legendre(order)
    width = b - a

    def _panel_sums(lo, hi):
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        z = mid[:, None] + half[:, None] * x[None, :]
        vals = np.asarray(f(z.ravel()), dtype=float).reshape(z.shape)
        return half * (vals @ w)

    edges = np.linspace(a, b, initial_panels + 1)
    lo, hi = edges[:-1], edges[1:]
    coarse = _panel_sums(lo, hi)
    total = 0.0
    total_err = 0.0
    depth = 0
    while lo.size:
        mid = 0.5 * (lo + hi)
        fine_parts = _panel_sums(np.concatenate([lo, mid]), np.concatenate([mid, hi]))
        left, right = fine_parts[: lo.size], fine_parts[lo.size:]
        fine = left + right
        err = np.abs(fine - coarse)
        # running estimate of the integral scale for the relative tolerance
        scale = abs(total + fine.sum())
        budget = np.maximum(rtol * scale, atol) * (hi - lo) / width
        done = err <= budget
        total += fine[done].sum()
        total_err += err[done].sum()
        keep = ~done
        depth += 1
        if not keep.any():
            break
        # panels at an endpoint singularity never meet a width-proportional
        # budget; stop once the global estimate is good enough
        if total_err + err[keep].sum() <= max(rtol * scale, atol):
            total += fine[keep].sum()
            total_err += err[keep].sum()
            break
        if depth >= max_depth or 2 * keep.sum() > max_panels:
            estimate = total + fine[keep].sum()
            raise QuadratureError(
                f"adaptive quadrature did not converge (estimate {estimate!r}, "
                f"error {total_err + err[keep].sum():.3e})",
                sign * estimate, total_err + err[keep].sum())
        lo_k, mid_k, hi_k = lo[keep], mid[keep], hi[keep]
        coarse = np.concatenate([left[keep], right[keep]])
        lo = np.concatenate([lo_k, mid_k])
        hi = np.concatenate([mid_k, hi_k])
    return sign * total, total_err
