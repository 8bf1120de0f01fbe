"""Tracing the centroid curve of an ellipsoid through a boundary point."""

import numpy as np

from pappus.body import ConvexBody
from pappus.curve import boundary_approach_angle, ellipsoid_centroid_curve, trace_centroid_curve

abc = (1.0, 0.625, 0.5)
p0 = np.array([0.8, -0.3, 0.18])
ell = ConvexBody.ellipsoid(abc)
tr = trace_centroid_curve(ell, p0, h=1e-3)
print(len(tr), "samples, stop reasons:", tr.stop_reasons)
for x in (0.8, 0.6, 0.4, 0.2, 0.05):
    k = np.argmin(np.abs(tr.gamma[:, 0] - x))
    y, z = ellipsoid_centroid_curve(*abc, p0, tr.gamma[k, 0])
    print(f"x = {tr.gamma[k, 0]:.4f}  traced (y, z) = ({tr.gamma[k, 1]:+.8f}, {tr.gamma[k, 2]:+.8f})  "
          f"closed form = ({y:+.8f}, {z:+.8f})  delta = {tr.delta[k]:.6f}")
print("angle to the boundary normal at the far end:", boundary_approach_angle(tr, ell))
