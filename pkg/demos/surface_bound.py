"""Lower bound for lateral surface area of a swept tube, against a refined mesh."""

import numpy as np

from pappus.frames import CircleRibbon
from pappus.surface import BoundaryTrace, area_lower_bound, equality_defect, refined_mesh_area

rib = CircleRibbon(1.0)
for omega in (0.0, 0.5, 1.5):
    def uv(s, t, omega=omega):
        x, y = 0.2 * np.cos(t), 0.1 * np.sin(t)
        return x * np.cos(omega * s) - y * np.sin(omega * s), x * np.sin(omega * s) + y * np.cos(omega * s)

    tr = BoundaryTrace.from_function(rib, uv)
    mesh, _ = refined_mesh_area(rib, uv)
    print(f"turning rate {omega}: bound {area_lower_bound(tr):.8f}  mesh {mesh:.8f}  "
          f"equality defect {equality_defect(tr):.2e}")
