"""Darboux frames along a helix: curvatures and orthonormality drift."""

import numpy as np

from pappus.frames import HelixRibbon

helix = HelixRibbon(1.0, 0.4, 2 * np.pi)
for s in np.linspace(0.0, helix.length, 5):
    T, N, B = helix.frame(s)
    G = np.array([T, N, B])
    drift = np.max(np.abs(G @ G.T - np.eye(3)))
    print(f"s = {s:6.3f}  point = {np.round(helix.point(s), 4)}  orthonormality drift = {drift:.1e}")
print("geodesic torsion:", helix.torsion)
