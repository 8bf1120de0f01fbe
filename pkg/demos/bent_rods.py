"""Centroids of bent rods and segments of bodies of revolution."""

import numpy as np

from pappus.rod import arc_rod, bent_rod_centroid, disk, polygon, revolution_segment_centroid

vol, c = bent_rod_centroid(arc_rod(1.0, np.pi / 2, disk(0.1)))
print("quarter-arc disk rod: volume", vol, "centroid", c)

hexagon = polygon([[-0.12, 0.0], [-0.06, -0.09], [0.08, -0.07], [0.14, 0.0], [0.08, 0.07], [-0.06, 0.09]])
for alpha in (0.5, np.pi / 2, np.pi, 2 * np.pi):
    _, c = bent_rod_centroid(arc_rod(1.3, alpha, hexagon))
    rev = revolution_segment_centroid(hexagon.area, 1.3, hexagon.Iv, alpha)
    print(f"alpha = {alpha:.4f}  rod {np.round(c, 10) + 0.0}  revolution {np.round(rev, 10) + 0.0}")
