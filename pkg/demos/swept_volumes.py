"""Solids swept along a circle: a torus two ways, and two bodies with equal section areas."""

import numpy as np

from pappus.body import SectionPlane, disk_profile, ellipse_profile
from pappus.frames import CircleRibbon
from pappus.volume import SliceSeries, centroid_curve_volume, pappus_volume

rib = CircleRibbon(1.0)
series = SliceSeries.from_sections(rib, lambda s, pl: disk_profile(pl, 0.3), 64)
print("torus along its centroid circle:", pappus_volume(series))
off = SliceSeries.from_sections(CircleRibbon(1.2), lambda s, pl: disk_profile(pl, 0.3, (0.2, 0.0)), 64)
print("torus along an offset circle:   ", pappus_volume(off))
print("exact:                          ", 2 * np.pi ** 2 * 0.09)

r = lambda s: 0.25 + 0.08 * np.sin(3 * s)
k = lambda s: 1.4 + 0.2 * np.cos(2 * s)


def plane(s):
    T, N, _ = rib.frame(s)
    return SectionPlane.through(rib.point(s), T, N)


disks = centroid_curve_volume(rib, lambda s: disk_profile(plane(float(s)), r(s)).area)
ellipses = centroid_curve_volume(rib, lambda s: ellipse_profile(plane(float(s)), r(s) * k(s), r(s) / k(s),
                                                                 1.5 * s).area)
print(f"disk sections {disks:.12f}  turning ellipse sections {ellipses:.12f}")
