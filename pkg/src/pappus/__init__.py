"""Volumes, centroids and centroid curves of solids swept along framed curves."""

from .body import (BodyError, ConvexBody, SectionPlane, SectionProfile, cap_volume_ball, cross_section,
                   halfspace_volume, monte_carlo_centroid, monte_carlo_volume, ray_boundary_distance,
                   read_section_csv, segment_oracle)
from .curve import (BarycentricCut, CentroidCurveTrace, CutError, TraceError, boundary_approach_angle,
                    ellipsoid_centroid_curve, refine_cut, trace_centroid_curve, volume_distance)
from .frames import (CircleRibbon, CurveError, Curvatures, Frame, HelixRibbon, IntegrationError, LineRibbon,
                     Ribbon, SampledRibbon, evolve_frame, frame_derivative, frenet_ribbon, ribbon_from_spec)
from .rod import (Profile, ProfileError, RodConditionError, RodSpec, arc_rod, bent_rod_centroid,
                  profile_moments, revolution_segment_centroid)
from .surface import (BoundaryTrace, area_lower_bound, boundary_line_stats, equality_defect,
                      refined_mesh_area, swept_mesh_area)
from .volume import (DiffeoError, NotCentroidCurveError, SliceSeries, body_centroid_along_ribbon,
                     centroid_curve_volume, check_diffeo, pappus_volume)

__version__ = "0.1.0"
