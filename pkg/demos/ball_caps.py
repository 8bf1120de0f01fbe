"""Volumes cut from the unit ball by planes, against the cap formula."""

from pappus.body import ConvexBody, cap_volume_ball, halfspace_volume

ball = ConvexBody.ball()
for r in (0.1, 0.3, 0.5, 0.7, 0.9):
    v = halfspace_volume(ball, [0.0, 0.0, -1.0], [0.0, 0.0, r], method="quadrature")
    print(f"r = {r:.1f}  cut volume = {v:.15f}  closed form = {cap_volume_ball(r):.15f}")
