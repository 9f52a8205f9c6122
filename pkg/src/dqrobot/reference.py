"""Reference robot geometries used by tests, benchmarks, and the CLI docs.

Both are fictional but representative: a symmetric octahedral six-leg
platform and an eight-cable box-frame cable robot.  The identity pose is
the home pose for both (the frame data already sits at working height).
The same geometries ship as JSON description files under ``data/``.
"""

from __future__ import annotations

import math
from importlib import resources

import numpy as np

from .dynamics import MassModel
from .models import PulleyModel, StewartModel


def data_path(name: str):
    """Path to a packaged robot description file."""
    return resources.files("dqrobot.data").joinpath(name)


def octahedral_stewart(base_radius: float = 1.0,
                       platform_radius: float = 0.5,
                       height: float = 1.0,
                       base_split_deg: float = 15.0,
                       platform_split_deg: float = 15.0) -> StewartModel:
    """Symmetric 6-6 platform: paired anchors near 0/120/240 degrees on the
    base, paired attachments near 60/180/300 degrees on the platform."""
    sb, sp = base_split_deg, platform_split_deg
    base_angles = [-sb, sb, 120.0 - sb, 120.0 + sb, 240.0 - sb, 240.0 + sb]
    # leg k runs from base_angles[k] to plat_angles[k], zig-zagging between
    # the interleaved base and platform pair centers
    plat_angles = [300.0 + sp, 60.0 - sp, 60.0 + sp, 180.0 - sp, 180.0 + sp,
                   300.0 - sp]
    anchors = np.array([
        [base_radius * math.cos(math.radians(a)),
         base_radius * math.sin(math.radians(a)), -height]
        for a in base_angles])
    attachments = np.array([
        [platform_radius * math.cos(math.radians(a)),
         platform_radius * math.sin(math.radians(a)), 0.0]
        for a in plat_angles])
    return StewartModel(attachments, anchors)


def box_pulley(frame_half_width: float = 2.0,
               frame_half_height: float = 1.5,
               effector_half_extents=(0.20, 0.15, 0.10),
               rod_offset: float = 0.08,
               pulley_radius: float = 0.04) -> PulleyModel:
    """Eight-cable robot: pulley assemblies at the corners of a box frame,
    swivel axes vertical.  Each cable runs to the frame corner one position
    around from its end-effector corner; the tangential wrap is what gives
    the jacobian its rotational authority (same-corner routing is nearly
    singular in torque)."""
    ex, ey, ez = effector_half_extents
    corners = ((1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0))
    attachments = []
    axis_points = []
    for sz in (1.0, -1.0):
        for i, (sx, sy) in enumerate(corners):
            attachments.append([sx * ex, sy * ey, sz * ez])
            fx, fy = corners[(i + 1) % 4]
            axis_points.append([fx * frame_half_width, fy * frame_half_width,
                                sz * frame_half_height])
    n = len(attachments)
    axes = np.tile([0.0, 0.0, 1.0], (n, 1))
    return PulleyModel(np.array(attachments), axes, np.array(axis_points),
                       np.full(n, rod_offset), np.full(n, pulley_radius))


def stewart_mass() -> MassModel:
    return MassModel(
        mass=50.0,
        inertia=np.diag([4.0, 4.5, 6.0]),
        r0=np.array([0.0, 0.0, 0.05]),
        actuator_mass=0.05,
        gravity=np.array([0.0, 0.0, -9.81]),
    )


def pulley_mass() -> MassModel:
    return MassModel(
        mass=10.0,
        inertia=np.diag([0.8, 1.0, 1.2]),
        r0=np.array([0.02, -0.01, 0.03]),
        actuator_mass=0.1,
        gravity=np.array([0.0, 0.0, -9.81]),
    )
