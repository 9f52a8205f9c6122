"""Parallel-robot actuator geometry: lengths, jacobians, force maps.

Two families are supported.  A :class:`StewartModel` actuator is a rigid
leg between a moving-frame attachment point and a fixed-frame anchor; its
length is the point-to-point distance.  A :class:`PulleyModel` actuator is
a cable that leaves a pulley mounted on a swiveling assembly; its length
adds the straight free span and the wrapped arc, with the swivel geometry
resolved in the moving frame at each pose.

For both families the length gradient row is ``(2 r x u, 2 u)`` where ``u``
is the unit direction the cable/leg enters the attachment point ``r``;
the pulley routing drops out of the first derivative entirely, and only
the direction's own derivative is needed for second order.

Anchor and axis data are stored in the fixed frame and pulled back into
the moving frame per pose.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .dualquat import Pose, Screw
from .liederiv import (EvalContext, LieJet, constant, jet_atan2, jet_dot,
                       jet_reciprocal, jet_sqrt, lie_of_fixed_direction,
                       lie_of_fixed_point)
from .screws import Wrench


class GeometryError(ValueError):
    """Degenerate actuator geometry at the requested pose."""


def _points(name, arr, n=None):
    a = np.asarray(arr, dtype=float)
    if a.ndim != 2 or a.shape[1] != 3:
        raise ValueError(f"{name} must be an (n, 3) array, got shape {a.shape}")
    if n is not None and a.shape[0] != n:
        raise ValueError(f"{name} must have {n} rows, got {a.shape[0]}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite entries")
    return a.copy()


class StewartModel:
    """Rigid-leg parallel robot (n >= 6 legs)."""

    def __init__(self, attachments, anchors):
        self.attachments = _points("attachments", attachments)
        self.anchors = _points("anchors", anchors, self.attachments.shape[0])
        if self.n < 6:
            raise ValueError(f"need at least 6 legs, got {self.n}")
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if np.linalg.norm(self.anchors[i] - self.anchors[j]) < 1e-12:
                    raise ValueError(f"anchors {i} and {j} coincide")
        self.attachments.setflags(write=False)
        self.anchors.setflags(write=False)

    @property
    def n(self) -> int:
        return self.attachments.shape[0]

    def __repr__(self):
        return f"StewartModel(n={self.n})"


class PulleyModel:
    """Cable robot with pulley assemblies (n >= 6 cables)."""

    def __init__(self, attachments, axes, axis_points, rod_offsets, pulley_radii):
        self.attachments = _points("attachments", attachments)
        n = self.n
        if n < 6:
            raise ValueError(f"need at least 6 cables, got {n}")
        axes = _points("axes", axes, n)
        norms = np.linalg.norm(axes, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-6):
            raise ValueError("axis directions must be unit vectors")
        self.axes = axes / norms[:, None]
        self.axis_points = _points("axis_points", axis_points, n)
        self.rod_offsets = np.asarray(rod_offsets, dtype=float).reshape(n).copy()
        self.pulley_radii = np.asarray(pulley_radii, dtype=float).reshape(n).copy()
        if np.any(self.rod_offsets < 0.0):
            raise ValueError("rod offsets must be nonnegative")
        if np.any(self.pulley_radii < 0.0):
            raise ValueError("pulley radii must be nonnegative")
        for a in (self.attachments, self.axes, self.axis_points,
                  self.rod_offsets, self.pulley_radii):
            a.setflags(write=False)

    @property
    def n(self) -> int:
        return self.attachments.shape[0]

    def __repr__(self):
        return f"PulleyModel(n={self.n})"


@dataclass
class ActuatorJacobian:
    """Rows are the length gradients; ``lengths_rate = matrix @ twist components``."""

    matrix: np.ndarray
    at: Pose

    @property
    def wrench_map(self) -> np.ndarray:
        """Maps actuator forces to wrench components (the transpose)."""
        return self.matrix.T


def _evaluate(model, pose: Pose, want_second: bool):
    eta8 = pose.components
    if isinstance(model, StewartModel):
        out = kernels.active.stewart_eval(eta8, model.attachments, model.anchors,
                                          want_second)
    elif isinstance(model, PulleyModel):
        out = kernels.active.pulley_eval(eta8, model.attachments, model.axes,
                                         model.axis_points, model.rod_offsets,
                                         model.pulley_radii, want_second)
    else:
        raise TypeError(f"unsupported model type {type(model).__name__}")
    ell, u, lam, sec, status = out
    if status != kernels.OK:
        raise GeometryError(
            "degenerate actuator geometry at this pose "
            "(zero-length leg or cable inside the pulley circle)")
    return ell, u, lam, sec


def ik_lengths(model, pose: Pose) -> np.ndarray:
    """Actuator lengths for a pose (the inverse-kinematics map)."""
    return _evaluate(model, pose, False)[0]


def cable_directions(model, pose: Pose) -> np.ndarray:
    """Unit directions (moving frame) the legs/cables enter their attachments."""
    return _evaluate(model, pose, False)[1]


def jacobian(model, pose: Pose) -> ActuatorJacobian:
    return ActuatorJacobian(_evaluate(model, pose, False)[2], pose)


def second_lie_tables(model, pose: Pose) -> np.ndarray:
    """Per-actuator 6x6 tables of iterated length derivatives.

    ``tables[k, i, j]`` applies direction j first, then i.
    """
    return _evaluate(model, pose, True)[3]


def force_to_wrench(model, pose: Pose, forces) -> Wrench:
    """Wrench the actuator forces exert on the end effector (transpose map)."""
    forces = np.asarray(forces, dtype=float)
    lam = _evaluate(model, pose, False)[2]
    return Wrench.from_screw(Screw.from_components(lam.T @ forces))


def singularity_measure(model, pose: Pose) -> float:
    """det of the actuator jacobian; near zero flags a singularity.

    Only defined for exactly six actuators.
    """
    if model.n != 6:
        raise ValueError("singularity determinant requires exactly 6 actuators")
    lam = _evaluate(model, pose, False)[2]
    return float(np.linalg.det(lam))


# --- jet route -------------------------------------------------------------
#
# The closed-form jacobian and second-derivative tables above are the
# production path.  The functions below rebuild the same quantities through
# the automatic Lie differentiation engine; they are deliberately
# independent (slow, generic) and exist as a second route for verification.

def _stewart_length_jet(model: StewartModel, ctx: EvalContext, k: int) -> LieJet:
    s_moving = ctx.eta.apply_inverse(model.anchors[k])
    s_jet = lie_of_fixed_point(ctx, s_moving)
    r_jet = constant(ctx, model.attachments[k])
    diff = r_jet - s_jet
    return jet_sqrt(jet_dot(diff, diff))


def _pulley_geometry_jets(model: PulleyModel, ctx: EvalContext, k: int):
    """Scalar jets (h1, h2, s, u1, u2) and vector jets (m, n) for cable k."""
    x_m = ctx.eta.apply_inverse(model.axis_points[k])
    n_m = ctx.eta.apply_inverse_direction(model.axes[k])
    x_jet = lie_of_fixed_point(ctx, x_m)
    n_jet = lie_of_fixed_direction(ctx, n_m)
    r_jet = constant(ctx, model.attachments[k])
    delta = x_jet - r_jet
    h2 = jet_dot(n_jet, delta)
    d = delta - h2 * n_jet
    dn = jet_sqrt(jet_dot(d, d))
    m = jet_reciprocal(dn) * d
    h1 = dn - constant(ctx, float(model.rod_offsets[k]))
    rho2 = h1 * h1 + h2 * h2
    p = float(model.pulley_radii[k])
    s = jet_sqrt(rho2 - constant(ctx, p * p))
    inv_rho2 = jet_reciprocal(rho2)
    u1 = -1.0 * ((h1 * s - p * h2) * inv_rho2)
    u2 = -1.0 * ((h2 * s + p * h1) * inv_rho2)
    return h1, h2, s, u1, u2, m, n_jet


def _pulley_length_jet(model: PulleyModel, ctx: EvalContext, k: int) -> LieJet:
    h1, h2, s, u1, u2, m, n_jet = _pulley_geometry_jets(model, ctx, k)
    p = float(model.pulley_radii[k])
    wrap = jet_atan2(-1.0 * u2, -1.0 * u1)
    return s + p * wrap


def cable_length_jets(model, ctx: EvalContext) -> list[LieJet]:
    """Length jets for every actuator through the generic jet pipeline."""
    if isinstance(model, StewartModel):
        return [_stewart_length_jet(model, ctx, k) for k in range(model.n)]
    if isinstance(model, PulleyModel):
        return [_pulley_length_jet(model, ctx, k) for k in range(model.n)]
    raise TypeError(f"unsupported model type {type(model).__name__}")


def cable_direction_jets(model, ctx: EvalContext) -> list[LieJet]:
    """Direction jets (3-vector values) through the generic jet pipeline."""
    out = []
    if isinstance(model, StewartModel):
        for k in range(model.n):
            s_moving = ctx.eta.apply_inverse(model.anchors[k])
            s_jet = lie_of_fixed_point(ctx, s_moving)
            diff = constant(ctx, model.attachments[k]) - s_jet
            inv_len = jet_reciprocal(jet_sqrt(jet_dot(diff, diff)))
            out.append(inv_len * diff)
        return out
    if isinstance(model, PulleyModel):
        for k in range(model.n):
            h1, h2, s, u1, u2, m, n_jet = _pulley_geometry_jets(model, ctx, k)
            out.append(u1 * m + u2 * n_jet)
        return out
    raise TypeError(f"unsupported model type {type(model).__name__}")
