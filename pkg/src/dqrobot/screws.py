"""Twists, wrenches, frame changes, and the screw products.

A twist packs angular velocity ``w`` and translational velocity ``v`` as
the screw ``w/2 + eps v/2``; a wrench packs torque ``q`` and force ``p``
as ``2q + 2 eps p``.  With those factors the plain component dot product
of a wrench with a twist is the rate of work ``q.w + p.v``.

Twists are interpreted in the moving frame unless their ``frame`` tag says
otherwise; mixing frames silently is the classic screw-algebra bug, so the
tag travels with the value.
"""

from __future__ import annotations

import numpy as np

from .dualquat import DualQuaternion, Pose, Screw, _vec3

MOVING = "moving"
FIXED = "fixed"


class Twist:
    """Angular velocity ``w`` (rad/s) and translational velocity ``v`` (m/s)."""

    __slots__ = ("w", "v", "frame")

    def __init__(self, w, v, frame: str = MOVING):
        if frame not in (MOVING, FIXED):
            raise ValueError(f"frame must be {MOVING!r} or {FIXED!r}")
        self.w = _vec3(w).copy()
        self.v = _vec3(v).copy()
        self.frame = frame

    @classmethod
    def from_screw(cls, screw: Screw, frame: str = MOVING) -> "Twist":
        return cls(screw.a, screw.b, frame)

    @property
    def screw(self) -> Screw:
        return Screw.from_motion(self.w, self.v)

    def __repr__(self):
        return f"Twist(w={self.w.tolist()}, v={self.v.tolist()}, frame={self.frame!r})"


class Wrench:
    """Torque ``q`` (N m) and force ``p`` (N) at the moving-frame origin."""

    __slots__ = ("q", "p")

    def __init__(self, q, p):
        self.q = _vec3(q).copy()
        self.p = _vec3(p).copy()

    @classmethod
    def from_screw(cls, screw: Screw) -> "Wrench":
        return cls(0.5 * screw.p, 0.5 * screw.d)

    @classmethod
    def zero(cls) -> "Wrench":
        return cls(np.zeros(3), np.zeros(3))

    @property
    def screw(self) -> Screw:
        return Screw(2.0 * self.q, 2.0 * self.p)

    def __repr__(self):
        return f"Wrench(q={self.q.tolist()}, p={self.p.tolist()})"


def twist_from_pose_rate(pose: Pose, rate: DualQuaternion, frame: str = MOVING) -> Twist:
    """Twist of a pose path from its time derivative ``rate``.

    Moving frame: ``phi = eta^-1 etadot``; fixed frame: ``phi = etadot eta^-1``.
    """
    inv = pose.dq.conjugate()
    phi = inv * rate if frame == MOVING else rate * inv
    return Twist.from_screw(Screw.from_dual_quaternion(phi), frame)


def pose_rate_from_twist(pose: Pose, twist: Twist) -> DualQuaternion:
    """Inverse of :func:`twist_from_pose_rate`: ``etadot = eta phi`` or ``phi eta``."""
    phi = twist.screw.to_dual_quaternion()
    if twist.frame == MOVING:
        return pose.dq * phi
    return phi * pose.dq


def _sandwich(pose: Pose, screw: Screw, to_fixed: bool) -> Screw:
    dq = screw.to_dual_quaternion()
    if to_fixed:
        out = pose.dq * dq * pose.dq.conjugate()
    else:
        out = pose.dq.conjugate() * dq * pose.dq
    return Screw.from_dual_quaternion(out)


def twist_change_frame(pose: Pose, twist: Twist) -> Twist:
    """Re-express a twist in the other frame: ``phi_f = eta phi_m eta^-1``."""
    to_fixed = twist.frame == MOVING
    out = _sandwich(pose, twist.screw, to_fixed)
    return Twist.from_screw(out, FIXED if to_fixed else MOVING)


def accel_change_frame(pose: Pose, accel_moving: Screw) -> Screw:
    """Acceleration screw transforms like the twist: ``eta phidot eta^-1``."""
    return _sandwich(pose, accel_moving, True)


def jerk_change_frame(pose: Pose, phi: Screw, dphi: Screw, ddphi_moving: Screw) -> Screw:
    """Jerk picks up a commutator term on top of the conjugation."""
    a = phi.to_dual_quaternion()
    b = dphi.to_dual_quaternion()
    inner = ddphi_moving.to_dual_quaternion() + (a * b - b * a)
    out = pose.dq * inner * pose.dq.conjugate()
    return Screw.from_dual_quaternion(out)


def twist_about_com(twist: Twist, r0) -> Twist:
    """Twist seen at the center of mass ``r0`` (moving-frame offset)."""
    r0 = _vec3(r0)
    return Twist(twist.w, twist.v + np.cross(twist.w, r0), twist.frame)


def wrench_about_com(wrench: Wrench, r0) -> Wrench:
    """Equivalent wrench about the center of mass: torque shifts by ``p x r0``."""
    r0 = _vec3(r0)
    return Wrench(wrench.q + np.cross(wrench.p, r0), wrench.p)


def work_rate(wrench: Wrench, twist: Twist) -> float:
    """Rate of work ``q.w + p.v`` done on the end effector (moving frame)."""
    if twist.frame != MOVING:
        raise ValueError("work rate pairs a moving-frame wrench with a moving-frame twist")
    return float(wrench.q @ twist.w + wrench.p @ twist.v)


def screw_cross(alpha: Screw, beta: Screw) -> Screw:
    """Commutator product ``(alpha beta - beta alpha)/2`` of two screws."""
    return Screw(
        np.cross(alpha.p, beta.p),
        np.cross(alpha.p, beta.d) + np.cross(alpha.d, beta.p),
    )


def screw_ltimes(alpha: Screw, beta: Screw) -> Screw:
    """Left adjoint product, dual to the cross product:
    ``screw_cross(a, b).dot(c) == a.dot(screw_ltimes(c, b))``."""
    return Screw(
        np.cross(beta.p, alpha.p) + np.cross(beta.d, alpha.d),
        np.cross(beta.p, alpha.d),
    )


def screw_rtimes(alpha: Screw, beta: Screw) -> Screw:
    """Right adjoint product: ``alpha rtimes beta = -(beta ltimes alpha)``."""
    return -screw_ltimes(beta, alpha)
