"""Rigid-body dynamics of the end effector, including actuator inertia.

The configuration-dependent effective mass assembles the end-effector
inertia (about an arbitrary body point, with center-of-mass offset ``r0``)
and the actuator inertia reflected through the length jacobian.  The
equation of motion is ``wrench = bias + M @ accel`` in screw components,
with the bias collecting gyroscopic, centripetal, center-of-mass,
actuator, and gravity terms.

Everything is expressed in the moving frame; gravity is stored in the
fixed frame and rotated in per evaluation.  A generic Euler-Lagrange
evaluation (jets of the mass matrix plus the adjoint product) is kept as
an independent verification route for the closed-form bias.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dualquat import Pose, Quaternion, Screw, hodge_star
from .liederiv import (EvalContext, constant, jet_dot, jet_dual, jet_primary,
                       jet_quat_conj, jet_quat_vec, full_lie, seed_pose)
from .models import jacobian, second_lie_tables
from .screws import Twist, Wrench, screw_ltimes


def _sym_check(name, m, tol=1e-9):
    m = np.asarray(m, dtype=float)
    if m.shape != (3, 3):
        raise ValueError(f"{name} must be 3x3")
    if np.max(np.abs(m - m.T)) > tol * max(1.0, np.max(np.abs(m))):
        raise ValueError(f"{name} must be symmetric")
    return 0.5 * (m + m.T)


@dataclass(frozen=True)
class MassModel:
    """End-effector mass properties plus effective no-load actuator mass.

    ``inertia`` is taken about the center of mass ``r0`` (moving frame).
    ``actuator_mass`` may be None (no actuator inertia), a scalar ``c``
    (meaning ``c I``), a length-n diagonal, or a full n x n matrix.
    ``gravity`` is the fixed-frame acceleration vector.
    """

    mass: float
    inertia: np.ndarray
    r0: np.ndarray
    actuator_mass: object = None
    gravity: np.ndarray = (0.0, 0.0, 0.0)

    def __post_init__(self):
        object.__setattr__(self, "inertia", _sym_check("inertia", self.inertia))
        if self.mass <= 0.0:
            raise ValueError("mass must be positive")
        if np.any(np.linalg.eigvalsh(self.inertia) <= 0.0):
            raise ValueError("inertia tensor must be positive definite")
        object.__setattr__(self, "r0", np.asarray(self.r0, dtype=float).reshape(3).copy())
        object.__setattr__(self, "gravity",
                           np.asarray(self.gravity, dtype=float).reshape(3).copy())
        self.inertia.setflags(write=False)
        self.r0.setflags(write=False)
        self.gravity.setflags(write=False)

    def actuator_mass_matrix(self, n: int) -> np.ndarray:
        m0 = self.actuator_mass
        if m0 is None:
            return np.zeros((n, n))
        a = np.asarray(m0, dtype=float)
        if a.ndim == 0:
            a = float(a) * np.eye(n)
        elif a.ndim == 1:
            if a.shape != (n,):
                raise ValueError(f"diagonal actuator mass needs {n} entries")
            a = np.diag(a)
        elif a.shape != (n, n):
            raise ValueError(f"actuator mass matrix must be {n}x{n}")
        a = 0.5 * (a + a.T)
        if np.any(np.linalg.eigvalsh(a) < -1e-12):
            raise ValueError("actuator mass must be positive semidefinite")
        return a


@dataclass
class EffectiveMass:
    matrix: np.ndarray
    at: Pose


def _rigid_mass_matrix(mass: MassModel) -> np.ndarray:
    r = hodge_star(mass.r0)
    m = mass.mass
    top = np.hstack([mass.inertia - m * (r @ r), m * r])
    bot = np.hstack([-m * r, m * np.eye(3)])
    return 4.0 * np.vstack([top, bot])


def _actuator_terms(mass: MassModel, model, pose: Pose):
    """(jacobian matrix, reflected mass, second tables) or Nones."""
    if model is None or mass.actuator_mass is None:
        return None, None, None
    lam = jacobian(model, pose).matrix
    m0 = mass.actuator_mass_matrix(model.n)
    tables = second_lie_tables(model, pose)
    return lam, m0, tables


def effective_mass(mass: MassModel, model, pose: Pose) -> EffectiveMass:
    """6x6 matrix M with kinetic energy ``0.5 phi . M phi``."""
    m = _rigid_mass_matrix(mass)
    lam, m0, _ = _actuator_terms(mass, model, pose)
    if lam is not None:
        m = m + lam.T @ m0 @ lam
    return EffectiveMass(m, pose)


def moving_gravity(mass: MassModel, pose: Pose) -> np.ndarray:
    return pose.apply_inverse_direction(mass.gravity)


def gravity_wrench_term(mass: MassModel, pose: Pose) -> Screw:
    """Gravity contribution to the bias wrench: ``-2 m (r0 x g + eps g)``."""
    g = moving_gravity(mass, pose)
    return Screw(-2.0 * mass.mass * np.cross(mass.r0, g), -2.0 * mass.mass * g)


def bias_wrench(mass: MassModel, model, pose: Pose, twist: Twist) -> Wrench:
    """Velocity- and gravity-dependent part of the equation of motion.

    The center-of-mass torque term is ``(w . r0)(r0 x w)``; equivalently the
    whole bias equals ``mu1 + mu2`` from the Euler-Lagrange route (see
    :func:`euler_lagrange_bias`).
    """
    w, v = twist.w, twist.v
    m, me, r0 = mass.mass, mass.inertia, mass.r0
    prim = 2.0 * np.cross(w, me @ w)
    dual = 2.0 * m * np.cross(w, v)
    prim = prim + 2.0 * m * ((w @ r0) * np.cross(r0, w) + np.cross(r0, np.cross(w, v)))
    dual = dual + 2.0 * m * np.cross(w, np.cross(w, r0))
    mu = Screw(prim, dual)
    lam, m0, tables = _actuator_terms(mass, model, pose)
    if lam is not None:
        phi6 = twist.screw.components
        dlam_phi = np.einsum("i,mij->mj", phi6, tables)
        mu = mu + Screw.from_components(lam.T @ (m0 @ (dlam_phi @ phi6)))
    mu = mu + gravity_wrench_term(mass, pose)
    return Wrench.from_screw(mu)


def forward_dynamics(mass: MassModel, model, pose: Pose, twist: Twist,
                     applied: Wrench) -> Screw:
    """Acceleration screw from ``wrench = bias + M @ accel``."""
    m = effective_mass(mass, model, pose).matrix
    mu = bias_wrench(mass, model, pose, twist).screw
    rhs = applied.screw.components - mu.components
    return Screw.from_components(np.linalg.solve(m, rhs))


def no_load_forces(mass: MassModel, model, pose: Pose, twist: Twist,
                   accel: Screw) -> np.ndarray:
    """Actuator forces needed to move the actuators themselves (M0 lddot)."""
    lam, m0, tables = _actuator_terms(mass, model, pose)
    if lam is None:
        return np.zeros(0 if model is None else model.n)
    phi6 = twist.screw.components
    dlam_phi = np.einsum("i,mij->mj", phi6, tables)
    return m0 @ (dlam_phi @ phi6 + lam @ accel.components)


def kinetic_energy(mass: MassModel, model, pose: Pose, twist: Twist) -> float:
    phi6 = twist.screw.components
    m = effective_mass(mass, model, pose).matrix
    return 0.5 * float(phi6 @ m @ phi6)


def potential_energy(mass: MassModel, pose: Pose) -> float:
    com_world = pose.apply(mass.r0)
    return -mass.mass * float(mass.gravity @ com_world)


# --- Euler-Lagrange verification route --------------------------------------

def potential_jet(mass: MassModel, ctx: EvalContext):
    """Jet of the potential energy through the generic pipeline."""
    eta = seed_pose(ctx)
    q = jet_primary(eta)
    b = jet_dual(eta)
    r0q = constant(ctx, Quaternion.from_vector(mass.r0))
    com = jet_quat_vec((q * r0q + 2.0 * b) * jet_quat_conj(q))
    return (-mass.mass) * jet_dot(constant(ctx, mass.gravity.copy()), com)


def euler_lagrange_bias(mass: MassModel, model, pose: Pose, twist: Twist) -> Screw:
    """Bias wrench evaluated the generic way.

    mu1 uses the Lie derivative of the effective mass (assembled from the
    second derivative tables) and of the potential; mu2 is the adjoint
    product ``2 (M phi) ltimes phi``.  Agrees with :func:`bias_wrench` to
    rounding.
    """
    phi = twist.screw
    phi6 = phi.components
    m = effective_mass(mass, model, pose).matrix
    lam, m0, tables = _actuator_terms(mass, model, pose)
    # mu1: L_phi(M) phi - (1/2) grad_theta (phi . M phi) + grad v.
    mu1 = np.zeros(6)
    if lam is not None:
        for i in range(6):
            dlam_i = tables[:, i, :]
            dm_i = dlam_i.T @ m0 @ lam + lam.T @ m0 @ dlam_i
            mu1 += phi6[i] * (dm_i @ phi6)
            mu1[i] -= 0.5 * float(phi6 @ dm_i @ phi6)
    ctx = EvalContext(pose)
    mu1 += full_lie(potential_jet(mass, ctx)).components
    mu2 = 2.0 * screw_ltimes(Screw.from_components(m @ phi6), phi)
    return Screw.from_components(mu1) + mu2
