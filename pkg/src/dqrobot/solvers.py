"""Forward kinematics by Newton-Raphson on the unit dual quaternions.

Iterates live on the group: each update multiplies the current pose by the
normalization of ``1 + theta``, which matches the exponential retraction to
third order but needs no trigonometry.  The exact-constrained solver
(n = 6) solves the length residual directly; the over-constrained solver
minimizes half the squared residual with a Newton step whose Hessian keeps
the residual-weighted second derivative tables, falling back to
Gauss-Newton whenever that matrix is not positive definite.

Convergence criteria follow the report fields: the exact solver stops when
the pose step size drops below ``tol_step``; the loss solver stops when the
loss drops below ``tol_loss`` (a stalled step below ``tol_step`` ends the
iteration early without claiming convergence).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .dualquat import Pose, Screw, normalize_one_plus
from .models import GeometryError, PulleyModel, StewartModel, ik_lengths


class SingularityError(RuntimeError):
    """Actuator jacobian too ill-conditioned to take a Newton step."""


@dataclass(frozen=True)
class SolveSettings:
    """Knobs shared by the forward-kinematics solvers.

    ``tol_step`` and ``tol_loss`` default to 1e-16; note that for the
    exact-constrained solver the step criterion is then at the rounding
    floor of double precision, so campaign-style runs normally pass
    something like 1e-13 (see README).
    """

    tol_step: float = 1e-16
    tol_loss: float = 1e-16
    max_iters: int = 50
    max_restarts: int = 1000
    l: float = 1.0
    cond_limit: float = 1e12
    step_clamp: float = 0.5

    def __post_init__(self):
        for name in ("tol_step", "tol_loss", "max_iters", "max_restarts", "l",
                     "cond_limit", "step_clamp"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass
class SolveReport:
    pose: Pose
    iterations: int
    restarts: int
    final_step_size: float
    final_loss: float
    converged: bool
    residual_inf: float = math.inf
    status: str = ""

    def to_dict(self) -> dict:
        return {
            "pose": self.pose.components.tolist(),
            "iterations": self.iterations,
            "restarts": self.restarts,
            "final_step_size": self.final_step_size,
            "final_loss": self.final_loss,
            "converged": self.converged,
            "residual_inf": self.residual_inf,
            "status": self.status,
        }


_STATUS_NAMES = {
    kernels.OK: "converged",
    kernels.ERR_DEGENERATE: "degenerate",
    kernels.ERR_SINGULAR: "singular",
    kernels.ERR_MAXITERS: "max_iters",
    kernels.ERR_STALLED: "stalled",
}


def retract(pose: Pose, theta: Screw, l: float = 1.0, clamp: float = 0.5) -> Pose:
    """Move a pose along a screw: ``pose * normalize(1 + theta)``.

    Steps larger than ``clamp`` in size are scaled down to stay well inside
    the retraction's domain.
    """
    s = theta.size(l)
    if s > clamp:
        theta = theta * (clamp / s)
    return pose * normalize_one_plus(theta, l)


def canonical_pose(eta8: np.ndarray) -> Pose:
    """Fix the double-cover sign: nonnegative real part of the primary,
    ties broken by the first nonzero primary component."""
    keys = (eta8[6], eta8[0], eta8[1], eta8[2])
    for k in keys:
        if k > 0.0:
            break
        if k < 0.0:
            eta8 = -eta8
            break
    return Pose.from_components(eta8)


def _target(model, lengths) -> np.ndarray:
    t = np.asarray(lengths, dtype=float)
    if t.shape != (model.n,):
        raise ValueError(f"expected {model.n} actuator values, got shape {t.shape}")
    if not np.all(np.isfinite(t)):
        raise ValueError("actuator values must be finite")
    return t


def _finish(model, eta8, iterations, restarts, step, status,
            target) -> SolveReport:
    pose = canonical_pose(eta8)
    residual = ik_lengths(model, pose) - target
    loss = 0.5 * float(residual @ residual)
    return SolveReport(
        pose=pose,
        iterations=int(iterations),
        restarts=restarts,
        final_step_size=float(step),
        final_loss=loss,
        converged=status == kernels.OK,
        residual_inf=float(np.max(np.abs(residual))),
        status=_STATUS_NAMES[status],
    )


def fk_exact(model, lengths, guess: Pose, settings: SolveSettings | None = None) -> SolveReport:
    """Exact-constrained forward kinematics (n = 6)."""
    settings = settings or SolveSettings()
    if model.n != 6:
        raise ValueError("exact-constrained solver needs exactly 6 actuators")
    target = _target(model, lengths)
    eta0 = guess.components
    if isinstance(model, StewartModel):
        out = kernels.active.fk_exact_stewart(
            eta0, target, model.attachments, model.anchors,
            settings.l, settings.tol_step, settings.max_iters,
            settings.step_clamp, settings.cond_limit)
    elif isinstance(model, PulleyModel):
        out = kernels.active.fk_exact_pulley(
            eta0, target, model.attachments, model.axes, model.axis_points,
            model.rod_offsets, model.pulley_radii,
            settings.l, settings.tol_step, settings.max_iters,
            settings.step_clamp, settings.cond_limit)
    else:
        raise TypeError(f"unsupported model type {type(model).__name__}")
    eta8, iters, step, status = out
    if status == kernels.ERR_DEGENERATE:
        raise GeometryError("iteration hit degenerate actuator geometry")
    if status == kernels.ERR_SINGULAR:
        raise SingularityError(
            "actuator jacobian is singular or ill-conditioned at an iterate")
    return _finish(model, eta8, iters, 0, step, status, target)


def fk_overconstrained(model, lengths, guess: Pose,
                       settings: SolveSettings | None = None) -> SolveReport:
    """Over-constrained forward kinematics by Newton on the loss (n >= 6)."""
    settings = settings or SolveSettings()
    target = _target(model, lengths)
    eta0 = guess.components
    if isinstance(model, StewartModel):
        out = kernels.active.fk_over_stewart(
            eta0, target, model.attachments, model.anchors,
            settings.l, settings.tol_loss, settings.tol_step,
            settings.max_iters, settings.step_clamp)
    elif isinstance(model, PulleyModel):
        out = kernels.active.fk_over_pulley(
            eta0, target, model.attachments, model.axes, model.axis_points,
            model.rod_offsets, model.pulley_radii,
            settings.l, settings.tol_loss, settings.tol_step,
            settings.max_iters, settings.step_clamp)
    else:
        raise TypeError(f"unsupported model type {type(model).__name__}")
    eta8, iters, _loss, step, status = out
    if status == kernels.ERR_DEGENERATE:
        raise GeometryError("iteration hit degenerate actuator geometry")
    return _finish(model, eta8, iters, 0, step, status, target)


def fk_multistart(model, lengths, settings: SolveSettings | None,
                  guess_source) -> SolveReport:
    """Restart the loss solver from fresh guesses until one converges.

    ``guess_source`` is called with no arguments and must yield a new guess
    pose per call.  Returns the best report by loss; ``restarts`` counts how
    many times the solver ran.
    """
    settings = settings or SolveSettings()
    best: SolveReport | None = None
    attempts = 0
    for _ in range(settings.max_restarts):
        attempts += 1
        guess = guess_source()
        try:
            rep = fk_overconstrained(model, lengths, guess, settings)
        except GeometryError:
            continue
        if best is None or rep.final_loss < best.final_loss:
            best = rep
        if rep.converged:
            break
    if best is None:
        raise GeometryError(
            "every restart hit degenerate geometry; check the guess source")
    best.restarts = attempts
    return best
