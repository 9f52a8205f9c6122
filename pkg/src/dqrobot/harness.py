"""Simulation and verification harness.

Integrates the coupled pose/twist dynamics with classical RK4 (the pose is
renormalized after every step), carries the work integrals along as extra
state so that the energy audit uses the integrator's own quadrature, and
runs the randomized forward-kinematics campaigns whose statistics the
acceptance suite checks.
"""

from __future__ import annotations

import csv
import json
import math
import time
from dataclasses import dataclass

import numpy as np

from .dualquat import DualQuaternion, Pose, Quaternion, Screw, normalize_one_plus
from .dynamics import MassModel, forward_dynamics, kinetic_energy, potential_energy
from .models import GeometryError, ik_lengths, jacobian
from .screws import Twist
from .solvers import (SingularityError, SolveSettings, fk_exact,
                      fk_multistart, fk_overconstrained)


@dataclass
class SimState:
    eta: Pose
    phi: Twist
    t: float = 0.0


@dataclass(frozen=True)
class TrialConfig:
    """Random-pose distribution and trial counts for FK campaigns."""

    pose_count: int = 1000
    max_angle: float = math.pi / 6.0
    translation_box: tuple = (0.3, 0.3, 0.3)
    seed: int = 0
    warm_start_perturbation: float = 0.01

    def __post_init__(self):
        if not (0.0 < self.max_angle <= math.pi):
            raise ValueError("max_angle must lie in (0, pi]")
        if self.pose_count <= 0:
            raise ValueError("pose_count must be positive")


def random_pose(cfg: TrialConfig, rng: np.random.Generator) -> Pose:
    """Uniform random axis, angle uniform in [0, max_angle], translation
    uniform in the box."""
    axis = rng.normal(size=3)
    axis /= np.linalg.norm(axis)
    angle = rng.uniform(0.0, cfg.max_angle)
    box = np.asarray(cfg.translation_box, dtype=float)
    t = rng.uniform(-box, box)
    return Pose.from_rotation_translation(Quaternion.rotation(axis, angle), t)


def random_screw(rng: np.random.Generator) -> Screw:
    return Screw(rng.normal(size=3), rng.normal(size=3))


def perturb_pose(pose: Pose, fraction: float, rng: np.random.Generator,
                 l: float = 1.0) -> Pose:
    """Pose moved along a random screw direction of size ``fraction``."""
    raw = random_screw(rng)
    theta = raw * (fraction / raw.size(l))
    return pose * normalize_one_plus(theta, l)


@dataclass
class Trajectory:
    """Sampled state path plus in-stage work accumulators.

    ``work_wrench`` integrates the wrench power; ``work_actuator``
    integrates actuator force times length rate for the least-norm forces
    realizing the scheduled wrench.  Both use the RK4 stages themselves.
    """

    t: np.ndarray
    eta: np.ndarray
    phi: np.ndarray
    work_wrench: np.ndarray
    work_actuator: np.ndarray

    def state(self, k: int) -> SimState:
        screw = Screw.from_components(self.phi[k])
        return SimState(Pose.from_components(self.eta[k]),
                        Twist.from_screw(screw), float(self.t[k]))


def _rhs(mass, model, wrench_schedule, t, y):
    eta_dq = DualQuaternion.from_components(y[:8]).normalized()
    pose = Pose(eta_dq)
    phi = Screw.from_components(y[8:14])
    twist = Twist.from_screw(phi)
    tau = wrench_schedule(t)
    alpha = forward_dynamics(mass, model, pose, twist, tau)
    deta = (eta_dq * phi.to_dual_quaternion()).components
    dy = np.empty(16)
    dy[:8] = deta
    dy[8:14] = alpha.components
    tau6 = tau.screw.components
    dy[14] = tau6 @ y[8:14]
    if model is not None:
        lam = jacobian(model, pose).matrix
        forces = lam @ np.linalg.solve(lam.T @ lam, tau6)
        dy[15] = forces @ (lam @ y[8:14])
    else:
        dy[15] = dy[14]
    return dy


def integrate(mass: MassModel, model, wrench_schedule, state0: SimState,
              dt: float, t_end: float) -> Trajectory:
    """Classical RK4 on (pose, twist) with per-step renormalization."""
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    steps = int(round((t_end - state0.t) / dt))
    y = np.empty(16)
    y[:8] = state0.eta.components
    y[8:14] = state0.phi.screw.components
    y[14] = 0.0
    y[15] = 0.0
    t = state0.t
    out_t = np.empty(steps + 1)
    out_eta = np.empty((steps + 1, 8))
    out_phi = np.empty((steps + 1, 6))
    out_wa = np.empty(steps + 1)
    out_wb = np.empty(steps + 1)

    def record(k):
        out_t[k] = t
        out_eta[k] = y[:8]
        out_phi[k] = y[8:14]
        out_wa[k] = y[14]
        out_wb[k] = y[15]

    record(0)
    for k in range(steps):
        k1 = _rhs(mass, model, wrench_schedule, t, y)
        k2 = _rhs(mass, model, wrench_schedule, t + 0.5 * dt, y + 0.5 * dt * k1)
        k3 = _rhs(mass, model, wrench_schedule, t + 0.5 * dt, y + 0.5 * dt * k2)
        k4 = _rhs(mass, model, wrench_schedule, t + dt, y + dt * k3)
        y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        y[:8] = DualQuaternion.from_components(y[:8]).normalized().components
        t += dt
        record(k + 1)
    return Trajectory(out_t, out_eta, out_phi, out_wa, out_wb)


@dataclass
class EnergyAudit:
    """Cumulative work computed three ways, sampled along a trajectory."""

    t: np.ndarray
    wrench_work: np.ndarray
    actuator_work: np.ndarray
    mechanical_delta: np.ndarray

    @property
    def scale(self) -> float:
        return max(float(np.max(np.abs(self.wrench_work))),
                   float(np.max(np.abs(self.actuator_work))),
                   float(np.max(np.abs(self.mechanical_delta))), 1e-12)

    @property
    def max_pairwise(self) -> float:
        a, b, c = self.wrench_work, self.actuator_work, self.mechanical_delta
        return max(float(np.max(np.abs(a - b))), float(np.max(np.abs(a - c))),
                   float(np.max(np.abs(b - c))))

    @property
    def max_pairwise_relative(self) -> float:
        return self.max_pairwise / self.scale

    def to_dict(self) -> dict:
        return {
            "t": self.t.tolist(),
            "wrench_work": self.wrench_work.tolist(),
            "actuator_work": self.actuator_work.tolist(),
            "mechanical_delta": self.mechanical_delta.tolist(),
            "max_pairwise": self.max_pairwise,
            "max_pairwise_relative": self.max_pairwise_relative,
        }


def energy_audit(traj: Trajectory, mass: MassModel, model,
                 wrench_schedule) -> EnergyAudit:
    """Work through the wrench, through the actuators, and as energy change.

    The first two series come straight off the trajectory's in-stage
    accumulators; the third re-evaluates kinetic plus potential energy at
    every sample.
    """
    m = traj.t.shape[0]
    mech = np.empty(m)
    for k in range(m):
        st = traj.state(k)
        mech[k] = (kinetic_energy(mass, model, st.eta, st.phi)
                   + potential_energy(mass, st.eta))
    return EnergyAudit(traj.t.copy(), traj.work_wrench.copy(),
                       traj.work_actuator.copy(), mech - mech[0])


def write_trajectory_csv(traj: Trajectory, path) -> None:
    header = (["t"] + [f"eta_{i}" for i in range(1, 9)]
              + ["w_x", "w_y", "w_z", "v_x", "v_y", "v_z"]
              + ["work_wrench", "work_actuator"])
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for k in range(traj.t.shape[0]):
            tw = Twist.from_screw(Screw.from_components(traj.phi[k]))
            values = ([traj.t[k]] + list(traj.eta[k]) + list(tw.w) + list(tw.v)
                      + [traj.work_wrench[k], traj.work_actuator[k]])
            w.writerow([repr(float(v)) for v in values])


def read_trajectory_csv(path) -> Trajectory:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0][0] != "t":
        raise ValueError(f"{path}: not a trajectory file")
    data = np.array([[float(v) for v in row] for row in rows[1:]])
    phi = np.empty((data.shape[0], 6))
    phi[:, :3] = 0.5 * data[:, 9:12]
    phi[:, 3:] = 0.5 * data[:, 12:15]
    return Trajectory(data[:, 0], data[:, 1:9], phi, data[:, 15], data[:, 16])


@dataclass
class CampaignStats:
    mode: str
    trials: int
    successes: int
    mean_iterations: float
    mean_restarts: float
    mean_solve_seconds: float
    max_residual_inf: float

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "trials": self.trials,
            "successes": self.successes,
            "success_rate": self.success_rate,
            "mean_iterations": self.mean_iterations,
            "mean_restarts": self.mean_restarts,
            "mean_solve_seconds": self.mean_solve_seconds,
            "max_residual_inf": self.max_residual_inf,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def fk_campaign(model, cfg: TrialConfig, settings: SolveSettings,
                mode: str = "auto") -> CampaignStats:
    """Randomized forward-kinematics campaign.

    Modes: ``exact`` solves with a random initial guess (n = 6 robots),
    ``warm`` perturbs the true pose by ``cfg.warm_start_perturbation``,
    ``multistart`` restarts from random guesses; ``auto`` picks ``exact``
    for six actuators and ``warm`` otherwise.
    """
    if mode == "auto":
        mode = "exact" if model.n == 6 else "warm"
    if mode not in ("exact", "warm", "multistart"):
        raise ValueError(f"unknown campaign mode {mode!r}")
    rng = np.random.default_rng(cfg.seed)
    iters = []
    restarts = []
    times = []
    residuals = []
    successes = 0
    for _ in range(cfg.pose_count):
        pose = random_pose(cfg, rng)
        lengths = ik_lengths(model, pose)
        t0 = time.perf_counter()
        try:
            if mode == "exact":
                rep = fk_exact(model, lengths, random_pose(cfg, rng), settings)
            elif mode == "warm":
                guess = perturb_pose(pose, cfg.warm_start_perturbation, rng,
                                     settings.l)
                rep = fk_overconstrained(model, lengths, guess, settings)
            else:
                rep = fk_multistart(model, lengths, settings,
                                    lambda: random_pose(cfg, rng))
        except (GeometryError, SingularityError):
            times.append(time.perf_counter() - t0)
            continue
        times.append(time.perf_counter() - t0)
        if rep.converged:
            successes += 1
            iters.append(rep.iterations)
            restarts.append(rep.restarts)
            residuals.append(rep.residual_inf)
    return CampaignStats(
        mode=mode,
        trials=cfg.pose_count,
        successes=successes,
        mean_iterations=float(np.mean(iters)) if iters else math.nan,
        mean_restarts=float(np.mean(restarts)) if restarts else 0.0,
        mean_solve_seconds=float(np.mean(times)) if times else math.nan,
        max_residual_inf=float(np.max(residuals)) if residuals else math.nan,
    )
