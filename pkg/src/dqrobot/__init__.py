"""dqrobot: dual-quaternion kinematics and dynamics for parallel robots."""

from .dualquat import (DualNumber, DualQuaternion, Pose, Quaternion, Screw,
                       block_apply, block_matrix, dq_size, hodge_star,
                       normalize_one_plus, project_complement, screw_exp)
from .dynamics import (EffectiveMass, MassModel, bias_wrench, effective_mass,
                       euler_lagrange_bias, forward_dynamics,
                       gravity_wrench_term, kinetic_energy, no_load_forces,
                       potential_energy)
from .harness import (CampaignStats, EnergyAudit, SimState, Trajectory,
                      TrialConfig, energy_audit, fk_campaign, integrate,
                      perturb_pose, random_pose, read_trajectory_csv,
                      write_trajectory_csv)
from .kernels import BACKEND
from .liederiv import (BASIS_SCREWS, EvalContext, LieJet, constant,
                       fd_lie_oracle, fd_lie_partials, fd_second_table,
                       full_lie, hessian_of_normalized, jet_atan2, jet_chain,
                       jet_cross, jet_dot, jet_product, jet_reciprocal,
                       jet_sqrt, lie_directional, lie_of_fixed_direction,
                       lie_of_fixed_point, second_table, seed_pose)
from .models import (ActuatorJacobian, GeometryError, PulleyModel,
                     StewartModel, cable_direction_jets, cable_directions,
                     cable_length_jets, force_to_wrench, ik_lengths, jacobian,
                     second_lie_tables, singularity_measure)
from .files import RobotFileError, load_robot
from .screws import (FIXED, MOVING, Twist, Wrench, accel_change_frame,
                     jerk_change_frame, pose_rate_from_twist, screw_cross,
                     screw_ltimes, screw_rtimes, twist_about_com,
                     twist_change_frame, twist_from_pose_rate, work_rate,
                     wrench_about_com)
from .solvers import (SingularityError, SolveReport, SolveSettings, fk_exact,
                      fk_multistart, fk_overconstrained, retract)

__version__ = "0.1.0"
