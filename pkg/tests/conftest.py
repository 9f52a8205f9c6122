import numpy as np
import pytest

from dqrobot.dualquat import Pose
from dqrobot.harness import TrialConfig, random_pose
from dqrobot.models import ik_lengths, second_lie_tables
from dqrobot.reference import box_pulley, octahedral_stewart


@pytest.fixture(scope="session")
def stewart():
    return octahedral_stewart()


@pytest.fixture(scope="session")
def pulley():
    return box_pulley()


@pytest.fixture(scope="session", autouse=True)
def warm_kernels(stewart, pulley):
    # trigger numba compilation outside any timed test section
    second_lie_tables(stewart, Pose.identity())
    second_lie_tables(pulley, Pose.identity())
    from dqrobot import kernels
    eta = Pose.identity().components
    ell = ik_lengths(stewart, Pose.identity())
    kernels.active.fk_exact_stewart(eta, ell, stewart.attachments,
                                    stewart.anchors, 1.0, 1e-13, 50, 0.5, 1e12)
    ell = ik_lengths(pulley, Pose.identity())
    kernels.active.fk_over_pulley(eta, ell, pulley.attachments, pulley.axes,
                                  pulley.axis_points, pulley.rod_offsets,
                                  pulley.pulley_radii, 1.0, 1e-16, 1e-13, 50, 0.5)
    yield


def rand_pose(rng, max_angle=np.pi / 6, box=0.25):
    cfg = TrialConfig(max_angle=max_angle, translation_box=(box, box, box))
    return random_pose(cfg, rng)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
