import numpy as np
import pytest

from dqrobot import kernels
from dqrobot.harness import TrialConfig, random_pose
from dqrobot.models import ik_lengths

needs_both = pytest.mark.skipif(
    kernels.numba_backend is None,
    reason="numba backend unavailable (DQROBOT_BACKEND=numpy or numba missing)")


def poses(n, seed=0):
    rng = np.random.default_rng(seed)
    cfg = TrialConfig(seed=0)
    return [random_pose(cfg, rng) for _ in range(n)]


@needs_both
class TestBackendParity:
    def test_stewart_eval(self, stewart):
        for pose in poses(20):
            a = kernels.numpy_backend.stewart_eval(
                pose.components, stewart.attachments, stewart.anchors, True)
            b = kernels.numba_backend.stewart_eval(
                pose.components, stewart.attachments, stewart.anchors, True)
            for x, y in zip(a, b):
                assert np.array_equal(np.asarray(x), np.asarray(y))

    def test_pulley_eval(self, pulley):
        for pose in poses(20):
            args = (pose.components, pulley.attachments, pulley.axes,
                    pulley.axis_points, pulley.rod_offsets,
                    pulley.pulley_radii, True)
            a = kernels.numpy_backend.pulley_eval(*args)
            b = kernels.numba_backend.pulley_eval(*args)
            for x, y in zip(a, b):
                assert np.allclose(np.asarray(x), np.asarray(y), atol=0,
                                   rtol=1e-15)

    def test_exact_solver(self, stewart):
        rng = np.random.default_rng(1)
        cfg = TrialConfig(seed=0)
        for _ in range(10):
            pose = random_pose(cfg, rng)
            guess = random_pose(cfg, rng)
            ell = ik_lengths(stewart, pose)
            args = (guess.components, ell, stewart.attachments,
                    stewart.anchors, 1.0, 1e-13, 50, 0.5, 1e12)
            ea, ia, sa, st_a = kernels.numpy_backend.fk_exact_stewart(*args)
            eb, ib, sb, st_b = kernels.numba_backend.fk_exact_stewart(*args)
            assert (ia, st_a) == (ib, st_b)
            assert np.allclose(ea, eb, atol=1e-14)

    def test_over_solver(self, pulley):
        rng = np.random.default_rng(2)
        cfg = TrialConfig(seed=0)
        for _ in range(10):
            pose = random_pose(cfg, rng)
            guess = random_pose(cfg, rng)
            ell = ik_lengths(pulley, pose)
            args = (guess.components, ell, pulley.attachments, pulley.axes,
                    pulley.axis_points, pulley.rod_offsets,
                    pulley.pulley_radii, 1.0, 1e-16, 1e-13, 50, 0.5)
            ea, ia, la, sa, st_a = kernels.numpy_backend.fk_over_pulley(*args)
            eb, ib, lb, sb, st_b = kernels.numba_backend.fk_over_pulley(*args)
            assert (ia, st_a) == (ib, st_b)
            assert np.allclose(ea, eb, atol=1e-13)


class TestStatusCodes:
    def test_degenerate_leg(self):
        eta = np.zeros(8)
        eta[6] = 1.0
        rr = np.zeros((6, 3))
        ss = np.array([[0.0, 0, 0], [2, 0, 0], [0, 2, 0], [0, 0, 2],
                       [2, 2, 0], [0, 2, 2]])
        # anchor 0 coincides with attachment 0 at identity
        out = kernels.active.stewart_eval(eta, rr, ss, False)
        assert out[4] == kernels.ERR_DEGENERATE

    def test_backend_flag_consistency(self):
        import os
        choice = os.environ.get("DQROBOT_BACKEND", "auto")
        if choice == "numpy":
            assert kernels.BACKEND == "numpy"
        else:
            assert kernels.BACKEND in ("numpy", "numba")
            assert kernels.active is (kernels.numba_backend
                                      if kernels.BACKEND == "numba"
                                      else kernels.numpy_backend)


class TestPrimitives:
    def test_dq_mul_matches_object_layer(self, rng):
        from dqrobot.dualquat import DualQuaternion
        for _ in range(50):
            a = rng.normal(size=8)
            b = rng.normal(size=8)
            got = kernels.active.dq_mul8(a, b)
            expect = (DualQuaternion.from_components(a)
                      * DualQuaternion.from_components(b)).components
            assert np.allclose(got, expect, atol=1e-14)

    def test_normalize_matches_object_layer(self, rng):
        from dqrobot.dualquat import DualQuaternion
        for _ in range(50):
            a = rng.normal(size=8)
            got = kernels.active.normalize8(a)
            expect = DualQuaternion.from_components(a).normalized().components
            assert np.allclose(got, expect, atol=1e-13)

    def test_size_consistency(self, rng):
        from dqrobot.dualquat import Screw
        t = rng.normal(size=6)
        assert abs(kernels.active.size6(t, 2.0)
                   - Screw.from_components(t).size(2.0)) < 1e-15
