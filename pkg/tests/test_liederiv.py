import math

import numpy as np
import pytest

from dqrobot.dualquat import DualQuaternion, Pose, Screw, normalize_one_plus
from dqrobot.liederiv import (BASIS_SCREWS, FIRST, SECOND, EvalContext,
                              constant, fd_lie_oracle, fd_lie_partials,
                              fd_second_table, full_lie, hessian_of_normalized,
                              jet_atan2, jet_chain, jet_dot, jet_product,
                              jet_reciprocal, jet_sqrt, lie_directional,
                              lie_of_fixed_direction, lie_of_fixed_point,
                              second_table, seed_pose)
from dqrobot.models import cable_length_jets, ik_lengths, jacobian
from dqrobot.reference import box_pulley, octahedral_stewart
from dqrobot.screws import screw_cross

from conftest import rand_pose


def fixed_point_fn(pose0, s0):
    """Moving-frame coordinates of the world point that is at s0 for pose0."""
    world = pose0.apply(s0)
    return lambda pose: pose.apply_inverse(world)


class TestSeedAndLinear:
    def test_seed_at_identity(self):
        ctx = EvalContext(Pose.identity())
        jet = seed_pose(ctx)
        for i in range(6):
            expect = np.eye(8)[i]
            assert np.allclose(jet.partials[i].components, expect)

    def test_seed_partials_match_fd(self, rng):
        pose = rand_pose(rng)
        ctx = EvalContext(pose)
        jet = seed_pose(ctx)
        fd = fd_lie_partials(lambda p: p.dq.components, pose)
        for i in range(6):
            assert np.allclose(jet.partials[i].components, fd[i], atol=1e-8)

    def test_constant_jet(self, rng):
        ctx = EvalContext(rand_pose(rng), SECOND)
        jet = constant(ctx, 3.5)
        assert all(p == 0.0 for p in jet.partials)
        assert all(e == 0.0 for row in jet.second for e in row)

    def test_context_mismatch_rejected(self, rng):
        c1 = EvalContext(rand_pose(rng))
        c2 = EvalContext(rand_pose(rng))
        with pytest.raises(ValueError):
            _ = constant(c1, 1.0) + constant(c2, 1.0)


class TestProductRule:
    def test_multiply_by_constant_one(self, rng):
        pose = rand_pose(rng)
        ctx = EvalContext(pose, SECOND)
        jets = cable_length_jets(octahedral_stewart(), ctx)
        one = constant(ctx, 1.0)
        out = jet_product(jets[0], one, lambda a, b: a * b)
        assert np.allclose(full_lie(out).components,
                           full_lie(jets[0]).components)
        assert np.allclose(second_table(out), second_table(jets[0]))

    def test_square_of_point_function(self, rng):
        pose = rand_pose(rng)
        ctx = EvalContext(pose)
        s0 = rng.normal(size=3)
        g = fixed_point_fn(pose, s0)
        s_jet = lie_of_fixed_point(ctx, s0)
        sq = jet_dot(s_jet, s_jet)
        fd = fd_lie_partials(lambda p: float(g(p) @ g(p)), pose)
        for i in range(6):
            assert abs(sq.partials[i] - fd[i]) < 1e-7 * (1 + abs(sq.partials[i]))

    def test_leibniz_on_dual_quaternion_product(self, rng):
        pose = rand_pose(rng)
        ctx = EvalContext(pose)
        eta = seed_pose(ctx)
        sq = jet_product(eta, eta, lambda a, b: a * b)
        theta = Screw(rng.normal(size=3), rng.normal(size=3))
        directional = lie_directional(sq, theta)
        fd = fd_lie_oracle(lambda p: (p.dq * p.dq).components, pose, theta)
        assert np.allclose(directional.components, fd, atol=1e-7)
        # explicit Leibniz form
        deta = lie_directional(eta, theta)
        explicit = pose.dq * deta + deta * pose.dq
        assert np.allclose(directional.components, explicit.components,
                           atol=1e-13)


class TestChainRule:
    def test_identity_chain(self, rng):
        ctx = EvalContext(rand_pose(rng), SECOND)
        jets = cable_length_jets(box_pulley(), ctx)
        out = jet_chain(lambda v: v, [jets[0]], lambda v: (1.0,),
                        lambda v: ((0.0,),))
        assert np.allclose(full_lie(out).components,
                           full_lie(jets[0]).components)
        assert np.allclose(second_table(out), second_table(jets[0]))

    def test_sqrt_chain_on_pulley_span(self, rng):
        model = box_pulley()
        pose = rand_pose(rng)
        ctx = EvalContext(pose)
        x_m = pose.apply_inverse(model.axis_points[0])
        x_jet = lie_of_fixed_point(ctx, x_m)
        diff = x_jet - constant(ctx, model.attachments[0])
        dist = jet_sqrt(jet_dot(diff, diff))

        def g(p):
            d = p.apply_inverse(model.axis_points[0]) - model.attachments[0]
            return math.sqrt(d @ d)

        fd = fd_lie_partials(g, pose)
        for i in range(6):
            assert abs(dist.partials[i] - fd[i]) < 1e-7 * (1 + abs(fd[i]))

    def test_atan2_chain(self, rng):
        pose = rand_pose(rng)
        ctx = EvalContext(pose)
        s0 = np.array([0.7, -0.4, 0.2])
        g = fixed_point_fn(pose, s0)
        s_jet = lie_of_fixed_point(ctx, s0)
        y = s_jet.map(lambda v: float(v[1]))
        x = s_jet.map(lambda v: float(v[0]))
        out = jet_atan2(y, x)
        fd = fd_lie_partials(lambda p: math.atan2(g(p)[1], g(p)[0]), pose)
        for i in range(6):
            assert abs(out.partials[i] - fd[i]) < 1e-7 * (1 + abs(fd[i]))

    def test_reciprocal_chain(self, rng):
        ctx = EvalContext(rand_pose(rng), SECOND)
        jet = cable_length_jets(octahedral_stewart(), ctx)[2]
        out = jet_product(jet_reciprocal(jet), jet, lambda a, b: a * b)
        assert abs(out.value - 1.0) < 1e-14
        assert np.max(np.abs(full_lie(out).components)) < 1e-13
        assert np.max(np.abs(second_table(out))) < 1e-12


class TestFixedPointAndDirection:
    def test_translation_example(self, rng):
        ctx = EvalContext(rand_pose(rng))
        s = rng.normal(size=3)
        jet = lie_of_fixed_point(ctx, s)
        theta = Screw(np.zeros(3), np.array([0.5, 0, 0]))  # pure +x translation
        assert np.allclose(lie_directional(jet, theta), [-1, 0, 0], atol=1e-15)

    def test_rotation_example(self):
        ctx = EvalContext(Pose.identity())
        jet = lie_of_fixed_direction(ctx, np.array([1.0, 0, 0]))
        theta = Screw(np.array([0, 0, 0.5]), np.zeros(3))  # pure z rotation
        assert np.allclose(lie_directional(jet, theta), [0, -1, 0], atol=1e-15)

    def test_against_fd_at_random_poses(self, rng):
        for _ in range(100):
            pose = rand_pose(rng)
            ctx = EvalContext(pose)
            s0 = rng.normal(size=3)
            jet = lie_of_fixed_point(ctx, s0)
            fd = fd_lie_partials(fixed_point_fn(pose, s0), pose)
            for i in range(6):
                assert np.allclose(jet.partials[i], fd[i], atol=1e-8)
            n0 = rng.normal(size=3)
            n0 /= np.linalg.norm(n0)
            jet_n = lie_of_fixed_direction(ctx, n0)
            world_n = pose.apply_direction(n0)
            fd_n = fd_lie_partials(
                lambda p: p.apply_inverse_direction(world_n), pose)
            for i in range(6):
                assert np.allclose(jet_n.partials[i], fd_n[i], atol=1e-8)

    def test_unit_direction_required(self):
        with pytest.raises(ValueError):
            lie_of_fixed_direction(EvalContext(Pose.identity()), [0, 0, 2])


class TestDirectionalAndTime:
    def test_basis_contraction(self, rng):
        ctx = EvalContext(rand_pose(rng))
        jet = cable_length_jets(octahedral_stewart(), ctx)[0]
        for i in range(6):
            assert abs(lie_directional(jet, BASIS_SCREWS[i]) - jet.partials[i]) < 1e-15

    def test_linearity(self, rng):
        ctx = EvalContext(rand_pose(rng))
        jet = cable_length_jets(box_pulley(), ctx)[3]
        th, ps = Screw(rng.normal(size=3), rng.normal(size=3)), \
            Screw(rng.normal(size=3), rng.normal(size=3))
        lhs = lie_directional(jet, th + ps * 2.0)
        rhs = lie_directional(jet, th) + 2.0 * lie_directional(jet, ps)
        assert abs(lhs - rhs) < 1e-12

    def test_time_derivative_along_trajectory(self, rng):
        # d/dt g(eta(t)) equals the Lie derivative along the twist
        model = octahedral_stewart()
        pose = rand_pose(rng)
        phi = Screw(0.3 * rng.normal(size=3), 0.3 * rng.normal(size=3))
        ctx = EvalContext(pose)
        jets = cable_length_jets(model, ctx)
        analytic = np.array([lie_directional(j, phi) for j in jets])
        dt = 1e-6
        from dqrobot.dualquat import screw_exp
        lp = ik_lengths(model, pose * screw_exp(phi * dt))
        lm = ik_lengths(model, pose * screw_exp(phi * -dt))
        fd = (lp - lm) / (2 * dt)
        assert np.allclose(analytic, fd, atol=1e-6)


class TestSecondOrder:
    def test_constant_hessian_zero(self, rng):
        ctx = EvalContext(rand_pose(rng), SECOND)
        assert np.allclose(hessian_of_normalized(constant(ctx, 2.0)), 0.0)

    def test_hessian_symmetric(self, rng):
        ctx = EvalContext(rand_pose(rng), SECOND)
        jet = cable_length_jets(box_pulley(), ctx)[1]
        h = hessian_of_normalized(jet)
        assert np.allclose(h, h.T)

    def test_hessian_matches_fd_of_retracted_argument(self, rng):
        model = octahedral_stewart()
        pose = rand_pose(rng)
        ctx = EvalContext(pose, SECOND)
        jet = cable_length_jets(model, ctx)[0]
        h = hessian_of_normalized(jet)

        def g(theta6):
            retracted = pose * normalize_one_plus(Screw.from_components(theta6))
            return float(ik_lengths(model, retracted)[0])

        r = 1e-4
        h_fd = np.empty((6, 6))
        for i in range(6):
            for j in range(6):
                e_i, e_j = np.eye(6)[i] * r, np.eye(6)[j] * r
                h_fd[i, j] = (g(e_i + e_j) - g(e_i - e_j)
                              - g(e_j - e_i) + g(-e_i - e_j)) / (4 * r * r)
        assert np.max(np.abs(h - h_fd)) < 1e-5

    def test_requires_second_table(self, rng):
        ctx = EvalContext(rand_pose(rng), FIRST)
        jet = cable_length_jets(octahedral_stewart(), ctx)[0]
        with pytest.raises(ValueError):
            second_table(jet)

    def test_commutator_identity_jets(self, rng):
        # L_th L_ps - L_ps L_th = L_(th ps - ps th) for cable lengths and
        # fixed-point coordinates
        worst = 0.0
        for model in (octahedral_stewart(), box_pulley()):
            for _ in range(10):
                pose = rand_pose(rng)
                ctx = EvalContext(pose, SECOND)
                jets = cable_length_jets(model, ctx)
                th = Screw(rng.normal(size=3), rng.normal(size=3))
                ps = Screw(rng.normal(size=3), rng.normal(size=3))
                bracket = 2.0 * screw_cross(th, ps)
                for jet in jets[::3]:
                    t = second_table(jet)
                    lhs = th.components @ (t - t.T) @ ps.components
                    rhs = bracket.components @ full_lie(jet).components
                    worst = max(worst, abs(lhs - rhs))
        # fixed-point coordinate component
        pose = rand_pose(rng)
        ctx = EvalContext(pose, SECOND)
        s_jet = lie_of_fixed_point(ctx, rng.normal(size=3))
        comp = s_jet.map(lambda v: float(v[2]))
        th = Screw(rng.normal(size=3), rng.normal(size=3))
        ps = Screw(rng.normal(size=3), rng.normal(size=3))
        t = second_table(comp)
        lhs = th.components @ (t - t.T) @ ps.components
        rhs = (2.0 * screw_cross(th, ps)).components @ full_lie(comp).components
        worst = max(worst, abs(lhs - rhs))
        assert worst < 1e-10

    def test_second_table_against_nested_fd(self, rng):
        model = box_pulley()
        pose = rand_pose(rng)
        ctx = EvalContext(pose, SECOND)
        jet = cable_length_jets(model, ctx)[5]
        t = second_table(jet)
        t_fd = fd_second_table(lambda p: float(ik_lengths(model, p)[5]), pose)
        assert np.max(np.abs(t - t_fd)) < 1e-5


class TestFdOracle:
    def test_linear_is_exact(self, rng):
        pose = rand_pose(rng)
        c = rng.normal(size=8)
        theta = Screw(rng.normal(size=3), rng.normal(size=3))
        fd = fd_lie_oracle(lambda p: float(c @ p.dq.components), pose, theta)
        exact = float(c @ (pose.dq * theta.to_dual_quaternion()).components)
        assert abs(fd - exact) < 1e-9 * (1 + abs(exact))

    def test_matches_analytic_jacobian_row(self, rng, stewart):
        pose = rand_pose(rng)
        lam = jacobian(stewart, pose).matrix
        for i in range(6):
            fd = fd_lie_oracle(lambda p: ik_lengths(stewart, p), pose,
                               BASIS_SCREWS[i])
            assert np.allclose(fd, lam[:, i], atol=1e-8)

    def test_second_order_convergence(self, rng, stewart):
        pose = rand_pose(rng)
        theta = Screw(rng.normal(size=3), rng.normal(size=3))
        g = lambda p: float(ik_lengths(stewart, p)[0])
        ref = fd_lie_oracle(g, pose, theta, r=1e-6)
        errs = [abs(fd_lie_oracle(g, pose, theta, r=r) - ref)
                for r in (4e-3, 2e-3, 1e-3)]
        orders = [math.log2(errs[k] / errs[k + 1]) for k in range(2)]
        assert all(o > 1.7 for o in orders)

    def test_step_validation(self, rng):
        pose = rand_pose(rng)
        with pytest.raises(ValueError):
            fd_lie_oracle(lambda p: 0.0, pose, BASIS_SCREWS[0], r=1.0)

    def test_extension_independence(self, rng, stewart):
        # differentiating through the raw perturbation eta(1 + r theta) and
        # through the retracted one eta normalize(1 + r theta) gives the same
        # limit; Richardson extrapolation exposes the common value
        pose = rand_pose(rng)
        theta = Screw(rng.normal(size=3), rng.normal(size=3))
        theta = theta * (1.0 / theta.size())
        anchor = stewart.anchors[0]
        attach = stewart.attachments[0]

        def g_dq(dq):
            # length formula extended to invertible dual quaternions by the
            # same algebra (no unitness assumed anywhere)
            q, b = dq.p, dq.d
            t = (2.0 * (b * q.inverse())).vec
            s = q.inverse().rotate(anchor - t)
            d = attach - s
            return math.sqrt(d @ d)

        def raw_diff(r):
            one = DualQuaternion.identity()
            plus = pose.dq * (one + (theta * r).to_dual_quaternion())
            minus = pose.dq * (one + (theta * -r).to_dual_quaternion())
            return (g_dq(plus) - g_dq(minus)) / (2 * r)

        def retracted_diff(r):
            return fd_lie_oracle(lambda p: g_dq(p.dq), pose, theta, r=r)

        def richardson(f):
            a, b = f(1e-3), f(5e-4)
            return (4 * b - a) / 3.0

        raw = richardson(raw_diff)
        retracted = richardson(retracted_diff)
        assert abs(raw - retracted) < 1e-11 * (1 + abs(raw))
