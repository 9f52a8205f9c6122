#!/usr/bin/env python3
"""Compare the numba-compiled kernels against the pure-numpy fallback.

Runs the per-pose geometry kernels and the full Newton solves on both
backends (they are importable side by side) and prints a timing table.
Usage: python benchmarks/bench_backends.py [--repeats N]
"""

import argparse
import time

import numpy as np

from dqrobot import kernels
from dqrobot.harness import TrialConfig, random_pose
from dqrobot.models import ik_lengths
from dqrobot.reference import box_pulley, octahedral_stewart


def timeit(fn, repeats):
    fn()  # warm up (numba compiles here)
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - t0) / repeats


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeats", type=int, default=200)
    args = ap.parse_args()

    if kernels.numba_backend is None:
        raise SystemExit("numba backend unavailable; nothing to compare "
                         "(unset DQROBOT_BACKEND or install numba)")

    st = octahedral_stewart()
    pu = box_pulley()
    rng = np.random.default_rng(0)
    cfg = TrialConfig(seed=0)
    pose = random_pose(cfg, rng)
    eta8 = pose.components
    guess8 = random_pose(cfg, rng).components
    ell_st = ik_lengths(st, pose)
    ell_pu = ik_lengths(pu, pose)

    cases = {
        "stewart_eval (second order)": lambda b: b.stewart_eval(
            eta8, st.attachments, st.anchors, True),
        "pulley_eval (second order)": lambda b: b.pulley_eval(
            eta8, pu.attachments, pu.axes, pu.axis_points, pu.rod_offsets,
            pu.pulley_radii, True),
        "fk_exact_stewart (full solve)": lambda b: b.fk_exact_stewart(
            guess8, ell_st, st.attachments, st.anchors,
            1.0, 1e-13, 50, 0.5, 1e12),
        "fk_over_pulley (full solve)": lambda b: b.fk_over_pulley(
            guess8, ell_pu, pu.attachments, pu.axes, pu.axis_points,
            pu.rod_offsets, pu.pulley_radii, 1.0, 1e-16, 1e-13, 50, 0.5),
    }

    print(f"{'kernel':<32}{'numpy':>12}{'numba':>12}{'speedup':>10}")
    for name, call in cases.items():
        t_np = timeit(lambda: call(kernels.numpy_backend), max(1, args.repeats // 10))
        t_nb = timeit(lambda: call(kernels.numba_backend), args.repeats)
        print(f"{name:<32}{t_np * 1e6:>10.1f}us{t_nb * 1e6:>10.1f}us"
              f"{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
