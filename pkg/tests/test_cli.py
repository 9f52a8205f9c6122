import json

import numpy as np
import pytest

from dqrobot.cli import main
from dqrobot.dualquat import Pose, Quaternion
from dqrobot.files import dump_pose
from dqrobot.models import ik_lengths
from dqrobot.reference import data_path

STEWART = str(data_path("stewart_octahedral.json"))
PULLEY = str(data_path("pulley_box8.json"))


@pytest.fixture
def pose_file(tmp_path):
    pose = Pose.from_rotation_translation(
        Quaternion.rotation([0.2, 1.0, 0.1], 0.4), [0.08, -0.05, 0.1])
    path = tmp_path / "pose.json"
    path.write_text(json.dumps(dump_pose(pose)))
    return str(path), pose


class TestIkFk:
    def test_round_trip(self, tmp_path, pose_file, capsys):
        pose_path, pose = pose_file
        lengths_path = str(tmp_path / "lengths.json")
        assert main(["ik", "--robot", STEWART, "--pose", pose_path,
                     "--out", lengths_path]) == 0
        report_path = str(tmp_path / "report.json")
        assert main(["fk", "--robot", STEWART, "--lengths", lengths_path,
                     "--out", report_path]) == 0
        report = json.loads(open(report_path).read())
        assert report["converged"]
        assert report["residual_inf"] < 1e-10
        assert np.max(np.abs(np.array(report["pose"]) - pose.components)) < 1e-10

    def test_identity_lengths_identity_pose(self, stewart, tmp_path):
        lengths = ik_lengths(stewart, Pose.identity())
        lf = tmp_path / "l.json"
        lf.write_text(json.dumps({"lengths": lengths.tolist()}))
        rf = tmp_path / "r.json"
        assert main(["fk", "--robot", STEWART, "--lengths", str(lf),
                     "--guess", "identity", "--out", str(rf)]) == 0
        report = json.loads(rf.read_text())
        comps = np.array(report["pose"])
        assert np.max(np.abs(comps - Pose.identity().components)) < 1e-12

    def test_tracking_with_previous_guess(self, pulley, tmp_path):
        from dqrobot.dualquat import Screw, normalize_one_plus
        pose = Pose.identity()
        series = []
        for k in range(20):
            theta = Screw.from_components(
                0.003 * np.array([np.sin(k / 5), np.cos(k / 7), 0.5,
                                  np.cos(k / 3), 0.2, np.sin(k / 9)]) / 1.2)
            pose = pose * normalize_one_plus(theta)
            series.append(ik_lengths(pulley, pose).tolist())
        lf = tmp_path / "series.json"
        lf.write_text(json.dumps({"series": series}))
        rf = tmp_path / "out.json"
        assert main(["fk", "--robot", PULLEY, "--lengths", str(lf),
                     "--guess", "previous", "--out", str(rf)]) == 0
        doc = json.loads(rf.read_text())
        assert len(doc["solves"]) == 20
        assert all(s["converged"] for s in doc["solves"])

    def test_previous_guess_requires_series(self, tmp_path):
        lf = tmp_path / "l.json"
        lf.write_text(json.dumps({"lengths": [1, 1, 1, 1, 1, 1]}))
        assert main(["fk", "--robot", STEWART, "--lengths", str(lf),
                     "--guess", "previous"]) == 2

    def test_infeasible_solve_exits_nonzero(self, stewart, tmp_path):
        # all six legs shorter than any attachment-anchor distance can be
        lf = tmp_path / "l.json"
        lf.write_text(json.dumps({"lengths": [0.05] * 6}))
        assert main(["fk", "--robot", STEWART, "--lengths", str(lf)]) in (1, 2)


class TestSimulateAndAudit:
    def test_flow(self, tmp_path, capsys):
        sched = tmp_path / "sched.json"
        sched.write_text(json.dumps({
            "type": "sine", "q_amp": [0.2, 0.1, 0.15], "p_amp": [2.0, 1.5, 1.0],
            "p_bias": [0.0, 0.0, 98.1], "freq_hz": 1.0}))
        traj = tmp_path / "traj.csv"
        assert main(["simulate", "--robot", PULLEY, "--schedule", str(sched),
                     "--dt", "2e-3", "--t-end", "0.2",
                     "--out", str(traj)]) == 0
        capsys.readouterr()
        out_json = tmp_path / "audit.json"
        assert main(["audit-energy", "--robot", PULLEY, "--schedule",
                     str(sched), "--traj", str(traj),
                     "--out", str(out_json)]) == 0
        doc = json.loads(out_json.read_text())
        assert doc["max_pairwise_relative"] < 1e-6

    def test_simulate_needs_mass_block(self, tmp_path):
        doc = json.loads(open(STEWART).read())
        del doc["mass"]
        rf = tmp_path / "robot.json"
        rf.write_text(json.dumps(doc))
        sched = tmp_path / "sched.json"
        sched.write_text(json.dumps({"type": "constant", "q": [0, 0, 0],
                                     "p": [0, 0, 0]}))
        assert main(["simulate", "--robot", str(rf), "--schedule", str(sched),
                     "--dt", "1e-2", "--t-end", "0.1"]) == 2


class TestBench:
    def test_exact_stats(self, tmp_path):
        out = tmp_path / "stats.json"
        assert main(["bench-fk", "--robot", STEWART, "--trials", "40",
                     "--seed", "4", "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert doc["trials"] == 40
        assert doc["success_rate"] == 1.0
        assert doc["mode"] == "exact"

    def test_multistart_stats(self, tmp_path):
        out = tmp_path / "stats.json"
        assert main(["bench-fk", "--robot", PULLEY, "--trials", "5",
                     "--mode", "multistart", "--seed", "4",
                     "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert doc["success_rate"] == 1.0
        assert doc["mean_restarts"] >= 1.0


class TestDeterminism:
    def test_fk_output_byte_stable(self, tmp_path, pose_file):
        pose_path, _ = pose_file
        lf = str(tmp_path / "l.json")
        main(["ik", "--robot", STEWART, "--pose", pose_path, "--out", lf])
        outs = []
        for name in ("a.json", "b.json"):
            out = tmp_path / name
            assert main(["fk", "--robot", STEWART, "--lengths", lf,
                         "--out", str(out)]) == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]


class TestCheck:
    def test_check_passes(self, capsys):
        assert main(["check"]) == 0
        out = capsys.readouterr().out
        assert out.count("pass") >= 9 and "FAIL" not in out


class TestErrors:
    def test_malformed_robot_file(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"type": "stewart", "actuators": [
            {"r": [0, 0, 0]}]}))
        assert main(["ik", "--robot", str(bad), "--pose", str(bad)]) == 2
        err = capsys.readouterr().err
        assert "actuators[0]" in err and "'s'" in err

    def test_broken_json_reports_line(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{\n  broken\n}")
        assert main(["ik", "--robot", str(bad), "--pose", str(bad)]) == 2
        assert "line 2" in capsys.readouterr().err
