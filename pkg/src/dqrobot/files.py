"""Robot description files and the other JSON wire formats.

Robot file schema (SI units: meters, kilograms, radians)::

    {
      "type": "stewart" | "pulley",
      "units": "m",
      "actuators": [ ... ],          # one object per actuator
      "mass": { ... }                # optional mass-properties block
    }

Stewart actuator: ``{"r": [x,y,z], "s": [x,y,z]}``: moving-frame
attachment and fixed-frame anchor.  Pulley actuator: ``{"r": [x,y,z],
"n": [x,y,z], "x": [x,y,z], "w": 0.08, "p": 0.04}``: attachment, swivel
axis direction and point (fixed frame), rod offset, pulley radius.

Mass block: ``{"m_e": 10.0, "M_e": [[...3x3...]], "r0": [x,y,z],
"M0": 0.1 | [..n..] | [[..nxn..]], "g": [x,y,z]}``; ``M0`` may be a
scalar multiple of the identity, a diagonal, or a full matrix.

Pose files carry the eight components in the package basis order
``(i, j, k, eps i, eps j, eps k, 1, eps)`` under the key ``"pose"``.
Length files carry ``"lengths": [..n..]`` or ``"series": [[..n..], ...]``.
"""

from __future__ import annotations

import json

import numpy as np

from .dualquat import Pose
from .dynamics import MassModel
from .models import PulleyModel, StewartModel
from .screws import Wrench


class RobotFileError(ValueError):
    """Malformed description file; the message names the offending field."""


def _get(obj, key, where):
    if key not in obj:
        raise RobotFileError(f"{where}: missing field {key!r}")
    return obj[key]


def _vec(obj, key, where, n=3):
    v = _get(obj, key, where)
    try:
        a = np.asarray(v, dtype=float)
    except (TypeError, ValueError):
        raise RobotFileError(f"{where}.{key}: expected {n} numbers") from None
    if a.shape != (n,):
        raise RobotFileError(f"{where}.{key}: expected {n} numbers, got {v!r}")
    return a


def _scalar(obj, key, where):
    v = _get(obj, key, where)
    if not isinstance(v, (int, float)) or isinstance(v, bool):
        raise RobotFileError(f"{where}.{key}: expected a number, got {v!r}")
    return float(v)


def parse_robot(doc: dict, where: str = "robot"):
    """Build ``(model, mass_model_or_None)`` from a parsed robot document."""
    if not isinstance(doc, dict):
        raise RobotFileError(f"{where}: expected a JSON object")
    kind = _get(doc, "type", where)
    units = doc.get("units", "m")
    if units != "m":
        raise RobotFileError(f"{where}.units: only 'm' is supported, got {units!r}")
    acts = _get(doc, "actuators", where)
    if not isinstance(acts, list) or not acts:
        raise RobotFileError(f"{where}.actuators: expected a nonempty list")
    try:
        if kind == "stewart":
            r = [_vec(a, "r", f"{where}.actuators[{i}]") for i, a in enumerate(acts)]
            s = [_vec(a, "s", f"{where}.actuators[{i}]") for i, a in enumerate(acts)]
            model = StewartModel(np.array(r), np.array(s))
        elif kind == "pulley":
            r, n, x, w, p = [], [], [], [], []
            for i, a in enumerate(acts):
                loc = f"{where}.actuators[{i}]"
                r.append(_vec(a, "r", loc))
                n.append(_vec(a, "n", loc))
                x.append(_vec(a, "x", loc))
                w.append(_scalar(a, "w", loc))
                p.append(_scalar(a, "p", loc))
            model = PulleyModel(np.array(r), np.array(n), np.array(x),
                                np.array(w), np.array(p))
        else:
            raise RobotFileError(
                f"{where}.type: expected 'stewart' or 'pulley', got {kind!r}")
    except ValueError as exc:
        if isinstance(exc, RobotFileError):
            raise
        raise RobotFileError(f"{where}: {exc}") from exc
    mass = None
    if "mass" in doc:
        mass = parse_mass(doc["mass"], model.n, f"{where}.mass")
    return model, mass


def parse_mass(doc: dict, n: int, where: str = "mass") -> MassModel:
    if not isinstance(doc, dict):
        raise RobotFileError(f"{where}: expected a JSON object")
    m_e = _scalar(doc, "m_e", where)
    inertia = _get(doc, "M_e", where)
    try:
        inertia = np.asarray(inertia, dtype=float)
    except (TypeError, ValueError):
        raise RobotFileError(f"{where}.M_e: expected a 3x3 matrix") from None
    if inertia.shape != (3, 3):
        raise RobotFileError(f"{where}.M_e: expected a 3x3 matrix")
    r0 = _vec(doc, "r0", where)
    g = _vec(doc, "g", where)
    m0 = doc.get("M0")
    if m0 is not None:
        try:
            m0 = np.asarray(m0, dtype=float)
        except (TypeError, ValueError):
            raise RobotFileError(f"{where}.M0: expected scalar, diagonal, or matrix") from None
        if m0.ndim == 0:
            m0 = float(m0)
        elif m0.ndim == 1 and m0.shape != (n,):
            raise RobotFileError(f"{where}.M0: diagonal needs {n} entries")
        elif m0.ndim == 2 and m0.shape != (n, n):
            raise RobotFileError(f"{where}.M0: matrix must be {n}x{n}")
        elif m0.ndim > 2:
            raise RobotFileError(f"{where}.M0: expected scalar, diagonal, or matrix")
    try:
        mass = MassModel(mass=m_e, inertia=inertia, r0=r0, actuator_mass=m0,
                         gravity=g)
        mass.actuator_mass_matrix(n)
    except ValueError as exc:
        raise RobotFileError(f"{where}: {exc}") from exc
    return mass


def load_robot(path):
    """Load a robot description file; returns ``(model, mass_or_None)``."""
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise RobotFileError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    return parse_robot(doc, str(path))


def load_pose(path) -> Pose:
    with open(path) as fh:
        doc = json.load(fh)
    comps = _vec(doc, "pose", str(path), n=8)
    try:
        return Pose.from_components(comps)
    except ValueError as exc:
        raise RobotFileError(f"{path}: {exc}") from exc


def dump_pose(pose: Pose) -> dict:
    return {"pose": pose.components.tolist()}


def load_lengths(path):
    """Returns ``(lengths, None)`` or ``(None, series)`` for tracking files."""
    with open(path) as fh:
        doc = json.load(fh)
    where = str(path)
    if "lengths" in doc and "series" in doc:
        raise RobotFileError(f"{where}: give either 'lengths' or 'series', not both")
    if "lengths" in doc:
        a = np.asarray(doc["lengths"], dtype=float)
        if a.ndim != 1:
            raise RobotFileError(f"{where}.lengths: expected a flat list")
        return a, None
    if "series" in doc:
        a = np.asarray(doc["series"], dtype=float)
        if a.ndim != 2:
            raise RobotFileError(f"{where}.series: expected a list of length vectors")
        return None, a
    raise RobotFileError(f"{where}: missing field 'lengths' or 'series'")


def load_wrench_schedule(path):
    """Wrench schedule: ``{"type": "constant", "q": [...], "p": [...]}`` or
    ``{"type": "sine", "q_amp": [...], "p_amp": [...], "q_bias": [...],
    "p_bias": [...], "freq_hz": f}``."""
    with open(path) as fh:
        doc = json.load(fh)
    where = str(path)
    kind = _get(doc, "type", where)
    if kind == "constant":
        q = _vec(doc, "q", where)
        p = _vec(doc, "p", where)
        return lambda t: Wrench(q, p)
    if kind == "sine":
        q_amp = _vec(doc, "q_amp", where)
        p_amp = _vec(doc, "p_amp", where)
        q_bias = _vec(doc, "q_bias", where) if "q_bias" in doc else np.zeros(3)
        p_bias = _vec(doc, "p_bias", where) if "p_bias" in doc else np.zeros(3)
        freq = _scalar(doc, "freq_hz", where)
        om = 2.0 * np.pi * freq

        def schedule(t):
            return Wrench(q_bias + q_amp * np.sin(om * t),
                          p_bias + p_amp * np.cos(om * t))

        return schedule
    raise RobotFileError(f"{where}.type: expected 'constant' or 'sine', got {kind!r}")
