"""Quaternion, dual-number, and dual-quaternion algebra.

Conventions used throughout the package:

* Quaternions are Hamilton quaternions ``w + x i + y j + z k`` with
  ``i^2 = j^2 = k^2 = ijk = -1``.
* A dual quaternion is a pair ``A + eps B`` with the extra rule
  ``eps^2 = 0``; ``A`` is the primary part and ``B`` the dual part.
* A rigid motion (rotation ``Q`` then translation ``t``) is the unit dual
  quaternion ``Q + 0.5 eps t Q``; it moves points by ``r -> Q r Q* + t``
  and composes by left multiplication.
* Component vectors are ordered ``(i, j, k, eps i, eps j, eps k, 1, eps)``.
  A screw (vector dual quaternion, both real parts zero) keeps the first
  six slots; that ordering is the wire contract for the whole package.
* The primary part of a pose is unitless while its dual part carries
  length, so magnitudes mix the two through a characteristic length ``l``
  (default 1 m everywhere).
"""

from __future__ import annotations

import math

import numpy as np

# Pose construction tolerances on the components of eta* eta - 1:
# accepted silently below UNIT_ACCEPT, renormalized up to UNIT_RENORM,
# rejected beyond.
UNIT_ACCEPT = 1e-9
UNIT_RENORM = 1e-6


def _vec3(v) -> np.ndarray:
    a = np.asarray(v, dtype=float)
    if a.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {a.shape}")
    return a


class Quaternion:
    """Hamilton quaternion ``w + x i + y j + z k``.

    Instances are immutable by convention; all operations return new
    objects.
    """

    __slots__ = ("w", "x", "y", "z")

    def __init__(self, w=0.0, x=0.0, y=0.0, z=0.0):
        self.w = float(w)
        self.x = float(x)
        self.y = float(y)
        self.z = float(z)

    @classmethod
    def from_vector(cls, v) -> "Quaternion":
        """Vector quaternion (zero real part) from a 3-vector."""
        v = _vec3(v)
        return cls(0.0, v[0], v[1], v[2])

    @classmethod
    def rotation(cls, axis, angle: float) -> "Quaternion":
        """Unit quaternion for a rotation of ``angle`` radians about ``axis``."""
        axis = _vec3(axis)
        n = np.linalg.norm(axis)
        if n == 0.0:
            raise ValueError("rotation axis must be nonzero")
        h = 0.5 * float(angle)
        s = math.sin(h) / n
        return cls(math.cos(h), s * axis[0], s * axis[1], s * axis[2])

    @property
    def real(self) -> float:
        return self.w

    @property
    def vec(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def dot(self, other: "Quaternion") -> float:
        return self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z

    def norm2(self) -> float:
        return self.dot(self)

    def norm(self) -> float:
        return math.sqrt(self.norm2())

    def normalized(self) -> "Quaternion":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero quaternion")
        return (1.0 / n) * self

    def inverse(self) -> "Quaternion":
        n2 = self.norm2()
        if n2 == 0.0:
            raise ValueError("zero quaternion is not invertible")
        return (1.0 / n2) * self.conjugate()

    def rotate(self, v) -> np.ndarray:
        """Apply ``Q v Q*`` to a 3-vector.  Assumes ``|Q| = 1``."""
        v = _vec3(v)
        q = self.vec
        t = 2.0 * np.cross(q, v)
        return v + self.w * t + np.cross(q, t)

    def __add__(self, other):
        if isinstance(other, Quaternion):
            return Quaternion(self.w + other.w, self.x + other.x,
                              self.y + other.y, self.z + other.z)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, Quaternion):
            return Quaternion(self.w - other.w, self.x - other.x,
                              self.y - other.y, self.z - other.z)
        return NotImplemented

    def __neg__(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            a, b = self, other
            return Quaternion(
                a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
                a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
                a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
                a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
            )
        if isinstance(other, (int, float)):
            s = float(other)
            return Quaternion(self.w * s, self.x * s, self.y * s, self.z * s)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self.__mul__(other)
        return NotImplemented

    def __repr__(self):
        return f"Quaternion({self.w:g}, {self.x:g}, {self.y:g}, {self.z:g})"


class DualNumber:
    """Dual number ``re + eps du`` with ``eps^2 = 0``."""

    __slots__ = ("re", "du")

    def __init__(self, re=0.0, du=0.0):
        self.re = float(re)
        self.du = float(du)

    def __add__(self, other):
        o = other if isinstance(other, DualNumber) else DualNumber(other)
        return DualNumber(self.re + o.re, self.du + o.du)

    __radd__ = __add__

    def __sub__(self, other):
        o = other if isinstance(other, DualNumber) else DualNumber(other)
        return DualNumber(self.re - o.re, self.du - o.du)

    def __rsub__(self, other):
        return DualNumber(other) - self

    def __neg__(self):
        return DualNumber(-self.re, -self.du)

    def __mul__(self, other):
        if isinstance(other, DualNumber):
            return DualNumber(self.re * other.re,
                              self.re * other.du + self.du * other.re)
        if isinstance(other, (int, float)):
            return DualNumber(self.re * other, self.du * other)
        return NotImplemented

    __rmul__ = __mul__

    def inverse(self) -> "DualNumber":
        if self.re == 0.0:
            raise ValueError("dual number with zero real part is not invertible")
        inv = 1.0 / self.re
        return DualNumber(inv, -self.du * inv * inv)

    def sqrt(self) -> "DualNumber":
        if self.re <= 0.0:
            raise ValueError("dual-number square root needs a positive real part")
        r = math.sqrt(self.re)
        return DualNumber(r, 0.5 * self.du / r)

    def __repr__(self):
        return f"DualNumber({self.re:g}, {self.du:g})"


class DualQuaternion:
    """Pair of quaternions ``p + eps d``."""

    __slots__ = ("p", "d")

    def __init__(self, p: Quaternion | None = None, d: Quaternion | None = None):
        self.p = p if p is not None else Quaternion()
        self.d = d if d is not None else Quaternion()

    @classmethod
    def identity(cls) -> "DualQuaternion":
        return cls(Quaternion(1.0), Quaternion())

    @classmethod
    def from_components(cls, c) -> "DualQuaternion":
        """Inverse of :attr:`components`; ``c`` has the 8-slot basis order."""
        c = np.asarray(c, dtype=float)
        if c.shape != (8,):
            raise ValueError(f"expected 8 components, got shape {c.shape}")
        return cls(Quaternion(c[6], c[0], c[1], c[2]),
                   Quaternion(c[7], c[3], c[4], c[5]))

    @property
    def components(self) -> np.ndarray:
        """Coefficients in the basis ``(i, j, k, eps i, eps j, eps k, 1, eps)``."""
        p, d = self.p, self.d
        return np.array([p.x, p.y, p.z, d.x, d.y, d.z, p.w, d.w])

    def conjugate(self) -> "DualQuaternion":
        return DualQuaternion(self.p.conjugate(), self.d.conjugate())

    def dot(self, other: "DualQuaternion") -> float:
        return self.p.dot(other.p) + self.d.dot(other.d)

    def norm(self) -> DualNumber:
        """Dual-number norm ``|A| + eps (A . B)/|A|``; multiplicative."""
        a = self.p.norm()
        if a == 0.0:
            raise ValueError("dual quaternion with zero primary part has no norm")
        return DualNumber(a, self.p.dot(self.d) / a)

    def normalized(self) -> "DualQuaternion":
        """Unit dual quaternion ``eta |eta|^-1``; idempotent, multiplicative."""
        return self * self.norm().inverse()

    def inverse(self) -> "DualQuaternion":
        if self.p.norm2() == 0.0:
            raise ValueError("dual quaternion with zero primary part is not invertible")
        pinv = self.p.inverse()
        return DualQuaternion(pinv, -1.0 * (pinv * self.d * pinv))

    def size(self, l: float = 1.0) -> float:
        """Magnitude mixing unitless primary and length-valued dual parts."""
        if l <= 0.0:
            raise ValueError("characteristic length must be positive")
        return math.sqrt(self.p.norm2() + self.d.norm2() / (l * l))

    def __add__(self, other):
        if isinstance(other, DualQuaternion):
            return DualQuaternion(self.p + other.p, self.d + other.d)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, DualQuaternion):
            return DualQuaternion(self.p - other.p, self.d - other.d)
        return NotImplemented

    def __neg__(self):
        return DualQuaternion(-self.p, -self.d)

    def __mul__(self, other):
        if isinstance(other, DualQuaternion):
            return DualQuaternion(self.p * other.p,
                                  self.p * other.d + self.d * other.p)
        if isinstance(other, DualNumber):
            return DualQuaternion(self.p * other.re,
                                  self.p * other.du + self.d * other.re)
        if isinstance(other, (int, float)):
            return DualQuaternion(self.p * other, self.d * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, DualNumber)):
            # dual numbers are central, so left and right scaling agree
            return self.__mul__(other)
        return NotImplemented

    def __repr__(self):
        return f"DualQuaternion({self.p!r}, {self.d!r})"


class Screw:
    """Vector dual quaternion: both quaternion parts are pure vectors.

    ``Screw(p, d)`` stores the raw vector parts of ``theta = p + eps d``.
    The motion reading ``theta = a/2 + eps b/2`` (``a`` an infinitesimal
    rotation, ``b`` an infinitesimal translation, both in the moving frame)
    is available through :meth:`from_motion` and the ``a``/``b`` properties.
    """

    __slots__ = ("p", "d")

    def __init__(self, p=(0.0, 0.0, 0.0), d=(0.0, 0.0, 0.0)):
        self.p = _vec3(p).copy()
        self.d = _vec3(d).copy()

    @classmethod
    def from_motion(cls, a, b) -> "Screw":
        """Screw ``a/2 + eps b/2`` for rotation increment ``a`` and translation ``b``."""
        return cls(0.5 * _vec3(a), 0.5 * _vec3(b))

    @classmethod
    def from_components(cls, c) -> "Screw":
        c = np.asarray(c, dtype=float)
        if c.shape != (6,):
            raise ValueError(f"expected 6 components, got shape {c.shape}")
        return cls(c[:3], c[3:])

    @classmethod
    def from_dual_quaternion(cls, dq: DualQuaternion, tol: float | None = None) -> "Screw":
        """Drop the real parts of ``dq``; with ``tol`` set, reject large ones."""
        if tol is not None:
            scale = max(1.0, dq.size())
            if abs(dq.p.w) > tol * scale or abs(dq.d.w) > tol * scale:
                raise ValueError("dual quaternion is not a vector dual quaternion")
        return cls(dq.p.vec, dq.d.vec)

    @property
    def a(self) -> np.ndarray:
        """Rotation increment of the motion decomposition."""
        return 2.0 * self.p

    @property
    def b(self) -> np.ndarray:
        """Translation increment of the motion decomposition."""
        return 2.0 * self.d

    @property
    def components(self) -> np.ndarray:
        return np.concatenate([self.p, self.d])

    def to_dual_quaternion(self) -> DualQuaternion:
        return DualQuaternion(Quaternion.from_vector(self.p),
                              Quaternion.from_vector(self.d))

    def dot(self, other: "Screw") -> float:
        return float(self.p @ other.p + self.d @ other.d)

    def size(self, l: float = 1.0) -> float:
        if l <= 0.0:
            raise ValueError("characteristic length must be positive")
        return math.sqrt(self.p @ self.p + (self.d @ self.d) / (l * l))

    def __add__(self, other):
        if isinstance(other, Screw):
            return Screw(self.p + other.p, self.d + other.d)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, Screw):
            return Screw(self.p - other.p, self.d - other.d)
        return NotImplemented

    def __neg__(self):
        return Screw(-self.p, -self.d)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Screw(self.p * other, self.d * other)
        return NotImplemented

    __rmul__ = __mul__

    def __repr__(self):
        return f"Screw({self.p.tolist()}, {self.d.tolist()})"


class Pose:
    """Unit dual quaternion representing a rigid motion or frame.

    The constructor enforces unitness: deviations of ``eta* eta`` from 1
    up to ``UNIT_ACCEPT`` are kept, up to ``UNIT_RENORM`` are repaired by
    normalization, and anything worse is an error.
    """

    __slots__ = ("dq",)

    def __init__(self, dq: DualQuaternion):
        dev = max(abs(dq.p.norm2() - 1.0), 2.0 * abs(dq.p.dot(dq.d)))
        if dev > UNIT_RENORM:
            raise ValueError(
                f"dual quaternion is not unit (|eta* eta - 1| ~ {dev:.3e})")
        if dev > UNIT_ACCEPT:
            dq = dq.normalized()
        self.dq = dq

    @classmethod
    def identity(cls) -> "Pose":
        return cls(DualQuaternion.identity())

    @classmethod
    def from_rotation_translation(cls, q: Quaternion, t) -> "Pose":
        """Pose ``Q + 0.5 eps t Q`` from a unit quaternion and a translation."""
        if abs(q.norm2() - 1.0) > UNIT_RENORM:
            raise ValueError("rotation quaternion must be unit")
        t = _vec3(t)
        return cls(DualQuaternion(q, 0.5 * (Quaternion.from_vector(t) * q)))

    @classmethod
    def from_components(cls, c) -> "Pose":
        return cls(DualQuaternion.from_components(c))

    @property
    def components(self) -> np.ndarray:
        return self.dq.components

    @property
    def rotation(self) -> Quaternion:
        return self.dq.p

    @property
    def translation(self) -> np.ndarray:
        return (2.0 * (self.dq.d * self.dq.p.conjugate())).vec

    def inverse(self) -> "Pose":
        # for unit dual quaternions the inverse is the conjugate
        return Pose(self.dq.conjugate())

    def apply(self, r) -> np.ndarray:
        """Image of the point ``r`` under the rigid motion: ``(Q r + 2B) Q*``."""
        q, b = self.dq.p, self.dq.d
        return ((q * Quaternion.from_vector(r) + 2.0 * b) * q.conjugate()).vec

    def apply_inverse(self, s) -> np.ndarray:
        """Moving-frame coordinates of the fixed-frame point ``s``."""
        q, b = self.dq.p, self.dq.d
        return ((q.conjugate() * Quaternion.from_vector(s) + 2.0 * b.conjugate()) * q).vec

    def apply_direction(self, n) -> np.ndarray:
        return self.dq.p.rotate(n)

    def apply_inverse_direction(self, n) -> np.ndarray:
        return self.dq.p.conjugate().rotate(n)

    def __mul__(self, other):
        if isinstance(other, Pose):
            return Pose(self.dq * other.dq)
        return NotImplemented

    def __repr__(self):
        return f"Pose({self.dq!r})"


def dq_size(dq: DualQuaternion, l: float = 1.0) -> float:
    return dq.size(l)


def screw_exp(theta: Screw) -> Pose:
    """Exponential of a screw, evaluated in closed form.

    The primary part is the unit quaternion ``exp(a/2)``; the dual part
    follows from shifting the rotation angle by the dual scalar that
    ``theta^2`` produces.  A series expansion takes over for tiny rotation
    angles to avoid 0/0.
    """
    p, d = theta.p, theta.d
    x2 = float(p @ p)          # x = |a|/2, the half rotation angle
    x = math.sqrt(x2)
    pd = float(p @ d)
    if x > 1e-6:
        c = math.cos(x)
        g1 = math.sin(x) / x
        g2 = (x * c - math.sin(x)) / (x2 * x)
    else:
        c = 1.0 - x2 / 2.0 + x2 * x2 / 24.0
        g1 = 1.0 - x2 / 6.0 + x2 * x2 / 120.0
        g2 = -1.0 / 3.0 + x2 / 30.0 - x2 * x2 / 840.0
    prim = Quaternion(c, g1 * p[0], g1 * p[1], g1 * p[2])
    dv = g1 * d + (pd * g2) * p
    dual = Quaternion(-pd * g1, dv[0], dv[1], dv[2])
    return Pose(DualQuaternion(prim, dual))


def normalize_one_plus(theta: Screw, l: float = 1.0) -> Pose:
    """Normalization of ``1 + theta``, the retraction used by the solvers.

    Agrees with ``screw_exp(theta)`` to third order in ``theta``.
    """
    if theta.size(l) >= 1.0:
        raise ValueError("screw too large to retract: size(theta) must be < 1")
    one_plus = DualQuaternion.identity() + theta.to_dual_quaternion()
    return Pose(one_plus.normalized())


def hodge_star(r) -> np.ndarray:
    """Skew matrix of ``r``: ``hodge_star(r) @ s == cross(r, s)``."""
    r = _vec3(r)
    return np.array([
        [0.0, -r[2], r[1]],
        [r[2], 0.0, -r[0]],
        [-r[1], r[0], 0.0],
    ])


def project_complement(u) -> np.ndarray:
    """Projection onto the plane orthogonal to the unit vector ``u``."""
    u = _vec3(u)
    if abs(u @ u - 1.0) > 1e-8:
        raise ValueError("projection axis must be a unit vector")
    return np.eye(3) - np.outer(u, u)


def block_matrix(a, b, c=None, d=None) -> np.ndarray:
    """Assemble ``[A B]`` (3x6) or ``[A B; C D]`` (6x6) from 3x3 blocks.

    The result acts on screw components directly: ``block_matrix(...) @
    screw.components`` follows the half-angle bookkeeping of the motion
    decomposition automatically.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if (c is None) != (d is None):
        raise ValueError("either both or neither of C, D must be given")
    if c is None:
        return np.hstack([a, b])
    return np.block([[a, b], [np.asarray(c, dtype=float), np.asarray(d, dtype=float)]])


def block_apply(m: np.ndarray, theta: Screw):
    """Apply a 3x6 row block (returns a 3-vector) or 6x6 block matrix
    (returns a screw) to a screw."""
    m = np.asarray(m, dtype=float)
    if m.shape == (3, 6):
        return m @ theta.components
    if m.shape == (6, 6):
        return Screw.from_components(m @ theta.components)
    raise ValueError(f"expected a 3x6 or 6x6 matrix, got shape {m.shape}")
