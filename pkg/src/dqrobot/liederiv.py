"""Forward-mode automatic Lie differentiation for pose-dependent quantities.

A quantity ``g(eta)`` defined on unit dual quaternions is differentiated
along left-invariant directions: the i-th partial is the derivative of
``r -> g(eta * normalize(1 + r * basis_i))`` at ``r = 0`` for the six screw
basis directions.  A :class:`LieJet` carries a value together with those six
partials and, when the context asks for second order, the full 6x6 table of
iterated partials ``L_i L_j g`` (not symmetric in general; the symmetrized
table is the Hessian of the normalized extension).

Values may live in any vector space with ``+`` and scalar ``*``: floats,
numpy arrays, quaternions, dual quaternions.  Every bilinear product used
downstream gets a product-rule instance (:func:`jet_product` plus the named
wrappers) and every scalar function a chain-rule instance
(:func:`jet_chain` plus ``jet_sqrt``/``jet_reciprocal``/``jet_atan2``).
"""

from __future__ import annotations

import math
import operator

import numpy as np

from .dualquat import DualQuaternion, Pose, Quaternion, Screw, normalize_one_plus

#: Screw basis as dual quaternions: (i, j, k, eps i, eps j, eps k).
BASIS = tuple(
    DualQuaternion.from_components(np.eye(8)[i]) for i in range(6)
)
#: The same basis as screws.
BASIS_SCREWS = tuple(Screw.from_components(np.eye(6)[i]) for i in range(6))

FIRST = 1
SECOND = 2


class EvalContext:
    """Evaluation point and derivative depth shared by a family of jets."""

    __slots__ = ("eta", "depth")

    def __init__(self, eta: Pose, depth: int = FIRST):
        if depth not in (FIRST, SECOND):
            raise ValueError("depth must be 1 (first order) or 2 (second order)")
        self.eta = eta
        self.depth = depth

    def __repr__(self):
        return f"EvalContext(depth={self.depth}, eta={self.eta!r})"


def _check_ctx(a: "LieJet", b: "LieJet") -> None:
    if a.ctx is not b.ctx:
        raise ValueError("jets belong to different evaluation contexts")


class LieJet:
    """Value, six Lie partials, and optionally the 6x6 second-order table."""

    __slots__ = ("ctx", "value", "partials", "second")

    def __init__(self, ctx, value, partials, second=None):
        self.ctx = ctx
        self.value = value
        self.partials = tuple(partials)
        self.second = None if second is None else tuple(tuple(row) for row in second)

    @property
    def has_second(self) -> bool:
        return self.second is not None

    def map(self, f) -> "LieJet":
        """Apply a linear map componentwise (value, partials, second table)."""
        second = None
        if self.second is not None:
            second = tuple(tuple(f(e) for e in row) for row in self.second)
        return LieJet(self.ctx, f(self.value), (f(p) for p in self.partials), second)

    def __add__(self, other):
        if not isinstance(other, LieJet):
            return NotImplemented
        _check_ctx(self, other)
        second = None
        if self.second is not None and other.second is not None:
            second = tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.second, other.second)
            )
        return LieJet(self.ctx, self.value + other.value,
                      (a + b for a, b in zip(self.partials, other.partials)),
                      second)

    def __sub__(self, other):
        if not isinstance(other, LieJet):
            return NotImplemented
        return self + other.map(lambda v: -1.0 * v)

    def __neg__(self):
        return self.map(lambda v: -1.0 * v)

    def __mul__(self, other):
        if isinstance(other, LieJet):
            return jet_product(self, other, operator.mul)
        return self.map(lambda v: v * other)

    def __rmul__(self, other):
        # scalar constant * jet
        return self.map(lambda v: other * v)

    def __repr__(self):
        return f"LieJet(value={self.value!r}, second={'yes' if self.second else 'no'})"


def constant(ctx: EvalContext, value) -> LieJet:
    zero = 0.0 * value
    second = None
    if ctx.depth == SECOND:
        second = tuple(tuple(zero for _ in range(6)) for _ in range(6))
    return LieJet(ctx, value, (zero for _ in range(6)), second)


def seed_pose(ctx: EvalContext) -> LieJet:
    """Jet of the identity function ``g(eta) = eta``.

    Partials are ``eta * basis_i``; the second-order table is
    ``eta * basis_i * basis_j`` (the raw extension has no curvature of its
    own).
    """
    eta = ctx.eta.dq
    partials = [eta * BASIS[i] for i in range(6)]
    second = None
    if ctx.depth == SECOND:
        second = [[partials[i] * BASIS[j] for j in range(6)] for i in range(6)]
    return LieJet(ctx, eta, partials, second)


def jet_product(j1: LieJet, j2: LieJet, op) -> LieJet:
    """Product rule for any bilinear ``op`` (order of factors preserved)."""
    _check_ctx(j1, j2)
    value = op(j1.value, j2.value)
    partials = [op(j1.value, j2.partials[i]) + op(j1.partials[i], j2.value)
                for i in range(6)]
    second = None
    if j1.second is not None and j2.second is not None:
        second = [[
            op(j1.value, j2.second[i][j])
            + op(j1.partials[i], j2.partials[j])
            + op(j1.partials[j], j2.partials[i])
            + op(j1.second[i][j], j2.value)
            for j in range(6)] for i in range(6)]
    return LieJet(j1.ctx, value, partials, second)


def jet_dot(j1: LieJet, j2: LieJet) -> LieJet:
    return jet_product(j1, j2, lambda u, v: float(np.dot(u, v)))


def jet_cross(j1: LieJet, j2: LieJet) -> LieJet:
    return jet_product(j1, j2, np.cross)


def jet_chain(h, jets, grad, hess=None) -> LieJet:
    """Chain rule for ``h(g_1, ..., g_m)`` with supplied partials of ``h``.

    ``grad`` maps the tuple of inner values to the first partials of ``h``;
    ``hess`` (required at second order) maps it to the m x m table of second
    partials.
    """
    jets = list(jets)
    if not jets:
        raise ValueError("chain rule needs at least one inner jet")
    ctx = jets[0].ctx
    for j in jets[1:]:
        _check_ctx(jets[0], j)
    values = tuple(j.value for j in jets)
    value = h(*values)
    g = grad(*values)
    m = len(jets)
    partials = [sum(g[k] * jets[k].partials[i] for k in range(m)) for i in range(6)]
    second = None
    if ctx.depth == SECOND:
        if any(j.second is None for j in jets):
            raise ValueError("second-order chain rule needs second-order inner jets")
        if hess is None:
            raise ValueError("second-order chain rule needs the Hessian of h")
        hh = hess(*values)
        second = [[
            sum(g[k] * jets[k].second[i][j] for k in range(m))
            + sum(hh[k][l] * jets[l].partials[i] * jets[k].partials[j]
                  for k in range(m) for l in range(m))
            for j in range(6)] for i in range(6)]
    return LieJet(ctx, value, partials, second)


def jet_sqrt(j: LieJet) -> LieJet:
    return jet_chain(
        math.sqrt, [j],
        lambda v: (0.5 / math.sqrt(v),),
        lambda v: ((-0.25 / v ** 1.5,),),
    )


def jet_reciprocal(j: LieJet) -> LieJet:
    return jet_chain(
        lambda v: 1.0 / v, [j],
        lambda v: (-1.0 / v ** 2,),
        lambda v: ((2.0 / v ** 3,),),
    )


def jet_atan2(jy: LieJet, jx: LieJet) -> LieJet:
    def grad(y, x):
        r2 = x * x + y * y
        return (x / r2, -y / r2)

    def hess(y, x):
        r2 = x * x + y * y
        r4 = r2 * r2
        hyy = -2.0 * x * y / r4
        hyx = (y * y - x * x) / r4
        hxx = 2.0 * x * y / r4
        return ((hyy, hyx), (hyx, hxx))

    return jet_chain(math.atan2, [jy, jx], grad, hess)


def _basis_motion(i: int):
    """Rotation/translation increments (a_i, b_i) of the i-th basis screw."""
    e = np.zeros(3)
    if i < 3:
        e[i] = 2.0
        return e, np.zeros(3)
    e[i - 3] = 2.0
    return np.zeros(3), e


def lie_of_fixed_point(ctx: EvalContext, s) -> LieJet:
    """Jet of the moving-frame coordinates of a world-fixed point.

    ``s`` is the moving-frame value at ``ctx.eta``; the partials are
    ``-a_i x s - b_i`` and the second table follows by iterating that
    identity.
    """
    s = np.asarray(s, dtype=float)
    partials = []
    for i in range(6):
        a, b = _basis_motion(i)
        partials.append(-np.cross(a, s) - b)
    second = None
    if ctx.depth == SECOND:
        second = [[-np.cross(_basis_motion(j)[0], partials[i]) for j in range(6)]
                  for i in range(6)]
    return LieJet(ctx, s, partials, second)


def lie_of_fixed_direction(ctx: EvalContext, n) -> LieJet:
    """Jet of the moving-frame coordinates of a world-fixed unit direction."""
    n = np.asarray(n, dtype=float)
    if abs(n @ n - 1.0) > 1e-8:
        raise ValueError("fixed direction must be a unit vector")
    partials = []
    for i in range(6):
        a, _ = _basis_motion(i)
        partials.append(-np.cross(a, n))
    second = None
    if ctx.depth == SECOND:
        second = [[-np.cross(_basis_motion(j)[0], partials[i]) for j in range(6)]
                  for i in range(6)]
    return LieJet(ctx, n, partials, second)


def lie_directional(jet: LieJet, theta: Screw):
    """Contract the partials with a screw direction: ``theta . grad``."""
    c = theta.components
    out = c[0] * jet.partials[0]
    for i in range(1, 6):
        out = out + c[i] * jet.partials[i]
    return out


def full_lie(jet: LieJet) -> Screw:
    """Full Lie derivative of a scalar jet as a screw."""
    return Screw.from_components([float(p) for p in jet.partials])


def second_table(jet: LieJet) -> np.ndarray:
    """The 6x6 table ``L_i L_j g`` of a scalar second-order jet."""
    if jet.second is None:
        raise ValueError("jet does not carry second-order partials")
    return np.array([[float(e) for e in row] for row in jet.second])


def hessian_of_normalized(jet: LieJet) -> np.ndarray:
    """Hessian of ``theta -> g(eta * normalize(1 + theta))`` at 0.

    This is the symmetrized second-order table; the asymmetric remainder is
    exactly what the curvature of the normalization removes.
    """
    t = second_table(jet)
    return 0.5 * (t + t.T)


def fd_lie_oracle(g, eta: Pose, theta: Screw, r: float = 1e-5):
    """Central-difference Lie derivative, independent of the jet machinery.

    ``g`` maps poses into any vector space supporting ``-`` and division by
    a scalar.
    """
    if not (1e-8 <= r <= 1e-2):
        raise ValueError("finite-difference step r must lie in [1e-8, 1e-2]")
    fwd = g(eta * normalize_one_plus(theta * r))
    bwd = g(eta * normalize_one_plus(theta * -r))
    return (fwd - bwd) / (2.0 * r)


def fd_lie_partials(g, eta: Pose, r: float = 1e-5):
    return [fd_lie_oracle(g, eta, BASIS_SCREWS[i], r) for i in range(6)]


def fd_second_table(g, eta: Pose, r: float = 1e-4) -> np.ndarray:
    """Nested central differences for the table ``L_i L_j g`` of a scalar g."""
    def inner(j):
        return lambda pose: fd_lie_oracle(g, pose, BASIS_SCREWS[j], r)

    out = np.empty((6, 6))
    for i in range(6):
        for j in range(6):
            out[i, j] = fd_lie_oracle(inner(j), eta, BASIS_SCREWS[i], r)
    return out


# Linear projections that commute with differentiation.

def jet_primary(j: LieJet) -> LieJet:
    """Primary quaternion part of a dual-quaternion jet."""
    return j.map(lambda dq: dq.p)


def jet_dual(j: LieJet) -> LieJet:
    """Dual quaternion part of a dual-quaternion jet."""
    return j.map(lambda dq: dq.d)


def jet_quat_conj(j: LieJet) -> LieJet:
    return j.map(Quaternion.conjugate)


def jet_quat_vec(j: LieJet) -> LieJet:
    """Vector part of a quaternion jet as a numpy 3-vector jet."""
    return j.map(lambda q: q.vec)


def jet_component(j: LieJet, k: int) -> LieJet:
    """k-th component of a numpy-vector jet as a scalar jet."""
    return j.map(lambda v: float(v[k]))
