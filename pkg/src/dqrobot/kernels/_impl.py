"""Hot numeric kernels shared by the numpy and numba backends.

Everything here sticks to the numba-compilable subset of numpy: scalar
loops, basic slicing, ``np.linalg`` on small dense matrices.  The numba
backend jit-compiles these exact functions (see ``kernels/__init__``), so
both backends run the same arithmetic in the same order.

Dual quaternions travel as length-8 component vectors in the package basis
order ``(i, j, k, eps i, eps j, eps k, 1, eps)``; quaternions as length-4
``(w, x, y, z)`` arrays; screws as length-6 component vectors.

Status codes returned instead of exceptions (numba-friendly); wrappers in
the object layer translate them.
"""

import numpy as np

OK = 0
ERR_DEGENERATE = 1
ERR_SINGULAR = 2
ERR_MAXITERS = 3
ERR_STALLED = 4

# Degeneracy guards (squared thresholds): legs shorter than 1e-9 m, pulley
# free length h1^2 + h2^2 - p^2 below 1e-12 m^2, pulley axis through the
# attachment point.
_MIN_LEG2 = 1e-18
_MIN_FREE2 = 1e-12
_MIN_PLANE2 = 1e-18


def cross3(a, b):
    out = np.empty(3)
    out[0] = a[1] * b[2] - a[2] * b[1]
    out[1] = a[2] * b[0] - a[0] * b[2]
    out[2] = a[0] * b[1] - a[1] * b[0]
    return out


def quat_mul(a, b):
    out = np.empty(4)
    out[0] = a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]
    out[1] = a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2]
    out[2] = a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1]
    out[3] = a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]
    return out


def quat_conj(a):
    out = np.empty(4)
    out[0] = a[0]
    out[1] = -a[1]
    out[2] = -a[2]
    out[3] = -a[3]
    return out


def rotate3(q, v):
    # q v q* for unit q
    qv = q[1:4]
    t = 2.0 * cross3(qv, v)
    return v + q[0] * t + cross3(qv, t)


def pose_parts(eta8):
    """Rotation quaternion, its conjugate, and the world translation."""
    q = np.empty(4)
    q[0] = eta8[6]
    q[1] = eta8[0]
    q[2] = eta8[1]
    q[3] = eta8[2]
    b = np.empty(4)
    b[0] = eta8[7]
    b[1] = eta8[3]
    b[2] = eta8[4]
    b[3] = eta8[5]
    qc = quat_conj(q)
    t = 2.0 * quat_mul(b, qc)[1:4]
    return q, qc, t


def dq_mul8(a8, b8):
    ap = np.empty(4)
    ap[0] = a8[6]
    ap[1:4] = a8[0:3]
    ad = np.empty(4)
    ad[0] = a8[7]
    ad[1:4] = a8[3:6]
    bp = np.empty(4)
    bp[0] = b8[6]
    bp[1:4] = b8[0:3]
    bd = np.empty(4)
    bd[0] = b8[7]
    bd[1:4] = b8[3:6]
    p = quat_mul(ap, bp)
    d = quat_mul(ap, bd) + quat_mul(ad, bp)
    out = np.empty(8)
    out[0:3] = p[1:4]
    out[3:6] = d[1:4]
    out[6] = p[0]
    out[7] = d[0]
    return out


def normalize8(e8):
    """eta |eta|^-1 on raw components."""
    a2 = e8[6] * e8[6] + e8[0] * e8[0] + e8[1] * e8[1] + e8[2] * e8[2]
    a = np.sqrt(a2)
    c = (e8[6] * e8[7] + e8[0] * e8[3] + e8[1] * e8[4] + e8[2] * e8[5])
    out = np.empty(8)
    inv_a = 1.0 / a
    k = c / (a2 * a)
    out[0] = e8[0] * inv_a
    out[1] = e8[1] * inv_a
    out[2] = e8[2] * inv_a
    out[6] = e8[6] * inv_a
    out[3] = e8[3] * inv_a - k * e8[0]
    out[4] = e8[4] * inv_a - k * e8[1]
    out[5] = e8[5] * inv_a - k * e8[2]
    out[7] = e8[7] * inv_a - k * e8[6]
    return out


def one_plus_normalized8(t6):
    """normalize(1 + theta) for a screw given by components."""
    e = np.empty(8)
    e[0:3] = t6[0:3]
    e[3:6] = t6[3:6]
    e[6] = 1.0
    e[7] = 0.0
    return normalize8(e)


def size6(t6, l):
    return np.sqrt(t6[0] * t6[0] + t6[1] * t6[1] + t6[2] * t6[2]
                   + (t6[3] * t6[3] + t6[4] * t6[4] + t6[5] * t6[5]) / (l * l))


def diff_size8(a8, b8, l):
    sp = 0.0
    sd = 0.0
    sp += (a8[0] - b8[0]) ** 2 + (a8[1] - b8[1]) ** 2 + (a8[2] - b8[2]) ** 2
    sp += (a8[6] - b8[6]) ** 2
    sd += (a8[3] - b8[3]) ** 2 + (a8[4] - b8[4]) ** 2 + (a8[5] - b8[5]) ** 2
    sd += (a8[7] - b8[7]) ** 2
    return np.sqrt(sp + sd / (l * l))


def stewart_eval(eta8, rr, ss, want_second):
    """Lengths, directions, length derivatives for rigid-leg actuators.

    Returns ``(ell, u, lam, sec, status)``; ``sec[k, i, j]`` is the iterated
    derivative (direction i first applied second) of length k.
    """
    n = rr.shape[0]
    ell = np.zeros(n)
    u = np.zeros((n, 3))
    lam = np.zeros((n, 6))
    sec = np.zeros((n, 6, 6))
    q, qc, t = pose_parts(eta8)
    for k in range(n):
        s0 = rotate3(qc, ss[k] - t)
        dx = rr[k] - s0
        ll2 = dx[0] * dx[0] + dx[1] * dx[1] + dx[2] * dx[2]
        if ll2 < _MIN_LEG2 or not np.isfinite(ll2):
            return ell, u, lam, sec, ERR_DEGENERATE
        ll = np.sqrt(ll2)
        ell[k] = ll
        uk = dx / ll
        u[k] = uk
        ru = cross3(rr[k], uk)
        lam[k, 0:3] = 2.0 * ru
        lam[k, 3:6] = 2.0 * uk
        if want_second:
            for i in range(6):
                w = np.zeros(3)
                if i < 3:
                    e = np.zeros(3)
                    e[i] = 1.0
                    w = cross3(e, s0)
                else:
                    w[i - 3] = 1.0
                # project onto the complement of u and scale
                w = w - (uk[0] * w[0] + uk[1] * w[1] + uk[2] * w[2]) * uk
                mi = (2.0 / ll) * w
                rm = cross3(rr[k], mi)
                sec[k, i, 0] = 2.0 * rm[0]
                sec[k, i, 1] = 2.0 * rm[1]
                sec[k, i, 2] = 2.0 * rm[2]
                sec[k, i, 3] = 2.0 * mi[0]
                sec[k, i, 4] = 2.0 * mi[1]
                sec[k, i, 5] = 2.0 * mi[2]
    return ell, u, lam, sec, OK


def pulley_eval(eta8, rr, nn, xx, ww, pp, want_second):
    """Lengths, directions, length derivatives for pulley-routed cables.

    Geometry per cable: swivel axis direction ``nn`` through point ``xx``
    (fixed frame), rod offset ``ww`` to the pulley center, pulley radius
    ``pp``, attachment ``rr`` on the end effector (moving frame).
    """
    n = rr.shape[0]
    ell = np.zeros(n)
    u = np.zeros((n, 3))
    lam = np.zeros((n, 6))
    sec = np.zeros((n, 6, 6))
    q, qc, t = pose_parts(eta8)
    for k in range(n):
        x = rotate3(qc, xx[k] - t)
        nv = rotate3(qc, nn[k])
        delta = x - rr[k]
        h2 = nv[0] * delta[0] + nv[1] * delta[1] + nv[2] * delta[2]
        dvec = delta - h2 * nv
        dd = dvec[0] * dvec[0] + dvec[1] * dvec[1] + dvec[2] * dvec[2]
        if dd < _MIN_PLANE2 or not np.isfinite(dd):
            return ell, u, lam, sec, ERR_DEGENERATE
        dn = np.sqrt(dd)
        m = dvec / dn
        h1 = dn - ww[k]
        rho2 = h1 * h1 + h2 * h2
        s2 = rho2 - pp[k] * pp[k]
        if s2 < _MIN_FREE2:
            return ell, u, lam, sec, ERR_DEGENERATE
        s = np.sqrt(s2)
        u1 = -(h1 * s - h2 * pp[k]) / rho2
        u2 = -(h2 * s + h1 * pp[k]) / rho2
        ell[k] = s + pp[k] * np.arctan2(-u2, -u1)
        uk = u1 * m + u2 * nv
        u[k] = uk
        ru = cross3(rr[k], uk)
        lam[k, 0:3] = 2.0 * ru
        lam[k, 3:6] = 2.0 * uk
        if want_second:
            for i in range(6):
                if i < 3:
                    e = np.zeros(3)
                    e[i] = 1.0
                    dx = -2.0 * cross3(e, x)
                    dnv = -2.0 * cross3(e, nv)
                else:
                    dx = np.zeros(3)
                    dx[i - 3] = -2.0
                    dnv = np.zeros(3)
                ddelta = dx
                dh2 = (dnv[0] * delta[0] + dnv[1] * delta[1] + dnv[2] * delta[2]
                       + nv[0] * ddelta[0] + nv[1] * ddelta[1] + nv[2] * ddelta[2])
                ddvec = ddelta - dh2 * nv - h2 * dnv
                ddn = (dvec[0] * ddvec[0] + dvec[1] * ddvec[1] + dvec[2] * ddvec[2]) / dn
                dm = ddvec / dn - (ddn / dd) * dvec
                dh1 = ddn
                drho2 = 2.0 * h1 * dh1 + 2.0 * h2 * dh2
                ds = 0.5 * drho2 / s
                du1 = -((dh1 * s + h1 * ds - dh2 * pp[k]) * rho2
                        - (h1 * s - h2 * pp[k]) * drho2) / (rho2 * rho2)
                du2 = -((dh2 * s + h2 * ds + dh1 * pp[k]) * rho2
                        - (h2 * s + h1 * pp[k]) * drho2) / (rho2 * rho2)
                du = du1 * m + u1 * dm + du2 * nv + u2 * dnv
                rdu = cross3(rr[k], du)
                sec[k, i, 0] = 2.0 * rdu[0]
                sec[k, i, 1] = 2.0 * rdu[1]
                sec[k, i, 2] = 2.0 * rdu[2]
                sec[k, i, 3] = 2.0 * du[0]
                sec[k, i, 4] = 2.0 * du[1]
                sec[k, i, 5] = 2.0 * du[2]
    return ell, u, lam, sec, OK


def chol6(h):
    """Cholesky factor of a 6x6 matrix; flags failure instead of raising."""
    ll = np.zeros((6, 6))
    for i in range(6):
        s = h[i, i]
        for k in range(i):
            s -= ll[i, k] * ll[i, k]
        if not (s > 0.0) or not np.isfinite(s):
            return ll, False
        ll[i, i] = np.sqrt(s)
        for j in range(i + 1, 6):
            v = h[j, i]
            for k in range(i):
                v -= ll[j, k] * ll[i, k]
            ll[j, i] = v / ll[i, i]
    return ll, True


def chol_solve6(ll, b):
    y = np.empty(6)
    for i in range(6):
        s = b[i]
        for k in range(i):
            s -= ll[i, k] * y[k]
        y[i] = s / ll[i, i]
    x = np.empty(6)
    for i in range(5, -1, -1):
        s = y[i]
        for k in range(i + 1, 6):
            s -= ll[k, i] * x[k]
        x[i] = s / ll[i, i]
    return x


def _newton_exact_step(eta8, lam, res, l, clamp, cond_limit):
    """One exact-constrained Newton step; returns (eta', step_size, status)."""
    det = np.linalg.det(lam)
    fro2 = 0.0
    for i in range(6):
        for j in range(6):
            fro2 += lam[i, j] * lam[i, j]
    scale6 = (fro2 / 6.0) ** 3
    if not np.isfinite(det) or abs(det) * cond_limit < scale6:
        return eta8, 0.0, ERR_SINGULAR
    theta = -np.linalg.solve(lam, res)
    s = size6(theta, l)
    if s > clamp:
        theta *= clamp / s
    nxt = dq_mul8(eta8, one_plus_normalized8(theta))
    step = diff_size8(nxt, eta8, l)
    return nxt, step, OK


def fk_exact_stewart(eta0, target, rr, ss, l, tol_step, max_iters, clamp, cond_limit):
    eta = eta0.copy()
    step = np.inf
    status = ERR_MAXITERS
    iters = 0
    for it in range(1, max_iters + 1):
        iters = it
        ell, u, lam, sec, st = stewart_eval(eta, rr, ss, False)
        if st != OK:
            status = st
            break
        eta, step, st = _newton_exact_step(eta, lam, ell - target, l, clamp, cond_limit)
        if st != OK:
            status = st
            break
        if step < tol_step:
            status = OK
            break
    return eta, iters, step, status


def fk_exact_pulley(eta0, target, rr, nn, xx, ww, pp, l, tol_step, max_iters,
                    clamp, cond_limit):
    eta = eta0.copy()
    step = np.inf
    status = ERR_MAXITERS
    iters = 0
    for it in range(1, max_iters + 1):
        iters = it
        ell, u, lam, sec, st = pulley_eval(eta, rr, nn, xx, ww, pp, False)
        if st != OK:
            status = st
            break
        eta, step, st = _newton_exact_step(eta, lam, ell - target, l, clamp, cond_limit)
        if st != OK:
            status = st
            break
        if step < tol_step:
            status = OK
            break
    return eta, iters, step, status


def _newton_loss_step(eta8, lam, sec, res, l, clamp):
    """One Newton-on-the-loss step with Gauss-Newton fallback.

    The Hessian couples the actuator jacobian with the residual-weighted,
    symmetrized second derivative tables; when that matrix is not positive
    definite the second-order term is dropped for the iteration.
    """
    n = lam.shape[0]
    delta = np.zeros(6)
    gn = np.zeros((6, 6))
    for i in range(6):
        for m in range(n):
            delta[i] += lam[m, i] * res[m]
        for j in range(6):
            v = 0.0
            for m in range(n):
                v += lam[m, i] * lam[m, j]
            gn[i, j] = v
    h = gn.copy()
    for m in range(n):
        for i in range(6):
            for j in range(6):
                h[i, j] += res[m] * 0.5 * (sec[m, i, j] + sec[m, j, i])
    ll, ok = chol6(h)
    if not ok:
        ll, ok = chol6(gn)
        if not ok:
            return eta8, 0.0, ERR_SINGULAR
    theta = -chol_solve6(ll, delta)
    s = size6(theta, l)
    if s > clamp:
        theta *= clamp / s
    nxt = dq_mul8(eta8, one_plus_normalized8(theta))
    step = diff_size8(nxt, eta8, l)
    return nxt, step, OK


def fk_over_stewart(eta0, target, rr, ss, l, tol_loss, tol_stall, max_iters, clamp):
    eta = eta0.copy()
    loss = np.inf
    step = np.inf
    status = ERR_MAXITERS
    iters = 0
    for it in range(max_iters + 1):
        ell, u, lam, sec, st = stewart_eval(eta, rr, ss, True)
        if st != OK:
            status = st
            break
        res = ell - target
        loss = 0.0
        for m in range(res.shape[0]):
            loss += 0.5 * res[m] * res[m]
        if loss < tol_loss:
            status = OK
            break
        if it == max_iters:
            status = ERR_MAXITERS
            break
        eta, step, st = _newton_loss_step(eta, lam, sec, res, l, clamp)
        if st != OK:
            status = st
            break
        iters = it + 1
        if step < tol_stall:
            status = ERR_STALLED
            break
    return eta, iters, loss, step, status


def fk_over_pulley(eta0, target, rr, nn, xx, ww, pp, l, tol_loss, tol_stall,
                   max_iters, clamp):
    eta = eta0.copy()
    loss = np.inf
    step = np.inf
    status = ERR_MAXITERS
    iters = 0
    for it in range(max_iters + 1):
        ell, u, lam, sec, st = pulley_eval(eta, rr, nn, xx, ww, pp, True)
        if st != OK:
            status = st
            break
        res = ell - target
        loss = 0.0
        for m in range(res.shape[0]):
            loss += 0.5 * res[m] * res[m]
        if loss < tol_loss:
            status = OK
            break
        if it == max_iters:
            status = ERR_MAXITERS
            break
        eta, step, st = _newton_loss_step(eta, lam, sec, res, l, clamp)
        if st != OK:
            status = st
            break
        iters = it + 1
        if step < tol_stall:
            status = ERR_STALLED
            break
    return eta, iters, loss, step, status


#: Compilation order for the numba backend (callees before callers).
JIT_FUNCTIONS = (
    "cross3",
    "quat_mul",
    "quat_conj",
    "rotate3",
    "pose_parts",
    "dq_mul8",
    "normalize8",
    "one_plus_normalized8",
    "size6",
    "diff_size8",
    "stewart_eval",
    "pulley_eval",
    "chol6",
    "chol_solve6",
    "_newton_exact_step",
    "fk_exact_stewart",
    "fk_exact_pulley",
    "_newton_loss_step",
    "fk_over_stewart",
    "fk_over_pulley",
)
