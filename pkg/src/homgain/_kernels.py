"""Hot numeric kernels with numba and pure-numpy implementations.

Two workloads dominate runtime: evaluating the dissipation residual on dense
sphere grids (inside every gain bisection) and forward-Euler integration of
the error dynamics (~10^6 sequential steps per run).  The numba path compiles
explicit loops; the numpy path vectorizes the grid work and runs the Euler
recurrence as a plain Python loop.  Selection happens in :mod:`homgain.backend`.
"""

import numpy as np

from .backend import NUMBA_ENABLED, njit, prange


@njit(cache=True)
def _spow(x, p):
    if x > 0.0:
        return x ** p
    if x < 0.0:
        return -((-x) ** p)
    return 0.0


def _spow_np(x, p):
    return np.sign(x) * np.abs(x) ** p


# ---------------------------------------------------------------------------
# Sphere tables.  The residual at the worst-case disturbance splits into
#   base - (gamma/L)^2 * noise_pow + C(gamma, L) * wpow
# on the (z, nu) sphere, and the disturbance-only residual into
#   base_d - (gamma * L^((1-d)/(1+d)))^2 * dpow
# on the (z, delta/L^2) sphere.  The tables are gamma- and L-independent, so
# one grid evaluation serves every bisection step and every L.
# ---------------------------------------------------------------------------

@njit(cache=True, parallel=True)
def _joint_tables_numba(ph1, ph2, d, beta, a1, a2, at):
    n = ph1.shape[0]
    base = np.empty(n)
    noise_pow = np.empty(n)
    wpow = np.empty(n)
    r1 = 1.0 - d
    e1 = 1.0 / (1.0 - d)
    e2 = (1.0 + d) / (1.0 - d)
    q = 2.0 / (1.0 - d)
    for i in prange(n):
        s1 = np.sin(ph1[i])
        z1 = _spow(s1 * np.cos(ph2[i]), r1)
        z2 = s1 * np.sin(ph2[i])
        nu = _spow(np.cos(ph1[i]), r1)
        w = -z1 + (1.0 + beta) * _spow(z2, 1.0 - d)
        zn = z1 + nu
        base[i] = (
            at * (-a1 * (_spow(z1, e1) - z2) * (_spow(zn, e1) - z2)
                  - (a2 / a1) * w * _spow(zn, e2))
            + a1 * a1 * z2 * z2
        )
        noise_pow[i] = abs(nu) ** q
        wpow[i] = abs(w) ** q
    return base, noise_pow, wpow


def _joint_tables_numpy(ph1, ph2, d, beta, a1, a2, at):
    r1 = 1.0 - d
    e1 = 1.0 / (1.0 - d)
    e2 = (1.0 + d) / (1.0 - d)
    s1 = np.sin(ph1)
    z1 = _spow_np(s1 * np.cos(ph2), r1)
    z2 = s1 * np.sin(ph2)
    nu = _spow_np(np.cos(ph1), r1)
    w = -z1 + (1.0 + beta) * _spow_np(z2, 1.0 - d)
    zn = z1 + nu
    base = (
        at * (-a1 * (_spow_np(z1, e1) - z2) * (_spow_np(zn, e1) - z2)
              - (a2 / a1) * w * _spow_np(zn, e2))
        + a1 * a1 * z2 * z2
    )
    q = 2.0 / (1.0 - d)
    return base, np.abs(nu) ** q, np.abs(w) ** q


@njit(cache=True, parallel=True)
def _dist_tables_numba(ph1, ph2, d, beta, a1, a2, at):
    n = ph1.shape[0]
    base = np.empty(n)
    dist_pow = np.empty(n)
    r1 = 1.0 - d
    e1 = 1.0 / (1.0 - d)
    e2 = (1.0 + d) / (1.0 - d)
    q = 2.0 / (1.0 + d)
    for i in prange(n):
        s1 = np.sin(ph1[i])
        z1 = _spow(s1 * np.cos(ph2[i]), r1)
        z2 = s1 * np.sin(ph2[i])
        db = _spow(np.cos(ph1[i]), 1.0 + d)
        w = -z1 + (1.0 + beta) * _spow(z2, 1.0 - d)
        mu = (_spow(z1, e1) - z2) ** 2
        base[i] = (
            at * (-a1 * mu + w * (-(a2 / a1) * _spow(z1, e2) + db / a1))
            + a1 * a1 * z2 * z2
        )
        dist_pow[i] = abs(db) ** q
    return base, dist_pow


def _dist_tables_numpy(ph1, ph2, d, beta, a1, a2, at):
    r1 = 1.0 - d
    e1 = 1.0 / (1.0 - d)
    e2 = (1.0 + d) / (1.0 - d)
    s1 = np.sin(ph1)
    z1 = _spow_np(s1 * np.cos(ph2), r1)
    z2 = s1 * np.sin(ph2)
    db = _spow_np(np.cos(ph1), 1.0 + d)
    w = -z1 + (1.0 + beta) * _spow_np(z2, 1.0 - d)
    mu = (_spow_np(z1, e1) - z2) ** 2
    base = (
        at * (-a1 * mu + w * (-(a2 / a1) * _spow_np(z1, e2) + db / a1))
        + a1 * a1 * z2 * z2
    )
    return base, np.abs(db) ** (2.0 / (1.0 + d))


def joint_tables(ph1, ph2, d, beta, a1, a2, at):
    if NUMBA_ENABLED:
        return _joint_tables_numba(ph1, ph2, d, beta, a1, a2, at)
    return _joint_tables_numpy(ph1, ph2, d, beta, a1, a2, at)


def dist_tables(ph1, ph2, d, beta, a1, a2, at):
    if NUMBA_ENABLED:
        return _dist_tables_numba(ph1, ph2, d, beta, a1, a2, at)
    return _dist_tables_numpy(ph1, ph2, d, beta, a1, a2, at)


# ---------------------------------------------------------------------------
# Forward-Euler integrators.  Inputs are pre-sampled arrays; the recurrence is
# sequential.  Without numba the same loop runs in plain Python (slow but
# exact), which is acceptable for the fallback path.
# ---------------------------------------------------------------------------

@njit(cache=True)
def _euler_error_loop(z10, z20, nu, delta, tau, k1t, k2t, k1, d):
    n = nu.shape[0]
    z1 = np.empty(n)
    z2 = np.empty(n)
    z1[0] = z10
    z2[0] = z20
    e1 = 1.0 / (1.0 - d)
    e2 = (1.0 + d) / (1.0 - d)
    for k in range(n - 1):
        s = z1[k] + nu[k]
        z1[k + 1] = z1[k] + tau * (-k1t * (_spow(s, e1) - z2[k]))
        z2[k + 1] = z2[k] + tau * (-k2t * _spow(s, e2) + delta[k] / k1)
        if not (np.isfinite(z1[k + 1]) and np.isfinite(z2[k + 1])):
            return z1[: k + 2], z2[: k + 2]
    return z1, z2


def _euler_error_python(z10, z20, nu, delta, tau, k1t, k2t, k1, d):
    import math

    n = nu.shape[0]
    z1 = np.empty(n)
    z2 = np.empty(n)
    a, b = float(z10), float(z20)
    z1[0], z2[0] = a, b
    e1 = 1.0 / (1.0 - d)
    e2 = (1.0 + d) / (1.0 - d)
    nul = nu.tolist()
    dll = delta.tolist()
    for k in range(n - 1):
        s = a + nul[k]
        sp1 = math.copysign(abs(s) ** e1, s) if s != 0.0 else 0.0
        sp2 = math.copysign(abs(s) ** e2, s) if s != 0.0 else 0.0
        a = a + tau * (-k1t * (sp1 - b))
        b = b + tau * (-k2t * sp2 + dll[k] / k1)
        z1[k + 1], z2[k + 1] = a, b
        if not (math.isfinite(a) and math.isfinite(b)):
            return z1[: k + 2], z2[: k + 2]
    return z1, z2


@njit(cache=True)
def _euler_x_loop(x10, x20, fn, tau, k1, k2, d):
    n = fn.shape[0]
    x1 = np.empty(n)
    x2 = np.empty(n)
    x1[0] = x10
    x2[0] = x20
    e1 = 1.0 / (1.0 - d)
    e2 = (1.0 + d) / (1.0 - d)
    for k in range(n - 1):
        s = x1[k] - fn[k]
        x1[k + 1] = x1[k] + tau * (-k1 * _spow(s, e1) + x2[k])
        x2[k + 1] = x2[k] + tau * (-k2 * _spow(s, e2))
        if not (np.isfinite(x1[k + 1]) and np.isfinite(x2[k + 1])):
            return x1[: k + 2], x2[: k + 2]
    return x1, x2


def _euler_x_python(x10, x20, fn, tau, k1, k2, d):
    import math

    n = fn.shape[0]
    x1 = np.empty(n)
    x2 = np.empty(n)
    a, b = float(x10), float(x20)
    x1[0], x2[0] = a, b
    e1 = 1.0 / (1.0 - d)
    e2 = (1.0 + d) / (1.0 - d)
    fnl = fn.tolist()
    for k in range(n - 1):
        s = a - fnl[k]
        sp1 = math.copysign(abs(s) ** e1, s) if s != 0.0 else 0.0
        sp2 = math.copysign(abs(s) ** e2, s) if s != 0.0 else 0.0
        a = a + tau * (-k1 * sp1 + b)
        b = b + tau * (-k2 * sp2)
        x1[k + 1], x2[k + 1] = a, b
        if not (math.isfinite(a) and math.isfinite(b)):
            return x1[: k + 2], x2[: k + 2]
    return x1, x2


def euler_error(z10, z20, nu, delta, tau, k1t, k2t, k1, d):
    if NUMBA_ENABLED:
        return _euler_error_loop(z10, z20, nu, delta, tau, k1t, k2t, k1, d)
    return _euler_error_python(z10, z20, nu, delta, tau, k1t, k2t, k1, d)


def euler_x(x10, x20, fn, tau, k1, k2, d):
    if NUMBA_ENABLED:
        return _euler_x_loop(x10, x20, fn, tau, k1, k2, d)
    return _euler_x_python(x10, x20, fn, tau, k1, k2, d)
