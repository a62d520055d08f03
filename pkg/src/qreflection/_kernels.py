"""Compiled inner loops for the scattering solvers.

A potential reaches the kernels as ``(kind, par, xk, cf)``:

* ``KIND_CONST``  : ``V = par[0]``
* ``KIND_POWER``  : ``V = -par[0] * z**-par[1]``
* ``KIND_SPLINE`` : ``ln(-V)`` is a polynomial spline in ``x = ln z`` with knots ``xk``
  and piecewise coefficients ``cf`` (scipy ``PPoly`` layout); outside
  ``[par[0], par[1]]`` the tails ``-par[2] z**-par[3]`` and ``-par[4] z**-par[5]`` apply.
"""
import numpy as np
from numba import njit

KIND_CONST = 0
KIND_POWER = 1
KIND_SPLINE = 2

OK = 0
TURNING_POINT = 1
MAX_STEPS = 2
STEP_UNDERFLOW = 3


@njit(cache=True)
def potential_eval(kind, par, xk, cf, z):
    """Return V, dV/dz, d2V/dz2 at z."""
    if kind == KIND_CONST:
        return par[0], 0.0, 0.0
    if kind == KIND_POWER:
        c, p = par[0], par[1]
        v = -c * z ** (-p)
        return v, -p * v / z, p * (p + 1.0) * v / (z * z)
    x = np.log(z)
    if x <= par[0]:
        c, p = par[2], par[3]
        v = -c * z ** (-p)
        return v, -p * v / z, p * (p + 1.0) * v / (z * z)
    if x >= par[1]:
        c, p = par[4], par[5]
        v = -c * z ** (-p)
        return v, -p * v / z, p * (p + 1.0) * v / (z * z)
    i = np.searchsorted(xk, x) - 1
    if i < 0:
        i = 0
    elif i > xk.size - 2:
        i = xk.size - 2
    dx = x - xk[i]
    # Horner with the first two derivatives; L2 carries half the second derivative
    L, L1, L2 = 0.0, 0.0, 0.0
    for j in range(cf.shape[0]):
        L2 = L2 * dx + L1
        L1 = L1 * dx + L
        L = L * dx + cf[j, i]
    L2 *= 2.0
    v = -np.exp(L)
    return v, v * L1 / z, v * (L1 * L1 + L2 - L1) / (z * z)


@njit(cache=True)
def badlands_eval(kind, par, xk, cf, energy, hb2m, z):
    v, dv, d2v = potential_eval(kind, par, xk, cf, z)
    F = (energy - v) / hb2m
    F1 = -dv / hb2m
    F2 = -d2v / hb2m
    return F2 / (4.0 * F * F) - 5.0 * F1 * F1 / (16.0 * F * F * F), F


@njit(cache=True)
def _kemble_rhs(kind, par, xk, cf, energy, hb2m, x, y, out):
    # independent variable x = ln z; y = (phi, b+, b-)
    z = np.exp(x)
    v, dv, _ = potential_eval(kind, par, xk, cf, z)
    F = (energy - v) / hb2m
    if F <= 0.0:
        return False
    k = np.sqrt(F)
    dk = -dv / (2.0 * hb2m * k)
    c = dk / (2.0 * k) * z
    e = np.exp(-2j * y[0].real)
    out[0] = k * z
    out[1] = c * e * y[2]
    out[2] = c * np.conj(e) * y[1]
    return True


# Dormand-Prince 5(4) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = np.array([
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1 / 5, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3 / 40, 9 / 40, 0.0, 0.0, 0.0, 0.0],
    [44 / 45, -56 / 15, 32 / 9, 0.0, 0.0, 0.0],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729, 0.0, 0.0],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656, 0.0],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
])
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_E = _B - np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])


@njit(cache=True)
def kemble_segment(kind, par, xk, cf, energy, hb2m, x0, x1, y0, rtol, atol, max_steps):
    """Integrate the coupled WKB amplitude equations from x0 = ln z0 to x1.

    Returns (y, steps, status).
    """
    y = y0.copy()
    K = np.zeros((7, 3), dtype=np.complex128)
    tmp = np.zeros(3, dtype=np.complex128)
    ynew = np.zeros(3, dtype=np.complex128)
    x = x0
    span = x1 - x0
    if span <= 0.0:
        return y, 0, OK
    if not _kemble_rhs(kind, par, xk, cf, energy, hb2m, x, y, K[0]):
        return y, 0, TURNING_POINT
    # initial step from the local phase rate
    h = min(span, 0.05 / max(abs(K[0, 0]), 1e-300))
    steps = 0
    while x < x1:
        if steps >= max_steps:
            return y, steps, MAX_STEPS
        if x + h > x1:
            h = x1 - x
        for s in range(1, 7):
            for j in range(3):
                acc = 0.0j
                for m in range(s):
                    acc += _A[s, m] * K[m, j]
                tmp[j] = y[j] + h * acc
            if not _kemble_rhs(kind, par, xk, cf, energy, hb2m, x + _C[s] * h, tmp, K[s]):
                return y, steps, TURNING_POINT
        err = 0.0
        for j in range(3):
            acc = 0.0j
            eacc = 0.0j
            for s in range(7):
                acc += _B[s] * K[s, j]
                eacc += _E[s] * K[s, j]
            ynew[j] = y[j] + h * acc
            if j == 0:
                # the phase enters through exp(2 i phi): control it absolutely
                sc = atol + rtol
            else:
                sc = atol + rtol * max(abs(y[j]), abs(ynew[j]))
            e = abs(h * eacc) / sc
            err = max(err, e)
        if err <= 1.0:
            x += h
            y[:] = ynew
            K[0, :] = K[6, :]
            steps += 1
            fac = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
        else:
            fac = max(0.2, 0.9 * err ** -0.2)
        h *= fac
        if h < 1e-14 * max(1.0, abs(x)):
            return y, steps, STEP_UNDERFLOW
    return y, steps, OK


@njit(cache=True)
def _dxdz(kind, par, xk, cf, energy, hb2m, x):
    z = np.exp(x)
    v, _, _ = potential_eval(kind, par, xk, cf, z)
    return 1.0 / (np.sqrt((energy - v) / hb2m) * z)


@njit(cache=True)
def liouville_grid(kind, par, xk, cf, energy, hb2m, x_top, x_bottom, h, n_max):
    """Uniform grid in the WKB-phase coordinate, descending from x_top.

    Integrates d(ln z)/d(phase) = 1/(k z) with classical RK4 and returns the
    ln z values of the grid points together with f = 1 - Q on them.
    """
    xs = np.empty(n_max)
    fs = np.empty(n_max)
    x = x_top
    n = 0
    while n < n_max:
        xs[n] = x
        q, _ = badlands_eval(kind, par, xk, cf, energy, hb2m, np.exp(x))
        fs[n] = 1.0 - q
        n += 1
        if x <= x_bottom:
            break
        k1 = _dxdz(kind, par, xk, cf, energy, hb2m, x)
        k2 = _dxdz(kind, par, xk, cf, energy, hb2m, x - 0.5 * h * k1)
        k3 = _dxdz(kind, par, xk, cf, energy, hb2m, x - 0.5 * h * k2)
        k4 = _dxdz(kind, par, xk, cf, energy, hb2m, x - h * k3)
        x -= h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
    return xs[:n], fs[:n]


@njit(cache=True)
def numerov_reflection(fs, h, zb_top):
    """Renormalized Numerov sweep for psi'' + f psi = 0 on a descending grid.

    ``fs[0]`` sits at the top coordinate ``zb_top`` and ``fs[i]`` at
    ``zb_top - i h``.  A pure wave exp(-i zb) leaves through the bottom; the
    ratio of the exp(+i zb) and exp(-i zb) amplitudes at the top is returned.
    """
    n = fs.size
    T = h * h * fs / 12.0
    zb0 = zb_top - (n - 1) * h
    # bottom start: discrete outgoing wave
    cb = (1.0 - 5.0 * T[n - 1]) / (1.0 + T[n - 1])
    kb = np.arccos(min(1.0, max(-1.0, cb))) / h
    psi0 = np.exp(-1j * zb0)
    psi1 = psi0 * np.exp(-1j * kb * h)
    R = psi1 * (1.0 + T[n - 2]) / (psi0 * (1.0 + T[n - 1]))
    for i in range(n - 2, 0, -1):
        U = 2.0 * (1.0 - 5.0 * T[i]) / (1.0 + T[i])
        R = U - 1.0 / R
    rho = R * (1.0 + T[1]) / (1.0 + T[0])
    ct = (1.0 - 5.0 * T[0]) / (1.0 + T[0])
    kt = np.arccos(min(1.0, max(-1.0, ct))) / h
    ep = np.exp(1j * kt * h)
    return -np.exp(-2j * kt * zb_top) * (1.0 - rho * ep) / (1.0 - rho / ep)
