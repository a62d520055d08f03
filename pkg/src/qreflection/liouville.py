"""Liouville transformations and the badlands barrier picture.

Taking the WKB phase as coordinate, ``zb = phi_dB(z)``, and rescaling
``psi~ = sqrt(zb') psi`` turns the Schrodinger equation ``psi'' + F psi = 0``
into ``psi~'' + (1 - Q) psi~ = 0``: scattering at unit energy on a barrier
given by the badlands function ``Q``.  Reflection amplitudes and Wronskians
are unchanged by the map.
"""
from dataclasses import dataclass
import math

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from . import _kernels as K
from .errors import ConvergenceError, DomainError
from .reflection import ReflectionResult, ScatteringProblem, phase_tail

IDENTITY_TOL = 1e-8
BARRIER_CUTOFF = 1e-10


class CoordinateMap:
    """Smooth increasing change of coordinate ``z -> zt(z)``.

    Parameters
    ----------
    forward : callable
    derivative : callable, optional
        ``zt'(z)``; numerical if omitted
    inverse : callable, optional
        numerical (bracketed root finding) if omitted
    second, third : callable, optional
        analytic ``zt''`` and ``zt'''``; when both are given the Schwarzian
        is evaluated exactly
    """

    def __init__(self, forward, derivative=None, inverse=None, second=None, third=None):
        self.forward = forward
        self._d1 = derivative
        self._inverse = inverse
        self._d2 = second
        self._d3 = third

    def __call__(self, z):
        return self.forward(z)

    def derivative(self, z):
        if self._d1 is not None:
            return self._d1(z)
        return _derivatives(self.forward, z)[0]

    def inverse(self, zt, bracket=None):
        if self._inverse is not None:
            return self._inverse(zt)
        lo, hi = bracket if bracket is not None else (-1.0, 1.0)
        for _ in range(200):
            if self.forward(lo) <= zt <= self.forward(hi):
                break
            lo, hi = lo - (hi - lo), hi + (hi - lo)
        return brentq(lambda z: self.forward(z) - zt, lo, hi, xtol=1e-15, rtol=1e-15)

    @property
    def analytic(self):
        return None not in (self._d1, self._d2, self._d3)

    def compose(self, other):
        """``other o self``: apply ``self`` first."""
        return CoordinateMap(lambda z: other(self(z)))

    @classmethod
    def wkb(cls, problem):
        """The WKB-phase map of a scattering problem (analytic derivatives)."""
        from .reflection import wkb_phase

        def derivs(z):
            F, F1, F2 = _F_derivatives(problem, z)
            k = np.sqrt(F)
            return k, F1 / (2 * k), F2 / (2 * k) - F1 * F1 / (4 * k ** 3)

        return cls(lambda z: wkb_phase(problem, z), lambda z: derivs(z)[0], None,
                   lambda z: derivs(z)[1], lambda z: derivs(z)[2])


def _fd_weights(offsets, m):
    n = len(offsets)
    A = np.array([[o ** k / math.factorial(k) for o in offsets] for k in range(n)])
    rhs = np.zeros(n)
    rhs[m] = 1.0
    return np.linalg.solve(A, rhs)


_OFFSETS = np.arange(-4, 5, dtype=float)
_W = [_fd_weights(_OFFSETS, m) for m in (1, 2, 3)]


def _stencil(f, z, h):
    vals = np.array([f(z + o * h) for o in _OFFSETS], dtype=float)
    return [float(np.dot(w, vals)) / h ** (m + 1) for m, w in enumerate(_W)]


def _schwarzian_from(d1, d2, d3):
    return d3 / d1 - 1.5 * (d2 / d1) ** 2


def _derivatives(f, z, h0=None):
    """First three derivatives by 9-point central stencils with step selection.

    The step is halved repeatedly; the pair of successive estimates of the
    Schwarzian that agree best is kept.
    """
    h = h0 if h0 is not None else 0.05 * max(abs(z), 1e-3)
    best, best_diff, prev = None, np.inf, None
    for _ in range(8):
        d = _stencil(f, z, h)
        s = _schwarzian_from(*d)
        if prev is not None and abs(s - prev) < best_diff:
            best, best_diff = d, abs(s - prev)
        prev = s
        h /= 2.0
    return best


def schwarzian(cmap, z):
    """Schwarzian derivative ``{zt, z} = zt'''/zt' - 3/2 (zt''/zt')^2``.

    ``cmap`` is a :class:`CoordinateMap` or any smooth scalar callable; the
    derivatives are analytic when the map provides them and otherwise come
    from high-order central differences.
    """
    if isinstance(cmap, CoordinateMap) and cmap.analytic:
        return _schwarzian_from(cmap._d1(z), cmap._d2(z), cmap._d3(z))
    f = cmap.forward if isinstance(cmap, CoordinateMap) else cmap
    z = np.asarray(z, dtype=float)
    out = np.array([_schwarzian_from(*_derivatives(f, float(zz))) for zz in z.ravel()])
    return out.reshape(z.shape)[()] if z.ndim == 0 else out.reshape(z.shape)


def cayley_compose_check(map1, map2, points=None):
    """Residual of the composition rule ``{m2 o m1, z} = m1'^2 {m2, m1} + {m1, z}``.

    Returns the maximum absolute residual over ``points`` (default: eleven
    points spread over [1, 2]).
    """
    f1 = map1.forward if isinstance(map1, CoordinateMap) else map1
    f2 = map2.forward if isinstance(map2, CoordinateMap) else map2
    points = np.linspace(1.0, 2.0, 11) if points is None else np.asarray(points, dtype=float)
    worst = 0.0
    for z in points:
        lhs = schwarzian(lambda t: f2(f1(t)), z)
        d1 = map1.derivative(z) if isinstance(map1, CoordinateMap) else _derivatives(f1, z)[0]
        rhs = d1 ** 2 * schwarzian(map2, f1(z)) + schwarzian(map1, z)
        worst = max(worst, abs(lhs - rhs))
    return float(worst)


def _F_derivatives(problem, z):
    v, dv, d2v = problem.potential.derivatives(z)
    hb2m = problem.hb2m
    F = (problem.energy - v) / hb2m
    if np.any(F <= 0):
        raise DomainError("F <= 0: classical turning point")
    return F, -dv / hb2m, -d2v / hb2m


def badlands(problem, z):
    """Badlands function ``Q = F''/(4F^2) - 5F'^2/(16F^3)`` (dimensionless).

    Derivatives of F come analytically from the potential representation.
    """
    F, F1, F2 = _F_derivatives(problem, z)
    return F2 / (4 * F * F) - 5 * F1 * F1 / (16 * F ** 3)


def barrier_peak(problem, z_range=None, n=400):
    """``(max Q, z at max)`` located on a log grid and refined in ln z."""
    z_lo, z_hi = z_range if z_range is not None else problem.z_window
    zs = np.geomspace(z_lo, z_hi, n)
    q = badlands(problem, zs)
    i = int(np.argmax(q))
    lo, hi = math.log(zs[max(i - 1, 0)]), math.log(zs[min(i + 1, n - 1)])
    if hi > lo:
        res = minimize_scalar(lambda x: -badlands(problem, math.exp(x)), bounds=(lo, hi),
                              method="bounded", options={"xatol": 1e-10})
        if -res.fun > q[i]:
            return float(-res.fun), float(math.exp(res.x))
    return float(q[i]), float(zs[i])


@dataclass(frozen=True)
class LiouvilleProblem:
    """Barrier problem ``psi'' + (E - V) psi = 0`` in the WKB-phase coordinate.

    ``zbold`` and ``barrier`` sample the transformed domain on the source grid
    ``z``; ``energy`` is always 1.
    """

    z: np.ndarray
    zbold: np.ndarray
    barrier: np.ndarray
    source: ScatteringProblem
    energy: float = 1.0

    @property
    def z_bottom(self):
        return float(self.z[0])

    @property
    def z_top(self):
        return float(self.z[-1])


def _transformed_window(problem, cutoff):
    if problem.potential.breakpoints:
        raise DomainError("the Liouville map needs a smooth potential")
    z_lo, z_hi = problem.z_window
    for _ in range(200):
        if abs(badlands(problem, z_lo)) < cutoff and abs(badlands(problem, z_lo / 2)) < cutoff:
            break
        z_lo /= 2
    else:
        raise ConvergenceError("no lower cutoff for the transformed barrier")
    for _ in range(200):
        if abs(badlands(problem, z_hi)) < cutoff and abs(badlands(problem, 2 * z_hi)) < cutoff:
            break
        z_hi *= 2
    else:
        raise ConvergenceError("no upper cutoff for the transformed barrier")
    return z_lo, z_hi


_GL_X, _GL_W = np.polynomial.legendre.leggauss(12)


def _phase_grid(problem, zs):
    """WKB phase on an increasing grid by panel-wise Gauss-Legendre in ln z."""
    x = np.log(zs)
    mid = 0.5 * (x[1:] + x[:-1])
    half = 0.5 * (x[1:] - x[:-1])
    nodes = mid[:, None] + half[:, None] * _GL_X[None, :]
    zn = np.exp(nodes)
    F, _, _ = _F_derivatives(problem, zn)
    panels = half * np.sum(_GL_W[None, :] * np.sqrt(F) * zn, axis=1)
    top = problem.k_inf * zs[-1] - phase_tail(problem, zs[-1])
    return top - np.concatenate([np.cumsum(panels[::-1])[::-1], [0.0]])


def liouville_transform(problem, n_points=2000, cutoff=BARRIER_CUTOFF):
    """Map a scattering problem onto its badlands barrier problem.

    The identity ``1 - Q = (F - {zb, z}/2) / zb'^2`` is verified pointwise.

    Raises
    ------
    ConvergenceError
        if the identity fails by more than 1e-8
    """
    z_lo, z_hi = _transformed_window(problem, cutoff)
    zs = np.geomspace(z_lo, z_hi, n_points)
    zb = _phase_grid(problem, zs)
    q = badlands(problem, zs)
    cmap = CoordinateMap.wkb(problem)
    F = _F_derivatives(problem, zs)[0]
    S = schwarzian(cmap, zs)
    bold_F = (F - 0.5 * S) / cmap.derivative(zs) ** 2
    err = float(np.max(np.abs(bold_F - (1.0 - q))))
    if err > IDENTITY_TOL:
        raise ConvergenceError("Liouville identity check", err)
    if np.any(np.diff(zb) <= 0):
        raise ConvergenceError("WKB phase not increasing on the grid")
    return LiouvilleProblem(zs, zb, q, problem)


def _numerov_amplitude(lp, h):
    prob = lp.source
    (kind, par, xk, cf) = prob.potential.segments()[0][2:]
    x_top, x_bot = math.log(lp.z_top), math.log(lp.z_bottom)
    n_max = int((lp.zbold[-1] - lp.zbold[0]) / h * 1.01) + 16
    xs, fs = K.liouville_grid(kind, par, xk, cf, prob.energy, prob.hb2m, x_top, x_bot, h, n_max)
    if xs[-1] > x_bot:
        raise ConvergenceError("transformed grid did not reach the lower cutoff")
    return complex(K.numerov_reflection(fs, h, float(lp.zbold[-1])))


def scatter_transformed(lp, h=0.05, tol=1e-7, max_halvings=4):
    """Reflection amplitude of the transformed barrier problem.

    Uses a renormalized Numerov sweep on a uniform grid in the WKB phase,
    independent of the amplitude-equation solver, at steps ``h`` and ``h/2``
    combined by Richardson extrapolation (fourth order).  The step is halved
    until the change from the finer sweep drops below ``tol``.
    """
    r2 = _numerov_amplitude(lp, h)
    for _ in range(max_halvings + 1):
        h /= 2.0
        r1, r2 = r2, _numerov_amplitude(lp, h)
        r = (16 * r2 - r1) / 15
        delta = abs(r - r2)
        if delta <= tol:
            break
    else:
        raise ConvergenceError("Numerov step refinement", delta)
    # no transmission bookkeeping here: the outgoing wave carries 1 - |r|^2
    return ReflectionResult(r, abs(r) ** 2, 1.0 - abs(r) ** 2, (delta,),
                            (lp.z_bottom, lp.z_top), lp.source.energy)


def wronskian(psi1, psi2):
    """``W = psi1 psi2' - psi1' psi2`` for ``(psi, psi')`` pairs (arrays broadcast)."""
    (p1, d1), (p2, d2) = psi1, psi2
    return np.asarray(p1) * d2 - np.asarray(d1) * p2


def transform_solution(cmap, z, psi, dpsi):
    """Image ``(psi~, dpsi~/dzt)`` of a solution under the Liouville rescaling."""
    if cmap.analytic:
        d1, d2 = cmap._d1(z), cmap._d2(z)
    else:
        d1, d2, _ = _derivatives(cmap.forward, z)
    s = np.sqrt(d1)
    return s * psi, dpsi / s + d2 * psi / (2 * d1 * s)


def badlands_profile(problem, n=400):
    """Columns z_nm, phase_zbold, Q, F over the transformed window."""
    z_lo, z_hi = _transformed_window(problem, BARRIER_CUTOFF)
    zs = np.geomspace(z_lo, z_hi, n)
    return zs, _phase_grid(problem, zs), badlands(problem, zs), _F_derivatives(problem, zs)[0]
