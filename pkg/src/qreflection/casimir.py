"""Atom-plane Casimir-Polder potential at zero temperature.

The potential is evaluated to first order in the atomic reflection operator,

    V(z) = (hbar c / 2 pi) int_0^inf dq alpha(q) int_q^inf dkappa exp(-2 kappa z)
           [q^2 rho_TE - (2 kappa^2 - q^2) rho_TM],

where ``q = xi / c`` and ``kappa`` is the imaginary normal wavevector.  The
``kappa`` integral carries the exponential weight and is done by shifted
Gauss-Laguerre quadrature; the ``q`` integral is mapped to ``[0, 1)`` and done
adaptively.
"""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
import math

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import PPoly, make_interp_spline

from ._kernels import KIND_SPLINE
from .constants import C_LIGHT, HBAR, HBARC
from .errors import ConvergenceError, DomainError
from .optics import _fresnel_from_eps, atom_polarizability, epsilon_scalar, fresnel_amplitudes
from .potentials import Potential

_LAGUERRE = {}


def _laguerre(n):
    if n not in _LAGUERRE:
        _LAGUERRE[n] = np.polynomial.laguerre.laggauss(n)
    return _LAGUERRE[n]


def ideal_c4(pol):
    """Retarded coefficient C4* = 3 hbar c alpha(0) / 8 pi of an ideal mirror [neV nm^4]."""
    return 3.0 * HBARC * pol.static_value / (8.0 * math.pi)


@dataclass(frozen=True)
class IdealReference:
    c4_star: float

    @classmethod
    def for_atom(cls, pol):
        return cls(ideal_c4(pol))

    def __call__(self, z):
        return -self.c4_star / np.asarray(z, dtype=float) ** 4


def cp_integrand(material, pol, xi, k_perp, z):
    """Integrand of the double (xi, k_perp) integral for V(z).

    ``alpha(i xi) exp(-2 kappa z) / kappa * [xi^2 rho_TE - (xi^2 + 2 c^2 k^2) rho_TM]``
    with ``kappa = sqrt(k^2 + xi^2/c^2)``, xi in rad/s and k_perp in 1/nm
    (units nm^4 s^-2), so that

        V(z) = hbar / (2 pi c^2) int_0^inf dxi int_0^inf k dk  cp_integrand.
    """
    if z <= 0:
        raise DomainError("z must be positive")
    if xi < 0 or k_perp < 0:
        raise DomainError("xi and k_perp must be non-negative")
    q = xi / C_LIGHT
    kappa = math.hypot(k_perp, q)
    pair = fresnel_amplitudes(material, xi, k_perp)
    c2 = C_LIGHT * C_LIGHT
    bracket = xi * xi * pair.rho_te - (xi * xi + 2.0 * c2 * k_perp * k_perp) * pair.rho_tm
    return float(atom_polarizability(pol, xi)) * math.exp(-2.0 * kappa * z) / kappa * bracket


def _kappa_integral(material, q, z, nodes, weights):
    """int_q^inf dkappa exp(-2 kappa z) [bracket], q = xi/c in 1/nm."""
    kappa = q + nodes / (2.0 * z)
    if material.is_perfect:
        bracket = -2.0 * kappa * kappa
    else:
        eps = epsilon_scalar(material, HBARC * 1e-9 * q)
        te, tm = _fresnel_from_eps(eps, q, kappa)
        bracket = q * q * te - (2.0 * kappa * kappa - q * q) * tm
    return math.exp(-2.0 * q * z) / (2.0 * z) * float(np.dot(weights, bracket))


def _xi_integral(material, pol, z, n_laguerre, epsrel):
    nodes, weights = _laguerre(n_laguerre)
    q_atom = pol.resonance / (HBARC * 1e-9)
    q0 = min(1.0 / (2.0 * z), q_atom)
    inv_res = 1.0 / pol.resonance

    def integrand(t):
        if t >= 1.0:
            return 0.0
        q = q0 * t / (1.0 - t)
        u = q * HBARC * 1e-9 * inv_res
        alpha = pol.static_value / (1.0 + u * u)
        return alpha * _kappa_integral(material, q, z, nodes, weights) * q0 / (1.0 - t) ** 2

    scales = [q_atom] + [o.resonance / (HBARC * 1e-9) for o in material.oscillators if o.resonance > 0]
    points = sorted({s / (s + q0) for s in scales if 0 < s / (s + q0) < 1})
    val, err = quad(integrand, 0.0, 1.0, epsrel=epsrel, epsabs=0.0, limit=400, points=points or None)
    return val, err


def cp_potential_point(material, pol, z, rtol=1e-6, n_laguerre=48):
    """Casimir-Polder potential V(z) in neV.

    Parameters
    ----------
    material : MaterialModel
    pol : AtomPolarizability
    z : float
        atom-surface distance [nm]
    rtol : float
        relative accuracy target, verified by doubling the Laguerre order

    Raises
    ------
    ConvergenceError
        if the two quadrature orders disagree by more than ``rtol``
    """
    if z <= 0:
        raise DomainError("z must be positive")
    inner_tol = min(1e-9, rtol * 1e-2)
    v1, e1 = _xi_integral(material, pol, z, n_laguerre, inner_tol)
    v2, e2 = _xi_integral(material, pol, z, 2 * n_laguerre, inner_tol)
    achieved = max(abs(v2 - v1), e1, e2) / abs(v2)
    if achieved > rtol:
        raise ConvergenceError(f"Casimir-Polder quadrature at z={z:g} nm", achieved)
    return HBARC / (2.0 * math.pi) * v2


def c3_limit(material, pol):
    """Non-retarded coefficient from its own 1D quadrature [neV nm^3].

    ``C3 = (hbar/4 pi) int dxi alpha(i xi) (eps - 1)/(eps + 1)``.
    """
    def integrand(t):
        xi = t / (1.0 - t) * pol.resonance / (HBAR * 1e-9)
        if material.is_perfect:
            contrast = 1.0
        else:
            eps = epsilon_scalar(material, HBAR * 1e-9 * xi)
            contrast = 1.0 if eps == np.inf else (eps - 1.0) / (eps + 1.0)
        return float(atom_polarizability(pol, xi)) * contrast * pol.resonance / (HBAR * 1e-9) / (1.0 - t) ** 2

    val, _ = quad(integrand, 0.0, 1.0, epsrel=1e-11, limit=400)
    return HBAR / (4.0 * math.pi) * val


@dataclass(frozen=True, eq=False)
class PotentialTable(Potential):
    """Tabulated Casimir-Polder potential with power-law asymptotes.

    Inside the grid ``ln(-V)`` is a quintic spline in ``ln z`` clamped to the
    asymptotic slopes, so that the badlands function (which needs V'') stays
    twice differentiable; below ``z_low`` and above ``z_high`` the power laws
    ``-c3_tail/z^3`` and ``-c4_tail/z^4`` take over, matched in value and slope.
    """

    material: str
    z_grid: np.ndarray
    values: np.ndarray
    c3: float
    c4: float
    z_low: float
    z_high: float
    c3_tail: float
    c4_tail: float
    c4_star: float
    rtol: float = 1e-6
    _spline: PPoly = field(default=None, repr=False)

    @property
    def name(self):
        return self.material

    @property
    def far_tail(self):
        return self.c4_tail, 4.0

    @property
    def near_tail(self):
        return self.c3_tail, 3.0

    def segments(self):
        par = np.array([math.log(self.z_low), math.log(self.z_high),
                        self.c3_tail, 3.0, self.c4_tail, 4.0])
        return [(0.0, np.inf, KIND_SPLINE, par, self._spline.x, np.ascontiguousarray(self._spline.c))]

    def slope(self, z):
        """Local exponent d ln(-V) / d ln z (negative)."""
        v, dv, _ = self.derivatives(z)
        return dv * np.asarray(z) / v


def _grid_values(material, pol, zs, rtol, workers):
    if workers and workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            return np.array(list(ex.map(cp_potential_point, [material] * len(zs), [pol] * len(zs),
                                        zs, [rtol] * len(zs))))
    return np.array([cp_potential_point(material, pol, z, rtol) for z in zs])


def _fit_power(z, v, p):
    """Slope-constrained least squares of ln(-V) = ln c - p ln z; returns c, max residual."""
    lc = np.mean(np.log(-v) + p * np.log(z))
    c = math.exp(lc)
    return c, float(np.max(np.abs(-v * z ** p / c - 1.0)))


def _log_spline(zs, vs):
    # pure power laws have zero curvature in log-log coordinates
    bspl = make_interp_spline(np.log(zs), np.log(-vs), k=5,
                              bc_type=([(1, -3.0), (2, 0.0)], [(1, -4.0), (2, 0.0)]))
    pp = PPoly.from_spline(bspl)
    keep = np.diff(pp.x) > 0  # drop the zero-length end intervals of the knot vector
    x = np.append(pp.x[:-1][keep], pp.x[1:][keep][-1])
    return PPoly(np.ascontiguousarray(pp.c[:, keep]), x)


def build_potential_table(material, pol, z_min=1e-2, z_max=1e6, n_points=321,
                          rtol=1e-6, workers=1):
    """Tabulate V(z) on a log grid and attach the van der Waals / retarded asymptotes.

    Raises
    ------
    ConvergenceError
        when a power-law fit over the end decade leaves a residual above 1%
        or the asymptote mismatches the data at the switchover by more than 0.5%
    """
    if not 0 < z_min < z_max:
        raise DomainError("need 0 < z_min < z_max")
    if n_points < 50:
        raise DomainError("n_points must be >= 50")
    zs = np.geomspace(z_min, z_max, n_points)
    vs = _grid_values(material, pol, zs, rtol, workers)
    if np.any(vs >= 0):
        raise ConvergenceError("non-attractive potential value in table")

    lo = zs <= z_min * 10.0
    hi = zs >= z_max / 10.0
    c3, res3 = _fit_power(zs[lo], vs[lo], 3.0)
    c4, res4 = _fit_power(zs[hi], vs[hi], 4.0)
    if res3 > 0.01 or res4 > 0.01:
        raise ConvergenceError("power-law fit over the end decades; widen the z range",
                               max(res3, res4))
    c3_tail = -vs[0] * zs[0] ** 3
    c4_tail = -vs[-1] * zs[-1] ** 4
    mismatch = max(abs(c3_tail / c3 - 1.0), abs(c4_tail / c4 - 1.0))
    if mismatch > 0.005:
        raise ConvergenceError("asymptote switchover mismatch", mismatch)
    spline = _log_spline(zs, vs)
    return PotentialTable(material.name, zs, vs, c3, c4, float(zs[0]), float(zs[-1]),
                          c3_tail, c4_tail, ideal_c4(pol), rtol, spline)


def ratio_to_ideal(table, z):
    """V(z) / V*(z) with V* = -C4*/z^4 of the ideal mirror for the same atom."""
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0):
        raise DomainError("z must be positive")
    return table(z) * z ** 4 / (-table.c4_star)


@lru_cache(maxsize=64)
def material_table(material, pol=None, z_min=1e-2, z_max=1e6, n_points=321, rtol=1e-6):
    """Memoized :func:`build_potential_table` (hydrogen polarizability by default)."""
    from .optics import AtomPolarizability
    pol = AtomPolarizability.hydrogen() if pol is None else pol
    return build_potential_table(material, pol, z_min, z_max, n_points, rtol)
