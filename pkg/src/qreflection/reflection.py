"""Quantum reflection on an attractive surface potential.

The wavefunction is expanded on the two WKB waves
``psi = b+ k^-1/2 exp(i phi) + b- k^-1/2 exp(-i phi)`` with
``psi' = i k (b+ ... - b- ...)``, which gives the coupled equations

    b+' = (k'/2k) exp(-2i phi) b-,    b-' = (k'/2k) exp(+2i phi) b+.

They are integrated outward from an absorbing inner boundary (a purely
incoming WKB wave) to the free region, where ``r = b+/b-``.
"""
from dataclasses import dataclass
import math

import numpy as np
from scipy.integrate import quad

from . import _kernels as K
from .constants import MC2_HYDROGEN, G_STANDARD, energy_from_height, hbar2_over_2m
from .errors import ConvergenceError, DomainError
from .optics import MaterialModel
from .potentials import Potential


@dataclass(frozen=True)
class ScatteringProblem:
    """Stationary scattering at energy ``energy`` [neV] on ``potential``.

    ``z_window`` defaults to the validity window: the badlands function is
    below ``q_tol`` at the inner edge and ``|V|/E`` is below ``v_tol`` at the
    outer edge.
    """

    energy: float
    potential: Potential
    z_window: tuple = None
    rtol: float = 1e-11
    window_tol: float = 1e-7
    q_tol: float = 1e-8
    v_tol: float = 1e-10
    mc2: float = MC2_HYDROGEN

    def __post_init__(self):
        if not self.energy > 0:
            raise DomainError("energy must be positive")
        if self.z_window is None:
            object.__setattr__(self, "z_window", default_window(self.potential, self.energy,
                                                                self.hb2m, self.q_tol, self.v_tol))
        zmin, zmax = self.z_window
        if not 0 < zmin < zmax:
            raise DomainError(f"invalid window {self.z_window}")

    @classmethod
    def from_height(cls, potential, height, g=G_STANDARD, **kw):
        """Problem for an atom dropped from ``height`` [m] (E = m g h)."""
        if not height > 0:
            raise DomainError("height must be positive")
        return cls(float(energy_from_height(height, g, kw.get("mc2", MC2_HYDROGEN))), potential, **kw)

    @property
    def hb2m(self):
        return hbar2_over_2m(self.mc2)

    @property
    def k_inf(self):
        """Free wavevector sqrt(2 m E)/hbar [1/nm]."""
        return math.sqrt(self.energy / self.hb2m)


@dataclass(frozen=True)
class ReflectionResult:
    r: complex
    probability: float
    transmitted_flux_fraction: float
    window_convergence: tuple = ()
    window: tuple = None
    energy: float = None
    steps: int = 0

    @property
    def flux_deficit(self):
        """1 - |r|^2 - T; zero for exact current conservation."""
        return 1.0 - self.probability - self.transmitted_flux_fraction


def local_F(problem, z):
    """Squared local wavevector F = 2m(E - V)/hbar^2 [1/nm^2]."""
    return (problem.energy - problem.potential(z)) / problem.hb2m


def _badlands(potential, energy, hb2m, z):
    v, dv, d2v = potential.derivatives(z)
    F = (energy - v) / hb2m
    F1 = -dv / hb2m
    F2 = -d2v / hb2m
    return F2 / (4 * F * F) - 5 * F1 * F1 / (16 * F ** 3), F


def default_window(potential, energy, hb2m, q_tol=1e-8, v_tol=1e-10):
    """Integration window (z_min, z_max) in nm."""
    bps = potential.breakpoints
    if potential.near_tail is not None:
        z = min([1.0] + [b / 2 for b in bps])
        below = 0
        for _ in range(400):
            q, F = _badlands(potential, energy, hb2m, z)
            if F <= 0:
                raise DomainError(f"classical turning point near z={z:g} nm")
            below = below + 1 if abs(q) < q_tol else 0
            if below >= 3:
                break
            z /= 2.0
        else:
            raise ConvergenceError("no inner window edge with small badlands function")
        z_min = 4.0 * z
    else:
        z_min = bps[0] / 2 if bps else 1.0

    z_max = 2.0 * bps[-1] if bps else 2.0 * z_min
    if potential.far_tail is not None:
        c, p = potential.far_tail
        z_max = max(z_max, (c / (v_tol * energy)) ** (1.0 / p))
        for _ in range(200):
            if abs(potential(z_max)) < v_tol * energy:
                break
            z_max *= 1.5
    return float(z_min), float(z_max)


def phase_tail(problem, z):
    """int_z^inf (k - k_inf) dz' [rad]."""
    E, hb2m, kinf = problem.energy, problem.hb2m, problem.k_inf
    pot = problem.potential

    def f(u):
        zz = math.exp(u)
        v = float(pot(zz))
        k = math.sqrt((E - v) / hb2m)
        return -v / hb2m / (k + kinf) * zz

    pts = [math.log(b) for b in pot.breakpoints if b > z]
    total = 0.0
    lo = math.log(z)
    for b in pts + [None]:
        hi = b if b is not None else np.inf
        if hi is np.inf:
            if pot.far_tail is None and (not pot.breakpoints or z >= pot.breakpoints[-1]):
                break
            val, _ = quad(f, lo, lo + 60.0, epsabs=1e-15, epsrel=1e-12, limit=400)
        else:
            val, _ = quad(f, lo, hi, epsabs=1e-15, epsrel=1e-12, limit=400)
        total += val
        lo = hi if b is not None else lo
    return total


def wkb_phase(problem, z):
    """WKB phase ``phi(z) = k_inf z - int_z^inf (k - k_inf)``, normalized so that
    ``phi(z) - k_inf z -> 0`` at infinity."""
    z = np.asarray(z, dtype=float)
    out = np.array([problem.k_inf * zz - phase_tail(problem, zz) for zz in z.ravel()])
    return out.reshape(z.shape)[()] if z.ndim == 0 else out.reshape(z.shape)


def _k_and_dk(kind, par, xk, cf, energy, hb2m, z):
    v, dv, _ = K.potential_eval(kind, par, xk, cf, z)
    F = (energy - v) / hb2m
    if F <= 0:
        raise DomainError(f"classical turning point at z={z:g} nm (non-attractive potential?)")
    k = math.sqrt(F)
    return k, -dv / (2 * hb2m * k)


_STATUS = {K.TURNING_POINT: "classical turning point (F <= 0)",
           K.MAX_STEPS: "step budget exhausted", K.STEP_UNDERFLOW: "step size underflow"}


def _solve_window(problem, z_min, z_max, max_steps=50_000_000):
    E, hb2m = problem.energy, problem.hb2m
    segs = [s for s in problem.potential.segments() if s[1] > z_min and s[0] < z_max]
    kind, par, xk, cf = segs[0][2:]
    k, dk = _k_and_dk(kind, par, xk, cf, E, hb2m, z_min)
    # exact incoming WKB wave (psi and psi') expressed in the amplitude basis
    eps = dk / (4 * k * k)
    y = np.array([0.0, 1j * eps, 1.0 - 1j * eps], dtype=np.complex128)
    start_b = (y[1], y[2])
    steps = 0
    for i, (za, zb, kind, par, xk, cf) in enumerate(segs):
        lo, hi = max(za, z_min), min(zb, z_max)
        if kind == K.KIND_CONST:
            kc = math.sqrt((E - par[0]) / hb2m) if E > par[0] else None
            if kc is None:
                raise DomainError("classical turning point in a constant segment")
            y[0] += kc * (hi - lo)
        else:
            y, n, status = K.kemble_segment(kind, par, xk, cf, E, hb2m, math.log(lo), math.log(hi),
                                            y, problem.rtol, problem.rtol * 1e-2, max_steps)
            steps += n
            if status == K.TURNING_POINT:
                raise DomainError("classical turning point: " + _STATUS[status])
            if status != K.OK:
                raise ConvergenceError("amplitude integration: " + _STATUS[status])
        if i + 1 < len(segs):
            kl, _ = _k_and_dk(kind, par, xk, cf, E, hb2m, hi)
            kr, _ = _k_and_dk(*segs[i + 1][2:], E, hb2m, hi)
            s = math.sqrt(kr / kl)
            ph = np.exp(1j * y[0].real)
            up, um = y[1] * ph, y[2] / ph
            vp = 0.5 * (s * (up + um) + (up - um) / s)
            vm = 0.5 * (s * (up + um) - (up - um) / s)
            y[1], y[2] = vp / ph, vm * ph
    phi_true = problem.k_inf * z_max - phase_tail(problem, z_max)
    shift = phi_true - y[0].real
    r = y[1] / y[2] * np.exp(-2j * shift)
    incoming = abs(y[2]) ** 2
    transmitted = (abs(start_b[1]) ** 2 - abs(start_b[0]) ** 2) / incoming
    return complex(r), float(transmitted), steps


def integrate_amplitudes(problem, max_extensions=6):
    """Reflection amplitude with an absorbing inner boundary.

    The window is widened (inner edge halved, outer edge doubled) until two
    successive amplitudes differ by less than ``problem.window_tol``.

    Returns
    -------
    ReflectionResult
    """
    z_min, z_max = problem.z_window
    r, t, steps = _solve_window(problem, z_min, z_max)
    deltas = []
    for _ in range(max_extensions):
        z_min, z_max = z_min / 2, z_max * 2
        r2, t2, n2 = _solve_window(problem, z_min, z_max)
        deltas.append(abs(r2 - r))
        r, t, steps = r2, t2, steps + n2
        if deltas[-1] < problem.window_tol:
            break
    else:
        raise ConvergenceError("window extension", deltas[-1])
    return ReflectionResult(r, abs(r) ** 2, t, tuple(deltas), (z_min, z_max), problem.energy, steps)


def as_potential(source):
    """A :class:`Potential` as is; a material through its (cached) CP table."""
    if isinstance(source, MaterialModel):
        from .casimir import material_table
        return material_table(source)
    if not isinstance(source, Potential):
        raise TypeError(f"expected a MaterialModel or Potential, got {type(source).__name__}")
    return source


def solve_height(source, height, g=G_STANDARD, **kw):
    """Reflection result for a drop from ``height`` [m] onto ``source``."""
    return integrate_amplitudes(ScatteringProblem.from_height(as_potential(source), height, g, **kw))


def reflection_curve(source, heights, g=G_STANDARD, **kw):
    """``[(h, |r|^2), ...]`` for drop heights ``h`` [m] in the given order.

    ``source`` is a material or a potential.
    """
    heights = [float(h) for h in heights]
    if not heights:
        raise DomainError("empty height list")
    if any(h <= 0 for h in heights):
        raise DomainError("heights must be positive")
    potential = as_potential(source)
    return [(h, solve_height(potential, h, g, **kw).probability) for h in heights]


@dataclass(frozen=True)
class ScatteringLength:
    a: complex
    heights: tuple
    samples: tuple
    residual: float


def _neville_at_zero(x, y):
    """Polynomial extrapolation to x = 0; returns the last two diagonal estimates."""
    p = list(y)
    n = len(x)
    prev = p[-1]
    for m in range(1, n):
        for i in range(n - m):
            p[i] = (x[i + m] * p[i] - x[i] * p[i + 1]) / (x[i + m] - x[i])
        if m == n - 2:
            prev = p[0]
    return p[0], prev


def scattering_length(source, heights=None, g=G_STANDARD, rtol=1e-3, full_output=False, **kw):
    """Complex scattering length ``a = lim -log(-r) / (2 i k)`` [nm].

    ``a`` is sampled on a decreasing sequence of energies, the logarithm is
    kept continuous from its principal value at the highest energy, and the
    samples are extrapolated polynomially in ``k`` to zero energy.
    """
    potential = as_potential(source)
    if heights is None:
        heights = np.geomspace(1e-3, 1e-7, 5)
    heights = sorted((float(h) for h in heights), reverse=True)
    ks, logs = [], []
    for h in heights:
        prob = ScatteringProblem.from_height(potential, h, g, **kw)
        r = integrate_amplitudes(prob).r
        ks.append(prob.k_inf)
        logs.append(complex(math.log(abs(r)), np.angle(-r)))
    args = np.unwrap([lg.imag for lg in logs])
    samples = [-(complex(lg.real, ph)) / (2j * k) for lg, ph, k in zip(logs, args, ks)]
    a, prev = _neville_at_zero(ks, samples)
    residual = abs(a - prev) / abs(a)
    if residual > rtol:
        raise ConvergenceError("scattering-length extrapolation", residual)
    if full_output:
        return ScatteringLength(complex(a), tuple(heights), tuple(samples), residual)
    return complex(a)
