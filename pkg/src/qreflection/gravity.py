"""Gravitationally bound states above a mirror and their lifetimes.

With an ideal reflecting floor the levels are ``E_n = m gbar l_grav |a_n|``
where ``a_n`` are the zeros of Ai.  Quantum reflection on the Casimir-Polder
potential shifts them by ``m gbar a`` with ``a`` the complex scattering length,
so every low-lying level decays with ``tau = hbar / (2 m gbar |Im a|)``.
"""
from dataclasses import dataclass
import math

from scipy.optimize import brentq
from scipy.special import airy

from .constants import G_STANDARD, HBAR, MC2_HYDROGEN, gravitational_length, weight_per_length
from .errors import DomainError
from .materials import TABLE_SURFACES, get_material

#: neV -> peV
_PEV = 1e3


@dataclass(frozen=True)
class GravityConfig:
    """``g_bar`` [m/s^2] absorbs the gravitational-to-inertial mass ratio."""

    g_bar: float = G_STANDARD
    mc2: float = MC2_HYDROGEN

    def __post_init__(self):
        if not self.g_bar > 0:
            raise DomainError("g_bar must be positive")

    @property
    def weight(self):
        """m gbar [neV/nm]."""
        return weight_per_length(self.g_bar, self.mc2)

    @property
    def ell_grav(self):
        """(hbar^2 / 2 m^2 gbar)^(1/3) [m]."""
        return gravitational_length(self.g_bar, self.mc2) * 1e-9


@dataclass(frozen=True)
class BoundState:
    n: int
    energy_ideal: float  # peV
    energy_shifted: complex  # peV
    lifetime: float  # s


def _airy_guess(n):
    t = 3.0 * math.pi * (4 * n - 1) / 8.0
    return -t ** (2.0 / 3.0) * (1.0 + 5.0 / 48.0 * t ** -2 - 5.0 / 36.0 * t ** -4)


def airy_zero(n):
    """n-th zero of Ai (negative), by Brent's method inside an asymptotic bracket."""
    if int(n) != n or n < 1:
        raise DomainError("n must be an integer >= 1")
    guess = _airy_guess(int(n))
    half = 0.25 * math.pi / math.sqrt(-guess)
    return brentq(lambda x: airy(x)[0], guess - half, guess + half, xtol=1e-14, rtol=1e-15)


def gbs_energy(cfg, n):
    """Ideal-mirror level ``E_n`` [peV]."""
    return cfg.weight * cfg.ell_grav * 1e9 * abs(airy_zero(n)) * _PEV


def shifted_energy(energy, a, cfg=GravityConfig()):
    """``E_n + m gbar a`` [peV] for ``energy`` in peV and ``a`` in nm."""
    a = complex(a)
    if a.imag > 0:
        raise DomainError("an absorbing surface has Im(a) <= 0")
    return energy + cfg.weight * a * _PEV


def gbs_lifetime(a, cfg=GravityConfig()):
    """``hbar / (2 m gbar |Im a|)`` [s]; ``math.inf`` when ``Im a = 0``."""
    im = abs(complex(a).imag)
    if im == 0.0:
        return math.inf
    return HBAR / (2.0 * cfg.weight * im)


def bound_states(a, cfg=GravityConfig(), n_max=5):
    return [BoundState(n, e, shifted_energy(e, a, cfg), gbs_lifetime(a, cfg))
            for n, e in ((n, gbs_energy(cfg, n)) for n in range(1, n_max + 1))]


@dataclass(frozen=True)
class LifetimeRow:
    material: str
    a: complex  # nm
    lifetime: float  # s


def lifetime_table(materials=TABLE_SURFACES, cfg=GravityConfig(), paths=None):
    """Material -> potential -> scattering length -> lifetime, in input order."""
    from .casimir import material_table
    from .reflection import scattering_length

    rows = []
    for name in materials:
        material = get_material(name, paths) if isinstance(name, str) else name
        a = scattering_length(material_table(material))
        rows.append(LifetimeRow(material.name, a, gbs_lifetime(a, cfg)))
    return rows
