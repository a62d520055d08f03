"""Optical response on the imaginary frequency axis.

Dielectric functions of mirrors, Bruggeman mixing for porous media, Fresnel
amplitudes and the dynamic polarizability of ground-state hydrogen.  All
frequencies entering the public functions are angular frequencies in rad/s;
wavevectors are in 1/nm.
"""
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from .constants import BOHR, C_LIGHT, HBAR
from .errors import DomainError

PERFECT_MIRROR = "perfect-mirror"
OSCILLATOR_MODEL = "oscillator-model"

#: eV per (rad/s)
_HBAR_EV = HBAR * 1e-9


@dataclass(frozen=True)
class Oscillator:
    """One Lorentz term ``strength * w0^2 / (w0^2 + (hbar xi)^2 + damping * hbar xi)``.

    A zero ``resonance`` turns the term into a Drude term, in which case
    ``strength`` is the squared plasma energy in eV^2.
    """

    strength: float
    resonance: float  # eV
    damping: float = 0.0  # eV

    def __post_init__(self):
        if self.strength < 0 or self.resonance < 0 or self.damping < 0:
            raise DomainError(f"oscillator parameters must be >= 0, got {self}")


@dataclass(frozen=True)
class MaterialModel:
    name: str
    kind: str = OSCILLATOR_MODEL
    oscillators: Tuple[Oscillator, ...] = ()
    porosity: float = 0.0
    note: str = field(default="", compare=False)

    def __post_init__(self):
        if self.kind not in (PERFECT_MIRROR, OSCILLATOR_MODEL):
            raise DomainError(f"unknown material kind {self.kind!r}")
        if not 0.0 <= self.porosity <= 1.0:
            raise DomainError(f"porosity must lie in [0, 1], got {self.porosity}")
        if self.porosity > 0 and self.kind != OSCILLATOR_MODEL:
            raise DomainError("porosity requires an oscillator model")
        object.__setattr__(self, "oscillators", tuple(self.oscillators))

    @property
    def is_perfect(self):
        return self.kind == PERFECT_MIRROR

    def with_porosity(self, porosity, name=None):
        """Same solid skeleton with vacuum volume fraction ``porosity``."""
        if name is None:
            name = f"{self.name}-p{porosity:g}"
        return MaterialModel(name, self.kind, self.oscillators, porosity, self.note)

    def static_epsilon(self):
        """Bulk (zero-porosity) static dielectric constant."""
        return 1.0 + sum(o.strength if o.resonance > 0 else np.inf for o in self.oscillators)


PERFECT = MaterialModel("perfect", PERFECT_MIRROR)


@dataclass(frozen=True)
class AtomPolarizability:
    """Single effective oscillator model of alpha(i xi) / (4 pi eps0).

    static_value in nm^3, resonance in eV.
    """

    static_value: float
    resonance: float

    @classmethod
    def hydrogen(cls, resonance=12.0939):
        # 4.5 a0^3; the default resonance gives the exact C3 = <r^2>/12 = 1/4 a.u.
        return cls(4.5 * BOHR ** 3, resonance)


@dataclass(frozen=True)
class FresnelPair:
    rho_te: float
    rho_tm: float


def _solid_epsilon(oscillators, hxi):
    eps = np.ones_like(hxi)
    for osc in oscillators:
        if osc.resonance > 0:
            w2 = osc.resonance ** 2
            eps = eps + osc.strength * w2 / (w2 + hxi * hxi + osc.damping * hxi)
        else:
            with np.errstate(divide="ignore"):
                eps = eps + osc.strength / (hxi * hxi + osc.damping * hxi)
    return eps


def epsilon_imaginary(material, xi):
    """Dielectric function eps(i xi) of an oscillator-model material.

    Parameters
    ----------
    material : MaterialModel
    xi : float or ndarray
        imaginary angular frequency [rad/s], non-negative

    Returns
    -------
    float or ndarray
    """
    if material.is_perfect:
        raise DomainError("a perfect mirror has no finite dielectric function")
    xi = np.asarray(xi, dtype=float)
    if np.any(xi < 0):
        raise DomainError("xi must be non-negative")
    eps = _solid_epsilon(material.oscillators, _HBAR_EV * xi)
    if material.porosity > 0:
        eps = bruggeman_effective(eps, material.porosity)
    return eps[()] if eps.ndim == 0 else eps


def _bruggeman_residual(e, eps_s, f):
    return f * (1.0 - e) / (1.0 + 2.0 * e) + (1.0 - f) * (eps_s - e) / (eps_s + 2.0 * e)


def bruggeman_effective(eps_solid, porosity, rtol=1e-12):
    """Bruggeman effective permittivity of a solid/vacuum composite.

    Returns the root of the two-phase mixing rule lying in ``[1, eps_solid]``,
    found by bisection elementwise over ``eps_solid``.
    """
    eps_s = np.asarray(eps_solid, dtype=float)
    f = float(porosity)
    if not 0.0 <= f <= 1.0:
        raise DomainError(f"porosity must lie in [0, 1], got {porosity}")
    if np.any(eps_s < 1.0):
        raise DomainError("eps_solid must be >= 1")
    if f == 0.0:
        return eps_s[()] if eps_s.ndim == 0 else eps_s.copy()
    if f == 1.0:
        return np.ones_like(eps_s)[()] if eps_s.ndim == 0 else np.ones_like(eps_s)

    finite = np.isfinite(eps_s)
    lo = np.ones_like(eps_s)
    solid = np.where(finite, eps_s, 1.0)
    hi = solid.copy()
    # residual is positive at e=1 and negative at e=eps_s
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        pos = _bruggeman_residual(mid, solid, f) > 0
        lo = np.where(pos, mid, lo)
        hi = np.where(pos, hi, mid)
        if np.all(hi - lo <= rtol * lo):
            break
    else:
        raise AssertionError("Bruggeman bisection did not converge")
    out = 0.5 * (lo + hi)
    if not np.all(finite):
        # metallic skeleton: percolates (eps infinite) unless f > 2/3
        out = np.where(finite, out, np.inf if f <= 2.0 / 3.0 else 1.0 / (3.0 * f - 2.0))
    return out[()] if out.ndim == 0 else out


def _fresnel_from_eps(eps, xi_c, kappa):
    """Fresnel pair from eps, xi/c [1/nm] and kappa [1/nm] (arrays broadcast)."""
    with np.errstate(invalid="ignore"):
        chi = np.where(xi_c == 0.0, 0.0, (eps - 1.0) * xi_c * xi_c)
    kappa_m = np.sqrt(kappa * kappa + chi)
    rho_te = (kappa - kappa_m) / (kappa + kappa_m)
    with np.errstate(invalid="ignore"):
        rho_tm = np.where(np.isinf(eps), 1.0, (eps * kappa - kappa_m) / (eps * kappa + kappa_m))
    return rho_te, rho_tm


def fresnel_amplitudes(material, xi, k_perp):
    """Fresnel reflection amplitudes at imaginary frequency.

    Parameters
    ----------
    material : MaterialModel
    xi : float
        imaginary angular frequency [rad/s]
    k_perp : float
        transverse wavevector [1/nm]

    Returns
    -------
    FresnelPair
    """
    if xi < 0 or k_perp < 0:
        raise DomainError("xi and k_perp must be non-negative")
    if xi == 0 and k_perp == 0:
        raise DomainError("xi and k_perp cannot both vanish")
    if material.is_perfect:
        return FresnelPair(-1.0, 1.0)
    xi_c = xi / C_LIGHT
    kappa = np.sqrt(k_perp * k_perp + xi_c * xi_c)
    te, tm = _fresnel_from_eps(epsilon_imaginary(material, xi), xi_c, kappa)
    return FresnelPair(float(te), float(tm))


def atom_polarizability(pol, xi):
    """alpha(i xi) / (4 pi eps0) in nm^3."""
    xi = np.asarray(xi, dtype=float)
    if np.any(xi < 0):
        raise DomainError("xi must be non-negative")
    u = _HBAR_EV * xi / pol.resonance
    out = pol.static_value / (1.0 + u * u)
    return out[()] if out.ndim == 0 else out


def _bruggeman_scalar(eps_s, f, rtol=1e-12):
    if f == 0.0:
        return eps_s
    if f == 1.0:
        return 1.0
    if eps_s == np.inf:
        return np.inf if f <= 2.0 / 3.0 else 1.0 / (3.0 * f - 2.0)
    lo, hi = 1.0, eps_s
    while hi - lo > rtol * lo:
        mid = 0.5 * (lo + hi)
        if _bruggeman_residual(mid, eps_s, f) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def epsilon_scalar(material, hxi):
    """eps(i xi) for a single float ``hxi = hbar xi`` in eV (no validation)."""
    eps = 1.0
    h2 = hxi * hxi
    for osc in material.oscillators:
        if osc.resonance > 0:
            w2 = osc.resonance * osc.resonance
            eps += osc.strength * w2 / (w2 + h2 + osc.damping * hxi)
        elif hxi == 0.0:
            eps = np.inf
        else:
            eps += osc.strength / (h2 + osc.damping * hxi)
    if material.porosity > 0:
        eps = _bruggeman_scalar(eps, material.porosity)
    return eps
