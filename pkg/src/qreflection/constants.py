"""Physical constants in the internal unit system (nm, neV, s)."""
import numpy as np
from scipy import constants as _sc

#: reduced Planck constant [neV s]
HBAR = _sc.hbar / _sc.e * 1e9
#: speed of light [nm/s]
C_LIGHT = _sc.c * 1e9
#: hbar * c [neV nm]
HBARC = HBAR * C_LIGHT
#: Bohr radius [nm]
BOHR = _sc.physical_constants["Bohr radius"][0] * 1e9

_RYDBERG_NEV = _sc.physical_constants["Rydberg constant times hc in eV"][0] * 1e9
#: rest energy of (anti)hydrogen [neV]
MC2_HYDROGEN = (_sc.physical_constants["proton mass energy equivalent in MeV"][0]
                + _sc.physical_constants["electron mass energy equivalent in MeV"][0]) * 1e15 \
    - _RYDBERG_NEV

#: standard local gravity [m/s^2]
G_STANDARD = 9.81


def hbar2_over_2m(mc2=MC2_HYDROGEN):
    """Return hbar^2/2m in neV nm^2."""
    return HBARC ** 2 / (2.0 * mc2)


def weight_per_length(g=G_STANDARD, mc2=MC2_HYDROGEN):
    """Return m*g in neV per nm (m*g = 102.5 neV/m for hydrogen)."""
    return mc2 * g / _sc.c ** 2 * 1e-9


def energy_from_height(h, g=G_STANDARD, mc2=MC2_HYDROGEN):
    """Kinetic energy [neV] gained by a free fall from height ``h`` [m]."""
    return weight_per_length(g, mc2) * np.asarray(h) * 1e9


def height_from_energy(energy, g=G_STANDARD, mc2=MC2_HYDROGEN):
    return np.asarray(energy) / weight_per_length(g, mc2) * 1e-9


def gravitational_length(g=G_STANDARD, mc2=MC2_HYDROGEN):
    """(hbar^2 / 2 m^2 g)^(1/3) in nm."""
    return (hbar2_over_2m(mc2) / weight_per_length(g, mc2)) ** (1.0 / 3.0)
