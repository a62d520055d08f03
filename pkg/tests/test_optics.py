import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qreflection.constants import BOHR, HBAR
from qreflection.errors import DomainError
from qreflection.materials import get_material
from qreflection.optics import (PERFECT, AtomPolarizability, MaterialModel, Oscillator,
                                atom_polarizability, bruggeman_effective, epsilon_imaginary,
                                epsilon_scalar, fresnel_amplitudes)

EV = 1.0 / (HBAR * 1e-9)  # rad/s per eV

oscillator = st.builds(Oscillator, st.floats(0, 50), st.floats(1e-3, 200), st.floats(0, 5))
models = st.builds(lambda osc, f: MaterialModel("m", oscillators=tuple(osc), porosity=f),
                   st.lists(oscillator, min_size=1, max_size=3), st.floats(0, 1))


@given(models, st.lists(st.floats(0, 1e3), min_size=2, max_size=8))
def test_epsilon_real_at_least_one_and_nonincreasing(m, hxi):
    xi = np.sort(np.array(hxi)) * EV
    eps = epsilon_imaginary(m, xi)
    assert np.all(eps >= 1.0 - 1e-12)
    assert np.all(np.diff(eps) <= 1e-9 * eps[:-1])


@given(models)
def test_epsilon_tends_to_one(m):
    assert epsilon_imaginary(m, 1e9 * EV) == pytest.approx(1.0, abs=1e-6)


def test_silicon_static_value():
    assert epsilon_imaginary(get_material("silicon"), 0.0) == pytest.approx(11.87, rel=1e-12)


def test_scalar_path_matches_vector_path():
    for name in ("silicon", "silica", "aerogel90", "gold-drude"):
        m = get_material(name)
        for hxi in (1e-3, 0.1, 3.0, 40.0):
            assert epsilon_scalar(m, hxi) == pytest.approx(float(epsilon_imaginary(m, hxi * EV)),
                                                           rel=1e-10)


def test_perfect_mirror_has_no_epsilon():
    with pytest.raises(DomainError):
        epsilon_imaginary(PERFECT, 1.0)


def test_material_validation():
    with pytest.raises(DomainError):
        MaterialModel("x", porosity=1.5)
    with pytest.raises(DomainError):
        MaterialModel("x", kind="perfect-mirror", porosity=0.5)
    with pytest.raises(DomainError):
        Oscillator(-1.0, 1.0)
    with pytest.raises(DomainError):
        MaterialModel("x", kind="plasma")


def test_drude_term_diverges_at_zero():
    assert epsilon_imaginary(get_material("gold-drude"), 0.0) == np.inf


# -- Bruggeman ---------------------------------------------------------------

def test_bruggeman_limits():
    assert bruggeman_effective(4.0, 0.0) == 4.0
    assert bruggeman_effective(4.0, 1.0) == 1.0


@given(st.floats(1.0, 1e4), st.floats(0.0, 1.0))
def test_bruggeman_solves_mixing_rule(eps_s, f):
    e = bruggeman_effective(eps_s, f)
    assert 1.0 - 1e-12 <= e <= eps_s * (1 + 1e-12)
    res = f * (1 - e) / (1 + 2 * e) + (1 - f) * (eps_s - e) / (eps_s + 2 * e)
    assert abs(res) < 1e-9


@given(st.floats(1.01, 100.0), st.floats(0.0, 0.99), st.floats(0.001, 0.01))
def test_bruggeman_monotone_in_porosity(eps_s, f, df):
    assert bruggeman_effective(eps_s, f + df) <= bruggeman_effective(eps_s, f)


def test_bruggeman_quadratic_closed_form():
    # two-phase Bruggeman reduces to a quadratic in eps_eff
    eps_s, f = 3.1, 0.9
    b = (3 * f - 1) * 1.0 + (3 * (1 - f) - 1) * eps_s
    closed = (b + math.sqrt(b * b + 8 * eps_s)) / 4
    assert bruggeman_effective(eps_s, f) == pytest.approx(closed, rel=1e-11)


def test_bruggeman_metallic_skeleton():
    assert bruggeman_effective(np.inf, 0.5) == np.inf
    assert bruggeman_effective(np.inf, 0.9) == pytest.approx(1 / (3 * 0.9 - 2))


def test_bruggeman_vectorized_and_errors():
    out = bruggeman_effective(np.array([1.0, 2.0, 10.0]), 0.5)
    assert out.shape == (3,)
    with pytest.raises(DomainError):
        bruggeman_effective(0.5, 0.3)
    with pytest.raises(DomainError):
        bruggeman_effective(2.0, 1.2)


# -- Fresnel -----------------------------------------------------------------

@given(models, st.floats(1e-3, 1e3), st.floats(1e-6, 10.0))
def test_fresnel_ranges(m, hxi, k):
    pair = fresnel_amplitudes(m, hxi * EV, k)
    assert -1.0 < pair.rho_te <= 0.0
    assert 0.0 <= pair.rho_tm < 1.0


def test_fresnel_perfect_and_vacuum():
    pair = fresnel_amplitudes(PERFECT, 1e15, 0.1)
    assert (pair.rho_te, pair.rho_tm) == (-1.0, 1.0)
    vac = MaterialModel("vac", oscillators=(Oscillator(0.0, 1.0),))
    pair = fresnel_amplitudes(vac, 1e15, 0.1)
    assert pair.rho_te == pytest.approx(0.0, abs=1e-15)
    assert pair.rho_tm == pytest.approx(0.0, abs=1e-15)


def test_fresnel_static_tm_limit():
    m = get_material("silica")
    eps0 = float(epsilon_imaginary(m, 0.0))
    pair = fresnel_amplitudes(m, 0.0, 0.1)
    assert pair.rho_tm == pytest.approx((eps0 - 1) / (eps0 + 1), rel=1e-12)
    assert pair.rho_te == 0.0
    with pytest.raises(DomainError):
        fresnel_amplitudes(m, 0.0, 0.0)


# -- polarizability ----------------------------------------------------------

def test_hydrogen_polarizability():
    pol = AtomPolarizability.hydrogen()
    assert atom_polarizability(pol, 0.0) == pytest.approx(4.5 * BOHR ** 3)
    assert atom_polarizability(pol, pol.resonance * EV) == pytest.approx(2.25 * BOHR ** 3)
    xi = np.geomspace(1e12, 1e19, 20)
    assert np.all(np.diff(atom_polarizability(pol, xi)) < 0)
    with pytest.raises(DomainError):
        atom_polarizability(pol, -1.0)
