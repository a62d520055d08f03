import pytest

from qreflection.constants import (BOHR, HBAR, HBARC, MC2_HYDROGEN, energy_from_height,
                                   gravitational_length, hbar2_over_2m, height_from_energy,
                                   weight_per_length)


def test_unit_system():
    assert HBAR == pytest.approx(6.582119569e-7, rel=1e-9)
    assert HBARC == pytest.approx(1.973269804e11, rel=1e-9)
    assert BOHR == pytest.approx(0.0529177210903, rel=1e-9)
    assert MC2_HYDROGEN == pytest.approx(938.783e15, rel=1e-5)


def test_weight_and_drop_energy():
    assert weight_per_length() * 1e9 == pytest.approx(102.5, rel=5e-3)
    assert energy_from_height(0.10) == pytest.approx(10.25, rel=5e-3)
    assert height_from_energy(energy_from_height(0.37)) == pytest.approx(0.37, rel=1e-14)


def test_gravitational_length_definition():
    ell = gravitational_length()
    assert ell ** 3 * weight_per_length() == pytest.approx(hbar2_over_2m(), rel=1e-12)
    assert gravitational_length(9.81 * 8) == pytest.approx(ell / 2, rel=1e-12)
