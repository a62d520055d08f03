import math

import mpmath
import pytest
from hypothesis import given, strategies as st

from qreflection.constants import HBAR
from qreflection.errors import DomainError
from oracles import airy_zero_oracle
from qreflection.gravity import (GravityConfig, airy_zero, bound_states, gbs_energy, gbs_lifetime,
                                 shifted_energy)


@pytest.mark.parametrize("n, expected", [(1, -2.3381074105), (2, -4.0879494441)])
def test_airy_zero_values(n, expected):
    assert airy_zero(n) == pytest.approx(expected, abs=1e-10)


def test_airy_zeros_against_oracle():
    for n in range(1, 6):
        assert airy_zero(n) == pytest.approx(airy_zero_oracle(n), abs=1e-10)


def test_airy_zeros_strictly_decreasing():
    zeros = [airy_zero(n) for n in range(1, 40)]
    assert all(b < a < 0 for a, b in zip(zeros, zeros[1:]))


def test_airy_zero_domain():
    for bad in (0, -3, 1.5):
        with pytest.raises(DomainError):
            airy_zero(bad)


def test_config():
    cfg = GravityConfig()
    assert cfg.weight * 1e9 == pytest.approx(102.5, rel=5e-3)
    assert cfg.ell_grav == pytest.approx(5.87e-6, rel=1e-2)
    with pytest.raises(DomainError):
        GravityConfig(0.0)


def test_ground_state_energy():
    assert gbs_energy(GravityConfig(), 1) == pytest.approx(1.41, rel=1e-2)


@given(st.floats(0.1, 100.0), st.integers(1, 6))
def test_energy_scales_as_gbar_two_thirds(g, n):
    base = gbs_energy(GravityConfig(), n)
    assert gbs_energy(GravityConfig(g), n) == pytest.approx(base * (g / 9.81) ** (2 / 3), rel=1e-10)


def test_quantization_residual():
    cfg = GravityConfig()
    scale = cfg.weight * cfg.ell_grav * 1e9 * 1e3  # peV
    for n in range(1, 6):
        assert abs(float(mpmath.airyai(-gbs_energy(cfg, n) / scale))) < 1e-9


def test_shifted_energy():
    cfg = GravityConfig()
    assert shifted_energy(1.4, 0, cfg) == 1.4
    e = shifted_energy(1.4, -30j, cfg)
    assert e.imag == pytest.approx(-cfg.weight * 30 * 1e3)
    assert e.imag * 1e-3 == pytest.approx(-3.08e-6, rel=5e-3)
    assert shifted_energy(1.4, -2.0 - 5j, cfg).real == pytest.approx(1.4 - 2.0 * cfg.weight * 1e3)
    with pytest.raises(DomainError):
        shifted_energy(1.4, 1j, cfg)


def test_lifetime_formula():
    cfg = GravityConfig()
    assert gbs_lifetime(-30j, cfg) == pytest.approx(0.107, rel=1e-2)
    assert gbs_lifetime(-1.0 - 30j, cfg) == gbs_lifetime(-30j, cfg)
    assert gbs_lifetime(-3.0 + 0j, cfg) == math.inf
    assert gbs_lifetime(-30j, GravityConfig(2 * 9.81)) == pytest.approx(gbs_lifetime(-30j, cfg) / 2)


def test_bound_states():
    states = bound_states(-2.6 - 28.9j, n_max=4)
    assert [s.n for s in states] == [1, 2, 3, 4]
    assert all(s.energy_shifted.imag < 0 and s.lifetime > 0 for s in states)
    assert len({s.lifetime for s in states}) == 1


def test_lifetime_invariant_and_ordering(table1):
    cfg = GravityConfig()
    const = HBAR / (2 * cfg.weight)
    for row in table1:
        assert row.lifetime * abs(row.a.imag) == pytest.approx(const, rel=1e-12)
    taus = [row.lifetime for row in table1]
    assert taus == sorted(taus) and len(set(taus)) == len(taus)
