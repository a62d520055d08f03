"""Reference values from the literature, checked by ``qreflection --check``."""
from dataclasses import dataclass
import math

from .casimir import ideal_c4, material_table
from .constants import gravitational_length, hbar2_over_2m, weight_per_length
from .gravity import GravityConfig, airy_zero, gbs_energy, lifetime_table
from .materials import TABLE_SURFACES, get_material
from .optics import AtomPolarizability
from .reflection import solve_height


@dataclass(frozen=True)
class Golden:
    name: str
    compute: object
    target: float
    rel: float = None
    abs: float = None

    def evaluate(self):
        value = self.compute()
        if self.abs is not None:
            ok = abs(value - self.target) <= self.abs
            tol = f"+-{self.abs:g}"
        else:
            ok = abs(value / self.target - 1.0) <= self.rel
            tol = f"+-{100 * self.rel:g}%"
        return ok, value, tol


def _ell_cp():
    return math.sqrt(ideal_c4(AtomPolarizability.hydrogen()) / hbar2_over_2m())


def _reflect(name):
    return lambda: solve_height(material_table(get_material(name)), 0.10).probability


_LIFETIMES = {}


def _lifetime(name):
    def compute():
        if not _LIFETIMES:
            _LIFETIMES.update({row.material: row.lifetime for row in lifetime_table()})
        return _LIFETIMES[name]
    return compute


GOLDEN = [
    Golden("m g [neV/m]", lambda: weight_per_length() * 1e9, 102.5, rel=0.005),
    Golden("l_grav [um]", lambda: gravitational_length() * 1e-3, 5.87, rel=0.01),
    Golden("l_CP [nm] (27-30)", _ell_cp, 28.5, abs=1.5),
    Golden("Ai zero a_1", lambda: airy_zero(1), -2.3381074105, abs=1e-9),
    Golden("E_1 [peV]", lambda: gbs_energy(GravityConfig(), 1), 1.41, rel=0.01),
    Golden("|r|^2 perfect, h=10 cm", _reflect("perfect"), 0.14, abs=0.03),
    Golden("|r|^2 silicon, h=10 cm", _reflect("silicon"), 0.19, abs=0.03),
    Golden("|r|^2 silica, h=10 cm", _reflect("silica"), 0.33, abs=0.03),
] + [Golden(f"tau {name} [s]", _lifetime(name), tau, rel=0.2)
     for name, tau in zip(TABLE_SURFACES, (0.11, 0.14, 0.22, 0.32, 1.07, 4.64))]


def run_checks(out=print):
    """Evaluate every golden value; returns True when all pass."""
    all_ok = True
    for item in GOLDEN:
        try:
            ok, value, tol = item.evaluate()
            out(f"{'PASS' if ok else 'FAIL'}  {item.name:<28} {value:<14.6g} "
                f"target {item.target:g} {tol}")
        except ArithmeticError as exc:
            ok = False
            out(f"FAIL  {item.name:<28} {exc}")
        all_ok &= ok
    return all_ok
