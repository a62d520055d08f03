"""Casimir-Polder potentials, quantum reflection and gravitational bound states of
(anti)hydrogen above material surfaces."""
from .casimir import (IdealReference, PotentialTable, build_potential_table, c3_limit,
                      cp_integrand, cp_potential_point, ideal_c4, material_table, ratio_to_ideal)
from .errors import ConfigError, ConvergenceError, DomainError
from .gravity import (BoundState, GravityConfig, airy_zero, bound_states, gbs_energy,
                      gbs_lifetime, lifetime_table, shifted_energy)
from .liouville import (CoordinateMap, LiouvilleProblem, badlands, cayley_compose_check,
                        liouville_transform, scatter_transformed, schwarzian, transform_solution,
                        wronskian)
from .materials import get_material, load_materials
from .optics import (AtomPolarizability, FresnelPair, MaterialModel, Oscillator, atom_polarizability,
                     bruggeman_effective, epsilon_imaginary, fresnel_amplitudes)
from .potentials import PowerLawPotential, StepPotential, ZeroPotential, square_well
from .reflection import (ReflectionResult, ScatteringProblem, integrate_amplitudes, local_F,
                         reflection_curve, scattering_length, solve_height, wkb_phase)

__version__ = "0.1.0"
