"""
Quantum Birkhoff normal forms: homological solver, forward engine and the
Weyl-to-functional conversion.
"""
from src.normal_form.birkhoff import (birkhoff_forward, classical_part, forward_jet,
                                      jet_to_hamiltonian, normalization_residual)
from src.normal_form.functional import functional_to_weyl, omega_star_power, weyl_to_functional
from src.normal_form.homological import c_functional, homological_solve, sigma_poly
from src.normal_form.models import FunctionalNormalForm, Generator, NormalFormSeries, PotentialJet

__all__ = [
    "birkhoff_forward", "classical_part", "forward_jet", "jet_to_hamiltonian", "normalization_residual",
    "functional_to_weyl", "omega_star_power", "weyl_to_functional",
    "c_functional", "homological_solve", "sigma_poly",
    "FunctionalNormalForm", "Generator", "NormalFormSeries", "PotentialJet",
]
