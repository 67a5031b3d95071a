"""
Numerical verification layer: eigensolver, predictions, oracles and studies.
"""
from src.spectra.eigensolver import (EigenResult, EigensolverConfig, solve_batch, solve_eigenvalues,
                                     solve_many)
from src.spectra.prediction import (hbar2_coefficient, jet_potential, matrix_perturbation_oracle,
                                    perturbation_oracle, predict_eigenvalues)
from src.spectra.study import (LITERATURE_KAPPA, SpectralReport, computed_kappa, convergence_study,
                               kappa_arbitration)

__all__ = [
    "EigenResult", "EigensolverConfig", "solve_batch", "solve_eigenvalues", "solve_many",
    "hbar2_coefficient", "jet_potential", "matrix_perturbation_oracle", "perturbation_oracle",
    "predict_eigenvalues", "LITERATURE_KAPPA", "SpectralReport", "computed_kappa",
    "convergence_study", "kappa_arbitration",
]
