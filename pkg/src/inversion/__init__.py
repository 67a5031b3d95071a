"""
Inverse map from normal-form coefficients to potential jets.
"""
from src.inversion.inversion import (delta_pathway_coefficient, expected_delta_pathway, fit_stage,
                                     invert_qbnf, invert_with_provenance, recover_a3_a4, reflect_jet,
                                     scale_jet)
from src.inversion.models import InversionResult, ProbeAffineModel

__all__ = [
    "delta_pathway_coefficient", "expected_delta_pathway", "fit_stage", "invert_qbnf",
    "invert_with_provenance", "recover_a3_a4", "reflect_jet", "scale_jet",
    "InversionResult", "ProbeAffineModel",
]
