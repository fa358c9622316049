"""
Symmetric zero-correlation-zone complementary code sets and their use as
sparse training matrices for spatial-modulation MIMO channel estimation.
"""

__version__ = "0.1.0"

from .gbf import GeneralizedBooleanFunction, Permutation, UnimodularSequence, evaluate, to_sequence
from .corr import aperiodic_ccf, aperiodic_profile, periodic_ccf, set_ccf_sum, set_profiles
from .codeset import CodeSet, VerificationReport, bound_check, certify, verify_gcp, verify_szccs
from .construct import (
    Theorem2Params,
    Theorem3Params,
    czcp_codeset,
    lemma1_gcp,
    random_binary,
    theorem2_szccs,
    theorem3_szccs,
    zadoff_chu,
)
from .training import TrainingMatrix, build_omega, check_criteria, enlarge
from .chansim import SimConfig, min_mse, run_campaign

__all__ = [
    "GeneralizedBooleanFunction", "Permutation", "UnimodularSequence", "evaluate", "to_sequence",
    "aperiodic_ccf", "aperiodic_profile", "periodic_ccf", "set_ccf_sum", "set_profiles",
    "CodeSet", "VerificationReport", "bound_check", "certify", "verify_gcp", "verify_szccs",
    "Theorem2Params", "Theorem3Params", "czcp_codeset", "lemma1_gcp", "random_binary",
    "theorem2_szccs", "theorem3_szccs", "zadoff_chu",
    "TrainingMatrix", "build_omega", "check_criteria", "enlarge",
    "SimConfig", "min_mse", "run_campaign",
]
