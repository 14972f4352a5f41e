"""Transfer matrices and Q-operators on the spin chain, organized by charge sector."""
from .types import ChainSpec, DeltaBlock, SectorOperator, SpinConfig, sector_basis, sector_spins
from .operators import baxter_q, fused_transfer, q_explicit, q_explicit_form, q_generic, transfer_matrix
from .checks import (
    baxter_identification_check,
    check_tq_explicit,
    check_tq_generic,
    commutator_norms,
    cross_oracle_check,
    fusion_fit,
)
from .identities import random_words, trace_additivity_check, wedge_identity_check
from ..intertwine import BaxterParams

__all__ = [
    "BaxterParams",
    "ChainSpec",
    "DeltaBlock",
    "SectorOperator",
    "SpinConfig",
    "baxter_identification_check",
    "baxter_q",
    "check_tq_explicit",
    "check_tq_generic",
    "commutator_norms",
    "cross_oracle_check",
    "fused_transfer",
    "fusion_fit",
    "q_explicit",
    "q_explicit_form",
    "q_generic",
    "random_words",
    "sector_basis",
    "sector_spins",
    "trace_additivity_check",
    "transfer_matrix",
    "wedge_identity_check",
]
