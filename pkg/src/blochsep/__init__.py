"""Separability certificates and entanglement criteria from generalized Bloch vectors."""

from .bloch import (
    BlochVector,
    Convention,
    CorrelationTensor,
    basis_element,
    correlation_tensor,
    from_bloch,
    generators,
    operator_components,
    p_norm,
    purity_relation,
    to_bloch,
)
from .certificates import (
    SeparableDecomposition,
    ghz_compatible_state,
    theorem3,
    theorem4,
    theorem5,
    theorem6,
    theorem7,
    u_state_decomposition,
    verify_decomposition,
)
from .characters import character_table
from .criteria import CriterionVerdict, Verdict, sign_tensor, theorem1_check, theorem2_M, theorem2_check
from .linalg import DensityMatrix, kron, partial_transpose, validate_density

__version__ = "0.1.0"
