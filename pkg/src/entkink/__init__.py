"""Two-qubit entanglement along parameterized state families.

Negativity, random robustness and optimal witnesses, plus detection of
separable-boundary singularities as kinks in the robustness curve.
"""

from .entmeas import (
    RobustnessResult,
    WitnessOperator,
    is_ppt,
    negativity,
    optimal_witness,
    pt_min_eigenvalue,
    random_robustness_bisect,
    random_robustness_closed,
    regime_witness,
    witness_value,
)
from .qstate import (
    DensityMatrix,
    InvalidStateError,
    PureState,
    bell,
    bell_diagonal,
    family_rho,
    fidelity_pure,
    maximally_mixed,
    purity,
)

__version__ = "0.1.0"
