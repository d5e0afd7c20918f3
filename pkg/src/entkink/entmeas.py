"""Negativity, random robustness and optimal witnesses for two qubits.

Negativity uses the normalization in which a Bell state has N = 1, so that

    R_R(rho) = 2 N(rho) = -2 min_W Tr(W rho) = 4 max(0, -lambda_min(rho^T2))

with W ranging over witnesses of trace 2. The textbook value (sum of the
negative partial-transpose eigenvalues, N(Bell) = 1/2) is available via
``negativity(rho, normalization="standard")``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .matlib import (
    DimensionError,
    as_matrix,
    hermitian_eig,
    hermitian_eigvals,
    hermiticity_violation,
    partial_transpose,
)
from .qstate import DensityMatrix, bell_projector

__all__ = [
    "PPT_TOL",
    "Method",
    "Regime",
    "WitnessOperator",
    "RobustnessResult",
    "pt_min_eigenvalue",
    "is_ppt",
    "negativity",
    "random_robustness_closed",
    "random_robustness_bisect",
    "optimal_witness",
    "witness_value",
    "regime_witness",
    "bell_witness",
]

PPT_TOL = 1e-9
ENTANGLED_TOL = 1e-9
BRACKET_LIMIT = 64.0
MAX_BISECTIONS = 60

_QUBIT_PAIR = (2, 2)
_NOISE = np.eye(4, dtype=complex) / 4.0


class Method(str, enum.Enum):
    CLOSED_FORM = "closed-form"
    BISECTION = "bisection"


class Regime(str, enum.Enum):
    LOW = "low"
    HIGH = "high"


@dataclass(frozen=True, eq=False)
class WitnessOperator:
    """Hermitian observable normalized to trace 2."""

    matrix: np.ndarray
    tol: float = 1e-10

    def __post_init__(self):
        m = as_matrix(self.matrix)
        violation = hermiticity_violation(m)
        if violation > self.tol:
            raise ValueError(f"witness is not Hermitian: max|W - W^dag| = {violation:.3e}")
        tr = np.trace(m)
        if abs(tr - 2.0) > self.tol:
            raise ValueError(f"witness trace is {tr:.12g}, expected 2")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)


@dataclass(frozen=True)
class RobustnessResult:
    value: float
    method: Method
    boundary_state: DensityMatrix

    @property
    def crossing(self) -> float:
        """Mixing weight of the noise at the boundary, ``s / (1 + s)``."""
        return self.value / (1.0 + self.value)


def _require_qubit_pair(rho: DensityMatrix) -> None:
    if tuple(rho.dims) != _QUBIT_PAIR:
        raise DimensionError(f"two-qubit state with dims [2, 2] required, got {list(rho.dims)}")


def _pt_lambda_min(m: np.ndarray) -> float:
    return float(hermitian_eigvals(partial_transpose(m, _QUBIT_PAIR, 1), tol=np.inf)[0])


def pt_min_eigenvalue(rho: DensityMatrix) -> float:
    """Smallest eigenvalue of the partial transpose on the second qubit."""
    _require_qubit_pair(rho)
    return _pt_lambda_min(rho.matrix)


def is_ppt(rho: DensityMatrix, tol: float = PPT_TOL) -> bool:
    """PPT test; for two qubits this is equivalent to separability."""
    return pt_min_eigenvalue(rho) >= -tol


def negativity(rho: DensityMatrix, normalization: str = "bell") -> float:
    """Negativity from the negative part of the partial-transpose spectrum.

    ``normalization="bell"`` returns ``2 |sum of negative eigenvalues|``
    (Bell state -> 1); ``"standard"`` returns half of that.
    """
    _require_qubit_pair(rho)
    w = hermitian_eigvals(partial_transpose(rho.matrix, _QUBIT_PAIR, 1), tol=np.inf)
    neg = float(np.sum(-w[w < 0.0]))
    if normalization == "bell":
        return 2.0 * neg
    if normalization == "standard":
        return neg
    raise ValueError(f"unknown normalization {normalization!r}")


def _mixture(m: np.ndarray, s: float) -> np.ndarray:
    return (m + s * _NOISE) / (1.0 + s)


def random_robustness_closed(rho: DensityMatrix) -> RobustnessResult:
    """R_R from the partial-transpose spectrum: ``4 max(0, -lambda_min)``."""
    lam = pt_min_eigenvalue(rho)
    s = 4.0 * max(0.0, -lam)
    return RobustnessResult(s, Method.CLOSED_FORM, DensityMatrix(_mixture(rho.matrix, s), rho.dims))


def random_robustness_bisect(
    rho: DensityMatrix, tol: float = 1e-9, ppt_tol: float = 0.0
) -> RobustnessResult:
    """Smallest noise weight ``s`` making ``(rho + s I/4)/(1 + s)`` PPT.

    The membership test is applied to the mixed state itself. Moving along
    the ray towards I/4 never leaves the PPT set, so the bracket from
    doubling ``s`` is valid. The returned value is the upper end of the final
    bracket, so ``boundary_state`` is always PPT (at ``ppt_tol``).
    """
    _require_qubit_pair(rho)
    if not tol > 0:
        raise ValueError("tol must be positive")
    m = rho.matrix

    def separable(s: float) -> bool:
        return _pt_lambda_min(_mixture(m, s)) >= -ppt_tol

    if separable(0.0):
        return RobustnessResult(0.0, Method.BISECTION, rho)
    lo, hi = 0.0, 1.0
    while not separable(hi):
        lo, hi = hi, 2.0 * hi
        if hi > BRACKET_LIMIT:
            raise RuntimeError(
                f"no PPT mixture found for s <= {BRACKET_LIMIT}; input is not a valid two-qubit state"
            )
    for _ in range(MAX_BISECTIONS):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if separable(mid):
            hi = mid
        else:
            lo = mid
    return RobustnessResult(hi, Method.BISECTION, DensityMatrix(_mixture(m, hi), rho.dims))


def optimal_witness(rho: DensityMatrix) -> WitnessOperator:
    """Witness minimising ``Tr(W rho)`` over trace-2 witnesses.

    W is the partial transpose of the projector onto the negative eigenspace
    of ``rho^T2``, scaled to trace 2. Then ``Tr(W rho) = 2 lambda_min = -R_R/2``.

    Raises
    ------
    ValueError
        If ``rho`` is separable or on the boundary (no eigenvalue below
        ``-1e-9``).
    """
    _require_qubit_pair(rho)
    eig = hermitian_eig(partial_transpose(rho.matrix, _QUBIT_PAIR, 1), tol=np.inf)
    negative = np.flatnonzero(eig.eigenvalues < -ENTANGLED_TOL)
    if negative.size == 0:
        raise ValueError(
            f"state is PPT (lambda_min = {eig.eigenvalues[0]:.3e}); no entanglement witness exists"
        )
    # The partial transpose of a two-qubit state has at most one negative eigenvalue.
    assert negative.size == 1, f"unexpected negative eigenspace of dimension {negative.size}"
    p_neg = eig.projector(negative)
    w = partial_transpose(p_neg, _QUBIT_PAIR, 1)
    w = 0.5 * (w + w.conj().T)
    return WitnessOperator(2.0 * w / np.trace(w).real)


def witness_value(w: WitnessOperator, rho: DensityMatrix) -> float:
    """``Tr(W rho)``; negative values certify entanglement."""
    return rho.expectation(w.matrix)


def bell_witness(label: str) -> WitnessOperator:
    """``I - 2 |B><B|`` for a Bell label ``B``."""
    return WitnessOperator(np.eye(4, dtype=complex) - 2.0 * bell_projector(label))


def regime_witness(regime: str | Regime) -> WitnessOperator:
    """Optimal witness of the Phi+/Psi+ line.

    ``low`` (q <= 1/2) gives ``I - 2|Phi+><Phi+|``; ``high`` (q >= 1/2) gives
    ``I - 2|Psi+><Psi+|``. Both are optimal at q = 1/2.
    """
    regime = Regime(regime)
    return bell_witness("phi+" if regime is Regime.LOW else "psi+")
