"""Validated two-qubit states: Bell vectors, Bell-diagonal mixtures and the
one-parameter line between |Phi+> and |Psi+>.

Basis order is |00>, |01>, |10>, |11> with the left qubit most significant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .matlib import DimensionError, as_matrix, hermitian_eigvals, hermiticity_violation

__all__ = [
    "STATE_TOL",
    "InvalidStateError",
    "DensityMatrix",
    "PureState",
    "BELL_LABELS",
    "bell",
    "bell_projector",
    "family_rho",
    "bell_diagonal",
    "maximally_mixed",
    "with_white_noise",
    "fidelity_pure",
    "purity",
]

STATE_TOL = 1e-10
_SQRT_HALF = 1.0 / math.sqrt(2.0)


class InvalidStateError(ValueError):
    """A matrix failed density-matrix validation.

    ``invariant`` names the violated condition (``"hermitian"``, ``"trace"``,
    ``"psd"``, ``"dims"``, ``"normalized"`` or ``"parameter"``).
    """

    def __init__(self, invariant: str, message: str):
        self.invariant = invariant
        super().__init__(f"{invariant}: {message}")


def _normalize_dims(dims, size: int) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims) or math.prod(dims) != size:
        raise InvalidStateError(
            "dims", f"subsystem dimensions {list(dims)} do not multiply to {size}"
        )
    return dims


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite matrix with a subsystem split.

    Validation runs on construction; states rejected by more than
    ``STATE_TOL`` are never projected back onto the state space.
    """

    matrix: np.ndarray
    dims: tuple[int, ...] = (2, 2)
    tol: float = field(default=STATE_TOL, repr=False)

    def __post_init__(self):
        try:
            m = as_matrix(self.matrix)
        except DimensionError as exc:
            raise InvalidStateError("dims", str(exc)) from None
        if not np.all(np.isfinite(m)):
            raise InvalidStateError("finite", "matrix has non-finite entries")
        dims = _normalize_dims(self.dims, m.shape[0])
        violation = hermiticity_violation(m)
        if violation > self.tol:
            raise InvalidStateError("hermitian", f"max|rho - rho^dag| = {violation:.3e}")
        tr = np.trace(m)
        if abs(tr - 1.0) > self.tol:
            raise InvalidStateError("trace", f"trace = {tr.real:.12g}{tr.imag:+.3g}j, expected 1")
        # Hermiticity was checked above at the state tolerance.
        lam_min = float(hermitian_eigvals(m, tol=np.inf)[0])
        if lam_min < -self.tol:
            raise InvalidStateError("psd", f"smallest eigenvalue {lam_min:.3e} is negative")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def expectation(self, op) -> float:
        """Real part of ``Tr(op @ rho)``."""
        op = np.asarray(op, dtype=complex)
        if op.shape != self.matrix.shape:
            raise DimensionError(f"operator shape {op.shape} does not match state {self.matrix.shape}")
        return float(np.einsum("ij,ji->", op, self.matrix).real)

    def __repr__(self):
        return f"DensityMatrix(dims={list(self.dims)}, matrix=\n{np.array2string(self.matrix, precision=4)})"


@dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: np.ndarray
    dims: tuple[int, ...] = (2, 2)

    def __post_init__(self):
        v = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        dims = _normalize_dims(self.dims, v.size)
        norm = float(np.linalg.norm(v))
        if abs(norm - 1.0) > 1e-12:
            raise InvalidStateError("normalized", f"state vector has norm {norm:.15g}")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "amplitudes", v)
        object.__setattr__(self, "dims", dims)

    def projector(self) -> np.ndarray:
        v = self.amplitudes
        return np.outer(v, v.conj())

    def density(self) -> DensityMatrix:
        return DensityMatrix(self.projector(), self.dims)


_BELL_VECTORS = {
    "phi+": (1, 0, 0, 1),
    "phi-": (1, 0, 0, -1),
    "psi+": (0, 1, 1, 0),
    "psi-": (0, 1, -1, 0),
}
_ALIASES = {"Φ+": "phi+", "Φ-": "phi-", "Φ−": "phi-", "Ψ+": "psi+", "Ψ-": "psi-", "Ψ−": "psi-"}
BELL_LABELS = tuple(_BELL_VECTORS)


def _bell_key(label: str) -> str:
    key = _ALIASES.get(label, label.lower() if isinstance(label, str) else label)
    if key not in _BELL_VECTORS:
        raise ValueError(f"unknown Bell state label {label!r}; expected one of {BELL_LABELS}")
    return key


def bell(label: str) -> PureState:
    """One of the four Bell vectors: ``phi+``, ``phi-``, ``psi+``, ``psi-``."""
    return PureState(np.array(_BELL_VECTORS[_bell_key(label)], dtype=complex) * _SQRT_HALF)


def bell_projector(label: str) -> np.ndarray:
    return bell(label).projector()


def family_rho(q: float) -> DensityMatrix:
    """``q |Psi+><Psi+| + (1 - q) |Phi+><Phi+|`` for ``0 <= q <= 1``."""
    q = float(q)
    if not 0.0 <= q <= 1.0:
        raise InvalidStateError("parameter", f"mixing weight q={q} outside [0, 1]")
    return DensityMatrix(q * bell_projector("psi+") + (1.0 - q) * bell_projector("phi+"))


def bell_diagonal(p: Sequence[float], tol: float = 1e-12) -> DensityMatrix:
    """Mixture of Bell projectors with weights ordered (phi+, phi-, psi+, psi-)."""
    p = np.asarray(p, dtype=float)
    if p.shape != (4,):
        raise InvalidStateError("parameter", f"need 4 weights, got shape {p.shape}")
    if np.any(p < 0) or abs(p.sum() - 1.0) > tol:
        raise InvalidStateError("parameter", f"weights {p.tolist()} are not a probability vector")
    m = sum(w * bell_projector(lbl) for w, lbl in zip(p, BELL_LABELS))
    return DensityMatrix(m)


def maximally_mixed(d: int = 4, dims=None) -> DensityMatrix:
    if int(d) != d or d < 2:
        raise InvalidStateError("parameter", f"dimension must be an integer >= 2, got {d}")
    d = int(d)
    if dims is None:
        dims = (2, 2) if d == 4 else (d,)
    return DensityMatrix(np.eye(d, dtype=complex) / d, dims)


def with_white_noise(rho: DensityMatrix, weight: float) -> DensityMatrix:
    """``(1 - weight) rho + weight I/d``."""
    if not 0.0 <= weight <= 1.0:
        raise InvalidStateError("parameter", f"noise weight {weight} outside [0, 1]")
    d = rho.dim
    return DensityMatrix((1.0 - weight) * rho.matrix + weight * np.eye(d) / d, rho.dims)


def fidelity_pure(target: PureState, rho: DensityMatrix) -> float:
    """``<psi|rho|psi>``."""
    v = target.amplitudes
    if v.size != rho.dim:
        raise DimensionError(f"target has dimension {v.size}, state has {rho.dim}")
    f = float(np.real(v.conj() @ rho.matrix @ v))
    return min(1.0, max(0.0, f))


def purity(rho: DensityMatrix) -> float:
    m = rho.matrix
    return float(np.einsum("ij,ji->", m, m).real)
