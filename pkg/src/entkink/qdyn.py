"""Two physical processes that generate the Phi+/Psi+ line of states.

1. Double swap dynamics. Four qubits in the order (a, b, A, B) evolve under
   ``H = H_aA + H_bB`` with

       H_mn = w/2 Z_m + w/2 Z_n + g/2 (s-_m s+_n + s+_m s-_n),

   starting from ``|Phi+>_ab |Psi+>_AB``. Tracing out (a, b) leaves AB on the
   line ``q |Psi+><Psi+| + (1 - q) |Phi+><Phi+|``.

   The g/2 coupling rotates each pair at half the coupling rate, so the
   brute-force propagator gives ``q(t) = cos^2(KAPPA * g * t)`` with
   ``KAPPA = 1/2``: the reduced state is separable first at ``g t = pi/2``
   and reaches |Phi+> at ``g t = pi``.

   The free term commutes with the coupling. In the interaction picture
   (the default frame) the reduced state is exactly on the line for any w;
   in the lab frame it picks up local phases that move it off the line but
   leave the negativity unchanged.

2. A bit-flip channel on the second qubit of |Phi+>, flipping with
   probability q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .matlib import DimensionError, embed, kron, partial_trace, spectral_propagator
from .qstate import DensityMatrix, bell

__all__ = [
    "KAPPA",
    "SwapParams",
    "ChannelParams",
    "pauli",
    "pair_hamiltonian",
    "total_hamiltonian",
    "free_hamiltonian",
    "initial_state",
    "evolve_swap",
    "evolve_swap_series",
    "bit_flip_channel",
    "q_overlap",
]

KAPPA = 0.5

SITES = {"a": 0, "b": 1, "A": 2, "B": 3}
N_QUBITS = 4

_PAULI = {
    "i": np.eye(2, dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}
_PAULI["plus"] = (_PAULI["x"] + 1j * _PAULI["y"]) / 2
_PAULI["minus"] = (_PAULI["x"] - 1j * _PAULI["y"]) / 2


@dataclass(frozen=True)
class SwapParams:
    omega: float = 0.0
    g: float = 1.0
    t: float = 0.0

    def __post_init__(self):
        for name in ("omega", "g", "t"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.t < 0:
            raise ValueError(f"time must be non-negative, got {self.t}")


@dataclass(frozen=True)
class ChannelParams:
    q: float

    def __post_init__(self):
        if not 0.0 <= self.q <= 1.0:
            raise ValueError(f"bit-flip probability {self.q} outside [0, 1]")


def pauli(label: str) -> np.ndarray:
    """Pauli matrix ``x``, ``y``, ``z`` or ladder operator ``plus``/``minus``.

    ``plus = [[0, 1], [0, 0]]`` with Z|0> = +|0>.
    """
    try:
        return _PAULI[label.lower()].copy()
    except (KeyError, AttributeError):
        raise ValueError(f"unknown Pauli label {label!r}") from None


def pair_hamiltonian(p: SwapParams) -> np.ndarray:
    """Resonant exchange Hamiltonian of one qubit pair (4x4)."""
    z, i2 = _PAULI["z"], _PAULI["i"]
    sp, sm = _PAULI["plus"], _PAULI["minus"]
    free = p.omega / 2 * (kron(z, i2) + kron(i2, z))
    hop = p.g / 2 * (kron(sm, sp) + kron(sp, sm))
    return free + hop


def _pair_sum(h_pair: np.ndarray) -> np.ndarray:
    dims = [2] * N_QUBITS
    return (embed(h_pair, (SITES["a"], SITES["A"]), dims)
            + embed(h_pair, (SITES["b"], SITES["B"]), dims))


def total_hamiltonian(p: SwapParams) -> np.ndarray:
    """``H_aA + H_bB`` on (a, b, A, B), 16x16."""
    return _pair_sum(pair_hamiltonian(p))


def free_hamiltonian(p: SwapParams) -> np.ndarray:
    """The ``w/2 sum Z`` part of :func:`total_hamiltonian`."""
    return _pair_sum(pair_hamiltonian(SwapParams(omega=p.omega, g=0.0)))


def initial_state() -> np.ndarray:
    """``|Phi+>_ab (x) |Psi+>_AB`` as a 16-vector in (a, b, A, B) order."""
    return kron(bell("phi+").amplitudes, bell("psi+").amplitudes)


@lru_cache(maxsize=32)
def _propagators(omega: float, g: float):
    p = SwapParams(omega=omega, g=g)
    return spectral_propagator(total_hamiltonian(p)), spectral_propagator(free_hamiltonian(p))


def _check_frame(frame: str) -> None:
    if frame not in ("interaction", "lab"):
        raise ValueError(f"frame must be 'interaction' or 'lab', got {frame!r}")


def evolve_swap_series(
    omega: float, g: float, times: Iterable[float], frame: str = "interaction"
) -> list[DensityMatrix]:
    """Reduced AB states along a time grid, sharing one eigendecomposition."""
    _check_frame(frame)
    u_full, u_free = _propagators(float(omega), float(g))
    psi0 = initial_state()
    out = []
    for t in times:
        t = float(t)
        if t < 0 or not math.isfinite(t):
            raise ValueError(f"time must be finite and non-negative, got {t}")
        psi = u_full(t) @ psi0
        if frame == "interaction":
            psi = u_free(t).conj().T @ psi
        rho_full = np.outer(psi, psi.conj())
        rho_ab = partial_trace(rho_full, [2] * N_QUBITS, keep=(SITES["A"], SITES["B"]))
        out.append(DensityMatrix(0.5 * (rho_ab + rho_ab.conj().T)))
    return out


def evolve_swap(p: SwapParams, frame: str = "interaction") -> DensityMatrix:
    """Reduced state of qubits A, B at time ``p.t``."""
    return evolve_swap_series(p.omega, p.g, [p.t], frame)[0]


def _apply_kraus(rho: DensityMatrix, kraus: Sequence[np.ndarray]) -> DensityMatrix:
    m = sum(k @ rho.matrix @ k.conj().T for k in kraus)
    return DensityMatrix(m, rho.dims)


def bit_flip_channel(rho: DensityMatrix, c: ChannelParams | float) -> DensityMatrix:
    """Flip the second qubit with probability ``q``: Kraus ``sqrt(1-q) I``, ``sqrt(q) I(x)X``."""
    if not isinstance(c, ChannelParams):
        c = ChannelParams(float(c))
    if tuple(rho.dims) != (2, 2):
        raise DimensionError(f"bit-flip channel expects dims [2, 2], got {list(rho.dims)}")
    flip = kron(_PAULI["i"], _PAULI["x"])
    return _apply_kraus(rho, [math.sqrt(1.0 - c.q) * np.eye(4, dtype=complex), math.sqrt(c.q) * flip])


def q_overlap(rho: DensityMatrix) -> float:
    """``<Psi+|rho|Psi+>``, the weight of |Psi+> on the line."""
    if tuple(rho.dims) != (2, 2):
        raise DimensionError(f"expected dims [2, 2], got {list(rho.dims)}")
    v = bell("psi+").amplitudes
    return float(np.real(v.conj() @ rho.matrix @ v))
