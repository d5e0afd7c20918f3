"""Dense complex linear algebra for small Hilbert spaces (dimension <= 16).

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Subsystem index 0
is always the leftmost tensor factor, i.e. the most significant digit of the
computational-basis index.
"""

from __future__ import annotations

import math
from typing import Callable, NamedTuple, Sequence

import numpy as np

__all__ = [
    "DimensionError",
    "NotHermitianError",
    "EigenDecomposition",
    "as_matrix",
    "dagger",
    "hermiticity_violation",
    "hermitian_eig",
    "hermitian_eigvals",
    "propagator",
    "spectral_propagator",
    "kron",
    "embed",
    "partial_trace",
    "partial_transpose",
]

JACOBI_RTOL = 1e-14
MAX_SWEEPS = 100


class DimensionError(ValueError):
    """Raised when matrix shapes and declared subsystem dimensions disagree."""


class NotHermitianError(ValueError):
    """Raised by routines that require a Hermitian operator."""

    def __init__(self, violation: float, tol: float):
        self.violation = violation
        self.tol = tol
        super().__init__(
            f"matrix is not Hermitian: max|M - M^dag| = {violation:.3e} "
            f"exceeds tolerance {tol:.1e}"
        )


class EigenDecomposition(NamedTuple):
    """Eigenvalues in ascending order; ``eigenvectors[:, i]`` pairs with
    ``eigenvalues[i]``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def projector(self, indices: Sequence[int]) -> np.ndarray:
        """Orthogonal projector onto the span of the selected eigenvectors."""
        v = self.eigenvectors[:, list(indices)]
        return v @ v.conj().T

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(data) -> np.ndarray:
    """Coerce nested rows or an array into a square complex matrix.

    Ragged rows, non-square shapes and empty input raise ``DimensionError``.
    """
    if isinstance(data, np.ndarray):
        m = np.asarray(data, dtype=complex)
    else:
        rows = list(data)
        if not rows:
            raise DimensionError("matrix must have at least one row")
        lengths = {len(r) for r in rows}
        if len(lengths) != 1:
            raise DimensionError(f"ragged rows with lengths {sorted(lengths)}")
        m = np.array(rows, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise DimensionError(f"expected a non-empty square matrix, got shape {m.shape}")
    return m


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def hermiticity_violation(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T)))


def _check_hermitian(m: np.ndarray, tol: float) -> np.ndarray:
    m = as_matrix(m)
    if tol == math.inf:
        return m
    violation = hermiticity_violation(m)
    if not violation < tol:
        raise NotHermitianError(violation, tol)
    return m


def _jacobi(m: np.ndarray, want_vectors: bool):
    # Cyclic complex Jacobi on Python scalars: for n <= 16 this is several
    # times faster than numpy row operations, whose per-call overhead dominates.
    n = m.shape[0]
    a = [[complex(x) for x in row] for row in m.tolist()]
    # Symmetrise exactly so rounding in the input cannot break convergence.
    for i in range(n):
        a[i][i] = complex(a[i][i].real, 0.0)
        for j in range(i + 1, n):
            h = 0.5 * (a[i][j] + a[j][i].conjugate())
            a[i][j] = h
            a[j][i] = h.conjugate()
    v = [[1.0 + 0j if i == j else 0j for j in range(n)] for i in range(n)] if want_vectors else None

    fro2 = sum(x.real * x.real + x.imag * x.imag for row in a for x in row)
    threshold2 = JACOBI_RTOL * JACOBI_RTOL * fro2
    # Rotations on entries this small cannot change the result at double precision.
    negligible = 1e-3 * JACOBI_RTOL * math.sqrt(fro2) / n
    pairs = [(p, q) for p in range(n - 1) for q in range(p + 1, n)]
    for _ in range(MAX_SWEEPS):
        off2 = 0.0
        for p, q in pairs:
            x = a[p][q]
            off2 += x.real * x.real + x.imag * x.imag
        if 2.0 * off2 <= threshold2:
            break
        for p in range(n - 1):
            ap = a[p]
            for q in range(p + 1, n):
                b = ap[q]
                ab = abs(b)
                if ab <= negligible:
                    continue
                aq = a[q]
                tau = (aq[q].real - ap[p].real) / (2.0 * ab)
                if abs(tau) > 1e150:
                    t = 0.5 / tau
                else:
                    t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                phc = (b / ab).conjugate()
                # G acts on the (p, q) plane as [[c, s], [-s*phc, c*phc]].
                g10 = -s * phc
                g11 = c * phc
                for k in range(n):
                    ak = a[k]
                    x, y = ak[p], ak[q]
                    ak[p] = x * c + y * g10
                    ak[q] = x * s + y * g11
                g10c = g10.conjugate()
                g11c = g11.conjugate()
                for k in range(n):
                    x, y = ap[k], aq[k]
                    ap[k] = c * x + g10c * y
                    aq[k] = s * x + g11c * y
                ap[q] = 0j
                aq[p] = 0j
                ap[p] = complex(ap[p].real, 0.0)
                aq[q] = complex(aq[q].real, 0.0)
                if v is not None:
                    for k in range(n):
                        vk = v[k]
                        x, y = vk[p], vk[q]
                        vk[p] = x * c + y * g10
                        vk[q] = x * s + y * g11
    else:
        raise RuntimeError(f"Jacobi iteration did not converge in {MAX_SWEEPS} sweeps")

    w = np.array([a[i][i].real for i in range(n)])
    order = np.argsort(w, kind="stable")
    if v is None:
        return w[order], None
    return w[order], np.array(v, dtype=complex)[:, order]


def hermitian_eig(m, tol: float = 1e-10) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Iteration stops once the off-diagonal Frobenius mass drops below
    ``1e-14 * ||M||_F``. Within a degenerate cluster the eigenvector basis
    is arbitrary; use :meth:`EigenDecomposition.projector` rather than
    individual vectors when that matters.

    Raises
    ------
    NotHermitianError
        If ``max|M - M^dag| >= tol``.
    """
    m = _check_hermitian(m, tol)
    w, v = _jacobi(m, want_vectors=True)
    return EigenDecomposition(w, v)


def hermitian_eigvals(m, tol: float = 1e-10) -> np.ndarray:
    """Ascending eigenvalues only; skips eigenvector accumulation."""
    m = _check_hermitian(m, tol)
    w, _ = _jacobi(m, want_vectors=False)
    return w


def spectral_propagator(h, tol: float = 1e-10) -> Callable[[float], np.ndarray]:
    """Return ``t -> exp(-i H t)`` built from a single eigendecomposition of H."""
    eig = hermitian_eig(h, tol)
    w, v = eig
    vh = v.conj().T

    def at(t: float) -> np.ndarray:
        return (v * np.exp(-1j * w * t)) @ vh

    return at


def propagator(h, t: float, tol: float = 1e-10) -> np.ndarray:
    """Unitary ``exp(-i H t)`` for Hermitian ``H``."""
    return spectral_propagator(h, tol)(t)


def kron(*factors) -> np.ndarray:
    """Tensor product; the first factor is the most significant subsystem."""
    if not factors:
        raise DimensionError("kron needs at least one factor")
    out = np.asarray(factors[0], dtype=complex)
    for f in factors[1:]:
        out = np.kron(out, np.asarray(f, dtype=complex))
    return out


def _check_dims(m: np.ndarray, dims: Sequence[int]) -> list[int]:
    dims = [int(d) for d in dims]
    if not dims or any(d < 1 for d in dims):
        raise DimensionError(f"invalid subsystem dimensions {dims}")
    if math.prod(dims) != m.shape[0]:
        raise DimensionError(
            f"subsystem dimensions {dims} multiply to {math.prod(dims)}, "
            f"matrix has dimension {m.shape[0]}"
        )
    return dims


def embed(op, sites: Sequence[int], dims: Sequence[int]) -> np.ndarray:
    """Lift an operator acting on ``sites`` (in the given order) to the full space."""
    op = as_matrix(op)
    dims = [int(d) for d in dims]
    sites = [int(s) for s in sites]
    if len(set(sites)) != len(sites) or any(not 0 <= s < len(dims) for s in sites):
        raise DimensionError(f"invalid sites {sites} for {len(dims)} subsystems")
    local = [dims[s] for s in sites]
    if math.prod(local) != op.shape[0]:
        raise DimensionError(f"operator of dimension {op.shape[0]} does not fit sites {sites}")
    rest = [i for i in range(len(dims)) if i not in sites]
    full = np.kron(op, np.eye(math.prod(dims[i] for i in rest), dtype=complex))
    # Axes of ``full`` are ordered (sites..., rest...); move them home.
    order = sites + rest
    n = len(dims)
    t = full.reshape([dims[i] for i in order] * 2)
    perm = [order.index(i) for i in range(n)]
    t = t.transpose(perm + [n + p for p in perm])
    d = math.prod(dims)
    return t.reshape(d, d)


def partial_trace(m, dims: Sequence[int], keep) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``.

    Kept subsystems stay in their original relative order.
    """
    m = as_matrix(m)
    dims = _check_dims(m, dims)
    keep = sorted({int(k) for k in keep})
    if not keep or any(not 0 <= k < len(dims) for k in keep):
        raise DimensionError(f"invalid keep set {keep} for {len(dims)} subsystems")
    n = len(dims)
    t = m.reshape(dims * 2)
    # Contract traced subsystems from the highest index down so axis numbers stay valid.
    cur = n
    for i in reversed(range(n)):
        if i in keep:
            continue
        t = np.trace(t, axis1=i, axis2=i + cur)
        cur -= 1
    d = math.prod(dims[k] for k in keep)
    return t.reshape(d, d)


def partial_transpose(m, dims: Sequence[int] = (2, 2), subsystem: int = 1) -> np.ndarray:
    """Transpose the ``subsystem`` factor of a bipartite operator."""
    m = as_matrix(m)
    dims = _check_dims(m, dims)
    if len(dims) != 2:
        raise DimensionError(f"partial transpose needs a bipartition, got dims {dims}")
    if subsystem not in (0, 1):
        raise DimensionError(f"subsystem must be 0 or 1, got {subsystem}")
    d1, d2 = dims
    t = m.reshape(d1, d2, d1, d2)
    if subsystem == 1:
        t = t.transpose(0, 3, 2, 1)
    else:
        t = t.transpose(2, 1, 0, 3)
    return t.reshape(d1 * d2, d1 * d2).copy()
