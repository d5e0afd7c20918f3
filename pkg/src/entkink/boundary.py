"""Probing the separable-set boundary along one-parameter curves of states.

For a curve rho(q) the segment ``p I/4 + (1 - p) rho(q)`` (the cone over the
curve with vertex I/4) leaves the entangled region at ``p_c(q)``, and

    R_R(rho(q)) = p_c / (1 - p_c).

If the boundary is smooth where the cone meets it, R_R(q) is smooth too, so a
kink in the robustness curve locates a singular boundary point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from . import entmeas, qdyn
from .qstate import DensityMatrix, bell, family_rho, maximally_mixed

__all__ = [
    "ScanRecord",
    "KinkReport",
    "Source",
    "cone_point",
    "crossing_pc",
    "scan_family",
    "detect_kinks",
    "find_kinks",
    "smoothness_probe",
    "DEFAULT_STEPS",
    "DEFAULT_THRESHOLD",
]

DEFAULT_STEPS = 201
DEFAULT_THRESHOLD = 10.0
GRID_TOL = 1e-12
SECOND_DIFF_FLOOR = 1e-15
# Second differences below this multiple of max|R|/h are eigensolver rounding.
RELATIVE_NOISE = 1e-9

_W_LOW = entmeas.regime_witness("low")
_W_HIGH = entmeas.regime_witness("high")


@dataclass(frozen=True)
class ScanRecord:
    q: float
    negativity: float
    robustness: float
    w_low: float
    w_high: float
    p_c: float
    t: float | None = None


@dataclass(frozen=True)
class KinkReport:
    q_star: float
    jump: float
    grid_spacing: float
    robustness: float
    index: int


class Source:
    DIRECT = "direct"
    CHANNEL = "channel"
    DYNAMICS = "dynamics"
    ALL = (DIRECT, CHANNEL, DYNAMICS)


def cone_point(rho: DensityMatrix, p: float) -> DensityMatrix:
    """``p I/d + (1 - p) rho``."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"cone weight p={p} outside [0, 1]")
    pi = maximally_mixed(rho.dim, rho.dims)
    return DensityMatrix(p * pi.matrix + (1.0 - p) * rho.matrix, rho.dims)


def crossing_pc(rho: DensityMatrix, method: str = "closed", tol: float = 1e-12) -> float:
    """Weight of I/4 at which the cone segment through ``rho`` meets the PPT set.

    ``method="closed"`` inverts the closed-form robustness; ``"bisection"``
    bisects directly on PPT membership of ``cone_point(rho, p)``.
    """
    if method == "closed":
        r = entmeas.random_robustness_closed(rho).value
        return r / (1.0 + r)
    if method != "bisection":
        raise ValueError(f"unknown method {method!r}")
    if entmeas.pt_min_eigenvalue(rho) >= 0.0:
        return 0.0
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if entmeas.pt_min_eigenvalue(cone_point(rho, mid)) >= 0.0:
            hi = mid
        else:
            lo = mid
    return hi


def _record(rho: DensityMatrix, q: float, t: float | None = None) -> ScanRecord:
    neg = entmeas.negativity(rho)
    rob = entmeas.random_robustness_closed(rho).value
    return ScanRecord(
        q=q,
        negativity=neg,
        robustness=rob,
        w_low=entmeas.witness_value(_W_LOW, rho),
        w_high=entmeas.witness_value(_W_HIGH, rho),
        p_c=rob / (1.0 + rob),
        t=t,
    )


def scan_family(
    q_min: float = 0.0,
    q_max: float = 1.0,
    steps: int = DEFAULT_STEPS,
    source: str = Source.DIRECT,
    omega: float = 0.0,
    g: float = 1.0,
    t_max: float | None = None,
) -> list[ScanRecord]:
    """Entanglement quantities along the Phi+/Psi+ line, q ascending.

    ``direct`` builds the states from the closed form, ``channel`` sends
    |Phi+> through the bit-flip channel, and ``dynamics`` sweeps a uniform
    time grid of ``steps`` points on ``[0, t_max]`` and records the q each
    state actually has. ``t_max`` defaults to the first half-period ``pi/|g|``.
    Dynamics records past the first turning point of q(t) are dropped, as are
    those outside ``[q_min, q_max]``.
    """
    if not (0.0 <= q_min < q_max <= 1.0):
        raise ValueError(f"need 0 <= q_min < q_max <= 1, got [{q_min}, {q_max}]")
    if int(steps) != steps or steps < 3:
        raise ValueError(f"steps must be an integer >= 3, got {steps}")
    steps = int(steps)
    if source not in Source.ALL:
        raise ValueError(f"unknown source {source!r}; expected one of {Source.ALL}")

    if source == Source.DYNAMICS:
        return _scan_dynamics(q_min, q_max, steps, omega, g, t_max)

    grid = np.linspace(q_min, q_max, steps)
    phi = bell("phi+").density()
    records = []
    for q in grid:
        q = float(q)
        rho = family_rho(q) if source == Source.DIRECT else qdyn.bit_flip_channel(phi, q)
        records.append(_record(rho, q))
    return records


def _scan_dynamics(q_min, q_max, steps, omega, g, t_max) -> list[ScanRecord]:
    if g == 0 or not math.isfinite(g):
        raise ValueError("coupling g must be finite and non-zero for dynamics scans")
    if t_max is None:
        t_max = math.pi / abs(g)
    if not t_max > 0:
        raise ValueError(f"t_max must be positive, got {t_max}")
    times = np.linspace(0.0, t_max, steps)
    states = qdyn.evolve_swap_series(omega, g, times)
    qs = [qdyn.q_overlap(rho) for rho in states]
    # q(t) starts at 1 and falls; stop at its first turning point.
    end = len(qs)
    for i in range(1, len(qs)):
        if qs[i] > qs[i - 1]:
            end = i
            break
    records = [
        _record(rho, min(1.0, max(0.0, q)), float(t))
        for rho, q, t in zip(states[:end], qs[:end], times[:end])
        if q_min - GRID_TOL <= q <= q_max + GRID_TOL
    ]
    records.sort(key=lambda r: r.q)
    return records


def _uniform_spacing(x: np.ndarray) -> float:
    if x.size < 5:
        raise ValueError(f"need at least 5 records, got {x.size}")
    dx = np.diff(x)
    h = float(np.mean(dx))
    if h <= 0 or np.max(np.abs(dx - h)) > GRID_TOL:
        raise ValueError("records are not on a uniform ascending grid")
    return h


def find_kinks(
    x: Sequence[float],
    y: Sequence[float],
    threshold: float = DEFAULT_THRESHOLD,
    rel_noise: float = RELATIVE_NOISE,
) -> list[KinkReport]:
    """Locate slope discontinuities of ``y(x)`` on a uniform grid.

    An interior point is flagged when ``|y[i-1] - 2 y[i] + y[i+1]| / h``
    exceeds ``threshold`` times the median of that quantity (plus a small
    floor). Neighbouring flagged points form one kink, reported at the member
    with the largest second difference.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError("x and y must have the same length")
    h = _uniform_spacing(x)
    d2 = np.abs(y[:-2] - 2.0 * y[1:-1] + y[2:]) / h
    floor = SECOND_DIFF_FLOOR + rel_noise * float(np.max(np.abs(y))) / h
    scale = float(np.median(d2)) + floor
    flagged = np.flatnonzero(d2 > threshold * scale) + 1

    reports = []
    runs = np.split(flagged, np.flatnonzero(np.diff(flagged) > 1) + 1) if flagged.size else []
    for run in runs:
        i = int(run[np.argmax(d2[run - 1])])
        left = (y[i] - y[i - 1]) / h
        right = (y[i + 1] - y[i]) / h
        reports.append(KinkReport(
            q_star=float(x[i]),
            jump=float(abs(right - left)),
            grid_spacing=h,
            robustness=float(y[i]),
            index=i,
        ))
    return reports


def detect_kinks(
    records: Sequence[ScanRecord], threshold: float = DEFAULT_THRESHOLD, axis: str = "q"
) -> list[KinkReport]:
    """Kinks of the robustness curve.

    ``axis="t"`` uses the time coordinate of a dynamics scan; ``q_star`` is then
    still the q of the flagged record.
    """
    if axis == "q":
        return find_kinks([r.q for r in records], [r.robustness for r in records], threshold)
    if axis != "t":
        raise ValueError(f"axis must be 'q' or 't', got {axis!r}")
    if any(r.t is None for r in records):
        raise ValueError("axis='t' needs records from a dynamics scan")
    ordered = sorted(records, key=lambda r: r.t)
    kinks = find_kinks([r.t for r in ordered], [r.robustness for r in ordered], threshold)
    return [replace(k, q_star=ordered[k.index].q) for k in kinks]


def smoothness_probe(records: Sequence[ScanRecord], column: str = "negativity") -> float:
    """Largest half-jump ``|s+ - s-| / 2`` between one-sided slopes of ``column``.

    A smooth profile gives ``O(h)``; a corner with slopes -a and +a gives a.
    """
    x = np.array([r.q for r in records], dtype=float)
    y = np.array([getattr(r, column) for r in records], dtype=float)
    h = _uniform_spacing(x)
    slopes = np.diff(y) / h
    return float(np.max(np.abs(np.diff(slopes))) / 2.0)
