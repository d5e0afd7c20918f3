"""Command-line front end.

Exit codes: 0 success, 1 I/O failure, 2 usage or validation failure.
Data goes to ``--output`` (or stdout); kink summaries go to stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Sequence

import numpy as np

from . import boundary, entmeas, qdyn
from .qstate import BELL_LABELS, InvalidStateError, bell, fidelity_pure
from .statefile import StateFileError, load_state, write_atomic

SCAN_HEADER = "q,negativity,random_robustness,w_phi,w_psi,p_c"
EVOLVE_HEADER = "t,q,negativity,f_psi_plus,f_phi_plus"
SIG_DIGITS = 12

EXIT_OK, EXIT_IO, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def fmt(x: float) -> str:
    """Positional decimal with 12 significant digits, trailing zeros trimmed."""
    x = float(x)
    if x == 0.0:
        return "0"
    return np.format_float_positional(x, precision=SIG_DIGITS, unique=False, fractional=False, trim="-")


def _csv(header: str, rows) -> str:
    lines = [header]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _emit(text: str, output: str | None) -> None:
    if output is None or output == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        write_atomic(output, text)


def _kink_summary(kinks: Sequence[boundary.KinkReport], axis: str, spacing: float | None) -> str:
    lines = [f"kinks={len(kinks)}"]
    for k in kinks:
        h = k.grid_spacing if axis == "q" else spacing
        if h:
            decimals = max(3, -math.floor(math.log10(h)))
            loc = f"q_star={k.q_star:.{decimals}f}±{h:.2g}"
        else:
            loc = f"q_star={k.q_star:.6f}"
        lines.append(f"{loc} jump={k.jump:.6g} robustness={k.robustness:.3g}")
    return "\n".join(lines) + "\n"


def cmd_scan(args) -> int:
    try:
        records = boundary.scan_family(
            args.q_min, args.q_max, args.steps, args.source,
            omega=args.omega, g=args.g, t_max=args.t_max,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None

    if args.format == "csv":
        text = _csv(SCAN_HEADER, (
            (r.q, r.negativity, r.robustness, r.w_low, r.w_high, r.p_c) for r in records
        ))
    else:
        text = json.dumps([
            {"q": r.q, "negativity": r.negativity, "random_robustness": r.robustness,
             "w_phi": r.w_low, "w_psi": r.w_high, "p_c": r.p_c, **({"t": r.t} if r.t is not None else {})}
            for r in records
        ], indent=1) + "\n"
    _emit(text, args.output)

    axis = "t" if args.source == boundary.Source.DYNAMICS else "q"
    try:
        kinks = boundary.detect_kinks(records, args.threshold, axis=axis)
    except ValueError as exc:
        sys.stderr.write(f"kink detection skipped: {exc}\n")
        return EXIT_OK
    spacing = None
    if axis == "t" and kinks:
        # Report the q spacing around the kink.
        i = kinks[0].index
        ordered = sorted(records, key=lambda r: r.t)
        spacing = abs(ordered[i + 1].q - ordered[i - 1].q) / 2
    sys.stderr.write(_kink_summary(kinks, axis, spacing))
    return EXIT_OK


def _matrix_json(m: np.ndarray) -> dict:
    return {"re": m.real.tolist(), "im": m.imag.tolist()}


def cmd_witness(args) -> int:
    rho = load_state(args.state)
    if tuple(rho.dims) != (2, 2):
        raise StateFileError("dims", f"witness construction needs dims [2, 2], got {list(rho.dims)}")
    lam = entmeas.pt_min_eigenvalue(rho)
    out = {"pt_min_eigenvalue": lam, "negativity": entmeas.negativity(rho)}
    if lam >= -entmeas.ENTANGLED_TOL:
        out["verdict"] = "separable within tolerance"
    else:
        w = entmeas.optimal_witness(rho)
        out.update({
            "verdict": "entangled",
            "witness": _matrix_json(w.matrix),
            "trace": w.trace,
            "value": entmeas.witness_value(w, rho),
        })
    sys.stdout.write(json.dumps(out, indent=1) + "\n")
    return EXIT_OK


def cmd_evolve(args) -> int:
    if args.g == 0 or not math.isfinite(args.g):
        raise UsageError("--g must be finite and non-zero")
    if args.steps < 2:
        raise UsageError("--steps must be >= 2")
    if not (args.t_max > 0 and math.isfinite(args.t_max)):
        raise UsageError("--t-max must be positive")
    times = np.linspace(0.0, args.t_max, args.steps)
    states = qdyn.evolve_swap_series(args.omega, args.g, times, frame=args.frame)
    psi, phi = bell("psi+"), bell("phi+")
    rows = (
        (t, qdyn.q_overlap(rho), entmeas.negativity(rho), fidelity_pure(psi, rho), fidelity_pure(phi, rho))
        for t, rho in zip(times, states)
    )
    _emit(_csv(EVOLVE_HEADER, rows), args.output)
    return EXIT_OK


def cmd_fidelity(args) -> int:
    rho = load_state(args.state)
    f = fidelity_pure(bell(args.target), rho)
    sys.stdout.write(f"{f:.{args.digits}f}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entkink",
        description="Two-qubit negativity, random robustness and witness scans.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan", help="scan the Phi+/Psi+ line and detect kinks in R_R(q)")
    p.add_argument("--q-min", type=float, default=0.0)
    p.add_argument("--q-max", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=boundary.DEFAULT_STEPS)
    p.add_argument("--source", choices=boundary.Source.ALL, default=boundary.Source.DIRECT)
    p.add_argument("--omega", type=float, default=0.0, help="level splitting (dynamics source)")
    p.add_argument("--g", type=float, default=1.0, help="coupling (dynamics source)")
    p.add_argument("--t-max", type=float, default=None, help="end of time grid; default pi/|g|")
    p.add_argument("--threshold", type=float, default=boundary.DEFAULT_THRESHOLD)
    p.add_argument("--output", default=None, help="output path (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("witness", help="optimal entanglement witness of a state file")
    p.add_argument("--state", required=True)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("evolve", help="double-swap dynamics of the AB pair")
    p.add_argument("--omega", type=float, default=0.0)
    p.add_argument("--g", type=float, default=1.0)
    p.add_argument("--t-max", type=float, default=2 * math.pi)
    p.add_argument("--steps", type=int, default=101)
    p.add_argument("--frame", choices=("interaction", "lab"), default="interaction")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("fidelity", help="Bell-state fidelity of a state file")
    p.add_argument("--state", required=True)
    p.add_argument("--target", choices=BELL_LABELS, required=True)
    p.add_argument("--digits", type=int, default=6, choices=range(1, 17), metavar="{1..16}")
    p.set_defaults(func=cmd_fidelity)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"entkink {args.command}: error: {exc}\n")
        return EXIT_USAGE
    except (StateFileError, InvalidStateError) as exc:
        sys.stderr.write(f"entkink {args.command}: invalid state ({exc.invariant}): {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        sys.stderr.write(f"entkink {args.command}: I/O error: {exc}\n")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
