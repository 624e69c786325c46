"""Command-line driver: emits the package's reference tables and audit reports.

Subcommands
-----------
phase-plot
    CSV ``(m_sqrt_xi2, phi, kappa)``: spin-connection phases of the sharp
    vacuum kernel over a timelike separation grid.
bessel-check
    CSV ``(z, im_alpha_beta_bar)``: positivity witness of the kernel
    coefficient product on timelike separations.
convergence
    CSV ``(N, deviation, ratio, eps_used[, texp_deviation])``: polygonal
    transport deviation versus subdivision count; with a curvature field the
    fixed-step corrector error column is appended.
audit-system
    JSON report: causal-axiom audit, symmetry flags and a causal-type
    histogram of a finite operator system (random, sampled, or from file).
nu-table
    CSV ``(m, eps, nu_12, nu_34, eps3_nu_34)``: local eigenvalue scales of
    the regularized vacuum.
curved-correction
    JSON report: curvature corrector data for a sampled field (generator
    norms, first-order scalar/van Vleck coefficients, transport increment,
    time-ordered exponential with a fixed-step cross-check).

Every run is deterministic given its flags (and ``--seed`` where used): CSV
cells are '%.17g'-formatted with '.' decimal separator and CRLF row ends;
JSON reports carry ``"schema": "cfs-report/1"`` and sorted keys.  Exit
codes: 0 success, 2 invalid configuration or input, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from .errors import CfsGeomError
from .spin_algebra import DEFAULT_TOL, SpinOperator, Tolerances, operator_norm, spin_adjoint
from .dirac_sea import (
    Event,
    VacuumParams,
    chain_analysis,
    dirac_sea_pair,
    kernel,
    nu_eigenvalues,
)
from .geometry import (
    check_causal_axioms,
    check_symmetries,
    classify_causal,
    spin_connection,
)
from .ambient_system import load_system, localize, pair_data, random_system
from .transport import (
    TimelikeCurve,
    compose_transport,
    curvature_field_from_json,
    delta_u,
    hadamard_leading,
    texp_correction,
    texp_generator,
)

__all__ = ["main"]

_SCHEMA = "cfs-report/1"

# exit codes of the driver
EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


class ConfigError(ValueError):
    """Invalid flag combination or input file; maps to exit code 2."""


# -- formatting ----------------------------------------------------------------


def _fmt(value) -> str:
    """17-significant-digit cell; integers stay integral."""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return "%.17g" % float(value)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(cell) for cell in row])
    return buf.getvalue()


def _json_text(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _emit(out_path, text: str) -> None:
    data = text.encode("utf-8")
    if out_path:
        with open(out_path, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)


# -- flag parsing helpers --------------------------------------------------------


def _parse_grid(text: str, default_scale: str) -> np.ndarray:
    """Parse ``START:STOP:COUNT[:lin|log]`` into a sample array."""
    parts = text.split(":")
    if len(parts) not in (3, 4):
        raise ConfigError(f"grid {text!r} is not START:STOP:COUNT[:lin|log]")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"grid {text!r} has non-numeric fields") from exc
    scale = parts[3] if len(parts) == 4 else default_scale
    if count < 0:
        raise ConfigError("grid count must be nonnegative")
    if count == 0:
        return np.empty(0)
    if count == 1:
        return np.array([start])
    if scale == "log":
        if start <= 0.0 or stop <= 0.0:
            raise ConfigError("log grids need positive endpoints")
        return np.geomspace(start, stop, count)
    if scale == "lin":
        return np.linspace(start, stop, count)
    raise ConfigError(f"unknown grid scale {scale!r}")


def _parse_int_list(text: str, minimum: int, flag: str) -> list:
    try:
        values = [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"{flag} {text!r} is not a comma list of integers") from exc
    if not values or any(v < minimum for v in values):
        raise ConfigError(f"{flag} entries must be integers >= {minimum}")
    return values


def _parse_float_list(text: str, flag: str) -> list:
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"{flag} {text!r} is not a comma list of numbers") from exc
    if not values:
        raise ConfigError(f"{flag} must not be empty")
    return values


def _tolerances(args) -> Tolerances:
    return Tolerances(
        real_threshold=(args.tol_real if args.tol_real is not None
                        else DEFAULT_TOL.real_threshold),
        definiteness_margin=DEFAULT_TOL.definiteness_margin,
        rank_threshold=(args.tol_rank if args.tol_rank is not None
                        else DEFAULT_TOL.rank_threshold),
    )


def _mass(args) -> float:
    if not (args.mass > 0.0):
        raise ConfigError("--mass must be positive")
    return float(args.mass)


def _single_eps(args) -> float:
    if args.eps is None:
        return 0.0
    try:
        eps = float(args.eps)
    except ValueError as exc:
        raise ConfigError(f"--eps {args.eps!r} is not a number") from exc
    if eps < 0.0:
        raise ConfigError("--eps must be nonnegative")
    return eps


# -- commands --------------------------------------------------------------------


def cmd_phase_plot(args) -> str:
    m = _mass(args)
    if _single_eps(args) != 0.0:
        raise ConfigError("phase-plot uses the sharp kernel; --eps must be 0")
    tol = _tolerances(args)
    grid = _parse_grid(args.grid or "0.1:20:400", "log")
    params = VacuumParams(m)
    rows = []
    for z in grid:
        if z <= 0.0:
            raise ConfigError("phase grid values must be positive")
        analysis = chain_analysis(Event(z / m), params, tol)
        phi, kappa = analysis["phi"], analysis["kappa"]
        gap = abs(phi - round(phi / (math.pi / 4)) * (math.pi / 4))
        if gap <= 1e-6:
            raise CfsGeomError(
                f"phi at m*sqrt(xi^2) = {z:.6g} sits {gap:.2e} from a pi/4 "
                "multiple; the connection is not time-directed there"
            )
        rows.append((z, phi, kappa))
    return _csv_text(("m_sqrt_xi2", "phi", "kappa"), rows)


def cmd_bessel_check(args) -> str:
    m = _mass(args)
    grid = _parse_grid(args.grid or "0.05:50:200", "log")
    params = VacuumParams(m)
    rows = []
    for z in grid:
        if z <= 0.0:
            raise ConfigError("bessel grid values must be positive")
        coeffs = kernel(Event(z / m), params)
        witness = (coeffs.alpha * np.conj(coeffs.beta)).imag
        if not (witness > 0.0):
            raise CfsGeomError(
                f"Im(alpha conj(beta)) = {witness:.6e} at z = {z:.6g} is not positive"
            )
        rows.append((z, witness))
    return _csv_text(("z", "im_alpha_beta_bar"), rows)


def _straight_curve(args, m: float) -> TimelikeCurve:
    direction = [float(tok) for tok in (args.direction or "1,0,0,0").split(",")]
    if len(direction) != 4:
        raise ConfigError("--direction needs four comma-separated components")
    d = np.asarray(direction, dtype=float)
    square = d[0] ** 2 - d[1] ** 2 - d[2] ** 2 - d[3] ** 2
    if not (square > 0.0 and d[0] > 0.0):
        raise ConfigError("--direction must be future-directed timelike")
    length = args.length if args.length is not None else 1.0 / m
    if not (length > 0.0):
        raise ConfigError("--length must be positive")
    end = Event.from_array(length * d / math.sqrt(square))
    return TimelikeCurve.straight(Event(0.0), end)


def _rk4_texp(generator, length: float, steps: int) -> np.ndarray:
    """Fixed-step classical Runge-Kutta for dD/dt = G(t) D, D(0) = 1."""
    d = np.eye(4, dtype=complex)
    h = length / steps
    for k in range(steps):
        t = k * h
        k1 = generator(t) @ d
        k2 = generator(t + 0.5 * h) @ (d + 0.5 * h * k1)
        k3 = generator(t + 0.5 * h) @ (d + 0.5 * h * k2)
        k4 = generator(t + h) @ (d + h * k3)
        d = d + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return d


def cmd_convergence(args) -> str:
    m = _mass(args)
    eps = _single_eps(args)
    tol = _tolerances(args)
    n_list = _parse_int_list(args.N or "8,16,32,64,128,256", 1, "--N")
    mode = args.mode
    if mode == "analytic" and eps != 0.0:
        raise ConfigError("analytic transport uses the sharp kernel; --eps must be 0")
    curve = _straight_curve(args, m)
    params = VacuumParams(m, eps)

    field = None
    reference = None
    generator = None
    if args.field_json:
        with open(args.field_json, "r") as fh:
            field = curvature_field_from_json(fh.read())
        reference = texp_correction(curve, field, params).mat
        generator = texp_generator(field, params)

    header = ["N", "deviation", "ratio", "eps_used"]
    if field is not None:
        header.append("texp_deviation")
    rows = []
    prev = None
    for n in n_list:
        result = compose_transport(
            curve, n, params,
            mode=("generic" if mode in ("generic", "spliced") else "analytic"),
            spliced=(mode == "spliced"), tol=tol,
        )
        ratio = "" if (prev is None or result.deviation == 0.0) \
            else prev / result.deviation
        row = [n, result.deviation, ratio, result.eps_used]
        if field is not None:
            approx = _rk4_texp(generator, curve.length, n)
            row.append(operator_norm(SpinOperator(approx - reference)))
        rows.append(row)
        prev = result.deviation
    return _csv_text(header, rows)


def cmd_nu_table(args) -> str:
    m = _mass(args)
    eps_values = _parse_float_list(args.eps or "0.1,1", "--eps")
    if any(e <= 0.0 for e in eps_values):
        raise ConfigError("eigenvalue scales need --eps entries > 0")
    rows = []
    for eps in eps_values:
        nu12, nu34 = nu_eigenvalues(VacuumParams(m, eps))
        rows.append((m, eps, nu12, nu34, eps ** 3 * nu34))
    return _csv_text(("m", "eps", "nu_12", "nu_34", "eps3_nu_34"), rows)


def _audit_inputs(args, m: float, tol: Tolerances):
    """Point labels, pair_fn and a source descriptor for the audit."""
    if args.system_json:
        try:
            system = load_system(args.system_json, tol)
        except (OSError, ValueError, KeyError, CfsGeomError) as exc:
            raise ConfigError(f"cannot load system: {exc}") from exc
        source = {"kind": "file", "path": args.system_json,
                  "n_points": len(system.points)}
        locs = [localize(p, tol) for p in system.points]

        def pair_fn(i, j):
            try:
                return pair_data(system.points[i], system.points[j],
                                 locs[i], locs[j], tol)
            except (CfsGeomError, ValueError):
                return None

        return list(range(len(system.points))), pair_fn, source

    if args.n_points < 0:
        raise ConfigError("--n-points must be nonnegative")
    if args.source == "minkowski":
        rng = np.random.default_rng(args.seed)
        events = [Event.from_array(row / m)
                  for row in rng.uniform(-1.0, 1.0, (args.n_points, 4))]
        params = VacuumParams(m, _single_eps(args))
        source = {"kind": "minkowski", "n_points": args.n_points,
                  "seed": args.seed, "eps": params.eps}

        def pair_fn(i, j):
            try:
                return dirac_sea_pair(events[i], events[j], params)
            except (CfsGeomError, ValueError):
                return None

        return list(range(args.n_points)), pair_fn, source

    if args.f < 4:
        raise ConfigError("--f must be at least 4")
    system = random_system(args.f, args.n_points, args.seed)
    source = {"kind": "random", "f": args.f, "n_points": args.n_points,
              "seed": args.seed}
    locs = [localize(p, tol) for p in system.points]

    def pair_fn(i, j):
        try:
            return pair_data(system.points[i], system.points[j],
                             locs[i], locs[j], tol)
        except (CfsGeomError, ValueError):
            return None

    return list(range(args.n_points)), pair_fn, source


def cmd_audit_system(args) -> str:
    m = _mass(args)
    tol = _tolerances(args)
    points, pair_fn, source = _audit_inputs(args, m, tol)

    doc = {"schema": _SCHEMA, "command": "audit-system", "source": source,
           "n_points": len(points)}
    if not points:
        doc.update(axioms={"irreflexivity_violations": 0,
                           "transitivity_violations": 0,
                           "triples_checked": 0,
                           "future_transitive": []},
                   classification={}, connections=0, symmetries={})
        return _json_text(doc)

    connections = {}

    def connection(i, j):
        if (i, j) not in connections:
            data = pair_fn(i, j)
            if data is None:
                connections[(i, j)] = None
            else:
                try:
                    connections[(i, j)] = spin_connection(data, tol)
                except CfsGeomError:
                    connections[(i, j)] = None
        return connections[(i, j)]

    def relation(i, j):
        conn = connection(i, j)
        return None if conn is None else conn.orientation

    axioms = check_causal_axioms(points, relation)
    axioms["future_transitive"] = [bool(axioms["future_transitive"][i])
                                   for i in points]

    histogram = {}
    for i in points:
        for j in points[i + 1:]:
            data = pair_fn(i, j)
            label = ("unavailable" if data is None
                     else classify_causal(data.P_xy @ data.P_yx, tol))
            histogram[label] = histogram.get(label, 0) + 1

    n_connected = sum(1 for i in points for j in points
                      if i != j and connection(i, j) is not None)

    audit = check_symmetries(points, pair_fn, tol)
    residual = float(audit["witness_residual"])
    symmetries = {
        "parity_preserving": bool(audit["parity_preserving"]),
        "clifford_parallel": bool(audit["clifford_parallel"]),
        "chirally_symmetric": bool(audit["chirally_symmetric"]),
        "witness_residual": residual if math.isfinite(residual) else None,
    }

    doc.update(axioms=axioms, classification=histogram,
               connections=n_connected, symmetries=symmetries)
    return _json_text(doc)


def cmd_curved_correction(args) -> str:
    m = _mass(args)
    if not args.field_json:
        raise ConfigError("curved-correction needs --field-json")
    try:
        with open(args.field_json, "r") as fh:
            field = curvature_field_from_json(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read field: {exc}") from exc
    except ValueError as exc:
        raise ConfigError(f"invalid field file: {exc}") from exc

    length = args.length if args.length is not None else 1.0 / m
    if not (length > 0.0):
        raise ConfigError("--length must be positive")
    curve = TimelikeCurve.straight(Event(0.0), Event(length))
    params = VacuumParams(m)
    if args.delta is not None and not (args.delta > 0.0):
        raise ConfigError("--delta must be positive")
    delta = args.delta if args.delta is not None else length / 8.0
    steps = int(args.N) if args.N else 4096
    if steps < 1:
        raise ConfigError("--N must be a positive step count")

    try:
        texp = texp_correction(curve, field, params)
    except ValueError as exc:
        # bound-policy violations come from the input data
        raise ConfigError(str(exc)) from exc
    generator = texp_generator(field, params)
    approx = _rk4_texp(generator, length, steps)
    grid = (np.linspace(0.0, length, 33) if args.grid is None
            else _parse_grid(args.grid, "lin"))

    g_norms, v_re, v_im, vleck, du_vectors = [], [], [], [], []
    for t in grid:
        t = float(t)
        g_norms.append(float(np.linalg.norm(generator(t), 2)))
        coeffs = hadamard_leading(field, t, (t, 0.0, 0.0, 0.0), params)
        v_re.append(float(coeffs["V_scalar"].real))
        v_im.append(float(coeffs["V_scalar"].imag))
        vleck.append(float(coeffs["vleck"]))
        du_vectors.append([float(c) for c in delta_u(field, t, delta, params).vector])

    unit_res = operator_norm(
        spin_adjoint(texp) @ texp - SpinOperator(np.eye(4, dtype=complex)))
    doc = {
        "schema": _SCHEMA,
        "command": "curved-correction",
        "mass": m,
        "length": length,
        "delta": delta,
        "grid": [float(t) for t in grid],
        "generator_norm": g_norms,
        "V_scalar_re": v_re,
        "V_scalar_im": v_im,
        "vleck": vleck,
        "delta_u": du_vectors,
        "texp_re": [[float(v) for v in row] for row in texp.mat.real],
        "texp_im": [[float(v) for v in row] for row in texp.mat.imag],
        "texp_unitarity_residual": float(unit_res),
        "rk4_steps": steps,
        "texp_deviation_vs_rk4": float(
            operator_norm(SpinOperator(approx - texp.mat))),
    }
    return _json_text(doc)


# -- driver ----------------------------------------------------------------------


_COMMANDS = {
    "phase-plot": cmd_phase_plot,
    "bessel-check": cmd_bessel_check,
    "convergence": cmd_convergence,
    "audit-system": cmd_audit_system,
    "nu-table": cmd_nu_table,
    "curved-correction": cmd_curved_correction,
}


def _build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--mass", type=float, default=1.0,
                        help="vacuum mass m > 0 (default 1)")
    shared.add_argument("--eps", default=None,
                        help="regularization length(s); comma list for nu-table")
    shared.add_argument("--grid", default=None,
                        help="sample grid START:STOP:COUNT[:lin|log]")
    shared.add_argument("--N", default=None,
                        help="subdivision count(s); comma list for convergence")
    shared.add_argument("--seed", type=int, default=0,
                        help="RNG seed for generated systems")
    shared.add_argument("--out", default=None,
                        help="output path (default: stdout)")
    shared.add_argument("--tol-real", type=float, default=None,
                        help="override the realness/snap tolerance")
    shared.add_argument("--tol-rank", type=float, default=None,
                        help="override the rank/degeneracy tolerance")

    parser = argparse.ArgumentParser(
        prog="cfsgeom",
        description="Causal-fermion geometry experiment driver",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("phase-plot", parents=[shared],
                   help="connection phase table over timelike separations")
    sub.add_parser("bessel-check", parents=[shared],
                   help="kernel coefficient positivity table")
    conv = sub.add_parser("convergence", parents=[shared],
                          help="polygonal transport deviation table")
    conv.add_argument("--mode", choices=("analytic", "generic", "spliced"),
                      default="analytic", help="transport backend")
    conv.add_argument("--direction", default=None,
                      help="curve direction 't,x,y,z' (default pure time)")
    conv.add_argument("--length", type=float, default=None,
                      help="curve length (default 1/m)")
    conv.add_argument("--field-json", default=None,
                      help="curvature field; adds the corrector error column")
    audit = sub.add_parser("audit-system", parents=[shared],
                           help="causal/symmetry audit of a finite system")
    audit.add_argument("--system-json", default=None,
                       help="operator system file (overrides generation)")
    audit.add_argument("--source", choices=("random", "minkowski"),
                       default="random", help="generated system kind")
    audit.add_argument("--f", type=int, default=16,
                       help="ambient dimension of generated systems")
    audit.add_argument("--n-points", type=int, default=8,
                       help="number of generated points")
    sub.add_parser("nu-table", parents=[shared],
                   help="local eigenvalue scale table")
    curved = sub.add_parser("curved-correction", parents=[shared],
                            help="curvature corrector report")
    curved.add_argument("--field-json", default=None,
                        help="curvature field exchange file (required)")
    curved.add_argument("--length", type=float, default=None,
                        help="curve length (default 1/m)")
    curved.add_argument("--delta", type=float, default=None,
                        help="transport increment step (default length/8)")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        text = _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CfsGeomError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    try:
        _emit(args.out, text)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
