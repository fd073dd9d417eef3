"""Command-line front end.

Subcommands cover time integration with invariant logging, dispersion
tables, stability root queries and 2-D scans, instability-boundary
curves, and temporal convergence studies.  Everything is emitted as
CSV or JSON with `#`-prefixed metadata headers and no timestamps, so a
repeated invocation reproduces its output byte for byte.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .conservation import InvariantRecorder
from .grid import TWO_PI, ComplexField, PeriodicGrid, PlaneWaveContext
from .polyroots import DegeneratePolynomialError, find_roots
from .schemes import (ReferenceError, SchemeParams, SolverError,
                      reference_run, run)
from .stability import (POINT_TOL, SCAN_TOL, DispersionError, besse_boundary,
                        besse_polynomial, fei_polynomial, modified_polynomial,
                        omega_scheme, scan_qK, scan_qL, spatial_symbol)

EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_DISPERSION = 4

OUTDIR_ENV = "CSE_SCHEMES_OUTDIR"


class ConfigError(ValueError):
    """Bad flag value or inconsistent flag combination."""


# ---------------------------------------------------------------------------
# small parsers and formatting


def _f(x) -> str:
    # repr of a Python float is the shortest round-trip form
    return repr(float(x))


def parse_range(text: str) -> np.ndarray:
    """`min:max:N` -> linspace, `min:max:Nlog` -> geomspace."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"range {text!r} is not min:max:N or min:max:Nlog")
    lo_s, hi_s, n_s = parts
    log = n_s.endswith("log")
    if log:
        n_s = n_s[:-3]
    try:
        lo, hi, n = float(lo_s), float(hi_s), int(n_s)
    except ValueError as exc:
        raise ConfigError(f"range {text!r}: {exc}") from None
    if n < 1:
        raise ConfigError(f"range {text!r} needs at least one point")
    if log:
        if lo <= 0 or hi <= 0:
            raise ConfigError(f"log range {text!r} needs positive endpoints")
        return np.geomspace(lo, hi, n)
    return np.linspace(lo, hi, n)


def parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise ConfigError(f"cannot parse complex number {text!r}") from None


def parse_tau_list(text: str) -> list[float]:
    """Comma-separated tau values; at least three, in geometric progression."""
    try:
        taus = [float(t) for t in text.split(",")]
    except ValueError as exc:
        raise ConfigError(f"--taus {text!r}: {exc}") from None
    if len(taus) < 3:
        raise ConfigError("--taus needs at least three values")
    if any(t <= 0 for t in taus):
        raise ConfigError("--taus must be positive")
    ratios = [taus[i + 1] / taus[i] for i in range(len(taus) - 1)]
    if any(abs(r - ratios[0]) > 1e-9 * abs(ratios[0]) for r in ratios):
        raise ConfigError("--taus must form a geometric progression")
    return taus


def resolve_grid(grid_points, h) -> PeriodicGrid:
    """Exactly one of M and h; the other follows from period 2*pi."""
    if (grid_points is None) == (h is None):
        raise ConfigError("give exactly one of --grid-points and --h")
    if grid_points is None:
        m = TWO_PI / h
        grid_points = round(m)
        if grid_points < 4 or abs(m - grid_points) > 1e-9 * grid_points:
            raise ConfigError(f"--h {h} does not divide the period 2*pi")
    if grid_points < 4:
        raise ConfigError("--grid-points must be at least 4")
    return PeriodicGrid(grid_points)


def make_u0(spec: str, grid: PeriodicGrid) -> ComplexField:
    """Presets: exp-sin | plane-wave:a,k | gaussian:a,width | file:<path>."""
    name, _, rest = spec.partition(":")
    x = grid.points
    if name == "exp-sin":
        if rest:
            raise ConfigError("exp-sin takes no parameters")
        return ComplexField(grid, np.exp(np.sin(x)).astype(complex))
    if name == "plane-wave":
        try:
            a_s, k_s = rest.split(",")
            a, k = float(a_s), int(k_s)
        except ValueError:
            raise ConfigError(f"plane-wave preset needs a,k; got {rest!r}") from None
        return ComplexField(grid, a * np.exp(1j * k * x))
    if name == "gaussian":
        try:
            a_s, w_s = rest.split(",")
            a, width = float(a_s), float(w_s)
        except ValueError:
            raise ConfigError(f"gaussian preset needs a,width; got {rest!r}") from None
        if width <= 0:
            raise ConfigError("gaussian width must be positive")
        # periodized: sum the images of a bump centred mid-domain
        vals = np.zeros_like(x)
        for j in range(-4, 5):
            vals += np.exp(-((x - math.pi - TWO_PI * j) ** 2) / (2 * width**2))
        return ComplexField(grid, a * vals.astype(complex))
    if name == "file":
        if not rest:
            raise ConfigError("file preset needs a path")
        try:
            data = np.loadtxt(rest, delimiter=",", comments="#", ndmin=2)
        except OSError as exc:
            raise ConfigError(f"cannot read u0 file {rest!r}: {exc}") from None
        if data.ndim != 2 or data.shape[1] != 2:
            raise ConfigError(f"u0 file {rest!r} must have two columns (Re, Im)")
        if data.shape[0] != grid.num_points:
            raise ConfigError(
                f"u0 file {rest!r} has {data.shape[0]} rows, grid has {grid.num_points}")
        return ComplexField(grid, data[:, 0] + 1j * data[:, 1])
    raise ConfigError(f"unknown u0 preset {spec!r}")


def check_theta_gamma(args) -> tuple[float, float]:
    """theta/gamma only make sense for the two-parameter scheme."""
    if args.scheme != "modified":
        if getattr(args, "theta", None) is not None:
            raise ConfigError("--theta is only valid with --scheme modified")
        if getattr(args, "gamma", None) is not None:
            raise ConfigError("--gamma is only valid with --scheme modified")
        return 1.0, 1.0
    theta = args.theta if args.theta is not None else 1.0
    gamma = args.gamma if args.gamma is not None else 1.0
    return theta, gamma


def output_path(args, explicit, default_name):
    """Explicit path wins; otherwise join the default name to the output
    directory (--outdir flag, else the environment default)."""
    if explicit:
        return explicit
    outdir = args.outdir or os.environ.get(OUTDIR_ENV) or "."
    return os.path.join(outdir, default_name)


def write_text(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
    else:
        parent = os.path.dirname(path)
        if parent:
            os.makedirs(parent, exist_ok=True)
        with open(path, "w") as fh:
            fh.write(text)


def render_csv(meta: list[tuple[str, str]], columns: list[str], rows) -> str:
    lines = [f"# tool: cse-schemes {__version__}"]
    lines += [f"# {key}: {value}" for key, value in meta]
    lines.append("# columns: " + ",".join(columns))
    for row in rows:
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# simulate


def cmd_simulate(args) -> int:
    theta, gamma = check_theta_gamma(args)
    grid = resolve_grid(args.grid_points, args.h)
    u0 = make_u0(args.u0, grid)
    p = SchemeParams(tau=args.tau, lam=args.lam, theta=theta, gamma=gamma)
    recorder = InvariantRecorder(args.scheme, p)
    traj = run(u0, p, args.scheme, args.t_end, callbacks=(recorder,),
               record_stride=args.record_stride, startup_method=args.startup)

    meta = [
        ("command", "simulate"),
        ("scheme", args.scheme),
        ("u0", args.u0),
        ("lambda", _f(args.lam)),
        ("tau", _f(args.tau)),
        ("grid-points", str(grid.num_points)),
        ("h", _f(grid.spacing)),
        ("t-end", _f(args.t_end)),
        ("theta", _f(theta)),
        ("gamma", _f(gamma)),
        ("record-stride", str(args.record_stride)),
        ("startup", str(traj.meta["startup"])),
        ("n-steps", str(traj.meta["n_steps"])),
        ("max-rel-residual", _f(traj.meta.get("max_rel_residual", 0.0))),
        ("warnings", "; ".join(traj.meta["warnings"]) or "none"),
    ]

    # snapshots, keyed by step so the final two levels are always present
    by_step = {s: (f, t) for s, t, f in zip(traj.steps, traj.times, traj.fields)}
    n = traj.meta["n_steps"]
    by_step[max(n - 1, 0)] = (traj.tail[0], max(n - 1, 0) * p.tau)
    by_step[n] = (traj.tail[1], n * p.tau)
    x = grid.points
    rows = []
    for step in sorted(by_step):
        field, t = by_step[step]
        v = field.values
        for m in range(grid.num_points):
            rows.append([_f(x[m]), _f(v[m].real), _f(v[m].imag), _f(abs(v[m])),
                         str(step), _f(t)])
    snap_path = output_path(args, args.snapshots, "snapshots.csv")
    write_text(snap_path, render_csv(meta, ["x", "Re U", "Im U", "|U|", "step", "t"], rows))

    inv_rows = []
    for s in recorder.samples:
        d = s.density if s.density is not None else float("nan")
        inv_rows.append([str(s.step_index), _f(s.step_index * p.tau), _f(d), _f(s.energy)])
    inv_path = output_path(args, args.invariants, "invariants.csv")
    write_text(inv_path, render_csv(meta, ["step", "t", "density", "energy"], inv_rows))
    return 0


# ---------------------------------------------------------------------------
# dispersion


def cmd_dispersion(args) -> int:
    if args.scheme == "all":
        schemes = ["fei", "besse", "modified"]
    else:
        schemes = [args.scheme]
    theta = args.theta if args.theta is not None else 1.0
    q_grid = parse_range(args.q)
    k = args.K / math.sqrt(args.tau)

    rows = []
    for q in q_grid:
        ctx = PlaneWaveContext(amp=1.0, wavenumber=k, lam=q / args.tau,
                               tau=args.tau, h=args.h)
        s = q + spatial_symbol(ctx, k)
        cells = [_f(s), _f(s)]
        for scheme in schemes:
            try:
                cells.append(_f(omega_scheme(scheme, ctx, theta=theta)))
            except DispersionError:
                cells.append(_f(float("nan")))
        rows.append(cells)

    meta = [
        ("command", "dispersion"),
        ("scheme", args.scheme),
        ("q", args.q),
        ("K", _f(args.K)),
        ("tau", _f(args.tau)),
        ("h", _f(args.h)),
        ("theta", _f(theta)),
    ]
    columns = ["s", "exact omega*tau"] + [f"{s} omega*tau" for s in schemes]
    write_text(output_path(args, args.out, "dispersion.csv"),
               render_csv(meta, columns, rows))
    return 0


# ---------------------------------------------------------------------------
# stability subcommands


def _point_context(q: float, K: float, tau: float, h: float) -> PlaneWaveContext:
    return PlaneWaveContext(amp=1.0, wavenumber=K / math.sqrt(tau),
                            lam=q / tau, tau=tau, h=h)


def cmd_stability_roots(args) -> int:
    theta, gamma = check_theta_gamma(args)
    ctx = _point_context(args.q, args.K, args.tau, args.h)
    ell = args.L / math.sqrt(args.tau)
    extra = {}
    if args.scheme == "fei":
        poly = fei_polynomial(ctx, ell)
        report = find_roots(poly, tol=args.tol)
        roots = list(report.roots)
    elif args.scheme == "besse":
        # the quartic factors as (z+1) times the cubic; rooting the cubic
        # and appending the exact -1 avoids the double-root accuracy loss
        poly, cubic_poly, norm = besse_polynomial(ctx, ell)
        report = find_roots(cubic_poly, tol=args.tol)
        roots = list(report.roots) + [complex(-1.0, 0.0)]
        extra["cubic_f"] = [norm.f.real, norm.f.imag]
        extra["cubic_g"] = [norm.g.real, norm.g.imag]
    else:
        poly = modified_polynomial(ctx, ell, theta, gamma)
        report = find_roots(poly, tol=args.tol)
        roots = list(report.roots)

    doc = {
        "tool": f"cse-schemes {__version__}",
        "command": "stability roots",
        "scheme": args.scheme,
        "q": args.q,
        "K": args.K,
        "L": args.L,
        "theta": theta,
        "gamma": gamma,
        "tau": args.tau,
        "h": args.h,
        "tol": args.tol,
        "omega_tau": omega_scheme(args.scheme, ctx, theta=theta),
        "coefficients": [[c.real, c.imag] for c in poly.coeffs],
        "roots": [[r.real, r.imag] for r in roots],
        "moduli": [float(abs(r)) for r in roots],
        "max_modulus": max(report.max_modulus, 1.0) if args.scheme == "besse"
                       else report.max_modulus,
        "stable": bool(report.stable),
    }
    doc.update(extra)
    write_text(output_path(args, args.out, "roots.json"),
               json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_stability_scan2d(args) -> int:
    theta, gamma = check_theta_gamma(args)
    q_grid = parse_range(args.q)
    L_grid = parse_range(args.L)
    res = scan_qL(args.scheme, args.K, q_grid, L_grid, theta=theta,
                  gamma=gamma, tol=args.tol)
    meta = [
        ("command", "stability scan2d"),
        ("scheme", args.scheme),
        ("K", _f(args.K)),
        ("q", args.q),
        ("L", args.L),
        ("theta", _f(theta)),
        ("gamma", _f(gamma)),
        ("tol", _f(args.tol)),
        ("jobs", str(args.jobs)),
        ("L-grid", " ".join(_f(v) for v in L_grid)),
        ("degenerate", str(res.meta["degenerate"])),
        ("dispersion-failures", str(res.meta["dispersion_failures"])),
    ]
    rows = [[_f(q)] + [_f(v) for v in res.max_modulus[i]]
            for i, q in enumerate(q_grid)]
    columns = ["q"] + [f"max|z| L={_f(L)}" for L in L_grid]
    write_text(output_path(args, args.out, "scan2d.csv"),
               render_csv(meta, columns, rows))
    return 0


def cmd_stability_region(args) -> int:
    theta, gamma = check_theta_gamma(args)
    q_grid = parse_range(args.q)
    K_grid = parse_range(args.K)
    parts = args.L.split(":")
    if len(parts) != 3 or parts[2].endswith("log"):
        raise ConfigError("--L must be a linear range min:max:N")
    L_spec = (float(parts[0]), float(parts[1]), int(parts[2]))
    res = scan_qK(args.scheme, q_grid, K_grid, L_spec=L_spec, theta=theta,
                  gamma=gamma, tol=args.tol)
    meta = [
        ("command", "stability region"),
        ("scheme", args.scheme),
        ("q", args.q),
        ("K", args.K),
        ("L", args.L),
        ("theta", _f(theta)),
        ("gamma", _f(gamma)),
        ("tol", _f(args.tol)),
        ("jobs", str(args.jobs)),
        ("K-grid", " ".join(_f(v) for v in K_grid)),
        ("value", "1 = unstable (max root modulus exceeds 1 + tol over the L scan)"),
        ("degenerate", str(res.meta["degenerate"])),
        ("dispersion-failures", str(res.meta["dispersion_failures"])),
    ]
    unstable = ~res.stable
    rows = [[_f(q)] + [str(int(u)) for u in unstable[i]]
            for i, q in enumerate(q_grid)]
    columns = ["q"] + [f"unstable K={_f(K)}" for K in K_grid]
    write_text(output_path(args, args.out, "region.csv"),
               render_csv(meta, columns, rows))
    return 0


def cmd_stability_boundary(args) -> int:
    f = parse_complex(args.f)
    if args.theta_steps < 1:
        raise ConfigError("--theta-steps must be positive")
    try:
        pts = [(t, besse_boundary(f, t))
               for t in (TWO_PI * j / args.theta_steps for j in range(args.theta_steps))]
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    meta = [
        ("command", "stability boundary"),
        ("f", args.f),
        ("theta-steps", str(args.theta_steps)),
    ]
    rows = [[_f(t), _f(g.real), _f(g.imag)] for t, g in pts]
    write_text(output_path(args, args.out, "boundary.csv"),
               render_csv(meta, ["theta", "Re g", "Im g"], rows))
    return 0


# ---------------------------------------------------------------------------
# convergence


def cmd_convergence(args) -> int:
    theta, gamma = check_theta_gamma(args)
    taus = parse_tau_list(args.taus)
    grid = resolve_grid(args.grid_points, args.h)
    u0 = make_u0(args.u0, grid)
    ref = reference_run(u0, args.lam, args.t_end, args.accuracy)

    errors = []
    for tau in taus:
        p = SchemeParams(tau=tau, lam=args.lam, theta=theta, gamma=gamma)
        traj = run(u0, p, args.scheme, args.t_end, record_stride=10**9)
        errors.append(float(np.max(np.abs(traj.tail[1].values - ref.field.values))))

    rows = []
    for i, (tau, err) in enumerate(zip(taus, errors)):
        if i == 0:
            order = float("nan")
        else:
            ratio = errors[i - 1] / err if err > 0 else float("nan")
            order = math.log2(ratio) / math.log2(taus[i - 1] / tau) if err > 0 else float("nan")
        rows.append([_f(tau), _f(err), _f(order)])

    meta = [
        ("command", "convergence"),
        ("scheme", args.scheme),
        ("u0", args.u0),
        ("lambda", _f(args.lam)),
        ("t-end", _f(args.t_end)),
        ("grid-points", str(grid.num_points)),
        ("theta", _f(theta)),
        ("gamma", _f(gamma)),
        ("taus", args.taus),
        ("reference-method", ref.method),
        ("reference-tau", _f(ref.tau)),
        ("reference-error-estimate", _f(ref.error_estimate)),
    ]
    write_text(output_path(args, args.out, "convergence.csv"),
               render_csv(meta, ["tau", "sup error", "observed order"], rows))
    return 0


# ---------------------------------------------------------------------------
# parser plumbing


def _add_common_out(p):
    p.add_argument("--out", help="output path ('-' for stdout)")
    p.add_argument("--outdir", help=f"output directory (default ${OUTDIR_ENV} or '.')")


def _add_grid_flags(p):
    p.add_argument("--grid-points", type=int, help="number of spatial points M")
    p.add_argument("--h", type=float, help="spatial step (alternative to --grid-points)")


def _add_theta_gamma(p):
    p.add_argument("--theta", type=float, help="theta weight (modified scheme only)")
    p.add_argument("--gamma", type=float, help="gamma weight (modified scheme only)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cse-schemes",
        description="Conservative schemes for the cubic Schrodinger equation: "
                    "simulation, dispersion, plane-wave stability, convergence.")
    parser.add_argument("--version", action="version",
                        version=f"cse-schemes {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("simulate", help="integrate and write snapshots + invariants")
    ps.add_argument("--scheme", required=True, choices=["fei", "besse", "modified"])
    ps.add_argument("--u0", required=True,
                    help="exp-sin | plane-wave:a,k | gaussian:a,width | file:<path>")
    ps.add_argument("--lambda", dest="lam", type=float, required=True)
    ps.add_argument("--tau", type=float, required=True)
    _add_grid_flags(ps)
    ps.add_argument("--t-end", type=float, required=True)
    _add_theta_gamma(ps)
    ps.add_argument("--record-stride", type=int, default=1)
    ps.add_argument("--startup", choices=["besse", "exact"], default="besse",
                    help="first-step bootstrap for the two-level schemes")
    ps.add_argument("--snapshots", help="snapshot CSV path")
    ps.add_argument("--invariants", help="invariants CSV path")
    ps.add_argument("--outdir", help=f"output directory (default ${OUTDIR_ENV} or '.')")
    ps.set_defaults(func=cmd_simulate)

    pd = sub.add_parser("dispersion", help="omega*tau vs s table for all schemes")
    pd.add_argument("--scheme", choices=["all", "fei", "besse", "modified"],
                    default="all")
    pd.add_argument("--q", required=True, help="range min:max:N[log]")
    pd.add_argument("--K", type=float, default=0.0)
    pd.add_argument("--tau", type=float, default=1.0)
    pd.add_argument("--h", type=float, default=0.0,
                    help="spatial step for the discrete symbol (0 = continuous)")
    pd.add_argument("--theta", type=float, default=None,
                    help="theta for the modified column (default 1)")
    _add_common_out(pd)
    pd.set_defaults(func=cmd_dispersion)

    pst = sub.add_parser("stability", help="stability polynomials and scans")
    stsub = pst.add_subparsers(dest="stability_command", required=True)

    pr = stsub.add_parser("roots", help="root report at one (q, K, L) point")
    pr.add_argument("--scheme", required=True, choices=["fei", "besse", "modified"])
    pr.add_argument("--q", type=float, required=True)
    pr.add_argument("--K", type=float, required=True)
    pr.add_argument("--L", type=float, required=True)
    _add_theta_gamma(pr)
    pr.add_argument("--tau", type=float, default=1e-2)
    pr.add_argument("--h", type=float, default=0.0)
    pr.add_argument("--tol", type=float, default=POINT_TOL)
    _add_common_out(pr)
    pr.set_defaults(func=cmd_stability_roots)

    p2 = stsub.add_parser("scan2d", help="max root modulus over (q, L) at fixed K")
    p2.add_argument("--scheme", required=True, choices=["fei", "besse", "modified"])
    p2.add_argument("--K", type=float, required=True)
    p2.add_argument("--q", required=True, help="range min:max:N[log]")
    p2.add_argument("--L", required=True, help="range min:max:N[log]")
    _add_theta_gamma(p2)
    p2.add_argument("--tol", type=float, default=SCAN_TOL)
    p2.add_argument("--jobs", type=int, default=1, help="worker cap for the scan")
    _add_common_out(p2)
    p2.set_defaults(func=cmd_stability_scan2d)

    pg = stsub.add_parser("region", help="unstable/stable matrix over (q, K)")
    pg.add_argument("--scheme", required=True, choices=["fei", "besse", "modified"])
    pg.add_argument("--q", required=True, help="range min:max:N[log]")
    pg.add_argument("--K", required=True, help="range min:max:N[log]")
    pg.add_argument("--L", default="-10:10:2001",
                    help="linear L range scanned per cell")
    _add_theta_gamma(pg)
    pg.add_argument("--tol", type=float, default=SCAN_TOL)
    pg.add_argument("--jobs", type=int, default=1, help="worker cap for the scan")
    _add_common_out(pg)
    pg.set_defaults(func=cmd_stability_region)

    pb = stsub.add_parser("boundary", help="marginal-stability curve g(theta)")
    pb.add_argument("--f", required=True, help="unimodular f, e.g. 1+0i")
    pb.add_argument("--theta-steps", type=int, required=True)
    _add_common_out(pb)
    pb.set_defaults(func=cmd_stability_boundary)

    pc = sub.add_parser("convergence", help="temporal order study vs a reference run")
    pc.add_argument("--scheme", required=True, choices=["fei", "besse", "modified"])
    pc.add_argument("--u0", required=True)
    pc.add_argument("--lambda", dest="lam", type=float, required=True)
    pc.add_argument("--t-end", type=float, required=True)
    pc.add_argument("--taus", required=True,
                    help="comma-separated geometric progression, >= 3 values")
    _add_grid_flags(pc)
    _add_theta_gamma(pc)
    pc.add_argument("--accuracy", type=float, default=1e-8,
                    help="reference solution accuracy target")
    _add_common_out(pc)
    pc.set_defaults(func=cmd_convergence)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DispersionError as exc:
        print(f"dispersion failure: {exc}", file=sys.stderr)
        return EXIT_DISPERSION
    except (SolverError, ReferenceError, DegeneratePolynomialError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
