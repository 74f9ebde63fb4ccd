"""Command-line entry point: ``nlde <subcommand> [options]``.

Every output embeds the full parameter set and the tolerances in force
(``# key=value`` header lines for CSV, ``parameters``/``tolerances`` objects
for JSON). Floats are written as shortest round-trip decimals, so identical
runs give byte-identical files.

Exit codes: 0 success (including an empty root list), 2 invalid usage or
parameters, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .blowup import (
    CollapseParams,
    barrier_width,
    critical_mass,
    evolve,
    trajectory_table,
)
from .errors import ConvergenceError, DomainError
from .nr_limit import compare_densities, mnlse_stationary, nlse_profile
from .omega_solver import ROOT_XTOL, bound_state_domain, omega_c, solve_omega
from .solitary import (
    ModelParams,
    charge_closed_form,
    charge_quadrature,
    energy_closed_form,
    make_wave,
    spinor_at,
    t11_residual,
)
from .stability import FD_RTOL, FD_STEP, FD_STEP_RICHARDSON, second_variation, vk_slope

EXIT_USAGE = 2
EXIT_NUMERIC = 3


class UsageError(Exception):
    pass


def parse_grid(text: str) -> np.ndarray:
    """'start:stop:count' -> count points from start to stop inclusive (count >= 2)."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid must be start:stop:count, got {text!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise UsageError(f"bad grid {text!r}: {exc}") from None
    if count < 2:
        raise UsageError("grid count must be at least 2")
    if not (math.isfinite(start) and math.isfinite(stop)) or start == stop:
        raise UsageError("grid range must be finite and non-empty")
    return np.linspace(start, stop, count)


def fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        f = float(v)
        return f if math.isfinite(f) else repr(f)
    return v


def render(command, params, tolerances, columns, rows, fmt_name, extra=None) -> str:
    """One table (column names + rows) as CSV or JSON with full provenance."""
    if fmt_name == "json":
        doc = {
            "command": command,
            "version": __version__,
            "parameters": params,
            "tolerances": tolerances,
            "columns": columns,
            "rows": [dict(zip(columns, r)) for r in rows],
        }
        if extra:
            doc.update(extra)
        return json.dumps(_jsonable(doc), sort_keys=True, indent=1) + "\n"
    buf = io.StringIO()
    buf.write(f"# nlde {command} (version {__version__})\n")
    for key in sorted(params):
        buf.write(f"# {key}={fmt(params[key])}\n")
    for key in sorted(tolerances):
        buf.write(f"# tol.{key}={fmt(tolerances[key])}\n")
    for key in sorted(extra or {}):
        val = extra[key]
        if isinstance(val, dict):
            for sub in sorted(val):
                buf.write(f"# {key}.{sub}={fmt(val[sub])}\n")
        else:
            buf.write(f"# {key}={fmt(val)}\n")
    buf.write(",".join(columns) + "\n")
    for r in rows:
        buf.write(",".join(fmt(v) for v in r) + "\n")
    return buf.getvalue()


# ---------------------------------------------------------------- subcommands


def cmd_profile(a):
    params = ModelParams(a.m, a.g2, a.k, a.channel)
    x = parse_grid(a.grid)
    w = make_wave(params, a.omega)
    sp = spinor_at(w, x)
    cmp_ = compare_densities(params, a.omega, x, nlse_coupling=a.nlse_coupling)
    res = np.asarray(t11_residual(w, x))
    cols = ["x", "theta", "u", "v", "rho_nlde", "rho_nlse", "rho_mnlse", "f_factor", "t11_residual"]
    rows = list(zip(x, sp.theta, sp.u, sp.v, cmp_.rho_nlde, cmp_.rho_nlse, cmp_.rho_mnlse, cmp_.f, res))
    p = dict(m=a.m, g2=a.g2, k=a.k, omega=a.omega, channel=params.channel.value,
             grid=a.grid, nlse_coupling=a.nlse_coupling)
    extra = {"derived": {"alpha": w.alpha, "beta_k": w.beta_k, "rho0": w.amplitude_pow,
                         "expansion_parameter": cmp_.expansion_parameter,
                         "within_validity": cmp_.within_validity}}
    return render("profile", p, {}, cols, rows, a.format, extra)


def cmd_solve(a):
    if not a.Q > 0:
        raise DomainError("Q must be positive")
    params = ModelParams(a.m, a.g2, a.k, a.channel)
    roots = solve_omega(params, a.Q)
    cols = ["omega", "Q_closed_form", "Q_quadrature", "H1", "H2", "H3", "H_sol", "bound", "bound_extrapolated"]
    rows = []
    for om in roots:
        w = make_wave(params, om)
        obs = energy_closed_form(w, a.Q)
        rows.append([om, charge_closed_form(w), charge_quadrature(w), obs.H1, obs.H2, obs.H3,
                     obs.H_sol, obs.bound, obs.bound_extrapolated])
    p = dict(m=a.m, g2=a.g2, k=a.k, Q=a.Q, channel=params.channel.value)
    tol = dict(root_xtol_over_m=ROOT_XTOL, charge_rtol=1e-9)
    fmt_name = a.format or "json"
    return render("solve", p, tol, cols, rows, fmt_name, {"n_roots": len(rows)})


def cmd_scan(a):
    ks = parse_grid(a.grid)
    gs = parse_grid(a.g_grid)
    cols = ["k", "g_min", "g_max", "omega_at_gmin", "omega_at_gmax", "lower_open", "upper_open",
            "spot_check_error"]
    rows = []
    for k in ks:
        r = bound_state_domain(float(k), a.Q, gs, a.channel, m=a.m, tol=a.tol)
        rows.append([k, r.g_min, r.g_max, r.omega_at_gmin, r.omega_at_gmax, r.lower_open,
                     r.upper_open, r.spot_check_error])
    p = dict(m=a.m, Q=a.Q, channel=a.channel, grid=a.grid, g_grid=a.g_grid)
    return render("scan", p, {"g_bisection": a.tol, "spot_check_every": 10}, cols, rows, a.format)


def cmd_omega_c(a):
    ks = parse_grid(a.grid)
    cols = ["k", "omega_c", "oracle_mk_over_k_plus_1"]
    rows = []
    for k in ks:
        oc = omega_c(float(k), a.m, a.channel)
        rows.append([k, oc, None if oc is None else a.m * k / (k + 1.0)])
    p = dict(m=a.m, channel=a.channel, grid=a.grid)
    return render("omega-c", p, {"omega_xtol_over_m": 1e-15}, cols, rows, a.format)


def cmd_stability(a):
    ks = parse_grid(a.grid)
    cols = ["k", "H1", "H2", "H3", "first_derivative_at_1", "second_derivative_at_1",
            "fd_second_derivative", "fd_richardson", "fd_agrees", "classification", "vk_verdict"]
    rows = []
    for k in ks:
        k = float(k)
        if a.model == "nlse":
            sol = nlse_profile(a.m, a.g2, k, a.D)
        elif a.model == "nlde":
            sol = make_wave(ModelParams(a.m, a.g2, k, a.channel), a.omega)
        else:
            sol = mnlse_stationary(a.m, a.g2, k, a.omega, "ss" if a.model == "mnlse_ss" else "vv")
        rep = second_variation(a.model, sol)
        parts = list(rep.H_parts)
        if len(parts) == 2:  # NLSE has no middle term
            parts = [parts[0], parts[1], None]
        vk = vk_slope(k, -sol.Omega).verdict if a.model == "nlse" else None
        rows.append([k, *parts, rep.first_derivative_at_1, rep.second_derivative_at_1,
                     rep.fd_second_derivative, rep.fd_richardson, rep.fd_agrees,
                     rep.classification.value, vk])
    p = dict(m=a.m, g2=a.g2, model=a.model, grid=a.grid)
    if a.model == "nlse":
        p["D"] = a.D
        cols[1:4] = ["H1", "H2", "unused"]
    else:
        p["omega"] = a.omega
        if a.model == "nlde":
            p["channel"] = a.channel
    tol = dict(fd_step=FD_STEP, fd_step_richardson=FD_STEP_RICHARDSON, fd_rtol=FD_RTOL)
    return render("stability", p, tol, cols, rows, a.format)


def cmd_collapse(a):
    g = math.sqrt(a.g2)
    if a.M is not None and a.M_ratio is not None:
        raise UsageError("give at most one of --M and --M-ratio")
    M = a.M if a.M is not None else (a.M_ratio if a.M_ratio is not None else 1.1) * critical_mass(a.m, g)
    params = CollapseParams(a.model, a.k, a.m, a.g2, M)
    G0 = a.G0
    if G0 is None:
        bw = barrier_width(params)
        G0 = 0.5 * bw if bw is not None else 10.0
    run = evolve(params, G0, t_max=a.t_max, Gdot0=a.Gdot0, n_points=a.points)
    tab = trajectory_table(run)
    cols = ["t", "G", "Lambda", "Gdot", "E_check", "correction_ratio"]
    rows = list(zip(*(tab[c] for c in cols)))
    o = run.outcome
    outcome = {"kind": o.kind.value, "t_c": o.t_c, "fitted_exponent": o.fitted_exponent,
               "G_min": o.G_min, "t_b": o.t_b, "E": run.E, "energy_drift": run.energy_drift}
    p = dict(m=a.m, g2=a.g2, k=a.k, M=M, model=a.model, G0=G0, Gdot0=a.Gdot0, t_max=a.t_max,
             points=a.points, M_over_Mstar_k2=M / critical_mass(a.m, g))
    tol = {"quadrature_rtol": 1e-11, "breakdown_ratio": 0.5, "G_stop_over_G0": 1e-6}
    return render("collapse", p, tol, cols, rows, a.format, {"outcome": outcome})


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nlde", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, fmt_default="csv"):
        p.add_argument("--m", type=float, default=1.0, help="fermion mass (default 1)")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=["csv", "json"], default=fmt_default)

    def channel(p):
        p.add_argument("--channel", choices=["ss", "vv"], default="ss")

    p = sub.add_parser("profile", help="spinor, densities and first-integral residual on an x grid")
    common(p)
    channel(p)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--g2", type=float, default=1.0)
    p.add_argument("--omega", type=float, required=True)
    p.add_argument("--grid", default="-10:10:201", help="x grid start:stop:count")
    p.add_argument("--nlse-coupling", choices=["renormalized", "bare"], default="renormalized")
    p.add_argument("--tol", type=float, default=None, help="accepted for uniformity; unused")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("solve", help="frequencies of charge-Q waves and their energies")
    common(p, fmt_default=None)
    channel(p)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--g2", type=float, required=True)
    p.add_argument("--Q", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=None, help="accepted for uniformity; unused")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("scan", help="bound-state window in g for each k")
    common(p)
    channel(p)
    p.add_argument("--Q", type=float, default=1.0)
    p.add_argument("--grid", default="1:2.6:9", help="k grid start:stop:count")
    p.add_argument("--g-grid", default="0.05:4:80", help="g grid start:stop:count")
    p.add_argument("--tol", type=float, default=1e-4, help="bisection tolerance in g")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("omega-c", help="double-hump crossover frequency against k")
    common(p)
    channel(p)
    p.add_argument("--grid", default="0.5:3:11", help="k grid start:stop:count")
    p.add_argument("--tol", type=float, default=None, help="accepted for uniformity; unused")
    p.set_defaults(func=cmd_omega_c)

    p = sub.add_parser("stability", help="scale-transformation indicators against k")
    common(p)
    channel(p)
    p.add_argument("--model", choices=["nlse", "nlde", "mnlse_ss", "mnlse_vv"], default="nlse")
    p.add_argument("--g2", type=float, default=1.0)
    p.add_argument("--omega", type=float, default=0.9, help="frequency (NLDE, mNLSE)")
    p.add_argument("--D", type=float, default=1.0, help="inverse width (NLSE)")
    p.add_argument("--grid", default="0.5:3:6", help="k grid start:stop:count")
    p.add_argument("--tol", type=float, default=None, help="accepted for uniformity; unused")
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("collapse", help="self-similar width dynamics G(t)")
    common(p)
    p.add_argument("--model", choices=["nlse", "mnlse_ss", "mnlse_vv"], default="nlse")
    p.add_argument("--k", type=float, default=2.0)
    p.add_argument("--g2", type=float, default=1.0)
    p.add_argument("--M", type=float, default=None, help="mass")
    p.add_argument("--M-ratio", type=float, default=None,
                   help="mass in units of the k=2 critical mass (default 1.1)")
    p.add_argument("--G0", type=float, default=None,
                   help="initial width (default: half the barrier width for k > 2, else 10)")
    p.add_argument("--Gdot0", type=float, default=0.0)
    p.add_argument("--t-max", type=float, default=math.inf)
    p.add_argument("--points", type=int, default=600)
    p.add_argument("--tol", type=float, default=None, help="accepted for uniformity; unused")
    p.set_defaults(func=cmd_collapse)
    return ap


_GRID_FLAGS = ("--grid", "--g-grid")


def _join_grid_values(argv):
    # "--grid -10:10:201" would otherwise be read as an unknown option
    out, it = [], iter(argv)
    for tok in it:
        if tok in _GRID_FLAGS:
            out.append(f"{tok}={next(it, '')}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    ap = build_parser()
    argv = _join_grid_values(sys.argv[1:] if argv is None else list(argv))
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text = args.func(args)
    except (UsageError, DomainError) as exc:
        print(f"nlde: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"nlde: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
