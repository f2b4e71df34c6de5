"""Command-line front end.

Exit codes: 0 success, 2 configuration error, 3 numerical singularity,
4 validation failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analogy import coordinate_system, expand_couplings, to_norton, translate_force_current
from .config import RunConfig, example_config_text, load_config
from .errors import AnalogueError, ConfigError, ParameterError, SingularSystemError
from .formatting import fmt
from .netlist_io import write_netlist
from .oracle import closed_form_velocity_phasors, spectral_velocities, validate
from .solver import (
    RESIDUAL_TOL,
    branch_currents,
    kcl_check,
    solve,
    sweep,
    sweep_csv,
    to_sinusoid,
)

EXIT_OK, EXIT_CONFIG, EXIT_SINGULAR, EXIT_VALIDATION = 0, 2, 3, 4


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _out_path(args, cfg: RunConfig, key: str):
    return args.output or cfg.output.get(key)


def _solve_config(cfg: RunConfig):
    model = cfg.build_model()
    exc = cfg.build_excitation(model)
    raw = translate_force_current(model, exc)
    net = to_norton(raw, exc.omega)
    return model, exc, raw, solve(coordinate_system(net, exc.omega))


def render_translate(cfg: RunConfig, pi: bool = False, norton: bool = False) -> str:
    model = cfg.build_model()
    exc = cfg.build_excitation(model)
    net = translate_force_current(model, exc)
    if pi:
        net = expand_couplings(net)
    if norton:
        net = to_norton(net, exc.omega)
    net = dataclasses.replace(net, title=cfg.kind)
    return write_netlist(net, exc.omega if norton else None)


def render_solve(cfg: RunConfig, with_currents: bool = False) -> str:
    model, exc, raw, sol = _solve_config(cfg)
    lines = [f"# omega = {fmt(sol.omega)} rad/s", "node,re,im,rms,phase_deg"]
    for lab, u in zip(sol.node_order, sol.node_voltages):
        s = to_sinusoid(u, sol.omega)
        lines.append(f"{lab},{fmt(u.real)},{fmt(u.imag)},{fmt(s.rms)},{fmt(s.phase_deg)}")
    for lab, u in zip(sol.node_order, sol.node_voltages):
        lines.append(f"# u_{lab}(t) = {to_sinusoid(u, sol.omega)}")
    if with_currents:
        cur = branch_currents(raw, sol, sol.omega)
        lines.append("branch,re,im,abs")
        for name, c in cur.items():
            lines.append(f"{name},{fmt(c.real)},{fmt(c.imag)},{fmt(abs(c))}")
        res = kcl_check(raw, cur)
        lines.append(f"# KCL residual {fmt(res)} relative ({'ok' if res <= RESIDUAL_TOL else 'VIOLATED'})")
    return "\n".join(lines) + "\n"


def run_validation(cfg: RunConfig, mechanical_cfg: RunConfig | None = None):
    """Electrical path on ``cfg`` against both mechanical paths on ``mechanical_cfg``."""
    mechanical_cfg = mechanical_cfg or cfg
    model, _, _, sol = _solve_config(cfg)
    mmodel = mechanical_cfg.build_model()
    mexc = mechanical_cfg.build_excitation(mmodel)
    tol, ptol = cfg.solver["tolerance"], cfg.solver["phase_tolerance"]
    series = spectral_velocities(mmodel, mexc, cfg.solver["periods"], cfg.solver["samples"])
    closed = closed_form_velocity_phasors(mmodel, mexc)
    return (
        validate(sol, series, model, tol, ptol),
        validate(sol, closed, model, tol, ptol),
    )


def render_validate(spectral, closed) -> str:
    return (
        "# electrical circuit vs spectral reconstruction\n" + spectral.table()
        + "# electrical circuit vs closed-form frequency response\n" + closed.table()
    )


def sweep_omegas(cfg: RunConfig, args) -> np.ndarray:
    if args.speeds is not None:
        if cfg.kind == "two_dof":
            raise ConfigError("--speeds needs a road excitation")
        lo, hi, n = args.speeds
        speeds = np.linspace(float(lo), float(hi), int(n)) / 3.6
        return 2 * np.pi * speeds / cfg.excitation["lambda"]
    lo = args.w_from if args.w_from is not None else cfg.solver.get("sweep_from")
    hi = args.w_to if args.w_to is not None else cfg.solver.get("sweep_to")
    n = args.points if args.points is not None else cfg.solver.get("sweep_points")
    if lo is None or hi is None or n is None:
        raise ConfigError("sweep range missing: give --from/--to/--points or --speeds")
    if lo <= 0 or hi <= 0 or int(n) < 1:
        raise ConfigError("sweep range must be positive")
    return np.linspace(lo, hi, int(n))


def render_sweep(cfg: RunConfig, omegas) -> str:
    model = cfg.build_model()
    exc = cfg.build_excitation(model)
    rows = sweep(model, exc, omegas)
    for r in rows:
        if r.error:
            print(f"warning: omega={fmt(r.omega)}: {r.error}", file=sys.stderr)
    return sweep_csv(rows)


def render_timeseries(cfg: RunConfig, periods=None, samples=None) -> str:
    model = cfg.build_model()
    exc = cfg.build_excitation(model)
    ts = spectral_velocities(
        model, exc, periods or cfg.solver["periods"], samples or cfg.solver["samples"]
    )
    lines = ["t_s," + ",".join(ts.labels)]
    for k, t in enumerate(ts.t):
        lines.append(fmt(t, 10) + "," + ",".join(fmt(x) for x in ts.samples[:, k]))
    lines.append("rms," + ",".join(fmt(x) for x in ts.rms()))
    return "\n".join(lines) + "\n"


def _parse_perturb(text):
    key, sep, factor = text.partition("=")
    try:
        return key.strip(), float(factor)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected KEY=FACTOR, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="vehanalog",
        description="Force-current electrical analogues of vertical vehicle models.",
    )
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("config", help="run configuration file")
        p.add_argument("-o", "--output", help="output file (default: [output] entry or stdout)")
        return p

    p = add("translate", "write the analogue netlist")
    p.add_argument("--pi", action="store_true", help="expand coupled capacitors into Pi networks")
    p.add_argument("--norton", action="store_true", help="replace voltage sources by Norton equivalents")

    p = add("solve", "harmonic steady-state node voltages")
    p.add_argument("--branch-currents", action="store_true", help="also print every branch current")

    p = add("validate", "compare the circuit against the mechanical oracles")
    p.add_argument("--tolerance", type=float, help="relative rms tolerance (default from config)")
    p.add_argument("--perturb", type=_parse_perturb, metavar="KEY=FACTOR",
                   help="scale one constant on the mechanical side only")

    p = add("sweep", "frequency or speed sweep as CSV")
    p.add_argument("--from", dest="w_from", type=float, help="first omega [rad/s]")
    p.add_argument("--to", dest="w_to", type=float, help="last omega [rad/s]")
    p.add_argument("--points", type=int, help="number of frequencies")
    p.add_argument("--speeds", nargs=3, metavar=("KMH_FROM", "KMH_TO", "N"),
                   help="sweep vehicle speed in km/h instead")

    p = add("timeseries", "steady-state velocity samples as CSV")
    p.add_argument("--periods", type=int)
    p.add_argument("--samples", type=int)

    p = sub.add_parser("example-config", help="print a bundled configuration")
    p.add_argument("name", nargs="?", default="table2", choices=("table2", "two_dof"))
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "example-config":
        sys.stdout.write(example_config_text(args.name))
        return EXIT_OK
    try:
        cfg = load_config(args.config)
        if args.command == "translate":
            _emit(render_translate(cfg, args.pi, args.norton), _out_path(args, cfg, "netlist"))
        elif args.command == "solve":
            _emit(render_solve(cfg, args.branch_currents), _out_path(args, cfg, "solve"))
        elif args.command == "validate":
            if args.tolerance is not None:
                cfg.solver["tolerance"] = args.tolerance
            mech = cfg.perturbed(*args.perturb) if args.perturb else None
            spectral, closed = run_validation(cfg, mech)
            _emit(render_validate(spectral, closed), _out_path(args, cfg, "validate"))
            if not (spectral.passed and closed.passed):
                return EXIT_VALIDATION
        elif args.command == "sweep":
            _emit(render_sweep(cfg, sweep_omegas(cfg, args)), _out_path(args, cfg, "sweep"))
        elif args.command == "timeseries":
            _emit(render_timeseries(cfg, args.periods, args.samples), _out_path(args, cfg, "timeseries"))
    except (ConfigError, ParameterError) as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except SingularSystemError as err:
        print(f"singular system: {err}", file=sys.stderr)
        return EXIT_SINGULAR
    except AnalogueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
