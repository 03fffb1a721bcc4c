"""Command-line front end: spectra, eigenfunctions, traces, figure data and verification."""

import argparse
import sys
from pathlib import Path
from typing import Any

import numpy as np

from src.analytic_spectrum.equations import Family
from src.analytic_spectrum.schemas import EigenfunctionVariant, SpectrumEntry
from src.analytic_spectrum.service import analytic_eigenpair, family_spectrum, spectrum
from src.cli.csv_export import format_value, render_csv, write_csv, write_text
from src.cli.error_handler import EXIT_FAILURE, EXIT_OK, handle_lab_error
from src.config import settings
from src.confined_basis.service import PlaneWaveBasis
from src.core.config import SystemConfig, load_config_file, make_config
from src.core.error_codes import ErrorCode
from src.core.exceptions import LabError, LookupFailure
from src.core.grid import PositionGrid, build_grid
from src.core.schemas import Branch, EigenPair
from src.dynamics.service import collapse_time, density_snapshots, trace_evolution
from src.logger import bind_run_context, get_logger
from src.verification.service import SUITES, run_all

logger = get_logger(__name__)

FIGURES: tuple[str, ...] = ("1a", "1b", "2a", "2b")
REFERENCE_GAMMA: float = 0.01
SNAPSHOT_TIMES: int = 101
FIGURE_STEPS: int = 256
DEFAULT_STEPS: int = 256

_PHYSICAL_FLAGS: tuple[str, ...] = ("gamma", "length_l", "mass_mu", "hbar")
_NUMERICAL_FLAGS: tuple[str, ...] = ("basis_cutoff", "grid_points", "root_tolerance")


def _load_config(args: argparse.Namespace, **pinned: Any) -> SystemConfig:
    """Config file values, overridden by flags, overridden by ``pinned``."""
    raw: dict[str, Any] = load_config_file(args.config) if args.config else {}
    overrides: dict[str, Any] = {
        key: getattr(args, key, None) for key in _PHYSICAL_FLAGS + _NUMERICAL_FLAGS
    }
    overrides.update(pinned)
    return make_config(raw, overrides)


def _grid(config: SystemConfig) -> PositionGrid:
    return build_grid(config.grid_points, config.length_l)


def _eigenpair(args: argparse.Namespace, config: SystemConfig, grid: PositionGrid) -> EigenPair:
    return analytic_eigenpair(
        None,
        args.n,
        Branch(args.branch),
        config,
        grid,
        EigenfunctionVariant(args.variant),
    )


def _cmd_roots(args: argparse.Namespace) -> int:
    config = _load_config(args)
    entries: list[SpectrumEntry] = family_spectrum(config, Family(args.case), args.count)
    write_csv(
        ("n", "r", "tau_plus"),
        [(entry.n, entry.r, entry.tau_plus) for entry in entries],
        config,
        args.out,
        {"case": args.case},
    )
    return EXIT_OK


def _cmd_spectrum(args: argparse.Namespace) -> int:
    config = _load_config(args)
    entries: list[SpectrumEntry] = spectrum(None, config, args.count)
    write_csv(
        ("n", "r", "tau_plus", "tau_minus", "parity", "family_index"),
        [
            (entry.n, entry.r, entry.tau_plus, entry.tau_minus, entry.parity, entry.family_index)
            for entry in entries
        ],
        config,
        args.out,
    )
    return EXIT_OK


def _cmd_eigenfunction(args: argparse.Namespace) -> int:
    config = _load_config(args, grid_points=args.grid)
    grid = _grid(config)
    pair: EigenPair = _eigenpair(args, config, grid)
    samples: np.ndarray = pair.eigenfunction.amplitudes
    write_csv(
        ("q", "re", "im", "abs2"),
        zip(
            grid.nodes.tolist(),
            samples.real.tolist(),
            samples.imag.tolist(),
            (np.abs(samples) ** 2).tolist(),
        ),
        config,
        args.out,
        {
            "n": args.n,
            "branch": pair.branch,
            "tau": pair.eigenvalue,
            "parity": pair.parity,
            "nodal": pair.nodal,
            "variant": args.variant,
        },
    )
    return EXIT_OK


def _cmd_evolve(args: argparse.Namespace) -> int:
    config = _load_config(args)
    grid = _grid(config)
    pair: EigenPair = _eigenpair(args, config, grid)
    basis = PlaneWaveBasis(config, grid)

    # The minus branch collapses at negative times
    t_max: float = args.t_max if args.t_max is not None else 2.0 * abs(pair.eigenvalue)
    window: tuple[float, float] = (0.0, t_max) if pair.branch is Branch.PLUS else (-t_max, 0.0)
    trace = trace_evolution(
        pair.eigenfunction,
        window,
        args.steps,
        basis,
        snapshots=args.snapshots is not None,
    )
    tau: float = collapse_time(pair.eigenfunction, basis, window)

    extra: dict[str, Any] = {"n": args.n, "branch": pair.branch, "tau": pair.eigenvalue, "collapse_time": tau}
    write_csv(
        ("t", "mean_q", "var_q", "density0"),
        zip(
            trace.times.tolist(),
            trace.mean_q.tolist(),
            trace.var_q.tolist(),
            trace.density_at_origin.tolist(),
        ),
        config,
        args.out,
        extra,
    )
    if args.snapshots is not None:
        _write_density_table(trace.times, trace.nodes, trace.snapshots, config, args.snapshots, extra)
    return EXIT_OK


def _write_density_table(
    times: np.ndarray,
    nodes: np.ndarray,
    density: np.ndarray,
    config: SystemConfig,
    out: Path,
    extra: dict[str, Any],
) -> None:
    """Wide CSV: one row per time, one column per grid node."""
    columns: list[str] = ["t"] + [f"q={format_value(q)}" for q in nodes.tolist()]
    rows = ([t] + row for t, row in zip(times.tolist(), density.tolist()))
    write_text(render_csv(columns, rows, config, extra), out)


def _figure_density(config: SystemConfig, n: int, out: Path) -> None:
    grid = _grid(config)
    basis = PlaneWaveBasis(config, grid)
    pair = analytic_eigenpair(None, n, Branch.PLUS, config, grid)
    times: np.ndarray = np.linspace(0.0, 2.0 * pair.eigenvalue, SNAPSHOT_TIMES)
    density: np.ndarray = density_snapshots(pair.eigenfunction, times, basis)
    _write_density_table(times, grid.nodes, density, config, out, {"n": n, "tau": pair.eigenvalue})


def _figure_moment(config: SystemConfig, column: str, out: Path) -> None:
    grid = _grid(config)
    basis = PlaneWaveBasis(config, grid)
    rows: list[tuple[int, float, float]] = []
    for n in (2, 6, 20):
        pair = analytic_eigenpair(None, n, Branch.PLUS, config, grid)
        trace = trace_evolution(pair.eigenfunction, (0.0, 2.0 * pair.eigenvalue), FIGURE_STEPS, basis)
        values: np.ndarray = trace.mean_q if column == "mean_q" else trace.var_q
        rows += [(n, t, v) for t, v in zip(trace.times.tolist(), values.tolist())]
    write_text(render_csv(("n", "t", column), rows, config, {"ns": "2;6;20"}), out)


def _cmd_figure(args: argparse.Namespace) -> int:
    if args.id not in FIGURES:
        raise LookupFailure(ErrorCode.UNKNOWN_FIGURE, f"unknown figure '{args.id}'", {"id": args.id})
    # Figures are pinned to gamma = 0.01 in natural units
    config = _load_config(args, gamma=REFERENCE_GAMMA, length_l=1.0, mass_mu=1.0, hbar=1.0)
    out_dir: Path = args.out or settings.output_dir

    targets: dict[str, Path] = {
        "1a": out_dir / "fig1a_density_n20.csv",
        "1b": out_dir / "fig1b_density_n21.csv",
        "2a": out_dir / "fig2a_mean_q.csv",
        "2b": out_dir / "fig2b_var_q.csv",
    }
    target: Path = targets[args.id]
    logger.info("Reproducing figure data", figure=args.id, path=str(target))
    if args.id == "1a":
        _figure_density(config, 20, target)
    elif args.id == "1b":
        _figure_density(config, 21, target)
    elif args.id == "2a":
        _figure_moment(config, "mean_q", target)
    else:
        _figure_moment(config, "var_q", target)
    print(target)
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    config = _load_config(args)
    suites: tuple[str, ...] | None = None if args.suite == "all" else (args.suite,)
    report = run_all(config, suites)
    target: Path = args.out or settings.report_path
    write_text(report.to_json() + "\n", target)

    failures = report.failures()
    for failure in failures:
        print(f"FAIL {failure.suite}/{failure.name}: metric={failure.metric} tolerance={failure.tolerance}")
    print(f"{len(report.results)} entries, {len(failures)} failed, report written to {target}")
    return EXIT_OK if report.passed else EXIT_FAILURE


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run("src.app:app", host=args.host, port=args.port)
    return EXIT_OK


def _numerical_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--config", type=Path, default=None, help="Flat key=value config file")
    parent.add_argument("--basis-cutoff", dest="basis_cutoff", type=int, default=None, help="Momentum modes N")
    parent.add_argument("--grid-points", dest="grid_points", type=int, default=None, help="Quadrature nodes M")
    parent.add_argument("--root-tolerance", dest="root_tolerance", type=float, default=None)
    return parent


def _physical_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--gamma", default=None, help="Boundary phase: number, pi/2, -pi/2 or 0")
    parent.add_argument("--length-l", dest="length_l", type=float, default=None)
    parent.add_argument("--mass-mu", dest="mass_mu", type=float, default=None)
    parent.add_argument("--hbar", type=float, default=None)
    return parent


def _eigenpair_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, required=True, help="Quantum number (1-based)")
    parser.add_argument("--branch", choices=[b.value for b in Branch], default=Branch.PLUS.value)
    parser.add_argument(
        "--variant",
        choices=[v.value for v in EigenfunctionVariant],
        default=EigenfunctionVariant.DERIVED.value,
        help="Closed form of the eigenfunction",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ctoa", description="Confined time-of-arrival operator lab")
    numerical = _numerical_parent()
    physical = _physical_parent()
    sub = parser.add_subparsers(dest="command", required=True)

    p_roots = sub.add_parser("roots", parents=[numerical, physical], help="Roots of the characteristic equation")
    p_roots.add_argument("--count", type=int, required=True)
    p_roots.add_argument("--case", choices=[f.value for f in Family], default=Family.MERGED.value)
    p_roots.add_argument("--out", type=Path, default=None)
    p_roots.set_defaults(func=_cmd_roots)

    p_spectrum = sub.add_parser("spectrum", parents=[numerical, physical], help="Eigenvalues with parity tags")
    p_spectrum.add_argument("--count", type=int, required=True)
    p_spectrum.add_argument("--out", type=Path, default=None)
    p_spectrum.set_defaults(func=_cmd_spectrum)

    p_eig = sub.add_parser("eigenfunction", parents=[numerical, physical], help="Normalized eigenfunction samples")
    _eigenpair_flags(p_eig)
    p_eig.add_argument("--grid", type=int, default=None, help="Quadrature nodes M")
    p_eig.add_argument("--out", type=Path, default=None)
    p_eig.set_defaults(func=_cmd_eigenfunction)

    p_evolve = sub.add_parser("evolve", parents=[numerical, physical], help="Evolution trace of an eigenfunction")
    _eigenpair_flags(p_evolve)
    p_evolve.add_argument("--t-max", dest="t_max", type=float, default=None, help="Window length (default 2|tau|)")
    p_evolve.add_argument("--steps", type=int, default=DEFAULT_STEPS)
    p_evolve.add_argument("--snapshots", type=Path, default=None, help="Also write densities over (t, q) here")
    p_evolve.add_argument("--out", type=Path, default=None)
    p_evolve.set_defaults(func=_cmd_evolve)

    p_figure = sub.add_parser("figure", parents=[numerical], help="Reproduce the data of one figure panel")
    p_figure.add_argument("--id", required=True, help="One of 1a, 1b, 2a, 2b")
    p_figure.add_argument("--out", type=Path, default=None, help="Target directory")
    p_figure.set_defaults(func=_cmd_figure)

    p_verify = sub.add_parser("verify", parents=[numerical, physical], help="Run the verification suites")
    p_verify.add_argument("--suite", choices=("all",) + SUITES, default="all")
    p_verify.add_argument("--out", type=Path, default=None, help="Report path")
    p_verify.set_defaults(func=_cmd_verify)

    p_serve = sub.add_parser("serve", help="Serve the HTTP API")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    bind_run_context(command=args.command)
    try:
        return int(args.func(args))
    except LabError as e:
        return handle_lab_error(e)
    except Exception as e:
        logger.error("Unexpected failure", command=args.command, error=str(e), exc_info=True)
        print(f"error [{ErrorCode.INTERNAL_ERROR.value}]: {e}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    raise SystemExit(main())
