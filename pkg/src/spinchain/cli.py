"""Command-line interface.

Four subcommands:

    run         one ensemble point; stats as CSV on stdout and
                optionally to a file
    sweep       a grid of points to a CSV table
    trajectory  time-resolved site populations of a single run
    verify      fast built-in self checks (no Monte Carlo)

Values resolve in three layers: built-in defaults, then a JSON config
file given with --config, then explicit flags.  Commands that write a
file also write ``<file>.manifest.json`` holding the fully resolved
config; passing a manifest back through --config reproduces the run.
"""

from __future__ import annotations

import argparse
import sys
from typing import Any

import numpy as np

from .chain import ChainConfig, phase_distance, protocol_phase, spectrum
from .disorder import DisorderSpec, sample_realization
from .ensemble import ExperimentConfig, SweepRow, run_point, run_sweep
from .io import (
    experiment_from_dict,
    experiment_to_dict,
    load_config,
    sweep_grid_from_dict,
    write_manifest,
    write_stats_csv,
    write_trajectory_csv,
)
from .propagate import PropagationSettings, propagate_schedule, propagate_static
from .protocols import (
    PROTOCOL_KINDS,
    ProtocolSpec,
    analytic_spin_coupling_amplitudes,
    dark_state,
    schedule_for,
    spin_coupling_profile,
)

__all__ = ["main"]


def _add_point_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file; flags override its values")
    p.add_argument("--protocol", choices=PROTOCOL_KINDS)
    p.add_argument("--n", type=int, help="number of chain sites")
    p.add_argument("--j-max", type=float, help="coupling cap, sets the units")
    p.add_argument("--sigma-h", type=float, help="diagonal disorder width")
    p.add_argument("--sigma-j", type=float, help="relative coupling disorder width")
    p.add_argument("--realizations", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--adiabatic-c", type=float, help="duration constant C")
    p.add_argument(
        "--adiabatic-sigma-ratio", type=float, help="ramp width over duration"
    )
    p.add_argument("--dt-max", type=float, help="step cap for smooth schedules")
    p.add_argument("--step-method", choices=("auto", "eigh", "chebyshev"))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinchain",
        description="Single-excitation transfer in disordered XX spin chains",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one ensemble point")
    _add_point_flags(run_p)
    run_p.add_argument("--workers", type=int, help="process count for realizations")
    run_p.add_argument("--output", help="also write the stats row to this CSV file")

    sweep_p = sub.add_parser("sweep", help="run a parameter grid")
    _add_point_flags(sweep_p)
    sweep_p.add_argument("--workers", type=int)
    sweep_p.add_argument("--output", help="CSV destination (default stdout)")

    traj_p = sub.add_parser("trajectory", help="record one run over time")
    _add_point_flags(traj_p)
    traj_p.add_argument(
        "--noiseless", action="store_true", help="force both disorder widths to zero"
    )
    traj_p.add_argument(
        "--realization-index",
        type=int,
        default=0,
        help="which disorder realization to record",
    )
    traj_p.add_argument(
        "--points", type=int, default=500, help="approximate rows to record"
    )
    traj_p.add_argument("--output", help="CSV destination (default stdout)")

    sub.add_parser("verify", help="run fast built-in self checks")
    return parser


_FLAG_KEYS = (
    ("protocol", "protocol"),
    ("n", "n"),
    ("j_max", "j_max"),
    ("sigma_h", "sigma_h"),
    ("sigma_j", "sigma_j"),
    ("realizations", "realizations"),
    ("seed", "seed"),
    ("adiabatic_c", "adiabatic_c"),
    ("adiabatic_sigma_ratio", "adiabatic_sigma_ratio"),
    ("dt_max", "dt_max"),
    ("step_method", "step_method"),
)


def _resolve_dict(args: argparse.Namespace) -> dict[str, Any]:
    data: dict[str, Any] = {}
    if args.config:
        data.update(load_config(args.config))
    for attr, key in _FLAG_KEYS:
        value = getattr(args, attr, None)
        if value is not None:
            data[key] = value
    return data


def _row_for(config: ExperimentConfig, stats) -> SweepRow:
    return SweepRow(
        protocol=config.protocol.kind,
        n_sites=config.chain.n_sites,
        sigma_h=config.disorder.sigma_h,
        sigma_j=config.disorder.sigma_j,
        realizations=config.realizations,
        seed=config.seed,
        stats=stats,
    )


def _cmd_run(args: argparse.Namespace) -> int:
    data = _resolve_dict(args)
    config = experiment_from_dict(data)
    stats = run_point(config, workers=args.workers)
    row = _row_for(config, stats)
    write_stats_csv([row], sys.stdout)
    if args.output:
        write_stats_csv([row], args.output)
        write_manifest(args.output + ".manifest.json", experiment_to_dict(config))
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    data = _resolve_dict(args)
    base = experiment_from_dict(data)
    grid = sweep_grid_from_dict(data)
    rows = run_sweep(grid, base, workers=args.workers)
    if args.output:
        write_stats_csv(rows, args.output)
        manifest = experiment_to_dict(base)
        manifest["protocols"] = [s.kind for s in grid.protocols]
        manifest["n_values"] = list(grid.n_values)
        manifest["sigma_h_values"] = list(grid.sigma_h_values)
        manifest["sigma_j_values"] = list(grid.sigma_j_values)
        write_manifest(args.output + ".manifest.json", manifest)
    else:
        write_stats_csv(rows, sys.stdout)
    return 0


def _cmd_trajectory(args: argparse.Namespace) -> int:
    data = _resolve_dict(args)
    if args.noiseless:
        data["sigma_h"] = 0.0
        data["sigma_j"] = 0.0
    config = experiment_from_dict(data)
    schedule = schedule_for(config.chain, config.protocol)
    realization = sample_realization(
        config.disorder, config.chain, config.seed, args.realization_index
    )
    settings = PropagationSettings(
        dt_max=config.settings.dt_max,
        step_method="eigh",
        record_trajectory=True,
        trajectory_points=args.points,
    )
    psi0 = np.zeros(config.chain.n_sites, dtype=complex)
    psi0[0] = 1.0
    _, traj = propagate_schedule(schedule, realization, psi0, settings)
    if args.output:
        write_trajectory_csv(traj, args.output, schedule=schedule)
        manifest = experiment_to_dict(config)
        manifest["realization_index"] = args.realization_index
        manifest["trajectory_points"] = args.points
        write_manifest(args.output + ".manifest.json", manifest)
    else:
        write_trajectory_csv(traj, sys.stdout, schedule=schedule)
    return 0


def _verify_checks():
    """Yield (name, callable) pairs; each callable asserts one property."""

    def noiseless_transfer(kind: str, n: int) -> None:
        chain = ChainConfig(n_sites=n)
        schedule = schedule_for(chain, ProtocolSpec(kind=kind))
        realization = sample_realization(DisorderSpec(), chain, 0, 0)
        psi0 = np.zeros(n, dtype=complex)
        psi0[0] = 1.0
        psi, _ = propagate_schedule(schedule, realization, psi0)
        a_n = psi[-1]
        assert abs(a_n) ** 2 >= 1 - 1e-9, f"|A_N|^2 = {abs(a_n)**2}"
        err = phase_distance(float(np.angle(a_n)), protocol_phase(n))
        assert err < 1e-8, f"phase error {err}"

    def swap_15() -> None:
        noiseless_transfer("swap", 15)

    def swap_25() -> None:
        noiseless_transfer("swap", 25)

    def spin_coupling_15() -> None:
        noiseless_transfer("spin-coupling", 15)

    def spin_coupling_25() -> None:
        noiseless_transfer("spin-coupling", 25)

    def equidistant_spectrum() -> None:
        from .chain import build_hamiltonian

        config = ChainConfig(n_sites=25)
        couplings, j0 = spin_coupling_profile(config)
        h = build_hamiltonian(config, np.zeros(25), couplings)
        gaps = np.diff(spectrum(h))
        assert np.max(np.abs(gaps - 2 * j0)) < 1e-10

    def homogeneous_spectrum() -> None:
        from .chain import build_hamiltonian

        n = 25
        h = build_hamiltonian(ChainConfig(n_sites=n), np.zeros(n), np.ones(n - 1))
        k = np.arange(1, n + 1)
        expected = -2.0 * np.cos(k * np.pi / (n + 1))
        assert np.max(np.abs(spectrum(h) - np.sort(expected))) < 1e-10

    def closed_form_amplitudes() -> None:
        from .chain import build_hamiltonian

        config = ChainConfig(n_sites=15)
        couplings, _ = spin_coupling_profile(config)
        h = build_hamiltonian(config, np.zeros(15), couplings)
        psi0 = np.zeros(15, dtype=complex)
        psi0[0] = 1.0
        rng = np.random.default_rng(7)
        for t in rng.uniform(0, 40, size=10):
            direct = propagate_static(h, psi0, float(t))
            closed = analytic_spin_coupling_amplitudes(config, float(t))
            assert np.max(np.abs(direct - closed)) < 1e-8

    def dark_state_nullity() -> None:
        from .chain import build_hamiltonian

        rng = np.random.default_rng(11)
        couplings = rng.uniform(0.2, 1.0, size=6)
        v = dark_state(couplings)
        h = build_hamiltonian(ChainConfig(n_sites=7), np.zeros(7), couplings)
        assert np.linalg.norm(h.matrix() @ v) < 1e-10

    return [
        ("noiseless swap transfer N=15", swap_15),
        ("noiseless swap transfer N=25", swap_25),
        ("noiseless spin-coupling transfer N=15", spin_coupling_15),
        ("noiseless spin-coupling transfer N=25", spin_coupling_25),
        ("equidistant spin-coupling spectrum", equidistant_spectrum),
        ("homogeneous-chain cosine spectrum", homogeneous_spectrum),
        ("closed-form amplitude agreement", closed_form_amplitudes),
        ("dark state is a null vector", dark_state_nullity),
    ]


def _cmd_verify(_args: argparse.Namespace) -> int:
    failures = 0
    for name, check in _verify_checks():
        try:
            check()
        except Exception as e:  # report and continue
            failures += 1
            print(f"FAIL {name}: {e}")
        else:
            print(f"PASS {name}")
    if failures:
        print(f"{failures} check(s) failed")
        return 1
    print("all checks passed")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "run": _cmd_run,
        "sweep": _cmd_sweep,
        "trajectory": _cmd_trajectory,
        "verify": _cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
