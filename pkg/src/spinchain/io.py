"""Config files, run manifests, and CSV output.

Configs are flat JSON with the same keys the CLI exposes as flags.
Every file-producing command also writes a manifest: the fully resolved
config plus a ``_meta`` block (tool version, timestamp).  A manifest is
itself a valid config, so re-running with ``--config manifest.json``
regenerates the same outputs; only ``_meta`` differs.

Floats in CSV files are rendered with 17 significant digits, which
round-trips float64 exactly.
"""

from __future__ import annotations

import csv
import json
from datetime import datetime, timezone
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path
from typing import Any

import numpy as np

from .chain import ChainConfig
from .disorder import DisorderSpec
from .ensemble import ExperimentConfig, SweepRow
from .propagate import PropagationSettings, Trajectory
from .protocols import ADIABATIC, CouplingSchedule, ProtocolSpec

try:
    TOOL_VERSION = version("spinchain")
except PackageNotFoundError:
    TOOL_VERSION = "0+unknown"

__all__ = [
    "TOOL_VERSION",
    "STATS_COLUMNS",
    "experiment_to_dict",
    "experiment_from_dict",
    "load_config",
    "write_manifest",
    "write_stats_csv",
    "read_stats_csv",
    "write_trajectory_csv",
    "sweep_grid_from_dict",
    "format_float",
]

STATS_COLUMNS = (
    "protocol",
    "N",
    "sigma_h",
    "sigma_j",
    "realizations",
    "mean_prob",
    "stderr_prob",
    "mean_fid",
    "stderr_fid",
    "seed",
)

_META_KEY = "_meta"


def format_float(x: float) -> str:
    """Round-trip exact decimal rendering of a float64."""
    return f"{float(x):.17g}"


def experiment_to_dict(config: ExperimentConfig) -> dict[str, Any]:
    """Flatten an experiment config into plain JSON-ready keys."""
    return {
        "protocol": config.protocol.kind,
        "n": config.chain.n_sites,
        "j_max": config.chain.j_max,
        "sigma_h": config.disorder.sigma_h,
        "sigma_j": config.disorder.sigma_j,
        "realizations": config.realizations,
        "seed": config.seed,
        "adiabatic_c": config.protocol.adiabatic_c,
        "adiabatic_sigma_ratio": config.protocol.adiabatic_sigma_ratio,
        "dt_max": config.settings.dt_max,
        "step_method": config.settings.step_method,
    }


def experiment_from_dict(data: dict[str, Any]) -> ExperimentConfig:
    """Rebuild an experiment config; inverse of ``experiment_to_dict``.

    Keys beyond the config schema (for example a manifest's ``_meta``
    block or sweep axis lists) are ignored.
    """
    protocol = ProtocolSpec(
        kind=data.get("protocol", ADIABATIC),
        adiabatic_c=float(data.get("adiabatic_c", 8.0)),
        adiabatic_sigma_ratio=float(data.get("adiabatic_sigma_ratio", 0.125)),
    )
    chain = ChainConfig(
        n_sites=int(data.get("n", 25)),
        j_max=float(data.get("j_max", 1.0)),
    )
    disorder = DisorderSpec(
        sigma_h=float(data.get("sigma_h", 0.0)),
        sigma_j=float(data.get("sigma_j", 0.0)),
    )
    settings = PropagationSettings(
        dt_max=float(data.get("dt_max", 0.01)),
        step_method=str(data.get("step_method", "auto")),
    )
    return ExperimentConfig(
        chain=chain,
        protocol=protocol,
        disorder=disorder,
        realizations=int(data.get("realizations", 1000)),
        seed=int(data.get("seed", 0)),
        settings=settings,
    )


def load_config(path: str | Path) -> dict[str, Any]:
    """Read a JSON config (or manifest) file into a dict."""
    with open(path, encoding="utf-8") as f:
        data = json.load(f)
    if not isinstance(data, dict):
        raise ValueError(f"config file {path} must contain a JSON object")
    return data


def write_manifest(path: str | Path, config: dict[str, Any]) -> None:
    """Write the resolved config plus tool version and timestamp."""
    payload = dict(config)
    payload[_META_KEY] = {
        "tool_version": TOOL_VERSION,
        "created": datetime.now(timezone.utc).isoformat(),
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2, sort_keys=False)
        f.write("\n")


def _stats_record(row: SweepRow) -> dict[str, str]:
    return {
        "protocol": row.protocol,
        "N": str(row.n_sites),
        "sigma_h": format_float(row.sigma_h),
        "sigma_j": format_float(row.sigma_j),
        "realizations": str(row.realizations),
        "mean_prob": format_float(row.stats.mean_probability),
        "stderr_prob": format_float(row.stats.stderr_probability),
        "mean_fid": format_float(row.stats.mean_fidelity),
        "stderr_fid": format_float(row.stats.stderr_fidelity),
        "seed": str(row.seed),
    }


def write_stats_csv(rows, dest) -> None:
    """Write ensemble rows; ``dest`` is a path or an open text stream."""
    if hasattr(dest, "write"):
        _write_stats(rows, dest)
    else:
        with open(dest, "w", encoding="utf-8", newline="") as f:
            _write_stats(rows, f)


def _write_stats(rows, stream) -> None:
    writer = csv.DictWriter(stream, fieldnames=STATS_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(_stats_record(row))


def read_stats_csv(path: str | Path) -> list[dict[str, Any]]:
    """Parse a stats CSV back into typed dicts (floats exact)."""
    out = []
    with open(path, encoding="utf-8", newline="") as f:
        for rec in csv.DictReader(f):
            out.append(
                {
                    "protocol": rec["protocol"],
                    "N": int(rec["N"]),
                    "sigma_h": float(rec["sigma_h"]),
                    "sigma_j": float(rec["sigma_j"]),
                    "realizations": int(rec["realizations"]),
                    "mean_prob": float(rec["mean_prob"]),
                    "stderr_prob": float(rec["stderr_prob"]),
                    "mean_fid": float(rec["mean_fid"]),
                    "stderr_fid": float(rec["stderr_fid"]),
                    "seed": int(rec["seed"]),
                }
            )
    return out


def write_trajectory_csv(
    traj: Trajectory,
    dest,
    schedule: CouplingSchedule | None = None,
) -> None:
    """Write site populations over time, one row per recorded instant.

    Columns are t, p1..pN.  When the schedule is the smooth-ramp kind,
    two extra columns j_odd and j_even give the nominal ramp values at
    each instant.
    """
    populations = np.abs(traj.states) ** 2
    n = populations.shape[1]
    header = ["t"] + [f"p{j}" for j in range(1, n + 1)]
    ramp = schedule.ramp if schedule is not None else None
    if ramp is not None:
        header += ["j_odd", "j_even"]

    def emit(stream) -> None:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(header)
        for i, t in enumerate(traj.times):
            row = [format_float(t)] + [format_float(p) for p in populations[i]]
            if ramp is not None:
                j_odd, j_even = ramp.odd_even(float(t))
                row += [format_float(j_odd), format_float(j_even)]
            writer.writerow(row)

    if hasattr(dest, "write"):
        emit(dest)
    else:
        with open(dest, "w", encoding="utf-8", newline="") as f:
            emit(f)


def sweep_grid_from_dict(data: dict[str, Any]):
    """Extract sweep axes from a config dict, applying sweep defaults.

    Axes may be given as lists (``protocols``, ``n_values``,
    ``sigma_h_values``, ``sigma_j_values``).  A singular key narrows
    the matching axis to that one value, so ``--protocol`` or
    ``--sigma-h`` pin an axis while the others sweep.  Fully absent
    axes default to all three protocols, the single length ``n``, and
    disorder widths 0..0.3 in steps of 0.02.
    """
    from .ensemble import SweepGrid
    from .protocols import PROTOCOL_KINDS

    default_sigmas = tuple(np.round(np.arange(0.0, 0.3 + 1e-9, 0.02), 10))

    def axis(plural: str, singular: str, fallback) -> tuple:
        if plural in data:
            return tuple(data[plural])
        if singular in data:
            return (data[singular],)
        return tuple(fallback)

    kinds = axis("protocols", "protocol", PROTOCOL_KINDS)
    c = float(data.get("adiabatic_c", 8.0))
    ratio = float(data.get("adiabatic_sigma_ratio", 0.125))
    protocols = tuple(
        ProtocolSpec(kind=k, adiabatic_c=c, adiabatic_sigma_ratio=ratio)
        for k in kinds
    )
    n_values = tuple(int(n) for n in axis("n_values", "n", [25]))
    sigma_h_values = tuple(float(s) for s in axis("sigma_h_values", "sigma_h", default_sigmas))
    sigma_j_values = tuple(float(s) for s in axis("sigma_j_values", "sigma_j", default_sigmas))
    return SweepGrid(
        protocols=protocols,
        n_values=n_values,
        sigma_h_values=sigma_h_values,
        sigma_j_values=sigma_j_values,
    )
