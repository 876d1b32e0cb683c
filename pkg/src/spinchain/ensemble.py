"""Monte Carlo ensembles over disorder realizations and parameter sweeps.

A point is (protocol, N, sigma_h, sigma_j, realizations, seed).  Its
realizations are processed in fixed blocks of ``CHUNK``; each block is a
pure function of the experiment config and the block bounds, so results
are bit-identical whether blocks run sequentially or on a process pool,
and for any worker count.  Statistics are reduced in realization order.

Sweep points derive their seeds from the master seed and the point
coordinates, never from execution order, so any sub-grid of a sweep
reproduces exactly the values the full grid would produce.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .chain import ChainConfig, mean_fidelity_array, protocol_phase
from .disorder import DisorderSpec, sample_block
from .propagate import PropagationSettings, propagate_block
from .protocols import ADIABATIC, PROTOCOL_KINDS, ProtocolSpec, schedule_for

__all__ = [
    "CHUNK",
    "ExperimentConfig",
    "EnsembleStats",
    "SweepGrid",
    "SweepRow",
    "run_point",
    "run_sweep",
    "point_samples",
    "derive_point_seed",
    "resolve_workers",
]

CHUNK = 64

WORKERS_ENV = "SPINCHAIN_WORKERS"

_SEED_MASK = (1 << 64) - 1

_PROTOCOL_TAG = {kind: tag for tag, kind in enumerate(PROTOCOL_KINDS, start=1)}


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to reproduce one ensemble point."""

    chain: ChainConfig
    protocol: ProtocolSpec
    disorder: DisorderSpec = DisorderSpec()
    realizations: int = 1000
    seed: int = 0
    settings: PropagationSettings = field(default_factory=PropagationSettings)

    def __post_init__(self) -> None:
        if self.realizations < 1:
            raise ValueError(
                f"realizations must be at least 1, got {self.realizations}"
            )


@dataclass(frozen=True)
class EnsembleStats:
    """Sample statistics of transfer probability and mean fidelity."""

    mean_probability: float
    mean_fidelity: float
    std_probability: float
    std_fidelity: float
    stderr_probability: float
    stderr_fidelity: float
    count: int


@dataclass(frozen=True)
class SweepRow:
    """One grid point of a sweep with its resolved seed and statistics."""

    protocol: str
    n_sites: int
    sigma_h: float
    sigma_j: float
    realizations: int
    seed: int
    stats: EnsembleStats


@dataclass(frozen=True)
class SweepGrid:
    """Cartesian grid: protocols x chain lengths x disorder widths."""

    protocols: tuple[ProtocolSpec, ...]
    n_values: tuple[int, ...]
    sigma_h_values: tuple[float, ...]
    sigma_j_values: tuple[float, ...]

    def __post_init__(self) -> None:
        if not (
            self.protocols
            and self.n_values
            and self.sigma_h_values
            and self.sigma_j_values
        ):
            raise ValueError("every sweep axis needs at least one value")
        for spec in self.protocols:
            if spec.kind == ADIABATIC:
                even = [n for n in self.n_values if n % 2 == 0]
                if even:
                    raise ValueError(
                        f"adiabatic protocol cannot run at even N {even}: "
                        "the dark state carrying the transfer needs odd N"
                    )


def resolve_workers(workers: int | None = None) -> int:
    """Explicit argument, then the SPINCHAIN_WORKERS variable, then CPU count."""
    if workers is not None:
        return max(1, workers)
    env = os.environ.get(WORKERS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError as e:
            raise ValueError(
                f"{WORKERS_ENV} must be an integer, got {env!r}"
            ) from e
    return os.cpu_count() or 1


def derive_point_seed(
    master_seed: int,
    protocol: str,
    n_sites: int,
    sigma_h: float,
    sigma_j: float,
) -> int:
    """Deterministic per-point seed from the master seed and coordinates.

    The disorder widths enter through their float64 bit patterns (with
    negative zero normalized away), so any representable width gets its
    own stream and equal widths always agree.
    """
    if protocol not in _PROTOCOL_TAG:
        raise ValueError(f"unknown protocol {protocol!r}")
    entropy = [
        master_seed & _SEED_MASK,
        _PROTOCOL_TAG[protocol],
        n_sites,
        int(np.float64(sigma_h + 0.0).view(np.uint64)),
        int(np.float64(sigma_j + 0.0).view(np.uint64)),
    ]
    seq = np.random.SeedSequence(entropy)
    return int(seq.generate_state(1, np.uint64)[0])


def _chunk_bounds(realizations: int) -> list[tuple[int, int]]:
    return [
        (start, min(start + CHUNK, realizations))
        for start in range(0, realizations, CHUNK)
    ]


def _run_chunk(
    config: ExperimentConfig, start: int, stop: int
) -> tuple[np.ndarray, np.ndarray]:
    """Evolve realizations start..stop-1 and return their metrics.

    Module-level so process pool workers can receive it; a pure
    function of its arguments.
    """
    schedule = schedule_for(config.chain, config.protocol)
    onsite, factors = sample_block(
        config.disorder, config.chain, config.seed, start, stop
    )
    finals = propagate_block(schedule, onsite, factors, config.settings)
    a_n = finals[:, -1]
    prob = np.minimum(np.abs(a_n) ** 2, 1.0)
    fid = mean_fidelity_array(a_n, protocol_phase(config.chain.n_sites))
    return prob, fid


def point_samples(
    config: ExperimentConfig, workers: int | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Per-realization (probability, fidelity) arrays in index order."""
    # Validate the protocol/chain combination before any work starts.
    schedule_for(config.chain, config.protocol)
    bounds = _chunk_bounds(config.realizations)
    n_workers = resolve_workers(workers)
    if n_workers == 1 or len(bounds) == 1:
        parts = [_run_chunk(config, start, stop) for start, stop in bounds]
    else:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            parts = list(
                pool.map(
                    _run_chunk,
                    [config] * len(bounds),
                    [b[0] for b in bounds],
                    [b[1] for b in bounds],
                )
            )
    prob = np.concatenate([p for p, _ in parts])
    fid = np.concatenate([f for _, f in parts])
    return prob, fid


def _stats_from(prob: np.ndarray, fid: np.ndarray) -> EnsembleStats:
    count = len(prob)
    if count > 1:
        std_p = float(np.std(prob, ddof=1))
        std_f = float(np.std(fid, ddof=1))
    else:
        std_p = 0.0
        std_f = 0.0
    root = math.sqrt(count)
    return EnsembleStats(
        mean_probability=float(np.mean(prob)),
        mean_fidelity=float(np.mean(fid)),
        std_probability=std_p,
        std_fidelity=std_f,
        stderr_probability=std_p / root,
        stderr_fidelity=std_f / root,
        count=count,
    )


def run_point(
    config: ExperimentConfig, workers: int | None = None
) -> EnsembleStats:
    """Monte Carlo statistics for one (protocol, chain, disorder) point."""
    prob, fid = point_samples(config, workers)
    return _stats_from(prob, fid)


def run_sweep(
    grid: SweepGrid,
    base: ExperimentConfig,
    workers: int | None = None,
) -> list[SweepRow]:
    """Evaluate every grid point in deterministic order.

    Row order is protocols, then chain lengths, then sigma_h, then
    sigma_j, matching the CSV the IO layer writes.  Each point gets a
    seed derived from the master seed in ``base.seed``.
    """
    rows = []
    for spec in grid.protocols:
        for n in grid.n_values:
            for sigma_h in grid.sigma_h_values:
                for sigma_j in grid.sigma_j_values:
                    seed = derive_point_seed(
                        base.seed, spec.kind, n, sigma_h, sigma_j
                    )
                    config = replace(
                        base,
                        chain=ChainConfig(n_sites=n, j_max=base.chain.j_max),
                        protocol=spec,
                        disorder=DisorderSpec(sigma_h=sigma_h, sigma_j=sigma_j),
                        seed=seed,
                    )
                    stats = run_point(config, workers)
                    rows.append(
                        SweepRow(
                            protocol=spec.kind,
                            n_sites=n,
                            sigma_h=sigma_h,
                            sigma_j=sigma_j,
                            realizations=config.realizations,
                            seed=seed,
                            stats=stats,
                        )
                    )
    return rows
