"""Static Gaussian disorder with scheduling-independent seeding.

Two channels, both frozen for the duration of a run:

    diagonal      h_j ~ Normal(0, sigma_h^2) in units of j_max, applied to
                  interior sites only (the two end sites stay at zero so
                  the stored qubit does not dephase while it waits)
    off-diagonal  J_j -> J_j (1 + delta_j), delta_j ~ Normal(0, sigma_j^2)

Realization i of a run with master seed s is generated from a stream
seeded by the pair (s, i), so it comes out bit-identical no matter how
realizations are batched or distributed over workers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import ChainConfig

__all__ = [
    "DisorderSpec",
    "DisorderRealization",
    "sample_realization",
    "sample_block",
]

_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class DisorderSpec:
    """Disorder widths: sigma_h in units of j_max, sigma_j relative."""

    sigma_h: float = 0.0
    sigma_j: float = 0.0

    def __post_init__(self) -> None:
        if self.sigma_h < 0 or self.sigma_j < 0:
            raise ValueError(
                f"disorder widths must be nonnegative, got "
                f"({self.sigma_h}, {self.sigma_j})"
            )

    @property
    def is_noiseless(self) -> bool:
        return self.sigma_h == 0.0 and self.sigma_j == 0.0


@dataclass(frozen=True)
class DisorderRealization:
    """One concrete sample: on-site energies and coupling factors (1 + delta)."""

    onsite: np.ndarray
    coupling_factors: np.ndarray


def _stream(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence([seed & _SEED_MASK, index])
    )


def sample_realization(
    spec: DisorderSpec,
    config: ChainConfig,
    seed: int,
    index: int,
) -> DisorderRealization:
    """Draw realization number ``index`` of the stream for ``seed``.

    The same (seed, index) pair always yields the same sample.  Both
    channels consume their draws unconditionally (scaling by sigma
    afterwards), so a realization keeps its identity when one channel
    is switched off.
    """
    n = config.n_sites
    rng = _stream(seed, index)
    onsite = np.zeros(n)
    onsite[1:-1] = spec.sigma_h * config.j_max * rng.standard_normal(n - 2)
    factors = 1.0 + spec.sigma_j * rng.standard_normal(n - 1)
    return DisorderRealization(onsite=onsite, coupling_factors=factors)


def sample_block(
    spec: DisorderSpec,
    config: ChainConfig,
    seed: int,
    start: int,
    stop: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Stack realizations start..stop-1 into (R, N) and (R, N-1) arrays."""
    n = config.n_sites
    count = stop - start
    onsite = np.empty((count, n))
    factors = np.empty((count, n - 1))
    for i in range(count):
        r = sample_realization(spec, config, seed, start + i)
        onsite[i] = r.onsite
        factors[i] = r.coupling_factors
    return onsite, factors
