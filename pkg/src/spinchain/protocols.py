"""Coupling schedules and closed-form references for three transfer protocols.

sequential SWAP
    The couplings are pulsed one at a time: J_j = j_max for a duration
    pi/(2 j_max), hopping the excitation site by site.  Total duration
    t_out = (N-1) pi / (2 j_max).

spin-coupling
    A static profile J_j = J0 sqrt(j (N-j)) whose spectrum is exactly
    equidistant, so the chain revives perfectly at t_out = pi/(2 J0).
    J0 is normalized so the largest coupling equals j_max.

adiabatic
    N odd only.  Smooth error-function ramps switch the even-numbered
    couplings off while the odd-numbered ones switch on, dragging the
    zero-energy dark state from site 1 to site N.  Slow by design:
    t_out = C N / j_max with C around 8.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import binom, erf

from .chain import ChainConfig

__all__ = [
    "SWAP",
    "SPIN_COUPLING",
    "ADIABATIC",
    "PROTOCOL_KINDS",
    "ProtocolSpec",
    "Segment",
    "AdiabaticRamp",
    "CouplingSchedule",
    "swap_schedule",
    "spin_coupling_profile",
    "spin_coupling_schedule",
    "adiabatic_schedule",
    "schedule_for",
    "analytic_spin_coupling_amplitudes",
    "dark_state",
]

SWAP = "swap"
SPIN_COUPLING = "spin-coupling"
ADIABATIC = "adiabatic"
PROTOCOL_KINDS = (SWAP, SPIN_COUPLING, ADIABATIC)


@dataclass(frozen=True)
class ProtocolSpec:
    """Protocol selection plus the two adiabatic shape parameters.

    adiabatic_c is the dimensionless duration constant (t_out = C N / j_max)
    and adiabatic_sigma_ratio fixes the ramp width sigma_t as a fraction
    of t_out.  Both are ignored by the other two protocols.
    """

    kind: str
    adiabatic_c: float = 8.0
    adiabatic_sigma_ratio: float = 0.125

    def __post_init__(self) -> None:
        if self.kind not in PROTOCOL_KINDS:
            raise ValueError(
                f"unknown protocol {self.kind!r}, expected one of {PROTOCOL_KINDS}"
            )
        if not self.adiabatic_c >= 1:
            raise ValueError(f"adiabatic_c must be >= 1, got {self.adiabatic_c}")
        if not 0 < self.adiabatic_sigma_ratio < 0.5:
            raise ValueError(
                "adiabatic_sigma_ratio must lie in (0, 1/2), got "
                f"{self.adiabatic_sigma_ratio}"
            )


@dataclass(frozen=True)
class Segment:
    """A time interval on which the nominal couplings are constant."""

    duration: float
    couplings: np.ndarray


@dataclass(frozen=True)
class AdiabaticRamp:
    """Parameters of the smooth odd/even coupling ramps.

    J_odd(t)  = j_max/2 [1 + erf((t - t_out/2 + 2 sigma_t) / (sqrt(2) sigma_t))]
    J_even(t) = j_max/2 [1 - erf((t - t_out/2 - 2 sigma_t) / (sqrt(2) sigma_t))]

    The even set starts near j_max and ends near zero; the odd set does
    the opposite.  The two families cross near t_out/2 at a value close
    to j_max, which keeps the spectral gap open while the dark state
    rotates.  The erf tails are finite, so J_odd(0) and J_even(t_out)
    are small but nonzero.
    """

    j_max: float
    t_out: float
    sigma_t: float
    n_bonds: int

    def odd_even(self, t: float) -> tuple[float, float]:
        """Values of the two ramp functions at time t."""
        u = t - 0.5 * self.t_out
        s = math.sqrt(2.0) * self.sigma_t
        j_odd = 0.5 * self.j_max * (1.0 + erf((u + 2.0 * self.sigma_t) / s))
        j_even = 0.5 * self.j_max * (1.0 - erf((u - 2.0 * self.sigma_t) / s))
        return j_odd, j_even

    def couplings(self, t: float) -> np.ndarray:
        """All N-1 nominal couplings at time t.

        Bond j (1-based) connects sites j and j+1; odd-numbered bonds
        occupy the even 0-based slots.
        """
        j_odd, j_even = self.odd_even(t)
        out = np.empty(self.n_bonds)
        out[0::2] = j_odd
        out[1::2] = j_even
        return out


@dataclass(frozen=True)
class CouplingSchedule:
    """Time-resolved nominal couplings J_j(t) on [0, t_out].

    Piecewise-constant schedules carry their segmentation; the smooth
    adiabatic schedule carries ramp parameters instead.
    """

    t_out: float
    segments: tuple[Segment, ...] = ()
    ramp: AdiabaticRamp | None = field(default=None)

    @property
    def is_piecewise(self) -> bool:
        return self.ramp is None

    def couplings_at(self, t: float) -> np.ndarray:
        """Nominal couplings at time t in [0, t_out]."""
        if not 0 <= t <= self.t_out * (1 + 1e-12):
            raise ValueError(f"t = {t} outside [0, {self.t_out}]")
        if self.ramp is not None:
            return self.ramp.couplings(t)
        elapsed = 0.0
        for seg in self.segments:
            elapsed += seg.duration
            if t <= elapsed:
                return seg.couplings.copy()
        return self.segments[-1].couplings.copy()


def swap_schedule(config: ChainConfig) -> CouplingSchedule:
    """N-1 back-to-back square pulses, each transferring one site.

    Pulse j drives only bond j at full strength j_max for a quarter
    period pi/(2 j_max), so each pulse has area pi/2 and acts as a SWAP
    on the excitation.  t_out = (N-1) pi / (2 j_max).
    """
    n = config.n_sites
    tau = 0.5 * math.pi / config.j_max
    segments = []
    for j in range(n - 1):
        couplings = np.zeros(n - 1)
        couplings[j] = config.j_max
        segments.append(Segment(duration=tau, couplings=couplings))
    return CouplingSchedule(t_out=tau * (n - 1), segments=tuple(segments))


def spin_coupling_profile(config: ChainConfig) -> tuple[np.ndarray, float]:
    """Static profile J_j = J0 sqrt(j (N-j)) and its prefactor J0.

    J0 is fixed so the largest coupling (at the chain center) equals
    j_max exactly: J0 = 2 j_max / N for even N, and
    J0 = 2 j_max / sqrt(N^2 - 1) for odd N.
    """
    n = config.n_sites
    if n % 2 == 0:
        j0 = 2.0 * config.j_max / n
    else:
        j0 = 2.0 * config.j_max / math.sqrt(n * n - 1.0)
    j = np.arange(1, n)
    return j0 * np.sqrt(j * (n - j)), j0


def spin_coupling_schedule(config: ChainConfig) -> CouplingSchedule:
    """The static profile held for a half revival, t_out = pi/(2 J0)."""
    couplings, j0 = spin_coupling_profile(config)
    t_out = 0.5 * math.pi / j0
    return CouplingSchedule(
        t_out=t_out,
        segments=(Segment(duration=t_out, couplings=couplings),),
    )


def adiabatic_schedule(config: ChainConfig, spec: ProtocolSpec) -> CouplingSchedule:
    """Counterintuitively ordered erf ramps over t_out = C N / j_max.

    Requires odd N: the transfer rides the zero-energy dark state,
    which has support on the odd sites and exists only for chains with
    an odd number of sites.
    """
    n = config.n_sites
    if n % 2 == 0:
        raise ValueError(
            f"adiabatic protocol needs an odd number of sites (got N={n}): "
            "the zero-energy dark state carrying the transfer exists only "
            "for odd N"
        )
    if n < 3:
        raise ValueError(f"adiabatic protocol needs N >= 3, got {n}")
    t_out = spec.adiabatic_c * n / config.j_max
    ramp = AdiabaticRamp(
        j_max=config.j_max,
        t_out=t_out,
        sigma_t=spec.adiabatic_sigma_ratio * t_out,
        n_bonds=n - 1,
    )
    return CouplingSchedule(t_out=t_out, ramp=ramp)


def schedule_for(config: ChainConfig, spec: ProtocolSpec) -> CouplingSchedule:
    """Build the schedule selected by spec.kind."""
    if spec.kind == SWAP:
        return swap_schedule(config)
    if spec.kind == SPIN_COUPLING:
        return spin_coupling_schedule(config)
    return adiabatic_schedule(config, spec)


def analytic_spin_coupling_amplitudes(config: ChainConfig, t: float) -> np.ndarray:
    """Closed-form amplitudes of the static spin-coupling chain.

    With the excitation starting on site 1,

        A_j(t) = sqrt(binom(N-1, j-1)) (i sin(J0 t))^(j-1) (cos(J0 t))^(N-j)

    which has unit norm for every t by the binomial theorem.  At
    t = pi/(2 J0) only site N survives with amplitude i^(N-1); for odd
    N this equals the arrival phase (-pi/2)(N-1) mod 2pi shared by all
    protocols.
    """
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    n = config.n_sites
    _, j0 = spin_coupling_profile(config)
    j = np.arange(1, n + 1)
    s = 1j * math.sin(j0 * t)
    c = math.cos(j0 * t)
    return np.sqrt(binom(n - 1, j - 1)) * s ** (j - 1) * c ** (n - j)


def dark_state(couplings: np.ndarray) -> np.ndarray:
    """Normalized zero-energy eigenstate of a zero-field odd chain.

    For an odd number of sites the tridiagonal Hamiltonian with h_j = 0
    has a null vector supported on the odd sites: the component on site
    2m+1 is proportional to

        (-1)^m (product of odd-numbered J below) (product of even-numbered J above).

    Scale invariance lets the couplings be normalized by their largest
    magnitude before taking products, which keeps the computation away
    from overflow.
    """
    couplings = np.asarray(couplings, dtype=float)
    n_bonds = len(couplings)
    if n_bonds % 2 != 0:
        raise ValueError(
            f"need an even number of couplings (odd number of sites), got {n_bonds}"
        )
    half = n_bonds // 2
    scale = np.max(np.abs(couplings))
    if scale == 0:
        raise ValueError("all couplings are zero")
    odd = couplings[0::2] / scale
    even = couplings[1::2] / scale
    # prefix[m] = product of the first m odd couplings,
    # suffix[m] = product of the even couplings from index m on.
    prefix = np.concatenate(([1.0], np.cumprod(odd)))
    suffix = np.concatenate((np.cumprod(even[::-1])[::-1], [1.0]))
    signs = (-1.0) ** np.arange(half + 1)
    components = signs * prefix * suffix
    norm = np.linalg.norm(components)
    if norm == 0:
        raise ValueError(
            "dark state undefined: every odd-site coupling product vanishes"
        )
    state = np.zeros(n_bonds + 1, dtype=complex)
    state[0::2] = components / norm
    return state
