"""Core types for single-excitation dynamics on a finite XX chain.

A single excitation on an N-site chain lives in an N-dimensional space
spanned by the site states |j>.  There the Hamiltonian is the real
symmetric tridiagonal matrix

    H[j, j]   = h_j          (on-site energy, local field)
    H[j, j+1] = -J_j         (exchange coupling between sites j and j+1)

with hbar = 1.  Couplings and fields are measured in units of the cap
j_max, times in units of 1/j_max.  The minus sign on the off-diagonal
is part of the phase bookkeeping: the arrival phase phi0 compensated by
``protocol_phase`` assumes exactly this convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

__all__ = [
    "ChainConfig",
    "SingleExcitationHamiltonian",
    "TransferResult",
    "build_hamiltonian",
    "spectrum",
    "eigensystem",
    "state_fidelity",
    "mean_fidelity",
    "mean_fidelity_array",
    "protocol_phase",
    "wrap_phase",
    "phase_distance",
    "transfer_result",
]

_NORM_TOL = 1e-9


@dataclass(frozen=True)
class ChainConfig:
    """Chain length and the hardware cap on coupling strength.

    j_max sets the unit of energy and of inverse time; every schedule
    produced from this config keeps |J_j(t)| <= j_max.
    """

    n_sites: int
    j_max: float = 1.0

    def __post_init__(self) -> None:
        if self.n_sites < 2:
            raise ValueError(f"n_sites must be at least 2, got {self.n_sites}")
        if not self.j_max > 0:
            raise ValueError(f"j_max must be positive, got {self.j_max}")


@dataclass(frozen=True)
class SingleExcitationHamiltonian:
    """Tridiagonal Hamiltonian: diagonal h_j, off-diagonal -J_j."""

    onsite: np.ndarray
    couplings: np.ndarray

    @property
    def n_sites(self) -> int:
        return len(self.onsite)

    def matrix(self) -> np.ndarray:
        """Dense (N, N) representation."""
        m = np.diag(self.onsite.astype(float))
        off = -self.couplings
        m[np.arange(self.n_sites - 1), np.arange(1, self.n_sites)] = off
        m[np.arange(1, self.n_sites), np.arange(self.n_sites - 1)] = off
        return m


@dataclass(frozen=True)
class TransferResult:
    """Endpoint amplitude of one run and the figures of merit built from it."""

    a_n: complex
    probability: float
    phase: float
    fidelity: float


def build_hamiltonian(
    config: ChainConfig,
    onsite: np.ndarray,
    couplings: np.ndarray,
) -> SingleExcitationHamiltonian:
    """Assemble the single-excitation Hamiltonian from fields and couplings.

    Args:
        config: chain dimensions.
        onsite: N on-site energies h_j.
        couplings: N-1 exchange couplings J_j (entered as -J_j on the
            off-diagonal).
    """
    onsite = np.asarray(onsite, dtype=float)
    couplings = np.asarray(couplings, dtype=float)
    n = config.n_sites
    if onsite.shape != (n,):
        raise ValueError(f"expected {n} on-site energies, got shape {onsite.shape}")
    if couplings.shape != (n - 1,):
        raise ValueError(
            f"expected {n - 1} couplings, got shape {couplings.shape}"
        )
    return SingleExcitationHamiltonian(onsite=onsite, couplings=couplings)


def spectrum(h: SingleExcitationHamiltonian) -> np.ndarray:
    """Eigenvalues of the tridiagonal matrix, ascending."""
    return eigh_tridiagonal(h.onsite, -h.couplings, eigvals_only=True)


def eigensystem(h: SingleExcitationHamiltonian) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvector columns."""
    return eigh_tridiagonal(h.onsite, -h.couplings)


def wrap_phase(x: float) -> float:
    """Reduce an angle to the interval (-pi, pi]."""
    r = math.remainder(x, 2.0 * math.pi)
    if r == -math.pi:
        return math.pi
    return r


def phase_distance(a: float, b: float) -> float:
    """Circular distance between two angles, in [0, pi]."""
    return abs(wrap_phase(a - b))


def protocol_phase(n_sites: int) -> float:
    """Arrival phase phi0 = -(pi/2)(N-1), reduced to (-pi, pi].

    All three transfer protocols deliver the excitation with this same
    phase, so it is the value compensated before computing fidelities.
    """
    if n_sites < 2:
        raise ValueError(f"n_sites must be at least 2, got {n_sites}")
    return wrap_phase(-0.5 * math.pi * (n_sites - 1))


def state_fidelity(alpha: complex, beta: complex, a_n: complex) -> float:
    """Transfer fidelity for a specific sent qubit alpha|0> + beta|1>.

    F_psi = |alpha|^2 + |beta|^2 (1 - 2|alpha|^2) |A_N|^2
            + 2 |alpha|^2 |beta|^2 |A_N| cos(phi)

    with phi = arg(A_N).  The caller is responsible for any phase
    compensation, i.e. pass a_n already rotated by -phi0 if the
    protocol phase is known.
    """
    pa = abs(alpha) ** 2
    pb = abs(beta) ** 2
    if abs(pa + pb - 1.0) > _NORM_TOL:
        raise ValueError(f"qubit state not normalized: |alpha|^2 + |beta|^2 = {pa + pb}")
    r = abs(a_n)
    phi = math.atan2(a_n.imag, a_n.real)
    return pa + pb * (1.0 - 2.0 * pa) * r * r + 2.0 * pa * pb * r * math.cos(phi)


def mean_fidelity(a_n: complex, phi0: float) -> float:
    """Fidelity averaged uniformly over all sent qubit states.

    F = 1/2 + |A_N|^2 / 6 + |A_N| cos(phi - phi0) / 3

    phi0 is the known protocol phase, assumed compensated at readout.
    |A_N| marginally above 1 (roundoff) is clamped; larger excesses are
    rejected.
    """
    r = abs(a_n)
    if r > 1.0 + _NORM_TOL:
        raise ValueError(f"|A_N| = {r} exceeds 1 beyond tolerance")
    r = min(r, 1.0)
    phi = math.atan2(a_n.imag, a_n.real)
    return 0.5 + r * r / 6.0 + r * math.cos(phi - phi0) / 3.0


def mean_fidelity_array(a_n: np.ndarray, phi0: float) -> np.ndarray:
    """Vectorized ``mean_fidelity`` over an array of endpoint amplitudes."""
    a_n = np.asarray(a_n, dtype=complex)
    r = np.abs(a_n)
    if np.any(r > 1.0 + _NORM_TOL):
        raise ValueError(f"largest |A_N| = {r.max()} exceeds 1 beyond tolerance")
    r = np.minimum(r, 1.0)
    return 0.5 + r * r / 6.0 + r * np.cos(np.angle(a_n) - phi0) / 3.0


def transfer_result(a_n: complex, phi0: float) -> TransferResult:
    """Bundle amplitude, probability, phase, and mean fidelity."""
    a_n = complex(a_n)
    fidelity = mean_fidelity(a_n, phi0)
    return TransferResult(
        a_n=a_n,
        probability=min(abs(a_n) ** 2, 1.0),
        phase=math.atan2(a_n.imag, a_n.real),
        fidelity=fidelity,
    )
