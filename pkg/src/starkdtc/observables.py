"""Stroboscopic autocorrelator, its subharmonic spectrum and the DTC lifetime.

The order diagnostic is the site-averaged two-time correlator

    C(nT) = (1/L) sum_j <psi0| sigma^z_j (U_F^n)^dag sigma^z_j U_F^n |psi0>,

sampled once per drive period.  Its discrete Fourier transform over cycles
1..N (N even) is reported as |X(omega_k)| / N so a perfect period-doubled
response has subharmonic amplitude A_pi = 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .exceptions import NumericError
from .floquet import FloquetPropagator
from .hamiltonian import SimulationParams
from .hilbert import StateVector, sigma_z_stack

NORM_DRIFT_TOL = 1e-8
REALNESS_TOL = 1e-10
REVERSAL_ZERO_ATOL = 1e-12
SPECTRAL_CROSSCHECK_TOL = 1e-8
SPECTRAL_EVOLUTION_THRESHOLD = 10_000


@dataclass(frozen=True)
class AutocorrelatorSeries:
    """C(nT) samples for n = 0 .. n_cycles; C[0] = 1 by construction."""

    values: np.ndarray
    n_cycles: int
    params: Optional[SimulationParams]
    initial_state: str = ""

    def __post_init__(self):
        if self.values.shape != (self.n_cycles + 1,):
            raise ValueError(
                f"series of {self.values.shape} samples inconsistent with n_cycles={self.n_cycles}"
            )

    def rows(self):
        return list(enumerate(self.values.tolist()))


@dataclass(frozen=True)
class SpectralResult:
    """Normalized DFT magnitudes |X(omega)|/N on omega_k = 2 pi k / N."""

    frequencies: np.ndarray
    magnitudes: np.ndarray
    a_pi: float

    def rows(self):
        return list(zip(self.frequencies.tolist(), self.magnitudes.tolist()))


@dataclass(frozen=True)
class LifetimeResult:
    """Reversal analysis of a stroboscopic series.

    `first_reversal` is the first cycle n >= 3 whose parity subsequence sign
    (even n against sign C[2], odd n against sign C[1]) is reversed, counting
    |C[n]| below `zero_atol` as reversed.  `n_c` is the DTC lifetime: the
    cycle of deepest reversed amplitude reached after `first_reversal`, i.e.
    the clearest point of the subharmonic phase slip.  On a slowly beating
    envelope the raw first flip lands on a node where the amplitude is near
    zero, so it is reported separately.  Both are None when no reversal
    occurs within n_max.
    """

    n_max: int
    first_reversal: Optional[int]
    n_c: Optional[int]
    reversal_depth: Optional[float]

    @property
    def observed(self) -> bool:
        return self.n_c is not None

    def record(self) -> dict:
        return {
            "n_c": self.n_c if self.observed else "not_observed",
            "first_reversal": self.first_reversal,
            "reversal_depth": self.reversal_depth,
            "n_max": self.n_max,
        }


def _check_norm(psi: np.ndarray) -> None:
    drift = abs(np.linalg.norm(psi) - 1.0)
    if drift > NORM_DRIFT_TOL:
        raise NumericError(f"state norm drifted by {drift:.2e} during evolution")


def _spectral_evolver(prop: FloquetPropagator, psi0: np.ndarray):
    """psi(n) via phase powering in the Floquet eigenbasis."""
    spectrum = prop.spectrum()
    coeff = spectrum.eigenstates.conj().T @ psi0
    eigenvalues = spectrum.eigenvalues()

    def step(n: int) -> np.ndarray:
        return spectrum.eigenstates @ (eigenvalues**n * coeff)

    return step


def autocorrelator_series(
    prop: FloquetPropagator,
    psi0: StateVector,
    n_cycles: int,
    method: str = "auto",
    evolution: str = "matvec",
) -> AutocorrelatorSeries:
    """Stroboscopic autocorrelator over n_cycles Floquet periods.

    `method` picks the evaluation path: "fast" evolves a single vector and is
    valid only for z-product initial states (sigma^z psi0 = s_j psi0),
    "general" co-evolves sigma^z_j psi0 for every site, "auto" selects by
    inspecting psi0.  `evolution` is "matvec" (repeated dense products) or
    "spectral" (diagonalize U_F once and power the phases), the latter
    cross-validated against matvec over the first 100 cycles.
    """
    if n_cycles < 1:
        raise ValueError(f"cycle count must be >= 1, got {n_cycles}")
    if psi0.dimension != prop.dimension:
        raise ValueError(
            f"state dimension {psi0.dimension} does not match propagator dimension {prop.dimension}"
        )
    if method not in ("auto", "fast", "general"):
        raise ValueError(f"unknown method {method!r}")
    if evolution not in ("matvec", "spectral"):
        raise ValueError(f"unknown evolution {evolution!r}")

    product_index = psi0.product_state_index()
    if method == "auto":
        method = "fast" if product_index is not None else "general"
    if method == "fast" and product_index is None:
        raise ValueError("fast path requires a z-product initial state")

    basis = psi0.basis
    sz = sigma_z_stack(basis)

    if method == "fast":
        values = _series_fast(prop, psi0, sz, product_index, n_cycles, evolution)
    else:
        values = _series_general(prop, psi0, sz, n_cycles)

    if not (np.abs(values) <= 1.0 + 1e-9).all():
        raise NumericError("autocorrelator magnitude exceeded 1 beyond tolerance")
    return AutocorrelatorSeries(
        values=values,
        n_cycles=n_cycles,
        params=prop.params,
        initial_state=psi0.label or "custom",
    )


def _series_fast(prop, psi0, sz, product_index, n_cycles, evolution):
    signs = sz[:, product_index]
    values = np.empty(n_cycles + 1)
    values[0] = 1.0

    if evolution == "spectral":
        step = _spectral_evolver(prop, psi0.amplitudes)
        check_upto = min(100, n_cycles)
        psi_check = psi0.amplitudes.copy()
        for n in range(1, n_cycles + 1):
            psi = step(n)
            _check_norm(psi)
            values[n] = signs @ (sz @ (np.abs(psi) ** 2)) / len(signs)
            if n <= check_upto:
                psi_check = prop.apply(psi_check)
                ref = signs @ (sz @ (np.abs(psi_check) ** 2)) / len(signs)
                if abs(ref - values[n]) > SPECTRAL_CROSSCHECK_TOL:
                    raise NumericError(
                        f"spectral evolution deviates from matvec by {abs(ref - values[n]):.2e} at cycle {n}"
                    )
        return values

    psi = psi0.amplitudes.copy()
    for n in range(1, n_cycles + 1):
        psi = prop.apply(psi)
        _check_norm(psi)
        values[n] = signs @ (sz @ (np.abs(psi) ** 2)) / len(signs)
    return values


def _series_general(prop, psi0, sz, n_cycles):
    length = sz.shape[0]
    psi = psi0.amplitudes.copy()
    # chi_j(n) = U^n sigma^z_j psi0, co-evolved as columns of one matrix
    chi = (sz * psi0.amplitudes).T.copy()
    values = np.empty(n_cycles + 1)
    values[0] = 1.0
    for n in range(1, n_cycles + 1):
        psi = prop.apply(psi)
        chi = prop.apply(chi)
        _check_norm(psi)
        correlator = np.einsum("jb,bj->", sz, chi.conj() * psi[:, None]) / length
        if abs(correlator.imag) > REALNESS_TOL:
            raise NumericError(
                f"autocorrelator acquired imaginary part {correlator.imag:.2e} at cycle {n}"
            )
        values[n] = correlator.real
    return values


def fourier_spectrum(series: AutocorrelatorSeries) -> SpectralResult:
    """DFT of C over cycles 1..N: X(omega_k) = sum_n C[n] exp(-i omega_k n).

    N must be even so that omega = pi sits exactly on the frequency grid;
    magnitudes are |X|/N and a_pi is the grid entry at k = N/2.
    """
    n_cycles = series.n_cycles
    if n_cycles % 2 != 0:
        raise ValueError(f"cycle count must be even for an exact omega=pi bin, got {n_cycles}")
    samples = series.values[1:]
    k = np.arange(n_cycles)
    frequencies = 2.0 * np.pi * k / n_cycles
    n = np.arange(1, n_cycles + 1)
    transform = np.exp(-1j * np.outer(frequencies, n)) @ samples
    magnitudes = np.abs(transform) / n_cycles
    return SpectralResult(
        frequencies=frequencies,
        magnitudes=magnitudes,
        a_pi=float(magnitudes[n_cycles // 2]),
    )


def subharmonic_amplitude(series: AutocorrelatorSeries) -> float:
    """A_pi shortcut: single-bin evaluation at omega = pi."""
    if series.n_cycles % 2 != 0:
        raise ValueError(f"cycle count must be even for an exact omega=pi bin, got {series.n_cycles}")
    n = np.arange(1, series.n_cycles + 1)
    bin_value = np.sum(series.values[1:] * np.exp(-1j * np.pi * n))
    return float(np.abs(bin_value) / series.n_cycles)


def reversal_analysis(values: np.ndarray, zero_atol: float = REVERSAL_ZERO_ATOL) -> LifetimeResult:
    """Sign-reversal analysis of a stroboscopic series C[0..n_max].

    Reference signs are taken from C[1] (odd cycles) and C[2] (even cycles)
    so non-polarized initial states are handled uniformly; exact zeros count
    as reversed.
    """
    n_max = values.size - 1
    if n_max < 2:
        raise ValueError(f"need at least 2 cycles for reversal analysis, got {n_max}")
    n = np.arange(n_max + 1)
    reference = np.where(n % 2 == 0, np.sign(values[2]), np.sign(values[1]))
    aligned = reference * values
    reversed_mask = (aligned < 0) | (np.abs(values) < zero_atol)
    reversed_mask[:3] = False
    hits = np.flatnonzero(reversed_mask)
    if hits.size == 0:
        return LifetimeResult(n_max=n_max, first_reversal=None, n_c=None, reversal_depth=None)
    first = int(hits[0])
    n_c = first + int(np.argmin(aligned[first:]))
    return LifetimeResult(
        n_max=n_max,
        first_reversal=first,
        n_c=n_c,
        reversal_depth=float(-aligned[n_c]),
    )


def lifetime(
    prop: FloquetPropagator,
    psi0: StateVector,
    n_max: int,
    zero_atol: float = REVERSAL_ZERO_ATOL,
    evolution: str = "auto",
) -> LifetimeResult:
    """DTC lifetime from the autocorrelator over up to n_max cycles.

    evolution="auto" switches to spectral phase powering beyond
    10^4 cycles (one diagonalization, then O(dim) per cycle).
    """
    if n_max < 2:
        raise ValueError(f"cycle cap must be >= 2, got {n_max}")
    if evolution == "auto":
        evolution = "spectral" if (
            n_max > SPECTRAL_EVOLUTION_THRESHOLD and prop.has_stage_factorization
        ) else "matvec"
    series = autocorrelator_series(prop, psi0, n_max, method="auto", evolution=evolution)
    return reversal_analysis(series.values, zero_atol=zero_atol)
