"""Computational basis, elementary spin operators and initial states.

A chain of L two-level atoms is encoded on integers 0 .. 2^L - 1: site
j (1-based) occupies bit j-1, bit value 1 is the Rydberg state |r> and
0 the ground state |g>.  With that choice sigma^z_j = |r><r| - |g><g|
has eigenvalue +1 on occupied sites and occupation extraction is a
shift-and-mask.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

NORM_TOL = 1e-10
# amplitude lists from config files may carry rounded-off entries
LOAD_NORM_TOL = 1e-6


@dataclass(frozen=True)
class BasisConfig:
    """z-basis of an L-site chain; dimension 2^L."""

    L: int

    def __post_init__(self):
        if not isinstance(self.L, (int, np.integer)) or self.L < 1:
            raise ValueError(f"site count must be a positive integer, got {self.L!r}")

    @property
    def dimension(self) -> int:
        return 1 << self.L

    def occupations(self) -> np.ndarray:
        """(L, 2^L) array with n_j(b) = bit j-1 of b, rows indexed by j-1."""
        b = np.arange(self.dimension, dtype=np.int64)
        return np.stack([(b >> (j - 1)) & 1 for j in range(1, self.L + 1)]).astype(float)

    def index_to_bits(self, index: int) -> str:
        """Bit string (leftmost character = site 1) for a basis integer."""
        if not 0 <= index < self.dimension:
            raise ValueError(f"basis index {index} out of range for L={self.L}")
        return "".join("1" if (index >> (j - 1)) & 1 else "0" for j in range(1, self.L + 1))


@dataclass(frozen=True)
class StateVector:
    """Normalized complex amplitudes over the z-basis of `basis`."""

    amplitudes: np.ndarray
    basis: BasisConfig
    label: str = field(default="", compare=False)

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.basis.dimension,):
            raise ValueError(
                f"amplitude vector has shape {amps.shape}, expected ({self.basis.dimension},)"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state vector norm {norm!r} deviates from 1 beyond {NORM_TOL}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dimension(self) -> int:
        return self.basis.dimension

    def product_state_index(self) -> int | None:
        """Basis index if this is a z-product state, else None."""
        nz = np.flatnonzero(self.amplitudes)
        if nz.size == 1:
            return int(nz[0])
        return None


def _check_site(j: int, basis: BasisConfig) -> None:
    if not 1 <= j <= basis.L:
        raise ValueError(f"site index {j} out of range 1..{basis.L}")


def z_product_state(bits: str, basis: BasisConfig) -> StateVector:
    """Computational basis state from a bit string, leftmost character = site 1.

    '1' puts the site in the Rydberg state |r>, '0' in the ground state |g>.
    """
    if len(bits) != basis.L:
        raise ValueError(f"bit string length {len(bits)} does not match L={basis.L}")
    if any(ch not in "01" for ch in bits):
        raise ValueError(f"bit string must contain only 0/1 characters, got {bits!r}")
    index = sum(1 << (j - 1) for j, ch in enumerate(bits, start=1) if ch == "1")
    amps = np.zeros(basis.dimension, dtype=complex)
    amps[index] = 1.0
    return StateVector(amps, basis, label=bits)


def state_from_amplitudes(triples, basis: BasisConfig) -> StateVector:
    """State from (basis-index, real, imag) triples, e.g. entangled config input.

    The vector is renormalized if its norm is within 1e-6 of one and rejected
    otherwise; duplicate indices are rejected.
    """
    amps = np.zeros(basis.dimension, dtype=complex)
    seen = set()
    for entry in triples:
        try:
            index, re, im = entry
        except (TypeError, ValueError):
            raise ValueError(f"amplitude entry {entry!r} is not an (index, real, imag) triple")
        index = int(index)
        if not 0 <= index < basis.dimension:
            raise ValueError(f"amplitude index {index} out of range for L={basis.L}")
        if index in seen:
            raise ValueError(f"duplicate amplitude index {index}")
        seen.add(index)
        amps[index] = float(re) + 1j * float(im)
    norm = np.linalg.norm(amps)
    if abs(norm - 1.0) > LOAD_NORM_TOL:
        raise ValueError(f"amplitude list norm {norm!r} deviates from 1 beyond {LOAD_NORM_TOL}")
    return StateVector(amps / norm, basis, label="amplitudes")


def occupation_diagonal(j: int, basis: BasisConfig) -> np.ndarray:
    """Diagonal of n_j = |r>_j<r|: d[b] = bit j-1 of b."""
    _check_site(j, basis)
    b = np.arange(basis.dimension, dtype=np.int64)
    return ((b >> (j - 1)) & 1).astype(float)


def sigma_z_diagonal(j: int, basis: BasisConfig) -> np.ndarray:
    """Diagonal of sigma^z_j = |r>_j<r| - |g>_j<g| = 2 n_j - 1."""
    return 2.0 * occupation_diagonal(j, basis) - 1.0


def sigma_z_stack(basis: BasisConfig) -> np.ndarray:
    """(L, 2^L) array of all sigma^z_j diagonals."""
    return 2.0 * basis.occupations() - 1.0


def sigma_x_expectation(state: StateVector, j: int) -> float:
    """<psi| sigma^x_j |psi>, pairing amplitudes that differ only in bit j-1."""
    _check_site(j, state.basis)
    flipped = np.arange(state.dimension, dtype=np.int64) ^ (1 << (j - 1))
    value = np.vdot(state.amplitudes, state.amplitudes[flipped])
    return float(value.real)
