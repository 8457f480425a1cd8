"""Stage Hamiltonians of the two-stage Floquet protocol.

Stage 1 applies a global drive with flip imperfection on top of the Rydberg
interaction,

    H1 = sum_j (Omega + epsilon) sigma^x_j + H_int,

and stage 2 applies the interaction together with a linear Stark potential,

    H2 = H_int + F * sum_j j n_j              (site index j = 1 .. L).

H_int is the pairwise van der Waals interaction sum_{i<j} V / |i-j|^6 n_i n_j
restricted by the chosen kernel: NN keeps |i-j| < 2, NNN < 3, NNNN < 4 and ALL
keeps every pair.  H2 is diagonal in the z-basis and is kept as a vector; H1
is a dense real symmetric matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .exceptions import ResourceLimitError
from .hilbert import BasisConfig

KERNEL_VARIANTS = ("NN", "NNN", "NNNN", "ALL")

# dense 2^L x 2^L storage beyond this is not worth supporting
MAX_DENSE_SITES = 14


@dataclass(frozen=True)
class InteractionKernel:
    """Distance-truncated van der Waals pair couplings V / |i-j|^6."""

    variant: str
    v: float

    def __post_init__(self):
        if self.variant not in KERNEL_VARIANTS:
            raise ValueError(f"unknown kernel variant {self.variant!r}, expected one of {KERNEL_VARIANTS}")

    def includes(self, distance: int) -> bool:
        if distance < 1:
            return False
        if self.variant == "ALL":
            return True
        max_distance = {"NN": 1, "NNN": 2, "NNNN": 3}[self.variant]
        return distance <= max_distance

    def coupling(self, i: int, j: int) -> float:
        """Pair coupling V_ij; symmetric, zero on the diagonal."""
        d = abs(i - j)
        if d == 0 or not self.includes(d):
            return 0.0
        return self.v / d**6


@dataclass(frozen=True)
class SimulationParams:
    """All dimensionless knobs of one Floquet model instance.

    Rates (omega, epsilon, v, f) carry units of 1/time and the stage
    durations t1, t2 units of time; figures are labeled by the products
    omega*t1, epsilon*t1, v*t1, v*t2 and f*t2.
    """

    L: int
    omega: float = math.pi / 2
    epsilon: float = 0.0
    v: float = 0.0
    f: float = 0.0
    t1: float = 1.0
    t2: float = 10.0
    kernel: str = "NN"

    def __post_init__(self):
        if not isinstance(self.L, (int, np.integer)) or self.L < 1:
            raise ValueError(f"site count must be a positive integer, got {self.L!r}")
        for name in ("omega", "epsilon", "v", "f", "t1", "t2"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"parameter {name} must be finite, got {value!r}")
        if self.t1 <= 0 or self.t2 <= 0:
            raise ValueError(f"stage durations must be positive, got t1={self.t1}, t2={self.t2}")
        if self.kernel not in KERNEL_VARIANTS:
            raise ValueError(f"unknown kernel variant {self.kernel!r}, expected one of {KERNEL_VARIANTS}")

    @property
    def basis(self) -> BasisConfig:
        return BasisConfig(self.L)

    @property
    def dimension(self) -> int:
        return 1 << self.L

    @property
    def period(self) -> float:
        return self.t1 + self.t2

    @property
    def omega_t1(self) -> float:
        return self.omega * self.t1

    @property
    def epsilon_t1(self) -> float:
        return self.epsilon * self.t1

    @property
    def v_t1(self) -> float:
        return self.v * self.t1

    @property
    def v_t2(self) -> float:
        return self.v * self.t2

    @property
    def f_t2(self) -> float:
        return self.f * self.t2

    def interaction_kernel(self) -> InteractionKernel:
        return InteractionKernel(self.kernel, self.v)

    def with_f_t2(self, f_t2: float) -> "SimulationParams":
        return replace(self, f=f_t2 / self.t2)

    def dimensionless_groups(self) -> dict:
        return {
            "omega_t1": self.omega_t1,
            "epsilon_t1": self.epsilon_t1,
            "v_t1": self.v_t1,
            "v_t2": self.v_t2,
            "f_t2": self.f_t2,
        }


@dataclass(frozen=True)
class StageHamiltonians:
    """H1 as a dense real symmetric matrix, H2 as its z-basis diagonal."""

    h1: np.ndarray
    h2_diagonal: np.ndarray


def _guard_dimension(params: SimulationParams) -> None:
    if params.L > MAX_DENSE_SITES:
        raise ResourceLimitError(
            f"L={params.L} exceeds the dense-simulation guard of {MAX_DENSE_SITES} sites"
        )


def interaction_diagonal(params: SimulationParams) -> np.ndarray:
    """Diagonal of the pairwise interaction: d[b] = sum_{i<j} V_ij n_i(b) n_j(b).

    Equivalent to the symmetric form (1/2) sum over ordered pairs i != j;
    summing i < j once avoids double-counting bugs.
    """
    _guard_dimension(params)
    kernel = params.interaction_kernel()
    occ = params.basis.occupations()
    diag = np.zeros(params.dimension)
    for i in range(1, params.L + 1):
        for j in range(i + 1, params.L + 1):
            coupling = kernel.coupling(i, j)
            if coupling != 0.0:
                diag += coupling * occ[i - 1] * occ[j - 1]
    return diag


def stark_diagonal(params: SimulationParams) -> np.ndarray:
    """Diagonal of the linear Stark potential F * sum_j j n_j, j starting at 1.

    The site index convention changes quasi-energies (it is not a global
    offset), so it is fixed here once and for all.
    """
    _guard_dimension(params)
    occ = params.basis.occupations()
    sites = np.arange(1, params.L + 1, dtype=float)
    return params.f * (sites[:, None] * occ).sum(axis=0)


def build_h1(params: SimulationParams) -> np.ndarray:
    """Dense stage-1 Hamiltonian: (Omega+epsilon) on single-bit-flip pairs plus
    the interaction diagonal.  Real symmetric by construction."""
    _guard_dimension(params)
    dim = params.dimension
    h1 = np.zeros((dim, dim))
    drive = params.omega + params.epsilon
    b = np.arange(dim, dtype=np.int64)
    for k in range(params.L):
        h1[b ^ (1 << k), b] = drive
    h1[b, b] = interaction_diagonal(params)
    return h1


def build_h2_diagonal(params: SimulationParams) -> np.ndarray:
    """Stage-2 diagonal: interaction plus Stark potential."""
    return interaction_diagonal(params) + stark_diagonal(params)


def build_stage_hamiltonians(params: SimulationParams) -> StageHamiltonians:
    return StageHamiltonians(h1=build_h1(params), h2_diagonal=build_h2_diagonal(params))
