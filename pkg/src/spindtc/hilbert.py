"""Joint Hilbert space of N_sat satellite qubits plus one central spin.

Index layout: global index = k_sat * (two_s + 1) + l_c. The satellite
bitstring k_sat reads site 0 as the least significant bit, bit = 1 means
z-down; l_c in {0..two_s} labels central S^z levels in descending order
(l_c = 0 is m = +s). The central index is the fastest-varying one, so the
interaction phase per amplitude follows from popcount and l_c alone.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ShapeError, CapacityError
from .spin_algebra import LocalState, coherent_axis_state

# Largest state vector we are willing to allocate (amplitude count).
MAX_DIMENSION = 1 << 26


@dataclass(frozen=True)
class SystemShape:
    """(number of satellite spin-1/2s, 2s of the central spin)."""

    n_sat: int
    two_s: int

    def __post_init__(self):
        if self.n_sat < 1 or self.two_s < 1:
            raise ShapeError(f"need n_sat >= 1 and two_s >= 1, got {self}")
        if self.dim > MAX_DIMENSION:
            raise CapacityError(
                f"dimension {2**self.n_sat}*{self.two_s + 1} exceeds budget {MAX_DIMENSION}"
            )

    @property
    def central_dim(self) -> int:
        return self.two_s + 1

    @property
    def dim(self) -> int:
        return (1 << self.n_sat) * (self.two_s + 1)

    @property
    def s(self) -> float:
        return self.two_s / 2.0


@dataclass
class PureState:
    """Complex amplitude vector over the joint satellite (x) central space."""

    shape: SystemShape
    amplitudes: np.ndarray

    def copy(self) -> "PureState":
        return PureState(self.shape, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True)
class DensityMatrix:
    dim: int
    entries: np.ndarray


def basis_index(shape: SystemShape, k_sat: int, l_c: int) -> int:
    """Encode (satellite bitstring, central level) into a global index."""
    if not (0 <= k_sat < (1 << shape.n_sat)) or not (0 <= l_c <= shape.two_s):
        raise ShapeError(f"(k_sat={k_sat}, l_c={l_c}) out of range for {shape}")
    return k_sat * shape.central_dim + l_c


def split_index(shape: SystemShape, i: int) -> tuple[int, int]:
    """Decode a global index into (satellite bitstring, central level)."""
    if not (0 <= i < shape.dim):
        raise ShapeError(f"index {i} out of range for {shape}")
    return divmod(i, shape.central_dim)


def product_state(shape: SystemShape, sat_locals: list[LocalState],
                  central_local: LocalState) -> PureState:
    """Tensor product of per-site states in the declared index layout."""
    if len(sat_locals) != shape.n_sat:
        raise ShapeError(f"expected {shape.n_sat} satellite states, got {len(sat_locals)}")
    if central_local.dim != shape.central_dim:
        raise ShapeError(
            f"central state has dim {central_local.dim}, expected {shape.central_dim}")
    amps = central_local.amplitudes.astype(complex)
    # site 0 is the least significant bit, so it is the innermost kron factor
    for site in range(shape.n_sat):
        loc = sat_locals[site]
        if loc.dim != 2:
            raise ShapeError(f"satellite state at site {site} has dim {loc.dim}")
        amps = np.kron(loc.amplitudes.astype(complex), amps)
    amps = amps / np.linalg.norm(amps)
    return PureState(shape, amps)


def x_polarized_state(shape: SystemShape) -> PureState:
    """All satellites in |+x>, central spin in |+s>^x."""
    plus_x = coherent_axis_state(1, "x", "+")
    central = coherent_axis_state(shape.two_s, "x", "+")
    return product_state(shape, [plus_x] * shape.n_sat, central)


def inner(a: PureState, b: PureState) -> complex:
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch: {a.shape} vs {b.shape}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a: PureState, b: PureState) -> float:
    return float(abs(inner(a, b)) ** 2)


def reduced_central_density(state: PureState) -> DensityMatrix:
    """Partial trace over all satellite indices."""
    d = state.shape.central_dim
    mat = state.amplitudes.reshape(-1, d)
    rho = mat.T @ mat.conj()
    return DensityMatrix(dim=d, entries=rho)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """-sum p ln p over the spectrum (natural log, tiny eigenvalues dropped)."""
    if not np.allclose(rho.entries, rho.entries.conj().T, atol=1e-10):
        raise ShapeError("density matrix is not Hermitian")
    p = np.linalg.eigvalsh(rho.entries)
    p = p[p > 1e-14]
    return float(-np.sum(p * np.log(p)))
