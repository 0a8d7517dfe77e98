"""Spin-s operator matrices, axis eigenbases and extremal coherent states.

Conventions: hbar = 1, Condon-Shortley phases for the ladder operators,
z basis ordered by descending magnetic quantum number (index l holds m = s - l).
"""

from dataclasses import dataclass

import numpy as np

from .errors import ShapeError


@dataclass(frozen=True)
class SpinOperators:
    """The three spin components for a spin s = two_s / 2 particle."""

    two_s: int
    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray

    @property
    def dim(self) -> int:
        return self.two_s + 1


@dataclass(frozen=True)
class LocalState:
    """Normalized single-particle state in the z basis."""

    dim: int
    amplitudes: np.ndarray


def spin_matrices(two_s: int) -> SpinOperators:
    """Build sx, sy, sz for spin s = two_s / 2 from the ladder operators."""
    if not isinstance(two_s, (int, np.integer)) or two_s < 1:
        raise ShapeError(f"two_s must be a positive integer, got {two_s!r}")
    d = two_s + 1
    s = two_s / 2.0
    m = s - np.arange(d)  # descending: s, s-1, ..., -s
    # S+ |s, m> = sqrt(s(s+1) - m(m+1)) |s, m+1>; row index of m+1 is one above m
    raising = np.zeros((d, d), dtype=complex)
    for l in range(1, d):
        raising[l - 1, l] = np.sqrt(s * (s + 1) - m[l] * (m[l] + 1))
    lowering = raising.conj().T
    sx = (raising + lowering) / 2.0
    sy = (raising - lowering) / 2j
    sz = np.diag(m).astype(complex)
    return SpinOperators(two_s=int(two_s), sx=sx, sy=sy, sz=sz)


def axis_eigenbasis(two_s: int, axis: str) -> np.ndarray:
    """Unitary whose columns are eigenvectors of the requested spin component.

    Columns are ordered by descending eigenvalue (column l holds m = s - l)
    and each column's phase is fixed so its first nonzero entry is real
    positive, making the matrix deterministic.
    """
    ops = spin_matrices(two_s)
    if axis == "z":
        return np.eye(two_s + 1, dtype=complex)
    try:
        op = {"x": ops.sx, "y": ops.sy}[axis]
    except KeyError:
        raise ShapeError(f"axis must be one of x, y, z, got {axis!r}") from None
    evals, vecs = np.linalg.eigh(op)
    order = np.argsort(evals)[::-1]
    vecs = vecs[:, order]
    for col in range(vecs.shape[1]):
        v = vecs[:, col]
        idx = np.argmax(np.abs(v) > 1e-12)
        phase = v[idx] / abs(v[idx])
        vecs[:, col] = v / phase
    return vecs


def coherent_axis_state(two_s: int, axis: str, sign: str) -> LocalState:
    """Extremal eigenstate |+-s> along the given axis, in the z basis."""
    if sign not in ("+", "-"):
        raise ShapeError(f"sign must be '+' or '-', got {sign!r}")
    basis = axis_eigenbasis(two_s, axis)
    col = 0 if sign == "+" else two_s
    return LocalState(dim=two_s + 1, amplitudes=basis[:, col].copy())
